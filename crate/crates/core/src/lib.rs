//! Knowledge-graph grounding by free energy.
//!
//! A candidate entity is scored by how far it lies from the entities already
//! grounded in context (its geometric surprise) plus how irregular the chain
//! of relations leading to it is (a compression estimate of its complexity):
//!
//! ```text
//! F(e | C) = S_geo(e | C) + lambda * K(path from C to e)
//! ```
//!
//! Lower `F` means a more plausible grounding.
//!
//! ```
//! use kg_surprise::{parse_tsv, rank_candidates, Context, ScoringParams, RankingMode};
//!
//! let tsv = "Canada\thasLeader\tTrudeau\n\
//!            Canada\thasLeader\tHarper\n\
//!            Trudeau\tholdsPosition\tPrimeMinister\n\
//!            Biden\n";
//! let graph = parse_tsv(tsv.as_bytes()).unwrap();
//! let context = Context::from_labels(&graph, &["Canada"]).unwrap();
//! let candidates: Vec<_> = ["Biden", "Harper", "PrimeMinister"]
//!     .iter()
//!     .map(|l| graph.require_entity(l).unwrap())
//!     .collect();
//! let params = ScoringParams::new(5.0, 1.0, RankingMode::Pragmatic).unwrap();
//!
//! let ranked = rank_candidates(&graph, &context, &candidates, params).unwrap();
//! let order: Vec<_> = ranked.iter().map(|c| graph.entity_label(c.entity)).collect();
//! assert_eq!(order, ["Harper", "PrimeMinister", "Biden"]);
//! ```
//!
//! The guide under `book/` walks through each piece; its code blocks are
//! compiled and run as doctests of this crate.

pub mod cli;
pub mod complexity;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod scoring;
pub mod traversal;

#[cfg(test)]
mod testutil;

pub use complexity::{
    build_relation_corpus, encode_path, kolmogorov_estimate, lz77_compress, lz77_decompress,
    ComplexityEstimate, ComplexityEstimator, EncodedPath, Lz77, LzToken,
};
pub use error::{Error, Result};
pub use graph::{EntityId, GraphBuilder, KnowledgeGraph, RelationId, Triple};
pub use ingest::{parse_ntriples, parse_tsv, write_tsv, DiagnosticKind, GraphFormat, ParseDiagnostic};
pub use scoring::{
    epistemic_rank, free_energy, rank_candidates, score_entity, RankingMode, ScoreCard, Scorer,
    ScoringParams,
};
pub use traversal::{
    diameter, geometric_surprise, multi_source_bfs, shortest_relation_path, suggested_alpha,
    Context, DistanceMap, RelationPath,
};

/// Chapters of the guide, compiled so their examples stay in sync.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub struct Graphs;
    #[doc = include_str!("../../../book/src/surprise.md")]
    pub struct Surprise;
    #[doc = include_str!("../../../book/src/complexity.md")]
    pub struct Complexity;
    #[doc = include_str!("../../../book/src/free-energy.md")]
    pub struct FreeEnergy;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
