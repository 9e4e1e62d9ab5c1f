//! Free-energy scoring and candidate ranking.
//!
//! `F = S_geo + lambda * K`, where `S_geo` is the hop count from the context
//! (or `alpha` when unreachable) and `K` the conditional compression
//! complexity of the relation path. Unreachable targets get `K = 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::complexity::{encode_path, ComplexityEstimate, ComplexityEstimator};
use crate::error::{Error, Result};
use crate::graph::{EntityId, KnowledgeGraph};
use crate::traversal::{
    diameter, geometric_surprise, multi_source_bfs, shortest_relation_path, Context,
    DistanceMap, RelationPath,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankingMode {
    /// Lowest free energy first.
    #[default]
    Pragmatic,
    /// Farthest reachable entity first; unreachable ones last.
    Epistemic,
}

impl fmt::Display for RankingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankingMode::Pragmatic => "pragmatic",
            RankingMode::Epistemic => "epistemic",
        })
    }
}

impl FromStr for RankingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pragmatic" => Ok(RankingMode::Pragmatic),
            "epistemic" => Ok(RankingMode::Epistemic),
            other => Err(format!("unknown mode `{other}` (expected pragmatic or epistemic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoringParams {
    pub alpha: f64,
    pub lambda: f64,
    pub mode: RankingMode,
}

impl ScoringParams {
    pub fn new(alpha: f64, lambda: f64, mode: RankingMode) -> Result<Self> {
        let params = ScoringParams { alpha, lambda, mode };
        params.validate()?;
        Ok(params)
    }

    /// `lambda = 1`, `alpha = diameter + 1`, pragmatic ranking.
    pub fn for_graph(graph: &KnowledgeGraph) -> Self {
        ScoringParams {
            alpha: f64::from(diameter(graph)) + 1.0,
            lambda: 1.0,
            mode: RankingMode::Pragmatic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidLambda(self.lambda));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCard {
    pub entity: EntityId,
    /// `None` when unreachable from the context.
    pub distance: Option<u32>,
    pub s_geo: f64,
    pub k: f64,
    pub f: f64,
    pub path: Option<RelationPath>,
}

/// `s_geo + lambda * k`.
pub fn free_energy(s_geo: f64, k: f64, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(s_geo + lambda * k)
}

/// Scores any number of candidates against one context.
///
/// Holds the BFS result and the complexity estimator, so each candidate costs
/// a parent walk plus one conditional compression of its path.
#[derive(Debug, Clone)]
pub struct Scorer<'g> {
    graph: &'g KnowledgeGraph,
    distances: DistanceMap,
    estimator: ComplexityEstimator,
    params: ScoringParams,
}

impl<'g> Scorer<'g> {
    pub fn new(graph: &'g KnowledgeGraph, context: &Context, params: ScoringParams) -> Result<Self> {
        Self::with_estimator(graph, context, params, ComplexityEstimator::for_graph(graph))
    }

    /// Reuses an estimator built for this graph, e.g. across many contexts.
    pub fn with_estimator(
        graph: &'g KnowledgeGraph,
        context: &Context,
        params: ScoringParams,
        estimator: ComplexityEstimator,
    ) -> Result<Self> {
        params.validate()?;
        let distances = multi_source_bfs(graph, context)?;
        Ok(Scorer {
            graph,
            distances,
            estimator,
            params,
        })
    }

    pub fn distances(&self) -> &DistanceMap {
        &self.distances
    }

    pub fn params(&self) -> &ScoringParams {
        &self.params
    }

    pub fn score(&self, entity: EntityId) -> Result<ScoreCard> {
        self.graph.check_entity(entity)?;
        let s_geo = geometric_surprise(&self.distances, entity, self.params.alpha)?;
        let path = shortest_relation_path(self.graph, &self.distances, entity)?;
        let estimate = match &path {
            Some(p) => self.estimator.estimate(&encode_path(p, self.graph)?),
            None => ComplexityEstimate::disconnected(),
        };
        let f = free_energy(s_geo, estimate.k, self.params.lambda)?;
        Ok(ScoreCard {
            entity,
            distance: self.distances.distance(entity)?,
            s_geo,
            k: estimate.k,
            f,
            path,
        })
    }

    /// Scores `candidates` in the order given.
    pub fn score_all(&self, candidates: &[EntityId]) -> Result<Vec<ScoreCard>> {
        candidates.par_iter().map(|&e| self.score(e)).collect()
    }

    /// Scores and orders `candidates` according to the configured mode.
    pub fn rank(&self, candidates: &[EntityId]) -> Result<Vec<ScoreCard>> {
        if candidates.is_empty() {
            return Err(Error::NoCandidates);
        }
        let mut cards = self.score_all(candidates)?;
        match self.params.mode {
            RankingMode::Pragmatic => cards.sort_by(pragmatic_order),
            RankingMode::Epistemic => cards.sort_by(epistemic_order),
        }
        Ok(cards)
    }
}

fn pragmatic_order(a: &ScoreCard, b: &ScoreCard) -> Ordering {
    a.f.total_cmp(&b.f).then(a.entity.cmp(&b.entity))
}

fn epistemic_order(a: &ScoreCard, b: &ScoreCard) -> Ordering {
    match (a.distance, b.distance) {
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        _ => b.s_geo.total_cmp(&a.s_geo),
    }
    .then(a.entity.cmp(&b.entity))
}

pub fn score_entity(
    graph: &KnowledgeGraph,
    context: &Context,
    entity: EntityId,
    params: ScoringParams,
) -> Result<ScoreCard> {
    Scorer::new(graph, context, params)?.score(entity)
}

/// Ascending free energy, ties by entity id.
pub fn rank_candidates(
    graph: &KnowledgeGraph,
    context: &Context,
    candidates: &[EntityId],
    params: ScoringParams,
) -> Result<Vec<ScoreCard>> {
    let params = ScoringParams {
        mode: RankingMode::Pragmatic,
        ..params
    };
    Scorer::new(graph, context, params)?.rank(candidates)
}

/// Descending surprise among reachable candidates, unreachable ones last,
/// ties by entity id.
pub fn epistemic_rank(
    graph: &KnowledgeGraph,
    context: &Context,
    candidates: &[EntityId],
    params: ScoringParams,
) -> Result<Vec<ScoreCard>> {
    let params = ScoringParams {
        mode: RankingMode::Epistemic,
        ..params
    };
    Scorer::new(graph, context, params)?.rank(candidates)
}
