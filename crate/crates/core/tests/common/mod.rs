//! Reference implementations and generators shared by the integration tests.
//!
//! Nothing here calls into the library's traversal or compression code; the
//! oracles are deliberately naive.

#![allow(dead_code)]

use kg_surprise::{GraphBuilder, KnowledgeGraph, LzToken};
use rand::rngs::StdRng;
use rand::Rng;

pub const CANADA_TSV: &str = include_str!("../fixtures/canada.tsv");

pub fn canada() -> KnowledgeGraph {
    kg_surprise::parse_tsv(CANADA_TSV.as_bytes()).unwrap()
}

pub fn fixture_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/canada.tsv").to_owned()
}

/// Random directed multigraph over `n` entities `v0..v{n-1}`.
///
/// Every ordered pair (self loops included) gets an edge with probability
/// `p`, labelled with one of `relations` relation names.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64, relations: usize) -> KnowledgeGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern_entity(&format!("v{i}")).unwrap();
    }
    for u in 0..n {
        for v in 0..n {
            if rng.random_bool(p) {
                let r = rng.random_range(0..relations.max(1));
                b.add_triple(&format!("v{u}"), &format!("r{r}"), &format!("v{v}"))
                    .unwrap();
            }
        }
    }
    b.finish()
}

/// Adjacency as plain index lists, read through the public triple iterator.
pub fn adjacency(g: &KnowledgeGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.entity_count()];
    for t in g.triples() {
        adj[t.head.index()].push(t.tail.index());
    }
    adj
}

/// Minimum simple-path length from any source to every node, by exhaustive
/// depth-first enumeration of simple paths.
pub fn brute_force_distances(adj: &[Vec<usize>], sources: &[usize]) -> Vec<Option<u32>> {
    fn walk(adj: &[Vec<usize>], u: usize, depth: u32, on_path: &mut [bool], best: &mut [Option<u32>]) {
        if best[u].is_none_or(|b| depth < b) {
            best[u] = Some(depth);
        }
        for &v in &adj[u] {
            if !on_path[v] {
                on_path[v] = true;
                walk(adj, v, depth + 1, on_path, best);
                on_path[v] = false;
            }
        }
    }
    let mut best = vec![None; adj.len()];
    for &s in sources {
        let mut on_path = vec![false; adj.len()];
        on_path[s] = true;
        walk(adj, s, 0, &mut on_path, &mut best);
    }
    best
}

/// All-pairs diameter from the brute-force distances.
pub fn brute_force_diameter(adj: &[Vec<usize>]) -> u32 {
    (0..adj.len())
        .flat_map(|s| brute_force_distances(adj, &[s]))
        .flatten()
        .max()
        .unwrap_or(0)
}

/// Quadratic greedy LZ77: longest match in the window, nearest on ties.
pub fn naive_lz77(s: &[u8], window: usize, min_match: usize) -> Vec<LzToken> {
    let mut out = Vec::new();
    let mut p = 0;
    while p < s.len() {
        let mut best = (0, 0);
        for q in (p.saturating_sub(window)..p).rev() {
            let mut l = 0;
            while p + l < s.len() && s[q + l] == s[p + l] {
                l += 1;
            }
            if l > best.0 {
                best = (l, p - q);
            }
        }
        if best.0 >= min_match {
            out.push(LzToken::Match { offset: best.1, length: best.0 });
            p += best.0;
        } else {
            out.push(LzToken::Literal(s[p]));
            p += 1;
        }
    }
    out
}

pub fn cost(tokens: &[LzToken]) -> u64 {
    tokens
        .iter()
        .map(|t| match t {
            LzToken::Literal(_) => 1,
            LzToken::Match { .. } => 3,
        })
        .sum()
}

/// Conditional cost by compressing corpus and corpus|path from scratch.
pub fn naive_conditional_cost(path: &[u8], corpus: &[u8]) -> u64 {
    let mut joined = corpus.to_vec();
    if !corpus.is_empty() {
        joined.push(b'|');
    }
    joined.extend_from_slice(path);
    let with = cost(&naive_lz77(&joined, 32 * 1024, 3));
    let without = cost(&naive_lz77(corpus, 32 * 1024, 3));
    with - without
}
