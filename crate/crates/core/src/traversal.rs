//! Multi-source BFS over outgoing edges.
//!
//! All context entities start at distance 0. Sources are enqueued in
//! ascending id order and neighbours are visited in adjacency order, and the
//! first parent assigned to an entity is kept. Together these make the
//! reconstructed shortest paths reproducible.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EntityId, KnowledgeGraph, RelationId};

/// Non-empty, sorted, duplicate-free set of source entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context(Vec<EntityId>);

impl Context {
    pub fn new(entities: impl IntoIterator<Item = EntityId>) -> Result<Self> {
        let mut ids: Vec<EntityId> = entities.into_iter().collect();
        if ids.is_empty() {
            return Err(Error::EmptyContext);
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(Context(ids))
    }

    /// Resolves labels against `graph`, failing on the first unknown one.
    pub fn from_labels<S: AsRef<str>>(graph: &KnowledgeGraph, labels: &[S]) -> Result<Self> {
        let ids = labels
            .iter()
            .map(|l| graph.require_entity(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids)
    }

    pub fn entities(&self) -> &[EntityId] {
        &self.0
    }

    pub fn contains(&self, entity: EntityId) -> bool {
        self.0.binary_search(&entity).is_ok()
    }
}

const UNREACHED: u32 = u32::MAX;

/// Shortest hop counts from a context, with one parent link per reached entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    dist: Vec<u32>,
    parent: Vec<Option<(EntityId, RelationId)>>,
}

impl DistanceMap {
    /// `None` when no directed path leads from the context to `entity`.
    pub fn distance(&self, entity: EntityId) -> Result<Option<u32>> {
        let d = *self.dist.get(entity.index()).ok_or(Error::EntityOutOfRange {
            id: entity.0,
            len: self.dist.len(),
        })?;
        Ok((d != UNREACHED).then_some(d))
    }

    pub fn parent(&self, entity: EntityId) -> Option<(EntityId, RelationId)> {
        self.parent.get(entity.index()).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// `(entity, distance)` for every entity of the graph, in id order.
    pub fn iter(&self) -> impl Iterator<Item = (EntityId, Option<u32>)> + '_ {
        self.dist
            .iter()
            .enumerate()
            .map(|(i, &d)| (EntityId(i as u32), (d != UNREACHED).then_some(d)))
    }

    pub fn reached_count(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    /// Largest finite distance.
    pub fn eccentricity(&self) -> u32 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED)
            .max()
            .unwrap_or(0)
    }
}

/// Breadth-first search from every context entity at once.
pub fn multi_source_bfs(graph: &KnowledgeGraph, context: &Context) -> Result<DistanceMap> {
    for &c in context.entities() {
        graph.check_entity(c)?;
    }
    let n = graph.entity_count();
    let mut dist = vec![UNREACHED; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::with_capacity(context.entities().len());
    for &c in context.entities() {
        dist[c.index()] = 0;
        queue.push_back(c);
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u.index()] + 1;
        for &(r, v) in graph.out_edges_unchecked(u) {
            if dist[v.index()] == UNREACHED {
                dist[v.index()] = next;
                parent[v.index()] = Some((u, r));
                queue.push_back(v);
            }
        }
    }
    Ok(DistanceMap { dist, parent })
}

/// Hop count from the context, or `alpha` when `entity` is unreachable.
pub fn geometric_surprise(distances: &DistanceMap, entity: EntityId, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(distances.distance(entity)?.map_or(alpha, f64::from))
}

/// Sequence of relations along one shortest path, with the entities it visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPath {
    /// One longer than `relations`; the first node is a context entity.
    pub nodes: Vec<EntityId>,
    pub relations: Vec<RelationId>,
}

impl RelationPath {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn source(&self) -> EntityId {
        self.nodes[0]
    }

    pub fn target(&self) -> EntityId {
        *self.nodes.last().expect("path has at least one node")
    }

    /// `Canada -hasLeader-> Trudeau` style rendering.
    pub fn render(&self, graph: &KnowledgeGraph) -> String {
        let mut out = graph.entity_label(self.nodes[0]).to_owned();
        for (r, v) in self.relations.iter().zip(&self.nodes[1..]) {
            out.push_str(" -");
            out.push_str(graph.relation_label(*r));
            out.push_str("-> ");
            out.push_str(graph.entity_label(*v));
        }
        out
    }

    /// Alternating node and relation labels, starting and ending with a node.
    pub fn labels(&self, graph: &KnowledgeGraph) -> Vec<String> {
        let mut out = Vec::with_capacity(self.nodes.len() + self.relations.len());
        out.push(graph.entity_label(self.nodes[0]).to_owned());
        for (r, v) in self.relations.iter().zip(&self.nodes[1..]) {
            out.push(graph.relation_label(*r).to_owned());
            out.push(graph.entity_label(*v).to_owned());
        }
        out
    }
}

/// Walks parent links back from `entity`. `None` if it was not reached.
pub fn shortest_relation_path(
    graph: &KnowledgeGraph,
    distances: &DistanceMap,
    entity: EntityId,
) -> Result<Option<RelationPath>> {
    graph.check_entity(entity)?;
    let Some(d) = distances.distance(entity)? else {
        return Ok(None);
    };
    let mut nodes = Vec::with_capacity(d as usize + 1);
    let mut relations = Vec::with_capacity(d as usize);
    let mut cur = entity;
    nodes.push(cur);
    while let Some((u, r)) = distances.parent(cur) {
        relations.push(r);
        nodes.push(u);
        cur = u;
    }
    nodes.reverse();
    relations.reverse();
    debug_assert_eq!(relations.len(), d as usize);
    Ok(Some(RelationPath { nodes, relations }))
}

/// Longest finite shortest-path distance over all ordered pairs.
///
/// Runs one BFS per entity, spread across the rayon pool.
pub fn diameter(graph: &KnowledgeGraph) -> u32 {
    (0..graph.entity_count() as u32)
        .into_par_iter()
        .map(|s| single_source_eccentricity(graph, EntityId(s)))
        .max()
        .unwrap_or(0)
}

fn single_source_eccentricity(graph: &KnowledgeGraph, source: EntityId) -> u32 {
    if graph.out_edges_unchecked(source).is_empty() {
        return 0;
    }
    let ctx = Context(vec![source]);
    multi_source_bfs(graph, &ctx)
        .expect("source in range")
        .eccentricity()
}

/// Disconnection penalty that exceeds every finite distance: `diameter + 1`.
pub fn suggested_alpha(graph: &KnowledgeGraph) -> f64 {
    f64::from(diameter(graph)) + 1.0
}
