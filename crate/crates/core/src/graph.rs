//! Interned directed multigraph.
//!
//! A [`KnowledgeGraph`] is assembled through a [`GraphBuilder`] and frozen
//! by [`GraphBuilder::finish`]. After that point nothing mutates it, so it can
//! be shared freely between threads.
//!
//! Outgoing edges are kept in a compressed sparse row layout, sorted by
//! `(relation index, tail index)` so that traversal order never depends on
//! insertion order or hashing.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Dense entity identifier, assigned in interning order starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(pub u32);

/// Dense relation identifier, assigned in interning order starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationId(pub u32);

impl EntityId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RelationId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub head: EntityId,
    pub relation: RelationId,
    pub tail: EntityId,
}

/// Bidirectional label table. Labels are trimmed before lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Interner {
    labels: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, label: &str) -> Result<u32> {
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        if let Some(&id) = self.index.get(label) {
            return Ok(id);
        }
        let id = u32::try_from(self.labels.len()).expect("more than u32::MAX labels");
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        Ok(id)
    }

    fn get(&self, label: &str) -> Option<u32> {
        self.index.get(label.trim()).copied()
    }
}

/// Mutable construction phase of a [`KnowledgeGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    entities: Interner,
    relations: Interner,
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `label`, allocating the next dense id on first sight.
    pub fn intern_entity(&mut self, label: &str) -> Result<EntityId> {
        self.entities.intern(label).map(EntityId)
    }

    pub fn intern_relation(&mut self, label: &str) -> Result<RelationId> {
        self.relations.intern(label).map(RelationId)
    }

    /// Adds `(head, relation, tail)`. Exact duplicates are stored once.
    ///
    /// All three labels are validated before anything is interned, so a
    /// rejected triple leaves the builder untouched.
    pub fn add_triple(&mut self, head: &str, relation: &str, tail: &str) -> Result<()> {
        if [head, relation, tail].iter().any(|l| l.trim().is_empty()) {
            return Err(Error::EmptyLabel);
        }
        let triple = Triple {
            head: self.intern_entity(head)?,
            relation: self.intern_relation(relation)?,
            tail: self.intern_entity(tail)?,
        };
        if self.seen.insert(triple) {
            self.triples.push(triple);
        }
        Ok(())
    }

    pub fn entity_count(&self) -> usize {
        self.entities.labels.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.triples.len()
    }

    /// Freezes the builder into an immutable graph.
    pub fn finish(self) -> KnowledgeGraph {
        let n = self.entities.labels.len();
        let mut offsets = vec![0usize; n + 1];
        for t in &self.triples {
            offsets[t.head.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut edges = vec![(RelationId(0), EntityId(0)); self.triples.len()];
        for t in &self.triples {
            let slot = &mut cursor[t.head.index()];
            edges[*slot] = (t.relation, t.tail);
            *slot += 1;
        }
        for i in 0..n {
            edges[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        KnowledgeGraph {
            entities: self.entities,
            relations: self.relations,
            offsets,
            edges,
        }
    }
}

/// Immutable knowledge graph with sorted outgoing adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    entities: Interner,
    relations: Interner,
    offsets: Vec<usize>,
    edges: Vec<(RelationId, EntityId)>,
}

impl Default for KnowledgeGraph {
    fn default() -> Self {
        GraphBuilder::new().finish()
    }
}

impl KnowledgeGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.labels.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.labels.len()
    }

    /// Number of distinct triples.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn check_entity(&self, entity: EntityId) -> Result<()> {
        if entity.index() < self.entity_count() {
            Ok(())
        } else {
            Err(Error::EntityOutOfRange {
                id: entity.0,
                len: self.entity_count(),
            })
        }
    }

    /// Outgoing edges of `entity`, sorted by `(relation, tail)`.
    pub fn out_edges(&self, entity: EntityId) -> Result<&[(RelationId, EntityId)]> {
        self.check_entity(entity)?;
        Ok(self.out_edges_unchecked(entity))
    }

    #[inline]
    pub(crate) fn out_edges_unchecked(&self, entity: EntityId) -> &[(RelationId, EntityId)] {
        let i = entity.index();
        &self.edges[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn entity_id(&self, label: &str) -> Option<EntityId> {
        self.entities.get(label).map(EntityId)
    }

    /// Like [`entity_id`](Self::entity_id) but reports the missing label.
    pub fn require_entity(&self, label: &str) -> Result<EntityId> {
        self.entity_id(label)
            .ok_or_else(|| Error::UnknownEntity(label.trim().to_owned()))
    }

    pub fn relation_id(&self, label: &str) -> Option<RelationId> {
        self.relations.get(label).map(RelationId)
    }

    /// # Panics
    ///
    /// If `entity` does not belong to this graph.
    pub fn entity_label(&self, entity: EntityId) -> &str {
        &self.entities.labels[entity.index()]
    }

    /// # Panics
    ///
    /// If `relation` does not belong to this graph.
    pub fn relation_label(&self, relation: RelationId) -> &str {
        &self.relations.labels[relation.index()]
    }

    pub fn entities(&self) -> impl ExactSizeIterator<Item = EntityId> + DoubleEndedIterator + '_ {
        (0..self.entity_count() as u32).map(EntityId)
    }

    pub fn relations(&self) -> impl ExactSizeIterator<Item = RelationId> + '_ {
        (0..self.relation_count() as u32).map(RelationId)
    }

    /// Every stored triple in storage order: heads ascending, then each
    /// head's adjacency order.
    pub fn triples(&self) -> impl DoubleEndedIterator<Item = Triple> + '_ {
        self.entities().flat_map(move |head| {
            self.out_edges_unchecked(head)
                .iter()
                .map(move |&(relation, tail)| Triple { head, relation, tail })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::canada;

    #[test]
    fn interning_is_dense_and_idempotent() {
        let mut b = GraphBuilder::new();
        assert_eq!(b.intern_entity("Canada").unwrap(), EntityId(0));
        assert_eq!(b.intern_entity("Canada").unwrap(), EntityId(0));
        assert_eq!(b.intern_entity("Trudeau").unwrap(), EntityId(1));
        assert_eq!(b.intern_entity("  Trudeau ").unwrap(), EntityId(1));
    }

    #[test]
    fn empty_labels_are_rejected() {
        let mut b = GraphBuilder::new();
        assert_eq!(b.intern_entity("   "), Err(Error::EmptyLabel));
        assert_eq!(b.add_triple("a", "", "b"), Err(Error::EmptyLabel));
        // nothing interned by the failed triple
        assert_eq!(b.entity_count(), 0);
    }

    #[test]
    fn duplicate_triples_are_stored_once() {
        let mut b = GraphBuilder::new();
        b.add_triple("Canada", "hasLeader", "Trudeau").unwrap();
        assert_eq!(b.edge_count(), 1);
        b.add_triple("Canada", "hasLeader", "Trudeau").unwrap();
        assert_eq!(b.edge_count(), 1);
        assert_eq!(b.finish().edge_count(), 1);
    }

    #[test]
    fn worked_example_counts() {
        let g = canada();
        assert_eq!(g.entity_count(), 5);
        assert_eq!(g.relation_count(), 4);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn out_edges_are_sorted_and_directed() {
        let g = canada();
        let canada = g.entity_id("Canada").unwrap();
        let has_leader = g.relation_id("hasLeader").unwrap();
        let trudeau = g.entity_id("Trudeau").unwrap();
        let harper = g.entity_id("Harper").unwrap();
        assert_eq!(
            g.out_edges(canada).unwrap(),
            &[(has_leader, trudeau), (has_leader, harper)]
        );
        assert!(g.out_edges(g.entity_id("Biden").unwrap()).unwrap().is_empty());
        assert!(g.out_edges(g.entity_id("PrimeMinister").unwrap()).unwrap().is_empty());
        assert!(matches!(
            g.out_edges(EntityId(5)),
            Err(Error::EntityOutOfRange { id: 5, len: 5 })
        ));
    }

    #[test]
    fn isolated_fresh_entity_has_no_edges() {
        let mut b = GraphBuilder::new();
        let id = b.intern_entity("lonely").unwrap();
        let g = b.finish();
        assert!(g.out_edges(id).unwrap().is_empty());
    }

    #[test]
    fn adjacency_sorted_by_relation_then_tail() {
        let mut b = GraphBuilder::new();
        b.add_triple("a", "q", "c").unwrap();
        b.add_triple("a", "p", "d").unwrap();
        b.add_triple("a", "q", "b").unwrap();
        b.add_triple("a", "p", "b").unwrap();
        let g = b.finish();
        let labels: Vec<_> = g
            .out_edges(EntityId(0))
            .unwrap()
            .iter()
            .map(|&(r, t)| (g.relation_label(r), g.entity_label(t)))
            .collect();
        // q=0, p=1; c=1, d=2, b=3
        assert_eq!(labels, [("q", "c"), ("q", "b"), ("p", "d"), ("p", "b")]);
    }

    #[test]
    fn labels_round_trip_through_ids() {
        let g = canada();
        for e in g.entities() {
            assert_eq!(g.entity_id(g.entity_label(e)), Some(e));
        }
        for r in g.relations() {
            assert_eq!(g.relation_id(g.relation_label(r)), Some(r));
        }
        assert_eq!(g.triples().count(), g.edge_count());
    }

    #[test]
    fn unknown_label_names_the_label() {
        let g = canada();
        assert_eq!(
            g.require_entity("Obama"),
            Err(Error::UnknownEntity("Obama".into()))
        );
    }
}
