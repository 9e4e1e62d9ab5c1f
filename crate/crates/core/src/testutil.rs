use crate::graph::{GraphBuilder, KnowledgeGraph};

pub(crate) const CANADA_TRIPLES: [(&str, &str, &str); 6] = [
    ("Canada", "hasLeader", "Trudeau"),
    ("Canada", "hasLeader", "Harper"),
    ("Trudeau", "holdsPosition", "PrimeMinister"),
    ("Harper", "holdsPosition", "PrimeMinister"),
    ("Trudeau", "successor", "Harper"),
    ("Harper", "predecessor", "Trudeau"),
];

/// The six-triple leadership graph plus the disconnected `Biden` entity.
pub(crate) fn canada() -> KnowledgeGraph {
    let mut b = GraphBuilder::new();
    for (h, r, t) in CANADA_TRIPLES {
        b.add_triple(h, r, t).unwrap();
    }
    b.intern_entity("Biden").unwrap();
    b.finish()
}
