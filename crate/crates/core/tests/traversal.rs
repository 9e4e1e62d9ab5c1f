mod common;

use kg_surprise::{
    diameter, multi_source_bfs, shortest_relation_path, Context, EntityId, GraphBuilder,
    KnowledgeGraph,
};
use proptest::prelude::*;

fn build(n: usize, edges: &[(usize, usize, usize)]) -> KnowledgeGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern_entity(&format!("v{i}")).unwrap();
    }
    for &(u, v, r) in edges {
        b.add_triple(&format!("v{}", u % n), &format!("r{r}"), &format!("v{}", v % n))
            .unwrap();
    }
    b.finish()
}

fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize, usize)>, Vec<usize>)> {
    (1usize..=12).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, 0usize..3), 0..=30),
            prop::collection::vec(0..n, 1..=2),
        )
    })
}

proptest! {
    #[test]
    fn bfs_matches_simple_path_enumeration((n, edges, sources) in graph_strategy()) {
        let g = build(n, &edges);
        let ctx = Context::new(sources.iter().map(|&s| EntityId(s as u32))).unwrap();
        let dm = multi_source_bfs(&g, &ctx).unwrap();
        let expected = common::brute_force_distances(&common::adjacency(&g), &sources);
        let got: Vec<_> = dm.iter().map(|(_, d)| d).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn parents_are_edges_one_hop_closer((n, edges, sources) in graph_strategy()) {
        let g = build(n, &edges);
        let ctx = Context::new(sources.iter().map(|&s| EntityId(s as u32))).unwrap();
        let dm = multi_source_bfs(&g, &ctx).unwrap();
        for (v, d) in dm.iter() {
            match (d, dm.parent(v)) {
                (Some(0), p) => {
                    prop_assert!(ctx.contains(v));
                    prop_assert!(p.is_none());
                }
                (Some(d), Some((u, r))) => {
                    prop_assert_eq!(dm.distance(u).unwrap(), Some(d - 1));
                    prop_assert!(g.out_edges(u).unwrap().contains(&(r, v)));
                }
                (Some(_), None) => prop_assert!(false, "reached entity without parent"),
                (None, p) => prop_assert!(p.is_none()),
            }
        }
    }

    #[test]
    fn triangle_inequality_on_edges((n, edges, sources) in graph_strategy()) {
        let g = build(n, &edges);
        let ctx = Context::new([EntityId(sources[0] as u32)]).unwrap();
        let dm = multi_source_bfs(&g, &ctx).unwrap();
        for t in g.triples() {
            if let Some(du) = dm.distance(t.head).unwrap() {
                let dv = dm.distance(t.tail).unwrap();
                prop_assert!(dv.is_some_and(|dv| dv <= du + 1));
            }
        }
    }

    #[test]
    fn adding_a_triple_never_lengthens(
        (n, edges, sources) in graph_strategy(),
        extra in (0usize..12, 0usize..12, 0usize..3),
    ) {
        let before = build(n, &edges);
        let mut more = edges.clone();
        more.push(extra);
        let after = build(n, &more);
        let ctx = Context::new(sources.iter().map(|&s| EntityId(s as u32))).unwrap();
        let d0 = multi_source_bfs(&before, &ctx).unwrap();
        let d1 = multi_source_bfs(&after, &ctx).unwrap();
        for ((_, a), (_, b)) in d0.iter().zip(d1.iter()) {
            if let Some(a) = a {
                prop_assert!(b.is_some_and(|b| b <= a));
            }
        }
    }

    #[test]
    fn path_length_equals_distance((n, edges, sources) in graph_strategy()) {
        let g = build(n, &edges);
        let ctx = Context::new(sources.iter().map(|&s| EntityId(s as u32))).unwrap();
        let dm = multi_source_bfs(&g, &ctx).unwrap();
        for (v, d) in dm.iter() {
            let path = shortest_relation_path(&g, &dm, v).unwrap();
            prop_assert_eq!(path.as_ref().map(|p| p.len() as u32), d);
            if let Some(p) = path {
                prop_assert!(ctx.contains(p.source()));
                prop_assert_eq!(p.target(), v);
                prop_assert_eq!(p.nodes.len(), p.relations.len() + 1);
                for i in 0..p.relations.len() {
                    let edges = g.out_edges(p.nodes[i]).unwrap();
                    prop_assert!(edges.contains(&(p.relations[i], p.nodes[i + 1])));
                }
            }
        }
    }

    #[test]
    fn diameter_matches_all_pairs_enumeration((n, edges, _s) in graph_strategy()) {
        let g = build(n, &edges);
        prop_assert_eq!(diameter(&g), common::brute_force_diameter(&common::adjacency(&g)));
    }

    #[test]
    fn bfs_is_deterministic((n, edges, sources) in graph_strategy()) {
        let a = build(n, &edges);
        let b = build(n, &edges);
        let ctx = Context::new(sources.iter().map(|&s| EntityId(s as u32))).unwrap();
        prop_assert_eq!(multi_source_bfs(&a, &ctx).unwrap(), multi_source_bfs(&b, &ctx).unwrap());
    }
}

#[test]
fn worked_example_cycle_is_harmless() {
    let g = common::canada();
    let ctx = Context::from_labels(&g, &["Canada"]).unwrap();
    let dm = multi_source_bfs(&g, &ctx).unwrap();
    let got: Vec<_> = dm.iter().map(|(e, d)| (g.entity_label(e), d)).collect();
    assert_eq!(
        got,
        [
            ("Canada", Some(0)),
            ("Trudeau", Some(1)),
            ("Harper", Some(1)),
            ("PrimeMinister", Some(2)),
            ("Biden", None),
        ]
    );
}

#[test]
fn canada_diameter_by_brute_force() {
    let g = common::canada();
    assert_eq!(common::brute_force_diameter(&common::adjacency(&g)), 2);
    assert_eq!(diameter(&g), 2);
}
