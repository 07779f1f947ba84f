use std::collections::BTreeSet;

use hurwitz_core::graphs::{
    enumerate_two_vertex, fan, partitions, two_vertex, CompactGraph, DualGraph, Side,
};
use hurwitz_core::selftest::brute_force_two_vertex;
use proptest::prelude::*;

/// A random fan: one left vertex over rational right vertices, each with a
/// random partition of its degree.
fn arb_fan() -> impl Strategy<Value = DualGraph> {
    (
        0i64..6,
        prop::collection::vec((1i64..=3, any::<prop::sample::Index>()), 1..=3),
    )
        .prop_map(|(g_l, parts)| {
            let right: Vec<Vec<i64>> = parts
                .into_iter()
                .map(|(deg, idx)| {
                    let ps = partitions(deg);
                    ps[idx.index(ps.len())].clone()
                })
                .collect();
            fan(g_l, &right).expect("fans are consistent")
        })
}

fn arb_two_vertex() -> impl Strategy<Value = DualGraph> {
    (2i64..=5, 0i64..8, 0i64..8, any::<prop::sample::Index>()).prop_map(|(d, a, b, idx)| {
        let ps = partitions(d);
        two_vertex(&ps[idx.index(ps.len())], a, b).unwrap()
    })
}

fn arb_graph() -> impl Strategy<Value = DualGraph> {
    prop_oneof![arb_fan(), arb_two_vertex()]
}

proptest! {
    #[test]
    fn excess_is_symmetric(g in arb_graph()) {
        prop_assert_eq!(g.excess(), g.swap().excess());
        prop_assert_eq!(g.classify(), g.swap().classify());
    }

    #[test]
    fn unramified_iff_index_zero(g in arb_graph()) {
        let unramified = g.edges.iter().all(|e| e.local_degree == 1);
        prop_assert_eq!(g.ramification_index() == 0, unramified);
    }

    #[test]
    fn label_is_invariant(g in arb_graph(), shift in 1usize..50) {
        let n = g.vertices.len();
        let relabeled = g.relabel(|i| (n - 1 - i) * 7 + shift);
        prop_assert_eq!(g.label(), relabeled.label());
        prop_assert_eq!(g.label(), g.swap().label());
        prop_assert_eq!(g.label(), g.canonical().label());
    }

    #[test]
    fn compact_form_round_trips(g in arb_graph()) {
        let json = serde_json::to_string(&g.to_compact()).unwrap();
        let back: CompactGraph = serde_json::from_str(&json).unwrap();
        let h = DualGraph::from_compact(&back).unwrap();
        prop_assert_eq!(g.label(), h.label());
    }

    #[test]
    fn graphs_are_valid(g in arb_graph()) {
        let (d, genus) = (g.degree(), g.arithmetic_genus());
        prop_assert!(g.validate(d, genus), "{:?}", g.violations(d, genus));
        prop_assert_eq!(g.side_genus(Side::L) + g.side_genus(Side::R) + g.edges.len() as i64
            - g.vertices.len() as i64 + 1, genus);
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 2..=5 {
        for g in 0..=20 {
            let fast: BTreeSet<_> = enumerate_two_vertex(d, g)
                .iter()
                .map(|gr| {
                    let (p, a, b) = gr.as_two_vertex().unwrap();
                    (p, a.max(b), a.min(b))
                })
                .collect();
            let slow = brute_force_two_vertex(d, g);
            assert_eq!(fast, slow, "d={d} g={g}");
            assert!(!slow.is_empty());
        }
    }
}
