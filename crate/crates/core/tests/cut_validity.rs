mod common;

use common::suites::{check_cut_validity, cut_validity_suite};
use mccp::cuts::{cut_i1, lift_conditional};
use mccp::graph::{Cycle, FillIndex, Graph};

#[test]
fn cuts_on_cycle_graphs_are_valid() {
    for k in 4..=7 {
        assert!(check_cut_validity(&Graph::cycle(k)).unwrap() > 0);
    }
}

#[test]
fn suite_exercises_many_cuts() {
    let total = cut_validity_suite().unwrap();
    assert!(total > 500, "only {total} cuts exercised");
}

#[test]
fn conditional_lift_matches_direct_construction() {
    // A 5-cycle whose exterior misses two pairs of the host graph.
    let g = Graph::new(6, &[(0, 1), (1, 2), (3, 4), (2, 5), (5, 3), (4, 5)]).unwrap();
    let c = Cycle::new(vec![0, 1, 2, 3, 4]).unwrap();
    let missing = [(2, 3), (0, 4)];
    let mut edges = g.edges().to_vec();
    edges.extend_from_slice(&missing);
    let sup = Graph::new(6, &edges).unwrap();
    let idx: Vec<FillIndex> = missing
        .iter()
        .map(|&(u, v)| g.fill_index(u, v).unwrap())
        .collect();
    let id: Vec<usize> = (0..6).collect();
    let lifted = lift_conditional(
        &cut_i1(&sup, &c).unwrap().reindex(&sup, &id, &g).unwrap(),
        &idx,
    )
    .unwrap();
    assert_eq!(lifted, cut_i1(&g, &c).unwrap());
}
