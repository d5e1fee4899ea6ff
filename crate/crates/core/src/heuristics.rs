//! Minimum-degree-ordering completion and primal repair.

use crate::graph::{Adjacency, FillIndex, Graph, Point, Vertex};

/// Vertices by ascending degree in `g`, ties by id. Degrees are computed
/// once and never updated.
pub fn mdo_order(g: &Graph) -> Vec<Vertex> {
    order_by_degree(&g.adjacency())
}

fn order_by_degree(adj: &Adjacency) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = (0..adj.n()).collect();
    order.sort_by_key(|&v| (adj.neighbors(v).len(), v));
    order
}

/// Classic minimum degree: repeatedly eliminate a vertex of smallest degree
/// in the current elimination graph (ties by id).
pub fn dynamic_min_degree_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj = g.adjacency();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (live_degree(&adj, &alive, v), v))
            .expect("a live vertex remains");
        alive[v] = false;
        order.push(v);
        let later: Vec<Vertex> = adj
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| alive[u])
            .collect();
        for (a, &u) in later.iter().enumerate() {
            for &w in &later[a + 1..] {
                adj.add_edge(u, w);
            }
        }
    }
    order
}

fn live_degree(adj: &Adjacency, alive: &[bool], v: Vertex) -> usize {
    adj.neighbors(v).iter().filter(|&&u| alive[u]).count()
}

/// Elimination game on `adj`: each vertex's later neighbours are made a
/// clique. Returns the added pairs in the order they were created.
fn eliminate(adj: &Adjacency, order: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let n = adj.n();
    assert_eq!(order.len(), n, "ordering must be a permutation");
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(pos[v] == usize::MAX, "vertex {v} repeated in ordering");
        pos[v] = i;
    }
    let mut h = adj.clone();
    let mut added = Vec::new();
    for &v in order {
        let later: Vec<Vertex> = h
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        for (a, &u) in later.iter().enumerate() {
            for &w in &later[a + 1..] {
                if !h.has_edge(u, w) {
                    h.add_edge(u, w);
                    added.push(crate::graph::ordered(u, w));
                }
            }
        }
    }
    added
}

/// Fill produced by eliminating `g` in `order`; always a chordal completion.
pub fn chordalize_with_order(g: &Graph, order: &[Vertex]) -> Vec<FillIndex> {
    let mut fill: Vec<FillIndex> = eliminate(&g.adjacency(), order)
        .into_iter()
        .map(|(u, v)| g.fill_index(u, v).expect("added pair is a non-edge"))
        .collect();
    fill.sort();
    fill
}

/// The MDO completion of `g`.
pub fn mdo_completion(g: &Graph) -> Vec<FillIndex> {
    chordalize_with_order(g, &mdo_order(g))
}

/// `fill` plus the fill that makes `g + fill` chordal, using the
/// static or dynamic degree order of `g + fill`.
pub fn repair(g: &Graph, fill: &[FillIndex], dynamic: bool) -> Vec<FillIndex> {
    let adj = g.adjacency_with(fill.iter().copied());
    let order = if dynamic {
        let h = g.apply_completion(fill).expect("fill indices are in range");
        dynamic_min_degree_order(&h)
    } else {
        order_by_degree(&adj)
    };
    let mut out: Vec<FillIndex> = fill.to_vec();
    out.extend(
        eliminate(&adj, &order)
            .into_iter()
            .map(|(u, v)| g.fill_index(u, v).expect("added pair is a non-edge")),
    );
    out.sort();
    out.dedup();
    out
}

/// `E(x)` together with the MDO fill of `G + E(x)`.
pub fn primal_repair(g: &Graph, x: &Point) -> Vec<FillIndex> {
    repair(g, &x.support(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::k23;

    #[test]
    fn mdo_examples() {
        let g = k23();
        assert_eq!(mdo_order(&g), vec![0, 2, 4, 1, 3]);
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(mdo_order(&p3), vec![0, 2, 1]);
        assert_eq!(mdo_order(&Graph::complete(5)), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn chordalize_examples() {
        let g = k23();
        let fill = chordalize_with_order(&g, &[0, 2, 4, 1, 3]);
        assert_eq!(fill, vec![g.fill_index(1, 3).unwrap()]);

        let c4 = Graph::cycle(4);
        for order in [[0, 1, 2, 3], [3, 1, 0, 2], [2, 0, 3, 1]] {
            assert_eq!(chordalize_with_order(&c4, &order).len(), 1);
        }

        let chordal = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let peo = chordal.perfect_elimination_ordering().unwrap();
        assert!(chordalize_with_order(&chordal, &peo).is_empty());
    }

    #[test]
    fn repair_examples() {
        let c5 = Graph::cycle(5);
        let r = primal_repair(&c5, &Point::zeros(c5.mc()));
        assert_eq!(r.len(), 2);
        assert!(c5.is_valid_completion(&r));

        let g = k23();
        let f02 = g.fill_index(0, 2).unwrap();
        let r = primal_repair(&g, &Point::from_fill(g.mc(), &[f02]));
        assert!(r.contains(&f02));
        assert!(r.len() >= 2);
        assert!(g.is_valid_completion(&r));

        let f13 = g.fill_index(1, 3).unwrap();
        assert_eq!(
            primal_repair(&g, &Point::from_fill(g.mc(), &[f13])),
            vec![f13]
        );
    }

    #[test]
    fn dynamic_order_is_permutation_and_valid() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let mut order = dynamic_min_degree_order(&g);
        let fill = chordalize_with_order(&g, &order);
        assert!(g.is_valid_completion(&fill));
        order.sort();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
        let r = repair(&g, &[], true);
        assert!(g.is_valid_completion(&r));
    }
}
