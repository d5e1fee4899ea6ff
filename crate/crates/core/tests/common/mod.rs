//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's own chordality or separation code.

#![allow(dead_code)]

use mccp::graph::{FillIndex, Graph};
use rand::Rng;

pub mod suites;

/// Chordality by repeatedly deleting a simplicial vertex.
pub fn is_chordal_simplicial(n: usize, adj: &[Vec<bool>]) -> bool {
    let mut alive = vec![true; n];
    for _ in 0..n {
        let simplicial = (0..n).filter(|&v| alive[v]).find(|&v| {
            let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
            nb.iter()
                .enumerate()
                .all(|(i, &a)| nb[i + 1..].iter().all(|&b| adj[a][b]))
        });
        match simplicial {
            Some(v) => alive[v] = false,
            None => return false,
        }
    }
    true
}

pub fn adjacency_matrix(g: &Graph, fill: &[FillIndex]) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    for &f in fill {
        let (u, v) = g.fill_pair(f);
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

/// Every chordal completion of `g` as a membership vector over fill indices.
pub fn completions(g: &Graph) -> Vec<Vec<bool>> {
    let mc = g.mc();
    assert!(mc <= 22, "fill space too large to enumerate");
    let mut out = Vec::new();
    for mask in 0u64..(1 << mc) {
        let fill: Vec<FillIndex> = (0..mc)
            .filter(|i| mask >> i & 1 == 1)
            .map(FillIndex)
            .collect();
        if is_chordal_simplicial(g.n(), &adjacency_matrix(g, &fill)) {
            out.push((0..mc).map(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Smallest completion size by the same enumeration.
pub fn optimum(g: &Graph) -> usize {
    completions(g)
        .iter()
        .map(|c| c.iter().filter(|&&b| b).count())
        .min()
        .expect("the complete graph is always a completion")
}

/// Connected graph on `n` vertices, each pair present with probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::new(n, &edges) {
            return g;
        }
    }
}

/// Every simple cycle of length `>= min_len` on vertices `0..n`, once per
/// cyclic sequence up to rotation and reflection.
pub fn all_cycles(n: usize, min_len: usize) -> Vec<Vec<usize>> {
    fn extend(
        n: usize,
        min_len: usize,
        path: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if path.len() >= min_len && path[1] < path[path.len() - 1] {
            out.push(path.clone());
        }
        for z in path[0] + 1..n {
            if !used[z] {
                used[z] = true;
                path.push(z);
                extend(n, min_len, path, used, out);
                path.pop();
                used[z] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut used = vec![false; n];
        used[s] = true;
        extend(n, min_len, &mut vec![s], &mut used, &mut out);
    }
    out
}

/// Chordless cycles of `g`: interior pairs non-edges, exterior pairs edges.
pub fn chordless_cycles(g: &Graph) -> Vec<Vec<usize>> {
    all_cycles(g.n(), 4)
        .into_iter()
        .filter(|c| {
            let k = c.len();
            (0..k).all(|i| {
                (i + 1..k).all(|j| {
                    let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                    g.has_edge(c[i], c[j]) == consecutive
                })
            })
        })
        .collect()
}

/// `x` on fill pairs and 1 on edges.
pub fn extended(g: &Graph, x: &[f64]) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut m = vec![vec![1.0; n]; n];
    for (i, &(u, v)) in g.fill_pairs().iter().enumerate() {
        m[u][v] = x[i];
        m[v][u] = x[i];
    }
    m
}

fn exterior_slack(c: &[usize], xb: &[Vec<f64>]) -> f64 {
    let k = c.len();
    (0..k).map(|i| 1.0 - xb[c[i]][c[(i + 1) % k]]).sum()
}

/// `rhs - lhs` of the extended I2 inequality at position `i`:
/// `x(v_{i-1} v_{i+1}) + sum_t x(v_i t) + sum_ext (1 - x) >= 1`.
pub fn i2_violation(c: &[usize], i: usize, xb: &[Vec<f64>]) -> f64 {
    let k = c.len();
    let prev = c[(i + k - 1) % k];
    let next = c[(i + 1) % k];
    let mut lhs = xb[prev][next];
    for &t in c {
        if t != c[i] && t != prev && t != next {
            lhs += xb[c[i]][t];
        }
    }
    1.0 - lhs - exterior_slack(c, xb)
}

/// `rhs - lhs` of the extended I3 inequality:
/// `sum_{distance 2} x + 2 sum_ext (1 - x) >= 2`.
pub fn i3_violation(c: &[usize], xb: &[Vec<f64>]) -> f64 {
    let k = c.len();
    let lhs: f64 = (0..k).map(|i| xb[c[i]][c[(i + 2) % k]]).sum();
    2.0 - lhs - 2.0 * exterior_slack(c, xb)
}

/// Largest extended-I2 violation over all cycles and positions.
pub fn max_i2_violation(g: &Graph, x: &[f64]) -> f64 {
    let xb = extended(g, x);
    all_cycles(g.n(), 4)
        .iter()
        .flat_map(|c| {
            (0..c.len())
                .map(|i| i2_violation(c, i, &xb))
                .collect::<Vec<_>>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_i3_violation(g: &Graph, x: &[f64]) -> f64 {
    let xb = extended(g, x);
    all_cycles(g.n(), 5)
        .iter()
        .map(|c| i3_violation(c, &xb))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Optimum of `min c.x, rows a.x >= b, l <= x <= u` by enumerating every
/// choice of `n` tight constraints. `None` if infeasible.
pub fn lp_by_vertices(
    c: &[f64],
    rows: &[(Vec<f64>, f64)],
    lower: &[f64],
    upper: &[f64],
) -> Option<f64> {
    let n = c.len();
    let mut cons: Vec<(Vec<f64>, f64)> = rows.to_vec();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), lower[j]));
        e[j] = -1.0;
        cons.push((e, -upper[j]));
    }
    let feasible = |x: &[f64]| {
        cons.iter()
            .all(|(a, b)| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() >= b - 1e-9)
    };
    let mut best: Option<f64> = None;
    let m = cons.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_square(&pick.iter().map(|&i| cons[i].clone()).collect::<Vec<_>>()) {
            if feasible(&x) {
                let z: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                best = Some(best.map_or(z, |b: f64| b.min(z)));
            }
        }
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn solve_square(eqs: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = eqs.len();
    let mut a: Vec<Vec<f64>> = eqs
        .iter()
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[piv][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}
