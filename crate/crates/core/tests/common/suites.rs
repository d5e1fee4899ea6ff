//! Criterion-sized suites shared by the focused test files and `acceptance`.
//! Each returns `Err` with a description of the first failure.

use std::collections::HashSet;

use mccp::cuts::{
    cut_i1, cut_i2, cut_i3, cut_i4, i4_parameters, lift_chord, lift_conditional, lift_zero_pad, Cut,
};
use mccp::graph::{Cycle, FillIndex, Graph, Point};
use mccp::oracle::affine_rank;
use mccp::separation::{
    separate_i2_exact, separate_i3_exact, SeparationConfig, SeparationReport, VIOLATION_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every family with every parameter on `c` over `g`.
fn family_cuts(g: &Graph, c: &Cycle) -> Vec<Cut> {
    let k = c.len();
    let mut out = vec![cut_i1(g, c).unwrap()];
    for i in 0..k {
        out.push(cut_i2(g, c, i).unwrap());
    }
    if k >= 5 {
        out.push(cut_i3(g, c).unwrap());
        for (i, j) in i4_parameters(k) {
            out.push(cut_i4(g, c, i, j).unwrap());
        }
    }
    out
}

fn with_edges(g: &Graph, extra: &[(usize, usize)]) -> Graph {
    let mut edges = g.edges().to_vec();
    edges.extend_from_slice(extra);
    Graph::new(g.n(), &edges).unwrap()
}

/// Cycles of `K_n` whose interior pairs are all non-edges of `g`.
fn candidate_cycles(g: &Graph) -> Vec<Vec<usize>> {
    super::all_cycles(g.n(), 4)
        .into_iter()
        .filter(|c| {
            let cyc = Cycle::new(c.clone()).unwrap();
            let open = cyc.interior().all(|(u, v)| !g.has_edge(u, v));
            open
        })
        .collect()
}

/// Direct cuts plus every lifting operation, as `(label, cut)`.
pub fn generated_cuts(g: &Graph) -> Vec<(String, Cut)> {
    let mut out = Vec::new();
    for verts in candidate_cycles(g) {
        let c = Cycle::new(verts.clone()).unwrap();
        let k = c.len();
        for cut in family_cuts(g, &c) {
            out.push((format!("{} on {c}", cut.family()), cut));
        }

        // Conditional lifting from G + F(C), where C is chordless.
        let missing: Vec<(usize, usize)> =
            c.exterior().filter(|&(u, v)| !g.has_edge(u, v)).collect();
        if !missing.is_empty() {
            let sup = with_edges(g, &missing);
            let idx: Vec<FillIndex> = missing
                .iter()
                .map(|&(u, v)| g.fill_index(u, v).unwrap())
                .collect();
            let id: Vec<usize> = (0..g.n()).collect();
            for cut in family_cuts(&sup, &c) {
                let down = cut.reindex(&sup, &id, g).unwrap();
                let lifted = lift_conditional(&down, &idx).unwrap();
                out.push((format!("conditional {} on {c}", cut.family()), lifted));
            }
        } else {
            // Zero padding from the bare cycle graph onto the induced cycle.
            let ck = Graph::cycle(k);
            let base = Cycle::new((0..k).collect()).unwrap();
            for cut in family_cuts(&ck, &base) {
                let lifted = lift_zero_pad(&cut, &ck, &verts, g).unwrap();
                out.push((format!("zero-pad {} onto {c}", cut.family()), lifted));
            }
        }

        // Chord lifting: the sub-cycle closed by {v_0, v_j} on G + chord.
        for j in 3..=k - 2 {
            let chord = (verts[0], verts[j]);
            let sup = with_edges(g, &[chord]);
            let sub = Cycle::new(verts[..=j].to_vec()).unwrap();
            let id: Vec<usize> = (0..g.n()).collect();
            let f = g.fill_index(chord.0, chord.1).unwrap();
            // Needs a >= 0, i.e. no conditional terms on the sub-cycle.
            for cut in family_cuts(&sup, &sub)
                .into_iter()
                .filter(|c| c.coeffs().iter().all(|t| t.1 >= 0))
            {
                let down = cut.reindex(&sup, &id, g).unwrap();
                let lifted = lift_chord(&down, f).unwrap();
                out.push((
                    format!("chord {:?} {} on {sub}", chord, cut.family()),
                    lifted,
                ));
            }
        }
    }
    out
}

/// Number of distinct cuts checked against every completion of `g`.
pub fn check_cut_validity(g: &Graph) -> Result<usize, String> {
    let completions = super::completions(g);
    let mut seen = HashSet::new();
    for (label, cut) in generated_cuts(g) {
        if !seen.insert(cut.key()) {
            continue;
        }
        if let Some(fill) = completions.iter().find(|f| cut.violation_at_fill(f) > 0) {
            return Err(format!("{label}: {cut} violated by completion {fill:?} of {g:?}"));
        }
    }
    Ok(seen.len())
}

/// C4..C7 plus 50 seeded random graphs with `n <= 7`. Returns the cut count.
pub fn cut_validity_suite() -> Result<usize, String> {
    let mut total = 0;
    for k in 4..=7 {
        total += check_cut_validity(&Graph::cycle(k))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(4..=7);
        let p = rng.gen_range(0.3..0.7);
        let g = super::random_connected_graph(&mut rng, n, p);
        total += check_cut_validity(&g)?;
    }
    Ok(total)
}

pub fn as_points(fills: &[Vec<bool>]) -> Vec<Point> {
    fills
        .iter()
        .map(|f| Point::new(f.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()))
        .collect()
}

/// Affine rank of the completions of `g` tight at `cut`.
pub fn tight_rank(g: &Graph, cut: &Cut) -> usize {
    let tight: Vec<Vec<bool>> = super::completions(g)
        .into_iter()
        .filter(|f| cut.violation_at_fill(f) == 0)
        .collect();
    affine_rank(&as_points(&tight))
}

/// Full dimension and facet ranks on bare cycles. Returns the number of ranks checked.
pub fn facet_suite() -> Result<usize, String> {
    let mut checked = 0;
    for k in 4..=6 {
        let g = Graph::cycle(k);
        let c = Cycle::new((0..k).collect()).unwrap();
        let full = affine_rank(&as_points(&super::completions(&g)));
        if full != g.mc() {
            return Err(format!("C{k}: rank {full}, want {}", g.mc()));
        }
        let mut cuts = vec![cut_i1(&g, &c).unwrap(), cut_i2(&g, &c, 1).unwrap()];
        if k >= 5 {
            cuts.push(cut_i3(&g, &c).unwrap());
            for (i, j) in i4_parameters(k) {
                cuts.push(cut_i4(&g, &c, i, j).unwrap());
            }
        }
        for cut in cuts {
            let r = tight_rank(&g, &cut);
            if r != g.mc() - 1 {
                return Err(format!("C{k}: {cut} has tight rank {r}, want {}", g.mc() - 1));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Fractional points with a spread of scales so that both outcomes occur.
pub fn sample_points(g: &Graph, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let scale = rng.gen_range(0.05..0.8);
            (0..g.mc()).map(|_| rng.gen::<f64>() * scale).collect()
        })
        .collect()
}

pub fn check_sound(rep: &SeparationReport, x: &[f64]) -> Result<(), String> {
    for c in &rep.cuts {
        if c.cut.violation(x) <= VIOLATION_TOLERANCE || c.cut.violation(x) != c.violation {
            return Err(format!("{} not violated at {x:?}", c.cut));
        }
    }
    Ok(())
}

/// Exact separators against enumeration on C5..C7, 20 points each.
/// Returns `(points with a violated cut, points without)`, both families summed.
pub fn separator_suite() -> Result<(usize, usize), String> {
    let cfg = SeparationConfig::default();
    let (mut found, mut clean) = (0, 0);
    for k in 5..=7 {
        let g = Graph::cycle(k);
        for (pts, i3) in [
            (sample_points(&g, 20, k as u64), false),
            (sample_points(&g, 20, 100 + k as u64), true),
        ] {
            for x in pts {
                let p = Point::new(x.clone());
                let (expected, rep) = if i3 {
                    (super::max_i3_violation(&g, &x), separate_i3_exact(&g, &p, &cfg))
                } else {
                    (super::max_i2_violation(&g, &x), separate_i2_exact(&g, &p, &cfg))
                };
                let rep = rep.map_err(|e| e.to_string())?;
                check_sound(&rep, &x)?;
                let expected = expected > VIOLATION_TOLERANCE;
                if rep.is_empty() == expected {
                    let fam = if i3 { "I3" } else { "I2" };
                    return Err(format!("{fam} on C{k}: enumeration says {expected} at {x:?}"));
                }
                if expected {
                    found += 1;
                } else {
                    clean += 1;
                }
            }
        }
    }
    Ok((found, clean))
}
