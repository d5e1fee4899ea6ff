//! Cycle inequalities over the fill-edge space and the lifting operations
//! that move them between graphs.
//!
//! Every cut is stored as `sum a_f x_f >= rhs` with integer data, where `f`
//! ranges over fill edges of the graph the cut was built for. Conditional
//! ("lifted") forms subtract `b * x_f` for every exterior pair that is
//! missing from the graph, so the inequality only bites once all of them
//! are present.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ordered, Cycle, FillIndex, Graph, GraphError, Point, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    I1,
    I2,
    I3,
    I4,
    Lifted,
}

impl Family {
    pub const CYCLE_FAMILIES: [Family; 4] = [Family::I1, Family::I2, Family::I3, Family::I4];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::I1 => "I1",
            Family::I2 => "I2",
            Family::I3 => "I3",
            Family::I4 => "I4",
            Family::Lifted => "LIFTED",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = CutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I1" => Ok(Family::I1),
            "I2" => Ok(Family::I2),
            "I3" => Ok(Family::I3),
            "I4" => Ok(Family::I4),
            "LIFTED" => Ok(Family::Lifted),
            _ => Err(CutError::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("interior pair {{{0}, {1}}} of the cycle is an edge of the graph")]
    InteriorEdge(Vertex, Vertex),
    #[error("position {position} invalid for a cycle of length {len}")]
    InvalidPosition { position: usize, len: usize },
    #[error("family {family} not applicable: {reason}")]
    FamilyInapplicable { family: Family, reason: String },
    #[error("negative coefficient {coef} on fill index {index}; lifting requires a >= 0")]
    NegativeCoefficient { index: usize, coef: i64 },
    #[error("fill index {0} already carries a coefficient")]
    IndexCollision(usize),
    #[error("invalid lift: {0}")]
    InvalidLift(String),
    #[error("dimension mismatch: cut has {expected} variables, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cut parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where a cut came from. Not part of its identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub cycle: Cycle,
    pub params: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Cut {
    coeffs: Vec<(FillIndex, i64)>,
    rhs: i64,
    dim: usize,
    family: Family,
    provenance: Option<Provenance>,
}

/// Structural identity of a cut: sorted coefficients and right-hand side.
pub type CutKey = (Vec<(usize, i64)>, i64);

impl PartialEq for Cut {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.rhs == other.rhs && self.dim == other.dim
    }
}

impl Eq for Cut {}

impl Cut {
    /// Builds a cut from possibly repeated `(index, coef)` terms; repeated
    /// indices are summed and zero coefficients dropped.
    pub fn new(
        dim: usize,
        terms: impl IntoIterator<Item = (FillIndex, i64)>,
        rhs: i64,
        family: Family,
    ) -> Result<Cut, CutError> {
        let mut dense: Vec<(FillIndex, i64)> = terms.into_iter().collect();
        if let Some(&(f, _)) = dense.iter().find(|(f, _)| f.0 >= dim) {
            return Err(GraphError::FillOutOfRange {
                index: f.0,
                mc: dim,
            }
            .into());
        }
        dense.sort_by_key(|(f, _)| *f);
        let mut coeffs: Vec<(FillIndex, i64)> = Vec::with_capacity(dense.len());
        for (f, a) in dense {
            match coeffs.last_mut() {
                Some((g, b)) if *g == f => *b += a,
                _ => coeffs.push((f, a)),
            }
        }
        coeffs.retain(|&(_, a)| a != 0);
        Ok(Cut {
            coeffs,
            rhs,
            dim,
            family,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, cycle: Cycle, params: Vec<usize>) -> Self {
        self.provenance = Some(Provenance { cycle, params });
        self
    }

    pub fn coeffs(&self) -> &[(FillIndex, i64)] {
        &self.coeffs
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn coef(&self, f: FillIndex) -> i64 {
        self.coeffs
            .binary_search_by_key(&f, |&(g, _)| g)
            .map(|i| self.coeffs[i].1)
            .unwrap_or(0)
    }

    pub fn key(&self) -> CutKey {
        (
            self.coeffs.iter().map(|&(f, a)| (f.0, a)).collect(),
            self.rhs,
        )
    }

    /// `rhs - a.x`; positive means violated.
    pub fn evaluate(&self, x: &Point) -> Result<f64, CutError> {
        if x.len() != self.dim {
            return Err(CutError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.violation(x.values()))
    }

    /// Unchecked violation at a dense vector of the right length.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().map(|&(f, a)| a as f64 * x[f.0]).sum();
        self.rhs as f64 - lhs
    }

    /// Exact violation at the characteristic vector of a fill set.
    pub fn violation_at_fill(&self, in_fill: &[bool]) -> i64 {
        let lhs: i64 = self
            .coeffs
            .iter()
            .filter(|(f, _)| in_fill[f.0])
            .map(|&(_, a)| a)
            .sum();
        self.rhs - lhs
    }

    fn require_nonnegative(&self) -> Result<(), CutError> {
        match self.coeffs.iter().find(|&&(_, a)| a < 0) {
            Some(&(f, a)) => Err(CutError::NegativeCoefficient {
                index: f.0,
                coef: a,
            }),
            None => Ok(()),
        }
    }

    /// Moves the cut from `from`'s fill space into `to`'s through an
    /// injective vertex map. Every coefficient pair must land on a fill edge
    /// of `to`.
    pub fn reindex(&self, from: &Graph, map: &[Vertex], to: &Graph) -> Result<Cut, CutError> {
        check_injective(from, map, to)?;
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for &(f, a) in &self.coeffs {
            let (u, v) = from.fill_pair(f);
            let (mu, mv) = (map[u], map[v]);
            match to.fill_index(mu, mv) {
                Some(g) => terms.push((g, a)),
                None => {
                    return Err(CutError::InvalidLift(format!(
                        "pair {{{mu}, {mv}}} is an edge of the target graph"
                    )))
                }
            }
        }
        let mut cut = Cut::new(to.mc(), terms, self.rhs, self.family)?;
        if let Some(p) = &self.provenance {
            let vertices = p.cycle.vertices().iter().map(|&v| map[v]).collect();
            if let Ok(c) = Cycle::with_min_len(vertices, 0) {
                cut = cut.with_provenance(c, p.params.clone());
            }
        }
        Ok(cut)
    }

    /// Writes `family rhs k idx:coef ...`, `k` being the number of terms.
    pub fn to_line(&self) -> String {
        self.to_string()
    }

    pub fn parse_line(line: &str, dim: usize) -> Result<Cut, CutError> {
        let mut tokens = line.split_whitespace();
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| CutError::Parse(format!("missing {what}")))
        };
        let family: Family = next("family")?.parse()?;
        let rhs: i64 = next("rhs")?
            .parse()
            .map_err(|e| CutError::Parse(format!("rhs: {e}")))?;
        let k: usize = next("term count")?
            .parse()
            .map_err(|e| CutError::Parse(format!("term count: {e}")))?;
        let mut terms = Vec::with_capacity(k);
        for _ in 0..k {
            let tok = next("term")?;
            let (i, a) = tok
                .split_once(':')
                .ok_or_else(|| CutError::Parse(format!("bad term {tok:?}")))?;
            let i: usize = i
                .parse()
                .map_err(|e| CutError::Parse(format!("index in {tok:?}: {e}")))?;
            let a: i64 = a
                .parse()
                .map_err(|e| CutError::Parse(format!("coefficient in {tok:?}: {e}")))?;
            terms.push((FillIndex(i), a));
        }
        if tokens.next().is_some() {
            return Err(CutError::Parse("trailing tokens".into()));
        }
        Cut::new(dim, terms, rhs, family)
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.family, self.rhs, self.coeffs.len())?;
        for (i, a) in &self.coeffs {
            write!(f, " {}:{}", i.0, a)?;
        }
        Ok(())
    }
}

fn check_injective(from: &Graph, map: &[Vertex], to: &Graph) -> Result<(), CutError> {
    if map.len() != from.n() {
        return Err(CutError::InvalidLift(format!(
            "vertex map has {} entries for {} vertices",
            map.len(),
            from.n()
        )));
    }
    let mut seen = vec![false; to.n()];
    for &v in map {
        if v >= to.n() {
            return Err(CutError::InvalidLift(format!("vertex {v} outside target")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(CutError::InvalidLift(format!("vertex {v} mapped twice")));
        }
    }
    Ok(())
}

/// Builds `sum_{int pairs} a x - b * sum_{F(C)} x >= b (1 - |F(C)|)`.
///
/// With `strict`, an interior pair that is an edge of `g` is an error.
/// Otherwise such pairs are fixed at one and their coefficients moved into
/// the right-hand side, which keeps the inequality valid whenever `a >= 0`.
fn cycle_cut(
    g: &Graph,
    c: &Cycle,
    family: Family,
    params: Vec<usize>,
    b: i64,
    support: &[((Vertex, Vertex), i64)],
    strict: bool,
) -> Result<Cut, CutError> {
    if strict {
        if let Some((u, v)) = c.interior().find(|&(u, v)| g.has_edge(u, v)) {
            return Err(CutError::InteriorEdge(u, v));
        }
    }
    let mut terms = Vec::with_capacity(support.len() + c.len());
    let mut rhs = 0i64;
    for &((u, v), a) in support {
        match g.fill_index(u, v) {
            Some(f) => terms.push((f, a)),
            None => rhs -= a,
        }
    }
    let mut missing = 0i64;
    for (u, v) in c.exterior() {
        if let Some(f) = g.fill_index(u, v) {
            terms.push((f, -b));
            missing += 1;
        }
    }
    rhs += b * (1 - missing);
    Ok(Cut::new(g.mc(), terms, rhs, family)?.with_provenance(c.clone(), params))
}

fn i1_support(c: &Cycle) -> Vec<((Vertex, Vertex), i64)> {
    c.interior().map(|p| (p, 1)).collect()
}

fn i2_support(c: &Cycle, i: usize) -> Vec<((Vertex, Vertex), i64)> {
    let k = c.len();
    let center = c.at(i as isize);
    let prev = c.at(i as isize - 1);
    let next = c.at(i as isize + 1);
    let mut s = vec![(ordered(prev, next), 1)];
    for t in 0..k {
        let v = c.vertices()[t];
        if v != center && v != prev && v != next {
            s.push((ordered(center, v), 1));
        }
    }
    s
}

fn i3_support(c: &Cycle) -> Vec<((Vertex, Vertex), i64)> {
    c.interior_positions()
        .filter(|&(i, j)| c.distance(i, j) == 2)
        .map(|(i, j)| (ordered(c.vertices()[i], c.vertices()[j]), 1))
        .collect()
}

fn i4_support(c: &Cycle, i: usize, j: usize) -> Vec<((Vertex, Vertex), i64)> {
    let skip_a = ordered(c.at(j as isize - 1), c.at(j as isize + 1));
    let skip_b = ordered(c.at(j as isize), c.at(i as isize));
    c.interior()
        .filter(|&p| p != skip_a && p != skip_b)
        .map(|p| (p, 1))
        .collect()
}

fn check_position(c: &Cycle, i: usize) -> Result<(), CutError> {
    if i < c.len() {
        Ok(())
    } else {
        Err(CutError::InvalidPosition {
            position: i,
            len: c.len(),
        })
    }
}

fn check_i3(c: &Cycle) -> Result<(), CutError> {
    if c.len() < 5 {
        return Err(CutError::FamilyInapplicable {
            family: Family::I3,
            reason: format!("needs a cycle of length >= 5, got {}", c.len()),
        });
    }
    Ok(())
}

fn check_i4(c: &Cycle, i: usize, j: usize) -> Result<(), CutError> {
    check_position(c, i)?;
    check_position(c, j)?;
    if c.len() < 5 {
        return Err(CutError::FamilyInapplicable {
            family: Family::I4,
            reason: format!("needs a cycle of length >= 5, got {}", c.len()),
        });
    }
    if c.distance(i, j) < 2 {
        return Err(CutError::FamilyInapplicable {
            family: Family::I4,
            reason: format!("positions {i} and {j} are at cyclic distance < 2"),
        });
    }
    Ok(())
}

/// Chordal inequality: `sum_{int(C)} x - (k-3) sum_{F(C)} x >= (k-3)(1 - |F(C)|)`.
pub fn cut_i1(g: &Graph, c: &Cycle) -> Result<Cut, CutError> {
    let b = c.len() as i64 - 3;
    cycle_cut(g, c, Family::I1, vec![], b, &i1_support(c), true)
}

/// At position `i`: the chord `{v_{i-1}, v_{i+1}}` or some chord at `v_i`
/// away from both neighbours must be present.
pub fn cut_i2(g: &Graph, c: &Cycle, i: usize) -> Result<Cut, CutError> {
    check_position(c, i)?;
    cycle_cut(g, c, Family::I2, vec![i], 1, &i2_support(c, i), true)
}

/// At least two of the distance-two pairs must be present (`k >= 5`).
pub fn cut_i3(g: &Graph, c: &Cycle) -> Result<Cut, CutError> {
    check_i3(c)?;
    cycle_cut(g, c, Family::I3, vec![], 2, &i3_support(c), true)
}

/// At least `k-4` interior pairs other than `{v_{j-1}, v_{j+1}}` and
/// `{v_j, v_i}` must be present (`k >= 5`, `d_C(v_i, v_j) >= 2`).
pub fn cut_i4(g: &Graph, c: &Cycle, i: usize, j: usize) -> Result<Cut, CutError> {
    check_i4(c, i, j)?;
    let b = c.len() as i64 - 4;
    cycle_cut(g, c, Family::I4, vec![i, j], b, &i4_support(c, i, j), true)
}

/// I2 over an arbitrary vertex sequence; interior edges of `g` are fixed at one.
pub(crate) fn cut_i2_relaxed(g: &Graph, c: &Cycle, i: usize) -> Result<Cut, CutError> {
    check_position(c, i)?;
    cycle_cut(g, c, Family::I2, vec![i], 1, &i2_support(c, i), false)
}

/// I3 over an arbitrary vertex sequence; interior edges of `g` are fixed at one.
pub(crate) fn cut_i3_relaxed(g: &Graph, c: &Cycle) -> Result<Cut, CutError> {
    check_i3(c)?;
    cycle_cut(g, c, Family::I3, vec![], 2, &i3_support(c), false)
}

/// Every `(i, j)` with `d_C >= 2`, for emitting all I4 variants.
pub fn i4_parameters(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if k < 5 {
        return out;
    }
    for j in 0..k {
        for i in 0..k {
            let d = i.abs_diff(j).min(k - i.abs_diff(j));
            if d >= 2 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Embeds a cut valid for an induced subgraph into a supergraph. `map`
/// sends each subgraph vertex to its supergraph vertex; the subgraph must be
/// exactly the subgraph induced by the image.
pub fn lift_zero_pad(cut: &Cut, sub: &Graph, map: &[Vertex], sup: &Graph) -> Result<Cut, CutError> {
    check_injective(sub, map, sup)?;
    if cut.dim != sub.mc() {
        return Err(CutError::DimensionMismatch {
            expected: sub.mc(),
            got: cut.dim,
        });
    }
    for u in 0..sub.n() {
        for v in u + 1..sub.n() {
            if sub.has_edge(u, v) != sup.has_edge(map[u], map[v]) {
                return Err(CutError::InvalidLift(format!(
                    "subgraph is not induced: pair {{{u}, {v}}} maps to {{{}, {}}} with different adjacency",
                    map[u], map[v]
                )));
            }
        }
    }
    cut.reindex(sub, map, sup)
}

/// `a.x - b sum_{missing} x >= b (1 - |missing|)`.
pub fn lift_conditional(cut: &Cut, missing: &[FillIndex]) -> Result<Cut, CutError> {
    cut.require_nonnegative()?;
    let mut seen = HashSet::new();
    for &f in missing {
        if f.0 >= cut.dim {
            return Err(GraphError::FillOutOfRange {
                index: f.0,
                mc: cut.dim,
            }
            .into());
        }
        if cut.coef(f) != 0 || !seen.insert(f) {
            return Err(CutError::IndexCollision(f.0));
        }
    }
    if missing.is_empty() {
        return Ok(cut.clone());
    }
    let b = cut.rhs;
    let terms = cut
        .coeffs
        .iter()
        .copied()
        .chain(missing.iter().map(|&f| (f, -b)));
    let rhs = b * (1 - missing.len() as i64);
    let mut lifted = Cut::new(cut.dim, terms, rhs, Family::Lifted)?;
    lifted.provenance = cut.provenance.clone();
    Ok(lifted)
}

/// `a.x - b x_{chord} >= 0` for a cut on the sub-cycle closed by `chord`.
pub fn lift_chord(cut: &Cut, chord: FillIndex) -> Result<Cut, CutError> {
    cut.require_nonnegative()?;
    if chord.0 >= cut.dim {
        return Err(GraphError::FillOutOfRange {
            index: chord.0,
            mc: cut.dim,
        }
        .into());
    }
    if cut.coef(chord) != 0 {
        return Err(CutError::IndexCollision(chord.0));
    }
    let terms = cut
        .coeffs
        .iter()
        .copied()
        .chain(std::iter::once((chord, -cut.rhs)));
    let mut lifted = Cut::new(cut.dim, terms, 0, Family::Lifted)?;
    lifted.provenance = cut.provenance.clone();
    Ok(lifted)
}

/// Append-only cut store deduplicated on structure.
#[derive(Debug, Default, Clone)]
pub struct CutPool {
    cuts: Vec<Cut>,
    keys: HashSet<CutKey>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if a structurally identical cut is already stored.
    pub fn insert(&mut self, cut: Cut) -> bool {
        if self.keys.insert(cut.key()) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, cut: &Cut) -> bool {
        self.keys.contains(&cut.key())
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(v: &[usize]) -> Cycle {
        Cycle::new(v.to_vec()).unwrap()
    }

    /// Readable form: sorted `((u, v), coef)` plus rhs.
    fn pairs(g: &Graph, cut: &Cut) -> (Vec<((usize, usize), i64)>, i64) {
        let mut v: Vec<_> = cut
            .coeffs()
            .iter()
            .map(|&(f, a)| (g.fill_pair(f), a))
            .collect();
        v.sort();
        (v, cut.rhs())
    }

    fn ones(p: &[(usize, usize)]) -> Vec<((usize, usize), i64)> {
        let mut v: Vec<_> = p.iter().map(|&(a, b)| (ordered(a, b), 1)).collect();
        v.sort();
        v
    }

    /// Two-edge fragment {0,1}, {3,4} of the 5-cycle (0,1,2,3,4). The bare
    /// fragment is disconnected, so it is joined through an outside vertex 5
    /// that keeps G[{0..4}] unchanged.
    fn fragment() -> Graph {
        Graph::new(6, &[(0, 1), (3, 4), (1, 5), (5, 3), (2, 5)]).unwrap()
    }

    #[test]
    fn i1_examples() {
        let c4 = Graph::cycle(4);
        let cut = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        assert_eq!(pairs(&c4, &cut), (ones(&[(0, 2), (1, 3)]), 1));

        let c5 = Graph::cycle(5);
        let cut = cut_i1(&c5, &cyc(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(
            pairs(&c5, &cut),
            (ones(&[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]), 2)
        );
    }

    #[test]
    fn i1_conditional_on_fragment() {
        let g = fragment();
        let cut = cut_i1(&g, &cyc(&[0, 1, 2, 3, 4])).unwrap();
        let (terms, rhs) = pairs(&g, &cut);
        let mut expected = ones(&[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]);
        expected.extend([((0, 4), -2), ((1, 2), -2), ((2, 3), -2)]);
        expected.sort();
        assert_eq!(terms, expected);
        // 2 (1 - 3)
        assert_eq!(rhs, -4);
    }

    #[test]
    fn i1_rejects_interior_edge() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(
            cut_i1(&g, &cyc(&[0, 1, 2, 3])),
            Err(CutError::InteriorEdge(0, 2))
        );
    }

    #[test]
    fn i2_examples() {
        let c6 = Graph::cycle(6);
        let cut = cut_i2(&c6, &cyc(&[0, 1, 2, 3, 4, 5]), 1).unwrap();
        assert_eq!(
            pairs(&c6, &cut),
            (ones(&[(0, 2), (1, 3), (1, 4), (1, 5)]), 1)
        );
        let c4 = Graph::cycle(4);
        let c = cyc(&[0, 1, 2, 3]);
        assert_eq!(cut_i2(&c4, &c, 0).unwrap(), cut_i1(&c4, &c).unwrap());
        assert!(matches!(
            cut_i2(&c4, &c, 4),
            Err(CutError::InvalidPosition {
                position: 4,
                len: 4
            })
        ));
    }

    #[test]
    fn i2_on_path_with_missing_edge() {
        // C5 without {1,2}: the path 2-3-4-0-1.
        let g = Graph::new(5, &[(2, 3), (3, 4), (4, 0), (0, 1)]).unwrap();
        let cut = cut_i2(&g, &cyc(&[0, 1, 2, 3, 4]), 0).unwrap();
        let mut expected = ones(&[(1, 4), (0, 2), (0, 3)]);
        expected.push(((1, 2), -1));
        expected.sort();
        assert_eq!(pairs(&g, &cut), (expected, 0));
    }

    #[test]
    fn i3_examples() {
        let c6 = Graph::cycle(6);
        let cut = cut_i3(&c6, &cyc(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(
            pairs(&c6, &cut),
            (ones(&[(5, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 0)]), 2)
        );
        let c5 = Graph::cycle(5);
        let c = cyc(&[0, 1, 2, 3, 4]);
        assert_eq!(cut_i3(&c5, &c).unwrap(), cut_i1(&c5, &c).unwrap());
        assert!(matches!(
            cut_i3(&Graph::cycle(4), &cyc(&[0, 1, 2, 3])),
            Err(CutError::FamilyInapplicable {
                family: Family::I3,
                ..
            })
        ));

        // C6 without {0,1}.
        let p6 = Graph::new(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let cut = cut_i3(&p6, &cyc(&[0, 1, 2, 3, 4, 5])).unwrap();
        let mut expected = ones(&[(5, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 0)]);
        expected.push(((0, 1), -2));
        expected.sort();
        assert_eq!(pairs(&p6, &cut), (expected, 0));
    }

    #[test]
    fn i4_examples() {
        let c6 = Graph::cycle(6);
        let cut = cut_i4(&c6, &cyc(&[0, 1, 2, 3, 4, 5]), 4, 1).unwrap();
        assert_eq!(
            pairs(&c6, &cut),
            (
                ones(&[(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5), (3, 5)]),
                2
            )
        );
        let c5 = Graph::cycle(5);
        let cut = cut_i4(&c5, &cyc(&[0, 1, 2, 3, 4]), 2, 0).unwrap();
        assert_eq!(pairs(&c5, &cut), (ones(&[(0, 3), (1, 3), (2, 4)]), 1));
        assert!(matches!(
            cut_i4(&c5, &cyc(&[0, 1, 2, 3, 4]), 1, 0),
            Err(CutError::FamilyInapplicable {
                family: Family::I4,
                ..
            })
        ));

        // C6 without {0,1}: coefficient -2 on it and rhs 2 - 2 = 0.
        let p6 = Graph::new(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let cut = cut_i4(&p6, &cyc(&[0, 1, 2, 3, 4, 5]), 4, 1).unwrap();
        assert_eq!(cut.rhs(), 0);
        assert_eq!(cut.coef(p6.fill_index(0, 1).unwrap()), -2);
    }

    #[test]
    fn i4_parameter_count() {
        // k positions j, each with k - 3 admissible i.
        assert_eq!(i4_parameters(5).len(), 10);
        assert_eq!(i4_parameters(6).len(), 18);
        assert!(i4_parameters(4).is_empty());
    }

    #[test]
    fn conditional_lift_reproduces_fragment_cut() {
        let c5 = Graph::cycle(5);
        let base = cut_i1(&c5, &cyc(&[0, 1, 2, 3, 4])).unwrap();
        let g = fragment();
        let map: Vec<usize> = (0..5).collect();
        let c5_in_g = base.reindex(&c5, &map, &g).unwrap();
        let missing: Vec<_> = [(1, 2), (2, 3), (0, 4)]
            .iter()
            .map(|&(u, v)| g.fill_index(u, v).unwrap())
            .collect();
        let lifted = lift_conditional(&c5_in_g, &missing).unwrap();
        assert_eq!(lifted, cut_i1(&g, &cyc(&[0, 1, 2, 3, 4])).unwrap());
        assert_eq!(lifted.family(), Family::Lifted);
        assert_eq!(lift_conditional(&c5_in_g, &[]).unwrap(), c5_in_g);
    }

    #[test]
    fn conditional_lift_errors() {
        let c4 = Graph::cycle(4);
        let neg = Cut::new(2, [(FillIndex(0), -1)], 0, Family::I1).unwrap();
        assert!(matches!(
            lift_conditional(&neg, &[FillIndex(1)]),
            Err(CutError::NegativeCoefficient { .. })
        ));
        let cut = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        assert_eq!(
            lift_conditional(&cut, &[FillIndex(0)]),
            Err(CutError::IndexCollision(0))
        );
    }

    #[test]
    fn chord_lift_example() {
        // C5 with sub-cycle (1,2,3,4) closed by {1,4}.
        let c5 = Graph::cycle(5);
        let c4 = Graph::cycle(4);
        let sub = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        let sub_in_c5 = sub.reindex(&c4, &[1, 2, 3, 4], &c5).unwrap();
        let chord = c5.fill_index(1, 4).unwrap();
        let lifted = lift_chord(&sub_in_c5, chord).unwrap();
        let mut expected = ones(&[(1, 3), (2, 4)]);
        expected.push(((1, 4), -1));
        expected.sort();
        assert_eq!(pairs(&c5, &lifted), (expected, 0));
        // Same inequality as the conditional I1 of the sub-cycle in C5.
        assert_eq!(lifted, cut_i1(&c5, &cyc(&[1, 2, 3, 4])).unwrap());

        let zero_rhs = Cut::new(5, [(FillIndex(0), 1)], 0, Family::I1).unwrap();
        let l = lift_chord(&zero_rhs, FillIndex(1)).unwrap();
        assert_eq!(l.coeffs(), &[(FillIndex(0), 1)]);
        assert_eq!(l.rhs(), 0);
        assert_eq!(
            lift_chord(&sub_in_c5, c5.fill_index(1, 3).unwrap()),
            Err(CutError::IndexCollision(c5.fill_index(1, 3).unwrap().0))
        );
    }

    #[test]
    fn chord_lift_c6() {
        let c6 = Graph::cycle(6);
        let c4 = Graph::cycle(4);
        let sub = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        let sub_in_c6 = sub.reindex(&c4, &[0, 1, 2, 3], &c6).unwrap();
        let lifted = lift_chord(&sub_in_c6, c6.fill_index(0, 3).unwrap()).unwrap();
        let mut expected = ones(&[(0, 2), (1, 3)]);
        expected.push(((0, 3), -1));
        expected.sort();
        assert_eq!(pairs(&c6, &lifted), (expected, 0));
    }

    #[test]
    fn zero_pad_examples() {
        let c4 = Graph::cycle(4);
        let cut = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        // C4 on vertices 1,2,4,5 of a 6-vertex graph with pendant 0 and 3.
        let sup = Graph::new(6, &[(1, 2), (2, 4), (4, 5), (5, 1), (0, 1), (3, 4)]).unwrap();
        let lifted = lift_zero_pad(&cut, &c4, &[1, 2, 4, 5], &sup).unwrap();
        assert_eq!(pairs(&sup, &lifted), (ones(&[(1, 4), (2, 5)]), 1));
        let zero = Cut::new(c4.mc(), [], 0, Family::I1).unwrap();
        let z = lift_zero_pad(&zero, &c4, &[1, 2, 4, 5], &sup).unwrap();
        assert!(z.coeffs().is_empty() && z.rhs() == 0);

        // Image not induced: {1,4} is an edge of this supergraph.
        let bad = Graph::new(6, &[(1, 2), (2, 4), (4, 5), (5, 1), (0, 1), (3, 4), (1, 4)]).unwrap();
        assert!(matches!(
            lift_zero_pad(&cut, &c4, &[1, 2, 4, 5], &bad),
            Err(CutError::InvalidLift(_))
        ));
        assert!(matches!(
            lift_zero_pad(&cut, &c4, &[1, 1, 4, 5], &sup),
            Err(CutError::InvalidLift(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let c4 = Graph::cycle(4);
        let cut = cut_i1(&c4, &cyc(&[0, 1, 2, 3])).unwrap();
        assert_eq!(cut.evaluate(&Point::new(vec![0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(cut.evaluate(&Point::new(vec![1.0, 0.0])).unwrap(), 0.0);
        assert!(matches!(
            cut.evaluate(&Point::new(vec![0.0])),
            Err(CutError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));

        // Conditional I1 on the fragment with every missing edge present and
        // no chords: 2 (1 - 3) + 2 * 3 = 2.
        let g = fragment();
        let cut = cut_i1(&g, &cyc(&[0, 1, 2, 3, 4])).unwrap();
        let f: Vec<_> = [(1, 2), (2, 3), (0, 4)]
            .iter()
            .map(|&(u, v)| g.fill_index(u, v).unwrap())
            .collect();
        let x = Point::from_fill(g.mc(), &f);
        assert_eq!(cut.evaluate(&x).unwrap(), 2.0);
    }

    #[test]
    fn line_format() {
        let c5 = Graph::cycle(5);
        let cut = cut_i4(&c5, &cyc(&[0, 1, 2, 3, 4]), 2, 0).unwrap();
        let line = cut.to_line();
        assert_eq!(line, "I4 1 3 1:1 2:1 4:1");
        let back = Cut::parse_line(&line, c5.mc()).unwrap();
        assert_eq!(back, cut);
        assert_eq!(back.family(), Family::I4);
        assert!(Cut::parse_line("I9 1 0", 5).is_err());
        assert!(Cut::parse_line("I1 1 2 0:1", 5).is_err());
    }

    #[test]
    fn pool_dedupes_structurally() {
        let c5 = Graph::cycle(5);
        let c = cyc(&[0, 1, 2, 3, 4]);
        let mut pool = CutPool::new();
        assert!(pool.insert(cut_i1(&c5, &c).unwrap()));
        assert!(!pool.insert(cut_i3(&c5, &c).unwrap()));
        assert!(!pool.insert(cut_i1(&c5, &c.rotated(2)).unwrap()));
        assert_eq!(pool.len(), 1);
    }
}
