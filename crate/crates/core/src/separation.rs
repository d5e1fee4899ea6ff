//! Finding violated cuts at integer and fractional points.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cuts::{
    cut_i1, cut_i2, cut_i2_relaxed, cut_i3, cut_i3_relaxed, cut_i4, i4_parameters, Cut, CutKey,
    Family,
};
use crate::graph::{Cycle, Graph, Point, Vertex};

pub const VIOLATION_TOLERANCE: f64 = 1e-6;
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_EXACT_I3_CAP: usize = 25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error("point has {got} coordinates, graph has {expected} fill edges")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer separation called on a fractional point (coordinate {index} = {value})")]
    NotInteger { index: usize, value: f64 },
    #[error("threshold {0} is outside (0, 1)")]
    BadThreshold(f64),
    #[error("coordinate {index} = {value} is outside [0, 1]")]
    OutOfBox { index: usize, value: f64 },
    #[error("exact I3 separation is limited to {cap} vertices (graph has {n}); use threshold separation instead")]
    TooLarge { n: usize, cap: usize },
}

/// Subset of the four cycle families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySet(u8);

impl FamilySet {
    pub fn all() -> Self {
        FamilySet(0b1111)
    }

    pub fn empty() -> Self {
        FamilySet(0)
    }

    fn bit(f: Family) -> u8 {
        match f {
            Family::I1 => 1,
            Family::I2 => 2,
            Family::I3 => 4,
            Family::I4 => 8,
            Family::Lifted => 0,
        }
    }

    pub fn with(mut self, f: Family) -> Self {
        self.0 |= Self::bit(f);
        self
    }

    pub fn contains(&self, f: Family) -> bool {
        self.0 & Self::bit(f) != 0
    }

    pub fn families(&self) -> Vec<Family> {
        Family::CYCLE_FAMILIES
            .into_iter()
            .filter(|f| self.contains(*f))
            .collect()
    }
}

impl Default for FamilySet {
    fn default() -> Self {
        Self::all()
    }
}

impl fmt::Display for FamilySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .families()
            .iter()
            .map(|f| f.to_string().to_lowercase())
            .collect();
        write!(f, "{}", names.join(","))
    }
}

impl FromStr for FamilySet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = FamilySet::empty();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let f: Family = part
                .to_uppercase()
                .parse()
                .map_err(|_| format!("unknown cut family '{part}'"))?;
            if f == Family::Lifted {
                return Err("only i1, i2, i3, i4 can be selected".into());
            }
            set = set.with(f);
        }
        Ok(set)
    }
}

#[derive(Debug, Clone)]
pub struct SeparationConfig {
    pub families: FamilySet,
    /// Distinct chordless cycles harvested per integer/threshold call.
    pub max_cycles: usize,
    /// Emit every violated position variant of I2/I4 instead of the most
    /// violated one.
    pub emit_all_positions: bool,
    pub violation_tolerance: f64,
    pub exact_i3_cap: usize,
    /// Cap on cuts returned by one exact-separator call (most violated kept).
    pub max_exact_cuts: usize,
    /// Node budget of the simple-cycle search used when the shortest closed
    /// walk of the I3 separator repeats a vertex.
    pub i3_fallback_budget: usize,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            families: FamilySet::all(),
            max_cycles: 10,
            emit_all_positions: false,
            violation_tolerance: VIOLATION_TOLERANCE,
            exact_i3_cap: DEFAULT_EXACT_I3_CAP,
            max_exact_cuts: 50,
            i3_fallback_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Integer,
    Threshold,
    ExactI2,
    ExactI3,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Source::Integer => "INTEGER",
            Source::Threshold => "THRESHOLD",
            Source::ExactI2 => "EXACT_I2",
            Source::ExactI3 => "EXACT_I3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeparationStats {
    pub cycles_examined: usize,
    pub dijkstra_calls: usize,
    /// Candidates dropped by the final re-evaluation.
    pub rejected: usize,
    pub fallback_searches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolatedCut {
    pub cut: Cut,
    pub violation: f64,
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub cuts: Vec<ViolatedCut>,
    pub source: Source,
    pub stats: SeparationStats,
    /// Cycles the cuts were derived from (integer/threshold separation).
    pub cycles: Vec<Cycle>,
}

impl SeparationReport {
    fn new(source: Source) -> Self {
        SeparationReport {
            cuts: Vec::new(),
            source,
            stats: SeparationStats::default(),
            cycles: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    /// Re-evaluates at `x` and appends if strictly violated and new.
    fn offer(&mut self, seen: &mut HashSet<CutKey>, cut: Cut, x: &[f64], tol: f64) {
        let violation = cut.violation(x);
        if violation <= tol {
            self.stats.rejected += 1;
            return;
        }
        if seen.insert(cut.key()) {
            self.cuts.push(ViolatedCut { cut, violation });
        }
    }
}

fn check_dim(g: &Graph, x: &Point) -> Result<(), SeparationError> {
    if x.len() != g.mc() {
        return Err(SeparationError::DimensionMismatch {
            expected: g.mc(),
            got: x.len(),
        });
    }
    Ok(())
}

fn check_box(x: &Point, tol: f64) -> Result<(), SeparationError> {
    for (index, &value) in x.values().iter().enumerate() {
        if !(value >= -tol && value <= 1.0 + tol) {
            return Err(SeparationError::OutOfBox { index, value });
        }
    }
    Ok(())
}

/// Violated cuts at an integer point, from up to `max_cycles` chordless
/// cycles of `G + E(x)`. Empty exactly when `G + E(x)` is chordal.
pub fn separate_integer(
    g: &Graph,
    x: &Point,
    cfg: &SeparationConfig,
) -> Result<SeparationReport, SeparationError> {
    check_dim(g, x)?;
    if let Some((index, &value)) =
        x.values().iter().enumerate().find(|(_, &v)| {
            v.abs() > INTEGRALITY_TOLERANCE && (v - 1.0).abs() > INTEGRALITY_TOLERANCE
        })
    {
        return Err(SeparationError::NotInteger { index, value });
    }
    Ok(cycle_separation(g, x, &x.support(), cfg, Source::Integer))
}

/// Integer machinery on `G + E^delta(x)`, keeping only cuts violated at the
/// fractional `x` itself.
pub fn separate_threshold(
    g: &Graph,
    x: &Point,
    delta: f64,
    cfg: &SeparationConfig,
) -> Result<SeparationReport, SeparationError> {
    check_dim(g, x)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SeparationError::BadThreshold(delta));
    }
    check_box(x, 1e-9)?;
    Ok(cycle_separation(
        g,
        x,
        &x.at_least(delta),
        cfg,
        Source::Threshold,
    ))
}

fn cycle_separation(
    g: &Graph,
    x: &Point,
    fill: &[crate::graph::FillIndex],
    cfg: &SeparationConfig,
    source: Source,
) -> SeparationReport {
    let adj = g.adjacency_with(fill.iter().copied());
    let cycles = adj.chordless_cycles(cfg.max_cycles);
    let mut report = SeparationReport::new(source);
    let mut seen = HashSet::new();
    let xv = x.values();
    for c in &cycles {
        report.stats.cycles_examined += 1;
        for cut in cycle_candidates(g, c, cfg, xv) {
            report.offer(&mut seen, cut, xv, cfg.violation_tolerance);
        }
    }
    report.cycles = cycles;
    report
}

/// Per enabled family, the most violated variant on `c` (first on ties), or
/// all violated variants with `emit_all_positions`.
fn cycle_candidates(g: &Graph, c: &Cycle, cfg: &SeparationConfig, x: &[f64]) -> Vec<Cut> {
    let k = c.len();
    let mut out = Vec::new();
    for family in cfg.families.families() {
        let variants: Vec<Cut> = match family {
            Family::I1 => cut_i1(g, c).into_iter().collect(),
            Family::I2 => (0..k).filter_map(|i| cut_i2(g, c, i).ok()).collect(),
            Family::I3 if k >= 5 => cut_i3(g, c).into_iter().collect(),
            Family::I4 if k >= 5 => i4_parameters(k)
                .into_iter()
                .filter_map(|(i, j)| cut_i4(g, c, i, j).ok())
                .collect(),
            _ => Vec::new(),
        };
        if cfg.emit_all_positions {
            out.extend(variants);
        } else {
            let mut best: Option<(f64, Cut)> = None;
            for cut in variants {
                let v = cut.violation(x);
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, cut));
                }
            }
            out.extend(best.map(|(_, c)| c));
        }
    }
    out
}

/// `x` on fill pairs, one on edges of `g`, as a dense symmetric matrix.
fn extended(g: &Graph, x: &Point) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut m = vec![vec![0.0; n]; n];
    for (u, row) in m.iter_mut().enumerate() {
        for (v, slot) in row.iter_mut().enumerate() {
            if u != v {
                *slot = match g.fill_index(u, v) {
                    Some(f) => x.get(f),
                    None => 1.0,
                };
            }
        }
    }
    m
}

fn keep_most_violated(report: &mut SeparationReport, cap: usize) {
    report.cuts.sort_by(|a, b| {
        b.violation
            .partial_cmp(&a.violation)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.cut.key().cmp(&b.cut.key()))
    });
    report.cuts.truncate(cap);
}

/// Exact separation of the extended I2 inequalities via one shortest-path
/// query per triple `(v_{i-1}, v_i, v_{i+1})`.
pub fn separate_i2_exact(
    g: &Graph,
    x: &Point,
    cfg: &SeparationConfig,
) -> Result<SeparationReport, SeparationError> {
    check_dim(g, x)?;
    check_box(x, 1e-9)?;
    let n = g.n();
    let xb = extended(g, x);
    let xv = x.values();
    let mut report = SeparationReport::new(Source::ExactI2);
    let mut seen = HashSet::new();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    for c in 0..n {
        for a in 0..n {
            if a == c {
                continue;
            }
            for b in a + 1..n {
                if b == c {
                    continue;
                }
                let threshold = 1.0 - xb[a][b] - (1.0 - 1.5 * xb[a][c]) - (1.0 - 1.5 * xb[c][b]);
                if threshold <= cfg.violation_tolerance {
                    continue;
                }
                report.stats.dijkstra_calls += 1;
                // Dense Dijkstra from b to a on V \ {c}, direct arc b-a
                // forbidden. Weights are nonnegative so paths are simple.
                dist.iter_mut().for_each(|d| *d = f64::INFINITY);
                done.iter_mut().for_each(|d| *d = false);
                dist[b] = 0.0;
                done[c] = true;
                loop {
                    let mut cur = usize::MAX;
                    for v in 0..n {
                        if !done[v]
                            && dist[v].is_finite()
                            && (cur == usize::MAX || dist[v] < dist[cur])
                        {
                            cur = v;
                        }
                    }
                    if cur == usize::MAX || cur == a || dist[cur] >= threshold {
                        break;
                    }
                    done[cur] = true;
                    for v in 0..n {
                        if done[v] || (cur == b && v == a) {
                            continue;
                        }
                        let w = 1.0 - xb[cur][v] + (xb[c][cur] + xb[c][v]) / 2.0;
                        let nd = dist[cur] + w;
                        if nd < dist[v] {
                            dist[v] = nd;
                            pred[v] = cur;
                        }
                    }
                }
                if !(dist[a] < threshold - cfg.violation_tolerance) {
                    continue;
                }
                let mut path = vec![a];
                let mut y = a;
                while y != b {
                    y = pred[y];
                    path.push(y);
                }
                // path = a, ..., b; cycle reads a, c, b, ..., back to a.
                path.reverse();
                let mut verts = vec![a, c];
                verts.extend(path[..path.len() - 1].iter());
                let Ok(cycle) = Cycle::new(verts) else {
                    report.stats.rejected += 1;
                    continue;
                };
                report.stats.cycles_examined += 1;
                match cut_i2_relaxed(g, &cycle, 1) {
                    Ok(cut) => report.offer(&mut seen, cut, xv, cfg.violation_tolerance),
                    Err(_) => report.stats.rejected += 1,
                }
            }
        }
    }
    keep_most_violated(&mut report, cfg.max_exact_cuts);
    Ok(report)
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    arcs: usize,
    state: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    // Reversed for a min-heap; ties toward fewer arcs, then lower state.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.arcs.cmp(&self.arcs))
            .then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact separation of the extended I3 inequalities. Each cycle is read
/// from its smallest vertex `u` as `(u, v, w, t, ...)`; for every such
/// prefix a shortest path in the digraph on vertex pairs closes the cycle.
pub fn separate_i3_exact(
    g: &Graph,
    x: &Point,
    cfg: &SeparationConfig,
) -> Result<SeparationReport, SeparationError> {
    check_dim(g, x)?;
    check_box(x, 1e-9)?;
    let n = g.n();
    if n > cfg.exact_i3_cap {
        return Err(SeparationError::TooLarge {
            n,
            cap: cfg.exact_i3_cap,
        });
    }
    let xb = extended(g, x);
    let arcw = |a: usize, b: usize, c: usize| (1.0 - xb[a][b]) + xb[a][c] + (1.0 - xb[b][c]);
    let limit = 2.0 - cfg.violation_tolerance;
    let xv = x.values();
    let mut report = SeparationReport::new(Source::ExactI3);
    let mut seen = HashSet::new();
    let ns = n * n;
    let mut dist = vec![f64::INFINITY; ns];
    let mut arcs = vec![0usize; ns];
    let mut pred = vec![usize::MAX; ns];
    let mut settled = vec![false; ns];
    let mut heap = BinaryHeap::new();
    for u in 0..n {
        for v in u + 1..n {
            for w in u + 1..n {
                if w == v {
                    continue;
                }
                let w_uvw = arcw(u, v, w);
                if w_uvw >= limit {
                    continue;
                }
                for t in u + 1..n {
                    if t == v || t == w {
                        continue;
                    }
                    let w0 = w_uvw + arcw(v, w, t);
                    if w0 >= limit {
                        continue;
                    }
                    let in_z = |z: usize| z > u && z != v && z != w && z != t;
                    report.stats.dijkstra_calls += 1;
                    dist.iter_mut().for_each(|d| *d = f64::INFINITY);
                    settled.iter_mut().for_each(|s| *s = false);
                    heap.clear();
                    for z in (0..n).filter(|&z| in_z(z)) {
                        let s = t * n + z;
                        let d = w0 + arcw(w, t, z);
                        if d < limit {
                            dist[s] = d;
                            arcs[s] = 1;
                            pred[s] = usize::MAX;
                            heap.push(HeapEntry {
                                dist: d,
                                arcs: 1,
                                state: s,
                            });
                        }
                    }
                    // Best closing found so far: (total, arcs, state).
                    let mut best: Option<(f64, usize, usize)> = None;
                    while let Some(HeapEntry {
                        dist: d,
                        arcs: na,
                        state: s,
                    }) = heap.pop()
                    {
                        if settled[s] || d > dist[s] {
                            continue;
                        }
                        if let Some((bt, _, _)) = best {
                            if d >= bt {
                                break;
                            }
                        }
                        settled[s] = true;
                        let (p, c) = (s / n, s % n);
                        let close = d + arcw(p, c, u) + arcw(c, u, v);
                        if close < limit {
                            let better = match best {
                                None => true,
                                Some((bt, ba, _)) => close < bt || (close == bt && na < ba),
                            };
                            if better {
                                best = Some((close, na, s));
                            }
                        }
                        for z in (0..n).filter(|&z| in_z(z) && z != p && z != c) {
                            let s2 = c * n + z;
                            let d2 = d + arcw(p, c, z);
                            if d2 >= limit || settled[s2] {
                                continue;
                            }
                            if d2 < dist[s2] || (d2 == dist[s2] && na + 1 < arcs[s2]) {
                                dist[s2] = d2;
                                arcs[s2] = na + 1;
                                pred[s2] = s;
                                heap.push(HeapEntry {
                                    dist: d2,
                                    arcs: na + 1,
                                    state: s2,
                                });
                            }
                        }
                    }
                    let Some((_, _, end)) = best else { continue };
                    let mut tail = Vec::new();
                    let mut s = end;
                    while s != usize::MAX {
                        tail.push(s % n);
                        s = pred[s];
                    }
                    tail.reverse();
                    let mut walk = vec![u, v, w, t];
                    walk.extend(tail);
                    let cycle = match Cycle::new(walk) {
                        Ok(c) => Some(c),
                        Err(_) => {
                            report.stats.fallback_searches += 1;
                            shortest_simple_closing(
                                &arcw,
                                n,
                                [u, v, w, t],
                                limit,
                                cfg.i3_fallback_budget,
                            )
                        }
                    };
                    let Some(cycle) = cycle else { continue };
                    report.stats.cycles_examined += 1;
                    match cut_i3_relaxed(g, &cycle) {
                        Ok(cut) => report.offer(&mut seen, cut, xv, cfg.violation_tolerance),
                        Err(_) => report.stats.rejected += 1,
                    }
                }
            }
        }
    }
    keep_most_violated(&mut report, cfg.max_exact_cuts);
    Ok(report)
}

/// Depth-first search for the lightest simple cycle starting with `prefix`
/// whose closed-walk weight is below `limit`.
fn shortest_simple_closing(
    arcw: &dyn Fn(usize, usize, usize) -> f64,
    n: usize,
    prefix: [Vertex; 4],
    limit: f64,
    budget: usize,
) -> Option<Cycle> {
    let [u, v, w, t] = prefix;
    let mut used = vec![false; n];
    for p in prefix {
        used[p] = true;
    }
    for slot in used.iter_mut().take(u) {
        *slot = true;
    }
    struct Search<'a> {
        arcw: &'a dyn Fn(usize, usize, usize) -> f64,
        n: usize,
        u: usize,
        v: usize,
        used: Vec<bool>,
        path: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
        limit: f64,
        budget: usize,
    }
    impl Search<'_> {
        fn go(&mut self, d: f64) {
            if self.budget == 0 {
                return;
            }
            self.budget -= 1;
            let k = self.path.len();
            let (p, c) = (self.path[k - 2], self.path[k - 1]);
            let bound = self.best.as_ref().map_or(self.limit, |b| b.0);
            if k >= 5 {
                let close = d + (self.arcw)(p, c, self.u) + (self.arcw)(c, self.u, self.v);
                if close < bound {
                    self.best = Some((close, self.path.clone()));
                }
            }
            for z in 0..self.n {
                if self.used[z] {
                    continue;
                }
                let d2 = d + (self.arcw)(p, c, z);
                let bound = self.best.as_ref().map_or(self.limit, |b| b.0);
                if d2 >= bound {
                    continue;
                }
                self.used[z] = true;
                self.path.push(z);
                self.go(d2);
                self.path.pop();
                self.used[z] = false;
            }
        }
    }
    let mut s = Search {
        arcw,
        n,
        u,
        v,
        used,
        path: vec![u, v, w, t],
        best: None,
        limit,
        budget,
    };
    let d0 = arcw(u, v, w) + arcw(v, w, t);
    s.go(d0);
    if s.budget == 0 {
        log::warn!("I3 simple-cycle search budget exhausted for prefix {prefix:?}");
    }
    s.best.and_then(|(_, p)| Cycle::new(p).ok())
}
