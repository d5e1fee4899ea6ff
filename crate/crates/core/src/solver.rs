//! Branch-and-cut for minimum chordal completion.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::cuts::{Cut, CutPool, Family};
use crate::graph::{FillIndex, Graph, Point};
use crate::heuristics::{chordalize_with_order, dynamic_min_degree_order, mdo_completion, repair};
use crate::lp::{DualSimplex, LpConfig, LpStatus};
use crate::separation::{
    separate_i2_exact, separate_i3_exact, separate_integer, separate_threshold, FamilySet,
    SeparationConfig, INTEGRALITY_TOLERANCE,
};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub delta: f64,
    pub families: FamilySet,
    pub exact_i2: bool,
    pub exact_i3: bool,
    pub max_cycles_per_call: usize,
    pub time_limit_s: Option<f64>,
    pub node_limit: Option<usize>,
    /// Recorded in the output; the search itself uses no randomness.
    pub seed: u64,
    pub emit_all_positions: bool,
    /// Separation rounds at one node before branching is forced.
    pub max_rounds: usize,
    /// Run the rounding heuristic every this many nodes (0 disables).
    pub heuristic_every: usize,
    pub dynamic_mdo: bool,
    pub exact_i3_cap: usize,
    /// Check every pool cut against every incumbent found.
    pub verify_cuts: bool,
    pub lp: LpConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            delta: 0.5,
            families: FamilySet::all(),
            exact_i2: false,
            exact_i3: false,
            max_cycles_per_call: 10,
            time_limit_s: None,
            node_limit: None,
            seed: 0,
            emit_all_positions: false,
            max_rounds: 50,
            heuristic_every: 100,
            dynamic_mdo: false,
            exact_i3_cap: crate::separation::DEFAULT_EXACT_I3_CAP,
            verify_cuts: cfg!(debug_assertions),
            lp: LpConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub delta: f64,
    pub cuts: String,
    pub exact_i2: bool,
    pub exact_i3: bool,
    pub max_cycles_per_call: usize,
    pub time_limit_s: Option<f64>,
    pub node_limit: Option<usize>,
    pub seed: u64,
    pub emit_all_positions: bool,
    pub max_rounds: usize,
    pub dynamic_mdo: bool,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !self.families.contains(Family::I1) {
            return Err("the I1 family is required for an exact search".into());
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            delta: self.delta,
            cuts: self.families.to_string(),
            exact_i2: self.exact_i2,
            exact_i3: self.exact_i3,
            max_cycles_per_call: self.max_cycles_per_call,
            time_limit_s: self.time_limit_s,
            node_limit: self.node_limit,
            seed: self.seed,
            emit_all_positions: self.emit_all_positions,
            max_rounds: self.max_rounds,
            dynamic_mdo: self.dynamic_mdo,
        }
    }

    fn separation(&self) -> SeparationConfig {
        SeparationConfig {
            families: self.families,
            max_cycles: self.max_cycles_per_call,
            emit_all_positions: self.emit_all_positions,
            exact_i3_cap: self.exact_i3_cap,
            ..SeparationConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Optimal,
    Feasible,
    TimeLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "OPTIMAL",
            Status::Feasible => "FEASIBLE",
            Status::TimeLimit => "TIME_LIMIT",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CutCounts {
    pub i1: usize,
    pub i2: usize,
    pub i3: usize,
    pub i4: usize,
}

impl CutCounts {
    fn bump(&mut self, f: Family) {
        match f {
            Family::I1 => self.i1 += 1,
            Family::I2 => self.i2 += 1,
            Family::I3 => self.i3 += 1,
            Family::I4 => self.i4 += 1,
            Family::Lifted => unreachable!("the search only generates cycle cuts"),
        }
    }

    pub fn total(&self) -> usize {
        self.i1 + self.i2 + self.i3 + self.i4
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Status,
    pub best_fill: Vec<FillIndex>,
    pub lower_bound: i64,
    pub upper_bound: i64,
    pub nodes: usize,
    pub cuts_by_family: CutCounts,
    /// Size of the cut pool, i.e. every distinct cut added to the LP.
    pub total_cuts: usize,
    pub root_bound: f64,
    pub mdo_upper_bound: i64,
    pub lp_iterations: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct ResultJson {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub mc: usize,
    pub status: Status,
    pub lb: i64,
    pub ub: i64,
    pub fill_edges: Vec<[usize; 2]>,
    pub nodes: usize,
    pub cuts: CutCounts,
    pub time_s: f64,
    pub config: ConfigEcho,
}

impl SolveResult {
    pub fn to_json(&self, g: &Graph, instance: &str, cfg: &SolverConfig) -> ResultJson {
        ResultJson {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            mc: g.mc(),
            status: self.status,
            lb: self.lower_bound,
            ub: self.upper_bound,
            fill_edges: self
                .best_fill
                .iter()
                .map(|&f| {
                    let (u, v) = g.fill_pair(f);
                    [u, v]
                })
                .collect(),
            nodes: self.nodes,
            cuts: self.cuts_by_family,
            time_s: self.wall_time_s,
            config: cfg.echo(),
        }
    }
}

/// Incumbent and cut pool before the search starts.
pub struct RootState {
    pub incumbent: Vec<FillIndex>,
    pub pool: CutPool,
}

/// MDO completion as incumbent and the cuts of the bare graph's chordless
/// cycles (integer separation at `x = 0`) as initial pool.
pub fn root_initialize(g: &Graph, cfg: &SolverConfig) -> RootState {
    let incumbent = if cfg.dynamic_mdo {
        chordalize_with_order(g, &dynamic_min_degree_order(g))
    } else {
        mdo_completion(g)
    };
    let mut pool = CutPool::new();
    let rep = separate_integer(g, &Point::zeros(g.mc()), &cfg.separation())
        .expect("the zero point is integral");
    for c in rep.cuts {
        pool.insert(c.cut);
    }
    RootState { incumbent, pool }
}

struct Node {
    bound: i64,
    depth: usize,
    id: usize,
    fixings: Vec<(usize, bool)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl Ord for Node {
    // Max-heap order: lowest bound first, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .cmp(&self.bound)
            .then_with(|| self.depth.cmp(&other.depth))
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'a> {
    g: &'a Graph,
    cfg: &'a SolverConfig,
    sep: SeparationConfig,
    lp: DualSimplex,
    pool: CutPool,
    counts: CutCounts,
    incumbent: Vec<FillIndex>,
    start: Instant,
    lp_iterations: usize,
    fixed: Vec<usize>,
}

enum NodeOutcome {
    Pruned,
    Branch { bound: i64, var: usize },
    TimeUp,
}

impl<'a> Search<'a> {
    fn ub(&self) -> i64 {
        self.incumbent.len() as i64
    }

    fn out_of_time(&self) -> bool {
        self.cfg
            .time_limit_s
            .is_some_and(|t| self.start.elapsed().as_secs_f64() >= t)
    }

    fn add_cut(&mut self, cut: Cut) -> bool {
        if self.cfg.verify_cuts {
            let mut in_fill = vec![false; self.g.mc()];
            for f in &self.incumbent {
                in_fill[f.0] = true;
            }
            assert!(
                cut.violation_at_fill(&in_fill) <= 0,
                "cut {cut} cuts off the incumbent"
            );
        }
        let family = cut.family();
        let row: Vec<(usize, f64)> = cut.coeffs().iter().map(|&(f, a)| (f.0, a as f64)).collect();
        let rhs = cut.rhs() as f64;
        if self.pool.insert(cut) {
            self.lp.add_row(row, rhs);
            self.counts.bump(family);
            true
        } else {
            false
        }
    }

    fn offer_incumbent(&mut self, fill: Vec<FillIndex>) {
        if (fill.len() as i64) < self.ub() {
            debug_assert!(self.g.is_valid_completion(&fill));
            log::info!(
                "incumbent {} -> {} at {:.2}s",
                self.ub(),
                fill.len(),
                self.start.elapsed().as_secs_f64()
            );
            if self.cfg.verify_cuts {
                let mut in_fill = vec![false; self.g.mc()];
                for f in &fill {
                    in_fill[f.0] = true;
                }
                for c in self.pool.cuts() {
                    assert!(
                        c.violation_at_fill(&in_fill) <= 0,
                        "cut {c} cuts off a completion"
                    );
                }
            }
            self.incumbent = fill;
        }
    }

    fn apply_fixings(&mut self, fixings: &[(usize, bool)]) {
        for &j in &self.fixed {
            self.lp.set_bounds(j, 0.0, 1.0);
        }
        self.fixed.clear();
        for &(j, one) in fixings {
            let v = if one { 1.0 } else { 0.0 };
            self.lp.set_bounds(j, v, v);
            self.fixed.push(j);
        }
    }

    fn process(&mut self, fixings: &[(usize, bool)], node_index: usize) -> NodeOutcome {
        self.apply_fixings(fixings);
        let is_fixed = {
            let mut v = vec![false; self.g.mc()];
            for &(j, _) in fixings {
                v[j] = true;
            }
            v
        };
        let mut rounds = 0;
        loop {
            if self.out_of_time() {
                return NodeOutcome::TimeUp;
            }
            let res = self.lp.solve(&self.cfg.lp);
            self.lp_iterations += res.iterations;
            match res.status {
                LpStatus::Infeasible => return NodeOutcome::Pruned,
                LpStatus::IterationLimit => {
                    log::warn!(
                        "LP iteration limit at node {node_index}; branching without a bound"
                    );
                    return match (0..self.g.mc()).find(|&j| !is_fixed[j]) {
                        Some(var) => NodeOutcome::Branch { bound: 0, var },
                        None => {
                            let fill: Vec<FillIndex> = fixings
                                .iter()
                                .filter(|&&(_, one)| one)
                                .map(|&(j, _)| FillIndex(j))
                                .collect();
                            self.offer_incumbent(repair(self.g, &fill, self.cfg.dynamic_mdo));
                            NodeOutcome::Pruned
                        }
                    };
                }
                LpStatus::Optimal => {}
            }
            let bound = (res.objective - 1e-6).ceil() as i64;
            if bound >= self.ub() {
                return NodeOutcome::Pruned;
            }
            let x = Point::new(res.point);
            if x.is_integer(INTEGRALITY_TOLERANCE) {
                let x = Point::from_fill(self.g.mc(), &x.support());
                let rep = separate_integer(self.g, &x, &self.sep).expect("point is integral");
                if rep.is_empty() {
                    self.offer_incumbent(x.support());
                    return NodeOutcome::Pruned;
                }
                for c in rep.cuts {
                    self.add_cut(c.cut);
                }
                self.offer_incumbent(repair(self.g, &x.support(), self.cfg.dynamic_mdo));
                rounds += 1;
                if rounds > self.cfg.max_rounds {
                    // Some interior pair of a chordless cycle must be added.
                    let chord = rep.cycles[0]
                        .interior()
                        .filter_map(|(u, v)| self.g.fill_index(u, v))
                        .find(|f| !is_fixed[f.0]);
                    let var = chord
                        .map(|f| f.0)
                        .or_else(|| (0..self.g.mc()).find(|&j| !is_fixed[j]));
                    return match var {
                        Some(var) => NodeOutcome::Branch { bound, var },
                        None => NodeOutcome::Pruned,
                    };
                }
                continue;
            }
            if self.cfg.heuristic_every > 0
                && node_index.is_multiple_of(self.cfg.heuristic_every)
                && rounds == 0
            {
                let rounded = x.at_least(self.cfg.delta);
                self.offer_incumbent(repair(self.g, &rounded, self.cfg.dynamic_mdo));
                if bound >= self.ub() {
                    return NodeOutcome::Pruned;
                }
            }
            let mut added = 0;
            if rounds < self.cfg.max_rounds {
                let mut cuts = Vec::new();
                if let Ok(rep) = separate_threshold(self.g, &x, self.cfg.delta, &self.sep) {
                    cuts.extend(rep.cuts);
                }
                if self.cfg.exact_i2 && self.cfg.families.contains(Family::I2) {
                    if let Ok(rep) = separate_i2_exact(self.g, &x, &self.sep) {
                        cuts.extend(rep.cuts);
                    }
                }
                if self.cfg.exact_i3
                    && self.cfg.families.contains(Family::I3)
                    && self.g.n() <= self.cfg.exact_i3_cap
                {
                    if let Ok(rep) = separate_i3_exact(self.g, &x, &self.sep) {
                        cuts.extend(rep.cuts);
                    }
                }
                for c in cuts {
                    if self.add_cut(c.cut) {
                        added += 1;
                    }
                }
            }
            if added > 0 {
                rounds += 1;
                continue;
            }
            let var = most_fractional(x.values(), &is_fixed);
            return match var {
                Some(var) => NodeOutcome::Branch { bound, var },
                None => NodeOutcome::Pruned,
            };
        }
    }
}

fn most_fractional(x: &[f64], fixed: &[bool]) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (j, &v) in x.iter().enumerate() {
        if fixed[j] {
            continue;
        }
        let frac = (v - v.round()).abs();
        if frac <= INTEGRALITY_TOLERANCE {
            continue;
        }
        if best.is_none_or(|(b, _)| frac > b + 1e-12) {
            best = Some((frac, j));
        }
    }
    best.map(|(_, j)| j)
}

pub fn solve(g: &Graph, cfg: &SolverConfig) -> SolveResult {
    cfg.validate().expect("invalid solver configuration");
    let start = Instant::now();
    let root = root_initialize(g, cfg);
    let mdo_ub = root.incumbent.len() as i64;
    let mc = g.mc();
    let mut search = Search {
        g,
        cfg,
        sep: cfg.separation(),
        lp: DualSimplex::new(vec![1.0; mc], vec![0.0; mc], vec![1.0; mc]),
        pool: CutPool::new(),
        counts: CutCounts::default(),
        incumbent: root.incumbent,
        start,
        lp_iterations: 0,
        fixed: Vec::new(),
    };
    for cut in root.pool.cuts() {
        search.add_cut(cut.clone());
    }
    log::info!(
        "n={} m={} mc={} MDO upper bound {} root cuts {}",
        g.n(),
        g.m(),
        mc,
        mdo_ub,
        search.pool.len()
    );

    let mut open = BinaryHeap::new();
    let mut next_id = 0;
    open.push(Node {
        bound: 0,
        depth: 0,
        id: next_id,
        fixings: Vec::new(),
    });
    next_id += 1;
    let mut nodes = 0;
    let mut root_bound = f64::NAN;
    let mut stopped: Option<(Status, i64)> = None;
    while let Some(node) = open.pop() {
        if node.bound >= search.ub() {
            continue;
        }
        if cfg.node_limit.is_some_and(|l| nodes >= l) {
            stopped = Some((Status::Feasible, node.bound));
            open.push(node);
            break;
        }
        nodes += 1;
        let outcome = search.process(&node.fixings, nodes);
        if nodes == 1 {
            root_bound = match outcome {
                NodeOutcome::Branch { bound, .. } => bound as f64,
                _ => search.ub() as f64,
            };
        }
        match outcome {
            NodeOutcome::Pruned => {}
            NodeOutcome::TimeUp => {
                stopped = Some((Status::TimeLimit, node.bound));
                open.push(node);
                break;
            }
            NodeOutcome::Branch { bound, var } => {
                let bound = bound.max(node.bound);
                if bound >= search.ub() {
                    continue;
                }
                log::debug!(
                    "node {nodes}: bound {bound}, branching on {var}, open {}",
                    open.len()
                );
                for one in [true, false] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((var, one));
                    open.push(Node {
                        bound,
                        depth: node.depth + 1,
                        id: next_id,
                        fixings,
                    });
                    next_id += 1;
                }
            }
        }
    }
    let ub = search.ub();
    let (status, lb) = match stopped {
        None => (Status::Optimal, ub),
        Some((status, _)) => {
            let lb = open.iter().map(|n| n.bound).min().unwrap_or(ub).min(ub);
            if lb >= ub {
                (Status::Optimal, ub)
            } else {
                (status, lb)
            }
        }
    };
    let mut best_fill = search.incumbent;
    best_fill.sort();
    SolveResult {
        status,
        best_fill,
        lower_bound: lb,
        upper_bound: ub,
        nodes,
        cuts_by_family: search.counts,
        total_cuts: search.pool.len(),
        root_bound,
        mdo_upper_bound: mdo_ub,
        lp_iterations: search.lp_iterations,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}
