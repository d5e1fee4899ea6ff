//! Linear programs `min c.x  s.t.  a_r.x >= b_r,  l <= x <= u` solved by a
//! bounded dual simplex.
//!
//! A basis is a set of `n` linearly independent active constraints drawn
//! from the rows and the two bound families, so the working matrix is always
//! `n x n` regardless of how many rows have been added. Because every
//! variable is boxed, putting each variable at the bound its cost points to
//! gives a dual feasible start without a phase one. Adding rows or changing
//! bounds keeps the current basis dual feasible, which is what makes
//! re-solves after cuts and branching cheap.

use std::fmt;

#[derive(Debug, Clone, Copy)]
pub struct LpConfig {
    pub feas_tol: f64,
    pub pivot_tol: f64,
    /// Defaults to `50 * (rows + vars)` when `None`.
    pub max_iterations: Option<usize>,
    pub refactor_every: usize,
    /// Iterations without dual objective progress before Bland's rule.
    pub stall_threshold: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            feas_tol: 1e-7,
            pivot_tol: 1e-9,
            max_iterations: None,
            refactor_every: 100,
            stall_threshold: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

/// One of the constraints a basis can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    Row(usize),
    Lower(usize),
    Upper(usize),
}

/// Nonnegative multipliers `y` with `sum y_k g_k = 0` and `sum y_k h_k > 0`
/// over constraints written as `g_k.x >= h_k` (upper bounds as `-x_j >= -u_j`).
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<(Constraint, f64)>,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    pub point: Vec<f64>,
    pub iterations: usize,
    pub certificate: Option<FarkasCertificate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    /// `min sum x` over `[0, 1]^n` with no rows.
    pub fn unit_box(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![1.0; num_vars],
            rows: Vec::new(),
            lower: vec![0.0; num_vars],
            upper: vec![1.0; num_vars],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(LpRow { coeffs, rhs });
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.objective.len() != self.num_vars
            || self.lower.len() != self.num_vars
            || self.upper.len() != self.num_vars
        {
            return Err("objective/bounds length differs from num_vars".into());
        }
        for (j, (l, u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(l.is_finite() && u.is_finite()) || l > u {
                return Err(format!("bad bounds on variable {j}: [{l}, {u}]"));
            }
        }
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(&(j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
                return Err(format!("row {r} references variable {j}"));
            }
        }
        Ok(())
    }
}

/// Solves `p` from scratch.
pub fn solve_lp(p: &LpProblem, cfg: &LpConfig) -> LpResult {
    let mut s = DualSimplex::new(p.objective.clone(), p.lower.clone(), p.upper.clone());
    for row in &p.rows {
        s.add_row(row.coeffs.clone(), row.rhs);
    }
    s.solve(cfg)
}

/// Warm-startable solver state.
#[derive(Clone)]
pub struct DualSimplex {
    n: usize,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<LpRow>,
    row_norm: Vec<f64>,
    basis: Vec<Constraint>,
    /// Inverse of the basis matrix whose row `p` is the normal of
    /// `basis[p]`; row-major.
    binv: Vec<f64>,
    /// Dual multipliers of the basic constraints.
    duals: Vec<f64>,
    in_basis_row: Vec<bool>,
    x: Vec<f64>,
    since_refactor: usize,
}

impl fmt::Debug for DualSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualSimplex")
            .field("n", &self.n)
            .field("rows", &self.rows.len())
            .finish()
    }
}

impl DualSimplex {
    pub fn new(cost: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let n = cost.len();
        assert_eq!(lower.len(), n);
        assert_eq!(upper.len(), n);
        let mut s = DualSimplex {
            n,
            cost,
            lower,
            upper,
            rows: Vec::new(),
            row_norm: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            duals: Vec::new(),
            in_basis_row: Vec::new(),
            x: vec![0.0; n],
            since_refactor: 0,
        };
        s.reset_basis();
        s
    }

    fn reset_basis(&mut self) {
        let n = self.n;
        self.basis = (0..n)
            .map(|j| {
                if self.cost[j] >= 0.0 {
                    Constraint::Lower(j)
                } else {
                    Constraint::Upper(j)
                }
            })
            .collect();
        self.binv = vec![0.0; n * n];
        for j in 0..n {
            self.binv[j * n + j] = if self.cost[j] >= 0.0 { 1.0 } else { -1.0 };
        }
        self.duals = self.cost.iter().map(|c| c.abs()).collect();
        self.in_basis_row.iter_mut().for_each(|b| *b = false);
        self.since_refactor = 0;
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        let norm = coeffs.iter().map(|(_, a)| a * a).sum::<f64>().sqrt();
        self.row_norm.push(if norm > 0.0 { norm } else { 1.0 });
        self.rows.push(LpRow { coeffs, rhs });
        self.in_basis_row.push(false);
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    fn normal_dot(&self, k: Constraint, x: &[f64]) -> f64 {
        match k {
            Constraint::Row(r) => self.rows[r].coeffs.iter().map(|&(j, a)| a * x[j]).sum(),
            Constraint::Lower(j) => x[j],
            Constraint::Upper(j) => -x[j],
        }
    }

    fn rhs(&self, k: Constraint) -> f64 {
        match k {
            Constraint::Row(r) => self.rows[r].rhs,
            Constraint::Lower(j) => self.lower[j],
            Constraint::Upper(j) => -self.upper[j],
        }
    }

    /// `alpha = B^{-T} g_k`, i.e. the expression of `g_k` in the basis normals.
    fn express(&self, k: Constraint) -> Vec<f64> {
        let n = self.n;
        let mut alpha = vec![0.0; n];
        let mut add = |j: usize, a: f64| {
            let row = &self.binv[j * n..(j + 1) * n];
            for (al, b) in alpha.iter_mut().zip(row) {
                *al += a * b;
            }
        };
        match k {
            Constraint::Row(r) => {
                for &(j, a) in &self.rows[r].coeffs {
                    add(j, a);
                }
            }
            Constraint::Lower(j) => add(j, 1.0),
            Constraint::Upper(j) => add(j, -1.0),
        }
        alpha
    }

    fn compute_x(&mut self) {
        let n = self.n;
        let h: Vec<f64> = self.basis.iter().map(|&k| self.rhs(k)).collect();
        for i in 0..n {
            let row = &self.binv[i * n..(i + 1) * n];
            self.x[i] = row.iter().zip(&h).map(|(a, b)| a * b).sum();
        }
    }

    /// Rebuilds the inverse from scratch; false if the basis is singular.
    fn refactor(&mut self) -> bool {
        let n = self.n;
        // Basis matrix, row p = normal of basis[p].
        let mut m = vec![0.0; n * n];
        for (p, &k) in self.basis.iter().enumerate() {
            match k {
                Constraint::Row(r) => {
                    for &(j, a) in &self.rows[r].coeffs {
                        m[p * n + j] += a;
                    }
                }
                Constraint::Lower(j) => m[p * n + j] = 1.0,
                Constraint::Upper(j) => m[p * n + j] = -1.0,
            }
        }
        let Some(inv) = invert(m, n) else {
            return false;
        };
        self.binv = inv;
        // duals = B^{-T} c
        for p in 0..n {
            self.duals[p] = (0..n).map(|j| self.binv[j * n + p] * self.cost[j]).sum();
        }
        self.since_refactor = 0;
        true
    }

    /// Most violated non-basic constraint (scaled by its norm), or the first
    /// violated one in Bland mode.
    fn price(&self, tol: f64, bland: bool) -> Option<(Constraint, f64)> {
        let mut best: Option<(Constraint, f64)> = None;
        let mut consider = |k: Constraint, viol: f64, scale: f64| -> bool {
            if viol > tol {
                let score = viol / scale;
                if bland {
                    best = Some((k, score));
                    return true;
                }
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((k, score));
                }
            }
            false
        };
        for (r, row) in self.rows.iter().enumerate() {
            if self.in_basis_row[r] {
                continue;
            }
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * self.x[j]).sum();
            if consider(Constraint::Row(r), row.rhs - lhs, self.row_norm[r]) {
                return best;
            }
        }
        for j in 0..self.n {
            if consider(Constraint::Lower(j), self.lower[j] - self.x[j], 1.0) {
                return best;
            }
            if consider(Constraint::Upper(j), self.x[j] - self.upper[j], 1.0) {
                return best;
            }
        }
        best
    }

    fn dual_objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.duals)
            .map(|(&k, &y)| y * self.rhs(k))
            .sum()
    }

    pub fn solve(&mut self, cfg: &LpConfig) -> LpResult {
        let n = self.n;
        let max_iter = cfg
            .max_iterations
            .unwrap_or(50 * (self.rows.len() + n).max(1));
        if n == 0 {
            return self.solve_trivial(cfg);
        }
        for (r, flag) in self.in_basis_row.iter_mut().enumerate() {
            *flag = self.basis.contains(&Constraint::Row(r));
        }
        if !self.refactor() {
            self.reset_basis();
        }
        let mut iterations = 0;
        let mut best_dual = f64::NEG_INFINITY;
        let mut stall = 0;
        loop {
            self.compute_x();
            let bland = stall >= cfg.stall_threshold;
            let Some((entering, _)) = self.price(cfg.feas_tol, bland) else {
                // Verify against a fresh factorization before declaring
                // optimality so accumulated drift cannot fake feasibility.
                if self.since_refactor > 0 {
                    if self.refactor() {
                        self.compute_x();
                        if self.price(cfg.feas_tol, false).is_some() {
                            continue;
                        }
                    } else {
                        self.reset_basis();
                        continue;
                    }
                }
                return self.optimal_result(iterations);
            };
            if iterations >= max_iter {
                return LpResult {
                    status: LpStatus::IterationLimit,
                    objective: f64::NAN,
                    point: self.x.clone(),
                    iterations,
                    certificate: None,
                };
            }
            iterations += 1;
            let alpha = self.express(entering);
            let mut leave: Option<(usize, f64)> = None;
            for p in 0..n {
                if alpha[p] > cfg.pivot_tol {
                    let t = self.duals[p].max(0.0) / alpha[p];
                    let better = match leave {
                        None => true,
                        Some((q, tq)) => {
                            if bland {
                                t < tq - 1e-12 || (t <= tq + 1e-12 && self.basis[p] < self.basis[q])
                            } else {
                                t < tq - 1e-12 || (t <= tq + 1e-12 && alpha[p] > alpha[q])
                            }
                        }
                    };
                    if better {
                        leave = Some((p, t));
                    }
                }
            }
            let Some((p, t)) = leave else {
                if self.since_refactor > 0 && self.refactor() {
                    // Re-check with a clean inverse before trusting the ray.
                    let alpha2 = self.express(entering);
                    if alpha2.iter().any(|&a| a > cfg.pivot_tol) {
                        continue;
                    }
                }
                let alpha = self.express(entering);
                let mut multipliers = vec![(entering, 1.0)];
                for (q, &a) in alpha.iter().enumerate() {
                    if a.abs() > 1e-12 {
                        multipliers.push((self.basis[q], -a));
                    }
                }
                return LpResult {
                    status: LpStatus::Infeasible,
                    objective: f64::INFINITY,
                    point: self.x.clone(),
                    iterations,
                    certificate: Some(FarkasCertificate { multipliers }),
                };
            };
            // Dual update.
            for q in 0..n {
                self.duals[q] -= t * alpha[q];
            }
            self.duals[p] = t;
            // Inverse update: column p scales by 1/alpha_p, the others lose
            // alpha_j / alpha_p times the old column p.
            let ap = alpha[p];
            for r in 0..n {
                let d = self.binv[r * n + p];
                if d != 0.0 {
                    let row = &mut self.binv[r * n..(r + 1) * n];
                    for (j, v) in row.iter_mut().enumerate() {
                        if j != p {
                            *v -= d * alpha[j] / ap;
                        }
                    }
                    row[p] = d / ap;
                }
            }
            if let Constraint::Row(r) = self.basis[p] {
                self.in_basis_row[r] = false;
            }
            if let Constraint::Row(r) = entering {
                self.in_basis_row[r] = true;
            }
            self.basis[p] = entering;
            self.since_refactor += 1;
            if self.since_refactor >= cfg.refactor_every && !self.refactor() {
                self.reset_basis();
            }
            let dual = self.dual_objective();
            if dual > best_dual + 1e-12 {
                best_dual = dual;
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }

    fn solve_trivial(&self, cfg: &LpConfig) -> LpResult {
        for (r, row) in self.rows.iter().enumerate() {
            if row.rhs > cfg.feas_tol {
                return LpResult {
                    status: LpStatus::Infeasible,
                    objective: f64::INFINITY,
                    point: vec![],
                    iterations: 0,
                    certificate: Some(FarkasCertificate {
                        multipliers: vec![(Constraint::Row(r), 1.0)],
                    }),
                };
            }
        }
        LpResult {
            status: LpStatus::Optimal,
            objective: 0.0,
            point: vec![],
            iterations: 0,
            certificate: None,
        }
    }

    fn optimal_result(&self, iterations: usize) -> LpResult {
        let point: Vec<f64> = self
            .x
            .iter()
            .enumerate()
            .map(|(j, &v)| v.clamp(self.lower[j], self.upper[j]))
            .collect();
        let objective = point.iter().zip(&self.cost).map(|(x, c)| x * c).sum();
        LpResult {
            status: LpStatus::Optimal,
            objective,
            point,
            iterations,
            certificate: None,
        }
    }

    /// Value of `g_k.x - h_k` at a point, for checking certificates.
    pub fn slack(&self, k: Constraint, x: &[f64]) -> f64 {
        self.normal_dot(k, x) - self.rhs(k)
    }
}

/// Gauss-Jordan inversion with partial pivoting.
fn invert(mut m: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| {
            m[a * n + col]
                .abs()
                .partial_cmp(&m[b * n + col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv * n + col].abs() < 1e-11 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
        }
        let d = m[col * n + col];
        for j in 0..n {
            m[col * n + j] /= d;
            inv[col * n + j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r * n + col];
                if f != 0.0 {
                    for j in 0..n {
                        m[r * n + j] -= f * m[col * n + j];
                        inv[r * n + j] -= f * inv[col * n + j];
                    }
                }
            }
        }
    }
    Some(inv)
}
