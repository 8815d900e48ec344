//! Two-phase revised simplex for `min c·x  s.t.  A x = b,  x >= l`.
//!
//! The basis inverse is kept dense and updated by elementary row operations,
//! with a fresh Gauss-Jordan inversion every [`REFACTOR_EVERY`] pivots.
//! Entering and leaving variables follow Bland's rule, so degenerate problems
//! terminate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

pub const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const REFACTOR_EVERY: usize = 100;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_AFTER: usize = 1000;
/// Scale of the right-hand-side perturbation that breaks degeneracy.
const PERTURBATION: f64 = 1e-7;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// `min objective·x  s.t.  constraints x = rhs,  x >= lower`.
///
/// A lower bound of `f64::NEG_INFINITY` makes the variable free.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    /// Row-major, one entry per variable in each row.
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
}

impl LpProblem {
    /// Nonnegative variables, no objective: a pure feasibility problem.
    pub fn feasibility(constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Self {
        let n = constraints.first().map_or(0, Vec::len);
        Self { objective: vec![0.0; n], constraints, rhs, lower: vec![0.0; n] }
    }

    fn check(&self) -> Result<()> {
        let n = self.objective.len();
        if self.lower.len() != n {
            return Err(Error::InvalidProblem(format!("{} lower bounds for {n} variables", self.lower.len())));
        }
        if self.constraints.len() != self.rhs.len() {
            return Err(Error::InvalidProblem(format!(
                "{} constraint rows for {} right-hand sides",
                self.constraints.len(),
                self.rhs.len()
            )));
        }
        if let Some(i) = self.constraints.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidProblem(format!(
                "row {i} has {} coefficients, expected {n}",
                self.constraints[i].len()
            )));
        }
        let finite = self
            .objective
            .iter()
            .chain(self.rhs.iter())
            .chain(self.constraints.iter().flatten())
            .all(|v| v.is_finite());
        if !finite || self.lower.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
            return Err(Error::InvalidProblem("non-finite data".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values (meaningful only when optimal).
    pub x: Vec<f64>,
    pub objective: f64,
    /// Equality-constraint multipliers from the final basis.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    /// `y·(b - A l) + c·l`, which equals the primal objective at optimality.
    pub fn dual_objective(&self, p: &LpProblem) -> f64 {
        let mut val = 0.0;
        for (i, row) in p.constraints.iter().enumerate() {
            let shifted: f64 =
                p.rhs[i] - row.iter().zip(&p.lower).filter(|(_, l)| l.is_finite()).map(|(a, l)| a * l).sum::<f64>();
            val += self.duals[i] * shifted;
        }
        val + p.objective.iter().zip(&p.lower).filter(|(_, l)| l.is_finite()).map(|(c, l)| c * l).sum::<f64>()
    }
}

/// Which standard-form columns an original variable maps to.
#[derive(Clone, Copy)]
enum VarMap {
    Shifted(usize),
    Split(usize, usize),
}

struct Simplex {
    m: usize,
    /// Standard-form columns; the last `m` are artificials.
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Simplex {
    fn n_structural(&self) -> usize {
        self.cols.len() - self.m
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n_structural()
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = cost[bj];
            if cb != 0.0 {
                for (yk, bik) in y.iter_mut().zip(&self.binv[i]) {
                    *yk += cb * bik;
                }
            }
        }
        y
    }

    fn direction(&self, j: usize) -> Vec<f64> {
        let col = &self.cols[j];
        self.binv.iter().map(|row| row.iter().zip(col).map(|(a, b)| a * b).sum()).collect()
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[f64]) {
        let theta = self.xb[r] / u[r];
        for (i, x) in self.xb.iter_mut().enumerate() {
            if i != r {
                *x -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        let pr = u[r];
        for v in self.binv[r].iter_mut() {
            *v /= pr;
        }
        let pivot_row = self.binv[r].clone();
        for (i, row) in self.binv.iter_mut().enumerate() {
            if i != r && u[i] != 0.0 {
                let f = u[i];
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a -= f * b;
                }
            }
        }
        self.basis[r] = j;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    /// Recompute the basis inverse and basic values from scratch.
    fn refactor(&mut self) {
        let m = self.m;
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row: Vec<f64> = self.basis.iter().map(|&j| self.cols[j][i]).collect();
                row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for c in 0..m {
            let p = (c..m).max_by(|&a, &b| aug[a][c].abs().total_cmp(&aug[b][c].abs())).unwrap();
            if aug[p][c].abs() < 1e-14 {
                // numerically singular; keep the updated inverse
                self.since_refactor = 0;
                return;
            }
            aug.swap(c, p);
            let pv = aug[c][c];
            for v in aug[c].iter_mut() {
                *v /= pv;
            }
            let prow = aug[c].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != c && row[c] != 0.0 {
                    let f = row[c];
                    for (a, b) in row.iter_mut().zip(&prow) {
                        *a -= f * b;
                    }
                }
            }
        }
        self.binv = aug.into_iter().map(|row| row[m..].to_vec()).collect();
        self.xb = self.binv.iter().map(|row| row.iter().zip(&self.b).map(|(a, b)| a * b).sum()).collect();
        self.since_refactor = 0;
    }

    fn run(&mut self, cost: &[f64], allow_artificial: bool) -> Result<Outcome> {
        let mut in_basis = vec![false; self.cols.len()];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        let mut degenerate_run = 0;
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(Error::SolverStalled { iterations: self.iterations });
            }
            let y = self.duals(cost);
            let reduced = |j: usize| cost[j] - self.cols[j].iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
            let candidates =
                (0..self.cols.len()).filter(|&j| !in_basis[j] && (allow_artificial || !self.is_artificial(j)));
            // Dantzig pricing; Bland's rule after a run of degenerate pivots
            let entering = if degenerate_run >= BLAND_AFTER {
                candidates.map(|j| (j, reduced(j))).find(|&(_, d)| d < -COST_TOL)
            } else {
                candidates.map(|j| (j, reduced(j))).filter(|&(_, d)| d < -COST_TOL).min_by(|a, b| a.1.total_cmp(&b.1))
            };
            let Some((j, _)) = entering else { return Ok(Outcome::Optimal) };
            let u = self.direction(j);
            let mut leave: Option<(usize, f64)> = None;
            for (i, &ui) in u.iter().enumerate() {
                if ui > PIVOT_TOL {
                    let ratio = self.xb[i].max(0.0) / ui;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                            if ratio < best && !tie || tie && self.basis[i] < self.basis[r] {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((r, step)) = leave else { return Ok(Outcome::Unbounded) };
            degenerate_run = if step <= PIVOT_TOL { degenerate_run + 1 } else { 0 };
            in_basis[self.basis[r]] = false;
            in_basis[j] = true;
            self.xb[r] = self.xb[r].max(0.0);
            self.pivot(r, j, &u);
        }
    }
}

impl Simplex {
    /// Dual simplex pivots from a dual-feasible basis until the basic values
    /// are nonnegative. Returns false if the primal is infeasible.
    fn dual_cleanup(&mut self, cost: &[f64], tol: f64) -> Result<bool> {
        let n_std = self.n_structural();
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(Error::SolverStalled { iterations: self.iterations });
            }
            let leaving = (0..self.m).filter(|&i| self.xb[i] < -tol).min_by(|&a, &b| self.xb[a].total_cmp(&self.xb[b]));
            let Some(r) = leaving else { return Ok(true) };
            let y = self.duals(cost);
            let mut in_basis = vec![false; self.cols.len()];
            for &j in &self.basis {
                in_basis[j] = true;
            }
            let mut entering: Option<(usize, f64)> = None;
            for j in (0..n_std).filter(|&j| !in_basis[j]) {
                let alpha: f64 = self.binv[r].iter().zip(&self.cols[j]).map(|(a, b)| a * b).sum();
                if alpha < -PIVOT_TOL {
                    let d = (cost[j] - self.cols[j].iter().zip(&y).map(|(a, b)| a * b).sum::<f64>()).max(0.0);
                    let ratio = d / -alpha;
                    if entering.is_none_or(|(_, best)| ratio < best) {
                        entering = Some((j, ratio));
                    }
                }
            }
            let Some((j, _)) = entering else { return Ok(false) };
            let u = self.direction(j);
            self.pivot(r, j, &u);
        }
    }
}

/// Solve an LP to an optimal basic solution, or report infeasibility or unboundedness.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    p.check()?;
    let m = p.rhs.len();
    let n = p.objective.len();

    let mut maps = Vec::with_capacity(n);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n + m);
    let mut cost = Vec::with_capacity(n + m);
    let column = |j: usize| -> Vec<f64> { p.constraints.iter().map(|r| r[j]).collect() };
    for j in 0..n {
        if p.lower[j].is_finite() {
            maps.push(VarMap::Shifted(cols.len()));
            cols.push(column(j));
            cost.push(p.objective[j]);
        } else {
            maps.push(VarMap::Split(cols.len(), cols.len() + 1));
            let c = column(j);
            cols.push(c.iter().map(|v| -v).collect());
            cols.push(c);
            cost.push(-p.objective[j]);
            cost.push(p.objective[j]);
        }
    }
    // pairs are stored (negative part, positive part)
    let mut b: Vec<f64> = (0..m)
        .map(|i| {
            p.rhs[i] - (0..n).filter(|&j| p.lower[j].is_finite()).map(|j| p.constraints[i][j] * p.lower[j]).sum::<f64>()
        })
        .collect();
    let flip: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    for i in 0..m {
        b[i] *= flip[i];
        for c in cols.iter_mut() {
            c[i] *= flip[i];
        }
    }
    let n_std = cols.len();
    // b + A rho with rho > 0 is feasible whenever b is, and generically nondegenerate
    let bscale = b.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut rng = seed::rng(0);
    let mut perturbed = b.clone();
    for c in &cols {
        let rho = PERTURBATION * bscale * rng.random_range(0.5..1.5);
        for (pb, v) in perturbed.iter_mut().zip(c) {
            *pb += rho * v;
        }
    }
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        cols.push(e);
    }

    let mut s = Simplex {
        m,
        cols,
        b: perturbed.clone(),
        basis: (n_std..n_std + m).collect(),
        binv: (0..m).map(|i| (0..m).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect(),
        xb: perturbed,
        since_refactor: 0,
        iterations: 0,
    };

    // phase one: minimize the sum of artificials
    let phase1: Vec<f64> = (0..n_std + m).map(|j| if j >= n_std { 1.0 } else { 0.0 }).collect();
    s.run(&phase1, true)?;
    s.refactor();
    let infeas: f64 = s.basis.iter().zip(&s.xb).filter(|(&j, _)| j >= n_std).map(|(_, v)| v.abs()).sum();
    if infeas > FEAS_TOL * bscale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
            iterations: s.iterations,
        });
    }
    // drive zero-level artificials out where a structural column can replace them
    for r in 0..m {
        if s.basis[r] < n_std {
            continue;
        }
        let basic: Vec<bool> = {
            let mut v = vec![false; n_std + m];
            for &j in &s.basis {
                v[j] = true;
            }
            v
        };
        let replacement = (0..n_std).find_map(|j| {
            if basic[j] {
                return None;
            }
            let u = s.direction(j);
            (u[r].abs() > PIVOT_TOL).then_some((j, u))
        });
        if let Some((j, u)) = replacement {
            s.xb[r] = 0.0;
            s.pivot(r, j, &u);
        }
    }

    cost.extend(std::iter::repeat_n(0.0, m));
    if let Outcome::Unbounded = s.run(&cost, false)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![0.0; n],
            objective: f64::NEG_INFINITY,
            duals: vec![0.0; m],
            iterations: s.iterations,
        });
    }
    // back to the true right-hand side; the basis stays dual feasible
    s.b = b;
    s.refactor();
    if !s.dual_cleanup(&cost, FEAS_TOL * bscale)? {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
            iterations: s.iterations,
        });
    }
    s.refactor();

    let mut std_x = vec![0.0; n_std + m];
    for (&j, &v) in s.basis.iter().zip(&s.xb) {
        std_x[j] = v.max(0.0);
    }
    let x: Vec<f64> = maps
        .iter()
        .enumerate()
        .map(|(j, map)| match *map {
            VarMap::Shifted(k) => p.lower[j] + std_x[k],
            VarMap::Split(neg, pos) => std_x[pos] - std_x[neg],
        })
        .collect();
    let objective = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let duals = s.duals(&cost).iter().zip(&flip).map(|(y, f)| y * f).collect();
    Ok(LpSolution { status: LpStatus::Optimal, x, objective, duals, iterations: s.iterations })
}
