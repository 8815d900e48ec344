//! Sparse link-vector recovery: l1 minimization over the simplex solver, and
//! an exhaustive sparsest-solution oracle.

pub mod lp;

use std::fmt::Write as _;

use itertools::Itertools;

use crate::error::{parse_err, Error, Result};
use crate::linalg;
use crate::sensing::MeasurementMatrix;
pub use lp::{lp_solve, LpProblem, LpSolution, LpStatus};

/// Residual tolerance for exact solutions on a support.
pub const EXACT_TOL: f64 = 1e-9;
/// Relative max-norm tolerance for calling a recovery successful.
pub const SUCCESS_TOL: f64 = 1e-6;

/// Per-edge unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkVector {
    pub values: Vec<f64>,
    pub declared_nonnegative: bool,
}

impl LinkVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, declared_nonnegative: false }
    }

    pub fn nonnegative(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v < -1e-12) {
            return Err(Error::InvalidParameter(format!("entry {v} in a nonnegative link vector")));
        }
        Ok(Self { values, declared_nonnegative: true })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i).collect()
    }

    pub fn sparsity(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

/// Path measurements `y = A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    pub values: Vec<f64>,
}

impl Measurements {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite measurement".into()));
        }
        Ok(Self { values })
    }

    pub fn of(a: &MeasurementMatrix, x: &LinkVector) -> Self {
        Self { values: a.apply(&x.values) }
    }
}

/// Single-column CSV: one value per line.
pub fn vector_to_csv(values: &[f64]) -> String {
    values.iter().fold(String::new(), |mut s, v| {
        writeln!(s, "{v}").unwrap();
        s
    })
}

pub fn vector_from_csv(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.trim().parse::<f64>().map_err(|e| parse_err(i + 1, format!("`{}`: {e}", l.trim()))))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub estimate: LinkVector,
    /// Set once scored against a ground truth.
    pub success: Option<bool>,
    /// `|A x_hat - y|_inf`.
    pub residual: f64,
    pub l1_value: f64,
}

impl RecoveryResult {
    pub fn score(&mut self, truth: &LinkVector) -> bool {
        let ok = recovery_success(&self.estimate, truth);
        self.success = Some(ok);
        ok
    }

    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        if let Some(ok) = self.success {
            writeln!(s, "success={ok}").unwrap();
        }
        writeln!(s, "residual={}", self.residual).unwrap();
        writeln!(s, "l1_value={}", self.l1_value).unwrap();
        writeln!(s, "sparsity={}", self.estimate.sparsity()).unwrap();
        s
    }
}

/// `|x_hat - x|_inf <= 1e-6 * max(1, |x|_inf)`, inclusive.
pub fn recovery_success(estimate: &LinkVector, truth: &LinkVector) -> bool {
    assert_eq!(estimate.len(), truth.len());
    let scale = truth.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let err = estimate.values.iter().zip(&truth.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    err <= SUCCESS_TOL * scale
}

/// Minimize `|x|_1` subject to `A x = y` (and `x >= 0` in nonnegative mode).
///
/// Signed mode splits `x = u - v` with `u, v >= 0` and minimizes `sum(u + v)`.
pub fn l1_decode(a: &MeasurementMatrix, y: &Measurements, nonnegative: bool) -> Result<RecoveryResult> {
    let m = a.rows();
    if y.values.len() != m {
        return Err(Error::InvalidParameter(format!("{} measurements for {m} rows", y.values.len())));
    }
    let n = a.num_edges();
    let problem = if nonnegative {
        LpProblem {
            objective: vec![1.0; n],
            constraints: (0..m).map(|i| a.row(i).iter().map(|&v| v as f64).collect()).collect(),
            rhs: y.values.clone(),
            lower: vec![0.0; n],
        }
    } else {
        LpProblem {
            objective: vec![1.0; 2 * n],
            constraints: (0..m)
                .map(|i| {
                    let row = a.row(i);
                    row.iter().map(|&v| v as f64).chain(row.iter().map(|&v| -(v as f64))).collect()
                })
                .collect(),
            rhs: y.values.clone(),
            lower: vec![0.0; 2 * n],
        }
    };
    let sol = lp_solve(&problem)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::NoSolution),
        LpStatus::Unbounded => unreachable!("l1 objective is bounded below by zero"),
    }
    let values: Vec<f64> = if nonnegative { sol.x } else { (0..n).map(|j| sol.x[j] - sol.x[n + j]).collect() };
    let residual = a.apply(&values).iter().zip(&y.values).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let estimate = LinkVector { values, declared_nonnegative: nonnegative };
    Ok(RecoveryResult { l1_value: estimate.l1_norm(), estimate, success: None, residual })
}

/// All sparsest exact solutions found by support enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsestSolutions {
    pub support_size: usize,
    /// Every distinct solution with `support_size` nonzeros; more than one means a tie.
    pub solutions: Vec<LinkVector>,
}

impl SparsestSolutions {
    pub fn is_unique(&self) -> bool {
        self.solutions.len() == 1
    }
}

/// Exact solutions of `A x = y` supported on exactly `s` of the columns
/// (nonnegative if requested), one per linearly independent support.
///
/// Minimal-support solutions always sit on independent column sets, so
/// dependent supports are skipped.
pub fn solutions_with_support_size(
    a: &MeasurementMatrix,
    y: &Measurements,
    nonnegative: bool,
    s: usize,
    visited: &mut u64,
    max_subsets: Option<u64>,
) -> Result<Vec<LinkVector>> {
    let cols = a.columns_f64();
    let n = a.num_edges();
    let yscale = y.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut found: Vec<LinkVector> = Vec::new();
    if s == 0 {
        if y.values.iter().all(|v| v.abs() <= EXACT_TOL * yscale) {
            found.push(LinkVector { values: vec![0.0; n], declared_nonnegative: nonnegative });
        }
        return Ok(found);
    }
    for support in (0..n).combinations(s) {
        *visited += 1;
        if max_subsets.is_some_and(|m| *visited > m) {
            return Err(Error::BudgetExceeded { partial: format!("no solution with fewer than {s} nonzeros") });
        }
        let sub: Vec<&[f64]> = support.iter().map(|&j| cols[j].as_slice()).collect();
        let Some((z, independent)) = linalg::solve_columns(&sub, &y.values, EXACT_TOL) else { continue };
        if !independent || z.iter().any(|v| v.abs() <= EXACT_TOL * yscale) {
            continue;
        }
        if nonnegative && z.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut values = vec![0.0; n];
        for (&j, v) in support.iter().zip(z) {
            values[j] = v;
        }
        let x = LinkVector { values, declared_nonnegative: nonnegative };
        if !found.iter().any(|f| recovery_success(f, &x)) {
            found.push(x);
        }
    }
    Ok(found)
}

/// Smallest-support exact solution(s) of `A x = y` with at most `k_cap`
/// nonzeros, or `None` if there is none within the cap.
pub fn sparsest_oracle(
    a: &MeasurementMatrix,
    y: &Measurements,
    nonnegative: bool,
    k_cap: usize,
    max_subsets: Option<u64>,
) -> Result<Option<SparsestSolutions>> {
    if y.values.len() != a.rows() {
        return Err(Error::InvalidParameter(format!("{} measurements for {} rows", y.values.len(), a.rows())));
    }
    if k_cap > a.num_edges() {
        return Err(Error::InvalidParameter(format!("k_cap {k_cap} exceeds {} columns", a.num_edges())));
    }
    let mut visited = 0;
    for s in 0..=k_cap {
        let solutions = solutions_with_support_size(a, y, nonnegative, s, &mut visited, max_subsets)?;
        if !solutions.is_empty() {
            return Ok(Some(SparsestSolutions { support_size: s, solutions }));
        }
    }
    Ok(None)
}
