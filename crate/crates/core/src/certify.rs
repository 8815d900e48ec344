//! Exact recovery certificates for small measurement matrices, computed by
//! budgeted enumeration of column subsets.
//!
//! * `spark`: size of the smallest linearly dependent column set.
//! * `theorem1_threshold`: `min over nonzero null vectors w of max(k-, k+)`,
//!   where `k-`/`k+` count negative/positive entries. Every nonnegative
//!   vector with fewer nonzeros is the unique sparsest nonnegative solution.
//! * `t3_depth`: largest `h` such that every set of at most `h` columns has a
//!   row with exactly one nonzero among them; implies `spark >= h + 1`.

use std::fmt;

use itertools::Itertools;

use crate::decode::{lp_solve, LinkVector, LpProblem, LpStatus, Measurements, EXACT_TOL, SUCCESS_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sensing::MeasurementMatrix;

/// A certified value, or what is known when enumeration stopped at the size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Exact(usize),
    /// No dependent columns / trivial null space.
    Infinite,
    /// Not resolved within the size cap; the true value is at least this.
    AtLeast(usize),
}

impl Bound {
    pub fn exact(self) -> Option<usize> {
        match self {
            Bound::Exact(v) => Some(v),
            _ => None,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "inf" => Some(Bound::Infinite),
            _ => match s.strip_prefix(">=") {
                Some(rest) => rest.parse().ok().map(Bound::AtLeast),
                None => s.parse().ok().map(Bound::Exact),
            },
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("inf"),
            Bound::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Enumeration limits: the largest subset size examined, and optionally a
/// cap on the total number of subsets (or sign patterns) visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub size_cap: usize,
    pub max_subsets: Option<u64>,
}

impl Budget {
    pub fn size(size_cap: usize) -> Self {
        Self { size_cap, max_subsets: None }
    }

    fn check(&self, a: &MeasurementMatrix) -> Result<()> {
        if self.size_cap > a.num_edges() {
            return Err(Error::InvalidParameter(format!(
                "size cap {} exceeds {} columns",
                self.size_cap,
                a.num_edges()
            )));
        }
        Ok(())
    }
}

struct Counter {
    visited: u64,
    max: Option<u64>,
}

impl Counter {
    fn new(b: &Budget) -> Self {
        Self { visited: 0, max: b.max_subsets }
    }

    fn tick(&mut self, partial: impl FnOnce() -> String) -> Result<()> {
        self.visited += 1;
        match self.max {
            Some(m) if self.visited > m => Err(Error::BudgetExceeded { partial: partial() }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparkResult {
    pub value: Bound,
    /// A smallest dependent column set and a null vector supported on it.
    pub witness: Option<(Vec<usize>, Vec<f64>)>,
}

pub fn spark(a: &MeasurementMatrix, budget: Budget) -> Result<SparkResult> {
    budget.check(a)?;
    let cols = a.columns_f64();
    let m = a.rows();
    let all: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    let rank = linalg::rank_of(&all, m);
    if rank == a.num_edges() {
        return Ok(SparkResult { value: Bound::Infinite, witness: None });
    }
    let mut counter = Counter::new(&budget);
    // any rank + 1 columns are dependent
    for s in 1..=budget.size_cap.min(rank + 1) {
        for subset in (0..a.num_edges()).combinations(s) {
            counter.tick(|| format!("spark > {}", s - 1))?;
            let sub: Vec<&[f64]> = subset.iter().map(|&j| cols[j].as_slice()).collect();
            if let Some(w) = linalg::null_vector_of(&sub, m) {
                let mut full = vec![0.0; a.num_edges()];
                for (&j, v) in subset.iter().zip(w) {
                    full[j] = v;
                }
                return Ok(SparkResult { value: Bound::Exact(s), witness: Some((subset, full)) });
            }
        }
    }
    Ok(SparkResult { value: Bound::AtLeast(budget.size_cap + 1), witness: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub value: Bound,
    /// A null vector attaining the value, when one was found.
    pub witness: Option<Vec<f64>>,
}

/// Does some `w` with `A w = 0`, `sign_i * w_i >= 1` on `support`, and zero
/// elsewhere exist? Returns it.
fn signed_null_vector(cols: &[Vec<f64>], m: usize, support: &[usize], signs: &[f64]) -> Result<Option<Vec<f64>>> {
    // w_i = sign_i (z_i + 1), z >= 0
    let constraints: Vec<Vec<f64>> =
        (0..m).map(|i| support.iter().zip(signs).map(|(&j, s)| cols[j][i] * s).collect()).collect();
    let rhs: Vec<f64> = constraints.iter().map(|r| -r.iter().sum::<f64>()).collect();
    let sol = lp_solve(&LpProblem::feasibility(constraints, rhs))?;
    Ok((sol.status == LpStatus::Optimal).then(|| {
        let mut w = vec![0.0; cols.len()];
        for ((&j, s), z) in support.iter().zip(signs).zip(&sol.x) {
            w[j] = s * (z + 1.0);
        }
        w
    }))
}

/// Exact `min over nonzero w in N(A) of max(k-, k+)` by enumerating supports
/// and sign patterns with an LP feasibility test for each.
pub fn theorem1_threshold(a: &MeasurementMatrix, budget: Budget) -> Result<ThresholdResult> {
    budget.check(a)?;
    let n = a.num_edges();
    let m = a.rows();
    let cols = a.columns_f64();
    let all: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    if linalg::rank_of(&all, m) == n {
        return Ok(ThresholdResult { value: Bound::Infinite, witness: None });
    }
    let mut counter = Counter::new(&budget);
    let mut best: Option<(usize, Vec<f64>)> = None;
    let mut done = 0;
    for s in 1..=budget.size_cap {
        // a support of size s cannot score below ceil(s/2)
        if best.as_ref().is_some_and(|(b, _)| *b <= s.div_ceil(2)) {
            break;
        }
        for support in (0..n).combinations(s) {
            let sub: Vec<&[f64]> = support.iter().map(|&j| cols[j].as_slice()).collect();
            if linalg::rank_of(&sub, m) == s {
                continue;
            }
            // patterns up to global negation: first sign fixed positive
            for mask in 0u64..1 << (s - 1) {
                let negatives = mask.count_ones() as usize;
                let value = negatives.max(s - negatives);
                if best.as_ref().is_some_and(|(b, _)| *b <= value) {
                    continue;
                }
                let lower = best.as_ref().map_or(s.div_ceil(2), |(b, _)| (*b).min(s.div_ceil(2)));
                counter.tick(|| format!("t1_threshold >= {lower}"))?;
                let signs: Vec<f64> =
                    (0..s).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect();
                if let Some(w) = signed_null_vector(&cols, m, &support, &signs)? {
                    best = Some((value, w));
                }
            }
        }
        done = s;
    }
    let unexplored_floor = (done + 1).div_ceil(2);
    Ok(match best {
        Some((b, w)) if b <= unexplored_floor || done == n => {
            ThresholdResult { value: Bound::Exact(b), witness: Some(w) }
        }
        Some((b, w)) => ThresholdResult { value: Bound::AtLeast(b.min(unexplored_floor)), witness: Some(w) },
        None => ThresholdResult { value: Bound::AtLeast(unexplored_floor), witness: None },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthResult {
    pub depth: usize,
    /// Smallest column set with no single-nonzero row, if one was found.
    pub witness: Option<Vec<usize>>,
}

/// Largest `h <= size_cap` such that every column set of size at most `h`
/// has a row with exactly one nonzero inside the set.
pub fn t3_depth(a: &MeasurementMatrix, budget: Budget) -> Result<DepthResult> {
    budget.check(a)?;
    let supports: Vec<Vec<usize>> =
        (0..a.num_edges()).map(|j| (0..a.rows()).filter(|&i| a.get(i, j) != 0).collect()).collect();
    let mut counter = Counter::new(&budget);
    let mut hits = vec![0u32; a.rows()];
    for s in 1..=budget.size_cap {
        for subset in (0..a.num_edges()).combinations(s) {
            counter.tick(|| format!("t3_depth >= {}", s - 1))?;
            hits.iter_mut().for_each(|h| *h = 0);
            for &j in &subset {
                for &i in &supports[j] {
                    hits[i] += 1;
                }
            }
            if !hits.contains(&1) {
                return Ok(DepthResult { depth: s - 1, witness: Some(subset) });
            }
        }
    }
    Ok(DepthResult { depth: budget.size_cap, witness: None })
}

fn close(a: &[f64], b: &[f64]) -> bool {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(p, q)| (p - q).abs() <= SUCCESS_TOL * scale)
}

/// Is `x` the only solution of `A z = A x` with at most `|x|_0` nonzeros
/// (among nonnegative vectors if `nonnegative`)?
///
/// Every support of size at most `|x|_0` is examined. On independent
/// supports the exact solution is unique and compared with `x`. A consistent
/// dependent support carries a line of signed solutions; for nonnegative
/// solutions it matters only when the support also admits a nonnegative
/// null direction, since every vertex of the solution polytope lies on an
/// independent support and is examined there.
pub fn verify_unique_sparsest(
    a: &MeasurementMatrix,
    x: &LinkVector,
    nonnegative: bool,
    budget: Budget,
) -> Result<bool> {
    budget.check(a)?;
    let k = x.sparsity();
    if k > budget.size_cap {
        return Err(Error::InvalidParameter(format!("|x|_0 = {k} exceeds size cap {}", budget.size_cap)));
    }
    if nonnegative && x.values.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("negative entry in a nonnegative candidate".into()));
    }
    let n = a.num_edges();
    let m = a.rows();
    let y = Measurements::of(a, x);
    let yscale = y.values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let cols = a.columns_f64();
    let mut counter = Counter::new(&budget);
    for s in 0..=k {
        for support in (0..n).combinations(s) {
            counter.tick(|| format!("no competitor with fewer than {s} nonzeros"))?;
            let sub: Vec<&[f64]> = support.iter().map(|&j| cols[j].as_slice()).collect();
            let Some((z, independent)) = linalg::solve_columns(&sub, &y.values, EXACT_TOL) else { continue };
            if independent {
                if nonnegative && z.iter().any(|&v| v < -EXACT_TOL * yscale) {
                    continue;
                }
                let mut full = vec![0.0; n];
                for (&j, v) in support.iter().zip(z) {
                    full[j] = v;
                }
                if !close(&full, &x.values) {
                    return Ok(false);
                }
            } else if !nonnegative || has_nonnegative_solution(&sub, &y.values)? && has_nonnegative_null_ray(&sub, m)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn has_nonnegative_solution(sub: &[&[f64]], y: &[f64]) -> Result<bool> {
    let rows = (0..y.len()).map(|i| sub.iter().map(|c| c[i]).collect()).collect();
    Ok(lp_solve(&LpProblem::feasibility(rows, y.to_vec()))?.status == LpStatus::Optimal)
}

fn has_nonnegative_null_ray(sub: &[&[f64]], m: usize) -> Result<bool> {
    let mut rows: Vec<Vec<f64>> = (0..m).map(|i| sub.iter().map(|c| c[i]).collect()).collect();
    let mut rhs = vec![0.0; m];
    rows.push(vec![1.0; sub.len()]);
    rhs.push(1.0);
    Ok(lp_solve(&LpProblem::feasibility(rows, rhs))?.status == LpStatus::Optimal)
}

/// Nonnegative vector that defeats uniqueness at the threshold: from a
/// minimizing null vector `w`, put `|w|` on all negative entries plus enough
/// positive entries to reach `max(k-, k+)` nonzeros. Then `x + w` is another
/// nonnegative solution with no more nonzeros.
pub fn threshold_converse(w: &[f64]) -> LinkVector {
    let neg: Vec<usize> = (0..w.len()).filter(|&i| w[i] < 0.0).collect();
    let pos: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
    let k = neg.len().max(pos.len());
    let mut values = vec![0.0; w.len()];
    for &i in neg.iter().chain(pos.iter()).take(k) {
        values[i] = w[i].abs();
    }
    LinkVector { values, declared_nonnegative: true }
}

/// Signed analogue: `-w` on the first `ceil(|w|_0 / 2)` support entries, so
/// `x + w` has at most as many nonzeros.
pub fn spark_converse(w: &[f64]) -> LinkVector {
    let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] != 0.0).collect();
    let mut values = vec![0.0; w.len()];
    for &i in support.iter().take(support.len().div_ceil(2)) {
        values[i] = -w[i];
    }
    LinkVector::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateReport {
    pub spark: Bound,
    pub t1_threshold: Bound,
    pub t3_depth: usize,
    pub budget: usize,
}

impl CertificateReport {
    pub fn to_key_values(&self) -> String {
        format!(
            "spark={}\nt1_threshold={}\nt3_depth={}\nbudget={}\n",
            self.spark, self.t1_threshold, self.t3_depth, self.budget
        )
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut spark = None;
        let mut t1 = None;
        let mut t3 = None;
        let mut budget = None;
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || crate::error::parse_err(i + 1, format!("malformed entry `{line}`"));
            let (k, v) = line.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "spark" => spark = Some(Bound::parse(v.trim()).ok_or_else(bad)?),
                "t1_threshold" => t1 = Some(Bound::parse(v.trim()).ok_or_else(bad)?),
                "t3_depth" => t3 = Some(v.trim().parse().map_err(|_| bad())?),
                "budget" => budget = Some(v.trim().parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let missing = |name: &str| crate::error::parse_err(0, format!("missing `{name}`"));
        Ok(Self {
            spark: spark.ok_or_else(|| missing("spark"))?,
            t1_threshold: t1.ok_or_else(|| missing("t1_threshold"))?,
            t3_depth: t3.ok_or_else(|| missing("t3_depth"))?,
            budget: budget.ok_or_else(|| missing("budget"))?,
        })
    }
}

/// All three certificates under one budget.
pub fn certify(a: &MeasurementMatrix, budget: Budget) -> Result<CertificateReport> {
    Ok(CertificateReport {
        spark: spark(a, budget)?.value,
        t1_threshold: theorem1_threshold(a, budget)?.value,
        t3_depth: t3_depth(a, budget)?.depth,
        budget: budget.size_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::example_four_paths;
    use rand::Rng;

    fn identity(n: usize) -> MeasurementMatrix {
        MeasurementMatrix::from_rows(&(0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    /// Integer rank by fraction-free elimination, for subset oracles.
    fn int_rank(a: &MeasurementMatrix, cols: &[usize]) -> usize {
        let mut rows: Vec<Vec<i128>> =
            (0..a.rows()).map(|i| cols.iter().map(|&j| a.get(i, j) as i128).collect()).collect();
        let (m, n) = (rows.len(), cols.len());
        let (mut rank, mut prev) = (0, 1i128);
        for c in 0..n {
            let Some(p) = (rank..m).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(rank, p);
            for i in rank + 1..m {
                for j in c + 1..n {
                    rows[i][j] = (rows[rank][c] * rows[i][j] - rows[i][c] * rows[rank][j]) / prev;
                }
                rows[i][c] = 0;
            }
            prev = rows[rank][c];
            rank += 1;
        }
        rank
    }

    fn oracle_spark(a: &MeasurementMatrix) -> Option<usize> {
        (1..=a.num_edges()).find(|&s| (0..a.num_edges()).combinations(s).any(|c| int_rank(a, &c) < s))
    }

    fn oracle_depth(a: &MeasurementMatrix, cap: usize) -> usize {
        for s in 1..=cap {
            for c in (0..a.num_edges()).combinations(s) {
                let single = (0..a.rows()).any(|i| c.iter().filter(|&&j| a.get(i, j) != 0).count() == 1);
                if !single {
                    return s - 1;
                }
            }
        }
        cap
    }

    #[test]
    fn four_path_example_certificates() {
        let a = example_four_paths();
        assert_eq!(oracle_spark(&a), Some(3));
        assert_eq!(oracle_depth(&a, 6), 2);
        let r = certify(&a, Budget::size(6)).unwrap();
        assert_eq!(r.spark, Bound::Exact(3));
        assert_eq!(r.t3_depth, 2);
        // null space is {(-a, a, -b, b, -a, a - b)}; its sparsest sign
        // patterns are (-,+,-,+) and (-,+,-) giving max(k-, k+) = 2
        assert_eq!(r.t1_threshold, Bound::Exact(2));
        assert_eq!(r.to_key_values(), "spark=3\nt1_threshold=2\nt3_depth=2\nbudget=6\n");
        assert_eq!(CertificateReport::from_key_values(&r.to_key_values()).unwrap(), r);
    }

    #[test]
    fn four_path_threshold_by_null_space_sweep() {
        // independent route: sweep the 2-d null space densely, including the
        // directions where a coordinate vanishes
        let null = |a: f64, b: f64| [-a, a, -b, b, -a, a - b];
        let mut dirs: Vec<f64> = (0..20_000).map(|i| i as f64 * std::f64::consts::TAU / 20_000.0).collect();
        for (ca, cb) in [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0)] {
            // ca * a + cb * b = 0
            let t = f64::atan2(-ca, cb);
            dirs.extend([t, t + std::f64::consts::PI]);
        }
        let best = dirs
            .iter()
            .map(|t| {
                let w = null(t.cos(), t.sin());
                let neg = w.iter().filter(|v| **v < -1e-12).count();
                let pos = w.iter().filter(|v| **v > 1e-12).count();
                neg.max(pos)
            })
            .min()
            .unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn trivial_matrices() {
        let id = identity(5);
        assert_eq!(spark(&id, Budget::size(5)).unwrap().value, Bound::Infinite);
        assert_eq!(theorem1_threshold(&id, Budget::size(5)).unwrap().value, Bound::Infinite);
        assert_eq!(t3_depth(&id, Budget::size(3)).unwrap().depth, 3);
        assert_eq!(t3_depth(&id, Budget::size(5)).unwrap().depth, 5);

        let rep = MeasurementMatrix::from_rows(&[vec![1, 1, 0], vec![2, 2, 1]]).unwrap();
        assert_eq!(spark(&rep, Budget::size(3)).unwrap().value, Bound::Exact(2));

        let one_row = MeasurementMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let t = theorem1_threshold(&one_row, Budget::size(2)).unwrap();
        assert_eq!(t.value, Bound::Exact(1));
        let w = t.witness.unwrap();
        assert!((w[0] + w[1]).abs() < 1e-12 && w[0] != 0.0);

        let zero_col = MeasurementMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(t3_depth(&zero_col, Budget::size(2)).unwrap().depth, 0);
        assert_eq!(spark(&zero_col, Budget::size(2)).unwrap().value, Bound::Exact(1));
        assert_eq!(theorem1_threshold(&zero_col, Budget::size(2)).unwrap().value, Bound::Exact(1));
    }

    #[test]
    fn caps_and_budgets_report_partial_bounds() {
        let a = example_four_paths();
        assert_eq!(spark(&a, Budget::size(2)).unwrap().value, Bound::AtLeast(3));
        let t = theorem1_threshold(&a, Budget::size(2)).unwrap();
        assert_eq!(t.value, Bound::AtLeast(2));
        let err = spark(&a, Budget { size_cap: 6, max_subsets: Some(7) }).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { partial: "spark > 1".into() });
        assert!(matches!(
            t3_depth(&a, Budget { size_cap: 6, max_subsets: Some(3) }),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(spark(&a, Budget::size(7)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn four_path_example_is_unique_sparsest() {
        let a = example_four_paths();
        let x = LinkVector::nonnegative(vec![2.0, 3.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(verify_unique_sparsest(&a, &x, true, Budget::size(6)).unwrap());
        assert!(verify_unique_sparsest(&a, &x, false, Budget::size(6)).unwrap());
        let zero = LinkVector::nonnegative(vec![0.0; 6]).unwrap();
        assert!(verify_unique_sparsest(&a, &zero, true, Budget::size(6)).unwrap());
    }

    #[test]
    fn converse_constructions_defeat_uniqueness() {
        let a = example_four_paths();
        let t = theorem1_threshold(&a, Budget::size(6)).unwrap();
        let x = threshold_converse(t.witness.as_ref().unwrap());
        assert_eq!(x.sparsity(), 2);
        assert!(!verify_unique_sparsest(&a, &x, true, Budget::size(6)).unwrap());

        let (_, w) = spark(&a, Budget::size(6)).unwrap().witness.unwrap();
        let x = spark_converse(&w);
        assert_eq!(x.sparsity(), 2);
        assert!(!verify_unique_sparsest(&a, &x, false, Budget::size(6)).unwrap());
    }

    /// Independent uniqueness oracle: for every support of size <= |x|_0,
    /// minimize and maximize each coordinate over the solution set by LP.
    fn oracle_unique(a: &MeasurementMatrix, x: &LinkVector, nonnegative: bool) -> bool {
        let y = Measurements::of(a, x);
        let k = x.sparsity();
        for s in 0..=k {
            for support in (0..a.num_edges()).combinations(s) {
                let rows: Vec<Vec<f64>> =
                    (0..a.rows()).map(|i| support.iter().map(|&j| a.get(i, j) as f64).collect()).collect();
                let lower = vec![if nonnegative { 0.0 } else { f64::NEG_INFINITY }; s];
                let feas = lp_solve(&LpProblem {
                    objective: vec![0.0; s],
                    constraints: rows.clone(),
                    rhs: y.values.clone(),
                    lower: lower.clone(),
                })
                .unwrap();
                if feas.status != LpStatus::Optimal {
                    continue;
                }
                if x.support().iter().any(|j| !support.contains(j)) {
                    return false;
                }
                for (pos, &j) in support.iter().enumerate() {
                    for dir in [1.0, -1.0] {
                        let mut c = vec![0.0; s];
                        c[pos] = dir;
                        let sol = lp_solve(&LpProblem {
                            objective: c,
                            constraints: rows.clone(),
                            rhs: y.values.clone(),
                            lower: lower.clone(),
                        })
                        .unwrap();
                        if sol.status == LpStatus::Unbounded || (sol.x[pos] - x.values[j]).abs() > 1e-6 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn uniqueness_agrees_with_lp_oracle() {
        use crate::graph::make_octahedron;
        use crate::sensing::build_matrix;
        use crate::walk::{random_walks, StartMode, WalkConfig};
        let g = make_octahedron();
        let mut rng = crate::seed::rng(5);
        let mut agree_true = 0;
        let mut agree_false = 0;
        for trial in 0..40u64 {
            let cfg = WalkConfig { length: 3, start_mode: StartMode::Uniform, seed: trial };
            let a = build_matrix(&g, &random_walks(&g, &cfg, 6).unwrap(), false).unwrap();
            for nonneg in [true, false] {
                let mut values = vec![0.0; 12];
                for _ in 0..3 {
                    let j = rng.random_range(0..12);
                    values[j] = if nonneg { rng.random_range(0.5..2.0) } else { rng.random_range(-2.0..2.0) };
                }
                let x = LinkVector { values, declared_nonnegative: nonneg };
                let got = verify_unique_sparsest(&a, &x, nonneg, Budget::size(12)).unwrap();
                assert_eq!(got, oracle_unique(&a, &x, nonneg), "trial {trial} nonneg {nonneg}");
                if got {
                    agree_true += 1
                } else {
                    agree_false += 1
                }
            }
        }
        assert!(agree_true > 0 && agree_false > 0, "{agree_true} / {agree_false}");
    }

    #[test]
    fn certificates_match_integer_oracles_on_random_matrices() {
        let mut rng = crate::seed::rng(21);
        for _ in 0..60 {
            let m = rng.random_range(2..6);
            let n = rng.random_range(2..9);
            let rows: Vec<Vec<u32>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(0..3)).collect()).collect();
            let a = MeasurementMatrix::from_rows(&rows).unwrap();
            let sp = spark(&a, Budget::size(n)).unwrap().value;
            match oracle_spark(&a) {
                Some(s) => assert_eq!(sp, Bound::Exact(s)),
                None => assert_eq!(sp, Bound::Infinite),
            }
            let depth = t3_depth(&a, Budget::size(n)).unwrap().depth;
            assert_eq!(depth, oracle_depth(&a, n));
            let t1 = theorem1_threshold(&a, Budget::size(n)).unwrap().value;
            if let (Bound::Exact(s), Bound::Exact(t)) = (sp, t1) {
                assert!(t >= s.div_ceil(2));
                assert!(s > depth);
            }
        }
    }
}
