//! Measurement matrices built from walks, and the bipartite expansion
//! structure between edges (columns) and measurements (rows).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::walk::{regularize, Walk};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Rows count traversals of unmodified walks.
    Raw,
    /// Rows come from walks regularized to at most two visits per edge.
    Regularized,
    /// Entered directly (fixtures, files).
    Literal,
}

/// Dense `m x |E|` matrix of traversal counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementMatrix {
    m: usize,
    num_edges: usize,
    entries: Vec<u32>,
    provenance: Provenance,
}

impl MeasurementMatrix {
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let num_edges = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != num_edges) {
            return Err(Error::InvalidParameter(format!(
                "row {i} has {} entries, expected {num_edges}",
                rows[i].len()
            )));
        }
        Ok(Self { m: rows.len(), num_edges, entries: rows.concat(), provenance: Provenance::Literal })
    }

    /// A literal matrix with explicit dimensions (allows zero rows).
    pub fn zeros(m: usize, num_edges: usize) -> Self {
        Self { m, num_edges, entries: vec![0; m * num_edges], provenance: Provenance::Literal }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.num_edges + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.num_edges..(i + 1) * self.num_edges]
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Columns as floating-point vectors.
    pub fn columns_f64(&self) -> Vec<Vec<f64>> {
        (0..self.num_edges).map(|j| (0..self.m).map(|i| self.get(i, j) as f64).collect()).collect()
    }

    /// The first `m` rows, keeping provenance.
    pub fn prefix(&self, m: usize) -> Self {
        let m = m.min(self.m);
        Self {
            m,
            num_edges: self.num_edges,
            entries: self.entries[..m * self.num_edges].to_vec(),
            provenance: self.provenance,
        }
    }

    /// `A x` in floating point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.num_edges);
        (0..self.m).map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()).collect()
    }

    /// CSV with a `m,num_edges` header line followed by `m` rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.m, self.num_edges);
        for i in 0..self.m {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let dims = parse_csv_row::<usize>(header, hl + 1)?;
        let [m, num_edges] = dims[..] else {
            return Err(parse_err(hl + 1, "header must be `m,num_edges`"));
        };
        let mut entries = Vec::with_capacity(m * num_edges);
        let mut count = 0;
        for (i, line) in lines {
            let row = parse_csv_row::<u32>(line, i + 1)?;
            if row.len() != num_edges {
                return Err(parse_err(i + 1, format!("expected {num_edges} entries, found {}", row.len())));
            }
            entries.extend(row);
            count += 1;
        }
        if count != m {
            return Err(parse_err(hl + 1, format!("header declares {m} rows, found {count}")));
        }
        Ok(Self { m, num_edges, entries, provenance: Provenance::Literal })
    }
}

fn parse_csv_row<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    line.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|e| parse_err(lineno, format!("`{}`: {e}", t.trim()))))
        .collect()
}

/// Row `i` counts how often walk `i` (regularized first if requested)
/// traverses each edge.
pub fn build_matrix(g: &Graph, walks: &[Walk], regularized: bool) -> Result<MeasurementMatrix> {
    if walks.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let num_edges = g.num_edges();
    let mut entries = vec![0u32; walks.len() * num_edges];
    for (i, w) in walks.iter().enumerate() {
        let reg;
        let w = if regularized {
            reg = regularize(w, g)?;
            &reg
        } else {
            w.validate(g)?;
            w
        };
        for &e in w.edge_trace() {
            entries[i * num_edges + e] += 1;
        }
    }
    Ok(MeasurementMatrix {
        m: walks.len(),
        num_edges,
        entries,
        provenance: if regularized { Provenance::Regularized } else { Provenance::Raw },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpanderReport {
    pub k: usize,
    /// `min |N(S)| / |E(S)|` over nonempty column sets with `|S| <= k` and `|E(S)| > 0`.
    pub worst_ratio: f64,
    pub epsilon: f64,
    /// Column set attaining the worst ratio (first in enumeration order).
    pub witness: Vec<usize>,
    /// `|N(S)|` and `|E(S)|` of the witness.
    pub witness_counts: (usize, usize),
    pub d_min: usize,
    pub d_max: usize,
}

struct ColumnSupports {
    words: usize,
    bits: Vec<Vec<u64>>,
    nnz: Vec<usize>,
}

impl ColumnSupports {
    fn new(a: &MeasurementMatrix) -> Self {
        let words = a.rows().div_ceil(64).max(1);
        let mut bits = vec![vec![0u64; words]; a.num_edges()];
        let mut nnz = vec![0; a.num_edges()];
        for i in 0..a.rows() {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v != 0 {
                    bits[j][i / 64] |= 1 << (i % 64);
                    nnz[j] += 1;
                }
            }
        }
        Self { words, bits, nnz }
    }
}

/// Exhaustive `(k, eps)` expansion check over all column subsets of size `1..=k`.
///
/// `|E(S)|` counts nonzero entries in the columns of `S` (a 2 counts once),
/// `|N(S)|` counts rows with a nonzero in some column of `S`. `max_subsets`
/// bounds the total number of subsets visited.
pub fn expansion_report(a: &MeasurementMatrix, k: usize, max_subsets: Option<u64>) -> Result<ExpanderReport> {
    if k > a.num_edges() {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds {} columns", a.num_edges())));
    }
    let cols = ColumnSupports::new(a);
    let stats = column_degree_stats(a);
    let mut best = Best { n: 1, e: 1, witness: Vec::new() };
    let mut visited = 0u64;
    for size in 1..=k {
        let mut chosen = Vec::with_capacity(size);
        let mut union = vec![0u64; cols.words];
        let mut walker = SubsetWalker { cols: &cols, size, visited: &mut visited, max: max_subsets, best: &mut best };
        if !walker.descend(0, &mut chosen, &mut union, 0) {
            return Err(Error::BudgetExceeded {
                partial: format!("completed k = {}, worst_ratio = {}", size - 1, best.n as f64 / best.e as f64),
            });
        }
    }
    let worst_ratio = best.n as f64 / best.e as f64;
    Ok(ExpanderReport {
        k,
        worst_ratio,
        epsilon: 1.0 - worst_ratio,
        witness_counts: if best.witness.is_empty() { (0, 0) } else { (best.n, best.e) },
        witness: best.witness,
        d_min: stats.d_min,
        d_max: stats.d_max,
    })
}

struct Best {
    n: usize,
    e: usize,
    witness: Vec<usize>,
}

struct SubsetWalker<'a> {
    cols: &'a ColumnSupports,
    size: usize,
    visited: &'a mut u64,
    max: Option<u64>,
    best: &'a mut Best,
}

impl SubsetWalker<'_> {
    /// Returns false once the budget is exhausted.
    fn descend(&mut self, from: usize, chosen: &mut Vec<usize>, union: &mut [u64], e_sum: usize) -> bool {
        if chosen.len() == self.size {
            *self.visited += 1;
            if self.max.is_some_and(|m| *self.visited > m) {
                return false;
            }
            let n: usize = union.iter().map(|w| w.count_ones() as usize).sum();
            // n / e_sum < best.n / best.e, compared exactly
            if e_sum > 0 && n * self.best.e < self.best.n * e_sum {
                *self.best = Best { n, e: e_sum, witness: chosen.clone() };
            }
            return true;
        }
        let remaining = self.size - chosen.len();
        for j in from..=self.cols.nnz.len() - remaining {
            let saved = union.to_vec();
            for (u, b) in union.iter_mut().zip(&self.cols.bits[j]) {
                *u |= b;
            }
            chosen.push(j);
            let ok = self.descend(j + 1, chosen, union, e_sum + self.cols.nnz[j]);
            chosen.pop();
            union.copy_from_slice(&saved);
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDegreeStats {
    /// Nonzero count of every column.
    pub per_column: Vec<usize>,
    pub d_min: usize,
    pub d_max: usize,
    /// Column degree -> number of columns with that degree.
    pub histogram: BTreeMap<usize, usize>,
}

pub fn column_degree_stats(a: &MeasurementMatrix) -> ColumnDegreeStats {
    let per_column: Vec<usize> =
        (0..a.num_edges()).map(|j| (0..a.rows()).filter(|&i| a.get(i, j) != 0).count()).collect();
    let mut histogram = BTreeMap::new();
    for &d in &per_column {
        *histogram.entry(d).or_insert(0) += 1;
    }
    ColumnDegreeStats {
        d_min: per_column.iter().copied().min().unwrap_or(0),
        d_max: per_column.iter().copied().max().unwrap_or(0),
        per_column,
        histogram,
    }
}

/// The 4 x 6 routing matrix of the four-path example network.
pub fn example_four_paths() -> MeasurementMatrix {
    MeasurementMatrix::from_rows(&[
        vec![1, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0],
        vec![0, 1, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 1, 1],
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete;
    use crate::walk::{random_walks, StartMode, WalkConfig};
    use proptest::prelude::*;

    #[test]
    fn counts_traversals() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let w = Walk::from_vertices(&g, vec![0, 1, 0]).unwrap();
        let a = build_matrix(&g, &[w], false).unwrap();
        assert_eq!(a.row(0), &[2, 0]);
        assert_eq!(a.provenance(), Provenance::Raw);
        assert_eq!(build_matrix(&g, &[], false), Err(Error::EmptyMatrix));
    }

    #[test]
    fn rows_replay_their_walks() {
        let g = make_complete(10).unwrap();
        let cfg = WalkConfig { length: 30, start_mode: StartMode::DegreeProportional, seed: 8 };
        let walks = random_walks(&g, &cfg, 50).unwrap();
        let raw = build_matrix(&g, &walks, false).unwrap();
        let reg = build_matrix(&g, &walks, true).unwrap();
        assert_eq!(reg.provenance(), Provenance::Regularized);
        assert!(reg.max_entry() <= 2);
        for (i, w) in walks.iter().enumerate() {
            let mult = w.multiplicities();
            for j in 0..g.num_edges() {
                assert_eq!(raw.get(i, j) as usize, mult.get(&j).copied().unwrap_or(0));
                assert_eq!(reg.get(i, j) != 0, raw.get(i, j) != 0);
            }
            // the regularized row is realized by the regularized walk
            let r = regularize(w, &g).unwrap();
            r.validate(&g).unwrap();
            let rm = r.multiplicities();
            for j in 0..g.num_edges() {
                assert_eq!(reg.get(i, j) as usize, rm.get(&j).copied().unwrap_or(0));
            }
        }
    }

    #[test]
    fn four_path_example_expansion() {
        let a = example_four_paths();
        let s = column_degree_stats(&a);
        assert_eq!(s.per_column, vec![1, 2, 1, 2, 2, 1]);
        assert_eq!((s.d_min, s.d_max), (1, 2));
        // columns 5 and 6 (1-based): E(S) = 3, N(S) = 2
        let sub =
            MeasurementMatrix::from_rows(&(0..4).map(|i| vec![a.get(i, 4), a.get(i, 5)]).collect::<Vec<_>>()).unwrap();
        let r = expansion_report(&sub, 2, None).unwrap();
        assert_eq!(r.witness_counts, (2, 3));
        assert!((r.worst_ratio - 2.0 / 3.0).abs() < 1e-15);
        let full = expansion_report(&a, 2, None).unwrap();
        assert!(full.worst_ratio <= 2.0 / 3.0);
    }

    #[test]
    fn singletons_and_disjoint_supports_never_collide() {
        let a = example_four_paths();
        let r = expansion_report(&a, 1, None).unwrap();
        assert_eq!(r.worst_ratio, 1.0);
        assert_eq!(r.epsilon, 0.0);
        let id = MeasurementMatrix::from_rows(
            &(0..5).map(|i| (0..5).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(expansion_report(&id, 5, None).unwrap().worst_ratio, 1.0);
    }

    #[test]
    fn degree_stats_edge_cases() {
        let z = MeasurementMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(column_degree_stats(&z).d_min, 0);
        let same = MeasurementMatrix::from_rows(&vec![vec![1, 2, 1]; 4]).unwrap();
        assert!(column_degree_stats(&same).per_column.iter().all(|&d| d == 4));
    }

    #[test]
    fn budget_is_enforced() {
        let a = example_four_paths();
        let err = expansion_report(&a, 3, Some(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { ref partial } if partial.contains("k = 1")));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let a = example_four_paths();
        let text = a.to_csv();
        assert!(text.starts_with("4,6\n1,1,0,0,0,0\n"));
        let b = MeasurementMatrix::from_csv(&text).unwrap();
        assert_eq!(b, a);
        assert_eq!(b.to_csv(), text);
        let err = MeasurementMatrix::from_csv("2,2\n1,0\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    fn brute_ratio(a: &MeasurementMatrix, k: usize) -> f64 {
        let mut worst = 1.0f64;
        for mask in 1u32..(1 << a.num_edges()) {
            if mask.count_ones() as usize > k {
                continue;
            }
            let cols: Vec<usize> = (0..a.num_edges()).filter(|j| mask >> j & 1 == 1).collect();
            let e: usize = cols.iter().map(|&j| (0..a.rows()).filter(|&i| a.get(i, j) != 0).count()).sum();
            let n = (0..a.rows()).filter(|&i| cols.iter().any(|&j| a.get(i, j) != 0)).count();
            if e > 0 {
                worst = worst.min(n as f64 / e as f64);
            }
        }
        worst
    }

    proptest! {
        #[test]
        fn expansion_matches_bitmask_enumeration(rows in prop::collection::vec(prop::collection::vec(0u32..3, 7), 1..6), k in 1usize..5) {
            let a = MeasurementMatrix::from_rows(&rows).unwrap();
            let r = expansion_report(&a, k, None).unwrap();
            prop_assert!((r.worst_ratio - brute_ratio(&a, k)).abs() < 1e-12);
            prop_assert!(r.worst_ratio >= 0.0 && r.worst_ratio <= 1.0);
            prop_assert!(r.d_min <= r.d_max);
            if k > 1 {
                let smaller = expansion_report(&a, k - 1, None).unwrap();
                prop_assert!(r.worst_ratio <= smaller.worst_ratio);
            }
        }

        #[test]
        fn csv_round_trips(rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 1..5)) {
            let a = MeasurementMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(MeasurementMatrix::from_csv(&a.to_csv()).unwrap(), a);
        }
    }
}
