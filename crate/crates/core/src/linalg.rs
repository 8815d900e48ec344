//! Dense Gaussian elimination with partial pivoting for the small column
//! subsets that the certifiers and oracles enumerate.

/// Default pivot tolerance, relative to the largest entry magnitude.
pub const PIVOT_TOL: f64 = 1e-9;

/// Reduced row-echelon form of a row-major matrix.
#[derive(Debug, Clone)]
pub struct Rref {
    rows: Vec<Vec<f64>>,
    /// `(row, column)` of every pivot, in column order.
    pivots: Vec<(usize, usize)>,
    ncols: usize,
}

impl Rref {
    /// Eliminate over the first `pivot_cols` columns of `rows`; any further
    /// columns (for example a right-hand side) are carried along.
    pub fn new(mut rows: Vec<Vec<f64>>, pivot_cols: usize, tol: f64) -> Self {
        let scale = rows.iter().flat_map(|r| r[..pivot_cols].iter()).fold(1.0f64, |m, v| m.max(v.abs()));
        let thresh = tol * scale;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == rows.len() {
                break;
            }
            let (best, mag) =
                (r..rows.len())
                    .map(|i| (i, rows[i][c].abs()))
                    .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if mag <= thresh {
                for row in rows.iter_mut().skip(r) {
                    row[c] = 0.0;
                }
                continue;
            }
            rows.swap(r, best);
            let p = rows[r][c];
            for v in rows[r].iter_mut() {
                *v /= p;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0.0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                    row[c] = 0.0;
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        Self { rows, pivots, ncols: pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Particular solution with free variables at zero, reading the right-hand
    /// side from column `ncols`. Consistency is left to the caller.
    pub fn particular_solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.ncols];
        for &(r, c) in &self.pivots {
            x[c] = self.rows[r][self.ncols];
        }
        x
    }

    /// A nonzero null vector, if the pivot columns are dependent.
    pub fn null_vector(&self) -> Option<Vec<f64>> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|p| p.1).collect();
        let free = (0..self.ncols).find(|c| !pivot_cols.contains(c))?;
        let mut w = vec![0.0; self.ncols];
        w[free] = 1.0;
        for &(r, c) in &self.pivots {
            w[c] = -self.rows[r][free];
        }
        Some(w)
    }
}

/// Rank of the `m x cols.len()` submatrix picked out of column-major data.
pub fn rank_of(columns: &[&[f64]], m: usize) -> usize {
    Rref::new(to_rows(columns, m, None), columns.len(), PIVOT_TOL).rank()
}

/// Solve `[columns] z = b` when consistent, returning `(z, independent)`.
/// Consistency is judged by the max-norm residual against `res_tol * max(1, |b|_inf)`.
pub fn solve_columns(columns: &[&[f64]], b: &[f64], res_tol: f64) -> Option<(Vec<f64>, bool)> {
    let m = b.len();
    let rref = Rref::new(to_rows(columns, m, Some(b)), columns.len(), PIVOT_TOL);
    let z = rref.particular_solution();
    let bscale = b.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let resid = residual(columns, &z, b);
    (resid <= res_tol * bscale).then(|| (z, rref.rank() == columns.len()))
}

/// A nonzero vector `w` with `[columns] w = 0`, if one exists.
pub fn null_vector_of(columns: &[&[f64]], m: usize) -> Option<Vec<f64>> {
    Rref::new(to_rows(columns, m, None), columns.len(), PIVOT_TOL).null_vector()
}

pub fn residual(columns: &[&[f64]], z: &[f64], b: &[f64]) -> f64 {
    (0..b.len())
        .map(|i| {
            let s: f64 = columns.iter().zip(z).map(|(c, zj)| c[i] * zj).sum();
            (s - b[i]).abs()
        })
        .fold(0.0, f64::max)
}

fn to_rows(columns: &[&[f64]], m: usize, rhs: Option<&[f64]>) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| {
            let mut row: Vec<f64> = columns.iter().map(|c| c[i]).collect();
            if let Some(b) = rhs {
                row.push(b[i]);
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fraction-free (Bareiss) rank over exact integers.
    fn bareiss_rank(mut a: Vec<Vec<i128>>) -> usize {
        let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        let mut prev = 1i128;
        for c in 0..n {
            let Some(p) = (rank..m).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, p);
            for i in rank + 1..m {
                for j in c + 1..n {
                    a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
                }
                a[i][c] = 0;
            }
            prev = a[rank][c];
            rank += 1;
        }
        rank
    }

    #[test]
    fn float_rank_agrees_with_integer_rank() {
        use rand::Rng;
        let mut rng = crate::seed::rng(3);
        for _ in 0..500 {
            let m = rng.random_range(1..7);
            let n = rng.random_range(1..9);
            let cols: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random_range(0..3) as f64).collect()).collect();
            let ints: Vec<Vec<i128>> = (0..m).map(|i| cols.iter().map(|c| c[i] as i128).collect()).collect();
            let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
            assert_eq!(rank_of(&refs, m), bareiss_rank(ints));
        }
    }

    #[test]
    fn solve_and_null_vector() {
        let c0 = [1.0, 0.0];
        let c1 = [1.0, 1.0];
        let c2 = [2.0, 1.0];
        let (z, indep) = solve_columns(&[&c0, &c1], &[3.0, 1.0], 1e-9).unwrap();
        assert!(indep);
        assert!((z[0] - 2.0).abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12);
        let w = null_vector_of(&[&c0, &c1, &c2], 2).unwrap();
        assert!(residual(&[&c0, &c1, &c2], &w, &[0.0, 0.0]) < 1e-12);
        assert!(null_vector_of(&[&c0, &c1], 2).is_none());
        assert!(solve_columns(&[&c0], &[1.0, 1.0], 1e-9).is_none());
    }
}
