//! Compressed-sparse-row storage for complex matrices.
//!
//! Rows are stored with strictly increasing column indices and no duplicate
//! entries; construction from triplets sorts and sums duplicates. All values
//! are finite by construction.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::{Error, Result};

/// Complex matrix in CSR form.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl ComplexSparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Usage(format!(
                    "triplet ({r}, {c}) outside {n_rows} x {n_cols} matrix"
                )));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Usage(format!("non-finite matrix entry at ({r}, {c})")));
            }
        }
        // Counting sort by row keeps construction linear; entries within a
        // row are then sorted by column and compacted.
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let mut order = vec![0usize; triplets.len()];
        let mut next = counts.clone();
        for (i, &(r, _, _)) in triplets.iter().enumerate() {
            order[next[r]] = i;
            next[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n_rows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut row_entries: Vec<(usize, Complex64)> = Vec::new();
        for r in 0..n_rows {
            row_entries.clear();
            for &i in &order[counts[r]..counts[r + 1]] {
                row_entries.push((triplets[i].1, triplets[i].2));
            }
            row_entries.sort_unstable_by_key(|&(c, _)| c);
            let mut last_col = usize::MAX;
            for &(c, v) in row_entries.iter() {
                if c == last_col {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                    last_col = c;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values })
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `r` as parallel `(columns, values)` slices.
    pub fn row(&self, r: usize) -> (&[usize], &[Complex64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    /// Entry `(r, c)`, zero when not stored.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(i) => vals[i],
            Err(_) => Complex64::default(),
        }
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_cols, "matvec dimension mismatch");
        let mut y = vec![Complex64::default(); self.n_rows];
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            let mut acc = Complex64::default();
            for (c, v) in cols.iter().zip(vals) {
                acc += v * x[*c];
            }
            y[r] = acc;
        }
        y
    }

    /// Principal submatrix on the given strictly increasing index set.
    pub fn submatrix(&self, indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage("submatrix index set must be strictly increasing".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= self.n_rows || last >= self.n_cols {
                return Err(Error::Usage("submatrix index out of range".into()));
            }
        }
        let mut global_to_local = vec![usize::MAX; self.n_cols];
        for (local, &g) in indices.iter().enumerate() {
            global_to_local[g] = local;
        }
        let n = indices.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for &g in indices {
            let (cols, vals) = self.row(g);
            for (c, v) in cols.iter().zip(vals) {
                let local = global_to_local[*c];
                if local != usize::MAX {
                    col_idx.push(local);
                    values.push(*v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows: n, n_cols: n, row_ptr, col_idx, values })
    }

    /// Renders the matrix in coordinate text form, one `row col re im` line
    /// per stored entry, in row-major order.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                let _ = writeln!(out, "{r} {c} {:.16e} {:.16e}", v.re, v.im);
            }
        }
        out
    }

    /// Writes the coordinate form to `path`.
    pub fn write_coordinate_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_coordinate_text())?;
        Ok(())
    }

    /// Largest |entry|, used for relative thresholds.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `a - b` elementwise.
pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
