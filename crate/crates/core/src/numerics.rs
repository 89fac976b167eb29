//! Dense linear algebra and descriptive statistics.
//!
//! Everything downstream (time-series fitting, PCA, the regression zoo)
//! is built on the primitives here: a row-major [`Matrix`], summary
//! statistics, Pearson correlation, standardization, a Householder QR
//! least-squares solver and a cyclic Jacobi symmetric eigen solver.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense row-major matrix of finite `f64` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data. Every entry must be finite.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {bad}")));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from a list of equal-length rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_row_major(nrows, ncols, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from a list of equal-length columns.
    pub fn from_cols(cols: Vec<Vec<f64>>) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::Dimension("ragged columns".into()));
        }
        let mut data = vec![0.0; nrows * ncols];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * ncols + j] = *v;
            }
        }
        Self::from_row_major(nrows, ncols, data)
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix { rows: n, cols: n, data }
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Borrows row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copies column `j` out.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Appends a column of ones in front (intercept term).
    pub fn with_intercept(&self) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            out.set(i, 0, 1.0);
            for j in 0..self.cols {
                out.set(i, j + 1, self.get(i, j));
            }
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, keep: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            for (jn, &jo) in keep.iter().enumerate() {
                out.set(i, jn, self.get(i, jo));
            }
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(keep.len(), self.cols);
        for (ine, &io) in keep.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ine, j, self.get(io, j));
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Inverse of a small square matrix by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a.get(r, col).abs().total_cmp(&a.get(s, col).abs()))
                .unwrap();
            if a.get(pivot, col).abs() < 1e-300 {
                return Err(Error::RankDeficient { pivot: col, cols: n });
            }
            if pivot != col {
                for j in 0..n {
                    let t = a.get(col, j);
                    a.set(col, j, a.get(pivot, j));
                    a.set(pivot, j, t);
                    let t = inv.get(col, j);
                    inv.set(col, j, inv.get(pivot, j));
                    inv.set(pivot, j, t);
                }
            }
            let d = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / d);
                inv.set(col, j, inv.get(col, j) / d);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - f * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - f * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }
}

/// Eight-number summary in the style of a `describe` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator).
    pub std: f64,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

/// Pearson correlation matrix with variable labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrMatrix {
    pub labels: Vec<String>,
    pub values: Matrix,
}

impl CorrMatrix {
    /// CSV rendering with the label header row and column.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str("variable");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(l);
            for j in 0..self.labels.len() {
                out.push(',');
                out.push_str(&format!("{:.6}", self.values.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Sorted eigen decomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: Matrix,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation with the n-1 denominator; 0 for a single value.
fn sample_std(values: &[f64], m: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Quantile by linear interpolation between order statistics of `sorted`.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Summary statistics of a sample: count, mean, sample std and the
/// five-number spread with interpolated quartiles.
pub fn describe(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::Size("describe requires a nonempty sample".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("describe input {bad}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = mean(values);
    Ok(SummaryStats {
        count: values.len(),
        mean: m,
        std: sample_std(values, m),
        min: sorted[0],
        q25: quantile_sorted(&sorted, 0.25),
        q50: quantile_sorted(&sorted, 0.50),
        q75: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Pearson correlation of two equal-length samples.
fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

/// Pearson correlation matrix over the columns of `table`.
///
/// Requires at least two rows and no constant column.
pub fn correlation_matrix(table: &Matrix, labels: &[String]) -> Result<CorrMatrix> {
    if labels.len() != table.cols() {
        return Err(Error::Dimension(format!(
            "{} labels for {} columns",
            labels.len(),
            table.cols()
        )));
    }
    if table.rows() < 2 {
        return Err(Error::Size("correlation needs at least 2 rows".into()));
    }
    let cols: Vec<Vec<f64>> = (0..table.cols()).map(|j| table.col(j)).collect();
    for (j, c) in cols.iter().enumerate() {
        let m = mean(c);
        if c.iter().all(|v| (v - m).abs() < f64::EPSILON * m.abs().max(1.0)) {
            return Err(Error::DegenerateColumn(labels[j].clone()));
        }
    }
    let k = cols.len();
    let mut values = Matrix::identity(k);
    for i in 0..k {
        for j in (i + 1)..k {
            let r = pearson(&cols[i], &cols[j]);
            values.set(i, j, r);
            values.set(j, i, r);
        }
    }
    Ok(CorrMatrix { labels: labels.to_vec(), values })
}

/// Column-wise standardization to mean 0 and sample std 1.
///
/// Returns the standardized matrix along with the per-column means and
/// standard deviations used, so the transform can be replayed or inverted.
pub fn standardize(x: &Matrix) -> Result<(Matrix, Vec<f64>, Vec<f64>)> {
    let mut means = Vec::with_capacity(x.cols());
    let mut stds = Vec::with_capacity(x.cols());
    for j in 0..x.cols() {
        let c = x.col(j);
        let m = mean(&c);
        let s = sample_std(&c, m);
        if s == 0.0 {
            return Err(Error::DegenerateColumn(format!("column {j}")));
        }
        means.push(m);
        stds.push(s);
    }
    let mut z = Matrix::zeros(x.rows(), x.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            z.set(i, j, (x.get(i, j) - means[j]) / stds[j]);
        }
    }
    Ok((z, means, stds))
}

/// Least-squares solution of `X b = y` by Householder QR.
///
/// Requires `rows >= cols` and full column rank; rank deficiency is
/// detected from the diagonal of R.
pub fn least_squares_solve(x: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let n = x.rows();
    let k = x.cols();
    if y.len() != n {
        return Err(Error::Dimension(format!("{} responses for {n} rows", y.len())));
    }
    if n < k {
        return Err(Error::Size(format!("underdetermined system: {n} rows, {k} columns")));
    }

    // Factor in place: r holds the matrix, qty the transformed response.
    let mut r = x.clone();
    let mut qty = y.to_vec();
    for j in 0..k {
        // Householder vector for column j below the diagonal.
        let mut norm = 0.0;
        for i in j..n {
            norm += r.get(i, j) * r.get(i, j);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            return Err(Error::RankDeficient { pivot: j, cols: k });
        }
        let alpha = if r.get(j, j) >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| r.get(i, j)).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|w| w * w).sum();
        if vnorm2 > 0.0 {
            // Apply I - 2vv'/v'v to the remaining columns and to qty.
            for col in j..k {
                let dot: f64 = (j..n).map(|i| v[i - j] * r.get(i, col)).sum();
                let f = 2.0 * dot / vnorm2;
                for i in j..n {
                    r.set(i, col, r.get(i, col) - f * v[i - j]);
                }
            }
            let dot: f64 = (j..n).map(|i| v[i - j] * qty[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                qty[i] -= f * v[i - j];
            }
        }
        r.set(j, j, alpha);
    }

    let max_diag = (0..k).map(|j| r.get(j, j).abs()).fold(0.0, f64::max);
    for j in 0..k {
        if r.get(j, j).abs() < 1e-12 * max_diag.max(1e-300) {
            return Err(Error::RankDeficient { pivot: j, cols: k });
        }
    }

    // Back substitution on the upper triangle.
    let mut beta = vec![0.0; k];
    for j in (0..k).rev() {
        let mut s = qty[j];
        for m in (j + 1)..k {
            s -= r.get(j, m) * beta[m];
        }
        beta[j] = s / r.get(j, j);
    }
    Ok(beta)
}

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps annihilate off-diagonal entries until the off-diagonal Frobenius
/// norm falls below `1e-12 * max(1, ||S||_F)`; eigenpairs are returned in
/// descending eigenvalue order with orthonormal eigenvector columns.
pub fn symmetric_eigen(s: &Matrix) -> Result<EigenResult> {
    if s.rows() != s.cols() {
        return Err(Error::Dimension("eigen decomposition of a non-square matrix".into()));
    }
    let n = s.rows();
    let scale = s.frobenius_norm().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (s.get(i, j) - s.get(j, i)).abs();
            if delta > 1e-10 * scale {
                return Err(Error::NotSymmetric { i, j, delta });
            }
        }
    }

    let mut a = s.clone();
    // Force exact symmetry so rotations stay consistent.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut v = Matrix::identity(n);
    let tol = 1e-12 * scale;

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    const MAX_SWEEPS: usize = 100;
    let mut sweeps = 0;
    while off_norm(&a) >= tol {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::Convergence {
                iterations: MAX_SWEEPS,
                context: "Jacobi eigen sweeps".into(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() < tol / (n * n) as f64 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                // Rotation angle that zeroes a[p][q].
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v.get(row, old_col));
        }
    }
    Ok(EigenResult { eigenvalues, eigenvectors: vectors })
}

/// Indices outside the 1.5 IQR boxplot whiskers.
pub fn iqr_outliers(values: &[f64]) -> Vec<usize> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q25 = quantile_sorted(&sorted, 0.25);
    let q75 = quantile_sorted(&sorted, 0.75);
    let iqr = q75 - q25;
    let lo = q25 - 1.5 * iqr;
    let hi = q75 + 1.5 * iqr;
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < lo || v > hi)
        .map(|(i, _)| i)
        .collect()
}
