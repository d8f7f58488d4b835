//! Dense symmetric eigenproblems.
//!
//! The symmetric eigensolver is faer's; the generalized problem `H c = E S c`
//! is reduced to standard form with a Cholesky factor of `S` computed here.

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Eigenvalues in ascending order with eigenvectors as the columns of
/// `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl Eigen {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.vectors.nrows()).map(|i| self.vectors[(i, j)]).collect()
    }
}

/// Full spectrum of a real symmetric matrix (lower triangle is read).
pub fn symmetric_eigen(a: &Mat<f64>) -> Result<Eigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Eigen(format!("matrix is {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: Mat::zeros(0, 0),
        });
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let values = order.iter().map(|&i| s[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// Lower Cholesky factor `L` with `A = L L^T`.
pub fn cholesky(a: &Mat<f64>) -> Result<Mat<f64>> {
    let n = a.nrows();
    let mut l = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for p in 0..j {
            d -= l[(j, p)] * l[(j, p)];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solve `L X = B` in place for lower-triangular `L`, column by column.
fn forward_solve(l: &Mat<f64>, b: &mut Mat<f64>) {
    let n = l.nrows();
    for c in 0..b.ncols() {
        for i in 0..n {
            let mut s = b[(i, c)];
            for p in 0..i {
                s -= l[(i, p)] * b[(p, c)];
            }
            b[(i, c)] = s / l[(i, i)];
        }
    }
}

/// Solve `L^T x = y` for lower-triangular `L`.
fn backward_solve_transposed(l: &Mat<f64>, y: &mut [f64]) {
    let n = l.nrows();
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= l[(p, i)] * y[p];
        }
        y[i] = s / l[(i, i)];
    }
}

/// Symmetric-definite generalized problem `H c = E S c`.
///
/// Returned eigenvectors are `S`-orthonormal.
pub fn generalized_symmetric_eigen(h: &Mat<f64>, s: &Mat<f64>) -> Result<Eigen> {
    let n = h.nrows();
    if h.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::Eigen("H and S dimensions differ".into()));
    }
    let l = cholesky(s)?;
    // A = L^-1 H L^-T: first X = L^-1 H, then A = L^-1 X^T.
    let mut x = h.clone();
    forward_solve(&l, &mut x);
    let mut a = x.transpose().to_owned();
    forward_solve(&l, &mut a);
    let a = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let std = symmetric_eigen(&a)?;
    let mut vectors = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        let mut y = std.vector(j);
        backward_solve_transposed(&l, &mut y);
        for i in 0..n {
            vectors[(i, j)] = y[i];
        }
    }
    Ok(Eigen {
        values: std.values,
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_reconstructs() {
        let a = Mat::from_fn(4, 4, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + (i + j) as f64) });
        let l = cholesky(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let s: f64 = (0..4).map(|p| l[(i, p)] * l[(j, p)]).sum();
                assert!((s - a[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn indefinite_rejected() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite { pivot: 1, .. })));
    }

    #[test]
    fn generalized_two_by_two() {
        // H = diag(1, 2), S = diag(2, 1): eigenvalues 1/2 and 2
        let h = Mat::from_fn(2, 2, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let s = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 - i as f64 } else { 0.0 });
        let e = generalized_symmetric_eigen(&h, &s).unwrap();
        assert!((e.values[0] - 0.5).abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
        let v = e.vector(0);
        assert!((2.0 * v[0] * v[0] + v[1] * v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_residuals_small() {
        let n = 30;
        let h = Mat::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let s = Mat::from_fn(n, n, |i, j| if i == j { 2.0 } else if i.abs_diff(j) == 1 { 0.5 } else { 0.0 });
        let e = generalized_symmetric_eigen(&h, &s).unwrap();
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for j in 0..n {
            let c = e.vector(j);
            for i in 0..n {
                let hc: f64 = (0..n).map(|p| h[(i, p)] * c[p]).sum();
                let sc: f64 = (0..n).map(|p| s[(i, p)] * c[p]).sum();
                assert!((hc - e.values[j] * sc).abs() < 1e-11 * n as f64);
            }
        }
    }
}
