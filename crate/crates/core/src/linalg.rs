//! Dense complex linear algebra shared by every other module.
//!
//! Operators on a `d`-dimensional Hilbert space are coordinatized by
//! row-major vectorization, so `vectorize(A X B) = (A ⊗ Bᵀ) vectorize(X)`
//! and `Tr(F† X) = vectorize(F)† vectorize(X)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute and relative thresholds under which approximate identities are
/// accepted. `abs` bounds entrywise residuals, `rel` scales the rank cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs >= 0.0 && rel >= 0.0) {
            return Err(Error::Invalid(format!(
                "tolerances must be nonnegative (abs = {abs}, rel = {rel})"
            )));
        }
        Ok(Self { abs, rel })
    }

    pub fn with_abs(self, abs: f64) -> Self {
        Self { abs, ..self }
    }
}

/// Hilbert–Schmidt inner product `Tr(a† b)`, conjugate-linear in `a`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "hs_inner of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "hs_inner expects square operators, got {:?}",
            a.shape()
        )));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Row-major stacking of a square matrix.
pub fn vectorize(a: &CMat) -> CVec {
    let (r, c) = a.shape();
    CVec::from_fn(r * c, |k, _| a[(k / c, k % c)])
}

/// Inverse of [`vectorize`]. `v.len()` must be a perfect square.
pub fn devectorize(v: &CVec) -> Result<CMat> {
    let d = operator_dim(v.len())?;
    Ok(CMat::from_fn(d, d, |i, j| v[i * d + j]))
}

/// `d` such that `d * d == n`.
pub fn operator_dim(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::Dimension(format!(
            "length {n} is not the square of a Hilbert space dimension"
        )));
    }
    Ok(d)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_real(a: &RMat, b: &RMat) -> RMat {
    a.kronecker(b)
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(|x| C64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVec) -> CVec {
    v.map(|x| C64::new(x, 0.0))
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &RMat, b: &RMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_vec_diff(a: &CVec, b: &CVec) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().sum()
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_hermitian_eigenvalue(a: &CMat) -> f64 {
    let h = (a + a.adjoint()).map(|z| z * 0.5);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Numerical rank, an orthonormal basis of the column space, and the
/// Moore–Penrose pseudo-inverse of a matrix.
#[derive(Clone, Debug)]
pub struct RankRange {
    pub rank: usize,
    pub range_basis: CMat,
    pub pseudo_inverse: CMat,
    pub singular_values: Vec<f64>,
}

impl RankRange {
    /// Orthogonal projector onto the column space.
    pub fn range_projector(&self) -> CMat {
        &self.range_basis * self.range_basis.adjoint()
    }
}

/// Singular values above `tol.rel * σ_max` count toward the rank.
pub fn rank_range(a: &CMat, tol: Tolerance) -> RankRange {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return RankRange {
            rank: 0,
            range_basis: CMat::zeros(m, 0),
            pseudo_inverse: CMat::zeros(n, m),
            singular_values: Vec::new(),
        };
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = tol.rel * sigma_max;
    let kept: Vec<usize> = (0..sigma.len())
        .filter(|&k| sigma[k] > cutoff && sigma[k] > 0.0)
        .collect();

    let mut range_basis = CMat::zeros(m, kept.len());
    let mut pseudo_inverse = CMat::zeros(n, m);
    for (col, &k) in kept.iter().enumerate() {
        range_basis.set_column(col, &u.column(k));
        let inv = 1.0 / sigma[k];
        // V Σ⁺ U†, accumulated one singular triple at a time.
        let vk = v_t.row(k).adjoint();
        let uk = u.column(k).adjoint();
        pseudo_inverse += (vk * uk).map(|z| z * inv);
    }
    let mut singular_values: Vec<f64> = sigma.iter().copied().collect();
    singular_values.sort_by(|x, y| y.total_cmp(x));
    RankRange {
        rank: kept.len(),
        range_basis,
        pseudo_inverse,
        singular_values,
    }
}

pub fn rank(a: &CMat, tol: Tolerance) -> usize {
    rank_range(a, tol).rank
}

/// On-disk form of a complex matrix: row-major real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMat> for MatrixJson {
    fn from(a: &CMat) -> Self {
        let (rows, cols) = a.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(a[(i, j)].re);
                im.push(a[(i, j)].im);
            }
        }
        Self { rows, cols, re, im }
    }
}

impl MatrixJson {
    pub fn to_cmat(&self) -> Result<CMat> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Dimension(format!(
                "matrix {}x{} needs {n} entries, got re: {}, im: {}",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        let m = CMat::from_fn(self.rows, self.cols, |i, j| {
            C64::new(self.re[i * self.cols + j], self.im[i * self.cols + j])
        });
        if !is_finite(&m) {
            return Err(Error::Invalid("matrix has non-finite entries".into()));
        }
        Ok(m)
    }
}

pub fn cmat_to_json(a: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from(a)).expect("matrix serializes")
}

pub fn cmat_from_json(s: &str) -> Result<CMat> {
    serde_json::from_str::<MatrixJson>(s)?.to_cmat()
}
