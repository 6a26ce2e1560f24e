//! Complexification of real vector spaces and real-linear maps.
//!
//! A complexified space `C(W)` is kept in two encodings. The pair encoding
//! `(w₁, w₂) ∈ W ⊕ W` carries an explicit complex structure
//! `J(w₁, w₂) = (-w₂, w₁)`; the coordinate encoding identifies `(w₁, w₂)`
//! with `w₁ + i w₂ ∈ ℂⁿ`. Everything downstream of this module uses the
//! coordinate encoding. The monoidal coherence checks only make sense in
//! the pair encoding, where `μ_{W,V}` is a nontrivial formula.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron, kron_real, max_abs_diff, rank, to_complex, CMat, CVec, RMat, RVec, Tolerance, C64,
};
use crate::random::{rng, uniform_real};

/// Residual bound for the coherence checks. All maps involved are exact up
/// to a handful of floating point products.
pub const COHERENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSpace {
    pub dim: usize,
    pub label: String,
}

impl RealSpace {
    pub fn new(dim: usize, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("real space must have dimension ≥ 1".into()));
        }
        Ok(Self {
            dim,
            label: label.into(),
        })
    }
}

/// Element `(w₁, w₂)` of `C(W)` in the pair encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPair {
    pub re: RVec,
    pub im: RVec,
}

impl ComplexPair {
    pub fn new(re: RVec, im: RVec) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Dimension(format!(
                "pair components have lengths {} and {}",
                re.len(),
                im.len()
            )));
        }
        Ok(Self { re, im })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            re: RVec::zeros(n),
            im: RVec::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// `w₁ + i w₂`.
    pub fn to_coords(&self) -> CVec {
        CVec::from_fn(self.len(), |k, _| C64::new(self.re[k], self.im[k]))
    }

    pub fn from_coords(z: &CVec) -> Self {
        Self {
            re: z.map(|c| c.re),
            im: z.map(|c| c.im),
        }
    }

    /// Scalar multiplication law `(a + bi)(w₁, w₂) = (a w₁ - b w₂, b w₁ + a w₂)`.
    pub fn scale(&self, c: C64) -> Self {
        Self {
            re: &self.re * c.re - &self.im * c.im,
            im: &self.re * c.im + &self.im * c.re,
        }
    }

    /// `C(f)(w₁, w₂) = (f w₁, f w₂)`.
    pub fn map_by(&self, f: &RMat) -> Self {
        Self {
            re: f * &self.re,
            im: f * &self.im,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.re
            .iter()
            .zip(other.re.iter())
            .chain(self.im.iter().zip(other.im.iter()))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let re = uniform_real(rng, n, 1).column(0).into_owned();
        let im = uniform_real(rng, n, 1).column(0).into_owned();
        Self { re, im }
    }
}

/// `C(W) = W ⊕ W` with its complex structure.
#[derive(Clone, Debug)]
pub struct ComplexifiedSpace {
    pub base: RealSpace,
    j: RMat,
}

impl ComplexifiedSpace {
    pub fn new(base: RealSpace) -> Self {
        let n = base.dim;
        let mut j = RMat::zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(k, n + k)] = -1.0;
            j[(n + k, k)] = 1.0;
        }
        Self { base, j }
    }

    pub fn complex_dim(&self) -> usize {
        self.base.dim
    }

    /// The complex structure as a real `2n × 2n` matrix acting on `(w₁; w₂)`.
    pub fn complex_structure(&self) -> &RMat {
        &self.j
    }

    /// Standard embedding `w ↦ (w, 0)`.
    pub fn embed(&self, w: &RVec) -> Result<ComplexPair> {
        if w.len() != self.base.dim {
            return Err(Error::Dimension(format!(
                "cannot embed a length-{} vector into C({})",
                w.len(),
                self.base.label
            )));
        }
        Ok(ComplexPair {
            re: w.clone(),
            im: RVec::zeros(w.len()),
        })
    }

    pub fn apply_j(&self, p: &ComplexPair) -> ComplexPair {
        let n = self.base.dim;
        let stacked = RVec::from_iterator(2 * n, p.re.iter().chain(p.im.iter()).copied());
        let out = &self.j * stacked;
        ComplexPair {
            re: out.rows(0, n).into_owned(),
            im: out.rows(n, n).into_owned(),
        }
    }
}

/// Complexification of a real matrix: entries promoted to ℂ.
pub fn complexify_map(f: &RMat) -> CMat {
    to_complex(f)
}

/// Real-linear map `f̂: W → V` into a complex space, written `f̂ = P + iQ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealToComplexMap {
    pub real_part: RMat,
    pub imag_part: RMat,
}

impl RealToComplexMap {
    pub fn new(real_part: RMat, imag_part: RMat) -> Result<Self> {
        if real_part.shape() != imag_part.shape() {
            return Err(Error::Dimension(format!(
                "real part {:?} and imaginary part {:?} differ",
                real_part.shape(),
                imag_part.shape()
            )));
        }
        Ok(Self {
            real_part,
            imag_part,
        })
    }

    pub fn apply(&self, w: &RVec) -> CVec {
        let p = &self.real_part * w;
        let q = &self.imag_part * w;
        CVec::from_fn(p.len(), |k, _| C64::new(p[k], q[k]))
    }
}

/// The unique ℂ-linear map `F: C(W) → V` with `F ∘ e_C = f̂`.
pub fn unique_extension(fhat: &RealToComplexMap) -> Result<CMat> {
    let (p, q) = (&fhat.real_part, &fhat.imag_part);
    if p.shape() != q.shape() {
        return Err(Error::Dimension("P and Q must share a shape".into()));
    }
    Ok(CMat::from_fn(p.nrows(), p.ncols(), |i, j| {
        C64::new(p[(i, j)], q[(i, j)])
    }))
}

/// Rank over ℂ of the embedded images of real vectors.
pub fn complex_span_rank(vectors: &[RVec], tol: Tolerance) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let n = first.len();
    let m = CMat::from_fn(n, vectors.len(), |i, j| C64::new(vectors[j][i], 0.0));
    rank(&m, tol)
}

/// `ε: ℂ → C(ℝ)`, `x + iy ↦ (x, y)`.
pub fn epsilon(z: C64) -> ComplexPair {
    ComplexPair {
        re: RVec::from_element(1, z.re),
        im: RVec::from_element(1, z.im),
    }
}

pub fn epsilon_inverse(p: &ComplexPair) -> C64 {
    C64::new(p.re[0], p.im[0])
}

/// `μ̂((w₁,w₂) ⊗ (v₁,v₂)) = (w₁⊗v₁ − w₂⊗v₂, w₁⊗v₂ + w₂⊗v₁)`, with
/// `W ⊗ V` flattened row-major.
pub fn mu_hat(w: &ComplexPair, v: &ComplexPair) -> ComplexPair {
    let k = |a: &RVec, b: &RVec| -> RVec {
        RVec::from_fn(a.len() * b.len(), |idx, _| {
            a[idx / b.len()] * b[idx % b.len()]
        })
    };
    ComplexPair {
        re: k(&w.re, &v.re) - k(&w.im, &v.im),
        im: k(&w.re, &v.im) + k(&w.im, &v.re),
    }
}

/// Coordinates in `C(W) ⊗_ℂ C(V) ≅ ℂ^{nm}` of the simple tensor `w ⊗ v`.
pub fn simple_tensor(w: &ComplexPair, v: &ComplexPair) -> CVec {
    let a = w.to_coords();
    let b = v.to_coords();
    CVec::from_fn(a.len() * b.len(), |idx, _| {
        a[idx / b.len()] * b[idx % b.len()]
    })
}

/// Matrix of the ℂ-linear extension `μ_{W,V}` from
/// `C(W) ⊗ C(V)` (product-basis coordinates) to `C(W ⊗ V)` (coordinates).
pub fn mu_matrix(dim_w: usize, dim_v: usize) -> CMat {
    let n = dim_w * dim_v;
    let mut m = CMat::zeros(n, n);
    for i in 0..dim_w {
        for j in 0..dim_v {
            let wi = ComplexPair::new(unit(dim_w, i), RVec::zeros(dim_w)).unwrap();
            let vj = ComplexPair::new(unit(dim_v, j), RVec::zeros(dim_v)).unwrap();
            m.set_column(i * dim_v + j, &mu_hat(&wi, &vj).to_coords());
        }
    }
    m
}

/// Inverse of `μ_{W,V}` built on the real basis
/// `{(wᵢ⊗vⱼ, 0), (0, wᵢ⊗vⱼ)}` of `C(W ⊗ V)`.
///
/// Returns the images of the two halves of that basis as the columns of
/// `(A, B)`: a pair element `(p₁, p₂)` is sent to `A p₁ + B p₂`. The map is
/// ℂ-linear exactly when `B = iA`, in which case `A` is its matrix.
pub fn mu_inverse_on_basis(dim_w: usize, dim_v: usize) -> (CMat, CMat) {
    let n = dim_w * dim_v;
    let mut a = CMat::zeros(n, n);
    let mut b = CMat::zeros(n, n);
    for i in 0..dim_w {
        for j in 0..dim_v {
            let w_real = ComplexPair::new(unit(dim_w, i), RVec::zeros(dim_w)).unwrap();
            let v_real = ComplexPair::new(unit(dim_v, j), RVec::zeros(dim_v)).unwrap();
            let v_imag = ComplexPair::new(RVec::zeros(dim_v), unit(dim_v, j)).unwrap();
            // (wᵢ⊗vⱼ, 0) ↦ (wᵢ,0) ⊗ (vⱼ,0)
            a.set_column(i * dim_v + j, &simple_tensor(&w_real, &v_real));
            // (0, wᵢ⊗vⱼ) = i·(wᵢ⊗vⱼ, 0) ↦ (wᵢ,0) ⊗ (0,vⱼ)
            b.set_column(i * dim_v + j, &simple_tensor(&w_real, &v_imag));
        }
    }
    (a, b)
}

fn unit(n: usize, k: usize) -> RVec {
    let mut e = RVec::zeros(n);
    e[k] = 1.0;
    e
}

/// Permutation taking `(U ⊗ V) ⊗ Z` coordinates to `U ⊗ (V ⊗ Z)` coordinates.
fn associator(du: usize, dv: usize, dz: usize) -> RMat {
    let n = du * dv * dz;
    let mut a = RMat::zeros(n, n);
    for i in 0..du {
        for j in 0..dv {
            for k in 0..dz {
                let left = (i * dv + j) * dz + k;
                let right = i * (dv * dz) + (j * dz + k);
                a[(right, left)] = 1.0;
            }
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub epsilon_iso: bool,
    pub mu_iso: bool,
    pub naturality_max_residual: f64,
    pub associativity_max_residual: f64,
    pub unitality_max_residual: f64,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub tensor_basis_order: String,
}

impl CoherenceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.epsilon_iso
            && self.mu_iso
            && self.naturality_max_residual <= tol
            && self.associativity_max_residual <= tol
            && self.unitality_max_residual <= tol
    }
}

/// Numerically checks that complexification is a strong monoidal functor:
/// `ε` and `μ` are isomorphisms, `μ` is natural, and the associativity and
/// unit coherence diagrams commute.
///
/// `dims` holds two or three real dimensions `(W, V[, Z])`; a missing `Z`
/// defaults to `V`. Random maps are sampled entrywise uniform on [-1, 1].
pub fn monoidal_coherence(dims: &[usize], trials: usize, seed: u64) -> Result<CoherenceReport> {
    let (dw, dv, dz) = match *dims {
        [w, v] => (w, v, v),
        [w, v, z] => (w, v, z),
        _ => {
            return Err(Error::Invalid(format!(
                "coherence needs 2 or 3 dimensions, got {}",
                dims.len()
            )))
        }
    };
    if dw == 0 || dv == 0 || dz == 0 {
        return Err(Error::Invalid("dimensions must be ≥ 1".into()));
    }
    let mut r = rng(seed);
    let tol = COHERENCE_TOL;

    // ε: round trips and ℂ-linearity ε(iz) = J ε(z).
    let c_of_r = ComplexifiedSpace::new(RealSpace::new(1, "R")?);
    let mut eps_res: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let z = C64::new(r.random_range(-1.0..=1.0), r.random_range(-1.0..=1.0));
        eps_res = eps_res.max((epsilon_inverse(&epsilon(z)) - z).norm());
        let p = ComplexPair::random(&mut r, 1);
        eps_res = eps_res.max(epsilon(epsilon_inverse(&p)).max_abs_diff(&p));
        let lhs = epsilon(z * C64::new(0.0, 1.0));
        let rhs = c_of_r.apply_j(&epsilon(z));
        eps_res = eps_res.max(lhs.max_abs_diff(&rhs));
    }

    // μ: inverse built on the product basis, ℂ-linearity of that inverse,
    // and agreement of μ̂ with its linear extension on simple tensors.
    let mut mu_res: f64 = 0.0;
    for &(a, b) in &[(dw, dv), (dv, dz), (dw, dv * dz), (dw * dv, dz)] {
        let m = mu_matrix(a, b);
        let (inv, inv_imag) = mu_inverse_on_basis(a, b);
        let id = CMat::identity(a * b, a * b);
        mu_res = mu_res.max(max_abs_diff(
            &inv_imag,
            &inv.map(|z| z * C64::new(0.0, 1.0)),
        ));
        mu_res = mu_res.max(max_abs_diff(&(&inv * &m), &id));
        mu_res = mu_res.max(max_abs_diff(&(&m * &inv), &id));
        for _ in 0..trials.max(1) {
            let x = ComplexPair::random(&mut r, a);
            let y = ComplexPair::random(&mut r, b);
            let direct = mu_hat(&x, &y).to_coords();
            let extended = &m * simple_tensor(&x, &y);
            mu_res = mu_res.max(crate::linalg::max_abs_vec_diff(&direct, &extended));
        }
    }

    // Naturality: C(f ⊗ g) ∘ μ_{W,V} = μ_{W',V'} ∘ (C(f) ⊗ C(g)) with
    // f: W → V and g: V → W.
    let mut nat_res: f64 = 0.0;
    let m_src = mu_matrix(dw, dv);
    let m_tgt = mu_matrix(dv, dw);
    for _ in 0..trials {
        let f = uniform_real(&mut r, dv, dw);
        let g = uniform_real(&mut r, dw, dv);
        let fg = kron_real(&f, &g);
        let x = ComplexPair::random(&mut r, dw);
        let y = ComplexPair::random(&mut r, dv);
        let lhs = mu_hat(&x, &y).map_by(&fg);
        let rhs = mu_hat(&x.map_by(&f), &y.map_by(&g));
        nat_res = nat_res.max(lhs.max_abs_diff(&rhs));

        let lhs_m = complexify_map(&fg) * &m_src;
        let rhs_m = &m_tgt * kron(&complexify_map(&f), &complexify_map(&g));
        nat_res = nat_res.max(max_abs_diff(&lhs_m, &rhs_m));
    }

    // Associativity on simple tensors x ⊗ y ⊗ z.
    let assoc = associator(dw, dv, dz);
    let mut assoc_res: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let x = ComplexPair::random(&mut r, dw);
        let y = ComplexPair::random(&mut r, dv);
        let z = ComplexPair::random(&mut r, dz);
        let lhs = mu_hat(&x, &mu_hat(&y, &z));
        let rhs = mu_hat(&mu_hat(&x, &y), &z).map_by(&assoc);
        assoc_res = assoc_res.max(lhs.max_abs_diff(&rhs));
    }

    // Unitality: C(ℓ) ∘ μ_{ℝ,V} ∘ (ε ⊗ id) = ℓ and the mirrored triangle.
    // The unitors ℝ ⊗ V ≅ V and V ⊗ ℝ ≅ V are identities on coordinates.
    let mut unit_res: f64 = 0.0;
    for &d in &[dw, dv, dz] {
        for _ in 0..trials.max(1) {
            let alpha = C64::new(r.random_range(-1.0..=1.0), r.random_range(-1.0..=1.0));
            let x = ComplexPair::random(&mut r, d);
            let expected = x.scale(alpha);
            let left = mu_hat(&epsilon(alpha), &x);
            let right = mu_hat(&x, &epsilon(alpha));
            unit_res = unit_res.max(left.max_abs_diff(&expected));
            unit_res = unit_res.max(right.max_abs_diff(&expected));
        }
    }

    Ok(CoherenceReport {
        epsilon_iso: eps_res <= tol,
        mu_iso: mu_res <= tol,
        naturality_max_residual: nat_res,
        associativity_max_residual: assoc_res,
        unitality_max_residual: unit_res,
        seed,
        dims: vec![dw, dv, dz],
        trials,
        tensor_basis_order: "row-major".into(),
    })
}
