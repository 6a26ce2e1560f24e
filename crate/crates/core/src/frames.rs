//! Frames for the operator space `B(H)`, their duals, and the induced
//! representations of states, effects and channels.
//!
//! A frame `F = {F_λ}` represents an operator `X` by `μ(λ|X) = Tr(F_λ† X)`
//! and an effect `E` by `ξ(E|λ) = Tr(E† G_λ)`, where `G` is a dual frame:
//! `Σ_λ Tr(F_λ† X) G_λ = X` for every `X`.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::channel::{Channel, ChannelFile};
use crate::error::{Error, Result};
use crate::linalg::{
    devectorize, hs_inner, max_abs_diff, rank_range, trace, vectorize, CMat, CVec, MatrixJson,
    Tolerance, C64, I, ONE, ZERO,
};
use crate::random::ginibre;

/// Max-norm bound on `Σ_λ vec(G_λ) vec(F_λ)† − I` for a valid dual pair.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    d: usize,
    labels: Vec<String>,
    elements: Vec<CMat>,
}

impl Frame {
    pub fn new(d: usize, labels: Vec<String>, elements: Vec<CMat>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("Hilbert space dimension must be ≥ 1".into()));
        }
        if labels.len() != elements.len() {
            return Err(Error::Dimension(format!(
                "{} labels for {} frame elements",
                labels.len(),
                elements.len()
            )));
        }
        for (k, f) in elements.iter().enumerate() {
            if f.shape() != (d, d) {
                return Err(Error::Dimension(format!(
                    "frame element {k} is {:?}, expected {d}x{d}",
                    f.shape()
                )));
            }
            if !crate::linalg::is_finite(f) {
                return Err(Error::Invalid(format!("frame element {k} is not finite")));
            }
        }
        Ok(Self {
            d,
            labels,
            elements,
        })
    }

    /// Frame with labels `0, 1, …`.
    pub fn from_elements(d: usize, elements: Vec<CMat>) -> Result<Self> {
        let labels = (0..elements.len()).map(|k| k.to_string()).collect();
        Self::new(d, labels, elements)
    }

    /// `{I, σx, σy, σz} / √2`, an orthonormal basis of qubit operators.
    pub fn pauli() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |z: C64| z * s;
        let elements = vec![
            CMat::from_row_slice(2, 2, &[c(ONE), ZERO, ZERO, c(ONE)]),
            CMat::from_row_slice(2, 2, &[ZERO, c(ONE), c(ONE), ZERO]),
            CMat::from_row_slice(2, 2, &[ZERO, c(-I), c(I), ZERO]),
            CMat::from_row_slice(2, 2, &[c(ONE), ZERO, ZERO, c(-ONE)]),
        ];
        let labels = ["I", "X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
        Self::new(2, labels, elements).expect("valid shapes")
    }

    /// Matrix units `E_ij`, labeled `"i,j"` in row-major order.
    pub fn matrix_units(d: usize) -> Self {
        let mut labels = Vec::with_capacity(d * d);
        let mut elements = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut e = CMat::zeros(d, d);
                e[(i, j)] = ONE;
                labels.push(format!("{i},{j}"));
                elements.push(e);
            }
        }
        Self::new(d, labels, elements).expect("valid shapes")
    }

    /// `n` Ginibre-distributed elements; spans `B(H)` almost surely when `n ≥ d²`.
    pub fn random<R: Rng>(rng: &mut R, d: usize, n: usize) -> Self {
        let elements = (0..n).map(|_| ginibre(rng, d, d)).collect();
        Self::from_elements(d, elements).expect("valid shapes")
    }

    pub fn hilbert_dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    /// `|Λ| × d²` matrix with rows `vec(F_λ)†`, so that it maps `vec(X)` to `μ(·|X)`.
    pub fn analysis_matrix(&self) -> CMat {
        let n = self.d * self.d;
        let mut m = CMat::zeros(self.len(), n);
        for (k, f) in self.elements.iter().enumerate() {
            m.set_row(k, &vectorize(f).adjoint());
        }
        m
    }

    /// `d² × |Λ|` matrix with columns `vec(F_λ)`.
    pub fn synthesis_matrix(&self) -> CMat {
        let n = self.d * self.d;
        let mut m = CMat::zeros(n, self.len());
        for (k, f) in self.elements.iter().enumerate() {
            m.set_column(k, &vectorize(f));
        }
        m
    }

    pub fn spans(&self, tol: Tolerance) -> bool {
        rank_range(&self.analysis_matrix(), tol).rank == self.d * self.d
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            d: self.d,
            labels: self.labels.clone(),
            elements: self.elements.iter().map(|f| f.map(|z| z * c)).collect(),
        }
    }

    /// Appends one element to the family.
    pub fn with_element(&self, label: impl Into<String>, element: CMat) -> Result<Self> {
        let mut labels = self.labels.clone();
        let mut elements = self.elements.clone();
        labels.push(label.into());
        elements.push(element);
        Self::new(self.d, labels, elements)
    }
}

/// A frame together with a dual frame over the same index set.
#[derive(Clone, Debug)]
pub struct DualPair {
    frame: Frame,
    dual: Frame,
}

impl DualPair {
    /// Checks the reconstruction identity on the full matrix-unit basis.
    pub fn new(frame: Frame, dual: Frame) -> Result<Self> {
        Self::with_tolerance(frame, dual, RECONSTRUCTION_TOL)
    }

    pub fn with_tolerance(frame: Frame, dual: Frame, tol: f64) -> Result<Self> {
        let pair = Self::unchecked(frame, dual)?;
        let residual = pair.reconstruction_residual();
        if residual > tol {
            return Err(Error::InvalidDualPair { residual });
        }
        Ok(pair)
    }

    /// Only shapes are checked. Used to probe deliberately broken pairs.
    pub fn unchecked(frame: Frame, dual: Frame) -> Result<Self> {
        if frame.d != dual.d || frame.len() != dual.len() {
            return Err(Error::Dimension(format!(
                "frame (d={}, |Λ|={}) and dual (d={}, |Λ|={}) do not match",
                frame.d,
                frame.len(),
                dual.d,
                dual.len()
            )));
        }
        Ok(Self { frame, dual })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn dual(&self) -> &Frame {
        &self.dual
    }

    pub fn hilbert_dim(&self) -> usize {
        self.frame.d
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.frame.labels
    }

    /// `max |Σ_λ vec(G_λ) vec(F_λ)† − I|`.
    pub fn reconstruction_residual(&self) -> f64 {
        let n = self.frame.d * self.frame.d;
        let r = self.dual.synthesis_matrix() * self.frame.analysis_matrix();
        max_abs_diff(&r, &CMat::identity(n, n))
    }

    /// `⟨F_λ', G_λ⟩` as a `|Λ| × |Λ|` matrix, which is also `Γ(id)`.
    pub fn gram(&self) -> CMat {
        self.frame.analysis_matrix() * self.dual.synthesis_matrix()
    }

    pub fn is_biorthogonal(&self, tol: f64) -> bool {
        let n = self.len();
        max_abs_diff(&self.gram(), &CMat::identity(n, n)) <= tol
    }
}

/// Frame operator `S(A) = Σ_λ Tr(F_λ† A) F_λ` as a `d² × d²` matrix.
pub fn frame_operator(f: &Frame) -> CMat {
    let n = f.d * f.d;
    let mut s = CMat::zeros(n, n);
    for el in &f.elements {
        let v = vectorize(el);
        s += &v * v.adjoint();
    }
    s
}

/// Canonical dual `G_λ = S⁻¹(F_λ)`. Fails unless the frame spans `B(H)`.
pub fn canonical_dual(f: &Frame) -> Result<DualPair> {
    let n = f.d * f.d;
    let s = frame_operator(f);
    let rr = rank_range(&s, Tolerance::default());
    if rr.rank < n {
        return Err(Error::SingularFrame {
            rank: rr.rank,
            required: n,
        });
    }
    let s_inv = rr.pseudo_inverse;
    let elements = f
        .elements
        .iter()
        .map(|el| devectorize(&(&s_inv * vectorize(el))))
        .collect::<Result<Vec<_>>>()?;
    let dual = Frame::new(f.d, f.labels.clone(), elements)?;
    DualPair::new(f.clone(), dual)
}

fn check_square(p: &DualPair, x: &CMat, what: &str) -> Result<()> {
    let d = p.hilbert_dim();
    if x.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "{what} is {:?}, pair acts on {d}x{d} operators",
            x.shape()
        )));
    }
    Ok(())
}

/// `μ(λ|X) = Tr(F_λ† X)`.
pub fn represent_state(p: &DualPair, x: &CMat) -> Result<CVec> {
    check_square(p, x, "state")?;
    let values = p
        .frame
        .elements
        .iter()
        .map(|f| hs_inner(f, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVec::from_vec(values))
}

/// `ξ(E|λ) = Tr(E† G_λ)`; equals `Tr(E G_λ)` for self-adjoint effects.
pub fn represent_effect(p: &DualPair, e: &CMat) -> Result<CVec> {
    check_square(p, e, "effect")?;
    let values = p
        .dual
        .elements
        .iter()
        .map(|g| hs_inner(e, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVec::from_vec(values))
}

/// `Σ_λ μ_λ G_λ`.
pub fn reconstruct_operator(p: &DualPair, mu: &CVec) -> Result<CMat> {
    if mu.len() != p.len() {
        return Err(Error::Dimension(format!(
            "coefficient vector has length {}, frame has {} elements",
            mu.len(),
            p.len()
        )));
    }
    let d = p.hilbert_dim();
    Ok(p.dual
        .elements
        .iter()
        .zip(mu.iter())
        .fold(CMat::zeros(d, d), |acc, (g, c)| acc + g.map(|z| z * c)))
}

/// `Σ_λ ξ(E|λ) F_λ†`, which returns `E†` (so `E` for effects).
///
/// Summing against `F_λ` instead only works for self-adjoint frames.
pub fn reconstruct_effect(p: &DualPair, xi: &CVec) -> Result<CMat> {
    if xi.len() != p.len() {
        return Err(Error::Dimension("effect coefficient length".into()));
    }
    let d = p.hilbert_dim();
    Ok(p.frame
        .elements
        .iter()
        .zip(xi.iter())
        .fold(CMat::zeros(d, d), |acc, (f, c)| {
            acc + f.adjoint().map(|z| z * c)
        }))
}

/// `Γ(λ_out|λ_in) = ⟨F^out_{λ_out}, E(G^in_{λ_in})⟩`, evaluated through the Kraus form.
pub fn represent_channel(p_out: &DualPair, p_in: &DualPair, ch: &Channel) -> Result<CMat> {
    if ch.d_in() != p_in.hilbert_dim() || ch.d_out() != p_out.hilbert_dim() {
        return Err(Error::Dimension(format!(
            "channel {}→{} between frames on d={} and d={}",
            ch.d_in(),
            ch.d_out(),
            p_in.hilbert_dim(),
            p_out.hilbert_dim()
        )));
    }
    let images = p_in
        .dual
        .elements
        .iter()
        .map(|g| ch.apply(g))
        .collect::<Result<Vec<_>>>()?;
    gamma_from_images(p_out, &images)
}

/// Same as [`represent_channel`] for any linear map given by its
/// superoperator on row-major vectorized operators.
pub fn represent_superop(p_out: &DualPair, p_in: &DualPair, superop: &CMat) -> Result<CMat> {
    let (n_out, n_in) = (
        p_out.hilbert_dim() * p_out.hilbert_dim(),
        p_in.hilbert_dim() * p_in.hilbert_dim(),
    );
    if superop.shape() != (n_out, n_in) {
        return Err(Error::Dimension(format!(
            "superoperator is {:?}, expected {:?}",
            superop.shape(),
            (n_out, n_in)
        )));
    }
    let images = p_in
        .dual
        .elements
        .iter()
        .map(|g| devectorize(&(superop * vectorize(g))))
        .collect::<Result<Vec<_>>>()?;
    gamma_from_images(p_out, &images)
}

fn gamma_from_images(p_out: &DualPair, images: &[CMat]) -> Result<CMat> {
    let mut gamma = CMat::zeros(p_out.len(), images.len());
    for (o, f) in p_out.frame.elements.iter().enumerate() {
        for (i, img) in images.iter().enumerate() {
            gamma[(o, i)] = hs_inner(f, img)?;
        }
    }
    Ok(gamma)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BornProbe {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
}

/// Compares `Σ_λ μ(λ|ρ) ξ(E|λ)` with `Tr(E ρ)`.
pub fn born_probe(p: &DualPair, rho: &CMat, eff: &CMat) -> Result<BornProbe> {
    let mu = represent_state(p, rho)?;
    let xi = represent_effect(p, eff)?;
    let lhs: C64 = mu.iter().zip(xi.iter()).map(|(a, b)| a * b).sum();
    let rhs = trace(&(eff * rho));
    Ok(BornProbe {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

/// Recovers the frame `F_λ` whose functionals `Tr(F_λ† ·)` are the rows of
/// `m`, and reports whether `m` is injective (the family spans `B(H)`).
pub fn frame_from_linear_map(m: &CMat, d: usize, tol: Tolerance) -> Result<(Frame, bool)> {
    if m.ncols() != d * d {
        return Err(Error::Dimension(format!(
            "linear map has {} columns, expected d² = {}",
            m.ncols(),
            d * d
        )));
    }
    let elements = (0..m.nrows())
        .map(|k| devectorize(&m.row(k).adjoint()))
        .collect::<Result<Vec<_>>>()?;
    let frame = Frame::from_elements(d, elements)?;
    let faithful = rank_range(m, tol).rank == d * d;
    Ok((frame, faithful))
}

/// On-disk frame: `{"d":..,"labels":[..],"elements":[..],"dual":[..]?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrameFile {
    pub d: usize,
    pub labels: Vec<String>,
    pub elements: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<MatrixJson>>,
}

impl FrameFile {
    pub fn from_frame(f: &Frame, dual: Option<&Frame>) -> Self {
        Self {
            d: f.d,
            labels: f.labels.clone(),
            elements: f.elements.iter().map(MatrixJson::from).collect(),
            dual: dual.map(|g| g.elements.iter().map(MatrixJson::from).collect()),
        }
    }

    pub fn frame(&self) -> Result<Frame> {
        let elements = self
            .elements
            .iter()
            .map(MatrixJson::to_cmat)
            .collect::<Result<Vec<_>>>()?;
        Frame::new(self.d, self.labels.clone(), elements)
    }

    pub fn dual_frame(&self) -> Result<Option<Frame>> {
        let Some(dual) = &self.dual else {
            return Ok(None);
        };
        let elements = dual
            .iter()
            .map(MatrixJson::to_cmat)
            .collect::<Result<Vec<_>>>()?;
        Frame::new(self.d, self.labels.clone(), elements).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_vec_diff, min_hermitian_eigenvalue, rank};
    use crate::random::{complex_scalar, random_density, random_effect, rng};

    fn ket0_proj() -> CMat {
        let mut p = CMat::zeros(2, 2);
        p[(0, 0)] = ONE;
        p
    }

    #[test]
    fn frame_operator_of_pauli_frame_is_identity() {
        // Direct summation: Σ_k vec(σ_k/√2) vec(σ_k/√2)†.
        let mut direct = CMat::zeros(4, 4);
        for f in Frame::pauli().elements() {
            for a in 0..4 {
                for b in 0..4 {
                    direct[(a, b)] += f[(a / 2, a % 2)] * f[(b / 2, b % 2)].conj();
                }
            }
        }
        assert!(max_abs_diff(&direct, &CMat::identity(4, 4)) < 1e-15);
        assert!(max_abs_diff(&frame_operator(&Frame::pauli()), &direct) < 1e-15);
    }

    #[test]
    fn frame_operator_trivial_and_homogeneous() {
        let f = Frame::from_elements(1, vec![CMat::identity(1, 1)]).unwrap();
        assert_eq!(frame_operator(&f), CMat::identity(1, 1));

        let mut r = rng(1);
        let f = Frame::random(&mut r, 2, 6);
        let c = C64::new(0.3, -1.7);
        let s = frame_operator(&f);
        let sc = frame_operator(&f.scaled(c));
        assert!(max_abs_diff(&sc, &s.map(|z| z * c.norm_sqr())) < 1e-12);
    }

    #[test]
    fn frame_operator_is_hermitian_psd() {
        let mut r = rng(2);
        for n in [3, 4, 7] {
            let s = frame_operator(&Frame::random(&mut r, 2, n));
            assert!(max_abs_diff(&s, &s.adjoint()) < 1e-14);
            assert!(min_hermitian_eigenvalue(&s) >= -1e-12);
        }
    }

    #[test]
    fn canonical_duals_of_orthonormal_bases_are_themselves() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        for (f, g) in p.frame().elements().iter().zip(p.dual().elements()) {
            assert!(max_abs_diff(f, g) < 1e-14);
        }
        let p = canonical_dual(&Frame::matrix_units(3)).unwrap();
        for (f, g) in p.frame().elements().iter().zip(p.dual().elements()) {
            assert!(max_abs_diff(f, g) < 1e-14);
        }
    }

    #[test]
    fn non_spanning_frame_has_no_canonical_dual() {
        let z = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let f = Frame::from_elements(2, vec![CMat::identity(2, 2), z]).unwrap();
        assert!(matches!(
            canonical_dual(&f),
            Err(Error::SingularFrame {
                rank: 2,
                required: 4
            })
        ));
    }

    #[test]
    fn represent_state_examples() {
        let p = canonical_dual(&Frame::matrix_units(2)).unwrap();
        let mut r = rng(5);
        let rho = random_density(&mut r, 2);
        assert!(max_abs_vec_diff(&represent_state(&p, &rho).unwrap(), &vectorize(&rho)) < 1e-15);

        // Bloch vector r: μ = (1, rx, ry, rz)/√2.
        let (rx, ry, rz) = (0.3, -0.4, 0.5);
        let rho = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new((1.0 + rz) / 2.0, 0.0),
                C64::new(rx / 2.0, -ry / 2.0),
                C64::new(rx / 2.0, ry / 2.0),
                C64::new((1.0 - rz) / 2.0, 0.0),
            ],
        );
        let p = canonical_dual(&Frame::pauli()).unwrap();
        let mu = represent_state(&p, &rho).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CVec::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(s * rx, 0.0),
            C64::new(s * ry, 0.0),
            C64::new(s * rz, 0.0),
        ]);
        assert!(max_abs_vec_diff(&mu, &expected) < 1e-15);
    }

    #[test]
    fn state_representation_is_complex_linear_effect_is_conjugate_linear() {
        let mut r = rng(6);
        let p = canonical_dual(&Frame::random(&mut r, 2, 5)).unwrap();
        let x = ginibre(&mut r, 2, 2);
        let y = ginibre(&mut r, 2, 2);
        let (a, b) = (complex_scalar(&mut r), complex_scalar(&mut r));
        let combo = x.map(|z| z * a) + y.map(|z| z * b);
        let lhs = represent_state(&p, &combo).unwrap();
        let rhs = represent_state(&p, &x).unwrap() * a + represent_state(&p, &y).unwrap() * b;
        assert!(max_abs_vec_diff(&lhs, &rhs) < 1e-12);

        let lhs = represent_effect(&p, &x.map(|z| z * I)).unwrap();
        let rhs = represent_effect(&p, &x).unwrap() * (-I);
        assert!(max_abs_vec_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn effect_representation_examples() {
        let p = canonical_dual(&Frame::matrix_units(2)).unwrap();
        let xi = represent_effect(&p, &CMat::identity(2, 2)).unwrap();
        let expected = CVec::from_vec(vec![ONE, ZERO, ZERO, ONE]);
        assert_eq!(xi, expected);

        let mut r = rng(7);
        let p = canonical_dual(&Frame::random(&mut r, 2, 6)).unwrap();
        let e = random_effect(&mut r, 2);
        let back = reconstruct_effect(&p, &represent_effect(&p, &e).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &e) <= 1e-9);
    }

    #[test]
    fn reconstruction_examples() {
        let mut r = rng(8);
        let p = canonical_dual(&Frame::random(&mut r, 3, 9)).unwrap();
        let zero = reconstruct_operator(&p, &CVec::zeros(9)).unwrap();
        assert_eq!(zero, CMat::zeros(3, 3));
        let rho = random_density(&mut r, 3);
        let back = reconstruct_operator(&p, &represent_state(&p, &rho).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &rho) <= 1e-9);
        assert!(reconstruct_operator(&p, &CVec::zeros(4)).is_err());

        // Overcomplete: μ-space has a kernel, reconstruction is still exact.
        let f = Frame::pauli()
            .with_element("extra", ginibre(&mut r, 2, 2))
            .unwrap();
        let p = canonical_dual(&f).unwrap();
        let rho = random_density(&mut r, 2);
        let back = reconstruct_operator(&p, &represent_state(&p, &rho).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &rho) <= 1e-9);
        let gamma = p.gram();
        assert!(max_abs_diff(&gamma, &CMat::identity(5, 5)) > 1e-3);
    }

    #[test]
    fn identity_channel_on_basis_is_identity_matrix() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        let g = represent_channel(&p, &p, &Channel::identity(2)).unwrap();
        assert!(max_abs_diff(&g, &CMat::identity(4, 4)) < 1e-14);
    }

    #[test]
    fn identity_channel_on_overcomplete_frame_is_rank_four_idempotent() {
        let mut r = rng(9);
        let f = Frame::pauli()
            .with_element("extra", ginibre(&mut r, 2, 2))
            .unwrap();
        let p = canonical_dual(&f).unwrap();
        let g = represent_channel(&p, &p, &Channel::identity(2)).unwrap();
        // Idempotency oracle: Σ_λ'' Γ(λ',λ'') Γ(λ'',λ) written out.
        let mut sq = CMat::zeros(5, 5);
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    sq[(a, b)] += g[(a, c)] * g[(c, b)];
                }
            }
        }
        assert!(max_abs_diff(&sq, &g) < 1e-9);
        assert!(max_abs_diff(&g, &CMat::identity(5, 5)) > 1e-3);
        assert_eq!(rank(&g, Tolerance::default()), 4);
    }

    #[test]
    fn depolarizing_channel_in_pauli_frame() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        let g = represent_channel(&p, &p, &Channel::fully_depolarizing(2)).unwrap();
        let mut expected = CMat::zeros(4, 4);
        expected[(0, 0)] = ONE;
        assert!(max_abs_diff(&g, &expected) < 1e-14);
    }

    #[test]
    fn channel_representation_rejects_dimension_mismatch() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        assert!(represent_channel(&p, &p, &Channel::identity(3)).is_err());
        assert!(represent_superop(&p, &p, &CMat::identity(9, 9)).is_err());
    }

    #[test]
    fn superop_route_matches_kraus_route() {
        let mut r = rng(10);
        let p = canonical_dual(&Frame::random(&mut r, 2, 6)).unwrap();
        let ch = Channel::unitary(crate::random::haar_unitary(&mut r, 2)).unwrap();
        let a = represent_channel(&p, &p, &ch).unwrap();
        let b = represent_superop(&p, &p, ch.superop()).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn born_probe_examples() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        let probe = born_probe(&p, &ket0_proj(), &ket0_proj()).unwrap();
        assert!(probe.residual <= 1e-10);
        assert!((probe.lhs - ONE).norm() <= 1e-10);
    }

    #[test]
    fn mismatched_dual_breaks_born_rule() {
        let mut r = rng(11);
        let f1 = Frame::random(&mut r, 2, 4);
        let f2 = Frame::random(&mut r, 2, 4);
        let g2 = canonical_dual(&f2).unwrap().dual().clone();
        let broken = DualPair::unchecked(f1.clone(), g2.clone()).unwrap();
        assert!(DualPair::new(f1, g2).is_err());
        let worst = (0..20)
            .map(|_| {
                let rho = random_density(&mut r, 2);
                let e = random_effect(&mut r, 2);
                born_probe(&broken, &rho, &e).unwrap().residual
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    #[test]
    fn frame_from_identity_map_is_matrix_units() {
        let (f, faithful) =
            frame_from_linear_map(&CMat::identity(4, 4), 2, Tolerance::default()).unwrap();
        assert!(faithful);
        for (a, b) in f.elements().iter().zip(Frame::matrix_units(2).elements()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn frame_from_rank_deficient_map_is_not_faithful() {
        let mut r = rng(12);
        let rows = ginibre(&mut r, 3, 4);
        let mut m = CMat::zeros(4, 4);
        for k in 0..3 {
            m.set_row(k, &rows.row(k));
        }
        m.set_row(3, &rows.row(0));
        let (_, faithful) = frame_from_linear_map(&m, 2, Tolerance::default()).unwrap();
        assert!(!faithful);
        assert!(frame_from_linear_map(&m, 3, Tolerance::default()).is_err());
    }

    #[test]
    fn analysis_of_extracted_frame_reproduces_map() {
        let mut r = rng(13);
        let m = ginibre(&mut r, 6, 4);
        let (f, _) = frame_from_linear_map(&m, 2, Tolerance::default()).unwrap();
        assert!(max_abs_diff(&f.analysis_matrix(), &m) < 1e-15);
    }

    #[test]
    fn frame_file_round_trip_and_shape_errors() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        let file = FrameFile::from_frame(p.frame(), Some(p.dual()));
        let json = serde_json::to_string(&file).unwrap();
        let back: FrameFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.frame().unwrap(), *p.frame());
        assert_eq!(back.dual_frame().unwrap().unwrap(), *p.dual());

        let no_dual = FrameFile::from_frame(p.frame(), None);
        assert!(!serde_json::to_string(&no_dual).unwrap().contains("dual"));
        assert!(Frame::new(2, vec!["a".into()], vec![CMat::zeros(3, 3)]).is_err());
        assert!(Frame::new(2, vec![], vec![CMat::zeros(2, 2)]).is_err());
    }

    #[test]
    fn shape_errors_on_representations() {
        let p = canonical_dual(&Frame::pauli()).unwrap();
        assert!(represent_state(&p, &CMat::zeros(3, 3)).is_err());
        assert!(represent_effect(&p, &CMat::zeros(1, 1)).is_err());
    }
}
