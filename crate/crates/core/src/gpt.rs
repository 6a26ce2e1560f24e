//! Finite GPT systems: quantum (`B(H)_sa`) and classical (substochastic).
//!
//! A system stores spanning states and effects as real coordinate vectors,
//! the deterministic effect `u`, and coefficients `t_ij` with
//! `Σ_ij t_ij s_i e_jᵀ = id`. Quantum coordinates are taken against an
//! orthonormal Hermitian basis `{H_k}` of `B(H)_sa`, so `x_k = Tr(H_k X)`.
//!
//! Complexified coordinates are identified with operator coordinates through
//! [`GptSystem::complex_basis`]: `vec(X) = B x` for quantum systems (row-major
//! vectorization, `B` unitary) and the identity for classical ones.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::linalg::{
    max_abs_diff_real, rank_range, to_complex, to_complex_vec, vectorize, CMat, CVec, RMat, RVec,
    Tolerance, C64, I, ONE,
};
use crate::random::{haar_unitary, rng};

/// Residual bound for identity resolutions and tomographic reassembly.
pub const TOMOGRAPHY_TOL: f64 = 1e-10;

/// Largest supported Hilbert space dimension for bundled quantum systems.
pub const MAX_QUANTUM_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Quantum(usize),
    Classical(usize),
}

impl SystemKind {
    pub fn real_dim(&self) -> usize {
        match *self {
            SystemKind::Quantum(d) => d * d,
            SystemKind::Classical(n) => n,
        }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, SystemKind::Quantum(_))
    }
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SystemKind::Quantum(d) => write!(f, "quantum({d})"),
            SystemKind::Classical(n) => write!(f, "classical({n})"),
        }
    }
}

/// JSON system descriptor `{"kind":"quantum"|"classical","dim":..,"seed":..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub kind: KindName,
    pub dim: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Quantum,
    Classical,
}

impl SystemDescriptor {
    pub fn kind(&self) -> SystemKind {
        match self.kind {
            KindName::Quantum => SystemKind::Quantum(self.dim),
            KindName::Classical => SystemKind::Classical(self.dim),
        }
    }

    pub fn build(&self) -> Result<GptSystem> {
        make_system(self.kind(), self.seed)
    }
}

#[derive(Clone, Debug)]
pub struct GptSystem {
    kind: SystemKind,
    states: Vec<RVec>,
    effects: Vec<RVec>,
    unit: RVec,
    t: RMat,
    complex_basis: CMat,
    seed: u64,
}

/// Orthonormal Hermitian basis of `B(H)_sa`: `E_jj`, then for each `j < k`
/// the pair `(E_jk + E_kj)/√2`, `i(E_kj − E_jk)/√2`.
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for j in 0..d {
        let mut e = CMat::zeros(d, d);
        e[(j, j)] = ONE;
        basis.push(e);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMat::zeros(d, d);
            sym[(j, k)] = C64::new(s, 0.0);
            sym[(k, j)] = C64::new(s, 0.0);
            basis.push(sym);
            let mut anti = CMat::zeros(d, d);
            anti[(k, j)] = I * s;
            anti[(j, k)] = -I * s;
            basis.push(anti);
        }
    }
    basis
}

/// The `d²` pure states `|j⟩⟨j|`, and for `j < k` the projectors onto
/// `(|j⟩ + |k⟩)/√2` and `(|j⟩ + i|k⟩)/√2`.
pub fn tomographic_states(d: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let proj = |v: &CVec| v * v.adjoint();
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        let mut v = CVec::zeros(d);
        v[j] = ONE;
        out.push(proj(&v));
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut plus = CVec::zeros(d);
            plus[j] = C64::new(s, 0.0);
            plus[k] = C64::new(s, 0.0);
            out.push(proj(&plus));
            let mut plus_i = CVec::zeros(d);
            plus_i[j] = C64::new(s, 0.0);
            plus_i[k] = I * s;
            out.push(proj(&plus_i));
        }
    }
    out
}

/// Real coordinates `Tr(H_k X)` of an operator in the Hermitian basis.
/// The imaginary parts vanish exactly when `X` is self-adjoint.
pub fn sa_coordinates(x: &CMat) -> CVec {
    let basis = hermitian_basis(x.nrows());
    CVec::from_iterator(basis.len(), basis.iter().map(|h| (h * x).trace()))
}

fn real_coords(x: &CMat) -> RVec {
    sa_coordinates(x).map(|z| z.re)
}

/// Builds one of the two bundled systems. The spanning sets are fixed, so
/// `seed` is only carried along for descriptors and reports.
pub fn make_system(kind: SystemKind, seed: u64) -> Result<GptSystem> {
    match kind {
        SystemKind::Quantum(0) | SystemKind::Classical(0) => {
            Err(Error::Invalid("system dimension must be ≥ 1".into()))
        }
        SystemKind::Quantum(d) if d > MAX_QUANTUM_DIM => Err(Error::Invalid(format!(
            "quantum systems are supported up to d = {MAX_QUANTUM_DIM}, got {d}"
        ))),
        SystemKind::Quantum(d) => {
            let ops = tomographic_states(d);
            let states: Vec<RVec> = ops.iter().map(real_coords).collect();
            GptSystem::with_spanning_sets(kind, states.clone(), states, seed)
        }
        SystemKind::Classical(n) => {
            let deltas: Vec<RVec> = (0..n)
                .map(|k| {
                    let mut e = RVec::zeros(n);
                    e[k] = 1.0;
                    e
                })
                .collect();
            GptSystem::with_spanning_sets(kind, deltas.clone(), deltas, seed)
        }
    }
}

impl GptSystem {
    /// System with caller-chosen spanning states and effects (real coordinates).
    pub fn with_spanning_sets(
        kind: SystemKind,
        states: Vec<RVec>,
        effects: Vec<RVec>,
        seed: u64,
    ) -> Result<Self> {
        let n = kind.real_dim();
        if n == 0 {
            return Err(Error::Invalid("system dimension must be ≥ 1".into()));
        }
        if states.iter().chain(effects.iter()).any(|v| v.len() != n) {
            return Err(Error::Dimension(format!(
                "spanning vectors must have length {n}"
            )));
        }
        let (unit, complex_basis) = match kind {
            SystemKind::Quantum(d) => {
                let basis = hermitian_basis(d);
                let mut b = CMat::zeros(n, n);
                for (k, h) in basis.iter().enumerate() {
                    b.set_column(k, &vectorize(h));
                }
                (real_coords(&CMat::identity(d, d)), b)
            }
            SystemKind::Classical(_) => (RVec::from_element(n, 1.0), CMat::identity(n, n)),
        };
        let mut sys = Self {
            kind,
            states,
            effects,
            unit,
            t: RMat::zeros(0, 0),
            complex_basis,
            seed,
        };
        sys.t = identity_resolution(&sys)?;
        Ok(sys)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn real_dim(&self) -> usize {
        self.kind.real_dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn states(&self) -> &[RVec] {
        &self.states
    }

    pub fn effects(&self) -> &[RVec] {
        &self.effects
    }

    pub fn unit(&self) -> &RVec {
        &self.unit
    }

    pub fn t(&self) -> &RMat {
        &self.t
    }

    /// `n × N_s` matrix with the spanning states as columns.
    pub fn state_matrix(&self) -> RMat {
        RMat::from_columns(&self.states)
    }

    /// `N_e × n` matrix with the spanning effects as rows.
    pub fn effect_matrix(&self) -> RMat {
        let n = self.real_dim();
        RMat::from_fn(self.effects.len(), n, |j, k| self.effects[j][k])
    }

    /// Unitary identifying `C(A) ≅ ℂⁿ` with operator coordinates.
    pub fn complex_basis(&self) -> &CMat {
        &self.complex_basis
    }

    /// Operator coordinates of the complexified real vector `x`.
    pub fn to_operator_coords(&self, x: &RVec) -> CVec {
        &self.complex_basis * to_complex_vec(x)
    }

    /// The ℂ-linear extension of the real covector `c`, as a row acting on
    /// operator coordinates.
    pub fn covector_to_operator_coords(&self, c: &RVec) -> CVec {
        (to_complex_vec(c).transpose() * self.complex_basis.adjoint()).transpose()
    }

    /// Real coordinates of an operator-coordinate vector (imaginary parts dropped).
    pub fn from_operator_coords(&self, v: &CVec) -> RVec {
        (self.complex_basis.adjoint() * v).map(|z| z.re)
    }

    pub fn state_operator_coords(&self, i: usize) -> CVec {
        self.to_operator_coords(&self.states[i])
    }

    pub fn effect_operator_coords(&self, j: usize) -> CVec {
        self.covector_to_operator_coords(&self.effects[j])
    }

    pub fn unit_operator_coords(&self) -> CVec {
        self.covector_to_operator_coords(&self.unit)
    }

    /// Quantum states as density matrices.
    pub fn state_operators(&self) -> Option<Vec<CMat>> {
        let SystemKind::Quantum(d) = self.kind else {
            return None;
        };
        Some(
            (0..self.states.len())
                .map(|i| {
                    let v = self.state_operator_coords(i);
                    CMat::from_fn(d, d, |a, b| v[a * d + b])
                })
                .collect(),
        )
    }

    /// Real coordinates of a self-adjoint operator, or `None` for classical systems.
    pub fn coords_of_operator(&self, x: &CMat) -> Option<RVec> {
        match self.kind {
            SystemKind::Quantum(d) if x.shape() == (d, d) => Some(real_coords(x)),
            _ => None,
        }
    }
}

/// Minimal-norm `t` with `Σ_ij t_ij s_i e_jᵀ = id`, i.e. `S t E = I`.
pub fn identity_resolution(sys: &GptSystem) -> Result<RMat> {
    let n = sys.real_dim();
    resolve(
        &sys.state_matrix(),
        &RMat::identity(n, n),
        &sys.effect_matrix(),
    )
}

/// Solves `S r E = target` in the minimal-norm least-squares sense and
/// checks the reassembly residual.
fn resolve(s: &RMat, target: &RMat, e: &RMat) -> Result<RMat> {
    let tol = Tolerance::default();
    let s_pinv = real_pinv(s, tol);
    let e_pinv = real_pinv(e, tol);
    let r = &s_pinv * target * &e_pinv;
    let residual = max_abs_diff_real(&(s * &r * e), target);
    if residual > TOMOGRAPHY_TOL {
        return Err(Error::SpanningViolation { residual });
    }
    Ok(r)
}

fn real_pinv(a: &RMat, tol: Tolerance) -> RMat {
    rank_range(&to_complex(a), tol).pseudo_inverse.map(|z| z.re)
}

/// A real-linear process between two systems, in real coordinates.
#[derive(Clone, Debug)]
pub struct GptProcess {
    pub source: GptSystem,
    pub target: GptSystem,
    pub matrix: RMat,
}

impl GptProcess {
    pub fn new(source: GptSystem, target: GptSystem, matrix: RMat) -> Result<Self> {
        if matrix.shape() != (target.real_dim(), source.real_dim()) {
            return Err(Error::Dimension(format!(
                "process matrix is {:?}, {} → {} needs {:?}",
                matrix.shape(),
                source.kind,
                target.kind,
                (target.real_dim(), source.real_dim())
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(
                "process matrix has non-finite entries".into(),
            ));
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    /// Real-coordinate matrix of a quantum channel. Self-adjointness
    /// preservation makes it real; a residual imaginary part is rejected.
    pub fn from_channel(source: GptSystem, target: GptSystem, ch: &Channel) -> Result<Self> {
        let matrix = channel_real_matrix(&source, &target, ch)?;
        Self::new(source, target, matrix)
    }

    /// Nonnegative entries and column sums at most one.
    pub fn is_substochastic(&self, tol: f64) -> bool {
        is_substochastic(&self.matrix, tol)
    }
}

pub fn channel_real_matrix(source: &GptSystem, target: &GptSystem, ch: &Channel) -> Result<RMat> {
    match (source.kind, target.kind) {
        (SystemKind::Quantum(a), SystemKind::Quantum(b)) if a == ch.d_in() && b == ch.d_out() => {}
        _ => {
            return Err(Error::Dimension(format!(
                "channel {}→{} does not connect {} and {}",
                ch.d_in(),
                ch.d_out(),
                source.kind,
                target.kind
            )))
        }
    }
    let m = target.complex_basis.adjoint() * ch.superop() * &source.complex_basis;
    let imag = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > TOMOGRAPHY_TOL {
        return Err(Error::InvalidChannel(format!(
            "map does not preserve self-adjointness (imaginary part {imag:.3e})"
        )));
    }
    Ok(m.map(|z| z.re))
}

pub fn is_substochastic(m: &RMat, tol: f64) -> bool {
    m.iter().all(|&v| v >= -tol) && m.column_iter().all(|c| c.sum() <= 1.0 + tol)
}

/// Coefficients `r` with `T = Σ_ij r_ij s_i e_jᵀ` (target states, source effects).
pub fn tomographic_decompose(t: &GptProcess) -> Result<RMat> {
    resolve(
        &t.target.state_matrix(),
        &t.matrix,
        &t.source.effect_matrix(),
    )
}

/// Reassembles `Σ_ij r_ij s_i e_jᵀ`.
pub fn reassemble(target: &GptSystem, r: &RMat, source: &GptSystem) -> RMat {
    target.state_matrix() * r * source.effect_matrix()
}

/// CPTP channel from a Haar-random Stinespring isometry with environment
/// dimension `d_in · d_out`.
pub fn random_channel(d_in: usize, d_out: usize, seed: u64) -> Result<Channel> {
    if !(1..=MAX_QUANTUM_DIM).contains(&d_in) || !(1..=MAX_QUANTUM_DIM).contains(&d_out) {
        return Err(Error::Invalid(format!(
            "channel dimensions must lie in 1..={MAX_QUANTUM_DIM}, got {d_in}→{d_out}"
        )));
    }
    let mut r = rng(seed);
    random_channel_with(&mut r, d_in, d_out)
}

pub fn random_channel_with<R: Rng>(r: &mut R, d_in: usize, d_out: usize) -> Result<Channel> {
    let d_env = d_in * d_out;
    let u = haar_unitary(r, d_out * d_env);
    // Isometry V = first d_in columns; row index (o, k) ↦ o·d_env + k.
    let kraus = (0..d_env)
        .map(|k| CMat::from_fn(d_out, d_in, |o, i| u[(o * d_env + k, i)]))
        .collect();
    Channel::new(d_in, d_out, kraus)
}

/// Column-substochastic matrix with nonnegative entries.
pub fn random_substochastic<R: Rng>(r: &mut R, rows: usize, cols: usize) -> RMat {
    let mut m = RMat::from_fn(rows, cols, |_, _| r.random_range(0.0..1.0));
    for mut c in m.column_iter_mut() {
        let total = c.sum();
        let keep: f64 = r.random_range(0.5..=1.0);
        if total > 0.0 {
            c *= keep / total;
        }
    }
    m
}
