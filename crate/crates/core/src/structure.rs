//! Representations over a finite index set, the maps `χ` and `φ` they induce
//! on each system, idempotent splittings, and the audit.
//!
//! All matrices act on operator coordinates (row-major `vec`). A system's
//! real GPT coordinates enter through [`GptSystem::complex_basis`].

// `!(x <= tol)` is used on purpose so that NaN residuals fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::complexify::complexify_map;
use crate::error::{Error, Result};
use crate::frames::{
    represent_channel, represent_effect, represent_state, DualPair, Frame, RECONSTRUCTION_TOL,
};
use crate::gpt::{
    channel_real_matrix, random_channel_with, random_substochastic, GptSystem, SystemKind,
};
use crate::linalg::{
    devectorize, max_abs_diff, rank_range, to_complex, trace, vectorize, CMat, CVec, RMat,
    Tolerance, C64,
};
use crate::random::{child_seed, random_density, random_effect, rng, SeededRng};

/// How one system is represented: `μ = A·v` on operator coordinates `v`, and
/// `ξ = r·B` on covectors `r`. For a dual pair, `A` has rows `vec(F_λ)†` and
/// `B` has columns `vec(G_λ)`.
#[derive(Clone, Debug)]
pub struct SystemRep {
    labels: Vec<String>,
    analysis: CMat,
    synthesis: CMat,
    pair: Option<DualPair>,
}

impl SystemRep {
    pub fn from_pair(pair: DualPair) -> Self {
        Self {
            labels: pair.labels().to_vec(),
            analysis: pair.frame().analysis_matrix(),
            synthesis: pair.dual().synthesis_matrix(),
            pair: Some(pair),
        }
    }

    /// Representation given directly by its state and effect matrices.
    pub fn linear(labels: Vec<String>, analysis: CMat, synthesis: CMat) -> Result<Self> {
        let (l, n) = analysis.shape();
        if synthesis.shape() != (n, l) || labels.len() != l {
            return Err(Error::Dimension(format!(
                "analysis {:?}, synthesis {:?}, {} labels",
                analysis.shape(),
                synthesis.shape(),
                labels.len()
            )));
        }
        Ok(Self {
            labels,
            analysis,
            synthesis,
            pair: None,
        })
    }

    /// `Λ = {0..n}` with identity maps: the δ-basis representation of a classical system.
    pub fn delta(n: usize) -> Self {
        Self::linear(
            (0..n).map(|k| k.to_string()).collect(),
            CMat::identity(n, n),
            CMat::identity(n, n),
        )
        .expect("square identity maps")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Operator-space dimension this system acts on.
    pub fn space_dim(&self) -> usize {
        self.analysis.ncols()
    }

    pub fn pair(&self) -> Option<&DualPair> {
        self.pair.as_ref()
    }

    pub fn analysis(&self) -> &CMat {
        &self.analysis
    }

    pub fn synthesis(&self) -> &CMat {
        &self.synthesis
    }

    /// `D = Γ(id)`.
    pub fn id_image(&self) -> CMat {
        &self.analysis * &self.synthesis
    }

    /// `max |B·A − I|`.
    pub fn reconstruction_residual(&self) -> f64 {
        let n = self.space_dim();
        max_abs_diff(&(&self.synthesis * &self.analysis), &CMat::identity(n, n))
    }
}

/// Per-system data of a representation, keyed by system kind.
#[derive(Clone, Debug)]
pub struct Representation {
    systems: BTreeMap<SystemKind, SystemRep>,
}

impl Representation {
    /// Requires matching dimensions and the reconstruction identity on every system.
    pub fn new(systems: BTreeMap<SystemKind, SystemRep>) -> Result<Self> {
        let rep = Self::unchecked(systems)?;
        for sys in rep.systems.values() {
            let residual = sys.reconstruction_residual();
            if !(residual <= RECONSTRUCTION_TOL) {
                return Err(Error::InvalidDualPair { residual });
            }
        }
        Ok(rep)
    }

    /// Checks dimensions only.
    pub fn unchecked(systems: BTreeMap<SystemKind, SystemRep>) -> Result<Self> {
        for (kind, sys) in &systems {
            if sys.space_dim() != kind.real_dim() {
                return Err(Error::Dimension(format!(
                    "{kind} has real dimension {}, representation acts on {}",
                    kind.real_dim(),
                    sys.space_dim()
                )));
            }
        }
        Ok(Self { systems })
    }

    pub fn from_pairs(pairs: BTreeMap<SystemKind, DualPair>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(k, p)| (k, SystemRep::from_pair(p)))
                .collect(),
        )
    }

    pub fn from_pairs_unchecked(pairs: BTreeMap<SystemKind, DualPair>) -> Result<Self> {
        Self::unchecked(
            pairs
                .into_iter()
                .map(|(k, p)| (k, SystemRep::from_pair(p)))
                .collect(),
        )
    }

    pub fn systems(&self) -> impl Iterator<Item = (&SystemKind, &SystemRep)> {
        self.systems.iter()
    }

    pub fn system(&self, kind: SystemKind) -> Result<&SystemRep> {
        self.systems
            .get(&kind)
            .ok_or_else(|| Error::MissingSystem(kind.to_string()))
    }

    pub fn labels(&self, kind: SystemKind) -> Result<&[String]> {
        Ok(self.system(kind)?.labels())
    }

    pub fn id_image(&self, kind: SystemKind) -> Result<CMat> {
        Ok(self.system(kind)?.id_image())
    }

    /// `μ` of a vector in operator coordinates.
    pub fn state_image(&self, kind: SystemKind, v: &CVec) -> Result<CVec> {
        let sys = self.system(kind)?;
        check_len(v.len(), sys.space_dim(), "state")?;
        Ok(&sys.analysis * v)
    }

    /// `ξ` of a covector in operator coordinates, returned as a column.
    pub fn effect_image(&self, kind: SystemKind, r: &CVec) -> Result<CVec> {
        let sys = self.system(kind)?;
        check_len(r.len(), sys.space_dim(), "effect")?;
        Ok((r.transpose() * &sys.synthesis).transpose())
    }

    /// `Γ(T) = A_out · S · B_in` for a superoperator (or complexified process
    /// matrix) `S` in operator coordinates.
    pub fn apply_superop(
        &self,
        kind_in: SystemKind,
        kind_out: SystemKind,
        s: &CMat,
    ) -> Result<CMat> {
        let (si, so) = (self.system(kind_in)?, self.system(kind_out)?);
        if s.shape() != (so.space_dim(), si.space_dim()) {
            return Err(Error::Dimension(format!(
                "map is {:?}, expected {:?}",
                s.shape(),
                (so.space_dim(), si.space_dim())
            )));
        }
        Ok(&so.analysis * s * &si.synthesis)
    }

    /// `Γ(λ_out|λ_in) = ⟨F_λout, E(G_λin)⟩`, through the Kraus form when both
    /// systems carry dual pairs.
    pub fn apply_channel(
        &self,
        kind_in: SystemKind,
        kind_out: SystemKind,
        ch: &Channel,
    ) -> Result<CMat> {
        let (si, so) = (self.system(kind_in)?, self.system(kind_out)?);
        match (&si.pair, &so.pair) {
            (Some(pi), Some(po)) => represent_channel(po, pi, ch),
            _ => self.apply_superop(kind_in, kind_out, ch.superop()),
        }
    }

    /// `Γ` of a real-coordinate process between two systems.
    pub fn apply_process(&self, source: &GptSystem, target: &GptSystem, m: &RMat) -> Result<CMat> {
        let s = target.complex_basis() * complexify_map(m) * source.complex_basis().adjoint();
        self.apply_superop(source.kind(), target.kind(), &s)
    }
}

fn check_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!(
            "{what} has {got} coordinates, expected {want}"
        )));
    }
    Ok(())
}

/// `χ = Σ_ij t_ij · μ(s_i) · C(e_j)`, with `C(e_j)` as a row in operator coordinates.
pub fn extract_chi(rep: &Representation, sys: &GptSystem) -> Result<CMat> {
    let n = sys.real_dim();
    let images = (0..sys.states().len())
        .map(|i| rep.state_image(sys.kind(), &sys.state_operator_coords(i)))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<CVec> = (0..sys.effects().len())
        .map(|j| sys.effect_operator_coords(j))
        .collect();
    let l = rep.system(sys.kind())?.len();
    let mut chi = CMat::zeros(l, n);
    for (i, img) in images.iter().enumerate() {
        for (j, row) in rows.iter().enumerate() {
            let t = sys.t()[(i, j)];
            if t != 0.0 {
                chi += (img * row.transpose()).map(|z| z * t);
            }
        }
    }
    Ok(chi)
}

/// `φ = χ̲⁻¹ · D`, with the corestriction inverse taken as `χ⁺` on the range
/// projector of `χ`.
pub fn extract_phi(rep: &Representation, sys: &GptSystem, chi: &CMat) -> Result<CMat> {
    let n = sys.real_dim();
    let d = rep.id_image(sys.kind())?;
    if chi.shape() != (d.nrows(), n) {
        return Err(Error::Dimension(format!(
            "χ is {:?}, expected {:?}",
            chi.shape(),
            (d.nrows(), n)
        )));
    }
    let rr = rank_range(chi, Tolerance::default());
    if rr.rank != n {
        return Err(Error::InjectivityViolation {
            rank: rr.rank,
            required: n,
        });
    }
    Ok(&rr.pseudo_inverse * rr.range_projector() * d)
}

/// `φ = Σ_ij t_ij · C(s_i) · ξ(e_j)`.
pub fn extract_phi_effect_sum(rep: &Representation, sys: &GptSystem) -> Result<CMat> {
    let n = sys.real_dim();
    let l = rep.system(sys.kind())?.len();
    let xis = (0..sys.effects().len())
        .map(|j| rep.effect_image(sys.kind(), &sys.effect_operator_coords(j)))
        .collect::<Result<Vec<_>>>()?;
    let mut phi = CMat::zeros(n, l);
    for i in 0..sys.states().len() {
        let s = sys.state_operator_coords(i);
        for (j, xi) in xis.iter().enumerate() {
            let t = sys.t()[(i, j)];
            if t != 0.0 {
                phi += (&s * xi.transpose()).map(|z| z * t);
            }
        }
    }
    Ok(phi)
}

/// `χ : C(A) → ℂ^Λ` and its left inverse `φ` for one system.
#[derive(Clone, Debug)]
pub struct ChiPhi {
    pub chi: CMat,
    pub phi: CMat,
    pub labels: Vec<String>,
    pub kind: SystemKind,
}

impl ChiPhi {
    pub fn extract(rep: &Representation, sys: &GptSystem) -> Result<Self> {
        let chi = extract_chi(rep, sys)?;
        let phi = extract_phi(rep, sys, &chi)?;
        Ok(Self {
            chi,
            phi,
            labels: rep.labels(sys.kind())?.to_vec(),
            kind: sys.kind(),
        })
    }

    pub fn dim(&self) -> usize {
        self.chi.ncols()
    }

    pub fn id_image(&self) -> CMat {
        &self.chi * &self.phi
    }

    /// `max |φχ − I|`.
    pub fn left_inverse_residual(&self) -> f64 {
        let n = self.dim();
        max_abs_diff(&(&self.phi * &self.chi), &CMat::identity(n, n))
    }

    pub fn chi_rank(&self) -> usize {
        rank_range(&self.chi, Tolerance::default()).rank
    }

    /// Checks shapes, `φχ = I` and full column rank of `χ`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let (l, n) = self.chi.shape();
        if self.phi.shape() != (n, l) || self.labels.len() != l {
            return Err(Error::Dimension(format!(
                "χ {:?}, φ {:?}, {} labels",
                self.chi.shape(),
                self.phi.shape(),
                self.labels.len()
            )));
        }
        let rank = self.chi_rank();
        if rank != n {
            return Err(Error::InjectivityViolation { rank, required: n });
        }
        let residual = self.left_inverse_residual();
        if !(residual <= tol) {
            return Err(Error::InvalidDualPair { residual });
        }
        Ok(())
    }
}

/// `D = ι·π` with `π·ι = I_r`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub iota: CMat,
    pub pi: CMat,
}

impl Splitting {
    pub fn rank(&self) -> usize {
        self.pi.nrows()
    }

    pub fn idempotent(&self) -> CMat {
        &self.iota * &self.pi
    }

    /// `max |π·ι − I_r|`.
    pub fn retraction_residual(&self) -> f64 {
        let r = self.rank();
        max_abs_diff(&(&self.pi * &self.iota), &CMat::identity(r, r))
    }
}

impl From<&ChiPhi> for Splitting {
    fn from(cp: &ChiPhi) -> Self {
        Self {
            iota: cp.chi.clone(),
            pi: cp.phi.clone(),
        }
    }
}

/// `ι` = orthonormal range basis of `D` (each column phased so its largest
/// entry is real positive), `π = ι†·D`.
pub fn split_idempotent(d: &CMat, tol: Tolerance) -> Result<Splitting> {
    if !d.is_square() {
        return Err(Error::Dimension(format!("{:?} is not square", d.shape())));
    }
    let residual = max_abs_diff(&(d * d), d);
    if !(residual <= tol.abs) {
        return Err(Error::NotIdempotent { residual });
    }
    let mut iota = rank_range(d, tol).range_basis;
    for mut col in iota.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(C64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
    }
    let pi = iota.adjoint() * d;
    Ok(Splitting { iota, pi })
}

/// The unique `ξ = π'·ι` connecting two splittings of one idempotent.
/// Checks `ι'·ξ = ι`, `ξ·π = π'` and `ξ·(π·ι') = I`.
pub fn splitting_isomorphism(s1: &Splitting, s2: &Splitting, tol: f64) -> Result<CMat> {
    if s1.iota.nrows() != s2.iota.nrows() || s1.rank() != s2.rank() {
        return Err(Error::SplittingMismatch {
            residual: f64::INFINITY,
        });
    }
    let gap = max_abs_diff(&s1.idempotent(), &s2.idempotent());
    if !(gap <= tol) {
        return Err(Error::SplittingMismatch { residual: gap });
    }
    let xi = &s2.pi * &s1.iota;
    let inverse = &s1.pi * &s2.iota;
    let r = s1.rank();
    let residual = max_abs_diff(&(&s2.iota * &xi), &s1.iota)
        .max(max_abs_diff(&(&xi * &s1.pi), &s2.pi))
        .max(max_abs_diff(&(&xi * &inverse), &CMat::identity(r, r)));
    if !(residual <= tol) {
        return Err(Error::SplittingMismatch { residual });
    }
    Ok(xi)
}

/// `max ‖Γ(T) − χ_out · B_out C(T_real) B_in† · φ_in‖` over quantum channels.
pub fn verify_decomposition(
    rep: &Representation,
    sys_in: &GptSystem,
    sys_out: &GptSystem,
    channels: &[Channel],
) -> Result<f64> {
    let cp_in = ChiPhi::extract(rep, sys_in)?;
    let cp_out = ChiPhi::extract(rep, sys_out)?;
    verify_decomposition_with(rep, sys_in, sys_out, &cp_in, &cp_out, channels)
}

/// As [`verify_decomposition`] with caller-supplied `χ`, `φ`.
pub fn verify_decomposition_with(
    rep: &Representation,
    sys_in: &GptSystem,
    sys_out: &GptSystem,
    cp_in: &ChiPhi,
    cp_out: &ChiPhi,
    channels: &[Channel],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for ch in channels {
        let gamma = rep.apply_channel(sys_in.kind(), sys_out.kind(), ch)?;
        let t_real = channel_real_matrix(sys_in, sys_out, ch)?;
        worst = worst.max(max_abs_diff(
            &gamma,
            &factored(sys_in, sys_out, cp_in, cp_out, &t_real),
        ));
    }
    Ok(worst)
}

/// Same check for real-coordinate processes (classical or quantum).
pub fn verify_process_decomposition(
    rep: &Representation,
    sys_in: &GptSystem,
    sys_out: &GptSystem,
    processes: &[RMat],
) -> Result<f64> {
    let cp_in = ChiPhi::extract(rep, sys_in)?;
    let cp_out = ChiPhi::extract(rep, sys_out)?;
    let mut worst = 0.0f64;
    for m in processes {
        let gamma = rep.apply_process(sys_in, sys_out, m)?;
        worst = worst.max(max_abs_diff(
            &gamma,
            &factored(sys_in, sys_out, &cp_in, &cp_out, m),
        ));
    }
    Ok(worst)
}

fn factored(
    sys_in: &GptSystem,
    sys_out: &GptSystem,
    cp_in: &ChiPhi,
    cp_out: &ChiPhi,
    t_real: &RMat,
) -> CMat {
    &cp_out.chi
        * sys_out.complex_basis()
        * complexify_map(t_real)
        * sys_in.complex_basis().adjoint()
        * &cp_in.phi
}

/// `vec(F_λ)†` = row `λ` of `χ`, `G_λ` = column `λ` of `φ`.
pub fn frames_from_chi_phi(cp: &ChiPhi) -> Result<DualPair> {
    cp.validate(RECONSTRUCTION_TOL)?;
    let SystemKind::Quantum(d) = cp.kind else {
        return Err(Error::Invalid(format!("{} has no operator frame", cp.kind)));
    };
    let frame = (0..cp.chi.nrows())
        .map(|k| devectorize(&cp.chi.row(k).adjoint()))
        .collect::<Result<Vec<_>>>()?;
    let dual = (0..cp.phi.ncols())
        .map(|k| devectorize(&cp.phi.column(k).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    DualPair::new(
        Frame::new(d, cp.labels.clone(), frame)?,
        Frame::new(d, cp.labels.clone(), dual)?,
    )
}

/// Pass thresholds for the audit checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuditTolerances {
    pub semifunctorial: f64,
    pub adequacy: f64,
    pub linear: f64,
    pub discard: f64,
    pub functorial: f64,
    pub decomposition: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        Self {
            semifunctorial: 1e-9,
            adequacy: 1e-10,
            linear: 1e-9,
            discard: 1e-10,
            functorial: 1e-9,
            decomposition: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub max_residual: f64,
}

impl Check {
    fn new(max_residual: f64, tol: f64) -> Self {
        Self {
            passed: max_residual <= tol,
            max_residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub semifunctorial: Check,
    pub empirically_adequate: Check,
    pub linear: Check,
    pub discard_preserving: Check,
    pub functorial: Check,
    pub decomposition_residual: f64,
    pub dim_check: bool,
    pub seed: u64,
    pub trials: usize,
    pub norm: String,
    pub systems: Vec<SystemKind>,
    pub tolerances: AuditTolerances,
}

impl AuditReport {
    /// The gating checks: semi-functoriality, adequacy, linearity and the
    /// structure decomposition. Discard preservation is reported only.
    pub fn passes(&self) -> bool {
        self.semifunctorial.passed
            && self.empirically_adequate.passed
            && self.linear.passed
            && self.decomposition_residual <= self.tolerances.decomposition
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Residuals {
    semifunctorial: f64,
    adequacy: f64,
    linear: f64,
    decomposition: f64,
}

impl Residuals {
    fn merge(self, o: Self) -> Self {
        Self {
            semifunctorial: self.semifunctorial.max(o.semifunctorial),
            adequacy: self.adequacy.max(o.adequacy),
            linear: self.linear.max(o.linear),
            decomposition: self.decomposition.max(o.decomposition),
        }
    }
}

/// Residual substituted when a quantity cannot be computed.
const UNAVAILABLE: f64 = f64::MAX;

fn nan_to_max(x: f64) -> f64 {
    if x.is_nan() {
        UNAVAILABLE
    } else {
        x
    }
}

/// Runs `trials` randomized checks on every system and every ordered pair
/// (and triple, for composition) of same-family systems.
///
/// Only a system missing from `rep` is an error; failing properties are
/// recorded in the report.
pub fn audit_representation(
    rep: &Representation,
    systems: &[GptSystem],
    trials: usize,
    seed: u64,
) -> Result<AuditReport> {
    audit_with_tolerances(rep, systems, trials, seed, AuditTolerances::default())
}

pub fn audit_with_tolerances(
    rep: &Representation,
    systems: &[GptSystem],
    trials: usize,
    seed: u64,
    tolerances: AuditTolerances,
) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be ≥ 1".into()));
    }
    if systems.is_empty() {
        return Err(Error::Invalid("audit needs at least one system".into()));
    }
    for s in systems {
        rep.system(s.kind())?;
    }

    let extracted: Vec<Option<ChiPhi>> = systems
        .iter()
        .map(|s| ChiPhi::extract(rep, s).ok())
        .collect();
    let dim_check = extracted
        .iter()
        .zip(systems)
        .all(|(cp, s)| cp.as_ref().is_some_and(|cp| cp.chi_rank() == s.real_dim()));

    let mut discard = 0.0f64;
    let mut functorial = 0.0f64;
    let mut idempotency = 0.0f64;
    for s in systems {
        let sr = rep.system(s.kind())?;
        let ones = CVec::from_element(sr.len(), C64::new(1.0, 0.0));
        let summed = (ones.transpose() * sr.analysis()).transpose();
        discard = discard.max(crate::linalg::max_abs_vec_diff(
            &summed,
            &s.unit_operator_coords(),
        ));
        let d = sr.id_image();
        functorial = functorial.max(max_abs_diff(&d, &CMat::identity(d.nrows(), d.nrows())));
        idempotency = idempotency.max(max_abs_diff(&(&d * &d), &d));
    }

    let ctx = AuditContext {
        rep,
        systems,
        extracted: &extracted,
    };
    let merged = (0..trials)
        .into_par_iter()
        .map(|t| ctx.trial(&mut rng(child_seed(seed, t as u64))))
        .reduce(Residuals::default, Residuals::merge);

    let decomposition = if dim_check {
        nan_to_max(merged.decomposition)
    } else {
        UNAVAILABLE
    };
    Ok(AuditReport {
        semifunctorial: Check::new(
            nan_to_max(merged.semifunctorial.max(idempotency)),
            tolerances.semifunctorial,
        ),
        empirically_adequate: Check::new(nan_to_max(merged.adequacy), tolerances.adequacy),
        linear: Check::new(nan_to_max(merged.linear), tolerances.linear),
        discard_preserving: Check::new(nan_to_max(discard), tolerances.discard),
        functorial: Check::new(nan_to_max(functorial), tolerances.functorial),
        decomposition_residual: decomposition,
        dim_check,
        seed,
        trials,
        norm: "max-abs".into(),
        systems: systems.iter().map(|s| s.kind()).collect(),
        tolerances,
    })
}

struct AuditContext<'a> {
    rep: &'a Representation,
    systems: &'a [GptSystem],
    extracted: &'a [Option<ChiPhi>],
}

/// A random process between two systems of the same family.
enum Sample {
    Channel(Channel),
    Process(RMat),
}

impl AuditContext<'_> {
    fn family(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let quantum = self.systems[a].kind().is_quantum();
        (0..self.systems.len()).filter(move |&b| self.systems[b].kind().is_quantum() == quantum)
    }

    fn sample(&self, r: &mut SeededRng, a: usize, b: usize) -> Sample {
        match (self.systems[a].kind(), self.systems[b].kind()) {
            (SystemKind::Quantum(di), SystemKind::Quantum(d_o)) => Sample::Channel(
                random_channel_with(r, di, d_o).expect("dimensions come from valid systems"),
            ),
            (_, _) => Sample::Process(random_substochastic(
                r,
                self.systems[b].real_dim(),
                self.systems[a].real_dim(),
            )),
        }
    }

    /// Superoperator on operator coordinates.
    fn superop(&self, a: usize, b: usize, s: &Sample) -> CMat {
        match s {
            Sample::Channel(ch) => ch.superop().clone(),
            Sample::Process(m) => {
                self.systems[b].complex_basis()
                    * complexify_map(m)
                    * self.systems[a].complex_basis().adjoint()
            }
        }
    }

    fn gamma(&self, a: usize, b: usize, s: &Sample) -> Result<CMat> {
        let (ka, kb) = (self.systems[a].kind(), self.systems[b].kind());
        match s {
            Sample::Channel(ch) => self.rep.apply_channel(ka, kb, ch),
            Sample::Process(m) => self
                .rep
                .apply_process(&self.systems[a], &self.systems[b], m),
        }
    }

    fn real_matrix(&self, a: usize, b: usize, s: &Sample) -> Result<RMat> {
        match s {
            Sample::Channel(ch) => channel_real_matrix(&self.systems[a], &self.systems[b], ch),
            Sample::Process(m) => Ok(m.clone()),
        }
    }

    /// A normalized state, an effect, both as operator-coordinate vectors,
    /// and the operational probability pairing them.
    fn state_effect(&self, r: &mut SeededRng, a: usize) -> (CMat, CMat) {
        match self.systems[a].kind() {
            SystemKind::Quantum(d) => (random_density(r, d), random_effect(r, d)),
            SystemKind::Classical(n) => {
                let p = random_substochastic(r, n, 1);
                let e = RMat::from_fn(1, n, |_, _| r.random_range(0.0..=1.0));
                (to_complex(&p), to_complex(&e))
            }
        }
    }

    /// `μ(ρ)` through the representation's own route.
    fn state_term(&self, a: usize, rho: &CMat) -> Result<CVec> {
        let kind = self.systems[a].kind();
        match (kind, self.rep.system(kind)?.pair()) {
            (SystemKind::Quantum(_), Some(p)) => represent_state(p, rho),
            (SystemKind::Quantum(_), None) => self.rep.state_image(kind, &vectorize(rho)),
            (SystemKind::Classical(_), _) => {
                self.rep.state_image(kind, &rho.column(0).into_owned())
            }
        }
    }

    /// `ξ(E)` through the representation's own route.
    fn effect_term(&self, a: usize, eff: &CMat) -> Result<CVec> {
        let kind = self.systems[a].kind();
        match (kind, self.rep.system(kind)?.pair()) {
            (SystemKind::Quantum(_), Some(p)) => represent_effect(p, eff),
            (SystemKind::Quantum(_), None) => {
                self.rep.effect_image(kind, &vectorize(&eff.transpose()))
            }
            (SystemKind::Classical(_), _) => self.rep.effect_image(kind, &eff.row(0).transpose()),
        }
    }

    /// Operational probability `E(ρ)` for quantum, `e·p` for classical.
    fn pairing(&self, a: usize, rho: &CMat, eff: &CMat) -> C64 {
        match self.systems[a].kind() {
            SystemKind::Quantum(_) => trace(&(eff * rho)),
            SystemKind::Classical(_) => (eff * rho)[(0, 0)],
        }
    }

    fn evolve(&self, s: &Sample, rho: &CMat) -> Result<CMat> {
        match s {
            Sample::Channel(ch) => ch.apply(rho),
            Sample::Process(m) => Ok(to_complex(m) * rho),
        }
    }

    fn trial(&self, r: &mut SeededRng) -> Residuals {
        match self.trial_inner(r) {
            Ok(res) => res,
            Err(_) => Residuals {
                semifunctorial: UNAVAILABLE,
                adequacy: UNAVAILABLE,
                linear: UNAVAILABLE,
                decomposition: UNAVAILABLE,
            },
        }
    }

    fn trial_inner(&self, r: &mut SeededRng) -> Result<Residuals> {
        let mut res = Residuals::default();
        for a in 0..self.systems.len() {
            let ka = self.systems[a].kind();

            // Adequacy on the bare system.
            let (rho, eff) = self.state_effect(r, a);
            let mu = self.state_term(a, &rho)?;
            let lhs = mu.dot(&self.effect_term(a, &eff)?);
            let rhs = self.pairing(a, &rho, &eff);
            res.adequacy = res.adequacy.max((lhs - rhs).norm().max(rhs.im.abs()));

            for b in self.family(a).collect::<Vec<_>>() {
                let kb = self.systems[b].kind();
                let t1 = self.sample(r, a, b);
                let t2 = self.sample(r, a, b);
                let g1 = self.gamma(a, b, &t1)?;
                let g2 = self.gamma(a, b, &t2)?;

                // Adequacy through a process: ξ_B Γ(T) μ_A.
                let (_, eff_b) = self.state_effect(r, b);
                let xi_b = self.effect_term(b, &eff_b)?;
                let lhs = (xi_b.transpose() * &g1 * &mu)[(0, 0)];
                let rhs = self.pairing(b, &self.evolve(&t1, &rho)?, &eff_b);
                res.adequacy = res.adequacy.max((lhs - rhs).norm());

                // Linearity: mixtures first, then arbitrary reals.
                let s1 = self.superop(a, b, &t1);
                let s2 = self.superop(a, b, &t2);
                let mix: f64 = r.random_range(0.0..=1.0);
                let coeffs = [
                    (mix, 1.0 - mix),
                    (r.random_range(-2.0..=2.0), r.random_range(-2.0..=2.0)),
                ];
                for (alpha, beta) in coeffs {
                    let combo = s1.map(|z| z * alpha) + s2.map(|z| z * beta);
                    let lhs = self.rep.apply_superop(ka, kb, &combo)?;
                    let rhs = g1.map(|z| z * alpha) + g2.map(|z| z * beta);
                    res.linear = res.linear.max(max_abs_diff(&lhs, &rhs));
                }

                // Structure decomposition.
                if let (Some(cp_a), Some(cp_b)) = (&self.extracted[a], &self.extracted[b]) {
                    let m = self.real_matrix(a, b, &t1)?;
                    let f = factored(&self.systems[a], &self.systems[b], cp_a, cp_b, &m);
                    res.decomposition = res.decomposition.max(max_abs_diff(&g1, &f));
                }

                // Composition A → B → C.
                for c in self.family(b).collect::<Vec<_>>() {
                    let t3 = self.sample(r, b, c);
                    let g3 = self.gamma(b, c, &t3)?;
                    let composed = match (&t1, &t3) {
                        (Sample::Channel(x), Sample::Channel(y)) => {
                            self.rep
                                .apply_channel(ka, self.systems[c].kind(), &x.then(y)?)?
                        }
                        (Sample::Process(x), Sample::Process(y)) => {
                            self.rep
                                .apply_process(&self.systems[a], &self.systems[c], &(y * x))?
                        }
                        _ => return Err(Error::Invalid("mixed-family composition".into())),
                    };
                    res.semifunctorial = res
                        .semifunctorial
                        .max(max_abs_diff(&composed, &(&g3 * &g1)));
                }
            }
        }
        Ok(res)
    }
}
