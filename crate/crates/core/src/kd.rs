//! Kirkwood–Dirac quasiprobabilities: `μ(a,b|ρ) = ⟨a|ρ|b⟩⟨b|a⟩`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{DualPair, Frame};
use crate::gpt::SystemKind;
use crate::linalg::{max_abs_diff, CMat, MatrixJson, C64, ONE};
use crate::random::{haar_unitary, rng};
use crate::structure::{Representation, SystemRep};

/// Overlaps with `|⟨a|b⟩|` at or below this are treated as zero.
pub const OVERLAP_FLOOR: f64 = 1e-10;

const UNITARITY_TOL: f64 = 1e-10;

/// Two orthonormal bases, stored as unitaries whose columns are the basis vectors.
#[derive(Clone, Debug)]
pub struct KdBases {
    d: usize,
    basis_a: CMat,
    basis_b: CMat,
    labels_a: Vec<String>,
    labels_b: Vec<String>,
    overlaps: CMat,
    faithful: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Computational,
    Hadamard,
    Fourier,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "computational" => Ok(Preset::Computational),
            "hadamard" => Ok(Preset::Hadamard),
            "fourier" => Ok(Preset::Fourier),
            other => Err(Error::Invalid(format!(
                "unknown basis preset {other:?} (expected computational, hadamard or fourier)"
            ))),
        }
    }
}

impl Preset {
    /// Basis unitary and labels. `hadamard` needs `d` a power of two; for
    /// `d = 2` its vectors are labelled `+` and `-`.
    pub fn basis(self, d: usize) -> Result<(CMat, Vec<String>)> {
        if d == 0 {
            return Err(Error::Invalid("basis dimension must be ≥ 1".into()));
        }
        match self {
            Preset::Computational => Ok((
                CMat::identity(d, d),
                (0..d).map(|k| k.to_string()).collect(),
            )),
            Preset::Hadamard => {
                if !d.is_power_of_two() {
                    return Err(Error::Invalid(format!(
                        "hadamard preset needs a power-of-two dimension, got {d}"
                    )));
                }
                let scale = 1.0 / (d as f64).sqrt();
                let h = CMat::from_fn(d, d, |j, k| {
                    let sign = if (j & k).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    C64::new(sign * scale, 0.0)
                });
                let labels = if d == 2 {
                    vec!["+".to_string(), "-".to_string()]
                } else {
                    (0..d).map(|k| format!("h{k}")).collect()
                };
                Ok((h, labels))
            }
            Preset::Fourier => {
                let scale = 1.0 / (d as f64).sqrt();
                let f = CMat::from_fn(d, d, |j, k| {
                    let angle = 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
                    C64::from_polar(scale, angle)
                });
                Ok((f, (0..d).map(|k| format!("f{k}")).collect()))
            }
        }
    }
}

fn check_unitary(u: &CMat, name: &str) -> Result<()> {
    let d = u.nrows();
    if u.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "{name} is {:?}, not square",
            u.shape()
        )));
    }
    let residual = max_abs_diff(&(u.adjoint() * u), &CMat::identity(d, d));
    if !residual.is_finite() || residual > UNITARITY_TOL {
        return Err(Error::Invalid(format!(
            "{name} is not unitary (residual {residual:.3e})"
        )));
    }
    Ok(())
}

impl KdBases {
    pub fn new(basis_a: CMat, basis_b: CMat) -> Result<Self> {
        let d = basis_a.nrows();
        let labels_a = (0..d).map(|k| format!("a{k}")).collect();
        let labels_b = (0..d).map(|k| format!("b{k}")).collect();
        Self::with_labels(basis_a, basis_b, labels_a, labels_b)
    }

    pub fn with_labels(
        basis_a: CMat,
        basis_b: CMat,
        labels_a: Vec<String>,
        labels_b: Vec<String>,
    ) -> Result<Self> {
        check_unitary(&basis_a, "basis a")?;
        check_unitary(&basis_b, "basis b")?;
        let d = basis_a.nrows();
        if basis_b.nrows() != d {
            return Err(Error::Dimension(format!(
                "bases have dimensions {d} and {}",
                basis_b.nrows()
            )));
        }
        if labels_a.len() != d || labels_b.len() != d {
            return Err(Error::Dimension(
                "one label per basis vector required".into(),
            ));
        }
        let overlaps = basis_a.adjoint() * &basis_b;
        let faithful = overlaps.iter().all(|z| z.norm() > OVERLAP_FLOOR);
        Ok(Self {
            d,
            basis_a,
            basis_b,
            labels_a,
            labels_b,
            overlaps,
            faithful,
        })
    }

    /// `a` = computational basis, `b` = the preset.
    pub fn preset(b: Preset, d: usize) -> Result<Self> {
        let (ua, la) = Preset::Computational.basis(d)?;
        let (ub, lb) = b.basis(d)?;
        Self::with_labels(ua, ub, la, lb)
    }

    /// Qubit computational and `±` bases.
    pub fn mub_qubit() -> Self {
        Self::preset(Preset::Hadamard, 2).expect("qubit hadamard preset is valid")
    }

    /// `a` = computational, `b = V a` for a seeded Haar-random `V`, resampled
    /// until every overlap clears the floor.
    pub fn random_std(d: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("basis dimension must be ≥ 1".into()));
        }
        let mut r = rng(seed);
        loop {
            let kb = Self::new(CMat::identity(d, d), haar_unitary(&mut r, d))?;
            if kb.faithful {
                return Ok(kb);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn basis_a(&self) -> &CMat {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &CMat {
        &self.basis_b
    }

    pub fn labels_a(&self) -> &[String] {
        &self.labels_a
    }

    pub fn labels_b(&self) -> &[String] {
        &self.labels_b
    }

    /// `O_ab = ⟨a|b⟩`.
    pub fn overlaps(&self) -> &CMat {
        &self.overlaps
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn min_overlap(&self) -> f64 {
        self.overlaps
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Labels of `Λ = a × b`, `a` outer.
    pub fn pair_labels(&self) -> Vec<String> {
        self.labels_a
            .iter()
            .flat_map(|a| self.labels_b.iter().map(move |b| format!("{a},{b}")))
            .collect()
    }
}

/// Entry `(a, b)` is `⟨a|ρ|b⟩⟨b|a⟩`.
pub fn kd_distribution(kb: &KdBases, rho: &CMat) -> Result<CMat> {
    let d = kb.d;
    if rho.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "state is {:?}, bases act on dimension {d}",
            rho.shape()
        )));
    }
    let inner = kb.basis_a.adjoint() * rho * &kb.basis_b;
    Ok(CMat::from_fn(d, d, |a, b| {
        inner[(a, b)] * kb.overlaps[(a, b)].conj()
    }))
}

/// `F_ab = |a⟩⟨b|⟨a|b⟩`, `G_ab = |a⟩⟨b|/⟨b|a⟩`.
pub fn kd_frame_pair(kb: &KdBases) -> Result<DualPair> {
    if !kb.faithful {
        return Err(Error::NonFaithfulBases {
            min_overlap: kb.min_overlap(),
        });
    }
    let d = kb.d;
    let mut frame = Vec::with_capacity(d * d);
    let mut dual = Vec::with_capacity(d * d);
    for a in 0..d {
        let ket_a = kb.basis_a.column(a);
        for b in 0..d {
            let ket_b = kb.basis_b.column(b);
            let outer: CMat = ket_a * ket_b.adjoint();
            let o = kb.overlaps[(a, b)];
            frame.push(outer.map(|z| z * o));
            dual.push(outer.map(|z| z / o.conj()));
        }
    }
    let labels = kb.pair_labels();
    DualPair::new(
        Frame::new(d, labels.clone(), frame)?,
        Frame::new(d, labels, dual)?,
    )
}

/// Representation on quantum systems, one pair of bases per dimension.
pub fn kd_representation(kbs: &[KdBases]) -> Result<Representation> {
    let mut systems = std::collections::BTreeMap::new();
    for kb in kbs {
        let kind = SystemKind::Quantum(kb.d);
        if systems
            .insert(kind, SystemRep::from_pair(kd_frame_pair(kb)?))
            .is_some()
        {
            return Err(Error::Invalid(format!("two KD bases given for {kind}")));
        }
    }
    Representation::new(systems)
}

/// CSV rows `a_label,b_label,re,im` followed by a `sum` row.
pub fn kd_table_csv(kb: &KdBases, table: &CMat) -> Result<String> {
    if table.shape() != (kb.d, kb.d) {
        return Err(Error::Dimension("KD table shape".into()));
    }
    let mut out = String::from("a_label,b_label,re,im\n");
    let mut sum = C64::new(0.0, 0.0);
    for (a, la) in kb.labels_a.iter().enumerate() {
        for (b, lb) in kb.labels_b.iter().enumerate() {
            let z = table[(a, b)];
            sum += z;
            // `+ 0.0` folds negative zero.
            writeln!(out, "{la},{lb},{:.16e},{:.16e}", z.re + 0.0, z.im + 0.0)
                .expect("write to String");
        }
    }
    writeln!(out, "sum,,{:.16e},{:.16e}", sum.re + 0.0, sum.im + 0.0).expect("write to String");
    Ok(out)
}

/// On-disk bases `{"basis_a": matrix, "basis_b": matrix}` with optional labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KdBasesFile {
    pub basis_a: MatrixJson,
    pub basis_b: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels_a: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels_b: Option<Vec<String>>,
}

impl KdBasesFile {
    pub fn into_bases(self) -> Result<KdBases> {
        let a = self.basis_a.to_cmat()?;
        let b = self.basis_b.to_cmat()?;
        let d = a.nrows();
        let la = self
            .labels_a
            .unwrap_or_else(|| (0..d).map(|k| format!("a{k}")).collect());
        let lb = self
            .labels_b
            .unwrap_or_else(|| (0..d).map(|k| format!("b{k}")).collect());
        KdBases::with_labels(a, b, la, lb)
    }
}

/// `|ψ⟩⟨ψ|` for a ket given by its entries.
pub fn pure_state(ket: &[C64]) -> CMat {
    let v = crate::linalg::CVec::from_column_slice(ket);
    &v * v.adjoint()
}

/// Qubit state `(I + xX + yY + zZ)/2`.
pub fn bloch_state(x: f64, y: f64, z: f64) -> CMat {
    let half = 0.5;
    CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(half * (1.0 + z), 0.0),
            C64::new(half * x, -half * y),
            C64::new(half * x, half * y),
            C64::new(half * (1.0 - z), 0.0),
        ],
    )
}

/// `|0⟩⟨0|` on a qubit.
pub fn ket0() -> CMat {
    pure_state(&[ONE, C64::new(0.0, 0.0)])
}
