//! Completely positive, trace-nonincreasing maps in Kraus form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    devectorize, kron, max_abs_diff, min_hermitian_eigenvalue, vectorize, CMat, MatrixJson, C64,
};

/// Slack allowed on `Σ K†K ≼ I` and on Choi positivity.
pub const CHANNEL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMat>,
    superop: CMat,
}

impl Channel {
    /// Validates shapes and trace non-increase. Complete positivity holds by
    /// construction for a Kraus list.
    pub fn new(d_in: usize, d_out: usize, kraus: Vec<CMat>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidChannel("dimensions must be ≥ 1".into()));
        }
        for (k, op) in kraus.iter().enumerate() {
            if op.shape() != (d_out, d_in) {
                return Err(Error::Dimension(format!(
                    "Kraus operator {k} is {:?}, expected {:?}",
                    op.shape(),
                    (d_out, d_in)
                )));
            }
            if !crate::linalg::is_finite(op) {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} has non-finite entries"
                )));
            }
        }
        let ch = Self::from_kraus_unchecked(d_in, d_out, kraus);
        let excess = -min_hermitian_eigenvalue(&(CMat::identity(d_in, d_in) - ch.kraus_sum()));
        if excess > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "trace increasing: Σ K†K exceeds the identity by {excess:.3e}"
            )));
        }
        Ok(ch)
    }

    fn from_kraus_unchecked(d_in: usize, d_out: usize, kraus: Vec<CMat>) -> Self {
        let mut superop = CMat::zeros(d_out * d_out, d_in * d_in);
        for k in &kraus {
            superop += kron(k, &k.map(|z| z.conj()));
        }
        Self {
            d_in,
            d_out,
            kraus,
            superop,
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus_unchecked(d, d, vec![CMat::identity(d, d)])
    }

    pub fn unitary(u: CMat) -> Result<Self> {
        let d = u.nrows();
        if u.shape() != (d, d) || max_abs_diff(&(u.adjoint() * &u), &CMat::identity(d, d)) > 1e-10 {
            return Err(Error::InvalidChannel("matrix is not unitary".into()));
        }
        Ok(Self::from_kraus_unchecked(d, d, vec![u]))
    }

    /// `ρ ↦ Tr(ρ) I/d`.
    pub fn fully_depolarizing(d: usize) -> Self {
        let scale = 1.0 / (d as f64).sqrt();
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = CMat::zeros(d, d);
                k[(i, j)] = C64::new(scale, 0.0);
                kraus.push(k);
            }
        }
        Self::from_kraus_unchecked(d, d, kraus)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// `Σ_k K ⊗ conj(K)`: acts on row-major vectorized operators.
    pub fn superop(&self) -> &CMat {
        &self.superop
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        if x.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension(format!(
                "channel expects {}x{} input, got {:?}",
                self.d_in,
                self.d_in,
                x.shape()
            )));
        }
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    /// Same as [`Channel::apply`], routed through the superoperator.
    pub fn apply_superop(&self, x: &CMat) -> Result<CMat> {
        if x.shape() != (self.d_in, self.d_in) {
            return Err(Error::Dimension("superoperator input shape".into()));
        }
        devectorize(&(&self.superop * vectorize(x)))
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Channel) -> Result<Channel> {
        if after.d_in != self.d_out {
            return Err(Error::Dimension(format!(
                "cannot compose {}→{} with {}→{}",
                self.d_in, self.d_out, after.d_in, after.d_out
            )));
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(Self::from_kraus_unchecked(self.d_in, after.d_out, kraus))
    }

    pub fn kraus_sum(&self) -> CMat {
        self.kraus
            .iter()
            .fold(CMat::zeros(self.d_in, self.d_in), |acc, k| {
                acc + k.adjoint() * k
            })
    }

    /// `Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`.
    pub fn choi(&self) -> CMat {
        let (di, dout) = (self.d_in, self.d_out);
        let mut choi = CMat::zeros(dout * di, dout * di);
        for i in 0..di {
            for j in 0..di {
                let mut eij = CMat::zeros(di, di);
                eij[(i, j)] = C64::new(1.0, 0.0);
                let img = self.apply(&eij).expect("shape checked");
                choi += kron(&img, &eij);
            }
        }
        choi
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        max_abs_diff(&self.kraus_sum(), &CMat::identity(self.d_in, self.d_in)) <= tol
    }
}

/// On-disk channel: `{"d_in":..,"d_out":..,"kraus":[matrix,..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelFile {
    pub fn into_channel(self) -> Result<Channel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixJson::to_cmat)
            .collect::<Result<Vec<_>>>()?;
        Channel::new(self.d_in, self.d_out, kraus)
    }
}

impl From<&Channel> for ChannelFile {
    fn from(ch: &Channel) -> Self {
        Self {
            d_in: ch.d_in,
            d_out: ch.d_out,
            kraus: ch.kraus.iter().map(MatrixJson::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, haar_unitary, rng};

    #[test]
    fn superop_matches_kraus_action() {
        let mut r = rng(3);
        let u = haar_unitary(&mut r, 3);
        let ch = Channel::unitary(u).unwrap();
        let x = ginibre(&mut r, 3, 3);
        assert!(max_abs_diff(&ch.apply(&x).unwrap(), &ch.apply_superop(&x).unwrap()) < 1e-12);
    }

    #[test]
    fn composition_matches_superop_product() {
        let mut r = rng(4);
        let a = Channel::unitary(haar_unitary(&mut r, 2)).unwrap();
        let b = Channel::fully_depolarizing(2);
        let ba = a.then(&b).unwrap();
        assert!(max_abs_diff(ba.superop(), &(b.superop() * a.superop())) < 1e-12);
        assert!(a.then(&Channel::identity(3)).is_err());
    }

    #[test]
    fn rejects_trace_increasing_kraus() {
        let k = CMat::identity(2, 2).map(|z| z * 1.1);
        assert!(matches!(
            Channel::new(2, 2, vec![k]),
            Err(Error::InvalidChannel(_))
        ));
        assert!(Channel::new(2, 2, vec![CMat::identity(3, 3)]).is_err());
    }

    #[test]
    fn depolarizing_output() {
        let ch = Channel::fully_depolarizing(2);
        assert!(ch.is_trace_preserving(1e-12));
        let mut rho = CMat::zeros(2, 2);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(&out, &CMat::identity(2, 2).map(|z| z * 0.5)) < 1e-15);
        assert!(min_hermitian_eigenvalue(&ch.choi()) > -1e-12);
    }

    #[test]
    fn channel_file_round_trip() {
        let ch = Channel::fully_depolarizing(2);
        let json = serde_json::to_string(&ChannelFile::from(&ch)).unwrap();
        let back: ChannelFile = serde_json::from_str(&json).unwrap();
        let back = back.into_channel().unwrap();
        assert_eq!(back.superop(), ch.superop());
    }
}
