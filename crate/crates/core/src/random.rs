//! Seeded sampling of matrices, states, effects and unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMat, RMat, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent seed for trial `index` of a run seeded with `seed` (splitmix64).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Entries uniform on [-1, 1].
pub fn uniform_real<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RMat {
    RMat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
pub fn haar_unitary<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let qr = ginibre(rng, d, d).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn random_density<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let g = ginibre(rng, d, d);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho.map(|z| z / tr)
}

/// Effect `V† diag(u) V` with Haar `V` and `u` uniform on [0, 1]^d.
pub fn random_effect<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let v = haar_unitary(rng, d);
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| {
        C64::new(rng.random_range(0.0..=1.0), 0.0)
    }));
    v.adjoint() * diag * v
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let g = ginibre(rng, d, d);
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// Complex scalar with standard Gaussian parts.
pub fn complex_scalar<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}
