//! Born rule through a frame representation, and what a mismatched dual does to it.

use quasirep::frames::{born_probe, canonical_dual, DualPair, Frame};
use quasirep::random::{random_density, random_effect, rng};

fn main() -> quasirep::Result<()> {
    let mut r = rng(3);
    let rho = random_density(&mut r, 3);
    let eff = random_effect(&mut r, 3);

    let pair = canonical_dual(&Frame::random(&mut r, 3, 11))?;
    let p = born_probe(&pair, &rho, &eff)?;
    println!(
        "Σ μ ξ = {:.12}, Tr(Eρ) = {:.12}, residual {:.1e}",
        p.lhs, p.rhs, p.residual
    );

    let other = canonical_dual(&Frame::random(&mut r, 3, 11))?;
    let broken = DualPair::unchecked(pair.frame().clone(), other.dual().clone())?;
    let p = born_probe(&broken, &rho, &eff)?;
    println!("mismatched dual: residual {:.3}", p.residual);
    Ok(())
}
