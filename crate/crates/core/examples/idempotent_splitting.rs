//! Two splittings of one idempotent and the unique map between them.

use quasirep::linalg::{max_abs_diff, CMat, Tolerance};
use quasirep::random::{ginibre, rng};
use quasirep::structure::{split_idempotent, splitting_isomorphism, Splitting};

fn main() -> quasirep::Result<()> {
    let mut r = rng(5);
    let chi = ginibre(&mut r, 5, 3);
    let phi = (chi.adjoint() * &chi)
        .try_inverse()
        .expect("full column rank")
        * chi.adjoint();
    let d = &chi * &phi;

    let ours = split_idempotent(&d, Tolerance::default().with_abs(1e-9))?;
    println!(
        "rank {}, ‖ιπ − D‖ = {:.2e}",
        ours.rank(),
        max_abs_diff(&ours.idempotent(), &d)
    );

    let given = Splitting { iota: chi, pi: phi };
    let xi = splitting_isomorphism(&given, &ours, 1e-9)?;
    let back = &given.pi * &ours.iota;
    println!(
        "‖ξ ξ⁻¹ − I‖ = {:.2e}",
        max_abs_diff(&(&xi * back), &CMat::identity(3, 3))
    );
    Ok(())
}
