//! Canonical dual of an overcomplete qubit frame and operator reconstruction.

use quasirep::frames::{canonical_dual, reconstruct_operator, represent_state, Frame};
use quasirep::linalg::max_abs_diff;
use quasirep::random::{ginibre, rng};

fn main() -> quasirep::Result<()> {
    let mut r = rng(7);
    let frame = Frame::pauli().with_element("extra", ginibre(&mut r, 2, 2))?;
    let pair = canonical_dual(&frame)?;
    println!(
        "|Λ| = {}, biorthogonal: {}",
        pair.len(),
        pair.is_biorthogonal(1e-9)
    );

    let x = ginibre(&mut r, 2, 2);
    let mu = represent_state(&pair, &x)?;
    let back = reconstruct_operator(&pair, &mu)?;
    println!("reconstruction error {:.2e}", max_abs_diff(&back, &x));

    let gram = pair.gram();
    println!(
        "‖Γ(id)² − Γ(id)‖ = {:.2e}",
        max_abs_diff(&(&gram * &gram), &gram)
    );
    Ok(())
}
