//! Recovers a frame from the linear map X ↦ (Tr(F_λ† X))_λ, and flags a
//! rank-deficient map.

use quasirep::frames::{frame_from_linear_map, Frame};
use quasirep::linalg::{max_abs_diff, Tolerance};
use quasirep::random::{ginibre, rng};

fn main() -> quasirep::Result<()> {
    let mut r = rng(2);
    let frame = Frame::random(&mut r, 2, 6);
    let map = frame.analysis_matrix();
    let (back, faithful) = frame_from_linear_map(&map, 2, Tolerance::default())?;
    let err = back
        .elements()
        .iter()
        .zip(frame.elements())
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(0.0, f64::max);
    println!("recovered 6 elements, max error {err:.1e}, faithful: {faithful}");

    let deficient = ginibre(&mut r, 6, 3) * ginibre(&mut r, 3, 4);
    let (_, faithful) = frame_from_linear_map(&deficient, 2, Tolerance::default())?;
    println!("rank-3 map faithful: {faithful}");
    Ok(())
}
