//! Extracts χ and φ from a strictly semi-functorial qubit representation and
//! checks Γ(T) = χ ∘ C(T) ∘ φ on random channels.

use std::collections::BTreeMap;

use quasirep::frames::{canonical_dual, Frame};
use quasirep::gpt::{make_system, random_channel, SystemKind};
use quasirep::linalg::{max_abs_diff, rank, Tolerance};
use quasirep::random::{ginibre, rng};
use quasirep::structure::{verify_decomposition, ChiPhi, Representation};

fn main() -> quasirep::Result<()> {
    let mut r = rng(11);
    let frame = Frame::pauli().with_element("extra", ginibre(&mut r, 2, 2))?;
    let rep = Representation::from_pairs(BTreeMap::from([(
        SystemKind::Quantum(2),
        canonical_dual(&frame)?,
    )]))?;
    let qubit = make_system(SystemKind::Quantum(2), 0)?;

    let d = rep.id_image(qubit.kind())?;
    println!(
        "D is {}×{} of rank {}",
        d.nrows(),
        d.ncols(),
        rank(&d, Tolerance::default())
    );

    let cp = ChiPhi::extract(&rep, &qubit)?;
    println!(
        "rank χ = {}, ‖φχ − I‖ = {:.2e}",
        cp.chi_rank(),
        cp.left_inverse_residual()
    );
    println!("‖χφ − D‖ = {:.2e}", max_abs_diff(&cp.id_image(), &d));

    let channels: Vec<_> = (0..20)
        .map(|s| random_channel(2, 2, s))
        .collect::<Result<_, _>>()?;
    let residual = verify_decomposition(&rep, &qubit, &qubit, &channels)?;
    println!("max ‖Γ(T) − χ C(T) φ‖ over 20 channels: {residual:.2e}");
    Ok(())
}
