//! Audits three representations: KD on a qubit (everything holds), matrix
//! units (not discard preserving), and a frame paired with a foreign dual.

use std::collections::BTreeMap;

use quasirep::frames::{canonical_dual, DualPair, Frame};
use quasirep::gpt::{make_system, SystemKind};
use quasirep::kd::{kd_representation, KdBases};
use quasirep::structure::{audit_representation, Representation};

fn main() -> quasirep::Result<()> {
    let qubit = vec![make_system(SystemKind::Quantum(2), 0)?];
    let q2 = SystemKind::Quantum(2);

    let kd = kd_representation(&[KdBases::mub_qubit()])?;
    let units = Representation::from_pairs(BTreeMap::from([(
        q2,
        canonical_dual(&Frame::matrix_units(2))?,
    )]))?;
    let foreign = DualPair::unchecked(
        Frame::matrix_units(2),
        canonical_dual(&Frame::pauli())?.dual().clone(),
    )?;
    let foreign = Representation::from_pairs_unchecked(BTreeMap::from([(q2, foreign)]))?;

    for (name, rep) in [
        ("kd", &kd),
        ("matrix units", &units),
        ("foreign dual", &foreign),
    ] {
        let report = audit_representation(rep, &qubit, 20, 1)?;
        println!(
            "{name:>13}: passes={} adequate={} discard={} functorial={}",
            report.passes(),
            report.empirically_adequate.passed,
            report.discard_preserving.passed,
            report.functorial.passed
        );
    }
    Ok(())
}
