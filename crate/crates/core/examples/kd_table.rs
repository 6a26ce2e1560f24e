//! Kirkwood–Dirac table of a qubit state in the computational and `±` bases.

use quasirep::frames::represent_state;
use quasirep::kd::{bloch_state, kd_distribution, kd_frame_pair, kd_table_csv, KdBases};

fn main() -> quasirep::Result<()> {
    let kb = KdBases::mub_qubit();
    let rho = bloch_state(0.0, 1.0, 0.0);

    let table = kd_distribution(&kb, &rho)?;
    print!("{}", kd_table_csv(&kb, &table)?);

    // The same numbers as frame coefficients μ(a,b) = Tr(F_ab† ρ).
    let mu = represent_state(&kd_frame_pair(&kb)?, &rho)?;
    for (label, z) in kb.pair_labels().iter().zip(mu.iter()) {
        println!("μ({label}) = {:+.4} {:+.4}i", z.re, z.im);
    }
    Ok(())
}
