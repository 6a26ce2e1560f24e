//! Monoidal coherence of complexification on random real maps.

use quasirep::complexify::{epsilon, epsilon_inverse, monoidal_coherence, COHERENCE_TOL};
use quasirep::linalg::C64;

fn main() -> quasirep::Result<()> {
    let z = C64::new(0.3, -1.2);
    println!("ε⁻¹(ε(z)) = {}", epsilon_inverse(&epsilon(z)));

    let report = monoidal_coherence(&[3, 3, 2], 50, 1)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!(
        "passes at {COHERENCE_TOL:e}: {}",
        report.passes(COHERENCE_TOL)
    );
    Ok(())
}
