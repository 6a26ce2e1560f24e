//! Identity resolution and tomographic decomposition of a qubit-to-qutrit channel.

use quasirep::gpt::{
    make_system, random_channel, reassemble, tomographic_decompose, GptProcess, SystemKind,
};
use quasirep::linalg::max_abs_diff_real;

fn main() -> quasirep::Result<()> {
    let q2 = make_system(SystemKind::Quantum(2), 0)?;
    let q3 = make_system(SystemKind::Quantum(3), 0)?;
    println!("qubit t =\n{:.4}", q2.t());

    let ch = random_channel(2, 3, 9)?;
    let p = GptProcess::from_channel(q2.clone(), q3.clone(), &ch)?;
    let r = tomographic_decompose(&p)?;
    println!("coefficients: {}×{}", r.nrows(), r.ncols());
    println!(
        "reassembly error {:.2e}",
        max_abs_diff_real(&reassemble(&q3, &r, &q2), &p.matrix)
    );
    Ok(())
}
