//! The nonlinear boost acting on a list of modes, and its linear limit at
//! small wave vectors.

use diracwalk::spectral::{eigensystem, KPoint};
use diracwalk::symmetry::{apply_frame_change, dsr_boost, dsr_linear_limit, Mode, PhaseFunction, DEFAULT_FD_STEP};

fn main() -> diracwalk::Result<()> {
    let xi = 0.7;
    let fc = dsr_boost(xi, PhaseFunction::linear(0.1, 0.0, 0.0))?;
    let modes: Vec<Mode> = [(0.1, 0.05), (0.4, -0.3), (1.0, 0.2), (1.45, 1.2)]
        .iter()
        .map(|&(k, mu)| Mode { point: KPoint::on_shell(k, mu), spinor: eigensystem(k, mu).plus.1 })
        .collect();
    let out = apply_frame_change(&fc, &modes)?;
    for t in &out.modes {
        println!(
            "(k, μ) = ({:+.3}, {:+.3}) → ({:+.6}, {:+.6}), residual {:.1e}",
            t.source.k, t.source.mu, t.point.k, t.point.mu, t.residual
        );
    }
    println!("{} truncated at the rim", out.truncated);

    let j = dsr_linear_limit(xi, DEFAULT_FD_STEP)?;
    println!("Jacobian at the origin:\n{j}");
    println!("cosh ξ = {:.8}, sinh ξ = {:.8}", xi.cosh(), xi.sinh());
    Ok(())
}
