//! The symmetry group of the fixed-mass walk, the orthochronicity test
//! that rules out its other candidates, and the failure to recover the
//! 1+1 Lorentz generator as the mass goes to zero.

use diracwalk::fixed_mu::{exclusion_report, relativistic_limit_probe, FixedMuFrame, Parity};

fn main() -> diracwalk::Result<()> {
    let (mu, beta) = (0.4, 0.25);
    let frame = FixedMuFrame::new(mu, beta, Parity::Identity)?;
    let p = frame.transform(0.3)?;
    println!("k = 0.3 maps to k′ = {:.6}, μ′ − μ = {:.1e}", p.k, p.mu - mu);

    let r = exclusion_report(mu, beta)?;
    for (name, e) in [("T+²", r.t2_plus), ("T−²", r.t2_minus), ("L−", r.l_minus), ("L+", r.l_plus)] {
        println!("{name}: top-left {:+.6} (closed form {:+.6}), orthochronous {}", e.entry, e.closed_form, e.orthochronous);
    }

    let probe = relativistic_limit_probe(&[0.2, 0.1, 0.05, 0.025], 1e-3, 32, &[0.7], 0.01)?;
    for s in &probe.summaries {
        println!("μ = {:<6} generator deviation {:.4}", s.mu, s.deviation_norm);
    }
    println!("variable-mass boost Jacobian deviation {:.1e}", probe.contrast[0].deviation);
    Ok(())
}
