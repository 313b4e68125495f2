//! A Gaussian packet on the fixed-mass walk drifts at the group velocity.

use diracwalk::cli::group_velocity;
use diracwalk::lattice::{build_fixed_mass_walk, evolve, Band, Packet, Representation, SpinorField};

fn main() -> diracwalk::Result<()> {
    let (n, steps, mu) = (1024, 200, 0.3);
    let packet = Packet { x0: 256.0, k0: 0.8, sigma_k: 0.05, band: Band::Minus };
    let psi = SpinorField::gaussian_packet(mu, n, packet)?;
    let op = build_fixed_mass_walk(mu, n, Representation::Spectral)?;
    let out = evolve(&op, &psi, steps)?;

    let mean = |f: &SpinorField| f.position_marginal().iter().enumerate().map(|(x, p)| x as f64 * p).sum::<f64>();
    println!("norm before {:.15}, after {:.15}", psi.norm(), out.norm());
    println!(
        "mean position moved {:.2} sites, group velocity predicts {:.2}",
        mean(&out) - mean(&psi),
        steps as f64 * group_velocity(packet.k0, mu)
    );
    Ok(())
}
