//! The two-dimensional walk where the mass is a lattice momentum. Stencil
//! and spectral evolution agree and the norm is conserved.

use diracwalk::lattice::{build_variable_mass_walk, evolve, Representation, SpinorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> diracwalk::Result<()> {
    let (n, n_tau, steps) = (64, 32, 100);
    let mut psi = SpinorField::zeros_variable_mass(n, n_tau)?.random(&mut ChaCha8Rng::seed_from_u64(1));
    psi.normalize();

    let stencil = evolve(&build_variable_mass_walk(n, n_tau, Representation::Stencil)?, &psi, steps)?;
    let spectral = evolve(&build_variable_mass_walk(n, n_tau, Representation::Spectral)?, &psi, steps)?;

    println!("{n}×{n_tau} lattice, {steps} steps");
    println!("norm drift      {:.2e}", (stencil.norm() - 1.0).abs());
    println!("max difference  {:.2e}", stencil.max_abs_diff(&spectral));
    Ok(())
}
