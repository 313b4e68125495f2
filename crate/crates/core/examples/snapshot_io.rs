//! Writing a state to CSV with its JSON sidecar and reading it back.

use diracwalk::io::{load_snapshot, save_snapshot, sidecar_path};
use diracwalk::lattice::{build_fixed_mass_walk, evolve, Band, Packet, Representation, SpinorField};

fn main() -> diracwalk::Result<()> {
    let mu = 0.2;
    let psi = SpinorField::gaussian_packet(mu, 256, Packet { x0: 64.0, k0: 0.5, sigma_k: 0.1, band: Band::Plus })?;
    let out = evolve(&build_fixed_mass_walk(mu, 256, Representation::Stencil)?, &psi, 50)?;

    let dir = std::env::temp_dir().join("diracwalk-snapshot-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("state.csv");
    save_snapshot(&path, &out, 50)?;
    let (meta, back) = load_snapshot(&path)?;
    println!("wrote {} and {}", path.display(), sidecar_path(&path).display());
    println!("{meta:?}");
    println!("max difference after reload {:.1e}", back.max_abs_diff(&out));
    Ok(())
}
