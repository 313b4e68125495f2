//! The Clifford basis, a perturbed basis that breaks it, and the SL(2,ℝ)
//! lift of a Lorentz matrix.

use diracwalk::spectral::{clifford_check, CliffordBasis};
use diracwalk::symmetry::{so12_boost, so12_rotation, spin_cover, BoostPlane};

fn main() -> diracwalk::Result<()> {
    let good = clifford_check(&CliffordBasis::standard());
    let bad = clifford_check(&CliffordBasis::perturbed(2, 1e-6));
    println!("anticommutators: standard {:.1e}, perturbed {:.1e}", good.max_anticommutator_residual(), bad.max_anticommutator_residual());

    let a = so12_boost(0.8, BoostPlane::P01);
    let b = so12_rotation(1.1).compose(&so12_boost(-0.4, BoostPlane::P02));
    let m = spin_cover(&a)?;
    println!("M for the 01-boost:\n{}", m.matrix());
    println!("conjugation residual {:.1e}", m.conjugation_residual(&a));

    let lhs = spin_cover(&a.compose(&b))?;
    let rhs = m.compose(&spin_cover(&b)?);
    println!("homomorphism defect up to sign {:.1e}", lhs.distance_up_to_sign(&rhs));
    Ok(())
}
