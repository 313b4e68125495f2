//! Composing frame changes, the one-parameter boost subgroup, and the
//! split of a cone diffeomorphism into nonlinear Lorentz and dilation parts.

use diracwalk::geometry::RadialMap;
use diracwalk::spectral::KPoint;
use diracwalk::symmetry::{
    compose, cone_samples, dsr_boost, factorize, inverse, so12_boost, so12_rotation, BoostPlane, PhaseFunction,
};

fn main() -> diracwalk::Result<()> {
    let p = KPoint::on_shell(0.5, -0.2);
    let a = dsr_boost(0.3, PhaseFunction::linear(0.2, 0.0, 0.0))?;
    let b = dsr_boost(0.5, PhaseFunction::zero())?;
    let ab = compose(&b, &a);
    let direct = dsr_boost(0.8, PhaseFunction::zero())?;
    println!("boost 0.3 then 0.5: {:?}", ab.kprime(&p)?);
    println!("boost 0.8:          {:?}", direct.kprime(&p)?);
    println!("phase of the composite at p: {}", ab.phase().eval(&p)?);
    println!("fc ∘ fc⁻¹ at p: {:?}", compose(&ab, &inverse(&ab)).kprime(&p)?);

    let l = so12_rotation(0.6).compose(&so12_boost(0.4, BoostPlane::P01));
    let g = RadialMap::power(1.7, 1.3)?;
    let samples = cone_samples(500, 5, 0.05);
    let f = factorize(l, g, RadialMap::reciprocal(), RadialMap::reciprocal(), &samples)?;
    println!(
        "factorization on {} samples: collinearity {:.1e}, reconstruction {:.1e}",
        f.samples, f.max_collinearity, f.max_reconstruction
    );
    Ok(())
}
