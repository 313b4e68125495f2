//! Splitting a cone diffeomorphism into a nonlinear Lorentz part and a
//! radial dilation.

use nalgebra::{Matrix2, Matrix3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{n_map, NVector, RadialMap};
use crate::spectral::KPoint;

use super::conemap::ConeMap;
use super::lorentz::{BoostPlane, LorentzElement};

pub const COLLINEARITY_TOL: f64 = 1e-10;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// `ℒ ∘ ℳ = G` with `ℒ = D_f⁻¹ ∘ L ∘ D_f` and `ℳ ∈ D_K`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub lorentz: ConeMap,
    pub dilation: ConeMap,
    pub canonical: RadialMap,
    pub max_collinearity: f64,
    pub max_reconstruction: f64,
    /// Samples that could be evaluated.
    pub samples: usize,
    /// Samples skipped because an intermediate point hit the rim of `K`.
    pub skipped: usize,
}

/// Interior points of `K`, images of uniform `(k, μ)` in a shrunken `B₀`.
pub fn cone_samples(count: usize, seed: u64, margin: f64) -> Vec<NVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = std::f64::consts::FRAC_PI_2 - margin;
    (0..count)
        .map(|_| {
            let p = KPoint::on_shell(rng.gen_range(-half..half), rng.gen_range(-half..half));
            n_map(&p).expect("on-shell by construction").vector()
        })
        .collect()
}

/// `G = D_h⁻¹ ∘ L ∘ D_g`.
pub fn diffeomorphism(l: LorentzElement, g: RadialMap, h: RadialMap) -> ConeMap {
    ConeMap::conjugated(l, g, h)
}

/// Largest collinearity residual between `v` and `map(v)` on the samples
/// where the map is defined, together with the number of such samples.
pub fn radial_defect(map: &ConeMap, samples: &[NVector]) -> (f64, usize) {
    samples.iter().fold((0.0, 0), |(worst, used), v| match map.apply(v) {
        Ok(w) => {
            let c = if w.0.dot(&v.0) < 0.0 { f64::INFINITY } else { v.collinearity_residual(&w) };
            (f64::max(worst, c), used + 1)
        }
        Err(_) => (worst, used),
    })
}

/// Factorizes `G = D_h⁻¹ ∘ L ∘ D_g` as `ℒ ∘ ℳ` and certifies both parts
/// on the samples.
pub fn factorize(
    l: LorentzElement,
    g: RadialMap,
    h: RadialMap,
    canonical: RadialMap,
    samples: &[NVector],
) -> Result<Factorization> {
    if !canonical.is_onto_full_cone() {
        return Err(Error::NotRadial(format!("canonical map {} is not onto K0", canonical.name())));
    }
    let big_g = diffeomorphism(l, g, h);
    let lorentz = ConeMap::conjugated(l, canonical, canonical);
    let dilation = big_g.then(&lorentz.inverse());
    let mut max_collinearity: f64 = 0.0;
    let mut max_reconstruction: f64 = 0.0;
    let mut used = 0;
    for v in samples {
        let (Ok(m), Ok(gv)) = (dilation.apply(v), big_g.apply(v)) else {
            continue;
        };
        let Ok(lm) = lorentz.apply(&m) else {
            continue;
        };
        used += 1;
        let c = if m.0.dot(&v.0) < 0.0 { f64::INFINITY } else { v.collinearity_residual(&m) };
        max_collinearity = max_collinearity.max(c);
        max_reconstruction = max_reconstruction.max((lm.0 - gv.0).norm() / gv.euclidean_norm().max(1.0));
    }
    if used == 0 {
        return Err(Error::FactorizationFailed("no sample could be evaluated".into()));
    }
    if max_collinearity >= COLLINEARITY_TOL {
        return Err(Error::FactorizationFailed(format!(
            "dilation part is not radial, collinearity residual {max_collinearity:e}"
        )));
    }
    if max_reconstruction >= RECONSTRUCTION_TOL {
        return Err(Error::FactorizationFailed(format!(
            "L∘M differs from G by {max_reconstruction:e}"
        )));
    }
    Ok(Factorization {
        lorentz,
        dilation,
        canonical,
        max_collinearity,
        max_reconstruction,
        samples: used,
        skipped: samples.len() - used,
    })
}

/// Whether `D_f⁻¹ ∘ L ∘ D_f` is itself radial on the samples. Only the
/// identity matrix should pass.
pub fn lorentz_part_is_radial(l: LorentzElement, canonical: RadialMap, samples: &[NVector]) -> bool {
    let (defect, used) = radial_defect(&ConeMap::conjugated(l, canonical, canonical), samples);
    used > 0 && defect < COLLINEARITY_TOL
}

/// Central-difference Jacobian of `map` on `ℝ³` at the origin.
pub fn origin_jacobian(map: &ConeMap, step: f64) -> Result<Matrix3<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step must be > 0, got {step}")));
    }
    let mut jac = Matrix3::zeros();
    for j in 0..3 {
        let mut e = NVector::zero();
        e.0[j] = step;
        let fwd = map.apply(&e)?;
        let bwd = map.apply(&e.scaled(-1.0))?;
        jac.set_column(j, &((fwd.0 - bwd.0) / (2.0 * step)));
    }
    Ok(jac)
}

/// `(n0, n1)` block of the Jacobian at the cone tip of the nonlinear boost
/// with rapidity `xi`, built on the reciprocal dilation.
pub fn dsr_linear_limit(xi: f64, step: f64) -> Result<Matrix2<f64>> {
    let f = RadialMap::reciprocal();
    let map = ConeMap::conjugated(LorentzElement::boost(xi, BoostPlane::P01), f, f);
    let jac = origin_jacobian(&map, step)?;
    Ok(jac.fixed_view::<2, 2>(0, 0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_limit_matches_boost_block() {
        for xi in [0.0, 0.7, -1.2] {
            let j = dsr_linear_limit(xi, DEFAULT_FD_STEP).unwrap();
            let expected = Matrix2::new(xi.cosh(), xi.sinh(), xi.sinh(), xi.cosh());
            assert!((j - expected).amax() < 1e-5, "xi = {xi}: {j}");
        }
    }

    #[test]
    fn dilation_jacobian_is_identity_at_origin() {
        for f in [RadialMap::reciprocal(), RadialMap::Atanh] {
            let jac = origin_jacobian(&ConeMap::dilate(f), DEFAULT_FD_STEP).unwrap();
            assert!((jac - Matrix3::identity()).amax() < 1e-6);
        }
    }

    #[test]
    fn equal_dilations_give_identity_dilation_part() {
        let samples = cone_samples(200, 3, 0.05);
        let f = RadialMap::reciprocal();
        let out = factorize(LorentzElement::boost(0.4, BoostPlane::P01), f, f, f, &samples).unwrap();
        for v in &samples {
            if let Ok(m) = out.dilation.apply(v) {
                assert!((m.0 - v.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn nontrivial_dilation_part_is_certified() {
        let samples = cone_samples(200, 4, 0.05);
        let g = RadialMap::power(1.5, 0.7).unwrap();
        let f = RadialMap::reciprocal();
        let out = factorize(LorentzElement::rotation(0.9), g, f, f, &samples).unwrap();
        assert!(out.max_collinearity < COLLINEARITY_TOL);
        assert!(out.samples > 0);
    }

    #[test]
    fn bad_step_is_rejected() {
        assert!(dsr_linear_limit(0.1, 0.0).is_err());
    }
}
