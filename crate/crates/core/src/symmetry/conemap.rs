//! Chains of radial dilations and Lorentz matrices acting on `K₀`.

use crate::error::{Error, Result};
use crate::geometry::{n_inverse, n_map, ConePoint, NVector, RadialMap, REPRESENTABLE_MARGIN};
use crate::spectral::KPoint;

use super::lorentz::LorentzElement;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConeStage {
    /// `v ↦ D_f(v)`, sends `K` into `K₀`.
    Dilate(RadialMap),
    /// `v ↦ D_f⁻¹(v)`, sends `K₀` into `K`.
    Contract(RadialMap),
    Lorentz(LorentzElement),
}

impl ConeStage {
    fn inverse(&self) -> ConeStage {
        match *self {
            ConeStage::Dilate(f) => ConeStage::Contract(f),
            ConeStage::Contract(f) => ConeStage::Dilate(f),
            ConeStage::Lorentz(l) => ConeStage::Lorentz(l.inverse()),
        }
    }

    fn apply(&self, v: &NVector) -> Result<NVector> {
        match self {
            ConeStage::Dilate(f) => f.apply(v),
            ConeStage::Contract(f) => f.invert(v),
            ConeStage::Lorentz(l) => Ok(l.apply(v)),
        }
    }
}

/// A composition of stages applied left to right.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConeMap {
    stages: Vec<ConeStage>,
}

impl ConeMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn lorentz(l: LorentzElement) -> Self {
        Self { stages: vec![ConeStage::Lorentz(l)] }
    }

    pub fn dilate(f: RadialMap) -> Self {
        Self { stages: vec![ConeStage::Dilate(f)] }
    }

    pub fn contract(f: RadialMap) -> Self {
        Self { stages: vec![ConeStage::Contract(f)] }
    }

    /// `D_f⁻¹ ∘ L ∘ D_g`.
    pub fn conjugated(l: LorentzElement, g: RadialMap, f: RadialMap) -> Self {
        Self { stages: vec![ConeStage::Dilate(g), ConeStage::Lorentz(l), ConeStage::Contract(f)] }
    }

    pub fn stages(&self) -> &[ConeStage] {
        &self.stages
    }

    pub fn is_identity(&self) -> bool {
        self.stages.is_empty()
    }

    /// `next ∘ self`. A stage meeting its own inverse at the seam is
    /// removed together with it, so `m.then(&m.inverse())` is exactly the
    /// identity.
    pub fn then(&self, next: &ConeMap) -> ConeMap {
        let mut stages = self.stages.clone();
        for s in &next.stages {
            if stages.last() == Some(&s.inverse()) {
                stages.pop();
            } else {
                stages.push(*s);
            }
        }
        ConeMap { stages }
    }

    pub fn inverse(&self) -> ConeMap {
        ConeMap { stages: self.stages.iter().rev().map(ConeStage::inverse).collect() }
    }

    pub fn apply(&self, v: &NVector) -> Result<NVector> {
        self.stages.iter().try_fold(*v, |acc, s| s.apply(&acc))
    }

    /// Product of the Lorentz stages in application order.
    pub fn lorentz_part(&self) -> LorentzElement {
        self.stages.iter().fold(LorentzElement::identity(), |acc, s| match s {
            ConeStage::Lorentz(l) => l.compose(&acc),
            _ => acc,
        })
    }

    /// Lift to momenta: `n⁻¹ ∘ self ∘ n`.
    ///
    /// Images on the rim of `K` or outside the future sheet are reported as
    /// [`Error::Truncated`].
    pub fn on_momenta(&self, p: &KPoint) -> Result<KPoint> {
        if self.is_identity() {
            return Ok(*p);
        }
        let v = self.apply(&n_map(p)?.vector())?;
        if v.n0() <= 0.0 || 1.0 - v.n0() * v.n0() <= REPRESENTABLE_MARGIN {
            return Err(Error::Truncated(format!(
                "image n0 = {} is not representable in B0",
                v.n0()
            )));
        }
        n_inverse(&ConePoint::in_k(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::lorentz::BoostPlane;

    #[test]
    fn chain_and_inverse_round_trip() {
        let l = LorentzElement::boost(0.3, BoostPlane::P01);
        let map = ConeMap::conjugated(l, RadialMap::Atanh, RadialMap::reciprocal());
        let v = NVector::new(0.5, 0.3, 0.4);
        let back = map.inverse().apply(&map.apply(&v).unwrap()).unwrap();
        assert!((back.0 - v.0).norm() < 1e-13);
    }

    #[test]
    fn inverse_cancels_exactly() {
        let map = ConeMap::conjugated(
            LorentzElement::boost(0.3, BoostPlane::P01).compose(&LorentzElement::rotation(0.4)),
            RadialMap::power(1.5, 1.2).unwrap(),
            RadialMap::reciprocal(),
        );
        assert!(map.then(&map.inverse()).is_identity());
        assert!(map.inverse().then(&map).is_identity());
        let twice = map.then(&map);
        assert_eq!(twice.stages().len(), 6);
    }

    #[test]
    fn lorentz_part_respects_order() {
        let a = LorentzElement::boost(0.3, BoostPlane::P01);
        let b = LorentzElement::rotation(0.7);
        let map = ConeMap::lorentz(a).then(&ConeMap::lorentz(b));
        assert!(map.lorentz_part().distance(&b.compose(&a)) < 1e-15);
    }

    #[test]
    fn momenta_identity_is_exact() {
        let p = KPoint::on_shell(0.2, 0.3);
        assert_eq!(ConeMap::identity().on_momenta(&p).unwrap(), p);
    }
}
