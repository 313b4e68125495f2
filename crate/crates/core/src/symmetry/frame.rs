//! Changes of inertial frame `(k′, a, M)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{n_map, RadialMap};
use crate::spectral::{n_vector, CliffordBasis, KPoint, Spinor};

use super::conemap::ConeMap;
use super::lorentz::{spin_cover, BoostPlane, LorentzElement, SpinElement};
use super::phase::PhaseFunction;

/// Tolerance for flagging `|e^{ia}| ≠ 1`.
pub const UNITARITY_FLAG_TOL: f64 = 1e-12;

/// `k ↦ k′(k)`, `ψ′(k′) = e^{i a(k′)} M ψ(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameChange {
    kmap: ConeMap,
    phase: PhaseFunction,
    spin: SpinElement,
}

/// `k′ = n⁻¹ ∘ D_f⁻¹ ∘ L ∘ D_g ∘ n`, `M = spin_cover(L)`.
pub fn make_frame_change(
    l: LorentzElement,
    g_in: RadialMap,
    f_out: RadialMap,
    a: PhaseFunction,
) -> Result<FrameChange> {
    for (label, f) in [("g_in", g_in), ("f_out", f_out)] {
        if !f.is_onto_full_cone() {
            return Err(Error::NotRadial(format!("{label} = {} does not map K onto K0", f.name())));
        }
    }
    l.check(super::lorentz::LORENTZ_TOL)?;
    Ok(FrameChange {
        kmap: ConeMap::conjugated(l, g_in, f_out),
        phase: a,
        spin: spin_cover(&l)?,
    })
}

/// Nonlinear boost `D_f⁻¹ ∘ B₀₁(ξ) ∘ D_f` with the reciprocal dilation.
pub fn dsr_boost(xi: f64, a: PhaseFunction) -> Result<FrameChange> {
    let f = RadialMap::reciprocal();
    make_frame_change(LorentzElement::boost(xi, BoostPlane::P01), f, f, a)
}

impl FrameChange {
    pub fn identity() -> Self {
        Self { kmap: ConeMap::identity(), phase: PhaseFunction::zero(), spin: SpinElement::identity() }
    }

    /// Pure phase change; `k′` and `M` are the identity.
    pub fn translation(a: PhaseFunction) -> Self {
        Self { phase: a, ..Self::identity() }
    }

    pub fn kmap(&self) -> &ConeMap {
        &self.kmap
    }

    pub fn phase(&self) -> &PhaseFunction {
        &self.phase
    }

    pub fn spin(&self) -> &SpinElement {
        &self.spin
    }

    pub fn lorentz(&self) -> LorentzElement {
        self.kmap.lorentz_part()
    }

    pub fn kprime(&self, p: &KPoint) -> Result<KPoint> {
        self.kmap.on_momenta(p)
    }

    pub fn kprime_inverse(&self, p: &KPoint) -> Result<KPoint> {
        self.kmap.inverse().on_momenta(p)
    }

    /// `[(k′, a, M) ψ](k) = e^{i a(k)} M ψ(k′⁻¹(k))`.
    pub fn act_on<F>(&self, psi: F, p: &KPoint) -> Result<Spinor>
    where
        F: Fn(&KPoint) -> Result<Spinor>,
    {
        let source = self.kprime_inverse(p)?;
        Ok(self.spin.complex() * psi(&source)? * self.phase.factor(p)?)
    }
}

/// `fc2 ∘ fc1 = (k″ ∘ k′, b + a ∘ k″⁻¹, N M)`.
pub fn compose(fc2: &FrameChange, fc1: &FrameChange) -> FrameChange {
    FrameChange {
        kmap: fc1.kmap.then(&fc2.kmap),
        phase: fc2.phase.add(&fc1.phase.precompose(&fc2.kmap.inverse())),
        spin: fc2.spin.compose(&fc1.spin),
    }
}

/// `(k′⁻¹, −a ∘ k′, M⁻¹)`.
pub fn inverse(fc: &FrameChange) -> FrameChange {
    FrameChange {
        kmap: fc.kmap.inverse(),
        phase: fc.phase.precompose(&fc.kmap).negate(),
        spin: fc.spin.inverse(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Mode {
    pub point: KPoint,
    pub spinor: Spinor,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransformedMode {
    pub source: KPoint,
    pub point: KPoint,
    #[serde(skip)]
    pub spinor: Spinor,
    /// `‖n(k′)·τ ψ′‖ / ‖ψ′‖`.
    pub residual: f64,
    /// `|e^{i a(k′)}|`.
    pub phase_modulus: f64,
}

impl TransformedMode {
    pub fn non_unitary_phase(&self) -> bool {
        (self.phase_modulus - 1.0).abs() > UNITARITY_FLAG_TOL
    }
}

#[derive(Clone, Debug, Default)]
pub struct FrameApplication {
    pub modes: Vec<TransformedMode>,
    /// Modes whose image left the representable interior of `B₀`.
    pub truncated: usize,
    /// Modes carrying `|e^{ia}| ≠ 1`.
    pub non_unitary: usize,
}

/// Relative eigen-equation residual `‖n·τ ψ‖ / ‖ψ‖`.
pub fn kernel_residual(p: &KPoint, psi: &Spinor) -> f64 {
    let norm = psi.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (CliffordBasis::standard().slash(&n_vector(p)) * psi).norm() / norm
}

fn transform_one(fc: &FrameChange, m: &Mode) -> Result<Option<TransformedMode>> {
    n_map(&m.point)?;
    let point = match fc.kprime(&m.point) {
        Ok(p) => p,
        Err(Error::Truncated(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let factor: Complex64 = fc.phase.factor(&point)?;
    let spinor = fc.spin.complex() * m.spinor * factor;
    Ok(Some(TransformedMode {
        source: m.point,
        point,
        spinor,
        residual: kernel_residual(&point, &spinor),
        phase_modulus: factor.norm(),
    }))
}

/// Relabels each mode `k → k′(k)` and multiplies its amplitude by
/// `e^{i a(k′)} M`. Output order follows input order.
pub fn apply_frame_change(fc: &FrameChange, modes: &[Mode]) -> Result<FrameApplication> {
    let results: Vec<Option<TransformedMode>> =
        modes.par_iter().map(|m| transform_one(fc, m)).collect::<Result<_>>()?;
    let truncated = results.iter().filter(|r| r.is_none()).count();
    let modes: Vec<TransformedMode> = results.into_iter().flatten().collect();
    let non_unitary = modes.iter().filter(|m| m.non_unitary_phase()).count();
    Ok(FrameApplication { modes, truncated, non_unitary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigensystem;
    use std::f64::consts::FRAC_PI_8;

    fn plus_mode(k: f64, mu: f64) -> Mode {
        Mode { point: KPoint::on_shell(k, mu), spinor: eigensystem(k, mu).plus.1 }
    }

    #[test]
    fn identity_triple_collapses() {
        let f = RadialMap::reciprocal();
        let fc = make_frame_change(LorentzElement::identity(), f, f, PhaseFunction::zero()).unwrap();
        let p = KPoint::on_shell(0.4, -0.3);
        let q = fc.kprime(&p).unwrap();
        assert!((q.k - p.k).abs() < 1e-12 && (q.mu - p.mu).abs() < 1e-12);
    }

    #[test]
    fn boost_pipeline_preserves_eigen_equation() {
        let fc = dsr_boost(0.5, PhaseFunction::zero()).unwrap();
        let out = apply_frame_change(&fc, &[plus_mode(FRAC_PI_8, FRAC_PI_8)]).unwrap();
        let m = &out.modes[0];
        assert!(m.point.shell_residual() < 1e-10);
        assert!(m.residual < 1e-9);
    }

    #[test]
    fn translation_only_changes_phase() {
        let fc = FrameChange::translation(PhaseFunction::linear(0.3, -0.2, 0.7));
        let mode = plus_mode(0.2, 0.1);
        let out = apply_frame_change(&fc, &[mode]).unwrap();
        let m = &out.modes[0];
        assert_eq!(m.point, mode.point);
        let a = 0.3 * mode.point.omega - 0.2 * 0.2 + 0.7 * 0.1;
        let expected = mode.spinor * Complex64::from_polar(1.0, a);
        assert!((m.spinor - expected).norm() < 1e-15);
    }

    #[test]
    fn rejects_identity_dilation() {
        let err = make_frame_change(
            LorentzElement::identity(),
            RadialMap::Identity,
            RadialMap::reciprocal(),
            PhaseFunction::zero(),
        );
        assert!(matches!(err, Err(Error::NotRadial(_))));
    }

    #[test]
    fn large_boost_truncates_instead_of_clamping() {
        let fc = dsr_boost(6.0, PhaseFunction::zero()).unwrap();
        let out = apply_frame_change(&fc, &[plus_mode(1.4, 0.0)]).unwrap();
        assert_eq!(out.truncated + out.modes.len(), 1);
    }
}
