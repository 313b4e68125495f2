//! Frame changes preserving the mass-shell eigen-equation.

pub mod conemap;
pub mod factor;
pub mod frame;
pub mod lorentz;
pub mod phase;

pub use conemap::{ConeMap, ConeStage};
pub use factor::{
    cone_samples, diffeomorphism, dsr_linear_limit, factorize, lorentz_part_is_radial,
    origin_jacobian, radial_defect, Factorization, DEFAULT_FD_STEP,
};
pub use frame::{
    apply_frame_change, compose, dsr_boost, inverse, kernel_residual, make_frame_change,
    FrameApplication, FrameChange, Mode, TransformedMode,
};
pub use lorentz::{spin_cover, BoostPlane, LorentzElement, SpinElement};
pub use phase::{PhaseBase, PhaseFunction, PhaseTable};

pub fn so12_boost(xi: f64, plane: BoostPlane) -> LorentzElement {
    LorentzElement::boost(xi, plane)
}

pub fn so12_rotation(theta: f64) -> LorentzElement {
    LorentzElement::rotation(theta)
}
