//! Mass-shell geometry: the vector `n`, the planar map `n̄` and its
//! Jacobian, the region structure of the Brillouin zone, the cones `K`
//! and `K₀`, and radial dilations `v ↦ f(v)·v`.
//!
//! Components are indexed `(n0, n1, n2)` = (time-like, space-like,
//! mass-like) with Minkowski signature `(+, −, −)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dispersion, KPoint};

/// Tolerance for the null-cone condition on cone points.
pub const CONE_TOL: f64 = 1e-10;
/// Forward dilations need `1 − r² > BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-12;
/// A point with `1 − n0² ≤ REPRESENTABLE_MARGIN` is treated as lying on the
/// rim of `K` and cannot be pulled back to the open region `B₀`.
pub const REPRESENTABLE_MARGIN: f64 = 1e-10;

/// A vector of ℝ^{1,2}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NVector(pub Vector3<f64>);

impl NVector {
    pub fn new(n0: f64, n1: f64, n2: f64) -> Self {
        Self(Vector3::new(n0, n1, n2))
    }

    pub fn zero() -> Self {
        Self(Vector3::zeros())
    }

    #[inline]
    pub fn n0(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn n1(&self) -> f64 {
        self.0[1]
    }

    #[inline]
    pub fn n2(&self) -> f64 {
        self.0[2]
    }

    pub fn minkowski_dot(&self, other: &NVector) -> f64 {
        self.n0() * other.n0() - self.n1() * other.n1() - self.n2() * other.n2()
    }

    pub fn minkowski_square(&self) -> f64 {
        self.minkowski_dot(self)
    }

    /// `sqrt(n1² + n2²)`, the radius that radial dilations act on.
    pub fn spatial_radius(&self) -> f64 {
        self.n1().hypot(self.n2())
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scaled(&self, factor: f64) -> NVector {
        NVector(self.0 * factor)
    }

    /// Sine of the angle between the two vectors, zero when either vanishes.
    pub fn collinearity_residual(&self, other: &NVector) -> f64 {
        let (a, b) = (self.euclidean_norm(), other.euclidean_norm());
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        self.0.cross(&other.0).norm() / (a * b)
    }

    /// Null-cone residual `|n·n|`, relative to the Euclidean size of `n`.
    pub fn null_residual(&self) -> f64 {
        self.minkowski_square().abs() / self.0.norm_squared().max(1.0)
    }
}

impl fmt::Display for NVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n0(), self.n1(), self.n2())
    }
}

/// Which of the two cones a [`ConePoint`] was checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    /// Truncated future cone, `0 ≤ n0 ≤ 1`.
    K,
    /// The full null cone.
    K0,
}

/// An [`NVector`] known to satisfy the null condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePoint {
    v: NVector,
    cone: Cone,
}

impl ConePoint {
    pub fn in_k(v: NVector) -> Result<Self> {
        let residual = v.null_residual();
        if residual >= CONE_TOL {
            return Err(Error::OffCone { residual });
        }
        if v.n0() < 0.0 || v.n0() > 1.0 {
            return Err(Error::OffCone { residual: v.n0() });
        }
        Ok(Self { v, cone: Cone::K })
    }

    pub fn in_k0(v: NVector) -> Result<Self> {
        let residual = v.null_residual();
        if residual >= CONE_TOL {
            return Err(Error::OffCone { residual });
        }
        Ok(Self { v, cone: Cone::K0 })
    }

    pub fn vector(&self) -> NVector {
        self.v
    }

    pub fn cone(&self) -> Cone {
        self.cone
    }

    /// True when the point is strictly inside the truncation of `K`.
    pub fn is_interior(&self) -> bool {
        1.0 - self.v.n0() * self.v.n0() > REPRESENTABLE_MARGIN
    }
}

/// `(k, μ) ↦ (cos μ sin k, sin μ)`.
pub fn nbar(k: f64, mu: f64) -> (f64, f64) {
    (mu.cos() * k.sin(), mu.sin())
}

/// Determinant of the Jacobian of [`nbar`], `cos²μ cos k`.
pub fn nbar_jacobian(k: f64, mu: f64) -> f64 {
    let c = mu.cos();
    c * c * k.cos()
}

/// Regions of the Brillouin zone separated by the singular lines of `n̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    B0,
    B1,
    B2,
    B3,
    Boundary,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::B0 => "B0",
            Region::B1 => "B1",
            Region::B2 => "B2",
            Region::B3 => "B3",
            Region::Boundary => "boundary",
        };
        f.write_str(s)
    }
}

const REGION_TOL: f64 = 1e-12;

/// Classify `(k, μ)` by the sign pattern of `(cos k, cos μ)`.
pub fn region_of(k: f64, mu: f64) -> Region {
    let (ck, cm) = (k.cos(), mu.cos());
    if ck.abs() < REGION_TOL || cm.abs() < REGION_TOL {
        return Region::Boundary;
    }
    match (ck > 0.0, cm > 0.0) {
        (true, true) => Region::B0,
        (false, true) => Region::B1,
        (true, false) => Region::B2,
        (false, false) => Region::B3,
    }
}

/// `true` when `(k, μ)` lies in the open square `(−π/2, π/2)²`.
pub fn in_b0(k: f64, mu: f64) -> bool {
    k.abs() < FRAC_PI_2 && mu.abs() < FRAC_PI_2
}

/// Shell tolerance applied by [`n_map`].
pub const SHELL_TOL: f64 = 1e-12;

/// The map `n : V → K`, `(ω, k, μ) ↦ (sin ω, cos μ sin k, sin μ)`.
pub fn n_map(p: &KPoint) -> Result<ConePoint> {
    let residual = p.shell_residual();
    if residual > SHELL_TOL {
        return Err(Error::OffShell { residual });
    }
    ConePoint::in_k(crate::spectral::n_vector(p))
}

/// Inverse of [`n_map`] on the interior of `K`, landing in `B₀`.
pub fn n_inverse(c: &ConePoint) -> Result<KPoint> {
    let v = c.vector();
    if v.n0() < 0.0 {
        return Err(Error::OffCone { residual: v.n0() });
    }
    if !c.is_interior() {
        return Err(Error::Boundary(format!("n0 = {} is on the rim of K", v.n0())));
    }
    let mu = v.n2().clamp(-1.0, 1.0).asin();
    let cm = mu.cos();
    let k = (v.n1() / cm).clamp(-1.0, 1.0).asin();
    // Recompute ω from (k, μ) so the result is on-shell by construction;
    // inside B₀ this is the same branch as asin(n0).
    let omega = dispersion(k, mu);
    Ok(KPoint::new(omega, k, mu))
}

/// A direction-preserving map `v ↦ f(v)·v` whose factor depends on the
/// spatial radius `r = sqrt(v1² + v2²)` only.
///
/// On the cone `r = n0`, so every variant below is a bijection of each ray
/// of `K` onto the matching ray of `K₀` (except [`RadialMap::Identity`],
/// which is the unit of `D_K`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialMap {
    /// `f(v) = 1 / (1 − v1² − v2²)`.
    Reciprocal,
    /// `f(v) = artanh(r) / r`.
    Atanh,
    /// `f(v) = scale · (1 − r²)^(−exponent)`.
    Power { scale: f64, exponent: f64 },
    Identity,
}

impl RadialMap {
    pub fn reciprocal() -> Self {
        RadialMap::Reciprocal
    }

    /// The dilation used to define the nonlinear Lorentz realization;
    /// the same map as [`RadialMap::reciprocal`].
    pub fn canonical_dilation() -> Self {
        RadialMap::Reciprocal
    }

    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power dilation needs scale > 0 and exponent > 0, got ({scale}, {exponent})"
            )));
        }
        Ok(RadialMap::Power { scale, exponent })
    }

    /// Whether the map sends `K` onto the whole of `K₀`.
    pub fn is_onto_full_cone(&self) -> bool {
        !matches!(self, RadialMap::Identity)
    }

    /// Scale factor at spatial radius `r`.
    pub fn factor_at(&self, r: f64) -> Result<f64> {
        if let RadialMap::Identity = self {
            return Ok(1.0);
        }
        let gap = 1.0 - r * r;
        if gap <= BOUNDARY_MARGIN {
            return Err(Error::SingularInput(format!(
                "radial dilation is singular at r = {r}"
            )));
        }
        Ok(match *self {
            RadialMap::Reciprocal => 1.0 / gap,
            RadialMap::Atanh => {
                if r < 1e-8 {
                    1.0 + r * r / 3.0
                } else {
                    r.atanh() / r
                }
            }
            RadialMap::Power { scale, exponent } => scale * gap.powf(-exponent),
            RadialMap::Identity => unreachable!(),
        })
    }

    pub fn apply(&self, v: &NVector) -> Result<NVector> {
        Ok(v.scaled(self.factor_at(v.spatial_radius())?))
    }

    /// Closed-form inverse where one exists, otherwise a safeguarded
    /// Newton solve of `t·f(t) = r` on `[0, 1)`.
    pub fn invert(&self, u: &NVector) -> Result<NVector> {
        let r = u.spatial_radius();
        let lambda = match *self {
            RadialMap::Identity => 1.0,
            RadialMap::Reciprocal => 2.0 / (1.0 + (1.0 + 4.0 * r * r).sqrt()),
            RadialMap::Atanh => {
                if r < 1e-8 {
                    1.0 - r * r / 3.0
                } else {
                    r.tanh() / r
                }
            }
            RadialMap::Power { scale, exponent } => {
                if r == 0.0 {
                    1.0 / scale
                } else {
                    solve_power_radius(scale, exponent, r)? / r
                }
            }
        };
        Ok(u.scaled(lambda))
    }

    pub fn name(&self) -> String {
        match self {
            RadialMap::Reciprocal => "reciprocal".into(),
            RadialMap::Atanh => "atanh".into(),
            RadialMap::Power { scale, exponent } => format!("power({scale},{exponent})"),
            RadialMap::Identity => "identity".into(),
        }
    }
}

/// Solve `t · scale · (1 − t²)^(−p) = target` for `t ∈ (0, 1)`.
fn solve_power_radius(scale: f64, p: f64, target: f64) -> Result<f64> {
    // g(t) = ln(scale) + ln t − p ln(1 − t²) − ln(target) is increasing.
    let g = |t: f64| scale.ln() + t.ln() - p * (1.0 - t * t).ln() - target.ln();
    let dg = |t: f64| 1.0 / t + 2.0 * p * t / (1.0 - t * t);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut t = (target / scale).min(0.5);
    for _ in 0..200 {
        let gt = g(t);
        if gt == 0.0 {
            return Ok(t);
        }
        if gt > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - gt / dg(t);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        t = next;
    }
    if hi - lo < 1e-14 {
        Ok(t)
    } else {
        Err(Error::SingularInput(format!(
            "radial inverse did not converge for target radius {target}"
        )))
    }
}
