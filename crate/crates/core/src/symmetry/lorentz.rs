//! `SO⁺(1,2)` and its spin cover `SL(2,ℝ)` acting through the Clifford
//! basis on the coin space.

use nalgebra::{Matrix2, Matrix3, SMatrix};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::NVector;
use crate::spectral::{max_abs, CliffordBasis, C2};

pub const LORENTZ_TOL: f64 = 1e-12;
pub const SPIN_TOL: f64 = 1e-11;

fn eta() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, -1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoostPlane {
    /// Time and space directions.
    P01,
    /// Time and mass directions.
    P02,
}

/// A matrix of the proper orthochronous Lorentz group `SO⁺(1,2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LorentzElement(Matrix3<f64>);

impl LorentzElement {
    /// Checks `LᵀηL = η`, `det L = 1` and `L⁰₀ ≥ 1`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let candidate = Self(m);
        candidate.check(LORENTZ_TOL)?;
        Ok(candidate)
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn boost(xi: f64, plane: BoostPlane) -> Self {
        let (c, s) = (xi.cosh(), xi.sinh());
        let m = match plane {
            BoostPlane::P01 => Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            BoostPlane::P02 => Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c),
        };
        Self(m)
    }

    /// Rotation of the two space-like directions; at `θ = π/2` it sends
    /// `(0, 1, 0)` to `(0, 0, 1)`.
    pub fn rotation(theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        Self(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: &NVector) -> NVector {
        NVector(self.0 * v.0)
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &LorentzElement) -> LorentzElement {
        Self(self.0 * other.0)
    }

    /// `L⁻¹ = η Lᵀ η`.
    pub fn inverse(&self) -> LorentzElement {
        let e = eta();
        Self(e * self.0.transpose() * e)
    }

    /// `‖LᵀηL − η‖_max / max(1, ‖L‖²_max)`.
    pub fn metric_residual(&self) -> f64 {
        let e = eta();
        let r = (self.0.transpose() * e * self.0 - e).amax();
        r / self.0.amax().powi(2).max(1.0)
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        let metric = self.metric_residual();
        if metric > tol {
            return Err(Error::NotInGroup(format!("metric residual {metric:e}")));
        }
        let det = self.0.determinant();
        if (det - 1.0).abs() > tol * self.0.amax().powi(3).max(1.0) {
            return Err(Error::NotInGroup(format!("determinant {det}")));
        }
        if self.0[(0, 0)] < 1.0 - tol {
            return Err(Error::NotInGroup(format!(
                "not orthochronous, L00 = {}",
                self.0[(0, 0)]
            )));
        }
        Ok(())
    }

    pub fn distance(&self, other: &LorentzElement) -> f64 {
        (self.0 - other.0).amax()
    }
}

/// An element of `SL(2,ℝ)` acting on the coin space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinElement(Matrix2<f64>);

impl SpinElement {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if (det - 1.0).abs() > SPIN_TOL * m.amax().powi(2).max(1.0) {
            return Err(Error::NotInGroup(format!("spin matrix determinant {det}")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }

    pub fn complex(&self) -> C2 {
        self.0.map(|x| Complex64::new(x, 0.0))
    }

    pub fn compose(&self, other: &SpinElement) -> SpinElement {
        Self(self.0 * other.0)
    }

    pub fn inverse(&self) -> SpinElement {
        let m = &self.0;
        Self(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    /// `max_w ‖M (w·τ) M⁻¹ − (Lw)·τ‖` over the three basis vectors.
    pub fn conjugation_residual(&self, l: &LorentzElement) -> f64 {
        let basis = CliffordBasis::standard();
        let m = self.complex();
        let m_inv = self.inverse().complex();
        (0..3)
            .map(|j| {
                let mut e = NVector::zero();
                e.0[j] = 1.0;
                let lhs = m * basis.slash(&e) * m_inv;
                let rhs = basis.slash(&l.apply(&e));
                max_abs(&(lhs - rhs))
            })
            .fold(0.0, f64::max)
    }

    /// Distance to `other` up to the global sign of the double cover.
    pub fn distance_up_to_sign(&self, other: &SpinElement) -> f64 {
        (self.0 - other.0).amax().min((self.0 + other.0).amax())
    }
}

/// Real 2×2 matrix `R(w)` with `w·τ = i R(w)`.
fn real_slash(w: &[f64; 3]) -> Matrix2<f64> {
    Matrix2::new(w[2], w[1] - w[0], w[0] + w[1], -w[2])
}

/// The `SL(2,ℝ)` element `M` with `M (w·τ) M⁻¹ = (Lw)·τ` for every `w`.
///
/// Solves `M R(e_j) = R(L e_j) M` for the three basis vectors as a 12×4
/// homogeneous system, takes the null vector, scales it to unit
/// determinant and fixes the sign by `tr M > 0` (falling back to the first
/// nonzero entry in row-major order when the trace vanishes).
pub fn spin_cover(l: &LorentzElement) -> Result<SpinElement> {
    let mut a = SMatrix::<f64, 12, 4>::zeros();
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let le = l.apply(&NVector::new(e[0], e[1], e[2]));
        let ra = real_slash(&e);
        let rb = real_slash(&[le.n0(), le.n1(), le.n2()]);
        for p in 0..2 {
            for q in 0..2 {
                let row = 4 * j + 2 * p + q;
                for ai in 0..2 {
                    for bi in 0..2 {
                        let col = 2 * ai + bi;
                        let mut c = 0.0;
                        if ai == p {
                            c += ra[(bi, q)];
                        }
                        if bi == q {
                            c -= rb[(p, ai)];
                        }
                        a[(row, col)] = c;
                    }
                }
            }
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::NotInGroup("singular value decomposition failed".into()))?;
    let sv = svd.singular_values;
    let (imin, smin) = sv
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let smax = sv.max();
    if smin > 1e-8 * smax.max(1.0) {
        return Err(Error::NotInGroup(format!(
            "no intertwiner: smallest singular value {smin:e}"
        )));
    }
    let row = v_t.row(imin);
    let mut m = Matrix2::new(row[0], row[1], row[2], row[3]);
    let det = m.determinant();
    if det <= 0.0 {
        return Err(Error::NotInGroup(format!(
            "intertwiner has determinant {det:e}, no real unit-determinant solution"
        )));
    }
    m /= det.sqrt();
    let tr = m.trace();
    let flip = if tr.abs() > 1e-12 {
        tr < 0.0
    } else {
        [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .map(|idx| m[idx])
            .find(|x| x.abs() > 1e-12)
            .map_or(false, |x| x < 0.0)
    };
    if flip {
        m = -m;
    }
    let spin = SpinElement::new(m)?;
    let residual = spin.conjugation_residual(l);
    if residual > SPIN_TOL * l.matrix().amax().max(1.0) {
        return Err(Error::NotInGroup(format!("conjugation residual {residual:e}")));
    }
    Ok(spin)
}
