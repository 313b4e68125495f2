//! Symmetries of the fixed-mass walk: the subgroup of `SO⁺(1,2)` that
//! preserves the mass component, and why its generator is not the
//! `1+1` Lorentz generator.
//!
//! Component index 2 is the mass row throughout.

use nalgebra::{Matrix3, Vector2};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{in_b0, n_inverse, n_map, ConePoint, REPRESENTABLE_MARGIN};
use crate::spectral::KPoint;
use crate::symmetry::{dsr_linear_limit, LorentzElement, DEFAULT_FD_STEP};

const SINGULAR_COS: f64 = 1e-12;

fn check_cos(mu: f64) -> Result<()> {
    if mu.cos().abs() < SINGULAR_COS {
        return Err(Error::SingularInput(format!("S(μ) is singular at μ = {mu}")));
    }
    Ok(())
}

/// Columns `v = (1, −cos μ, sin μ)`, `u = (1, cos μ, sin μ)`,
/// `w = (sin μ, 0, 1)`.
pub fn build_s(mu: f64) -> Result<Matrix3<f64>> {
    check_cos(mu)?;
    let (c, s) = (mu.cos(), mu.sin());
    Ok(Matrix3::new(1.0, 1.0, s, -c, c, 0.0, s, s, 1.0))
}

pub fn build_d(beta: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new((-beta).exp(), beta.exp(), 1.0))
}

pub fn build_f() -> Matrix3<f64> {
    Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0)
}

fn conjugate_by_s(mu: f64, inner: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let s = build_s(mu)?;
    let s_inv = s
        .try_inverse()
        .ok_or_else(|| Error::SingularInput(format!("S(μ) is singular at μ = {mu}")))?;
    Ok(s * inner * s_inv)
}

/// `S D(β) S⁻¹`.
pub fn fixed_mu_l(beta: f64, mu: f64) -> Result<LorentzElement> {
    LorentzElement::new(conjugate_by_s(mu, &build_d(beta))?)
}

/// `S F D(β) S⁻¹`; at `β = 0` this is `S F S⁻¹`.
pub fn fixed_mu_lplus(beta: f64, mu: f64) -> Result<LorentzElement> {
    LorentzElement::new(conjugate_by_s(mu, &(build_f() * build_d(beta)))?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Identity,
    Plus,
}

/// An element of the fixed-mass symmetry group.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FixedMuFrame {
    pub mu: f64,
    pub beta: f64,
    pub parity: Parity,
}

impl FixedMuFrame {
    pub fn new(mu: f64, beta: f64, parity: Parity) -> Result<Self> {
        if mu.sin() == 0.0 || mu.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidParameter(format!(
                "fixed-mass frames need μ in (−π/2, π/2) without 0, got {mu}"
            )));
        }
        Ok(Self { mu, beta, parity })
    }

    pub fn matrix(&self) -> Result<LorentzElement> {
        match self.parity {
            Parity::Identity => fixed_mu_l(self.beta, self.mu),
            Parity::Plus => fixed_mu_lplus(self.beta, self.mu),
        }
    }

    pub fn transform(&self, k: f64) -> Result<KPoint> {
        fixed_mu_transform(k, self.mu, &self.matrix()?)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntryCheck {
    /// Top-left entry from the matrix product.
    pub entry: f64,
    pub closed_form: f64,
    pub orthochronous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExclusionReport {
    pub mu: f64,
    pub beta: f64,
    /// `T±² = S O±² S⁻¹`.
    pub t2_plus: EntryCheck,
    pub t2_minus: EntryCheck,
    /// `L₋ = S N₋ S⁻¹`.
    pub l_minus: EntryCheck,
    /// `L₊ = S N₊ S⁻¹`.
    pub l_plus: EntryCheck,
    pub t2_matrix: [[f64; 3]; 3],
    /// Largest deviation of any closed form from its matrix product.
    pub max_closed_form_error: f64,
    /// `T±²` and `L₋` fail while `L₊` passes.
    pub certified: bool,
}

/// `N± = [[0, ±e^β, 0], [±e^{−β}, 0, 0], [0, 0, −1]]`.
pub fn build_n(beta: f64, sign: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, sign * beta.exp(), 0.0, sign * (-beta).exp(), 0.0, 0.0, 0.0, 0.0, -1.0)
}

/// `O± = [[0, ±e^β, 0], [∓e^{−β}, 0, 0], [0, 0, 1]]`.
pub fn build_o(beta: f64, sign: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, sign * beta.exp(), 0.0, -sign * (-beta).exp(), 0.0, 0.0, 0.0, 0.0, 1.0)
}

/// Orthochronicity of the candidate extensions of the fixed-mass group.
pub fn exclusion_report(mu: f64, beta: f64) -> Result<ExclusionReport> {
    check_cos(mu)?;
    let (c, t) = (mu.cos(), mu.tan());
    let sec2 = 1.0 / (c * c);
    let n_plus = build_n(beta, 1.0);
    let n_minus = build_n(beta, -1.0);
    let o_plus = build_o(beta, 1.0);
    let o_minus = build_o(beta, -1.0);

    let entry = |m: &Matrix3<f64>| -> Result<f64> { Ok(conjugate_by_s(mu, m)?[(0, 0)]) };
    let t2_closed = -(3.0 - (2.0 * mu).cos()) / (2.0 * c * c);
    let t2p = conjugate_by_s(mu, &(o_plus * o_plus))?;
    let t2m = entry(&(o_minus * o_minus))?;
    let lm = entry(&n_minus)?;
    let lp = entry(&n_plus)?;
    let check = |e: f64, closed: f64| EntryCheck { entry: e, closed_form: closed, orthochronous: e >= 1.0 };
    let t2_plus = check(t2p[(0, 0)], t2_closed);
    let t2_minus = check(t2m, t2_closed);
    let l_minus = check(lm, -sec2 * beta.cosh() + t * t);
    let l_plus = check(lp, sec2 * beta.cosh() + t * t);
    let max_closed_form_error = [t2_plus, t2_minus, l_minus, l_plus]
        .iter()
        .map(|e| (e.entry - e.closed_form).abs())
        .fold(0.0, f64::max);
    let certified = !t2_plus.orthochronous
        && !t2_minus.orthochronous
        && !l_minus.orthochronous
        && l_plus.orthochronous;
    let mut t2_matrix = [[0.0; 3]; 3];
    for (i, row) in t2_matrix.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = t2p[(i, j)];
        }
    }
    Ok(ExclusionReport {
        mu,
        beta,
        t2_plus,
        t2_minus,
        l_minus,
        l_plus,
        t2_matrix,
        max_closed_form_error,
        certified,
    })
}

/// `φ = sin μ / (T n(k, μ))₂`.
pub fn phi_scale(k: f64, mu: f64, t: &LorentzElement) -> Result<f64> {
    let s = mu.sin();
    if s == 0.0 {
        return Err(Error::UndefinedScale("sin μ = 0".into()));
    }
    if !in_b0(k, mu) {
        return Err(Error::InvalidParameter(format!("({k}, {mu}) is not in B0")));
    }
    let n = n_map(&KPoint::on_shell(k, mu))?.vector();
    let denom = t.apply(&n).n2();
    if denom.abs() < 1e-300 || !(s / denom).is_finite() {
        return Err(Error::UndefinedScale(format!("mass row of T n vanishes at k = {k}")));
    }
    Ok(s / denom)
}

/// `k ↦ n⁻¹(φ T n(k))`; the mass component is preserved.
///
/// Images with `φ < 0` lie on the past sheet of the cone and are reported
/// as truncated, as are images on the rim of `K`.
pub fn fixed_mu_transform(k: f64, mu: f64, t: &LorentzElement) -> Result<KPoint> {
    let phi = phi_scale(k, mu, t)?;
    if phi <= 0.0 {
        return Err(Error::Truncated(format!("φ = {phi} sends k = {k} to the past cone")));
    }
    let v = t.apply(&n_map(&KPoint::on_shell(k, mu))?.vector()).scaled(phi);
    if v.n0() <= 0.0 || 1.0 - v.n0() * v.n0() <= REPRESENTABLE_MARGIN {
        return Err(Error::Truncated(format!("image n0 = {} is not representable", v.n0())));
    }
    n_inverse(&ConePoint::in_k(v)?)
}

/// `k_j = −π/2 + π (j + ½) / count`.
pub fn probe_grid(count: usize) -> Vec<f64> {
    use std::f64::consts::{FRAC_PI_2, PI};
    (0..count).map(|j| -FRAC_PI_2 + PI * (j as f64 + 0.5) / count as f64).collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeneratorRow {
    pub mu: f64,
    pub k: f64,
    pub omega: f64,
    /// Richardson-extrapolated `d(ω′, k′)/dβ` at `β = 0`.
    pub omega_dot: f64,
    pub k_dot: f64,
    /// `‖(ω̇, k̇) − (k, ω)‖`.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub mu: f64,
    /// Root-mean-square deviation over the grid.
    pub deviation_norm: f64,
    pub max_deviation: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StructuralCheck {
    pub mu: f64,
    /// `ω̇` at `k = 0`.
    pub omega_dot: f64,
    /// `k̇ / ω` at `k = 0`.
    pub k_dot_over_omega: f64,
    /// `φ(0, μ, 0)`.
    pub phi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastRow {
    pub xi: f64,
    pub jacobian: [[f64; 2]; 2],
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub beta_step: f64,
    pub grid_points: usize,
    pub summaries: Vec<ProbeSummary>,
    pub structural: Vec<StructuralCheck>,
    pub contrast: Vec<ContrastRow>,
    pub lower_bound: f64,
    /// Every deviation norm exceeds `threshold`.
    pub bounded_away: bool,
    pub threshold: f64,
    #[serde(skip)]
    pub rows: Vec<GeneratorRow>,
}

fn image(k: f64, mu: f64, beta: f64) -> Result<Vector2<f64>> {
    let p = fixed_mu_transform(k, mu, &fixed_mu_l(beta, mu)?)?;
    Ok(Vector2::new(p.omega, p.k))
}

fn central(k: f64, mu: f64, h: f64) -> Result<Vector2<f64>> {
    Ok((image(k, mu, h)? - image(k, mu, -h)?) / (2.0 * h))
}

/// `d(ω′, k′)/dβ` at `β = 0` by Richardson-extrapolated central
/// differences.
pub fn generator_at(k: f64, mu: f64, h: f64) -> Result<Vector2<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("β step must be > 0, got {h}")));
    }
    let coarse = central(k, mu, h)?;
    let fine = central(k, mu, h / 2.0)?;
    let rich = (fine * 4.0 - coarse) / 3.0;
    let scale = rich.norm();
    if (coarse - rich).norm() > 0.1 * scale && scale > 1e-12 {
        return Err(Error::Accuracy(format!(
            "Richardson estimate disagrees by more than 10% at (k, μ) = ({k}, {mu}); reduce the β step"
        )));
    }
    Ok(rich)
}

/// Deviation of the fixed-mass generator from the `1+1` Lorentz
/// generator `(ω̇, k̇) = (k, ω)` as `μ → 0`, with the nonlinear boost of the
/// variable-mass walk as contrast.
pub fn relativistic_limit_probe(
    mu_list: &[f64],
    beta_step: f64,
    grid_points: usize,
    contrast_xi: &[f64],
    threshold: f64,
) -> Result<ProbeReport> {
    if grid_points == 0 || mu_list.is_empty() {
        return Err(Error::InvalidParameter("probe needs masses and grid points".into()));
    }
    for &mu in mu_list {
        FixedMuFrame::new(mu, 0.0, Parity::Identity)?;
    }
    let grid = probe_grid(grid_points);
    let mut rows = Vec::with_capacity(mu_list.len() * grid_points);
    let mut summaries = Vec::with_capacity(mu_list.len());
    let mut structural = Vec::with_capacity(mu_list.len());
    for &mu in mu_list {
        let block: Vec<GeneratorRow> = grid
            .par_iter()
            .map(|&k| {
                let g = generator_at(k, mu, beta_step)?;
                let p = KPoint::on_shell(k, mu);
                let deviation = (g - Vector2::new(k, p.omega)).norm();
                Ok(GeneratorRow { mu, k, omega: p.omega, omega_dot: g[0], k_dot: g[1], deviation })
            })
            .collect::<Result<_>>()?;
        let rms = (block.iter().map(|r| r.deviation * r.deviation).sum::<f64>() / block.len() as f64).sqrt();
        let max = block.iter().map(|r| r.deviation).fold(0.0, f64::max);
        summaries.push(ProbeSummary { mu, deviation_norm: rms, max_deviation: max });
        rows.extend(block);

        let g0 = generator_at(0.0, mu, beta_step)?;
        let omega0 = KPoint::on_shell(0.0, mu).omega;
        structural.push(StructuralCheck {
            mu,
            omega_dot: g0[0],
            k_dot_over_omega: g0[1] / omega0,
            phi: phi_scale(0.0, mu, &fixed_mu_l(0.0, mu)?)?,
        });
    }
    let contrast = contrast_xi
        .iter()
        .map(|&xi| {
            let j = dsr_linear_limit(xi, DEFAULT_FD_STEP)?;
            let expected = nalgebra::Matrix2::new(xi.cosh(), xi.sinh(), xi.sinh(), xi.cosh());
            Ok(ContrastRow {
                xi,
                jacobian: [[j[(0, 0)], j[(0, 1)]], [j[(1, 0)], j[(1, 1)]]],
                deviation: (j - expected).amax(),
            })
        })
        .collect::<Result<_>>()?;
    let lower_bound = summaries.iter().map(|s| s.deviation_norm).fold(f64::INFINITY, f64::min);
    Ok(ProbeReport {
        beta_step,
        grid_points,
        summaries,
        structural,
        contrast,
        lower_bound,
        bounded_away: lower_bound > threshold,
        threshold,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_matrices() {
        let s = build_s(0.0).unwrap();
        assert_eq!(s, Matrix3::new(1.0, 1.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!(build_d(0.0), Matrix3::identity());
        assert_eq!(build_f() * build_f(), Matrix3::identity());
        assert!(build_s(std::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn eigenvectors_of_l() {
        let (beta, mu) = (0.4, 0.3);
        let l = fixed_mu_l(beta, mu).unwrap();
        let (c, s) = (mu.cos(), mu.sin());
        let u = nalgebra::Vector3::new(1.0, c, s);
        let v = nalgebra::Vector3::new(1.0, -c, s);
        let w = nalgebra::Vector3::new(s, 0.0, 1.0);
        assert!((l.matrix() * u - u * beta.exp()).amax() < 1e-12);
        assert!((l.matrix() * v - v * (-beta).exp()).amax() < 1e-12);
        assert!((l.matrix() * w - w).amax() < 1e-12);
    }

    #[test]
    fn exclusion_at_zero_mass() {
        let r = exclusion_report(0.0, 0.3).unwrap();
        assert!((r.t2_plus.closed_form + 1.0).abs() < 1e-15);
        assert!(r.max_closed_form_error < 1e-12);
        assert!(r.certified);
    }

    #[test]
    fn identity_has_unit_scale() {
        let phi = phi_scale(0.2, 0.4, &LorentzElement::identity()).unwrap();
        assert!((phi - 1.0).abs() < 1e-15);
        assert!(matches!(
            phi_scale(0.2, 0.0, &LorentzElement::identity()),
            Err(Error::UndefinedScale(_))
        ));
    }

    #[test]
    fn transform_preserves_mass() {
        let l = fixed_mu_l(0.25, 0.4).unwrap();
        let p = fixed_mu_transform(0.3, 0.4, &l).unwrap();
        assert!((p.mu - 0.4).abs() < 1e-12);
        assert!((p.omega - (0.4f64.cos() * p.k.cos()).acos()).abs() < 1e-12);
    }

    #[test]
    fn zero_rapidity_is_identity() {
        let p = fixed_mu_transform(0.3, 0.4, &fixed_mu_l(0.0, 0.4).unwrap()).unwrap();
        assert!((p.k - 0.3).abs() < 1e-13);
    }
}
