//! Invariant suites run by `diracwalk verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fixed_mu::{exclusion_report, fixed_mu_l, fixed_mu_lplus, fixed_mu_transform, relativistic_limit_probe};
use crate::geometry::{nbar, nbar_jacobian, n_map, NVector, RadialMap};
use crate::lattice::{
    build_fixed_mass_walk, build_variable_mass_walk, step, Coin, Representation, SpinorField,
};
use crate::spectral::{
    clifford_check, dispersion, eigensystem, n_vector, walk_matrix, CliffordBasis, KPoint,
};
use crate::symmetry::{
    apply_frame_change, compose, inverse, make_frame_change, radial_defect,
    spin_cover, BoostPlane, ConeMap, FrameChange, LorentzElement, Mode, PhaseFunction,
};

pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.3)";

/// Names accepted by [`VerifyConfig::fault`].
pub const FAULT_TAU2: &str = "tau2";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    /// Test hook: `"tau2"` shifts every entry of `τ₂` by `1e−6`.
    pub fault: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 2024, samples: 1000, fault: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantResult {
    pub suite: String,
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub generator: String,
    pub seed: u64,
    pub samples: usize,
    pub fault: Option<String>,
    pub invariants: Vec<InvariantResult>,
    pub passed: bool,
}

struct Suite {
    name: &'static str,
    results: Vec<InvariantResult>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { name, results: Vec::new() }
    }

    fn record(&mut self, name: &str, max_residual: f64, tolerance: f64) {
        self.results.push(InvariantResult {
            suite: self.name.into(),
            name: name.into(),
            max_residual,
            tolerance,
            passed: max_residual.is_finite() && max_residual < tolerance,
        });
    }

    /// Records a boolean property as residual 0 (holds) or 1 (fails).
    fn record_flag(&mut self, name: &str, holds: bool) {
        self.record(name, if holds { 0.0 } else { 1.0 }, 0.5);
    }
}

/// Uniform point of `B₀` shrunk by `margin`, kept clear of the rim of `K`.
fn interior_point(rng: &mut ChaCha8Rng, margin: f64) -> KPoint {
    let h = FRAC_PI_2 - margin;
    loop {
        let p = KPoint::on_shell(rng.gen_range(-h..h), rng.gen_range(-h..h));
        if p.omega.cos().powi(2) > 1e-9 {
            return p;
        }
    }
}

fn random_lorentz(rng: &mut ChaCha8Rng, max_xi: f64) -> LorentzElement {
    LorentzElement::rotation(rng.gen_range(-PI..PI))
        .compose(&LorentzElement::boost(rng.gen_range(-max_xi..max_xi), BoostPlane::P01))
        .compose(&LorentzElement::rotation(rng.gen_range(-PI..PI)))
}

/// reciprocal map or a power-law variant `c (1 − r²)^(−p)` with
/// `c ∈ [0.5, 2)`, `p ∈ [0.75, 1.5)`.
fn random_radial(rng: &mut ChaCha8Rng) -> RadialMap {
    if rng.gen_bool(0.3) {
        RadialMap::reciprocal()
    } else {
        RadialMap::power(rng.gen_range(0.5..2.0), rng.gen_range(0.75..1.5)).expect("positive parameters")
    }
}

fn random_linear_phase(rng: &mut ChaCha8Rng) -> PhaseFunction {
    PhaseFunction::linear(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn lattice_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Suite> {
    let mut s = Suite::new("lattice-walk");
    let states = (cfg.samples / 100).clamp(2, 20);

    let mut drift: f64 = 0.0;
    let mut shift_comm: f64 = 0.0;
    let mut equiv: f64 = 0.0;
    for n in [4usize, 16, 256] {
        for _ in 0..states {
            let mu = rng.gen_range(-PI..PI);
            let stencil = build_fixed_mass_walk(mu, n, Representation::Stencil)?;
            let spectral = stencil.with_representation(Representation::Spectral);
            let psi = SpinorField::zeros_fixed_mass(mu, n)?.random(rng);
            let a = step(&stencil, &psi)?;
            let b = step(&spectral, &psi)?;
            drift = drift.max((a.norm() - psi.norm()).abs() / psi.norm());
            equiv = equiv.max(a.max_abs_diff(&b));
            let shifted = step(&stencil, &psi.translated(1, 0))?;
            shift_comm = shift_comm.max(shifted.max_abs_diff(&a.translated(1, 0)));
        }
    }
    for (n, nt) in [(4usize, 4usize), (16, 8)] {
        for _ in 0..states {
            let stencil = build_variable_mass_walk(n, nt, Representation::Stencil)?;
            let spectral = stencil.with_representation(Representation::Spectral);
            let psi = SpinorField::zeros_variable_mass(n, nt)?.random(rng);
            let a = step(&stencil, &psi)?;
            let b = step(&spectral, &psi)?;
            drift = drift.max((a.norm() - psi.norm()).abs() / psi.norm());
            equiv = equiv.max(a.max_abs_diff(&b));
            for (dx, dt) in [(1, 0), (0, 1)] {
                let shifted = step(&stencil, &psi.translated(dx, dt))?;
                shift_comm = shift_comm.max(shifted.max_abs_diff(&a.translated(dx, dt)));
            }
        }
    }
    s.record("unitarity", drift, 1e-12);
    s.record("translation covariance", shift_comm, 1e-12);
    s.record("spectral/stencil equivalence", equiv, 1e-10);

    let (n, nt) = (8usize, 8usize);
    let op = build_variable_mass_walk(n, nt, Representation::Stencil)?;
    let allowed = [(0isize, 1isize), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut escaped = 0.0_f64;
    for coin in [Coin::R, Coin::L] {
        let psi = SpinorField::zeros_variable_mass(n, nt)?.localized(coin, 4, 4);
        let out = step(&op, &psi)?;
        for x in 0..n {
            for t in 0..nt {
                let d = (x as isize - 4, t as isize - 4);
                if !allowed.contains(&d) {
                    escaped += out.spinor_at(x, t).norm_squared();
                }
            }
        }
    }
    s.record("locality (Cayley neighbours)", escaped, 1e-30);
    Ok(s)
}

fn spectral_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, basis: &CliffordBasis) -> Result<Suite> {
    let mut s = Suite::new("spectral");
    let g = ((cfg.samples as f64).sqrt() as usize).max(8);
    let mut phase: f64 = 0.0;
    let mut det: f64 = 0.0;
    for i in 0..g {
        for j in 0..g {
            let k = -PI + 2.0 * PI * (i as f64 + 0.5) / g as f64;
            let mu = -PI + 2.0 * PI * (j as f64 + 0.5) / g as f64;
            let m = walk_matrix(k, mu);
            let (a, b) = m.su2_eigenphases();
            let w = dispersion(k, mu);
            phase = phase.max((a - w).abs().max((b + w).abs()));
            det = det.max((m.det() - Complex64::new(1.0, 0.0)).norm());
        }
    }
    s.record("eigenphases = ±dispersion", phase, 1e-12);
    s.record("det = 1", det, 1e-13);

    let mut null: f64 = 0.0;
    let mut kernel: f64 = 0.0;
    for _ in 0..cfg.samples {
        let p = KPoint::on_shell(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        null = null.max(n_vector(&p).null_residual());
        let e = eigensystem(p.k, p.mu);
        if !e.degenerate {
            kernel = kernel.max((basis.slash(&n_vector(&p)) * e.plus.1).norm());
        }
    }
    s.record("null condition", null, 1e-12);
    s.record("kernel identity", kernel, 1e-12);

    let report = clifford_check(basis);
    s.record("Clifford anticommutators", report.max_anticommutator_residual(), 1e-15);
    s.record("sigma2 projector identity", report.projector_identity_residual, 1e-14);
    s.record("projector/eigen residual equivalence", report.residual_norm_mismatch, 1e-14);
    Ok(s)
}

fn geometry_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Suite> {
    let mut s = Suite::new("shell-geometry");
    let maps = [RadialMap::reciprocal(), RadialMap::Atanh, RadialMap::power(1.3, 0.8)?];
    let mut collinear: f64 = 0.0;
    let mut on_cone: f64 = 0.0;
    let mut round_k: f64 = 0.0;
    let mut round_k0: f64 = 0.0;
    for _ in 0..cfg.samples {
        let v = n_map(&interior_point(rng, 1e-3))?.vector();
        for f in &maps {
            let u = f.apply(&v)?;
            collinear = collinear.max(v.collinearity_residual(&u));
            on_cone = on_cone.max(u.null_residual());
            round_k = round_k.max((f.invert(&u)?.0 - v.0).norm() / v.euclidean_norm().max(1e-300));
        }
        let t = rng.gen_range(0.0..5.0);
        let a = rng.gen_range(-PI..PI);
        let w = NVector::new(t, t * a.cos(), t * a.sin());
        for f in &maps {
            let back = f.apply(&f.invert(&w)?)?;
            round_k0 = round_k0.max((back.0 - w.0).norm() / w.euclidean_norm().max(1.0));
        }
    }
    s.record("radial maps preserve rays", collinear, 1e-12);
    s.record("dilation lands on K0", on_cone, 1e-10);
    s.record("D^-1 D = id on K", round_k, 1e-10);
    s.record("D D^-1 = id on K0", round_k0, 1e-10);

    let f = RadialMap::reciprocal();
    let mut monotone = true;
    for _ in 0..(cfg.samples / 10).max(10) {
        let a = rng.gen_range(-PI..PI);
        let mut last = 0.0;
        for i in 1..200 {
            let t = i as f64 / 200.0;
            let norm = f.apply(&NVector::new(t, t * a.cos(), t * a.sin()))?.euclidean_norm();
            monotone &= norm > last;
            last = norm;
        }
    }
    s.record_flag("reciprocal map monotone along rays", monotone);

    let h = 1e-5;
    let mut jac: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (k, mu) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let d = |dk: f64, dm: f64| nbar(k + dk, mu + dm);
        let (ak, bk) = (d(h, 0.0), d(-h, 0.0));
        let (am, bm) = (d(0.0, h), d(0.0, -h));
        let j11 = (ak.0 - bk.0) / (2.0 * h);
        let j21 = (ak.1 - bk.1) / (2.0 * h);
        let j12 = (am.0 - bm.0) / (2.0 * h);
        let j22 = (am.1 - bm.1) / (2.0 * h);
        jac = jac.max((j11 * j22 - j12 * j21 - nbar_jacobian(k, mu)).abs());
    }
    s.record("nbar Jacobian matches finite differences", jac, 1e-6);
    Ok(s)
}

fn max_mode_distance(a: &FrameChange, b: &FrameChange, points: &[KPoint]) -> f64 {
    points
        .iter()
        .filter_map(|p| {
            let (ka, kb) = (a.kprime(p).ok()?, b.kprime(p).ok()?);
            let (pa, pb) = (a.phase().eval(&ka).ok()?, b.phase().eval(&kb).ok()?);
            Some((ka.k - kb.k).abs().max((ka.mu - kb.mu).abs()).max((pa - pb).norm()))
        })
        .fold(0.0, f64::max)
        .max(a.spin().distance_up_to_sign(b.spin()))
}

fn symmetry_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Suite> {
    let mut s = Suite::new("symmetry-group");
    let frames = 20;
    let per_frame = (cfg.samples).max(10);
    let mut residual: f64 = 0.0;
    let mut covariance: f64 = 0.0;
    let mut truncated = 0usize;
    let mut total = 0usize;
    for _ in 0..frames {
        let l = random_lorentz(rng, 1.0);
        let fc = make_frame_change(l, random_radial(rng), random_radial(rng), random_linear_phase(rng))?;
        let modes: Vec<Mode> = (0..per_frame)
            .map(|_| {
                let p = interior_point(rng, 1e-3);
                Mode { point: p, spinor: eigensystem(p.k, p.mu).plus.1 }
            })
            .collect();
        let out = apply_frame_change(&fc, &modes)?;
        truncated += out.truncated;
        total += modes.len();
        for m in &out.modes {
            residual = residual.max(m.residual);
            let ln = l.apply(&n_vector(&m.source));
            covariance = covariance.max(ln.collinearity_residual(&n_vector(&m.point)));
        }
    }
    s.record("eigen-equation preserved", residual, 1e-9);
    s.record("L n(k) collinear with n(k')", covariance, 1e-10);
    s.record("truncated fraction at |xi| <= 1", truncated as f64 / total as f64, 0.05);

    let points: Vec<KPoint> = (0..(cfg.samples / 10).max(20)).map(|_| interior_point(rng, 0.3)).collect();
    let small = |rng: &mut ChaCha8Rng| -> Result<FrameChange> {
        make_frame_change(random_lorentz(rng, 0.3), random_radial(rng), random_radial(rng), random_linear_phase(rng))
    };
    let mut axioms: f64 = 0.0;
    for _ in 0..10 {
        let (a, b, c) = (small(rng)?, small(rng)?, small(rng)?);
        let id = FrameChange::identity();
        axioms = axioms.max(max_mode_distance(&compose(&a, &id), &a, &points));
        axioms = axioms.max(max_mode_distance(&compose(&id, &a), &a, &points));
        axioms = axioms.max(max_mode_distance(&compose(&compose(&c, &b), &a), &compose(&c, &compose(&b, &a)), &points));
        axioms = axioms.max(max_mode_distance(&compose(&a, &inverse(&a)), &id, &points));
        axioms = axioms.max(max_mode_distance(&compose(&inverse(&a), &a), &id, &points));
    }
    s.record("group axioms under compose", axioms, 1e-9);

    let mut phase_rule: f64 = 0.0;
    for _ in 0..10 {
        let (a, b) = (small(rng)?, small(rng)?);
        let ab = compose(&b, &a);
        for p in &points {
            let Ok(target) = ab.kprime(p) else { continue };
            let Ok(mid) = b.kprime_inverse(&target) else { continue };
            let expected = b.phase().eval(&target)? + a.phase().eval(&mid)?;
            phase_rule = phase_rule.max((ab.phase().eval(&target)? - expected).norm());
        }
    }
    s.record("phase composition b + a o k''^-1", phase_rule, 1e-9);

    let mut homo: f64 = 0.0;
    let mut conj: f64 = 0.0;
    for _ in 0..100 {
        let (l1, l2) = (random_lorentz(rng, 1.0), random_lorentz(rng, 1.0));
        let lhs = spin_cover(&l1.compose(&l2))?;
        let rhs = spin_cover(&l1)?.compose(&spin_cover(&l2)?);
        homo = homo.max(lhs.distance_up_to_sign(&rhs));
        conj = conj.max(spin_cover(&l1)?.conjugation_residual(&l1));
    }
    s.record("spin cover homomorphism up to sign", homo, 1e-10);
    s.record("spin cover conjugation identity", conj, 1e-11);

    let samples: Vec<NVector> = points.iter().map(|p| n_map(p).map(|c| c.vector())).collect::<Result<_>>()?;
    let canonical = RadialMap::reciprocal();
    let mut semidirect: f64 = 0.0;
    for _ in 0..50 {
        let lorentz = ConeMap::conjugated(random_lorentz(rng, 0.5), canonical, canonical);
        let dil = ConeMap::dilate(random_radial(rng)).then(&ConeMap::contract(random_radial(rng)));
        let conjugated = lorentz.then(&dil).then(&lorentz.inverse());
        semidirect = semidirect.max(radial_defect(&conjugated, &samples).0);
    }
    s.record("D_K normal under nonlinear Lorentz", semidirect, 1e-10);
    Ok(s)
}

fn fixed_mu_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Suite> {
    let mut s = Suite::new("fixed-mass");
    let mut group: f64 = 0.0;
    let mut law: f64 = 0.0;
    let mut z2: f64 = 0.0;
    let mut closed: f64 = 0.0;
    let mut certified = true;
    let mut mu_pres: f64 = 0.0;
    for _ in 0..100 {
        let mu = rng.gen_range(-1.2..1.2);
        let (b1, b2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let l1 = fixed_mu_l(b1, mu)?;
        group = group.max(l1.metric_residual());
        let l12 = fixed_mu_l(b1 + b2, mu)?;
        law = law.max(l1.compose(&fixed_mu_l(b2, mu)?).distance(&l12) / l12.matrix().amax());
        let lp = fixed_mu_lplus(b1, mu)?;
        z2 = z2.max(lp.compose(&lp).distance(&LorentzElement::identity()));
        let r = exclusion_report(mu, b1)?;
        closed = closed.max(r.max_closed_form_error);
        certified &= r.certified;
    }
    for _ in 0..cfg.samples {
        let mu = loop {
            let m: f64 = rng.gen_range(-1.2..1.2);
            if m.abs() > 1e-3 {
                break m;
            }
        };
        let k = rng.gen_range(-1.2..1.2);
        let t = fixed_mu_l(rng.gen_range(-0.5..0.5), mu)?;
        if let Ok(p) = fixed_mu_transform(k, mu, &t) {
            mu_pres = mu_pres.max((p.mu - mu).abs());
        }
    }
    s.record("fixed-mass L in SO+(1,2)", group, 1e-12);
    s.record("one-parameter group law", law, 1e-12);
    s.record("L+^2 in the L subgroup", z2, 1e-12);
    s.record("exclusion closed forms", closed, 1e-12);
    s.record_flag("T^2 and L- excluded, L+ allowed", certified);
    s.record("mass component preserved", mu_pres, 1e-10);

    let probe = relativistic_limit_probe(&[0.1, 0.05, 0.025], 1e-3, 32, &[], 0.01)?;
    s.record_flag("relativistic limit not recovered", probe.bounded_away);
    Ok(s)
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let basis = match cfg.fault.as_deref() {
        Some(FAULT_TAU2) => CliffordBasis::perturbed(2, 1e-6),
        Some(other) => {
            return Err(crate::Error::InvalidParameter(format!(
                "unknown fault {other:?}, expected {FAULT_TAU2:?}"
            )))
        }
        None => CliffordBasis::standard(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let suites = [
        lattice_suite(cfg, &mut rng)?,
        spectral_suite(cfg, &mut rng, &basis)?,
        geometry_suite(cfg, &mut rng)?,
        symmetry_suite(cfg, &mut rng)?,
        fixed_mu_suite(cfg, &mut rng)?,
    ];
    let invariants: Vec<InvariantResult> = suites.into_iter().flat_map(|s| s.results).collect();
    let passed = invariants.iter().all(|r| r.passed);
    Ok(VerifyReport {
        generator: GENERATOR.into(),
        seed: cfg.seed,
        samples: cfg.samples,
        fault: cfg.fault.clone(),
        invariants,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        let report = run_verify(&VerifyConfig { samples: 200, ..Default::default() }).unwrap();
        for r in &report.invariants {
            assert!(r.passed, "{} / {}: {:e} >= {:e}", r.suite, r.name, r.max_residual, r.tolerance);
        }
    }

    #[test]
    fn tau2_fault_is_detected() {
        let cfg = VerifyConfig { samples: 50, fault: Some(FAULT_TAU2.into()), ..Default::default() };
        let report = run_verify(&cfg).unwrap();
        assert!(!report.passed);
        assert!(report
            .invariants
            .iter()
            .any(|r| r.name == "Clifford anticommutators" && !r.passed));
    }
}
