use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use diracwalk::geometry::{
    in_b0, n_inverse, n_map, nbar, nbar_jacobian, region_of, ConePoint, NVector, RadialMap, Region,
};
use diracwalk::spectral::{
    clifford_check, dispersion, eigensystem, n_vector, rank_one_check, sigma, walk_matrix, CliffordBasis,
    KPoint,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Roots of `λ² − tr λ + det = 0`.
fn eigenvalues(k: f64, mu: f64) -> (Complex64, Complex64) {
    let m = walk_matrix(k, mu).0;
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

#[test]
fn eigenphases_on_a_256_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..256 {
        for j in 0..256 {
            let k = -PI + 2.0 * PI * (i as f64 + 1.0) / 256.0;
            let mu = -PI + 2.0 * PI * (j as f64 + 1.0) / 256.0;
            let oracle = (mu.cos() * k.cos()).clamp(-1.0, 1.0).acos();
            let (a, b) = walk_matrix(k, mu).su2_eigenphases();
            worst = worst.max((a - oracle).abs()).max((b + oracle).abs());
        }
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn dispersion_and_n_vector_examples() {
    let p = KPoint::on_shell(FRAC_PI_3, FRAC_PI_6);
    assert!((p.omega - 1.122_963_93).abs() < 1e-8);
    let n = n_vector(&p);
    assert!((n.n0() - 0.901_387_8).abs() < 1e-7);
    assert!((n.n1() - 0.75).abs() < 1e-12 && (n.n2() - 0.5).abs() < 1e-15);
    assert!(n.null_residual() < 1e-12);
    let q = n_vector(&KPoint::on_shell(FRAC_PI_4, 0.0));
    assert!((q.n0() - 0.5f64.sqrt()).abs() < 1e-15 && (q.n1() - 0.5f64.sqrt()).abs() < 1e-15);
    let (l1, l2) = eigenvalues(FRAC_PI_3, FRAC_PI_6);
    assert!((l1.arg().abs() - p.omega).abs() < 1e-12 && (l2.arg().abs() - p.omega).abs() < 1e-12);
}

#[test]
fn eigensystem_examples() {
    let e = eigensystem(0.0, 0.0);
    assert!(e.degenerate);
    assert!((e.plus.0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let e = eigensystem(FRAC_PI_4, 0.0);
    assert!(!e.degenerate);
    assert!((e.plus.1[0]).norm() < 1e-15 && (e.plus.1[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn eigen_sweep_ten_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let basis = CliffordBasis::standard();
    for _ in 0..10_000 {
        let (k, mu) = (rng.gen_range(-FRAC_PI_2..FRAC_PI_2), rng.gen_range(-FRAC_PI_2..FRAC_PI_2));
        let p = KPoint::on_shell(k, mu);
        let e = eigensystem(k, mu);
        assert!(n_vector(&p).null_residual() < 1e-12);
        if e.degenerate {
            continue;
        }
        let m = walk_matrix(k, mu).0;
        let (lp, chi) = e.plus;
        let (lm, eta) = e.minus;
        assert!((basis.slash(&n_vector(&p)) * chi).norm() < 1e-12);
        assert!((m * chi - chi * lp).norm() < 1e-12);
        assert!((m * eta - eta * lm).norm() < 1e-12);
        assert!((chi.norm() - 1.0).abs() < 1e-14);
        assert!(chi.dotc(&eta).norm() < 1e-12);
        assert!(chi[0].re > 0.0 || (chi[0].norm() < 1e-15 && chi[1].re > 0.0));
    }
}

#[test]
fn clifford_relations_and_rank() {
    let r = clifford_check(&CliffordBasis::standard());
    assert!(r.max_anticommutator_residual() <= 1e-15);
    assert!(r.passed(1e-14));
    let b = CliffordBasis::standard();
    let sq = b.tau[2] * b.tau[2];
    assert!((sq + nalgebra::Matrix2::<Complex64>::identity()).iter().all(|z| z.norm() < 1e-15));
    assert!(!clifford_check(&CliffordBasis::perturbed(2, 1e-6)).passed(1e-12));

    assert_eq!(rank_one_check(&KPoint::on_shell(FRAC_PI_4, 0.0)).rank, 1);
    assert!(rank_one_check(&KPoint::on_shell(0.0, 0.0)).degenerate);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let p = KPoint::on_shell(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        if p.omega.sin() > 1e-6 {
            assert_eq!(rank_one_check(&p).rank, 1);
        }
    }
    // σ₂ maps one residual form to the other with equal norm
    let n = n_vector(&KPoint::on_shell(0.3, 0.2));
    let psi = nalgebra::Vector2::new(Complex64::new(0.3, -0.1), Complex64::new(0.7, 0.2));
    let a = (b.slash(&n) * psi).norm();
    let c = (sigma(2) * b.slash(&n) * psi).norm();
    assert!((a - c).abs() < 1e-15);
}

#[test]
fn nbar_examples() {
    assert_eq!(nbar(0.0, 0.0), (0.0, 0.0));
    let (a, b) = nbar(FRAC_PI_2, 0.0);
    assert!((a - 1.0).abs() < 1e-15 && b == 0.0);
    let (a, b) = nbar(FRAC_PI_3, FRAC_PI_6);
    assert!((a - 0.75).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
    assert!((nbar_jacobian(FRAC_PI_3, FRAC_PI_6) - 0.375).abs() < 1e-15);
    assert!(nbar_jacobian(FRAC_PI_2, 0.0).abs() < 1e-15);
    assert_eq!(region_of(0.0, 0.0), Region::B0);
    assert_eq!(region_of(FRAC_PI_2, 0.0), Region::Boundary);
    assert_eq!(region_of(3.0 * FRAC_PI_4, 0.0), Region::B1);
    assert_eq!(region_of(0.0, 3.0 * FRAC_PI_4), Region::B2);
    assert_eq!(region_of(-3.0 * FRAC_PI_4, 3.0 * FRAC_PI_4), Region::B3);
}

#[test]
fn n_inverse_examples() {
    let h = 0.5f64.sqrt();
    let p = n_inverse(&ConePoint::in_k(NVector::new(h, h, 0.0)).unwrap()).unwrap();
    assert!((p.omega - FRAC_PI_4).abs() < 1e-12 && (p.k - FRAC_PI_4).abs() < 1e-12 && p.mu == 0.0);
    assert!(n_inverse(&ConePoint::in_k(NVector::new(1.0, 1.0, 0.0)).unwrap()).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10_000 {
        let p = KPoint::on_shell(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q = n_inverse(&n_map(&p).unwrap()).unwrap();
        assert!((q.k - p.k).abs() < 1e-10 && (q.mu - p.mu).abs() < 1e-10 && (q.omega - p.omega).abs() < 1e-10);
        assert!(in_b0(q.k, q.mu));
    }
}

#[test]
fn reciprocal_map_examples() {
    let f = RadialMap::reciprocal();
    let h = 0.5f64.sqrt();
    let v = NVector::new(h, h, 0.0);
    let u = f.apply(&v).unwrap();
    assert!((u.0 - NVector::new(2.0 * h, 2.0 * h, 0.0).0).norm() < 1e-15);
    // quadratic-root oracle: λ = (−1 + √(1 + 4r²)) / (2r²)
    let r2: f64 = 2.0;
    let lambda = (-1.0 + (1.0 + 4.0 * r2).sqrt()) / (2.0 * r2);
    assert!((lambda - 0.5).abs() < 1e-15);
    assert!((f.invert(&u).unwrap().0 - v.0).norm() < 1e-15);
    assert_eq!(f.apply(&NVector::zero()).unwrap(), NVector::zero());
    assert!(f.apply(&NVector::new(1.0, 1.0, 0.0)).is_err());
    assert_eq!(RadialMap::canonical_dilation(), f);
}

#[test]
fn reciprocal_map_is_injective_and_monotone_on_samples() {
    let f = RadialMap::reciprocal();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let pts: Vec<NVector> = (0..200)
        .map(|_| n_map(&KPoint::on_shell(rng.gen_range(-1.4..1.4), rng.gen_range(-1.4..1.4))).unwrap().vector())
        .collect();
    let imgs: Vec<NVector> = pts.iter().map(|v| f.apply(v).unwrap()).collect();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if (pts[i].0 - pts[j].0).norm() > 1e-9 {
                assert!((imgs[i].0 - imgs[j].0).norm() > 0.0);
            }
        }
        let t = pts[i].scaled(0.5);
        assert!(f.apply(&t).unwrap().euclidean_norm() < imgs[i].euclidean_norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn null_condition_and_kernel(k in -PI..PI, mu in -PI..PI) {
        let p = KPoint::on_shell(k, mu);
        prop_assert!(n_vector(&p).null_residual() < 1e-12);
        prop_assert!((walk_matrix(k, mu).det() - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        prop_assert!((p.omega - (mu.cos() * k.cos()).clamp(-1.0, 1.0).acos()).abs() < 1e-12);
        prop_assert!((dispersion(k, mu) - dispersion(-k, -mu)).abs() < 1e-15);
    }

    #[test]
    fn radial_maps_round_trip(k in -1.55f64..1.55, mu in -1.55f64..1.55, t in 0.0f64..20.0, a in -PI..PI) {
        let v = n_map(&KPoint::on_shell(k, mu)).unwrap().vector();
        prop_assume!(1.0 - v.n0() * v.n0() > 1e-9);
        for f in [RadialMap::reciprocal(), RadialMap::power(1.7, 1.2).unwrap()] {
            let u = f.apply(&v).unwrap();
            prop_assert!(u.null_residual() < 1e-10);
            prop_assert!(v.collinearity_residual(&u) < 1e-12);
            prop_assert!((f.invert(&u).unwrap().0 - v.0).norm() < 1e-10 * v.euclidean_norm().max(1.0));
            let w = NVector::new(t, t * a.cos(), t * a.sin());
            prop_assert!((f.apply(&f.invert(&w).unwrap()).unwrap().0 - w.0).norm() < 1e-10 * w.euclidean_norm().max(1.0));
        }
    }

    #[test]
    fn jacobian_matches_finite_differences(k in -PI..PI, mu in -PI..PI) {
        let h = 1e-5;
        let (ak, bk) = (nbar(k + h, mu), nbar(k - h, mu));
        let (am, bm) = (nbar(k, mu + h), nbar(k, mu - h));
        let det = ((ak.0 - bk.0) * (am.1 - bm.1) - (am.0 - bm.0) * (ak.1 - bk.1)) / (4.0 * h * h);
        prop_assert!((det - nbar_jacobian(k, mu)).abs() < 1e-6);
    }
}
