//! Momentum-space theory of the walk: the 2×2 walk matrices, the
//! dispersion relation, eigenvectors, the vector `n`, and the Clifford
//! basis `τ = (σ₂, −iσ₁, −iσ₃)` of signature `(+, −, −)`.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{region_of, NVector, Region};

pub type Spinor = Vector2<Complex64>;
pub type C2 = Matrix2<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Points with `sin ω` below this are degenerate for eigenvector extraction.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// A point `k = (ω, k, μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KPoint {
    pub omega: f64,
    pub k: f64,
    pub mu: f64,
}

impl KPoint {
    pub fn new(omega: f64, k: f64, mu: f64) -> Self {
        Self { omega, k, mu }
    }

    /// The point of the positive-frequency shell above `(k, μ)`.
    pub fn on_shell(k: f64, mu: f64) -> Self {
        Self::new(dispersion(k, mu), k, mu)
    }

    pub fn shell_residual(&self) -> f64 {
        (self.omega - dispersion(self.k, self.mu)).abs()
    }

    pub fn region(&self) -> Region {
        region_of(self.k, self.mu)
    }
}

/// A 2×2 complex coin-space matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix(pub C2);

impl CoinMatrix {
    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    }

    /// `‖U†U − I‖` (max-abs entry).
    pub fn unitarity_residual(&self) -> f64 {
        max_abs(&(self.0.adjoint() * self.0 - C2::identity()))
    }

    /// Eigenphases `(θ, −θ)` of a matrix in SU(2), `θ ∈ [0, π]`.
    ///
    /// `cos θ` comes from the trace and `sin θ` from the anti-Hermitian part,
    /// which stays accurate near the degenerate points `θ ∈ {0, π}`.
    pub fn su2_eigenphases(&self) -> (f64, f64) {
        let m = &self.0;
        let cos = 0.5 * (m[(0, 0)] + m[(1, 1)]).re;
        let anti = (m - m.adjoint()) * Complex64::new(0.5, 0.0);
        let sin = (anti.iter().map(|z| z.norm_sqr()).sum::<f64>() / 2.0).sqrt();
        let theta = sin.atan2(cos);
        (theta, -theta)
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        self.0 * s
    }
}

pub(crate) fn max_abs(m: &C2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The momentum-space walk block
/// `[[cos μ e^{−ik}, i sin μ], [i sin μ, cos μ e^{ik}]]`.
pub fn walk_matrix(k: f64, mu: f64) -> CoinMatrix {
    let (c, s) = (mu.cos(), mu.sin());
    let e = Complex64::from_polar(1.0, -k);
    CoinMatrix(C2::new(c * e, I * s, I * s, c * e.conj()))
}

/// `ω = arccos(cos μ cos k)` on the principal branch.
///
/// Evaluated as `atan2(sin ω, cos ω)` with
/// `sin²ω = sin²μ + cos²μ sin²k` so small frequencies keep full precision.
pub fn dispersion(k: f64, mu: f64) -> f64 {
    let (cm, sm) = (mu.cos(), mu.sin());
    let sin = sm.hypot(cm * k.sin());
    sin.atan2(cm * k.cos())
}

/// `n = (sin ω, cos μ sin k, sin μ)` for an on-shell point.
pub fn n_vector(p: &KPoint) -> NVector {
    NVector::new(p.omega.sin(), p.mu.cos() * p.k.sin(), p.mu.sin())
}

pub fn sigma(i: usize) -> C2 {
    match i {
        1 => C2::new(ZERO, ONE, ONE, ZERO),
        2 => C2::new(ZERO, -I, I, ZERO),
        3 => C2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    }
}

/// Generators of `Cl(1,2)` on the coin space together with the metric.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordBasis {
    pub tau: [C2; 3],
    pub eta: [f64; 3],
}

impl Default for CliffordBasis {
    fn default() -> Self {
        Self::standard()
    }
}

impl CliffordBasis {
    pub fn standard() -> Self {
        Self {
            tau: [sigma(2), sigma(1) * -I, sigma(3) * -I],
            eta: [1.0, -1.0, -1.0],
        }
    }

    /// Standard basis with every entry of `τ_index` shifted by `eps`;
    /// used for fault injection in the verification suites.
    pub fn perturbed(index: usize, eps: f64) -> Self {
        let mut b = Self::standard();
        b.tau[index] += C2::from_element(Complex64::new(eps, 0.0));
        b
    }

    /// `n_μ τ^μ = n0 τ0 − n1 τ1 − n2 τ2`.
    pub fn slash(&self, n: &NVector) -> C2 {
        (0..3).fold(C2::zeros(), |acc, i| {
            acc + self.tau[i] * Complex64::new(self.eta[i] * n.0[i], 0.0)
        })
    }
}

/// Outcome of [`clifford_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    /// `‖{τ_i, τ_j} − 2η_ij I‖` for every ordered pair.
    pub anticommutator_residuals: [[f64; 3]; 3],
    /// `‖σ₂ (n·τ) − (n1 σ₃ − n2 σ₁ + n0 I)‖` maximized over random `n`.
    pub projector_identity_residual: f64,
    /// `| ‖(n·τ)ψ‖ − ‖σ₂(n·τ)ψ‖ |` maximized over random `n`, `ψ`.
    pub residual_norm_mismatch: f64,
}

impl CliffordReport {
    pub fn max_anticommutator_residual(&self) -> f64 {
        self.anticommutator_residuals
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_anticommutator_residual() <= tol
            && self.projector_identity_residual <= tol
            && self.residual_norm_mismatch <= tol
    }
}

/// Checks all nine anticommutators and the equivalence between the two
/// forms of the kernel equation (multiplication by `σ₂`).
pub fn clifford_check(basis: &CliffordBasis) -> CliffordReport {
    let mut anticommutator_residuals = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let ac = basis.tau[i] * basis.tau[j] + basis.tau[j] * basis.tau[i];
            let expected = if i == j {
                C2::identity() * Complex64::new(2.0 * basis.eta[i], 0.0)
            } else {
                C2::zeros()
            };
            anticommutator_residuals[i][j] = max_abs(&(ac - expected));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_C11F);
    let s2 = sigma(2);
    let mut projector_identity_residual = 0.0_f64;
    let mut residual_norm_mismatch = 0.0_f64;
    for _ in 0..64 {
        let n = NVector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let lhs = s2 * basis.slash(&n);
        let rhs = sigma(3) * Complex64::new(n.n1(), 0.0) - sigma(1) * Complex64::new(n.n2(), 0.0)
            + C2::identity() * Complex64::new(n.n0(), 0.0);
        projector_identity_residual = projector_identity_residual.max(max_abs(&(lhs - rhs)));

        let psi = Spinor::new(
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let a = (basis.slash(&n) * psi).norm();
        let b = (rhs * psi).norm();
        residual_norm_mismatch = residual_norm_mismatch.max((a - b).abs());
    }

    CliffordReport {
        anticommutator_residuals,
        projector_identity_residual,
        residual_norm_mismatch,
    }
}

/// Eigen-decomposition of [`walk_matrix`] at one point.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem {
    pub omega: f64,
    /// Eigenvalue `e^{+iω}` and its eigenvector.
    pub plus: (Complex64, Spinor),
    /// Eigenvalue `e^{−iω}` and its eigenvector.
    pub minus: (Complex64, Spinor),
    /// Set when `sin ω` is below [`DEGENERACY_THRESHOLD`]; the vectors are
    /// then `|R⟩`, `|L⟩`.
    pub degenerate: bool,
}

/// Unit vector spanning the kernel of a singular real symmetric 2×2 matrix
/// `[[a, b], [b, d]]`, with its first nonzero component positive.
fn real_kernel(a: f64, b: f64, d: f64) -> Spinor {
    let c1 = (b, -a);
    let c2 = (d, -b);
    let (x, y) = if c1.0.hypot(c1.1) >= c2.0.hypot(c2.1) { c1 } else { c2 };
    let norm = x.hypot(y);
    let (mut x, mut y) = (x / norm, y / norm);
    let first = if x.abs() > 1e-15 { x } else { y };
    if first < 0.0 {
        x = -x;
        y = -y;
    }
    Spinor::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
}

/// Eigenvalues and eigenvectors of [`walk_matrix`]`(k, μ)`.
///
/// The `e^{+iω}` eigenvector spans the kernel of `n·τ` with
/// `n = (sin ω, cos μ sin k, sin μ)`; the `e^{−iω}` one spans the kernel
/// for `−sin ω` in the first slot. Both are real up to the phase
/// convention (first nonzero component real positive).
pub fn eigensystem(k: f64, mu: f64) -> Eigensystem {
    let omega = dispersion(k, mu);
    let sw = omega.sin();
    let plus_phase = Complex64::from_polar(1.0, omega);
    let minus_phase = plus_phase.conj();
    if sw < DEGENERACY_THRESHOLD {
        return Eigensystem {
            omega,
            plus: (plus_phase, Spinor::new(ONE, ZERO)),
            minus: (minus_phase, Spinor::new(ZERO, ONE)),
            degenerate: true,
        };
    }
    let (cm, sm) = (mu.cos(), mu.sin());
    let x = cm * k.sin();
    // σ₂·(n·τ) = n0 I + n1 σ₃ − n2 σ₁ for n = (±sin ω, x, sin μ).
    let plus = real_kernel(sw + x, -sm, sw - x);
    let minus = real_kernel(-sw + x, -sm, -sw - x);
    Eigensystem {
        omega,
        plus: (plus_phase, plus),
        minus: (minus_phase, minus),
        degenerate: false,
    }
}

/// Rank of `σ₂ (n·τ)` at an on-shell point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RankReport {
    pub singular_values: [f64; 2],
    pub rank: usize,
    /// Set for the cone tip, where the matrix vanishes.
    pub degenerate: bool,
}

pub const RANK_TOL: f64 = 1e-12;

pub fn rank_one_check(p: &KPoint) -> RankReport {
    let basis = CliffordBasis::standard();
    let m = sigma(2) * basis.slash(&n_vector(p));
    let sv = m.singular_values();
    let (hi, lo) = if sv[0] >= sv[1] { (sv[0], sv[1]) } else { (sv[1], sv[0]) };
    let rank = [hi, lo].iter().filter(|&&s| s > RANK_TOL).count();
    RankReport {
        singular_values: [hi, lo],
        rank,
        degenerate: rank == 0,
    }
}
