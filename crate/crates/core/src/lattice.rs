//! Position-space Dirac walks on periodic lattices.
//!
//! Fixed mass, on `ℤ_N`:
//!
//! ```text
//! A(μ) = [[T cos μ, −i sin μ], [−i sin μ, T† cos μ]],   T|x⟩ = |x+1⟩
//! ```
//!
//! Variable mass, on `ℤ_N × ℤ_{Nτ}` with `T` shifting the proper-time
//! coordinate τ and `S` shifting `x`:
//!
//! ```text
//! A = ½ [[(T† + T) S, T† − T], [T† − T, (T† + T) S†]]
//! ```
//!
//! Amplitudes are stored coin-major: the `R` plane followed by the `L`
//! plane, each laid out `x`-major with τ contiguous.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{eigensystem, walk_matrix, Spinor, C2};

const I: Complex64 = Complex64::new(0.0, 1.0);
const PAR_THRESHOLD: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkMode {
    FixedMass { mu: f64 },
    VariableMass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Stencil,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coin {
    R,
    L,
}

/// Which eigenvalue branch a packet is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    /// `e^{+iω}`.
    Plus,
    /// `e^{−iω}`; for `k > 0` this branch moves towards increasing `x`.
    Minus,
}

/// Map an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Lattice momentum of FFT bin `j` out of `n`, in `(−π, π]`.
pub fn grid_momentum(j: usize, n: usize) -> f64 {
    wrap_angle(2.0 * PI * j as f64 / n as f64)
}

fn check_size(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidLattice(format!("{what} = {n}, need at least 2")));
    }
    if n % 2 != 0 {
        return Err(Error::InvalidLattice(format!("{what} = {n}, need an even size")));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() || mu <= -PI || mu > PI {
        return Err(Error::InvalidParameter(format!("mass angle {mu} not in (−π, π]")));
    }
    Ok(())
}

/// The walk's state.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    mode: WalkMode,
    n: usize,
    n_tau: usize,
    amps: Vec<Complex64>,
}

impl SpinorField {
    pub fn zeros_fixed_mass(mu: f64, n: usize) -> Result<Self> {
        check_mu(mu)?;
        check_size(n, "lattice size")?;
        Ok(Self {
            mode: WalkMode::FixedMass { mu },
            n,
            n_tau: 1,
            amps: vec![Complex64::new(0.0, 0.0); 2 * n],
        })
    }

    pub fn zeros_variable_mass(n: usize, n_tau: usize) -> Result<Self> {
        check_size(n, "lattice size")?;
        check_size(n_tau, "proper-time size")?;
        Ok(Self {
            mode: WalkMode::VariableMass,
            n,
            n_tau,
            amps: vec![Complex64::new(0.0, 0.0); 2 * n * n_tau],
        })
    }

    /// A field with the same mode and shape as `op`.
    pub fn zeros_like(op: &WalkOperator) -> Self {
        Self {
            mode: op.mode,
            n: op.n,
            n_tau: op.n_tau,
            amps: vec![Complex64::new(0.0, 0.0); 2 * op.n * op.n_tau],
        }
    }

    pub fn from_amplitudes(mode: WalkMode, n: usize, n_tau: usize, amps: Vec<Complex64>) -> Result<Self> {
        let mut f = match mode {
            WalkMode::FixedMass { mu } => {
                if n_tau != 1 {
                    return Err(Error::InvalidLattice("fixed-mass fields carry no τ axis".into()));
                }
                Self::zeros_fixed_mass(mu, n)?
            }
            WalkMode::VariableMass => Self::zeros_variable_mass(n, n_tau)?,
        };
        if amps.len() != f.amps.len() {
            return Err(Error::Mismatch(format!(
                "expected {} amplitudes, got {}",
                f.amps.len(),
                amps.len()
            )));
        }
        f.amps = amps;
        Ok(f)
    }

    /// Independent standard-normal real and imaginary parts, normalized.
    pub fn random<R: Rng>(mut self, rng: &mut R) -> Self {
        for a in self.amps.iter_mut() {
            *a = Complex64::new(standard_normal(rng), standard_normal(rng));
        }
        self.normalize();
        self
    }

    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Proper-time size, `1` for fixed mass.
    pub fn n_tau(&self) -> usize {
        self.n_tau
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    fn plane_len(&self) -> usize {
        self.n * self.n_tau
    }

    #[inline]
    fn index(&self, coin: Coin, x: usize, tau: usize) -> usize {
        let c = match coin {
            Coin::R => 0,
            Coin::L => 1,
        };
        c * self.plane_len() + x * self.n_tau + tau
    }

    pub fn get(&self, coin: Coin, x: usize, tau: usize) -> Complex64 {
        self.amps[self.index(coin, x, tau)]
    }

    pub fn set(&mut self, coin: Coin, x: usize, tau: usize, value: Complex64) {
        let i = self.index(coin, x, tau);
        self.amps[i] = value;
    }

    pub fn spinor_at(&self, x: usize, tau: usize) -> Spinor {
        Spinor::new(self.get(Coin::R, x, tau), self.get(Coin::L, x, tau))
    }

    /// `Σ|ψ|²`, summed in storage order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinorField) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_{s,τ} |ψ(s, x, τ)|²` for every `x`.
    pub fn position_marginal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|x| {
                (0..self.n_tau)
                    .map(|t| self.get(Coin::R, x, t).norm_sqr() + self.get(Coin::L, x, t).norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// Cyclically translate by `(dx, dtau)`: `ψ'(x, τ) = ψ(x − dx, τ − dτ)`.
    pub fn translated(&self, dx: isize, dtau: isize) -> SpinorField {
        let mut out = self.clone();
        let (n, nt) = (self.n as isize, self.n_tau as isize);
        for coin in [Coin::R, Coin::L] {
            for x in 0..self.n {
                for t in 0..self.n_tau {
                    let sx = (x as isize - dx).rem_euclid(n) as usize;
                    let st = (t as isize - dtau).rem_euclid(nt) as usize;
                    out.set(coin, x, t, self.get(coin, sx, st));
                }
            }
        }
        out
    }

    /// Localized unit amplitude on one site and coin.
    pub fn localized(mut self, coin: Coin, x: usize, tau: usize) -> Self {
        self.amps.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        self.set(coin, x, tau, Complex64::new(1.0, 0.0));
        self
    }

    /// Single plane wave `e^{i(k x + μ τ)} χ` on grid bins `(jx, jτ)`,
    /// normalized.
    pub fn plane_wave(mut self, jx: usize, jtau: usize, chi: Spinor) -> Self {
        let k = 2.0 * PI * jx as f64 / self.n as f64;
        let m = 2.0 * PI * jtau as f64 / self.n_tau as f64;
        let norm = 1.0 / ((self.n * self.n_tau) as f64).sqrt();
        for x in 0..self.n {
            for t in 0..self.n_tau {
                let phase = Complex64::from_polar(norm, k * x as f64 + m * t as f64);
                self.set(Coin::R, x, t, phase * chi[0]);
                self.set(Coin::L, x, t, phase * chi[1]);
            }
        }
        self
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Parameters of a Gaussian wavepacket projected onto one band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub x0: f64,
    pub k0: f64,
    pub sigma_k: f64,
    pub band: Band,
}

/// Per-mode coin block of the fixed-mass walk.
///
/// The position-space operator carries `−i sin μ` off the diagonal, so its
/// Fourier block is [`walk_matrix`] at `−μ`.
pub fn fixed_mass_block(k: f64, mu: f64) -> C2 {
    walk_matrix(k, -mu).0
}

/// Per-mode coin block of the variable-mass walk at `(k, μ)`.
pub fn variable_mass_block(k: f64, mu: f64) -> C2 {
    walk_matrix(k, mu).0
}

impl SpinorField {
    /// Fixed-mass Gaussian packet `∝ Σ_k e^{−(k−k0)²/4σ²} e^{ik(x−x0)} χ_band(k)`.
    pub fn gaussian_packet(mu: f64, n: usize, packet: Packet) -> Result<Self> {
        let mut f = Self::zeros_fixed_mass(mu, n)?;
        for j in 0..n {
            let k = grid_momentum(j, n);
            let chi = band_vector(k, -mu, packet.band);
            let amp = gaussian_weight(k, packet.k0, packet.sigma_k)
                * Complex64::from_polar(1.0, -k * packet.x0);
            f.set(Coin::R, j, 0, amp * chi[0]);
            f.set(Coin::L, j, 0, amp * chi[1]);
        }
        let fft = FieldFft::new(n, 1);
        fft.inverse(&mut f.amps);
        f.normalize();
        Ok(f)
    }

    /// Variable-mass packet: Gaussian in both `k` (around `k0`) and `μ`
    /// (around `mu0`), projected onto one band.
    pub fn gaussian_packet_variable(
        n: usize,
        n_tau: usize,
        packet: Packet,
        mu0: f64,
        sigma_mu: f64,
    ) -> Result<Self> {
        let mut f = Self::zeros_variable_mass(n, n_tau)?;
        for jx in 0..n {
            let k = grid_momentum(jx, n);
            for jt in 0..n_tau {
                let m = grid_momentum(jt, n_tau);
                let chi = band_vector(k, m, packet.band);
                let amp = gaussian_weight(k, packet.k0, packet.sigma_k)
                    * gaussian_weight(m, mu0, sigma_mu)
                    * Complex64::from_polar(1.0, -k * packet.x0);
                f.set(Coin::R, jx, jt, amp * chi[0]);
                f.set(Coin::L, jx, jt, amp * chi[1]);
            }
        }
        let fft = FieldFft::new(n, n_tau);
        fft.inverse(&mut f.amps);
        f.normalize();
        Ok(f)
    }
}

fn gaussian_weight(k: f64, k0: f64, sigma: f64) -> f64 {
    let d = wrap_angle(k - k0);
    (-d * d / (4.0 * sigma * sigma)).exp()
}

fn band_vector(k: f64, mu: f64, band: Band) -> Spinor {
    let e = eigensystem(k, mu);
    match band {
        Band::Plus => e.plus.1,
        Band::Minus => e.minus.1,
    }
}

/// Unitary 1- or 2-dimensional FFT over one coin plane at a time.
#[derive(Clone)]
struct FieldFft {
    n: usize,
    n_tau: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_t: Arc<dyn Fft<f64>>,
    inv_t: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FieldFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldFft({}×{})", self.n, self.n_tau)
    }
}

impl FieldFft {
    fn new(n: usize, n_tau: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            n_tau,
            fwd_x: planner.plan_fft_forward(n),
            inv_x: planner.plan_fft_inverse(n),
            fwd_t: planner.plan_fft_forward(n_tau),
            inv_t: planner.plan_fft_inverse(n_tau),
        }
    }

    fn forward(&self, amps: &mut [Complex64]) {
        self.transform(amps, &self.fwd_x, &self.fwd_t);
    }

    fn inverse(&self, amps: &mut [Complex64]) {
        self.transform(amps, &self.inv_x, &self.inv_t);
    }

    fn transform(&self, amps: &mut [Complex64], fx: &Arc<dyn Fft<f64>>, ft: &Arc<dyn Fft<f64>>) {
        let (n, nt) = (self.n, self.n_tau);
        let scale = 1.0 / ((n * nt) as f64).sqrt();
        for plane in amps.chunks_mut(n * nt) {
            if nt > 1 {
                ft.process(plane);
                let mut column = vec![Complex64::new(0.0, 0.0); n];
                for t in 0..nt {
                    for x in 0..n {
                        column[x] = plane[x * nt + t];
                    }
                    fx.process(&mut column);
                    for x in 0..n {
                        plane[x * nt + t] = column[x];
                    }
                }
            } else {
                fx.process(plane);
            }
            plane.iter_mut().for_each(|a| *a *= scale);
        }
    }
}

/// A Dirac walk operator bound to one lattice shape.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    mode: WalkMode,
    n: usize,
    n_tau: usize,
    repr: Representation,
    blocks: Option<Arc<Vec<C2>>>,
    fft: Option<FieldFft>,
}

/// Fixed-mass walk `A(μ)` on `ℤ_N`.
pub fn build_fixed_mass_walk(mu: f64, n: usize, repr: Representation) -> Result<WalkOperator> {
    check_mu(mu)?;
    check_size(n, "lattice size")?;
    Ok(WalkOperator::assemble(WalkMode::FixedMass { mu }, n, 1, repr))
}

/// Variable-mass walk on `ℤ_N × ℤ_{Nτ}`.
pub fn build_variable_mass_walk(n: usize, n_tau: usize, repr: Representation) -> Result<WalkOperator> {
    check_size(n, "lattice size")?;
    check_size(n_tau, "proper-time size")?;
    Ok(WalkOperator::assemble(WalkMode::VariableMass, n, n_tau, repr))
}

impl WalkOperator {
    fn assemble(mode: WalkMode, n: usize, n_tau: usize, repr: Representation) -> Self {
        let mut op = Self {
            mode,
            n,
            n_tau,
            repr,
            blocks: None,
            fft: None,
        };
        if repr == Representation::Spectral {
            op.blocks = Some(Arc::new(op.mode_blocks()));
            op.fft = Some(FieldFft::new(n, n_tau));
        }
        op
    }

    /// Same walk with the other representation.
    pub fn with_representation(&self, repr: Representation) -> Self {
        Self::assemble(self.mode, self.n, self.n_tau, repr)
    }

    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_tau(&self) -> usize {
        self.n_tau
    }

    /// The 2×2 block acting on FFT bin `(jx, jτ)`.
    pub fn block(&self, jx: usize, jtau: usize) -> C2 {
        let k = grid_momentum(jx, self.n);
        match self.mode {
            WalkMode::FixedMass { mu } => fixed_mass_block(k, mu),
            WalkMode::VariableMass => variable_mass_block(k, grid_momentum(jtau, self.n_tau)),
        }
    }

    fn mode_blocks(&self) -> Vec<C2> {
        let mut out = Vec::with_capacity(self.n * self.n_tau);
        for jx in 0..self.n {
            for jt in 0..self.n_tau {
                out.push(self.block(jx, jt));
            }
        }
        out
    }

    /// Cached per-mode blocks (spectral representation only).
    pub fn cached_blocks(&self) -> Option<&[C2]> {
        self.blocks.as_deref().map(|v| v.as_slice())
    }

    fn check_field(&self, psi: &SpinorField) -> Result<()> {
        if psi.mode != self.mode || psi.n != self.n || psi.n_tau != self.n_tau {
            return Err(Error::Mismatch(format!(
                "operator {:?} on {}×{} vs field {:?} on {}×{}",
                self.mode, self.n, self.n_tau, psi.mode, psi.n, psi.n_tau
            )));
        }
        Ok(())
    }

    fn stencil_step(&self, psi: &SpinorField, out: &mut SpinorField) {
        let (n, nt) = (self.n, self.n_tau);
        let plane = n * nt;
        let (src_r, src_l) = psi.amps.split_at(plane);
        let (dst_r, dst_l) = out.amps.split_at_mut(plane);
        match self.mode {
            WalkMode::FixedMass { mu } => {
                let (c, s) = (mu.cos(), mu.sin());
                let mis = -I * s;
                let row = |x: usize, r: &mut Complex64, l: &mut Complex64| {
                    let xm = if x == 0 { n - 1 } else { x - 1 };
                    let xp = if x + 1 == n { 0 } else { x + 1 };
                    *r = src_r[xm] * c + mis * src_l[x];
                    *l = mis * src_r[x] + src_l[xp] * c;
                };
                if n >= PAR_THRESHOLD {
                    dst_r
                        .par_iter_mut()
                        .zip(dst_l.par_iter_mut())
                        .enumerate()
                        .for_each(|(x, (r, l))| row(x, r, l));
                } else {
                    for (x, (r, l)) in dst_r.iter_mut().zip(dst_l.iter_mut()).enumerate() {
                        row(x, r, l);
                    }
                }
            }
            WalkMode::VariableMass => {
                let row = |x: usize, rr: &mut [Complex64], ll: &mut [Complex64]| {
                    let xm = if x == 0 { n - 1 } else { x - 1 };
                    let xp = if x + 1 == n { 0 } else { x + 1 };
                    let r_here = &src_r[x * nt..(x + 1) * nt];
                    let r_left = &src_r[xm * nt..(xm + 1) * nt];
                    let l_here = &src_l[x * nt..(x + 1) * nt];
                    let l_right = &src_l[xp * nt..(xp + 1) * nt];
                    for t in 0..nt {
                        let tm = if t == 0 { nt - 1 } else { t - 1 };
                        let tp = if t + 1 == nt { 0 } else { t + 1 };
                        rr[t] = (r_left[tp] + r_left[tm] + l_here[tp] - l_here[tm]) * 0.5;
                        ll[t] = (r_here[tp] - r_here[tm] + l_right[tp] + l_right[tm]) * 0.5;
                    }
                };
                if plane >= PAR_THRESHOLD {
                    dst_r
                        .par_chunks_mut(nt)
                        .zip(dst_l.par_chunks_mut(nt))
                        .enumerate()
                        .for_each(|(x, (rr, ll))| row(x, rr, ll));
                } else {
                    for (x, (rr, ll)) in dst_r.chunks_mut(nt).zip(dst_l.chunks_mut(nt)).enumerate() {
                        row(x, rr, ll);
                    }
                }
            }
        }
    }

    /// Forward transform, per-mode multiply by `blocks[j]`, inverse transform.
    fn spectral_apply(&self, psi: &SpinorField, blocks: &[C2]) -> SpinorField {
        let fft = self.fft.as_ref().expect("spectral operator carries an FFT plan");
        let mut out = psi.clone();
        fft.forward(&mut out.amps);
        let plane = self.n * self.n_tau;
        let (r, l) = out.amps.split_at_mut(plane);
        let mul = |((a, b), m): ((&mut Complex64, &mut Complex64), &C2)| {
            let (x, y) = (*a, *b);
            *a = m[(0, 0)] * x + m[(0, 1)] * y;
            *b = m[(1, 0)] * x + m[(1, 1)] * y;
        };
        if plane >= PAR_THRESHOLD {
            r.par_iter_mut().zip(l.par_iter_mut()).zip(blocks.par_iter()).for_each(mul);
        } else {
            r.iter_mut().zip(l.iter_mut()).zip(blocks.iter()).for_each(mul);
        }
        fft.inverse(&mut out.amps);
        out
    }
}

/// `A ψ`.
pub fn step(op: &WalkOperator, psi: &SpinorField) -> Result<SpinorField> {
    op.check_field(psi)?;
    Ok(match op.repr {
        Representation::Stencil => {
            let mut out = SpinorField::zeros_like(op);
            op.stencil_step(psi, &mut out);
            out
        }
        Representation::Spectral => {
            let blocks = op.blocks.as_ref().expect("spectral operator caches its blocks");
            op.spectral_apply(psi, blocks)
        }
    })
}

/// `A^steps ψ`. The spectral path raises each block to the power in one
/// pass instead of iterating transforms.
pub fn evolve(op: &WalkOperator, psi: &SpinorField, steps: usize) -> Result<SpinorField> {
    op.check_field(psi)?;
    if steps == 0 {
        return Ok(psi.clone());
    }
    match op.repr {
        Representation::Stencil => {
            let mut cur = psi.clone();
            let mut next = SpinorField::zeros_like(op);
            for _ in 0..steps {
                op.stencil_step(&cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            Ok(cur)
        }
        Representation::Spectral => {
            let blocks = op.blocks.as_ref().expect("spectral operator caches its blocks");
            let powered: Vec<C2> = blocks.iter().map(|b| su2_power(b, steps)).collect();
            Ok(op.spectral_apply(psi, &powered))
        }
    }
}

/// `U^p` by repeated squaring.
pub fn su2_power(u: &C2, p: usize) -> C2 {
    let mut result = C2::identity();
    let mut base = *u;
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base = base * base;
        }
    }
    result
}
