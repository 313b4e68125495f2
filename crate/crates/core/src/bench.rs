//! Stencil vs spectral timing with an equivalence gate.

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{build_fixed_mass_walk, build_variable_mass_walk, evolve, Representation, SpinorField, WalkOperator};
use crate::verify::GENERATOR;

pub const EQUIVALENCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub n: usize,
    /// `None` for the fixed-mass walk.
    pub n_tau: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub seed: u64,
    pub steps: usize,
    pub mu: f64,
    pub lattices: Vec<Lattice>,
    /// Representations to time; the equivalence gate always runs both.
    pub impls: Vec<Representation>,
    pub tol: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let fixed = |n| Lattice { n, n_tau: None };
        Self {
            seed: 7,
            steps: 1000,
            mu: 0.3,
            lattices: vec![fixed(1 << 10), fixed(1 << 14), fixed(1 << 18), Lattice { n: 256, n_tau: Some(256) }],
            impls: vec![Representation::Stencil, Representation::Spectral],
            tol: EQUIVALENCE_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchEntry {
    #[serde(rename = "impl")]
    pub implementation: Representation,
    #[serde(rename = "N")]
    pub n: usize,
    pub n_tau: Option<usize>,
    pub steps: usize,
    pub seconds: f64,
    pub sites_per_sec: f64,
    pub state_hash: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCheck {
    #[serde(rename = "N")]
    pub n: usize,
    pub n_tau: Option<usize>,
    pub max_abs_diff: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub generator: String,
    pub seed: u64,
    pub mu: f64,
    pub equivalence: Vec<EquivalenceCheck>,
    pub entries: Vec<BenchEntry>,
}

/// SHA-256 over the little-endian bytes of every amplitude.
pub fn state_hash(field: &SpinorField) -> String {
    let mut h = Sha256::new();
    for a in field.amplitudes() {
        h.update(a.re.to_le_bytes());
        h.update(a.im.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn setup(cfg: &BenchConfig, lattice: Lattice, seed: u64) -> Result<(WalkOperator, SpinorField)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (op, psi) = match lattice.n_tau {
        None => (
            build_fixed_mass_walk(cfg.mu, lattice.n, Representation::Stencil)?,
            SpinorField::zeros_fixed_mass(cfg.mu, lattice.n)?,
        ),
        Some(nt) => (
            build_variable_mass_walk(lattice.n, nt, Representation::Stencil)?,
            SpinorField::zeros_variable_mass(lattice.n, nt)?,
        ),
    };
    let mut psi = psi.random(&mut rng);
    psi.normalize();
    Ok((op, psi))
}

/// Runs both representations, aborts with [`Error::Accuracy`] if they
/// disagree, then reports timings for the configured representations.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    let mut equivalence = Vec::new();
    let mut entries = Vec::new();
    for (i, &lattice) in cfg.lattices.iter().enumerate() {
        let (stencil, psi) = setup(cfg, lattice, cfg.seed.wrapping_add(i as u64))?;
        let mut finals = Vec::new();
        for repr in [Representation::Stencil, Representation::Spectral] {
            let start = Instant::now();
            let op = stencil.with_representation(repr);
            let out = evolve(&op, &psi, cfg.steps)?;
            let seconds = start.elapsed().as_secs_f64();
            finals.push((repr, seconds, out));
        }
        let diff = finals[0].2.max_abs_diff(&finals[1].2);
        if !(diff <= cfg.tol) {
            return Err(Error::Accuracy(format!(
                "stencil and spectral evolutions differ by {diff:e} on N = {}",
                lattice.n
            )));
        }
        equivalence.push(EquivalenceCheck { n: lattice.n, n_tau: lattice.n_tau, max_abs_diff: diff, tol: cfg.tol });
        let sites = (lattice.n * lattice.n_tau.unwrap_or(1)) as f64;
        for (repr, seconds, out) in finals {
            if !cfg.impls.contains(&repr) {
                continue;
            }
            entries.push(BenchEntry {
                implementation: repr,
                n: lattice.n,
                n_tau: lattice.n_tau,
                steps: cfg.steps,
                seconds,
                sites_per_sec: sites * cfg.steps as f64 / seconds.max(1e-12),
                state_hash: state_hash(&out),
            });
        }
    }
    Ok(BenchReport { generator: GENERATOR.into(), seed: cfg.seed, mu: cfg.mu, equivalence, entries })
}
