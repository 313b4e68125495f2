//! Phase functions `a : B₀ → ℂ` entering `ψ'(k') = e^{i a(k')} M ψ(k)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::KPoint;

use super::conemap::ConeMap;

/// Values sampled on a regular `(k, μ)` grid, interpolated bilinearly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub k_range: (f64, f64),
    pub mu_range: (f64, f64),
    pub nk: usize,
    pub nmu: usize,
    /// Row-major in `k`: `values[i_mu * nk + i_k]`.
    pub values: Vec<(f64, f64)>,
}

impl PhaseTable {
    pub fn from_fn(
        k_range: (f64, f64),
        mu_range: (f64, f64),
        nk: usize,
        nmu: usize,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        if nk < 2 || nmu < 2 || k_range.1 <= k_range.0 || mu_range.1 <= mu_range.0 {
            return Err(Error::InvalidParameter("phase table needs at least a 2x2 grid".into()));
        }
        let mut values = Vec::with_capacity(nk * nmu);
        for j in 0..nmu {
            let mu = mu_range.0 + (mu_range.1 - mu_range.0) * j as f64 / (nmu - 1) as f64;
            for i in 0..nk {
                let k = k_range.0 + (k_range.1 - k_range.0) * i as f64 / (nk - 1) as f64;
                let v = f(k, mu);
                values.push((v.re, v.im));
            }
        }
        Ok(Self { k_range, mu_range, nk, nmu, values })
    }

    fn locate(x: f64, range: (f64, f64), n: usize) -> Option<(usize, f64)> {
        if !(range.0..=range.1).contains(&x) {
            return None;
        }
        let t = (x - range.0) / (range.1 - range.0) * (n - 1) as f64;
        let i = (t.floor() as usize).min(n - 2);
        Some((i, t - i as f64))
    }

    pub fn eval(&self, k: f64, mu: f64) -> Result<Complex64> {
        if self.values.len() != self.nk * self.nmu || self.nk < 2 || self.nmu < 2 {
            return Err(Error::InvalidParameter("malformed phase table".into()));
        }
        let (Some((i, s)), Some((j, t))) = (
            Self::locate(k, self.k_range, self.nk),
            Self::locate(mu, self.mu_range, self.nmu),
        ) else {
            return Err(Error::InvalidParameter(format!(
                "({k}, {mu}) lies outside the tabulated phase range"
            )));
        };
        let at = |i: usize, j: usize| {
            let (re, im) = self.values[j * self.nk + i];
            Complex64::new(re, im)
        };
        Ok(at(i, j) * (1.0 - s) * (1.0 - t)
            + at(i + 1, j) * s * (1.0 - t)
            + at(i, j + 1) * (1.0 - s) * t
            + at(i + 1, j + 1) * s * t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseBase {
    /// `a0 ω + a1 k + a2 μ + i·imag`.
    Linear { a0: f64, a1: f64, a2: f64, imag: f64 },
    Tabulated(PhaseTable),
}

impl PhaseBase {
    fn eval(&self, p: &KPoint) -> Result<Complex64> {
        match self {
            PhaseBase::Linear { a0, a1, a2, imag } => {
                Ok(Complex64::new(a0 * p.omega + a1 * p.k + a2 * p.mu, *imag))
            }
            PhaseBase::Tabulated(t) => t.eval(p.k, p.mu),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct PhaseTerm {
    base: Arc<PhaseBase>,
    sign: f64,
    pre: ConeMap,
}

/// A signed sum of base phases, each possibly pre-composed with a cone map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseFunction {
    terms: Vec<PhaseTerm>,
}

impl PhaseFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_base(base: PhaseBase) -> Self {
        Self { terms: vec![PhaseTerm { base: Arc::new(base), sign: 1.0, pre: ConeMap::identity() }] }
    }

    pub fn linear(a0: f64, a1: f64, a2: f64) -> Self {
        Self::from_base(PhaseBase::Linear { a0, a1, a2, imag: 0.0 })
    }

    pub fn tabulated(table: PhaseTable) -> Self {
        Self::from_base(PhaseBase::Tabulated(table))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, p: &KPoint) -> Result<Complex64> {
        self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, t| {
            let q = t.pre.on_momenta(p)?;
            Ok(acc + t.base.eval(&q)? * t.sign)
        })
    }

    /// `e^{i a(k)}`.
    pub fn factor(&self, p: &KPoint) -> Result<Complex64> {
        Ok((Complex64::i() * self.eval(p)?).exp())
    }

    pub fn add(&self, other: &PhaseFunction) -> PhaseFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PhaseFunction { terms }
    }

    pub fn negate(&self) -> PhaseFunction {
        PhaseFunction {
            terms: self.terms.iter().map(|t| PhaseTerm { sign: -t.sign, ..t.clone() }).collect(),
        }
    }

    /// `k ↦ a(map(k))`.
    pub fn precompose(&self, map: &ConeMap) -> PhaseFunction {
        PhaseFunction {
            terms: self
                .terms
                .iter()
                .map(|t| PhaseTerm { pre: map.then(&t.pre), ..t.clone() })
                .collect(),
        }
    }
}
