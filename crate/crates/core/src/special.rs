//! Special functions: generalized Laguerre polynomials, Hermite functions,
//! log-gamma and the Laguerre coupling constants.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Degree and parameter `(n, α)` of a generalized Laguerre polynomial.
///
/// Constructors accept `α > -1`, the range where the recurrences and the
/// Gauss–Laguerre weight make sense. Theorem-level operations additionally
/// require `α > 0`, see [`LaguerreIndex::require_positive_alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreIndex {
    n: usize,
    alpha: f64,
}

impl LaguerreIndex {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return domain(format!("Laguerre parameter must be finite and > -1, got {alpha}"));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_degree(&self, n: usize) -> Self {
        Self { n, alpha: self.alpha }
    }

    pub fn require_positive_alpha(&self) -> Result<()> {
        if self.alpha <= 0.0 {
            return domain(format!("wavelet parameter must satisfy alpha > 0, got {}", self.alpha));
        }
        Ok(())
    }
}

/// Index `n` of the Hermite function `h_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HermiteIndex(pub usize);

impl HermiteIndex {
    pub fn n(&self) -> usize {
        self.0
    }
}

/// Atom selector shared by the wavelet and STFT regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase")]
pub enum AtomIndex {
    /// Laguerre wavelet `ψ_n^α`.
    Laguerre { n: usize, alpha: f64 },
    /// Hermite window `h_n`.
    Hermite { n: usize },
}

impl AtomIndex {
    pub fn n(&self) -> usize {
        match *self {
            AtomIndex::Laguerre { n, .. } | AtomIndex::Hermite { n } => n,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            AtomIndex::Laguerre { alpha, .. } => Some(alpha),
            AtomIndex::Hermite { .. } => None,
        }
    }
}

impl From<LaguerreIndex> for AtomIndex {
    fn from(idx: LaguerreIndex) -> Self {
        AtomIndex::Laguerre {
            n: idx.n,
            alpha: idx.alpha,
        }
    }
}

impl From<HermiteIndex> for AtomIndex {
    fn from(idx: HermiteIndex) -> Self {
        AtomIndex::Hermite { n: idx.0 }
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires finite x > 0, got {x}"));
    }
    Ok(ln_gamma(x))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `ln n!`, exact summation for small `n`.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Generalized Laguerre polynomial `L_n^α(t)` by upward recurrence in the degree.
pub fn laguerre(idx: LaguerreIndex, t: f64) -> f64 {
    let alpha = idx.alpha;
    let mut prev = 1.0;
    if idx.n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..idx.n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_0^α(t), …, L_{n_max}^α(t)`.
pub fn laguerre_all(n_max: usize, alpha: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + alpha - t);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `c_n^α = sqrt(Γ(n+α+1) / (Γ(α+1) n!))`, through log-gamma.
pub fn coupling_constant(idx: LaguerreIndex) -> f64 {
    let n = idx.n as f64;
    let a = idx.alpha;
    (0.5 * (ln_gamma(n + a + 1.0) - ln_gamma(a + 1.0) - ln_factorial(idx.n))).exp()
}

/// L²-normalized Hermite function with ground state `2^{1/4} e^{-πt²}`.
///
/// `h_n(t) = 2^{1/4} (2^n n!)^{-1/2} H_n(√(2π) t) e^{-πt²}` with the physicists'
/// Hermite polynomial `H_n`, evaluated by the normalized three-term recurrence.
pub fn hermite_fn(idx: HermiteIndex, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::SQRT_2.sqrt() * (-std::f64::consts::PI * t * t).exp();
    let scale = (4.0 * std::f64::consts::PI).sqrt() * t;
    for k in 0..idx.0 {
        let k = k as f64;
        let next = scale / (k + 1.0).sqrt() * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_0(t), …, h_{n_max}(t)`.
pub fn hermite_all(n_max: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(std::f64::consts::SQRT_2.sqrt() * (-std::f64::consts::PI * t * t).exp());
    let scale = (4.0 * std::f64::consts::PI).sqrt() * t;
    for k in 0..n_max {
        let prev = if k == 0 { 0.0 } else { out[k - 1] };
        let kf = k as f64;
        out.push(scale / (kf + 1.0).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * prev);
    }
    out
}
