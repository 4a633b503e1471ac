//! Gaussian quadrature rules.
//!
//! [`GaussLaguerreRule`] integrates `t^β e^{-t} p(t)` over `(0, ∞)` exactly for
//! polynomials `p` of degree below `2n`. Nodes come from the eigenvalues of
//! the Jacobi matrix, polished by Newton steps on the orthonormal Laguerre
//! recurrence. Weights are stored pre-multiplied by `e^{t} t^{-β}`, so a rule
//! is applied to the full integrand rather than to its smooth factor; this
//! keeps weights finite for rules with thousands of nodes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::ln_gamma;

const RESCALE: f64 = 1e150;

/// Gauss–Laguerre rule for the weight `t^β e^{-t}`.
#[derive(Debug, Clone)]
pub struct GaussLaguerreRule {
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLaguerreRule {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return domain("Gauss–Laguerre rule needs at least one node");
        }
        if !(beta > -1.0) || !beta.is_finite() {
            return domain(format!("Gauss–Laguerre parameter must be > -1, got {beta}"));
        }
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + beta + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + beta)).sqrt()).collect();
        let mut nodes = tridiagonal_eigenvalues(diag, &off)?;
        nodes.sort_by(f64::total_cmp);
        for t in nodes.iter_mut() {
            *t = polish_root(n, beta, *t);
        }
        let weights = nodes.iter().map(|&t| scaled_christoffel(n, beta, t)).collect();
        Ok(Self { beta, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights multiplied by `e^{t_i} t_i^{-β}`.
    pub fn scaled_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Approximates `∫_0^∞ f(t) dt` for `f(t) ≈ t^β e^{-t} p(t)`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| {
                let v = f(t);
                if v == Complex64::new(0.0, 0.0) {
                    v
                } else {
                    v * w
                }
            })
            .sum()
    }

    /// Shared, memoized rule.
    pub fn cached(n: usize, beta: f64) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(usize, u64), Arc<GaussLaguerreRule>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (n, beta.to_bits());
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(n, beta)?);
        cache
            .lock()
            .expect("rule cache poisoned")
            .entry(key)
            .or_insert_with(|| Arc::clone(&rule));
        Ok(rule)
    }
}

/// Orthonormal Laguerre values `(p_n(t), p_{n-1}(t))` up to a common positive factor.
fn orthonormal_pair(n: usize, beta: f64, t: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - t) * cur - (kf * (kf + beta)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + beta)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
        }
    }
    (cur, prev)
}

fn polish_root(n: usize, beta: f64, mut t: f64) -> f64 {
    let nf = n as f64;
    let couple = (nf * (nf + beta)).sqrt();
    for _ in 0..8 {
        let (p, q) = orthonormal_pair(n, beta, t);
        let denom = nf * p - couple * q;
        if denom == 0.0 {
            break;
        }
        let step = t * p / denom;
        let next = t - step;
        if !(next > 0.0) {
            break;
        }
        t = next;
        if step.abs() <= 4.0 * f64::EPSILON * t {
            break;
        }
    }
    t
}

/// `1 / Σ_{k<n} q_k(t)²` with `q_k = p_k(t) t^{β/2} e^{-t/2}` the orthonormal
/// Laguerre functions; equals the Christoffel number times `e^t t^{-β}`.
fn scaled_christoffel(n: usize, beta: f64, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    let mut log_scale = -0.5 * ln_gamma(beta + 1.0);
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - t) * cur - (kf * (kf + beta)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + beta)).sqrt();
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            sum /= RESCALE * RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    let ln_sum = sum.ln() + 2.0 * log_scale - t + beta * t.ln();
    (-ln_sum).exp()
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL iteration.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::Convergence {
                    sweeps: iterations,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Controls for adaptive node doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct QuadratureSettings {
    /// Stop once successive results agree to this relative tolerance.
    pub rel_tol: f64,
    /// Absolute floor for the agreement test.
    pub abs_tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            min_nodes: 16,
            max_nodes: 2048,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub value: Complex64,
    /// Difference between the last two refinements.
    pub error: f64,
    pub nodes: usize,
}

/// Adaptive Gauss–Laguerre integration of `∫_0^∞ f(ω) dω` for integrands
/// behaving like `ω^β e^{-rate·ω}` times a smooth factor.
pub fn integrate_half_line<F>(beta: f64, rate: f64, f: F, settings: &QuadratureSettings) -> Result<QuadratureValue>
where
    F: Fn(f64) -> Complex64,
{
    if !(rate > 0.0) || !rate.is_finite() {
        return domain(format!("decay rate must be positive, got {rate}"));
    }
    let apply = |n: usize| -> Result<Complex64> {
        let rule = GaussLaguerreRule::cached(n, beta)?;
        Ok(rule.integrate(|t| f(t / rate)) / rate)
    };
    let mut n = settings.min_nodes.max(2);
    let mut prev = apply(n)?;
    let mut last_error = f64::INFINITY;
    while 2 * n <= settings.max_nodes {
        n *= 2;
        let cur = apply(n)?;
        let error = (cur - prev).norm();
        let tolerance = settings.abs_tol.max(settings.rel_tol * cur.norm());
        if error <= tolerance {
            return Ok(QuadratureValue {
                value: cur,
                error,
                nodes: n,
            });
        }
        prev = cur;
        last_error = error;
    }
    Err(Error::Quadrature {
        estimate: last_error,
        tolerance: settings.abs_tol.max(settings.rel_tol * prev.norm()),
        nodes: n,
    })
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendreRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("Gauss–Legendre rule needs at least one node");
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp != 0.0 {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(x: f64) -> f64 {
        ln_gamma(x).exp()
    }

    #[test]
    fn laguerre_rule_integrates_moments() {
        for &beta in &[-0.5, 0.0, 0.5, 2.0] {
            let rule = GaussLaguerreRule::new(12, beta).unwrap();
            for k in 0..20 {
                let approx = rule
                    .integrate(|t| Complex64::new(t.powf(beta + k as f64) * (-t).exp(), 0.0))
                    .re;
                let exact = gamma(beta + k as f64 + 1.0);
                assert!(
                    ((approx - exact) / exact).abs() < 1e-12,
                    "beta={beta} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn large_rules_have_finite_weights() {
        let rule = GaussLaguerreRule::new(2048, 0.5).unwrap();
        assert_eq!(rule.len(), 2048);
        assert!(rule.scaled_weights().iter().all(|w| w.is_finite() && *w > 0.0));
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        // total mass Γ(1.5)
        let mass = rule.integrate(|t| Complex64::new(t.sqrt() * (-t).exp(), 0.0)).re;
        assert!((mass - gamma(1.5)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_oscillatory_integral() {
        // ∫ ω e^{-2ω} e^{iaω} dω = 1/(2 - ia)²
        let a = 7.0;
        let got = integrate_half_line(
            1.0,
            2.0,
            |w| Complex64::new(0.0, a * w).exp() * w * (-2.0 * w).exp(),
            &QuadratureSettings::default(),
        )
        .unwrap();
        let exact = Complex64::new(1.0, 0.0) / (Complex64::new(2.0, -a) * Complex64::new(2.0, -a));
        assert!((got.value - exact).norm() < 1e-11 * exact.norm());
    }

    #[test]
    fn adaptive_reports_failure() {
        let tight = QuadratureSettings {
            rel_tol: 1e-15,
            max_nodes: 32,
            ..QuadratureSettings::default()
        };
        let res = integrate_half_line(0.0, 1.0, |w| Complex64::new(0.0, 40.0 * w).exp() * (-w).exp(), &tight);
        assert!(matches!(res, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let rule = GaussLegendreRule::new(10).unwrap();
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        for k in 0..20 {
            let approx = rule.integrate(0.0, 2.0, |x| x.powi(k));
            let exact = 2.0_f64.powi(k + 1) / (k + 1) as f64;
            assert!(((approx - exact) / exact).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn tridiagonal_eigenvalues_small() {
        // tridiag(-1, 2, -1) of size 5: 2 - 2cos(kπ/6)
        let mut ev = tridiagonal_eigenvalues(vec![2.0; 5], &[-1.0; 4]).unwrap();
        ev.sort_by(f64::total_cmp);
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }
}
