use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measure::{DiscreteMeasure, MeasureRegime};
use crate::certify::SamplingBounds;
use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLaguerreRule;
use crate::special::{hermite_all, ln_factorial, ln_gamma, AtomIndex, LaguerreIndex};
use crate::stft::{hermite_half_width, GridSettings};

/// Off-diagonal Frobenius norm, relative to the full norm, at which the
/// Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Extreme eigenvalues of the finite-section frame operator.
///
/// These are bounds of `μ` restricted to the span of the first `N` test
/// functions: the true lower bound can only be smaller and the true upper
/// bound only larger. A punched measure may yield `lower ≤ 0` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameEstimate {
    pub lower: f64,
    pub upper: f64,
    pub dimension: usize,
}

impl FrameEstimate {
    /// The estimate as sampling constants, if the lower bound is positive.
    pub fn bounds(&self) -> Option<SamplingBounds> {
        SamplingBounds::new(self.lower, self.upper).ok()
    }
}

/// `c_m^α`-style normalization of `ψ̂_m^α`: `sqrt(2^{α+2} π m! / Γ(m+α+1))`.
fn wavelet_norm(m: usize, alpha: f64) -> f64 {
    (0.5 * ((alpha + 2.0) * 2.0_f64.ln() + PI.ln() + ln_factorial(m) - ln_gamma(m as f64 + alpha + 1.0))).exp()
}

/// `L_0^α(w), …, L_{n_max}^α(w)` at complex argument.
fn laguerre_all_complex(n_max: usize, alpha: f64, w: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + alpha - w);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - w) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Coefficients `⟨ψ_j^α, π(z) ψ_n^α⟩`, `j < dim`, in closed form.
///
/// With `p = 1 + s - ix` the pairing is `(2π)^{-1} c_j c_n s^{(α+1)/2}
/// ∫ ω^α e^{-pω} L_j^α(2ω) L_n^α(2sω) dω`. Rotating the contour to `ω = t/p`
/// leaves a polynomial of degree `j + n` against `t^α e^{-t}`, which a
/// Gauss–Laguerre rule with `⌈(j+n+1)/2⌉` nodes integrates exactly.
fn halfplane_coefficients(idx: LaguerreIndex, dim: usize, rule: &GaussLaguerreRule, z: Complex64) -> Vec<Complex64> {
    let (n, a) = (idx.n(), idx.alpha());
    let (x, s) = (z.re, z.im);
    let p = Complex64::new(1.0 + s, -x);
    let weights: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.scaled_weights())
        .map(|(&t, &w)| w * (a * t.ln() - t).exp())
        .collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    for (&t, &w) in rule.nodes().iter().zip(&weights) {
        let omega = t / p;
        let lj = laguerre_all_complex(dim - 1, a, 2.0 * omega);
        let ln = laguerre_all_complex(n, a, 2.0 * s * omega)[n];
        for (slot, l) in acc.iter_mut().zip(&lj) {
            *slot += w * l * ln;
        }
    }
    let prefactor = wavelet_norm(n, a) * s.powf(0.5 * (a + 1.0)) / (2.0 * PI) * p.powf(-(a + 1.0));
    acc.iter()
        .enumerate()
        .map(|(j, v)| v * prefactor * wavelet_norm(j, a))
        .collect()
}

/// Trapezoid evaluation of `⟨h_j, π(λ) h_n⟩ = ∫ h_j(t) h_n(t - x) e^{-2πiξt} dt`
/// on one grid shared by all lattice points.
struct TimeFreqTable {
    ts: Vec<f64>,
    basis: Vec<Vec<f64>>,
    n: usize,
    step: f64,
}

impl TimeFreqTable {
    fn new(n: usize, dim: usize, reach: f64, grid: &GridSettings) -> Result<Self> {
        if !(grid.step > 0.0) {
            return Err(Error::GridResolution(format!(
                "grid step must be positive, got {}",
                grid.step
            )));
        }
        let half = reach + hermite_half_width(n.max(dim - 1));
        let m = (half / grid.step).ceil() as i64;
        let ts: Vec<f64> = (-m..=m).map(|i| i as f64 * grid.step).collect();
        let basis: Vec<Vec<f64>> = ts.iter().map(|&t| hermite_all(dim - 1, t)).collect();
        let edge = basis[0]
            .iter()
            .chain(basis.last().unwrap())
            .fold(0.0_f64, |acc, v| acc.max(v * v));
        if edge > grid.tail_tol {
            return Err(Error::GridResolution(format!(
                "Hermite mass {edge:.3e} at grid edge exceeds {:.1e}",
                grid.tail_tol
            )));
        }
        Ok(Self {
            ts,
            basis,
            n,
            step: grid.step,
        })
    }

    fn coefficients(&self, z: Complex64) -> Vec<Complex64> {
        let (x, xi) = (z.re, z.im);
        let dim = self.basis[0].len();
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        let last = self.ts.len() - 1;
        for (i, (&t, row)) in self.ts.iter().zip(&self.basis).enumerate() {
            let window = hermite_all(self.n, t - x)[self.n];
            if window == 0.0 {
                continue;
            }
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            let phase = Complex64::from_polar(w * window, -2.0 * PI * xi * t);
            for (slot, &h) in acc.iter_mut().zip(row) {
                *slot += phase * h;
            }
        }
        acc.iter().map(|v| v * self.step).collect()
    }
}

/// Rows `(⟨e_j, π(λ) g⟩)_{j<dim}`, one per point of `mu`.
///
/// The test family `e_j` is `ψ_j^α` (half-plane) or `h_j` (time-frequency),
/// and the atom `g` is `ψ_n^α` or `h_n`.
pub fn atom_coefficients(
    mu: &DiscreteMeasure,
    atom: AtomIndex,
    dim: usize,
    grid: &GridSettings,
) -> Result<Vec<Vec<Complex64>>> {
    if dim == 0 {
        return domain("finite-section dimension must be positive");
    }
    match (mu.regime(), atom) {
        (MeasureRegime::Halfplane, AtomIndex::Laguerre { n, alpha }) => {
            let idx = LaguerreIndex::new(n, alpha)?;
            idx.require_positive_alpha()?;
            let nodes = (dim + n).div_ceil(2).max(1);
            let rule = GaussLaguerreRule::cached(nodes, alpha)?;
            Ok(mu
                .points()
                .par_iter()
                .map(|p| halfplane_coefficients(idx, dim, &rule, p.to_complex()))
                .collect())
        }
        (MeasureRegime::Timefreq, AtomIndex::Hermite { n }) => {
            let reach = mu.points().iter().fold(0.0_f64, |acc, p| acc.max(p.point[0].abs()));
            let table = TimeFreqTable::new(n, dim, reach, grid)?;
            Ok(mu
                .points()
                .par_iter()
                .map(|p| table.coefficients(p.to_complex()))
                .collect())
        }
        (regime, atom) => Err(Error::Config(format!(
            "atom {atom:?} does not belong to the {regime:?} regime"
        ))),
    }
}

/// `M[j,k] = Σ_λ w_λ c_j(λ) conj(c_k(λ))`, summed in point order.
fn gram_matrix(mu: &DiscreteMeasure, rows: &[Vec<Complex64>], dim: usize) -> Vec<Vec<Complex64>> {
    (0..dim)
        .into_par_iter()
        .map(|j| {
            (0..dim)
                .map(|k| {
                    mu.points()
                        .iter()
                        .zip(rows)
                        .map(|(p, c)| p.weight * c[j] * c[k].conj())
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Extreme eigenvalues of the `N × N` finite section of the frame operator of `mu`.
pub fn frame_bounds_estimate(
    mu: &DiscreteMeasure,
    atom: AtomIndex,
    dim: usize,
    grid: &GridSettings,
) -> Result<FrameEstimate> {
    let rows = atom_coefficients(mu, atom, dim, grid)?;
    estimate_from_rows(mu, &rows, dim)
}

pub(crate) fn estimate_from_rows(mu: &DiscreteMeasure, rows: &[Vec<Complex64>], dim: usize) -> Result<FrameEstimate> {
    if mu.is_empty() {
        return Ok(FrameEstimate {
            lower: 0.0,
            upper: 0.0,
            dimension: dim,
        });
    }
    let truncated: Vec<Vec<Complex64>> = rows.iter().map(|r| r[..dim].to_vec()).collect();
    let m = gram_matrix(mu, &truncated, dim);
    let eig = hermitian_eigenvalues(&m)?;
    Ok(FrameEstimate {
        lower: eig[0],
        upper: eig[dim - 1],
        dimension: dim,
    })
}

/// Eigenvalues, ascending, of a Hermitian matrix by cyclic Jacobi rotations
/// on its real symmetric embedding `[[Re, -Im], [Im, Re]]`.
pub fn hermitian_eigenvalues(m: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if m.iter().any(|row| row.len() != n) {
        return domain("matrix must be square");
    }
    let size = 2 * n;
    let mut a = vec![vec![0.0; size]; size];
    for j in 0..n {
        for k in 0..n {
            // average with the conjugate transpose to scrub rounding asymmetry
            let v = 0.5 * (m[j][k] + m[k][j].conj());
            a[j][k] = v.re;
            a[j + n][k + n] = v.re;
            a[j][k + n] = -v.im;
            a[j + n][k] = v.im;
        }
    }
    let total: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let off_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    s += v * v;
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= JACOBI_TOLERANCE * total || total == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                sweeps,
                residual: off / total,
            });
        }
        sweeps += 1;
        for p in 0..size - 1 {
            for q in p + 1..size {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..size {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..size).map(|i| a[i][i]).collect();
    diag.sort_by(f64::total_cmp);
    // every eigenvalue appears twice in the embedding
    Ok(diag.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}
