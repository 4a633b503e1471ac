//! Short-time Fourier transform with Hermite windows.
//!
//! Time-frequency shifts act as `π(x + iξ) g(t) = e^{2πiξt} g(t - x)` and
//! `V_g f(z) = ⟨f, π(z) g⟩ = ∫ f(t) conj(π(z) g(t)) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::partition::PartitionSpec;
use crate::special::{hermite_fn, ln_factorial, HermiteIndex};

/// A point `x + iξ` of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct TimeFreqPoint {
    x: f64,
    xi: f64,
}

impl TimeFreqPoint {
    pub const ORIGIN: TimeFreqPoint = TimeFreqPoint { x: 0.0, xi: 0.0 };

    pub fn new(x: f64, xi: f64) -> Result<Self> {
        if !x.is_finite() || !xi.is_finite() {
            return domain(format!("time-frequency point must be finite, got ({x}, {xi})"));
        }
        Ok(Self { x, xi })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.xi)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.xi)
    }
}

impl TryFrom<[f64; 2]> for TimeFreqPoint {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<TimeFreqPoint> for [f64; 2] {
    fn from(z: TimeFreqPoint) -> Self {
        [z.x, z.xi]
    }
}

/// A time-domain signal with essentially bounded support.
pub trait Signal: Sync {
    fn eval(&self, t: f64) -> Complex64;
    /// Center of the essential support.
    fn center(&self) -> f64;
    /// Half-width of the essential support around [`Signal::center`].
    fn half_width(&self) -> f64;
}

/// The Hermite function `h_n` as a signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteWindow {
    pub idx: HermiteIndex,
}

impl HermiteWindow {
    pub fn new(n: usize) -> Self {
        Self { idx: HermiteIndex(n) }
    }
}

impl Signal for HermiteWindow {
    fn eval(&self, t: f64) -> Complex64 {
        Complex64::new(hermite_fn(self.idx, t), 0.0)
    }

    fn center(&self) -> f64 {
        0.0
    }

    fn half_width(&self) -> f64 {
        hermite_half_width(self.idx.n())
    }
}

/// Grid half-width `max(6, 4√(n+1))` for `h_n`.
pub fn hermite_half_width(n: usize) -> f64 {
    (4.0 * ((n + 1) as f64).sqrt()).max(6.0)
}

/// `π(w) f`.
#[derive(Debug, Clone, Copy)]
pub struct TimeFreqShift<'a, S: ?Sized> {
    base: &'a S,
    at: TimeFreqPoint,
}

impl<'a, S: Signal + ?Sized> TimeFreqShift<'a, S> {
    pub fn new(base: &'a S, at: TimeFreqPoint) -> Self {
        Self { base, at }
    }
}

impl<S: Signal + ?Sized> Signal for TimeFreqShift<'_, S> {
    fn eval(&self, t: f64) -> Complex64 {
        let v = self.base.eval(t - self.at.x);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        v * Complex64::from_polar(1.0, 2.0 * PI * self.at.xi * t)
    }

    fn center(&self) -> f64 {
        self.base.center() + self.at.x
    }

    fn half_width(&self) -> f64 {
        self.base.half_width()
    }
}

/// A Hermite window placed at a point of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StftAtom {
    pub idx: HermiteIndex,
    pub location: TimeFreqPoint,
}

/// Sampling grid for the trapezoidal STFT oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GridSettings {
    pub step: f64,
    /// Largest admissible `|f|²` or `|π(z)g|²` at the grid ends.
    pub tail_tol: f64,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            step: 1.0 / 32.0,
            tail_tol: 1e-12,
        }
    }
}

/// Symmetric grid `[-T, T]` covering both signals.
fn covering_half_width<F, G>(f: &F, g: &G) -> f64
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    let f_reach = f.center().abs() + f.half_width();
    let g_reach = g.center().abs() + g.half_width();
    f_reach.max(g_reach)
}

/// `V_g f(z) = ⟨f, π(z) g⟩` by trapezoidal quadrature on a uniform grid.
///
/// A verification oracle, independent of [`kernel_hermite_closed`].
pub fn stft_oracle<F, G>(f: &F, g: &G, z: TimeFreqPoint, settings: &GridSettings) -> Result<Complex64>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    if !(settings.step > 0.0) {
        return Err(Error::GridResolution(format!(
            "grid step must be positive, got {}",
            settings.step
        )));
    }
    let shifted = TimeFreqShift::new(g, z);
    let half = covering_half_width(f, &shifted);
    let m = (half / settings.step).ceil() as i64;
    let edge = m as f64 * settings.step;
    for t in [-edge, edge] {
        let tail = f.eval(t).norm_sqr().max(shifted.eval(t).norm_sqr());
        if tail > settings.tail_tol {
            return Err(Error::GridResolution(format!(
                "signal mass {tail:.3e} at grid edge t = {t} exceeds {:.1e}",
                settings.tail_tol
            )));
        }
    }
    let sum: Complex64 = (-m..=m)
        .map(|i| {
            let t = i as f64 * settings.step;
            let w = if i == -m || i == m { 0.5 } else { 1.0 };
            f.eval(t) * shifted.eval(t).conj() * w
        })
        .sum();
    Ok(sum * settings.step)
}

/// `C_n = π^{n/2} / √(n!)`.
pub fn hermite_kernel_constant(n: usize) -> f64 {
    (0.5 * n as f64 * PI.ln() - 0.5 * ln_factorial(n)).exp()
}

/// `|V_{h_n} h_0(z)| = C_n |z|^n e^{-π|z|²/2}`.
pub fn kernel_hermite_closed(idx: HermiteIndex, z: TimeFreqPoint) -> f64 {
    let r2 = z.x * z.x + z.xi * z.xi;
    let n = idx.n();
    let gauss = (-0.5 * PI * r2).exp();
    if n == 0 {
        return gauss;
    }
    hermite_kernel_constant(n) * r2.powf(0.5 * n as f64) * gauss
}

/// `H_n(z, w) = |z|^{2n}/|z - w|^{2n} · e^{-π(|z|² - |z - w|²)}`.
pub fn h_stft(idx: HermiteIndex, z: TimeFreqPoint, w: TimeFreqPoint) -> Result<f64> {
    let n = idx.n();
    let z2 = z.x * z.x + z.xi * z.xi;
    let dx = z.x - w.x;
    let dxi = z.xi - w.xi;
    let d2 = dx * dx + dxi * dxi;
    if n > 0 && d2 == 0.0 {
        return Err(Error::Singular(format!("H_n is undefined at z = w for n = {n}")));
    }
    let gauss = (-PI * (z2 - d2)).exp();
    if n == 0 {
        return Ok(gauss);
    }
    Ok((z2 / d2).powi(n as i32) * gauss)
}

/// `4^n e^{-πR²/2}`, the bound on `H_n(re^{iφ}, R/2)` for `r ≥ R`, `|φ| ≤ π/5`.
pub fn lemma_stft_bound(idx: HermiteIndex, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("lemma bound needs R > 0, got {radius}"));
    }
    Ok((idx.n() as f64 * 4.0_f64.ln() - 0.5 * PI * radius * radius).exp())
}

/// Five sectors of half-width `π/5` with points `u_k = (R/2) e^{2πik/5}`.
pub fn pentagon_partition(radius: f64) -> Result<PartitionSpec> {
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("hole radius must be positive, got {radius}"));
    }
    Ok(PartitionSpec::regular(5, 0.5 * radius, None, radius))
}

/// `∫ |V_g f(z)|² dz` over the disk `|z| ≤ radius` by a tensor trapezoid grid,
/// with [`stft_oracle`] supplying the integrand.
pub fn moyal_energy<F, G>(f: &F, g: &G, radius: f64, step: f64, grid: &GridSettings) -> Result<f64>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    if !(radius > 0.0 && step > 0.0) {
        return domain("moyal_energy needs positive radius and step");
    }
    let m = (radius / step).ceil() as i64;
    let rows: Result<Vec<f64>> = (-m..=m)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            let mut acc = 0.0;
            for j in -m..=m {
                let xi = j as f64 * step;
                if x.hypot(xi) > radius {
                    continue;
                }
                let v = stft_oracle(f, g, TimeFreqPoint::new(x, xi)?, grid)?;
                acc += v.norm_sqr();
            }
            Ok(acc)
        })
        .collect();
    Ok(rows?.iter().sum::<f64>() * step * step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(x: f64, xi: f64) -> TimeFreqPoint {
        TimeFreqPoint::new(x, xi).unwrap()
    }

    #[test]
    fn oracle_unit_norm_at_origin() {
        let h0 = HermiteWindow::new(0);
        let v = stft_oracle(&h0, &h0, TimeFreqPoint::ORIGIN, &GridSettings::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-13);
    }

    #[test]
    fn closed_form_matches_oracle_sample() {
        let grid = GridSettings::default();
        let h0 = HermiteWindow::new(0);
        for n in 0..=4 {
            let hn = HermiteWindow::new(n);
            for &(x, xi) in &[(0.3, -0.2), (-1.1, 0.8), (1.7, 1.2)] {
                let z = tf(x, xi);
                let oracle = stft_oracle(&h0, &hn, z, &grid).unwrap().norm();
                let closed = kernel_hermite_closed(HermiteIndex(n), z);
                assert!(
                    (oracle - closed).abs() < 1e-10,
                    "n={n} z=({x},{xi}): {oracle} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn kernel_constant_from_gamma_integral() {
        // C_n² · π ∫_0^∞ ρ^n e^{-πρ} dρ = C_n² n!/π^n = 1
        for n in 0..10 {
            let c = hermite_kernel_constant(n);
            let moment = (ln_factorial(n) - n as f64 * PI.ln()).exp();
            assert!((c * c * moment - 1.0).abs() < 1e-13);
        }
        assert_eq!(kernel_hermite_closed(HermiteIndex(0), TimeFreqPoint::ORIGIN), 1.0);
    }

    #[test]
    fn covariance_sample() {
        let grid = GridSettings::default();
        let f = HermiteWindow::new(1);
        let g = HermiteWindow::new(2);
        let w = tf(0.7, -0.4);
        let z = tf(-0.3, 0.9);
        let shifted = TimeFreqShift::new(&f, w);
        let lhs = stft_oracle(&shifted, &g, z, &grid).unwrap();
        let diff = tf(z.x - w.x, z.xi - w.xi);
        let phase = Complex64::from_polar(1.0, -2.0 * PI * w.x * (z.xi - w.xi));
        let rhs = phase * stft_oracle(&f, &g, diff, &grid).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn oracle_rejects_coarse_support() {
        struct Wide;
        impl Signal for Wide {
            fn eval(&self, t: f64) -> Complex64 {
                Complex64::new((-0.01 * t * t).exp(), 0.0)
            }
            fn center(&self) -> f64 {
                0.0
            }
            fn half_width(&self) -> f64 {
                3.0
            }
        }
        let res = stft_oracle(
            &Wide,
            &HermiteWindow::new(0),
            TimeFreqPoint::ORIGIN,
            &GridSettings::default(),
        );
        assert!(matches!(res, Err(Error::GridResolution(_))));
    }

    #[test]
    fn h_stft_examples() {
        let h = h_stft(HermiteIndex(0), tf(1.0, 0.0), tf(0.5, 0.0)).unwrap();
        assert!((h - (-0.75 * PI).exp()).abs() < 1e-15);
        for n in 0..4 {
            let v = h_stft(HermiteIndex(n), tf(0.4, -1.3), TimeFreqPoint::ORIGIN).unwrap();
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(h_stft(HermiteIndex(2), tf(0.4, 0.1), tf(0.4, 0.1)).is_err());
    }

    #[test]
    fn lemma_stft_bound_values() {
        let b = lemma_stft_bound(HermiteIndex(0), 1.0).unwrap();
        assert!((b - (-PI / 2.0).exp()).abs() < 1e-15);
        assert!((b - 0.20788).abs() < 1e-5);
        let mut last = f64::INFINITY;
        for i in 1..50 {
            let v = lemma_stft_bound(HermiteIndex(2), 0.1 * i as f64).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(lemma_stft_bound(HermiteIndex(0), 0.0).is_err());
    }

    #[test]
    fn pentagon_layout() {
        let p = pentagon_partition(1.4).unwrap();
        assert_eq!(p.sectors, 5);
        assert_eq!(p.points[0], [0.7, 0.0]);
        assert!((p.half_width() - PI / 5.0).abs() < 1e-15);
        for k in 0..5 {
            assert_eq!(p.sector_of(p.point(k)), k);
        }
        assert!(pentagon_partition(0.0).is_err());
    }
}
