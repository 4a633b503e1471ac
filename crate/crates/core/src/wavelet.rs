//! Laguerre wavelets on the Hardy space of the upper half-plane.
//!
//! Signals live in the Fourier domain on `(0, ∞)`. The pairing is
//! `⟨f, g⟩ = (1/2π) ∫_0^∞ f̂(ω) conj(ĝ(ω)) dω` and the time-scale shift
//! `π(x + is)` acts as `ω ↦ s^{1/2} e^{-ixω} ĝ(sω)`. Under this pairing the
//! wavelets `ψ_n^α` below are orthonormal and the isometry constant of the
//! wavelet transform is `∫ |ψ̂(ξ)|² dξ/ξ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::geometry::{rho_disk, DiskPoint, UpperHalfPoint};
use crate::partition::PartitionSpec;
use crate::quadrature::{integrate_half_line, GaussLegendreRule, QuadratureSettings};
use crate::special::{coupling_constant, laguerre, ln_factorial, ln_gamma, LaguerreIndex};

/// A Fourier-domain signal supported on `(0, ∞)`.
///
/// `decay` and `power` describe the envelope `ω^power e^{-decay·ω}` and steer
/// the choice of Gauss–Laguerre rule; they do not need to be exact, but the
/// closer they are the fewer nodes the oracle needs.
pub trait FrequencyProfile: Sync {
    /// Value at `ω > 0`.
    fn eval(&self, omega: f64) -> Complex64;
    fn decay(&self) -> f64;
    fn power(&self) -> f64;
}

/// The Laguerre wavelet `ψ_n^α` in the Fourier domain.
#[derive(Debug, Clone, Copy)]
pub struct LaguerreWavelet {
    idx: LaguerreIndex,
    ln_norm: f64,
}

impl LaguerreWavelet {
    pub fn new(idx: LaguerreIndex) -> Result<Self> {
        idx.require_positive_alpha()?;
        let a = idx.alpha();
        let ln_norm =
            0.5 * ((a + 2.0) * 2.0_f64.ln() + PI.ln() + ln_factorial(idx.n()) - ln_gamma(idx.n() as f64 + a + 1.0));
        Ok(Self { idx, ln_norm })
    }

    pub fn index(&self) -> LaguerreIndex {
        self.idx
    }

    fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let envelope = (self.ln_norm + 0.5 * self.idx.alpha() * t.ln() - t).exp();
        envelope * laguerre(self.idx, 2.0 * t)
    }
}

impl FrequencyProfile for LaguerreWavelet {
    fn eval(&self, omega: f64) -> Complex64 {
        Complex64::new(self.value(omega), 0.0)
    }

    fn decay(&self) -> f64 {
        1.0
    }

    fn power(&self) -> f64 {
        0.5 * self.idx.alpha()
    }
}

/// `π(z) f` for a Fourier-domain profile `f`.
#[derive(Debug, Clone, Copy)]
pub struct TimeScaleShift<'a, P: ?Sized> {
    base: &'a P,
    at: UpperHalfPoint,
}

impl<'a, P: FrequencyProfile + ?Sized> TimeScaleShift<'a, P> {
    pub fn new(base: &'a P, at: UpperHalfPoint) -> Self {
        Self { base, at }
    }
}

impl<P: FrequencyProfile + ?Sized> FrequencyProfile for TimeScaleShift<'_, P> {
    fn eval(&self, omega: f64) -> Complex64 {
        let s = self.at.s();
        let v = self.base.eval(s * omega);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        v * Complex64::from_polar(s.sqrt(), -self.at.x() * omega)
    }

    fn decay(&self) -> f64 {
        self.at.s() * self.base.decay()
    }

    fn power(&self) -> f64 {
        self.base.power()
    }
}

/// Fourier-domain value of `ψ_n^α` at `t > 0`.
pub fn psi_hat(idx: LaguerreIndex, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("psi_hat is defined for t > 0, got {t}"));
    }
    Ok(LaguerreWavelet::new(idx)?.value(t))
}

/// `⟨f, g⟩ = (1/2π) ∫_0^∞ f̂ conj(ĝ) dω` by adaptive Gauss–Laguerre quadrature.
pub fn inner_product<F, G>(f: &F, g: &G, settings: &QuadratureSettings) -> Result<Complex64>
where
    F: FrequencyProfile + ?Sized,
    G: FrequencyProfile + ?Sized,
{
    let beta = f.power() + g.power();
    let rate = f.decay() + g.decay();
    let q = integrate_half_line(beta, rate, |w| f.eval(w) * g.eval(w).conj(), settings)?;
    Ok(q.value / (2.0 * PI))
}

/// A wavelet `ψ_n^α` placed at a point of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletAtom {
    pub idx: LaguerreIndex,
    pub location: UpperHalfPoint,
}

/// `W_ψ f(z) = ⟨f, π(z)ψ⟩` evaluated by quadrature.
///
/// This is a verification oracle, independent of [`kernel_closed_form`].
pub fn wavelet_transform_oracle<F>(fhat: &F, atom: &WaveletAtom, settings: &QuadratureSettings) -> Result<Complex64>
where
    F: FrequencyProfile + ?Sized,
{
    let psi = LaguerreWavelet::new(atom.idx)?;
    inner_product(fhat, &TimeScaleShift::new(&psi, atom.location), settings)
}

/// Admissibility constant `C_ψ = ∫_0^∞ |ψ̂(ξ)|² dξ/ξ` of `ψ_n^α`.
///
/// This is the exact isometry constant of the wavelet transform under the
/// module's pairing: `∫ |W_ψ f|² s^{-2} dz = C_ψ ‖f‖²`. For `n = 0` it equals
/// `4π/α`. Fails if the quadrature error estimate exceeds `1e-9` relative.
pub fn admissibility_constant(idx: LaguerreIndex) -> Result<f64> {
    let psi = LaguerreWavelet::new(idx)?;
    let settings = QuadratureSettings::default();
    let q = integrate_half_line(
        idx.alpha() - 1.0,
        2.0,
        |w| Complex64::new(psi.value(w).powi(2) / w, 0.0),
        &settings,
    )?;
    let value = q.value.re;
    if q.error > 1e-9 * value.abs() {
        return Err(Error::Quadrature {
            estimate: q.error,
            tolerance: 1e-9 * value.abs(),
            nodes: q.nodes,
        });
    }
    Ok(value)
}

/// Closed form of `⟨π(w)ψ_n^α, π(z)ψ_0^α⟩`:
///
/// `c_n^α ((z - w)/(z - w̄))^n (2√(ss')/(i(w̄ - z)))^{α+1}`.
///
/// The base of the fractional power has positive real part, so the principal
/// branch is continuous on `C⁺ × C⁺`.
pub fn kernel_closed_form(idx: LaguerreIndex, w: UpperHalfPoint, z: UpperHalfPoint) -> Complex64 {
    let zc = z.to_complex();
    let wc = w.to_complex();
    let c = coupling_constant(idx);
    // i(w̄ - z) = (s + s') + i(x' - x)
    let denom = Complex64::new(z.s() + w.s(), w.x() - z.x());
    let base = Complex64::new(2.0 * (z.s() * w.s()).sqrt(), 0.0) / denom;
    let envelope = base.powf(idx.alpha() + 1.0) * c;
    if idx.n() == 0 {
        return envelope;
    }
    let ratio = (zc - wc) / (zc - wc.conj());
    envelope * ratio.powu(idx.n() as u32)
}

/// `|⟨π(T v)ψ_0^α, π(T u)ψ_n^α⟩| = c_n^α ρ(u,v)^n ((1-|u|²)(1-|v|²)/|1-ūv|²)^{(α+1)/2}`.
pub fn kernel_disk_magnitude(idx: LaguerreIndex, u: DiskPoint, v: DiskPoint) -> f64 {
    let gap = u.boundary_gap() * v.boundary_gap();
    let d2 = (u.to_complex() - v.to_complex()).norm_sqr();
    let cross = d2 + gap;
    let rho = rho_disk(u, v);
    coupling_constant(idx) * rho.powi(idx.n() as i32) * (gap / cross).powf(0.5 * (idx.alpha() + 1.0))
}

/// Auxiliary quotient
/// `H_n^α(u, v) = |u|^{2n} |1 - ūv|^{2(n+α+1)} / (|u - v|^{2n} (1 - |v|²)^{α+1})`.
pub fn h_wavelet(idx: LaguerreIndex, u: DiskPoint, v: DiskPoint) -> Result<f64> {
    let n = idx.n();
    let a = idx.alpha();
    let d2 = (u.to_complex() - v.to_complex()).norm_sqr();
    if n > 0 && d2 == 0.0 {
        return Err(Error::Singular(format!("H_n^alpha is undefined at u = v for n = {n}")));
    }
    let one_minus_v2 = v.boundary_gap();
    let cross = d2 + u.boundary_gap() * one_minus_v2; // |1 - ūv|²
    let nf = n as f64;
    if nf + a > 30.0 {
        let mut ln_h = (nf + a + 1.0) * cross.ln() - (a + 1.0) * one_minus_v2.ln();
        if n > 0 {
            ln_h += nf * (u.norm_sqr().ln() - d2.ln());
        }
        return Ok(ln_h.exp());
    }
    let mut h = (cross / one_minus_v2).powf(a + 1.0);
    if n > 0 {
        h *= (u.norm_sqr() * cross / d2).powi(n as i32);
    }
    Ok(h)
}

/// Upper bound `2^{n+α+1} (1 - |v|R)^{2n+α+1} / (1 - |v|/R)^{2n}` on
/// `H_n^α(u, |v|)` for `|u| ≥ R > |v| > 0` and `|arg u| ≤ 1 - |v|R`.
pub fn lemma_aux_bound(idx: LaguerreIndex, v_abs: f64, radius: f64) -> Result<f64> {
    if !(v_abs > 0.0 && v_abs < radius && radius < 1.0) {
        return domain(format!(
            "lemma bound needs 0 < |v| < R < 1, got |v| = {v_abs}, R = {radius}"
        ));
    }
    let n = idx.n() as f64;
    let a = idx.alpha();
    let ln_bound = (n + a + 1.0) * 2.0_f64.ln() + (2.0 * n + a + 1.0) * (1.0 - v_abs * radius).ln()
        - 2.0 * n * (1.0 - v_abs / radius).ln();
    Ok(ln_bound.exp())
}

/// Largest sector count [`sector_partition`] will materialize.
pub const MAX_SECTORS: usize = 1 << 20;

/// Sector partition of the punctured disk for a hole of radius `R`:
/// `r = R^κ`, `K = ⌈π/(1 - rR)⌉`, points `v_k = r e^{2πik/K}`.
///
/// Fails with [`Error::GridResolution`] when `K` exceeds [`MAX_SECTORS`].
pub fn sector_partition(radius: f64, kappa: f64) -> Result<PartitionSpec> {
    if !(radius > 0.0 && radius < 1.0) {
        return domain(format!("hole radius must lie in (0, 1), got {radius}"));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return domain(format!("kappa must be finite and >= 1, got {kappa}"));
    }
    let r = radius.powf(kappa);
    let sectors = (PI / (1.0 - r * radius)).ceil();
    if sectors > MAX_SECTORS as f64 {
        return Err(Error::GridResolution(format!(
            "hole radius {radius} with kappa {kappa} needs {sectors:e} sectors, limit is {MAX_SECTORS}"
        )));
    }
    let sectors = sectors as usize;
    Ok(PartitionSpec::regular(sectors, r, Some(kappa), radius))
}

/// `∫_{C⁺} |W_{ψ_0^α} ψ_m^α(z)|² s^{-2} dz` by tensor Gauss–Legendre quadrature.
///
/// Substitutes `x = (s + 1) tan θ`, `s = e^σ`; the integrand is evaluated with
/// [`kernel_closed_form`]. Equals `C_{ψ_0^α} = 4π/α` when the isometry holds.
pub fn phase_space_energy(idx: LaguerreIndex) -> Result<f64> {
    idx.require_positive_alpha()?;
    let a = idx.alpha();
    let rule = GaussLegendreRule::new(24)?;
    let origin = UpperHalfPoint::IDENTITY;
    // truncation where the σ-tails fall below 1e-15
    let lo = -(35.0 / a).min(400.0);
    let hi = 35.0 / (a + 1.0);
    let sigma_panels = ((hi - lo) / 1.0).ceil() as usize;
    let theta_panels = 8;
    let mut total = 0.0;
    for i in 0..sigma_panels {
        let s0 = lo + (hi - lo) * i as f64 / sigma_panels as f64;
        let s1 = lo + (hi - lo) * (i + 1) as f64 / sigma_panels as f64;
        for (sigma, ws) in rule.mapped(s0, s1) {
            let s = sigma.exp();
            for j in 0..theta_panels {
                let t0 = -0.5 * PI + PI * j as f64 / theta_panels as f64;
                let t1 = -0.5 * PI + PI * (j + 1) as f64 / theta_panels as f64;
                for (theta, wt) in rule.mapped(t0, t1) {
                    let x = (s + 1.0) * theta.tan();
                    let z = UpperHalfPoint::new(x, s)?;
                    // W_{ψ_0} ψ_m(z) = ⟨π(i)ψ_m, π(z)ψ_0⟩
                    let k = kernel_closed_form(idx, origin, z);
                    let jac = (s + 1.0) / theta.cos().powi(2) * s;
                    total += ws * wt * k.norm_sqr() / (s * s) * jac;
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n: usize, alpha: f64) -> LaguerreIndex {
        LaguerreIndex::new(n, alpha).unwrap()
    }

    fn pt(x: f64, s: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, s).unwrap()
    }

    #[test]
    fn psi_hat_ground_state_value() {
        let v = psi_hat(idx(0, 1.0), 1.0).unwrap();
        assert!((v - (8.0 * PI).sqrt() * (-1.0_f64).exp()).abs() < 1e-14);
        assert!(psi_hat(idx(0, 1.0), 0.0).is_err());
        assert!(psi_hat(idx(0, 0.0), 1.0).is_err());
    }

    #[test]
    fn psi_hat_sign_changes() {
        for n in 0..=4 {
            let id = idx(n, 1.5);
            let mut changes = 0;
            let mut last = psi_hat(id, 1e-3).unwrap().signum();
            for i in 1..4000 {
                let t = 1e-3 + i as f64 * 0.01;
                let s = psi_hat(id, t).unwrap().signum();
                if s != last {
                    changes += 1;
                    last = s;
                }
            }
            assert_eq!(changes, n);
        }
    }

    #[test]
    fn wavelets_are_orthonormal() {
        let settings = QuadratureSettings::default();
        for &alpha in &[0.5, 1.0, 2.0] {
            let psis: Vec<_> = (0..=4).map(|n| LaguerreWavelet::new(idx(n, alpha)).unwrap()).collect();
            for m in 0..=4 {
                for n in 0..=4 {
                    let ip = inner_product(&psis[m], &psis[n], &settings).unwrap();
                    let expected = if m == n { 1.0 } else { 0.0 };
                    assert!((ip - expected).norm() < 1e-9, "alpha={alpha} m={m} n={n}: {ip}");
                }
            }
        }
    }

    #[test]
    fn admissibility_ground_state() {
        for &alpha in &[0.5, 1.0, 2.0] {
            let c = admissibility_constant(idx(0, alpha)).unwrap();
            assert!((c - 4.0 * PI / alpha).abs() < 1e-10 * c, "alpha={alpha}: {c}");
        }
        for n in 1..=4 {
            for &alpha in &[0.5, 1.0, 2.0] {
                let c = admissibility_constant(idx(n, alpha)).unwrap();
                assert!(c.is_finite() && c > 0.0);
            }
        }
    }

    #[test]
    fn oracle_at_identity_is_unit_norm() {
        for n in 0..=3 {
            let id = idx(n, 1.0);
            let psi = LaguerreWavelet::new(id).unwrap();
            let atom = WaveletAtom {
                idx: id,
                location: UpperHalfPoint::IDENTITY,
            };
            let v = wavelet_transform_oracle(&psi, &atom, &QuadratureSettings::default()).unwrap();
            assert!((v - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_trivial_cases() {
        let i = UpperHalfPoint::IDENTITY;
        assert!((kernel_closed_form(idx(0, 1.3), i, i) - 1.0).norm() < 1e-15);
        let z = pt(0.4, 2.2);
        for n in 1..4 {
            assert_eq!(kernel_closed_form(idx(n, 0.7), z, z).norm(), 0.0);
        }
    }

    #[test]
    fn kernel_matches_oracle_sample() {
        let settings = QuadratureSettings::default();
        let w = pt(-1.2, 0.4);
        let z = pt(0.9, 1.7);
        for n in 0..=4 {
            for &alpha in &[0.5, 2.0] {
                let id = idx(n, alpha);
                let psi_n = LaguerreWavelet::new(id).unwrap();
                let shifted = TimeScaleShift::new(&psi_n, w);
                let atom = WaveletAtom {
                    idx: id.with_degree(0),
                    location: z,
                };
                let oracle = wavelet_transform_oracle(&shifted, &atom, &settings).unwrap();
                let closed = kernel_closed_form(id, w, z);
                assert!(
                    (oracle - closed).norm() <= 1e-8 * closed.norm(),
                    "n={n} alpha={alpha}: {oracle} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn h_wavelet_examples() {
        let u = DiskPoint::new(0.5, 0.0).unwrap();
        let v = DiskPoint::new(0.25, 0.0).unwrap();
        // α = 0: |1 - ūv|² / (1 - |v|²)
        let h = h_wavelet(idx(0, 0.0), u, v).unwrap();
        assert!((h - 0.765625 / 0.9375).abs() < 1e-14);
        // α = 1 squares both factors
        let h = h_wavelet(idx(0, 1.0), u, v).unwrap();
        assert!((h - (0.765625_f64 / 0.9375).powi(2)).abs() < 1e-14);
        for n in 0..4 {
            let w = DiskPoint::new(-0.3, 0.6).unwrap();
            assert!((h_wavelet(idx(n, 1.5), w, DiskPoint::ORIGIN).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(matches!(h_wavelet(idx(1, 1.0), u, u), Err(Error::Singular(_))));
        assert!(h_wavelet(idx(0, 1.0), u, u).is_ok());
    }

    #[test]
    fn h_wavelet_log_space_branch_is_continuous() {
        let u = DiskPoint::new(0.6, 0.1).unwrap();
        let v = DiskPoint::new(0.2, -0.1).unwrap();
        let below = h_wavelet(idx(10, 19.999_999), u, v).unwrap();
        let above = h_wavelet(idx(10, 20.000_001), u, v).unwrap();
        assert!(((below - above) / above).abs() < 1e-5);
    }

    #[test]
    fn lemma_bound_examples() {
        let b = lemma_aux_bound(idx(1, 1.0), 0.25, 0.5).unwrap();
        let expected = 8.0 * 0.875_f64.powi(4) / 0.25;
        assert!((b - expected).abs() < 1e-12);
        assert!((b - 18.7578).abs() < 1e-4);
        let b0 = lemma_aux_bound(idx(0, 1.5), 0.2, 0.7).unwrap();
        assert!((b0 - 2.0_f64.powf(2.5) * (1.0 - 0.14_f64).powf(2.5)).abs() < 1e-13);
        assert!(lemma_aux_bound(idx(0, 1.0), 0.5, 0.5).is_err());
        assert!(lemma_aux_bound(idx(0, 1.0), 0.0, 0.5).is_err());
        assert!(lemma_aux_bound(idx(0, 1.0), 0.2, 1.0).is_err());
    }

    #[test]
    fn partition_example() {
        let p = sector_partition(0.5, 2.0).unwrap();
        assert_eq!(p.sectors, 4);
        assert!((p.point_radius - 0.25).abs() < 1e-15);
        assert_eq!(p.points[0], [0.25, 0.0]);
        assert!(p.half_width() <= 1.0 - 0.125);
        assert!(sector_partition(1.0, 2.0).is_err());
        assert!(sector_partition(0.5, 0.5).is_err());
    }

    #[test]
    fn isometry_constant_matches_admissibility() {
        for &alpha in &[0.5, 1.0, 2.0] {
            let c = admissibility_constant(idx(0, alpha)).unwrap();
            for m in 0..=2 {
                let e = phase_space_energy(idx(m, alpha)).unwrap();
                assert!(((e - c) / c).abs() < 1e-8, "alpha={alpha} m={m}: {e} vs {c}");
            }
        }
    }
}
