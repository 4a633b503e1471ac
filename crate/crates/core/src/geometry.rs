//! Phase-space geometry of the wavelet transform.
//!
//! The upper half-plane `C⁺` doubles as the (ax+b)-group: a point `x + is`
//! is the translation by `x` composed with the dilation by `s`. Throughout
//! this module `*` on [`UpperHalfPoint`] is the group law
//! `(x + is)·(x' + is') = x + s·x' + i·s·s'`, never complex multiplication.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A point `x + is` of the upper half-plane, `s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct UpperHalfPoint {
    x: f64,
    s: f64,
}

impl UpperHalfPoint {
    /// The neutral element `i` of the group.
    pub const IDENTITY: UpperHalfPoint = UpperHalfPoint { x: 0.0, s: 1.0 };

    pub fn new(x: f64, s: f64) -> Result<Self> {
        if !x.is_finite() || !s.is_finite() {
            return domain(format!("half-plane point must be finite, got ({x}, {s})"));
        }
        if s <= 0.0 {
            return domain(format!("half-plane point needs positive scale, got s = {s}"));
        }
        Ok(Self { x, s })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// Translation component.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Scale component.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.s)
    }

    /// Group product `self · other`.
    pub fn group_mul(self, other: Self) -> Self {
        Self {
            x: self.x + self.s * other.x,
            s: self.s * other.s,
        }
    }

    /// Group inverse `-x/s + i/s`.
    pub fn group_inv(self) -> Self {
        Self {
            x: -self.x / self.s,
            s: 1.0 / self.s,
        }
    }
}

impl Mul for UpperHalfPoint {
    type Output = UpperHalfPoint;

    fn mul(self, rhs: Self) -> Self {
        self.group_mul(rhs)
    }
}

impl TryFrom<[f64; 2]> for UpperHalfPoint {
    type Error = crate::Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<UpperHalfPoint> for [f64; 2] {
    fn from(z: UpperHalfPoint) -> Self {
        [z.x, z.s]
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.s)
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiskPoint {
    re: f64,
    im: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return domain(format!("disk point must be finite, got ({re}, {im})"));
        }
        if re * re + im * im >= 1.0 {
            return domain(format!("disk point must satisfy |u| < 1, got ({re}, {im})"));
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(u: Complex64) -> Result<Self> {
        Self::new(u.re, u.im)
    }

    pub fn from_polar(r: f64, angle: f64) -> Result<Self> {
        Self::new(r * angle.cos(), r * angle.sin())
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `1 - |u|²`, evaluated without cancellation near the boundary.
    pub fn boundary_gap(&self) -> f64 {
        let r = self.norm();
        (1.0 - r) * (1.0 + r)
    }
}

impl TryFrom<[f64; 2]> for DiskPoint {
    type Error = crate::Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<DiskPoint> for [f64; 2] {
    fn from(u: DiskPoint) -> Self {
        [u.re, u.im]
    }
}

/// Center of a [`PseudoDisk`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DiskCenter {
    HalfPlane(UpperHalfPoint),
    Disk(DiskPoint),
}

/// Open pseudohyperbolic disk `{w : ρ(center, w) < radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoDisk {
    center: DiskCenter,
    radius: f64,
}

impl PseudoDisk {
    pub fn new(center: DiskCenter, radius: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return domain(format!("pseudohyperbolic radius must lie in [0, 1), got {radius}"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> DiskCenter {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains_halfplane(&self, w: UpperHalfPoint) -> bool {
        let center = match self.center {
            DiskCenter::HalfPlane(z) => z,
            DiskCenter::Disk(u) => moebius(u),
        };
        rho_halfplane(center, w) < self.radius
    }

    pub fn contains_disk(&self, v: DiskPoint) -> bool {
        let center = match self.center {
            DiskCenter::HalfPlane(z) => moebius_inv(z),
            DiskCenter::Disk(u) => u,
        };
        rho_disk(center, v) < self.radius
    }
}

/// Pseudohyperbolic distance `|z - w| / |z - w̄|` on the upper half-plane.
///
/// Uses `|z - w̄|² = |z - w|² + 4ss'` so that nearby points do not cancel.
pub fn rho_halfplane(z: UpperHalfPoint, w: UpperHalfPoint) -> f64 {
    let dx = z.x - w.x;
    let ds = z.s - w.s;
    let near = dx * dx + ds * ds;
    if near == 0.0 {
        return 0.0;
    }
    (near / (near + 4.0 * z.s * w.s)).sqrt()
}

/// Pseudohyperbolic distance `|v - u| / |1 - ū v|` on the unit disk.
///
/// Uses `|1 - ū v|² = |u - v|² + (1 - |u|²)(1 - |v|²)`.
pub fn rho_disk(u: DiskPoint, v: DiskPoint) -> f64 {
    let dr = u.re - v.re;
    let di = u.im - v.im;
    let near = dr * dr + di * di;
    if near == 0.0 {
        return 0.0;
    }
    (near / (near + u.boundary_gap() * v.boundary_gap())).sqrt()
}

/// The Möbius transform `T(u) = i(1 + u)/(1 - u)` from the disk onto `C⁺`.
pub fn moebius(u: DiskPoint) -> UpperHalfPoint {
    let denom = (1.0 - u.re) * (1.0 - u.re) + u.im * u.im;
    UpperHalfPoint {
        x: -2.0 * u.im / denom,
        s: u.boundary_gap() / denom,
    }
}

/// Inverse Möbius transform `T⁻¹(z) = (z - i)/(z + i)`.
pub fn moebius_inv(z: UpperHalfPoint) -> DiskPoint {
    let denom = z.x * z.x + (z.s + 1.0) * (z.s + 1.0);
    // x² + s² - 1 = x² + (s - 1)(s + 1)
    DiskPoint {
        re: (z.x * z.x + (z.s - 1.0) * (z.s + 1.0)) / denom,
        im: -2.0 * z.x / denom,
    }
}
