//! Angular sector partitions of a punctured plane or disk.
//!
//! Sector `S_k` covers the angles `[π(2k-1)/K, π(2k+1)/K)` and carries the
//! reference point `v_k = r e^{2πik/K}` at its angular center. Sectors are
//! indexed `0..K`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionSpec {
    /// Number of sectors `K`.
    pub sectors: usize,
    /// Modulus `r` of the reference points.
    pub point_radius: f64,
    /// Exponent `κ` with `r = R^κ`; absent for partitions not built that way.
    pub kappa: Option<f64>,
    /// The hole radius `R` the partition was built for.
    pub hole_radius: f64,
    /// Reference points `v_k`, one per sector.
    pub points: Vec<[f64; 2]>,
}

impl PartitionSpec {
    pub(crate) fn regular(sectors: usize, point_radius: f64, kappa: Option<f64>, hole_radius: f64) -> Self {
        let points = (0..sectors)
            .map(|k| {
                let p = Complex64::from_polar(point_radius, 2.0 * PI * k as f64 / sectors as f64);
                [p.re, p.im]
            })
            .collect();
        Self {
            sectors,
            point_radius,
            kappa,
            hole_radius,
            points,
        }
    }

    /// Angular half-width `π/K` of every sector.
    pub fn half_width(&self) -> f64 {
        PI / self.sectors as f64
    }

    /// Angular center `2πk/K` of sector `k`.
    pub fn center_angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.sectors as f64
    }

    /// Lower and upper angle of sector `k`.
    pub fn bounds(&self, k: usize) -> (f64, f64) {
        let k = k as f64;
        let sectors = self.sectors as f64;
        (PI * (2.0 * k - 1.0) / sectors, PI * (2.0 * k + 1.0) / sectors)
    }

    pub fn point(&self, k: usize) -> Complex64 {
        Complex64::new(self.points[k][0], self.points[k][1])
    }

    /// Index of the sector containing `z ≠ 0`.
    pub fn sector_of(&self, z: Complex64) -> usize {
        let width = 2.0 * PI / self.sectors as f64;
        // shift so that sector 0 starts at angle 0
        let angle = (z.arg() + self.half_width()).rem_euclid(2.0 * PI);
        ((angle / width).floor() as usize) % self.sectors
    }
}
