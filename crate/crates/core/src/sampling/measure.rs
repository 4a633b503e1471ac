use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{moebius, rho_halfplane, DiskPoint, UpperHalfPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureRegime {
    /// Points of the upper half-plane, pseudohyperbolic distance.
    Halfplane,
    /// Points of the time-frequency plane, Euclidean distance.
    Timefreq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub point: [f64; 2],
    pub weight: f64,
}

impl WeightedPoint {
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.point[0], self.point[1])
    }
}

/// A finite sum of point masses `Σ w_λ δ_λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    regime: MeasureRegime,
    points: Vec<WeightedPoint>,
}

impl DiscreteMeasure {
    pub fn new(regime: MeasureRegime, points: Vec<WeightedPoint>) -> Result<Self> {
        for p in &points {
            if !(p.weight > 0.0) || !p.weight.is_finite() {
                return domain(format!(
                    "point mass weights must be positive and finite, got {}",
                    p.weight
                ));
            }
            let [x, y] = p.point;
            if !x.is_finite() || !y.is_finite() {
                return domain(format!("point ({x}, {y}) is not finite"));
            }
            if regime == MeasureRegime::Halfplane && y <= 0.0 {
                return domain(format!("point ({x}, {y}) is not in the upper half-plane"));
            }
        }
        Ok(Self { regime, points })
    }

    /// Unit point masses at `points`.
    pub fn unit(regime: MeasureRegime, points: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|z| WeightedPoint {
                point: [z.re, z.im],
                weight: 1.0,
            })
            .collect();
        Self::new(regime, points)
    }

    pub fn regime(&self) -> MeasureRegime {
        self.regime
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance in the regime's metric.
    pub fn distance(&self, a: Complex64, b: Complex64) -> Result<f64> {
        match self.regime {
            MeasureRegime::Halfplane => Ok(rho_halfplane(
                UpperHalfPoint::from_complex(a)?,
                UpperHalfPoint::from_complex(b)?,
            )),
            MeasureRegime::Timefreq => Ok((a - b).norm()),
        }
    }

    /// Total mass in the open ball of radius `radius` around `center`.
    pub fn ball_mass(&self, center: Complex64, radius: f64) -> Result<f64> {
        let mut mass = 0.0;
        for p in &self.points {
            if self.distance(p.to_complex(), center)? < radius {
                mass += p.weight;
            }
        }
        Ok(mass)
    }
}

/// Points of `aZ × bZ` in the square `|x|, |ξ| ≤ extent`, unit weights.
pub fn make_timefreq_lattice(a: f64, b: f64, extent: f64) -> Result<DiscreteMeasure> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("lattice steps must be positive, got a = {a}, b = {b}"));
    }
    if !(a * b < 1.0) {
        return domain(format!("lattice must oversample (a·b < 1), got a·b = {}", a * b));
    }
    if !(extent > 0.0) || !extent.is_finite() {
        return domain(format!("lattice extent must be positive, got {extent}"));
    }
    // small slack so that extent = k·a keeps the boundary row
    let kx = (extent / a + 1e-9).floor() as i64;
    let kb = (extent / b + 1e-9).floor() as i64;
    let points = (-kx..=kx).flat_map(|i| (-kb..=kb).map(move |j| Complex64::new(i as f64 * a, j as f64 * b)));
    DiscreteMeasure::unit(MeasureRegime::Timefreq, points)
}

/// Ring radii of [`make_disk_grid`], starting with `0`.
///
/// Rings sit at equal hyperbolic spacing `h = artanh(extent)/M`, with `M` the
/// smallest power of two making the pseudohyperbolic gap between consecutive
/// rings at most `delta`. The last ring has radius `extent`.
pub fn disk_grid_rings(delta: f64, extent: f64) -> Result<Vec<f64>> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("grid spacing must lie in (0, 1), got {delta}"));
    }
    if !(extent > 0.0 && extent < 1.0) {
        return domain(format!("grid extent must lie in (0, 1), got {extent}"));
    }
    let reach = extent.atanh();
    let needed = (reach / delta.atanh()).ceil().max(1.0);
    let rings = 2.0_f64.powf(needed.log2().ceil()) as usize;
    let h = reach / rings as f64;
    let mut radii: Vec<f64> = (0..=rings).map(|k| (k as f64 * h).tanh()).collect();
    radii[rings] = extent;
    Ok(radii)
}

/// Number of points on the ring of radius `r` such that every point of the
/// ring lies within pseudohyperbolic distance `d` of a grid point.
fn ring_count(r: f64, d: f64) -> usize {
    if r == 0.0 {
        return 1;
    }
    // ρ(r, r e^{iφ}) ≤ d  ⇔  sin(φ/2) ≤ d (1 - r²) / (2 r sqrt(1 - d²))
    let bound = d * (1.0 - r * r) / (2.0 * r * (1.0 - d * d).sqrt());
    if bound >= 1.0 {
        return 1;
    }
    let phi = 2.0 * bound.asin();
    // half the angular spacing must not exceed phi
    (PI / phi).ceil() as usize
}

/// Pseudohyperbolically quasi-uniform grid on `{|u| ≤ extent}` in the disk,
/// returned in half-plane coordinates. `u = 0` maps to `i`.
///
/// Every `u` with `|u| ≤ extent` has a grid point within pseudohyperbolic
/// distance `delta`: half a ring gap radially and `delta/2` along the ring.
pub fn make_disk_grid(delta: f64, extent: f64) -> Result<DiscreteMeasure> {
    let radii = disk_grid_rings(delta, extent)?;
    let mut points = Vec::new();
    for (k, &r) in radii.iter().enumerate() {
        let m = ring_count(r, 0.5 * delta);
        // stagger alternate rings
        let offset = if k % 2 == 1 { 0.5 } else { 0.0 };
        for j in 0..m {
            let theta = 2.0 * PI * (j as f64 + offset) / m as f64;
            let u = DiskPoint::from_polar(r, theta)?;
            points.push(moebius(u).to_complex());
        }
    }
    DiscreteMeasure::unit(MeasureRegime::Halfplane, points)
}

/// Removes every point at distance `< radius` from `center`.
pub fn punch_hole(mu: &DiscreteMeasure, center: Complex64, radius: f64) -> Result<DiscreteMeasure> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return domain(format!("hole radius must be finite and non-negative, got {radius}"));
    }
    if mu.regime == MeasureRegime::Halfplane {
        if radius >= 1.0 {
            return domain(format!("pseudohyperbolic hole radius must be < 1, got {radius}"));
        }
        UpperHalfPoint::from_complex(center)?;
    } else if !center.re.is_finite() || !center.im.is_finite() {
        return domain("hole center is not finite");
    }
    let mut kept = Vec::with_capacity(mu.points.len());
    for p in &mu.points {
        if mu.distance(p.to_complex(), center)? >= radius {
            kept.push(*p);
        }
    }
    Ok(DiscreteMeasure {
        regime: mu.regime,
        points: kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{moebius_inv, rho_disk};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lattice_counts_and_symmetry() {
        let mu = make_timefreq_lattice(0.5, 0.5, 1.0).unwrap();
        assert_eq!(mu.len(), 25);
        let pts: Vec<Complex64> = mu.points().iter().map(|p| p.to_complex()).collect();
        for z in &pts {
            assert!(pts.iter().any(|w| (*w + *z).norm() < 1e-15));
        }
        assert!(make_timefreq_lattice(1.0, 1.0, 1.0).is_err());
        assert!(make_timefreq_lattice(0.5, 0.5, 0.0).is_err());
        assert_eq!(make_timefreq_lattice(0.25, 0.25, 6.0).unwrap().len(), 49 * 49);
    }

    #[test]
    fn disk_grid_contains_identity() {
        let mu = make_disk_grid(0.2, 0.9).unwrap();
        assert!(mu
            .points()
            .iter()
            .any(|p| (p.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15));
    }

    #[test]
    fn disk_grid_covers_within_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(delta, extent) in &[(0.3, 0.8), (0.1, 0.95), (0.5, 0.5)] {
            let grid: Vec<DiskPoint> = make_disk_grid(delta, extent)
                .unwrap()
                .points()
                .iter()
                .map(|p| moebius_inv(UpperHalfPoint::from_complex(p.to_complex()).unwrap()))
                .collect();
            for _ in 0..400 {
                let r = extent * rng.random::<f64>().sqrt();
                let u = DiskPoint::from_polar(r, rng.random_range(0.0..2.0 * PI)).unwrap();
                let nearest = grid.iter().map(|&g| rho_disk(u, g)).fold(f64::INFINITY, f64::min);
                assert!(nearest <= delta, "delta {delta}: probe at distance {nearest}");
            }
        }
    }

    #[test]
    fn halving_delta_doubles_rings() {
        for &extent in &[0.5, 0.9, 0.95, 0.99] {
            for &delta in &[0.4, 0.3, 0.2, 0.1, 0.05] {
                let coarse = disk_grid_rings(delta, extent).unwrap().len() - 1;
                let fine = disk_grid_rings(delta / 2.0, extent).unwrap().len() - 1;
                assert!(fine >= 2 * coarse, "extent {extent}, delta {delta}: {coarse} -> {fine}");
            }
        }
        let radii = disk_grid_rings(0.1, 0.95).unwrap();
        for w in radii.windows(2) {
            assert!((w[1] - w[0]) / (1.0 - w[0] * w[1]) <= 0.1 + 1e-12);
        }
    }

    #[test]
    fn punch_hole_is_exact_and_idempotent() {
        let mu = make_disk_grid(0.2, 0.9).unwrap();
        let center = Complex64::new(0.3, 1.2);
        let same = punch_hole(&mu, center, 0.0).unwrap();
        assert_eq!(same, mu);
        let punched = punch_hole(&mu, center, 0.5).unwrap();
        assert_eq!(punched.ball_mass(center, 0.5).unwrap(), 0.0);
        assert_eq!(punch_hole(&punched, center, 0.5).unwrap(), punched);
        for p in mu.points() {
            let d = mu.distance(p.to_complex(), center).unwrap();
            assert_eq!(punched.points().contains(p), d >= 0.5);
        }
        assert!(punch_hole(&mu, center, 1.0).is_err());

        let lattice = make_timefreq_lattice(0.5, 0.5, 2.0).unwrap();
        let holed = punch_hole(&lattice, Complex64::new(0.0, 0.0), 0.6).unwrap();
        // the origin and its four neighbours at distance 0.5
        assert_eq!(lattice.len() - holed.len(), 5);
    }

    #[test]
    fn measure_validation() {
        let bad = WeightedPoint {
            point: [0.0, -1.0],
            weight: 1.0,
        };
        assert!(DiscreteMeasure::new(MeasureRegime::Halfplane, vec![bad]).is_err());
        assert!(DiscreteMeasure::new(MeasureRegime::Timefreq, vec![bad]).is_ok());
        let zero = WeightedPoint {
            point: [0.0, 1.0],
            weight: 0.0,
        };
        assert!(DiscreteMeasure::new(MeasureRegime::Timefreq, vec![zero]).is_err());
    }

    #[test]
    fn disk_grid_lives_in_the_halfplane() {
        let mu = make_disk_grid(0.1, 0.95).unwrap();
        for p in mu.points() {
            let u = moebius_inv(UpperHalfPoint::from_complex(p.to_complex()).unwrap());
            assert!(u.norm() <= 0.95 + 1e-12);
        }
    }
}
