use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frame::{atom_coefficients, estimate_from_rows, FrameEstimate};
use super::measure::{make_disk_grid, make_timefreq_lattice, punch_hole, DiscreteMeasure, MeasureRegime};
use crate::certify::{stft_gap_bound, wavelet_gap_bound, SamplingBounds};
use crate::error::{Error, Result};
use crate::special::{AtomIndex, HermiteIndex, LaguerreIndex};
use crate::stft::GridSettings;

/// Attached to every report.
pub const FINITE_SECTION_CAVEAT: &str = "bounds are extreme eigenvalues of an N x N finite section: \
the lower estimate over-estimates the true lower bound and the upper estimate under-estimates the true upper bound";

pub const CSV_HEADER: &str = "regime,n,alpha,a,b,delta,extent,N,R,A_est,B_est,R_max,consistent";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum MeasureSpec {
    /// `aZ × bZ` in the square `|x|, |ξ| ≤ extent`.
    Lattice { a: f64, b: f64, extent: f64 },
    /// Disk grid of spacing `delta` on `{|u| ≤ extent}`, mapped to `C⁺`.
    DiskGrid { delta: f64, extent: f64 },
}

impl MeasureSpec {
    pub fn regime(&self) -> MeasureRegime {
        match self {
            MeasureSpec::Lattice { .. } => MeasureRegime::Timefreq,
            MeasureSpec::DiskGrid { .. } => MeasureRegime::Halfplane,
        }
    }

    pub fn build(&self) -> Result<DiscreteMeasure> {
        match *self {
            MeasureSpec::Lattice { a, b, extent } => make_timefreq_lattice(a, b, extent),
            MeasureSpec::DiskGrid { delta, extent } => make_disk_grid(delta, extent),
        }
    }
}

fn default_dimension() -> usize {
    8
}

/// Everything about an experiment except the hole radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSetup {
    pub regime: MeasureRegime,
    pub atom: AtomIndex,
    pub measure: MeasureSpec,
    /// Defaults to the group identity: `i` (half-plane) or `0` (time-frequency).
    #[serde(default)]
    pub hole_center: Option<[f64; 2]>,
    /// Finite-section dimension `N`; estimates are also reported at `2N`.
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default)]
    pub grid: GridSettings,
}

impl ExperimentSetup {
    fn validate(&self) -> Result<()> {
        if self.measure.regime() != self.regime {
            return Err(Error::Config(format!(
                "measure {:?} does not belong to the {:?} regime",
                self.measure, self.regime
            )));
        }
        match (self.regime, self.atom) {
            (MeasureRegime::Halfplane, AtomIndex::Laguerre { n, alpha }) => {
                LaguerreIndex::new(n, alpha)?.require_positive_alpha()?;
            }
            (MeasureRegime::Timefreq, AtomIndex::Hermite { .. }) => {}
            (regime, atom) => {
                return Err(Error::Config(format!(
                    "atom {atom:?} does not belong to the {regime:?} regime"
                )));
            }
        }
        if self.dimension < 2 || 2 * self.dimension > 64 {
            return Err(Error::Config(format!(
                "finite-section dimension must lie in 2..=32, got {}",
                self.dimension
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> Complex64 {
        match (self.hole_center, self.regime) {
            (Some([x, y]), _) => Complex64::new(x, y),
            (None, MeasureRegime::Halfplane) => Complex64::new(0.0, 1.0),
            (None, MeasureRegime::Timefreq) => Complex64::new(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub setup: ExperimentSetup,
    pub hole_radius: f64,
}

/// One setup swept over several hole radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentEntry {
    #[serde(flatten)]
    pub setup: ExperimentSetup,
    pub hole_radii: Vec<f64>,
}

/// Contents of an experiment file: a battery or a single entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExperimentFile {
    Battery { experiments: Vec<ExperimentEntry> },
    Single(ExperimentEntry),
}

impl ExperimentFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed experiment config: {e}")))
    }

    /// One config per (entry, radius), in file order.
    pub fn expand(&self) -> Vec<ExperimentConfig> {
        let entries = match self {
            ExperimentFile::Battery { experiments } => experiments.as_slice(),
            ExperimentFile::Single(entry) => std::slice::from_ref(entry),
        };
        entries
            .iter()
            .flat_map(|e| {
                e.hole_radii.iter().map(|&r| ExperimentConfig {
                    setup: e.setup.clone(),
                    hole_radius: r,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub regime: MeasureRegime,
    pub atom: AtomIndex,
    pub measure: MeasureSpec,
    pub hole_center: [f64; 2],
    /// Pseudohyperbolic (half-plane) or Euclidean (time-frequency) radius.
    pub hole_radius: f64,
    pub points: usize,
    pub removed: usize,
    pub dimension: usize,
    pub estimate: FrameEstimate,
    /// Same measure at dimension `2N`, for judging convergence in `N`.
    pub estimate_doubled: FrameEstimate,
    /// Theorem bound from `estimate`; absent when the lower estimate is not
    /// positive and the bound is vacuous.
    pub r_max: Option<f64>,
    pub r_max_doubled: Option<f64>,
    /// `hole_radius ≤ r_max`, or a vacuous bound.
    pub consistent: bool,
    pub caveat: String,
}

impl GapReport {
    /// Cells in [`CSV_HEADER`] order; absent parameters are empty cells and a
    /// vacuous bound is `inf`.
    pub fn csv_record(&self) -> Vec<String> {
        let f = |v: f64| format!("{v:.16e}");
        let opt = |v: Option<f64>| v.map(f).unwrap_or_default();
        let (a, b, delta, extent) = match self.measure {
            MeasureSpec::Lattice { a, b, extent } => (Some(a), Some(b), None, extent),
            MeasureSpec::DiskGrid { delta, extent } => (None, None, Some(delta), extent),
        };
        let regime = match self.regime {
            MeasureRegime::Halfplane => "halfplane",
            MeasureRegime::Timefreq => "timefreq",
        };
        vec![
            regime.to_string(),
            self.atom.n().to_string(),
            opt(self.atom.alpha()),
            opt(a),
            opt(b),
            opt(delta),
            f(extent),
            self.dimension.to_string(),
            f(self.hole_radius),
            f(self.estimate.lower),
            f(self.estimate.upper),
            self.r_max.map(f).unwrap_or_else(|| "inf".into()),
            self.consistent.to_string(),
        ]
    }
}

/// Reports as CSV with header.
pub fn reports_to_csv(reports: &[GapReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV cells are ASCII"))
}

fn theorem_radius(atom: AtomIndex, estimate: &FrameEstimate) -> Result<Option<f64>> {
    let Some(bounds) = estimate.bounds() else {
        return Ok(None);
    };
    theorem_radius_for(atom, bounds).map(Some)
}

fn theorem_radius_for(atom: AtomIndex, bounds: SamplingBounds) -> Result<f64> {
    Ok(match atom {
        AtomIndex::Laguerre { n, alpha } => wavelet_gap_bound(LaguerreIndex::new(n, alpha)?, bounds)?.r_max,
        AtomIndex::Hermite { n } => stft_gap_bound(HermiteIndex(n), bounds)?.r_max,
    })
}

/// Builds the measure, punches the hole, estimates frame bounds at `N` and
/// `2N`, and checks the hole radius against the theorem bound.
pub fn run_gap_experiment(config: &ExperimentConfig) -> Result<GapReport> {
    let setup = &config.setup;
    setup.validate()?;
    let mu = setup.measure.build()?;
    let rows = atom_coefficients(&mu, setup.atom, 2 * setup.dimension, &setup.grid)?;
    report_from_rows(setup, &mu, &rows, config.hole_radius)
}

fn report_from_rows(
    setup: &ExperimentSetup,
    mu: &DiscreteMeasure,
    rows: &[Vec<Complex64>],
    radius: f64,
) -> Result<GapReport> {
    let center = setup.center();
    let punched = punch_hole(mu, center, radius)?;
    let kept_rows: Vec<Vec<Complex64>> = mu
        .points()
        .iter()
        .zip(rows)
        .filter(|(p, _)| {
            mu.distance(p.to_complex(), center)
                .map(|d| d >= radius)
                .unwrap_or(false)
        })
        .map(|(_, r)| r.clone())
        .collect();
    debug_assert_eq!(kept_rows.len(), punched.len());
    let estimate = estimate_from_rows(&punched, &kept_rows, setup.dimension)?;
    let estimate_doubled = estimate_from_rows(&punched, &kept_rows, 2 * setup.dimension)?;
    let r_max = theorem_radius(setup.atom, &estimate)?;
    let r_max_doubled = theorem_radius(setup.atom, &estimate_doubled)?;
    Ok(GapReport {
        regime: setup.regime,
        atom: setup.atom,
        measure: setup.measure,
        hole_center: [center.re, center.im],
        hole_radius: radius,
        points: punched.len(),
        removed: mu.len() - punched.len(),
        dimension: setup.dimension,
        estimate,
        estimate_doubled,
        r_max,
        r_max_doubled,
        consistent: r_max.is_none_or(|r| radius <= r),
        caveat: FINITE_SECTION_CAVEAT.to_string(),
    })
}

/// Runs every config, sharing measures and coefficients between configs
/// that differ only in the hole radius. Reports keep the input order.
pub fn run_battery(configs: &[ExperimentConfig]) -> Result<Vec<GapReport>> {
    let mut groups: Vec<(&ExperimentSetup, Vec<usize>)> = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        match groups.iter_mut().find(|(s, _)| **s == c.setup) {
            Some((_, members)) => members.push(i),
            None => groups.push((&c.setup, vec![i])),
        }
    }
    let per_group: Vec<Vec<(usize, GapReport)>> = groups
        .par_iter()
        .map(|(setup, members)| -> Result<Vec<(usize, GapReport)>> {
            setup.validate()?;
            let mu = setup.measure.build()?;
            let rows = atom_coefficients(&mu, setup.atom, 2 * setup.dimension, &setup.grid)?;
            members
                .iter()
                .map(|&i| Ok((i, report_from_rows(setup, &mu, &rows, configs[i].hole_radius)?)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Option<GapReport>> = vec![None; configs.len()];
    for (i, r) in per_group.into_iter().flatten() {
        out[i] = Some(r);
    }
    Ok(out
        .into_iter()
        .map(|r| r.expect("every config belongs to a group"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn timefreq(n: usize, radius: f64) -> ExperimentConfig {
        ExperimentConfig {
            setup: ExperimentSetup {
                regime: MeasureRegime::Timefreq,
                atom: AtomIndex::Hermite { n },
                measure: MeasureSpec::Lattice {
                    a: 0.25,
                    b: 0.25,
                    extent: 6.0,
                },
                hole_center: None,
                dimension: 8,
                grid: GridSettings::default(),
            },
            hole_radius: radius,
        }
    }

    fn halfplane(n: usize, radius: f64) -> ExperimentConfig {
        ExperimentConfig {
            setup: ExperimentSetup {
                regime: MeasureRegime::Halfplane,
                atom: AtomIndex::Laguerre { n, alpha: 1.0 },
                measure: MeasureSpec::DiskGrid {
                    delta: 0.2,
                    extent: 0.9,
                },
                hole_center: None,
                dimension: 4,
                grid: GridSettings::default(),
            },
            hole_radius: radius,
        }
    }

    #[test]
    fn no_hole_is_consistent() {
        let r = run_gap_experiment(&timefreq(0, 0.0)).unwrap();
        assert!(r.consistent);
        assert_eq!(r.removed, 0);
        let r = run_gap_experiment(&halfplane(1, 0.0)).unwrap();
        assert!(r.consistent);
        assert!(r.estimate.lower > 0.0);
    }

    #[test]
    fn timefreq_half_unit_hole_is_consistent() {
        let r = run_gap_experiment(&timefreq(0, 0.5)).unwrap();
        assert!(r.consistent);
        assert!(r.r_max.unwrap() > 1.012);
        assert!(r.removed > 0);
    }

    #[test]
    fn nested_holes_do_not_raise_lower_estimate() {
        let configs: Vec<ExperimentConfig> = [0.0, 0.2, 0.4, 0.6, 0.8].iter().map(|&r| halfplane(0, r)).collect();
        let reports = run_battery(&configs).unwrap();
        for w in reports.windows(2) {
            assert!(w[1].estimate.lower <= w[0].estimate.lower + 1e-12);
            assert!(w[1].estimate.upper <= w[0].estimate.upper + 1e-12);
        }
        assert_eq!(reports[3], run_gap_experiment(&configs[3]).unwrap());
    }

    #[test]
    fn mismatched_config_is_rejected() {
        let mut c = timefreq(0, 0.1);
        c.setup.atom = AtomIndex::Laguerre { n: 0, alpha: 1.0 };
        assert!(matches!(run_gap_experiment(&c), Err(Error::Config(_))));
        let mut c = halfplane(0, 0.1);
        c.setup.regime = MeasureRegime::Timefreq;
        assert!(matches!(run_gap_experiment(&c), Err(Error::Config(_))));
        let mut c = halfplane(0, 0.1);
        c.setup.dimension = 1;
        assert!(run_gap_experiment(&c).is_err());
    }

    #[test]
    fn config_file_formats() {
        let single = r#"{
            "regime": "timefreq",
            "atom": {"family": "hermite", "n": 1},
            "measure": {"kind": "lattice", "a": 0.5, "b": 0.5, "extent": 3},
            "holeRadii": [0.0, 0.5]
        }"#;
        let file = ExperimentFile::from_json(single).unwrap();
        let configs = file.expand();
        assert_eq!(configs.len(), 2);
        assert_eq!(configs[1].hole_radius, 0.5);
        assert_eq!(configs[0].setup.dimension, 8);

        let battery = r#"{"experiments": [
            {"regime": "halfplane", "atom": {"family": "laguerre", "n": 0, "alpha": 1},
             "measure": {"kind": "diskGrid", "delta": 0.3, "extent": 0.8},
             "dimension": 3, "holeRadii": [0.1, 0.2, 0.3]}
        ]}"#;
        assert_eq!(ExperimentFile::from_json(battery).unwrap().expand().len(), 3);
        assert!(ExperimentFile::from_json("{\"regime\": 3}").is_err());
    }

    #[test]
    fn csv_row_layout() {
        let r = run_gap_experiment(&timefreq(1, 0.25)).unwrap();
        let cells = r.csv_record();
        assert_eq!(cells.len(), CSV_HEADER.split(',').count());
        assert_eq!(cells[0], "timefreq");
        assert_eq!(cells[2], "");
        assert_eq!(cells[5], "");
        assert_eq!(cells[8].parse::<f64>().unwrap(), 0.25);
        assert_eq!(cells[12], "true");
        let csv = reports_to_csv(&[r]).unwrap();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 2);
    }
}
