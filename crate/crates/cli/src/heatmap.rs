//! Rect-grid SVG heatmaps of `|⟨e_0, π(z) g⟩|` with the sampling points and
//! the hole outline on top. Half-plane data is drawn in disk coordinates.

use std::error::Error;
use std::fmt::Write as _;

use phasegap::geometry::{moebius, moebius_inv, DiskPoint, UpperHalfPoint};
use phasegap::sampling::{
    atom_coefficients, punch_hole, DiscreteMeasure, ExperimentSetup, GapReport, MeasureRegime, MeasureSpec,
};
use phasegap::Complex64;

const PIXELS: usize = 64;
const CELL: f64 = 8.0;
const SIZE: f64 = PIXELS as f64 * CELL;

/// Linear ramp between two endpoint colours.
fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lo = [68.0, 1.0, 84.0];
    let hi = [253.0, 231.0, 37.0];
    let c: Vec<u8> = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| (a + (b - a) * t).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

struct View {
    half: f64,
}

impl View {
    fn to_svg(&self, p: Complex64) -> (f64, f64) {
        let x = (p.re + self.half) / (2.0 * self.half) * SIZE;
        let y = (self.half - p.im) / (2.0 * self.half) * SIZE;
        (x, y)
    }

    fn pixel_center(&self, i: usize, j: usize) -> Complex64 {
        let step = 2.0 * self.half / PIXELS as f64;
        Complex64::new(
            -self.half + (i as f64 + 0.5) * step,
            self.half - (j as f64 + 0.5) * step,
        )
    }
}

pub fn render_report(setup: &ExperimentSetup, report: &GapReport) -> Result<String, Box<dyn Error>> {
    let (view, extent) = match setup.measure {
        MeasureSpec::Lattice { extent, .. } => (View { half: extent }, extent),
        MeasureSpec::DiskGrid { extent, .. } => (View { half: 1.0 }, extent),
    };
    let halfplane = setup.regime == MeasureRegime::Halfplane;

    // pixel centres, in view coordinates, that lie inside the sampled region
    let mut cells = Vec::new();
    let mut domain_points = Vec::new();
    for j in 0..PIXELS {
        for i in 0..PIXELS {
            let p = view.pixel_center(i, j);
            if halfplane {
                if p.norm() > extent {
                    continue;
                }
                domain_points.push(moebius(DiskPoint::from_complex(p)?).to_complex());
            } else {
                domain_points.push(p);
            }
            cells.push((i, j));
        }
    }
    let pixels = DiscreteMeasure::unit(setup.regime, domain_points)?;
    let values: Vec<f64> = atom_coefficients(&pixels, setup.atom, 1, &setup.grid)?
        .iter()
        .map(|row| row[0].norm())
        .collect();
    let peak = values.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )?;
    writeln!(
        svg,
        r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    )?;
    for (&(i, j), v) in cells.iter().zip(&values) {
        writeln!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
            i as f64 * CELL,
            j as f64 * CELL,
            color(v / peak)
        )?;
    }

    let center = Complex64::new(report.hole_center[0], report.hole_center[1]);
    let kept = punch_hole(&setup.measure.build()?, center, report.hole_radius)?;
    for p in kept.points() {
        let z = p.to_complex();
        let shown = if halfplane {
            moebius_inv(UpperHalfPoint::from_complex(z)?).to_complex()
        } else {
            z
        };
        let (x, y) = view.to_svg(shown);
        writeln!(
            svg,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="1.2" fill="#ffffff" fill-opacity="0.6"/>"##
        )?;
    }

    // A pseudohyperbolic disk around c is a Euclidean disk in the unit disk.
    let (hole_center, hole_radius) = if halfplane {
        let c = moebius_inv(UpperHalfPoint::from_complex(center)?).to_complex();
        let r = report.hole_radius;
        let denom = 1.0 - r * r * c.norm_sqr();
        (c * (1.0 - r * r) / denom, r * (1.0 - c.norm_sqr()) / denom)
    } else {
        (center, report.hole_radius)
    };
    if hole_radius > 0.0 {
        let (x, y) = view.to_svg(hole_center);
        let r = hole_radius / (2.0 * view.half) * SIZE;
        writeln!(
            svg,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="none" stroke="#e31a1c" stroke-width="2"/>"##
        )?;
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}
