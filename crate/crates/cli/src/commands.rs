use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::Path;

use phasegap::certify::{
    bergman_gap_bound, certify_stft_chain, certify_wavelet_chain, stft_gap_bound, wavelet_gap_bound, SamplingBounds,
};
use phasegap::sampling::{reports_to_csv, run_battery, ExperimentFile};
use phasegap::special::{HermiteIndex, LaguerreIndex};
use phasegap::suites::{rows_to_csv, run_suite, Suite};
use serde_json::json;

use crate::heatmap::render_report;
use crate::manifest::RunManifest;
use crate::{BoundArgs, BoundRegime, CertifyArgs, ChainRegime, ExperimentArgs, SuiteArg, VerifyArgs};

/// `Ok(true)` when everything requested passed.
pub type Outcome = Result<bool, Box<dyn Error>>;

fn require_alpha(alpha: Option<f64>, regime: &str) -> Result<f64, String> {
    alpha.ok_or_else(|| format!("--alpha is required for the {regime} regime"))
}

fn emit(text: &str) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()
}

fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    fs::write(path, text).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

pub fn bound(args: &BoundArgs) -> Outcome {
    let ab = SamplingBounds::new(args.lower, args.upper)?;
    let gap = match args.regime {
        BoundRegime::Wavelet => {
            let alpha = require_alpha(args.alpha, "wavelet")?;
            wavelet_gap_bound(LaguerreIndex::new(args.n, alpha)?, ab)?
        }
        BoundRegime::Bergman => bergman_gap_bound(require_alpha(args.alpha, "bergman")?, ab)?,
        BoundRegime::Stft => stft_gap_bound(HermiteIndex(args.n), ab)?,
    };
    let doc = serde_json::to_string_pretty(&gap)?;
    if args.json {
        emit(&format!("{doc}\n"))?;
    } else {
        emit(&format!(
            "r_max = {:.16e}\nconstant = {:.16e}\nproof_r_max = {:.16e}\n{doc}\n",
            gap.r_max, gap.constant, gap.proof_r_max
        ))?;
    }
    if let Some(path) = &args.manifest {
        let params = json!({
            "regime": format!("{:?}", args.regime).to_lowercase(),
            "n": args.n,
            "alpha": args.alpha,
            "A": args.lower,
            "B": args.upper,
        });
        RunManifest::new("bound", params).write(path)?;
    }
    Ok(true)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Kernels => vec![Suite::Kernels],
        SuiteArg::Lemmas => vec![Suite::Lemmas],
        SuiteArg::Geometry => vec![Suite::Geometry],
        SuiteArg::Moyal => vec![Suite::Moyal],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    for suite in &suites {
        rows.extend(run_suite(*suite, args.seed)?);
    }
    let csv = rows_to_csv(&rows)?;
    match &args.out {
        Some(path) => write_text(path, &csv)?,
        None => emit(&csv)?,
    }
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!("FAILED {}: {:e} > {:e}", r.check, r.max_error, r.tolerance);
    }
    if let Some(path) = &args.manifest {
        let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
        let mut m = RunManifest::new("verify", json!({ "suites": names }));
        m.seed = Some(args.seed);
        m.outputs = args.out.iter().cloned().collect();
        m.write(path)?;
    }
    Ok(rows.iter().all(|r| r.pass))
}

pub fn certify(args: &CertifyArgs) -> Outcome {
    let ab = SamplingBounds::new(args.lower, args.upper)?;
    let cert = match args.regime {
        ChainRegime::Wavelet => {
            let idx = LaguerreIndex::new(args.n, require_alpha(args.alpha, "wavelet")?)?;
            certify_wavelet_chain(idx, args.radius, args.kappa, ab, args.grid)?
        }
        ChainRegime::Stft => certify_stft_chain(HermiteIndex(args.n), args.radius, ab, args.grid)?,
    };
    let mut doc = cert.to_json()?;
    doc.push('\n');
    match &args.out {
        Some(path) => write_text(path, &doc)?,
        None => emit(&doc)?,
    }
    if !cert.cap_dominates {
        eprintln!(
            "FAILED sampled supremum {:e} exceeds the analytic cap {:e}",
            cert.sampled_sup, cert.analytic_cap
        );
    }
    if let Some(path) = &args.manifest {
        let params = json!({
            "regime": format!("{:?}", args.regime).to_lowercase(),
            "n": args.n,
            "alpha": args.alpha,
            "R": args.radius,
            "kappa": args.kappa,
            "A": args.lower,
            "B": args.upper,
            "grid": args.grid,
        });
        let mut m = RunManifest::new("certify", params);
        m.outputs = args.out.iter().cloned().collect();
        m.write(path)?;
    }
    Ok(cert.cap_dominates)
}

pub fn experiment(args: &ExperimentArgs) -> Outcome {
    let text =
        fs::read_to_string(&args.config).map_err(|e| format!("cannot read config {}: {e}", args.config.display()))?;
    let configs = ExperimentFile::from_json(&text)?.expand();
    if configs.is_empty() {
        return Err("experiment config lists no hole radii".into());
    }
    let reports = run_battery(&configs)?;
    fs::create_dir_all(&args.out_dir)?;

    let json_path = args.out_dir.join("reports.json");
    let csv_path = args.out_dir.join("reports.csv");
    let mut doc = serde_json::to_string_pretty(&reports)?;
    doc.push('\n');
    write_text(&json_path, &doc)?;
    write_text(&csv_path, &reports_to_csv(&reports)?)?;
    let mut outputs = vec![json_path, csv_path];

    if args.heatmap {
        for (i, (config, report)) in configs.iter().zip(&reports).enumerate() {
            let path = args.out_dir.join(format!("heatmap_{i:03}.svg"));
            write_text(&path, &render_report(&config.setup, report)?)?;
            outputs.push(path);
        }
    }

    let mut m = RunManifest::new("experiment", json!({ "heatmap": args.heatmap, "runs": configs.len() }));
    m.config = Some(args.config.clone());
    m.outputs = outputs;
    m.write(&args.out_dir.join("manifest.json"))?;

    for r in reports.iter().filter(|r| !r.consistent) {
        eprintln!(
            "INCONSISTENT {:?} {:?}: hole radius {} exceeds R_max {:?}",
            r.regime, r.atom, r.hole_radius, r.r_max
        );
    }
    Ok(reports.iter().all(|r| r.consistent))
}
