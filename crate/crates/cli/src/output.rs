use std::path::{Path, PathBuf};

use serde::Serialize;
use zgv_core::refine::ZgvPoint;
use zgv_core::scanner::{CandidateOutcome, CandidateRecord};
use zgv_core::waveguide::DispersionGrid;

use crate::error::{CliError, CliResult};

/// `value` with 17 significant digits, positional when the decimal exponent
/// lies in `[-5, 16]`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}").replace("inf", "Infinity");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..=16).contains(&e) {
        format!("{:.*}", (16 - e).max(0) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

fn path_with(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes `<prefix>_zgv.csv` (rows ascending in `k`, then `ω`) and, with a
/// grid, `<prefix>_dispersion.csv`. Returns the written paths.
pub fn emit_results(points: &[ZgvPoint<f64>], grid: Option<&DispersionGrid<f64>>, prefix: &Path) -> CliResult<Vec<PathBuf>> {
    let mut written = vec![];
    let path = path_with(prefix, "_zgv.csv");
    let mut w = csv_writer(&path)?;
    let mut rows: Vec<&ZgvPoint<f64>> = points.iter().collect();
    rows.sort_by(|a, b| a.k.total_cmp(&b.k).then(a.omega.total_cmp(&b.omega)));
    w.write_record(["k", "omega", "classification", "residual", "omega_gap"]).map_err(|e| csv_err(&path, e))?;
    for p in rows {
        w.write_record([fmt17(p.k), fmt17(p.omega), p.classification.to_string(), fmt17(p.residual), fmt17(p.omega_gap)])
            .map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    if let Some(g) = grid {
        let path = path_with(prefix, "_dispersion.csv");
        let mut w = csv_writer(&path)?;
        w.write_record(["k", "branch", "omega"]).map_err(|e| csv_err(&path, e))?;
        for (k, ws) in g.k_values.iter().zip(&g.omega_branches) {
            for (b, om) in ws.iter().enumerate() {
                w.write_record([fmt17(*k), b.to_string(), fmt17(*om)]).map_err(|e| csv_err(&path, e))?;
            }
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the scan's candidate log to `<prefix>_candidates.csv`.
pub fn emit_candidates(log: &[CandidateRecord<f64>], prefix: &Path) -> CliResult<PathBuf> {
    let path = path_with(prefix, "_candidates.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(["target", "lambda_re", "lambda_im", "mu_re", "mu_im", "outcome", "k", "omega", "classification", "residual"])
        .map_err(|e| csv_err(&path, e))?;
    for rec in log {
        let c = &rec.candidate;
        let head = [c.source_target, c.lambda.re, c.lambda.im, c.mu.re, c.mu.im].map(fmt17);
        let tail: [String; 5] = match &rec.outcome {
            CandidateOutcome::Filtered(why) => [format!("filtered:{why}"), String::new(), String::new(), String::new(), String::new()],
            CandidateOutcome::RefineFailed(_) => ["refine_failed".into(), String::new(), String::new(), String::new(), String::new()],
            CandidateOutcome::Refined { k, omega, classification, residual } => {
                ["refined".into(), fmt17(*k), fmt17(*omega), classification.to_string(), fmt17(*residual)]
            }
        };
        w.write_record(head.iter().chain(tail.iter())).map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes `(k, ω)` pairs of the finite-difference oracle to `<prefix>_oracle.csv`.
pub fn emit_oracle(points: &[(f64, f64)], prefix: &Path) -> CliResult<PathBuf> {
    let path = path_with(prefix, "_oracle.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(["k", "omega"]).map_err(|e| csv_err(&path, e))?;
    for (k, om) in points {
        w.write_record([fmt17(*k), fmt17(*om)]).map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub input: serde_json::Value,
    pub config: serde_json::Value,
    pub timestamp_unix: u64,
    pub version: String,
    pub seed: u64,
    pub outputs: Vec<String>,
}

pub fn write_manifest(manifest: &RunManifest, prefix: &Path) -> CliResult<PathBuf> {
    let path = path_with(prefix, "_manifest.json");
    let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::io(&path, std::io::Error::other(e)))?;
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
