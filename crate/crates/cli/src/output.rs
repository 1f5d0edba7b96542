//! The results table and the run manifest, written atomically.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use mmsurf::mmcheck::MMReport;
use mmsurf::montecarlo::{Estimate, Method};

/// One line of `results.csv`. Columns are in the documented order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub method: String,
    pub mean_re: f64,
    pub mean_im: f64,
    pub stderr: f64,
    pub n_eff: f64,
    pub sigma_discrepancy: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn estimate(quantity: &str, e: &Estimate) -> Self {
        Self {
            quantity: quantity.to_string(),
            method: e.method.tag().to_string(),
            mean_re: e.mean.re,
            mean_im: e.mean.im,
            stderr: e.stderr,
            n_eff: e.n_eff,
            sigma_discrepancy: None,
            pass: None,
        }
    }

    /// `a − b`, passing within 3σ, or within `tol` when both are exact.
    pub fn comparison(quantity: &str, a: &Estimate, b: &Estimate, tol: f64) -> Self {
        let diff = a.mean - b.mean;
        let exact = a.method.is_exact() && b.method.is_exact();
        let sigma = if exact { 0.0 } else { a.sigma_distance(b) };
        let pass = if exact { diff.norm() <= tol } else { sigma <= 3.0 };
        Self {
            quantity: quantity.to_string(),
            method: format!("{}-{}", a.method, b.method),
            mean_re: diff.re,
            mean_im: diff.im,
            stderr: a.stderr.hypot(b.stderr),
            n_eff: a.n_eff.min(b.n_eff),
            sigma_discrepancy: Some(sigma),
            pass: Some(pass),
        }
    }

    /// `lhs − rhs` of a Makeenko–Migdal comparison.
    pub fn report(quantity: &str, r: &MMReport) -> Self {
        let diff = r.lhs.mean - r.rhs.mean;
        Self {
            quantity: quantity.to_string(),
            method: format!("{}-{}", r.lhs.method, r.rhs.method),
            mean_re: diff.re,
            mean_im: diff.im,
            stderr: r.combined_stderr,
            n_eff: r.lhs.n_eff.min(r.rhs.n_eff),
            sigma_discrepancy: Some(r.discrepancy_sigma),
            pass: Some(r.passed),
        }
    }

    /// A deterministic check whose value is a deviation.
    pub fn check(quantity: &str, method: Method, value: f64, pass: bool) -> Self {
        Self {
            quantity: quantity.to_string(),
            method: method.tag().to_string(),
            mean_re: value,
            mean_im: 0.0,
            stderr: 0.0,
            n_eff: f64::INFINITY,
            sigma_discrepancy: Some(0.0),
            pass: Some(pass),
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: Option<String>,
    pub seed: u64,
    pub chains: usize,
    pub version: &'static str,
    pub rows: usize,
    pub passed: bool,
    pub wall_time_s: f64,
}

pub fn csv_bytes(rows: &[Row]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_outputs(dir: &Path, rows: &[Row], manifest: &Manifest) -> std::io::Result<()> {
    let json = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
    write_atomic(dir, "results.csv", &csv_bytes(rows))?;
    write_atomic(dir, "manifest.json", &json)
}
