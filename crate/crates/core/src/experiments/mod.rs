//! Named experiments driven by [`ExperimentConfig`], writing CSV and JSON
//! files into the configured output directory.

pub mod config;
pub mod conformance;
pub mod cz;
pub mod growth;
pub mod marcinkiewicz;
pub mod mellin;
pub mod riesz;

pub use config::{ExperimentConfig, Sweep, SymbolSpec, SystemSpec};

use crate::error::{Error, Result};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Experiment names with a one-line description.
pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("imaginary-growth", "p-norm lower bounds of (L+I)^{iv} against v for OU, Laguerre, Jacobi and Z_K"),
    ("riesz-dim-sweep", "discrete Riesz transforms and Riesz factors on Z_K^d across dimensions"),
    ("marcinkiewicz-verify", "multiplier norms on refining cyclic groups for (M)-symbols and a violating symbol"),
    ("mellin-selftest", "Plancherel and inversion errors of the log-grid Mellin transform"),
    ("cz-suite", "Calderón-Zygmund decompositions on random nonnegative inputs"),
    ("hankel-dunkl-conformance", "closed forms, involutions and convolution identities of Hankel and Dunkl transforms"),
];

/// Files written by a run and the flags it raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Numerical findings that contradict the expected behavior.
    pub flags: Vec<String>,
}

pub fn names() -> Vec<&'static str> {
    EXPERIMENTS.iter().map(|(n, _)| *n).collect()
}

/// Validates `cfg` and runs the named experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let run_fn: fn(&ExperimentConfig) -> Result<Outcome> = match cfg.experiment.as_str() {
        "imaginary-growth" => growth::run,
        "riesz-dim-sweep" => riesz::run,
        "marcinkiewicz-verify" => marcinkiewicz::run,
        "mellin-selftest" => mellin::run,
        "cz-suite" => cz::run,
        "hankel-dunkl-conformance" => conformance::run,
        other => {
            return Err(Error::UnknownExperiment { name: other.to_string(), available: names().join(", ") });
        }
    };
    std::fs::create_dir_all(&cfg.output)?;
    run_fn(cfg)
}

/// Writes `rows` under an explicit header, so an empty sweep still yields
/// the header line.
pub(crate) fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(BufWriter::new(File::create(path)?));
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub max_residual: f64,
}

pub fn line_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - slope * a - intercept).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    Some(LineFit {
        slope,
        intercept,
        r_squared: if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot },
        max_residual: residuals.iter().fold(0.0, |m, r| m.max(r.abs())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name_lists_alternatives() {
        let cfg = ExperimentConfig::new("nope", std::env::temp_dir());
        match run(&cfg) {
            Err(Error::UnknownExperiment { available, .. }) => assert!(available.contains("cz-suite")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let f = line_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept + 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14 && f.max_residual < 1e-14);
        assert!(line_fit(&[1.0], &[1.0]).is_none());
    }
}
