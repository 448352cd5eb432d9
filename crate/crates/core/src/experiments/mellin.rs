//! Plancherel, inversion and closed-form checks of the log-grid Mellin
//! transform on seeded log-Gaussian symbols.

use super::config::{or_default, ExperimentConfig};
use super::{write_json, Outcome};
use crate::error::Result;
use crate::mellin::transform::{log_gaussian, log_gaussian_transform};
use crate::mellin::{mellin_transform, self_test, LinAxis, LogAxis};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MellinCase {
    pub d: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub k: Vec<f64>,
    pub plancherel_rel_err: f64,
    pub round_trip_rel_err: f64,
    /// Largest deviation from the closed-form transform at a few points.
    pub closed_form_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MellinReport {
    pub plancherel_rel_err: f64,
    pub round_trip_rel_err: f64,
    pub closed_form_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub cases: Vec<MellinCase>,
}

/// Grids used in dimension `d`.
pub fn axes(d: usize) -> Result<(Vec<LogAxis>, Vec<LinAxis>)> {
    if d == 1 {
        Ok((vec![LogAxis::standard()], vec![LinAxis::standard()]))
    } else {
        let s = LogAxis::new(201, (-8f64).exp(), 8f64.exp())?;
        let u = LinAxis::new(201, -20.0, 20.0)?;
        Ok((vec![s; d], vec![u; d]))
    }
}

fn case(d: usize, a: Vec<f64>, b: Vec<f64>, k: Vec<f64>) -> Result<MellinCase> {
    let (s_axes, u_axes) = axes(d)?;
    let m = log_gaussian(s_axes, &a, &b, &k)?;
    let st = self_test(&m, &u_axes)?;
    let mut closed_form_err = 0.0f64;
    for u0 in [-2.0, 0.0, 1.5] {
        let u = vec![u0; d];
        let got = mellin_transform(&m, &u)?.value;
        let want = log_gaussian_transform(&a, &b, &k, &u);
        closed_form_err = closed_form_err.max((got - want).norm());
    }
    Ok(MellinCase {
        d,
        a,
        b,
        k,
        plancherel_rel_err: st.plancherel_rel_err,
        round_trip_rel_err: st.round_trip_rel_err,
        closed_form_err,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let trials = cfg.system.trials.unwrap_or(20);
    let ds = or_default(&cfg.sweep.d, &[1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params = Vec::new();
    for &d in &ds {
        for _ in 0..trials {
            let mut draw = |lo: f64, hi: f64| (0..d).map(|_| rng.random_range(lo..hi)).collect::<Vec<f64>>();
            let (a, b, k) = (draw(0.5, 2.0), draw(-1.0, 1.0), draw(-3.0, 3.0));
            params.push((d, a, b, k));
        }
    }
    let cases = params
        .into_par_iter()
        .map(|(d, a, b, k)| case(d, a, b, k))
        .collect::<Result<Vec<_>>>()?;
    let max = |f: fn(&MellinCase) -> f64| cases.iter().map(f).fold(0.0, f64::max);
    let plancherel_rel_err = max(|c| c.plancherel_rel_err);
    let round_trip_rel_err = max(|c| c.round_trip_rel_err);
    let closed_form_err = max(|c| c.closed_form_err);
    let pass = plancherel_rel_err <= TOLERANCE && round_trip_rel_err <= TOLERANCE;
    let report = MellinReport {
        plancherel_rel_err,
        round_trip_rel_err,
        closed_form_err,
        tolerance: TOLERANCE,
        pass,
        cases,
    };
    let path = cfg.output.join("mellin-selftest.json");
    write_json(&path, &report)?;
    let flags = if pass {
        Vec::new()
    } else {
        vec![format!("Mellin self-test errors {plancherel_rel_err:e} / {round_trip_rel_err:e} exceed {TOLERANCE:e}")]
    };
    Ok(Outcome { files: vec![path], flags })
}
