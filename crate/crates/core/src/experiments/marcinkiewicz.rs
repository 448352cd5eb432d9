//! Multiplier norms `‖m(A)‖_{p→p}` on `Z_K`, `A = I − P` for the simple walk,
//! as `K` grows, for (M)-symbols `λ^{iu}` and a symbol violating (M), together
//! with their Marcinkiewicz norms.

use super::config::{or_default, ExperimentConfig};
use super::{write_csv, write_json, Outcome};
use crate::error::{Error, Result};
use crate::fourier::Lattice;
use crate::mellin::{marcinkiewicz_norm, ConditionOrder, MarcinkiewiczReport, SweepOptions};
use crate::norms::PowerOptions;
use crate::riesz::{CyclicGroupSpec, LatticeMultiplier};
use crate::symbol::Symbol;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub symbol: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub p: f64,
    pub estimator: String,
    pub value: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSummary {
    pub gamma: Vec<usize>,
    pub norm: f64,
    pub stable: bool,
    pub unconverged_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolSummary {
    pub symbol: String,
    pub satisfies_m: bool,
    pub total: f64,
    pub divergent: bool,
    pub per_gamma: Vec<GammaSummary>,
    /// Lower bound at the largest `K` over the one at the smallest, per `p`.
    pub refinement_growth: Vec<(f64, f64)>,
}

struct Case {
    label: String,
    satisfies_m: bool,
    symbol: Symbol,
}

/// The default sweep range `2^{-10} … 2^{10}`.
pub fn sweep_options() -> SweepOptions {
    SweepOptions { j_min: -10, j_max: 10, ..SweepOptions::default() }
}

fn violating(cfg: &ExperimentConfig) -> Result<Case> {
    let (name, params) = match &cfg.symbol {
        Some(s) => (s.name.as_str(), s.params.clone()),
        None => ("chirp", Default::default()),
    };
    match name {
        "chirp" => {
            let a = params.get("a").copied().unwrap_or(1.0);
            Ok(Case {
                label: format!("chirp(a={a})"),
                satisfies_m: false,
                symbol: Symbol::new(1, "chirp", move |l| Complex64::from_polar(1.0, a / l[0])),
            })
        }
        "sin" => Ok(Case {
            label: "sin".into(),
            satisfies_m: false,
            symbol: Symbol::new(1, "sin", |l| Complex64::new(l[0].sin(), 0.0)),
        }),
        other => Err(Error::Parameter(format!("unknown violating symbol `{other}`; expected chirp or sin"))),
    }
}

/// `m(A)` on `Z_K`, with the zero mode removed.
pub fn cyclic_multiplier(k: usize, m: &Symbol) -> Result<LatticeMultiplier> {
    let spec = CyclicGroupSpec::simple_walk(k, 1)?;
    Ok(LatticeMultiplier::from_symbol(Lattice::cube(k, 1)?, |n| {
        let lambda = 1.0 - spec.mu_hat(n[0]);
        if lambda <= 1e-12 {
            Complex64::new(0.0, 0.0)
        } else {
            m.eval(&[lambda])
        }
    }))
}

fn summarize(case: &Case, report: &MarcinkiewiczReport, rows: &[NormRow], ks: &[usize], ps: &[f64]) -> SymbolSummary {
    let (k_lo, k_hi) = (ks.iter().min().copied(), ks.iter().max().copied());
    let lower = |k: usize, p: f64| {
        rows.iter().find(|r| r.symbol == case.label && r.k == k && r.p == p && r.estimator == "lower").map(|r| r.value)
    };
    let refinement_growth = match (k_lo, k_hi) {
        (Some(a), Some(b)) => ps.iter().filter_map(|p| Some((*p, lower(b, *p)? / lower(a, *p)?))).collect(),
        _ => Vec::new(),
    };
    SymbolSummary {
        symbol: case.label.clone(),
        satisfies_m: case.satisfies_m,
        total: report.total,
        divergent: report.divergent(),
        per_gamma: report
            .per_gamma
            .iter()
            .map(|g| GammaSummary {
                gamma: g.gamma.clone(),
                norm: g.norm,
                stable: g.stable,
                unconverged_blocks: g.unconverged_blocks,
            })
            .collect(),
        refinement_growth,
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ks = or_default(&cfg.sweep.k, &[16, 32, 64, 128]);
    let ps = or_default(&cfg.sweep.p, &[4.0]);
    let us = or_default(&cfg.sweep.u, &[1.0, 5.0, 10.0]);
    let mut cases: Vec<Case> = us
        .iter()
        .map(|u| Case { label: format!("imaginary_power(u={u})"), satisfies_m: true, symbol: Symbol::imaginary_power(vec![*u]) })
        .collect();
    cases.push(violating(cfg)?);

    let opts = PowerOptions { seed: cfg.seed, ..PowerOptions::default() };
    let (ks_ref, ps_ref) = (&ks, &ps);
    let points: Vec<(usize, usize, f64)> = (0..cases.len())
        .flat_map(|c| ks_ref.iter().flat_map(move |k| ps_ref.iter().map(move |p| (c, *k, *p))))
        .collect();
    let rows: Vec<NormRow> = points
        .par_iter()
        .map(|(c, k, p)| -> Result<Vec<NormRow>> {
            let op = cyclic_multiplier(*k, &cases[*c].symbol)?;
            let row = |estimator: &str, value: f64| NormRow {
                symbol: cases[*c].label.clone(),
                k: *k,
                p: *p,
                estimator: estimator.into(),
                value,
                seed: cfg.seed,
            };
            Ok(vec![row("lower", op.lower_bound(*p, &opts)), row("upper", op.upper_bound(*p))])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let rho = ConditionOrder::new(vec![1])?;
    let sweep = sweep_options();
    let reports = cases
        .par_iter()
        .map(|c| marcinkiewicz_norm(&c.symbol, &rho, &sweep))
        .collect::<Result<Vec<_>>>()?;
    let summaries: Vec<SymbolSummary> =
        cases.iter().zip(&reports).map(|(c, r)| summarize(c, r, &rows, &ks, &ps)).collect();

    let mut flags = Vec::new();
    for s in &summaries {
        if s.satisfies_m && s.divergent {
            flags.push(format!("{}: Marcinkiewicz sweep did not stabilize", s.symbol));
        }
        if !s.satisfies_m && !s.divergent {
            flags.push(format!("{}: violating symbol was not detected as divergent", s.symbol));
        }
    }
    let csv_path = cfg.output.join("marcinkiewicz-verify.csv");
    write_csv(&csv_path, &["symbol", "K", "p", "estimator", "value", "seed"], &rows)?;
    let json_path = cfg.output.join("marcinkiewicz-verify.json");
    write_json(&json_path, &summaries)?;
    Ok(Outcome { files: vec![csv_path, json_path], flags })
}
