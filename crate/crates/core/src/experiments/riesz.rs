//! Dimension sweep of discrete Riesz transforms and Riesz factors on `Z_K^d`.

use super::config::{or_default, ExperimentConfig};
use super::{write_csv, write_json, Outcome};
use crate::error::Result;
use crate::norms::PowerOptions;
use crate::riesz::{
    discrete_riesz_operator, riesz_factor_lattice, vector_l2_norm, vector_lower_bound, CyclicGroupSpec,
    LatticeMultiplier, RieszRow,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

pub const RIESZ_HEADER: &[&str] = &["K", "d", "p", "r", "estimator", "value", "seed"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub r: String,
    pub sigma: f64,
    pub estimator: String,
    pub value: f64,
    pub seed: u64,
}

/// Spread of one estimator across dimensions, `(max − min)/min`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variation {
    pub operator: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub p: f64,
    pub estimator: String,
    pub dims: Vec<usize>,
    pub values: Vec<f64>,
    pub variation: f64,
}

/// `(estimator, value)` pairs for a scalar multiplier at exponent `p`.
fn scalar_estimates(op: &LatticeMultiplier, p: f64, opts: &PowerOptions) -> Vec<(&'static str, f64)> {
    if p == 2.0 {
        vec![("exact", op.l2_norm())]
    } else {
        vec![("lower", op.lower_bound(p, opts)), ("upper", op.upper_bound(p))]
    }
}

fn point_rows(k: usize, d: usize, p: f64, sigmas: &[f64], seed: u64) -> Result<(Vec<RieszRow>, Vec<FactorRow>)> {
    let spec = CyclicGroupSpec::simple_walk(k, d)?;
    let opts = PowerOptions { seed, ..PowerOptions::default() };
    let ops: Vec<LatticeMultiplier> = (0..d).map(|r| discrete_riesz_operator(&spec, r)).collect::<Result<_>>()?;
    let riesz_row = |r: &str, estimator: &str, value: f64| RieszRow {
        k,
        d,
        p,
        r: r.to_string(),
        estimator: estimator.to_string(),
        value,
        seed,
    };
    let mut rows: Vec<RieszRow> =
        scalar_estimates(&ops[0], p, &opts).into_iter().map(|(e, v)| riesz_row("0", e, v)).collect();
    if p == 2.0 {
        rows.push(riesz_row("all", "exact", vector_l2_norm(&ops)));
    } else {
        rows.push(riesz_row("all", "lower", vector_lower_bound(&ops, p, &opts)?));
    }
    let mut factors = Vec::new();
    for &sigma in sigmas {
        let op = riesz_factor_lattice(&spec, 0, sigma)?;
        factors.extend(scalar_estimates(&op, p, &opts).into_iter().map(|(e, value)| FactorRow {
            k,
            d,
            p,
            r: "0".into(),
            sigma,
            estimator: e.to_string(),
            value,
            seed,
        }));
    }
    Ok((rows, factors))
}

fn variations(entries: impl Iterator<Item = (String, usize, f64, String, usize, f64)>) -> Vec<Variation> {
    let mut groups: BTreeMap<(String, usize, String, String), (f64, Vec<usize>, Vec<f64>)> = BTreeMap::new();
    for (operator, k, p, estimator, d, value) in entries {
        let e = groups.entry((operator, k, format!("{p}"), estimator)).or_insert((p, Vec::new(), Vec::new()));
        e.1.push(d);
        e.2.push(value);
    }
    groups
        .into_iter()
        .map(|((operator, k, _, estimator), (p, dims, values))| {
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(0.0, f64::max);
            Variation { operator, k, p, estimator, dims, values, variation: (hi - lo) / lo }
        })
        .collect()
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ks = or_default(&cfg.sweep.k, &[8]);
    let ds = or_default(&cfg.sweep.d, &[1, 2, 3]);
    let ps = or_default(&cfg.sweep.p, &[1.5, 2.0, 3.0]);
    let sigmas = or_default(&cfg.sweep.sigma, &[0.5]);
    let (ds_ref, ps_ref) = (&ds, &ps);
    let points: Vec<(usize, usize, f64)> = ks
        .iter()
        .flat_map(|k| ds_ref.iter().flat_map(move |d| ps_ref.iter().map(move |p| (*k, *d, *p))))
        .collect();
    let results = points
        .par_iter()
        .map(|(k, d, p)| point_rows(*k, *d, *p, &sigmas, cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    let (rows, factors): (Vec<Vec<RieszRow>>, Vec<Vec<FactorRow>>) = results.into_iter().unzip();
    let rows: Vec<RieszRow> = rows.into_iter().flatten().collect();
    let factors: Vec<FactorRow> = factors.into_iter().flatten().collect();

    let scalar = rows
        .iter()
        .filter(|r| r.r == "0" && r.estimator != "upper")
        .map(|r| ("discrete_riesz".to_string(), r.k, r.p, r.estimator.clone(), r.d, r.value));
    let vector = rows
        .iter()
        .filter(|r| r.r == "all")
        .map(|r| ("discrete_riesz_vector".to_string(), r.k, r.p, r.estimator.clone(), r.d, r.value));
    let factor = factors
        .iter()
        .filter(|r| r.estimator != "upper")
        .map(|r| (format!("riesz_factor[sigma={}]", r.sigma), r.k, r.p, r.estimator.clone(), r.d, r.value));
    let summary = variations(scalar.chain(vector).chain(factor));

    let riesz_path = cfg.output.join("riesz-dim-sweep.csv");
    write_csv(&riesz_path, RIESZ_HEADER, &rows)?;
    let factor_path = cfg.output.join("riesz-factor.csv");
    write_csv(&factor_path, &["K", "d", "p", "r", "sigma", "estimator", "value", "seed"], &factors)?;
    let json_path = cfg.output.join("riesz-dim-sweep.json");
    write_json(&json_path, &summary)?;
    let flags = rows
        .iter()
        .filter(|r| !r.value.is_finite())
        .map(|r| format!("K = {} d = {} p = {}: non-finite {}", r.k, r.d, r.p, r.estimator))
        .collect();
    Ok(Outcome { files: vec![riesz_path, factor_path, json_path], flags })
}
