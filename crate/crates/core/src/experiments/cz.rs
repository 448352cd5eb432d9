//! Calderón-Zygmund decompositions of random nonnegative inputs on
//! `(R, γ) × Z_K`, with every property checked per trial.

use super::config::ExperimentConfig;
use super::{write_csv, write_json, Outcome};
use crate::error::Result;
use crate::gaussprod::{cz_decompose, CzExport, CzProperties, DyadicSystem, HomogeneousSpace, ProductSpace};
use crate::grid::WeightedGrid;
use crate::quadrature::gauss_hermite;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub threshold: f64,
    pub bad_parts: usize,
    pub f_l1: f64,
    pub good_l1: f64,
    pub bad_l1: f64,
    pub all_properties: bool,
}

/// Number of trials passing each property.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PropertyCounts {
    pub reconstruction: usize,
    pub norm_bound: usize,
    pub good_bounded: usize,
    pub disjoint_supports: usize,
    pub mean_zero: usize,
    pub slice_measure: usize,
    pub averages_comparable: usize,
    pub level_set: usize,
    pub all: usize,
}

impl PropertyCounts {
    fn add(&mut self, p: &CzProperties) {
        self.reconstruction += p.reconstruction as usize;
        self.norm_bound += p.norm_bound as usize;
        self.good_bounded += p.good_bounded as usize;
        self.disjoint_supports += p.disjoint_supports as usize;
        self.mean_zero += p.mean_zero as usize;
        self.slice_measure += p.slice_measure as usize;
        self.averages_comparable += p.averages_comparable as usize;
        self.level_set += p.level_set as usize;
        self.all += p.all() as usize;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzSuiteReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub branching: usize,
    pub generations: usize,
    pub gauss_nodes: usize,
    pub c_mu: f64,
    pub trials: usize,
    pub passed: PropertyCounts,
    pub example: Option<CzExport>,
}

/// `(R, γ)` on `gauss_nodes` Gauss-Hermite nodes times a regular dyadic
/// system over `Z_K`.
pub fn product_space(k: usize, branching: usize, generations: usize, gauss_nodes: usize) -> Result<ProductSpace> {
    let first = WeightedGrid::from_rule(&gauss_hermite(gauss_nodes)?, format!("hermite[{gauss_nodes}]"))?;
    let dyadic = DyadicSystem::regular(HomogeneousSpace::cyclic(k)?, branching, generations)?;
    Ok(ProductSpace::new(first, dyadic))
}

/// Heavy-tailed nonnegative input and a threshold above every slice average.
pub fn random_input(product: &ProductSpace, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
    let n2 = product.n2();
    let f: Vec<f64> = (0..product.len()).map(|_| rng.random_range(0.0f64..1.0).powi(4) * 10.0).collect();
    let mu = product.second().mu();
    let total = product.second().total();
    let top = f
        .chunks(n2)
        .map(|c| c.iter().zip(mu).map(|(v, m)| v * m).sum::<f64>() / total)
        .fold(0.0, f64::max);
    (f, top * rng.random_range(1.0..3.0))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let k = cfg.sweep.k.as_ref().and_then(|v| v.first().copied()).unwrap_or(16);
    let branching = cfg.system.branching.unwrap_or(4);
    let generations = cfg.system.generations.unwrap_or(3);
    let gauss_nodes = cfg.system.gauss_nodes.unwrap_or(3);
    let trials = cfg.system.trials.unwrap_or(100);
    let product = product_space(k, branching, generations, gauss_nodes)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inputs: Vec<(Vec<f64>, f64)> = (0..trials).map(|_| random_input(&product, &mut rng)).collect();
    let exports = inputs
        .par_iter()
        .map(|(f, s)| cz_decompose(f, &product, *s)?.export(f, &product))
        .collect::<Result<Vec<_>>>()?;

    let mut passed = PropertyCounts::default();
    let rows: Vec<TrialRow> = exports
        .iter()
        .enumerate()
        .map(|(trial, e)| {
            passed.add(&e.properties);
            TrialRow {
                trial,
                threshold: e.threshold,
                bad_parts: e.cubes.len(),
                f_l1: e.norms.f_l1,
                good_l1: e.norms.good_l1,
                bad_l1: e.norms.bad_l1,
                all_properties: e.properties.all(),
            }
        })
        .collect();
    let report = CzSuiteReport {
        k,
        branching,
        generations,
        gauss_nodes,
        c_mu: product.dyadic().doubling_constant(),
        trials,
        passed,
        example: exports.into_iter().next(),
    };
    let csv_path = cfg.output.join("cz-suite.csv");
    write_csv(&csv_path, &["trial", "threshold", "bad_parts", "f_l1", "good_l1", "bad_l1", "all_properties"], &rows)?;
    let json_path = cfg.output.join("cz-suite.json");
    write_json(&json_path, &report)?;
    let flags = rows
        .iter()
        .filter(|r| !r.all_properties)
        .map(|r| format!("trial {}: a decomposition property failed", r.trial))
        .collect();
    Ok(Outcome { files: vec![csv_path, json_path], flags })
}
