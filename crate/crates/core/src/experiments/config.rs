//! JSON configuration of an experiment run.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Parameter grids. A missing field takes the experiment default; an empty
/// list is an empty sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub p: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub u: Option<Vec<f64>>,
    pub d: Option<Vec<usize>>,
    #[serde(rename = "K")]
    pub k: Option<Vec<usize>>,
    pub n_max: Option<Vec<usize>>,
    pub sigma: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
}

/// Basis or group parameters shared by the experiments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    /// `ou`, `laguerre`, `jacobi`, `zk`.
    pub kinds: Option<Vec<String>>,
    /// Hankel/Dunkl multiplicities.
    pub alpha: Option<Vec<f64>>,
    pub laguerre_alpha: Option<f64>,
    pub jacobi: Option<(f64, f64)>,
    pub branching: Option<usize>,
    pub generations: Option<usize>,
    /// Size of the Gaussian factor of a product space.
    pub gauss_nodes: Option<usize>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default)]
    pub symbol: Option<SymbolSpec>,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub seed: u64,
    /// Directory receiving the result files.
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>, output: impl Into<PathBuf>) -> Self {
        Self {
            experiment: experiment.into(),
            system: SystemSpec::default(),
            symbol: None,
            sweep: Sweep::default(),
            seed: 0,
            output: output.into(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a configuration; a relative `output` is resolved against the
    /// directory of the file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        if cfg.output.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.output = dir.join(&cfg.output);
            }
        }
        Ok(cfg)
    }

    /// Range checks common to all experiments.
    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        check_all(&s.p, "p", |p| p > 1.0 && p.is_finite())?;
        check_all(&s.v, "v", |v| v.is_finite() && v.abs() <= 100.0)?;
        check_all(&s.u, "u", |u| u.is_finite() && u.abs() <= 100.0)?;
        check_all(&s.d, "d", |d| (1..=4).contains(&d))?;
        check_all(&s.k, "K", |k| (2..=256).contains(&k))?;
        check_all(&s.n_max, "n_max", |n| (1..=128).contains(&n))?;
        check_all(&s.sigma, "sigma", |x| x > 0.0 && x.is_finite())?;
        check_all(&s.eps, "eps", |e| e > 0.0 && e < 0.5)?;
        let sys = &self.system;
        check_all(&sys.alpha, "alpha", |a| (0.0..=10.0).contains(&a))?;
        if let Some(a) = sys.laguerre_alpha {
            check_one(a > -1.0 && a <= 10.0, "laguerre_alpha", a)?;
        }
        if let Some((a, b)) = sys.jacobi {
            check_one(a > -1.0 && b > -1.0 && a <= 10.0 && b <= 10.0, "jacobi", (a, b))?;
        }
        if let Some(b) = sys.branching {
            check_one((2..=16).contains(&b), "branching", b)?;
        }
        if let Some(g) = sys.generations {
            check_one((1..=12).contains(&g), "generations", g)?;
        }
        if let Some(n) = sys.gauss_nodes {
            check_one((1..=64).contains(&n), "gauss_nodes", n)?;
        }
        if let Some(t) = sys.trials {
            check_one(t <= 10_000, "trials", t)?;
        }
        Ok(())
    }
}

fn check_one<T: std::fmt::Debug>(ok: bool, name: &str, value: T) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {value:?} is out of range")))
    }
}

fn check_all<T: Copy + std::fmt::Debug>(values: &Option<Vec<T>>, name: &str, ok: impl Fn(T) -> bool) -> Result<()> {
    values.iter().flatten().try_for_each(|v| check_one(ok(*v), name, *v))
}

/// `values` or the default when the field is absent.
pub(crate) fn or_default<T: Clone>(values: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    values.clone().unwrap_or_else(|| default.to_vec())
}
