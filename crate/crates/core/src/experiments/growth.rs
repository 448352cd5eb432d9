//! Growth of `‖(L+I)^{iv}‖_{p→p}` in `v`.
//!
//! On the Hermite, Laguerre and Jacobi systems the bound is the largest ratio
//! `‖T f_w‖_p / ‖f_w‖_p` over the generating family `f_w = Σ_k w^k/√k! φ_k`,
//! `w` on a polar grid. All `f_w` lie in the retained span, where the grid
//! integrates `|f|⁴` exactly. On `Z_K` the power-iteration lower bound of the
//! lattice multiplier is used.

use super::config::{or_default, ExperimentConfig};
use super::{line_fit, write_csv, write_json, LineFit, Outcome};
use crate::bases::{build_system, ou_system, Basis, JacobiBasis, LaguerreBasis};
use crate::error::{Error, Result};
use crate::fourier::Lattice;
use crate::norms::PowerOptions;
use crate::riesz::{CyclicGroupSpec, LatticeMultiplier};
use crate::spectral::SpectralSystem;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const KINDS: &[&str] = &["ou", "laguerre", "jacobi", "zk"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub system: String,
    pub size: usize,
    pub p: f64,
    pub v: f64,
    pub estimator: String,
    pub value: f64,
    pub seed: u64,
}

/// Fits of `ln value` against `v` and against `ln(1+v)` for one curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub system: String,
    pub size: usize,
    pub p: f64,
    pub linear: Option<LineFit>,
    pub logarithmic: Option<LineFit>,
    /// Average slope in `v` of the logarithmic fit over the swept range.
    pub secant_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contrast {
    pub size: usize,
    pub p: f64,
    pub ou_slope: f64,
    pub zk_secant_slope: f64,
    pub zk_log_coefficient: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub fits: Vec<GrowthFit>,
    pub contrasts: Vec<Contrast>,
}

/// Coefficients of the generating family, `w = r e^{iθ}`.
pub fn generating_family(modes: usize) -> Vec<Vec<Complex64>> {
    let mut family = Vec::new();
    for i in 1..=16 {
        for j in 0..=48 {
            let w = Complex64::from_polar(0.25 * i as f64, PI * j as f64 / 48.0);
            let mut c = Vec::with_capacity(modes);
            let mut term = Complex64::new(1.0, 0.0);
            for k in 0..modes {
                c.push(term);
                term *= w / ((k + 1) as f64).sqrt();
            }
            family.push(c);
        }
    }
    family
}

/// Largest `‖T c‖_p / ‖c‖_p` over the family for the diagonal `T` with
/// entries `(λ_k + 1)^{iv}`, `λ_k` the eigenvalues of a one-axis system.
pub fn family_lower_bound(system: &SpectralSystem, family: &[Vec<Complex64>], v: f64, p: f64) -> Result<f64> {
    if system.dim() != 1 {
        return Err(Error::Parameter("the generating family is one-dimensional".into()));
    }
    let eig = system.axes()[0].eigenvalues();
    let diag: Vec<Complex64> = eig.iter().map(|l| Complex64::from_polar(1.0, v * (l + 1.0).ln())).collect();
    let grid = system.grid();
    let ratios = family
        .par_iter()
        .map(|c| -> Result<f64> {
            let base = grid.lp_norm(&system.synthesis(c)?, p);
            let tc: Vec<Complex64> = c.iter().zip(&diag).map(|(a, b)| a * b).collect();
            Ok(grid.lp_norm(&system.synthesis(&tc)?, p) / base)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// `(A + I)^{iv}` on `Z_K`, `A = I − P` for the simple random walk.
pub fn cyclic_shifted_power(k: usize, v: f64) -> Result<LatticeMultiplier> {
    let spec = CyclicGroupSpec::simple_walk(k, 1)?;
    Ok(LatticeMultiplier::from_symbol(Lattice::cube(k, 1)?, |n| {
        Complex64::from_polar(1.0, v * (2.0 - spec.mu_hat(n[0])).ln())
    }))
}

fn system_for(kind: &str, size: usize, cfg: &ExperimentConfig) -> Result<SpectralSystem> {
    match kind {
        "ou" => ou_system(1, size),
        "laguerre" => build_system(&[Basis::Laguerre(LaguerreBasis::new(cfg.system.laguerre_alpha.unwrap_or(0.0), size)?)]),
        "jacobi" => {
            let (a, b) = cfg.system.jacobi.unwrap_or((0.0, 0.5));
            build_system(&[Basis::Jacobi(JacobiBasis::new(a, b, size)?)])
        }
        other => Err(Error::Parameter(format!("unknown system kind `{other}`; expected one of {KINDS:?}"))),
    }
}

/// Lower bounds for every `v` of the sweep on one system.
pub fn growth_curve(kind: &str, size: usize, p: f64, vs: &[f64], cfg: &ExperimentConfig) -> Result<Vec<GrowthRow>> {
    let row = |v: f64, estimator: &str, value: f64| GrowthRow {
        system: kind.to_string(),
        size,
        p,
        v,
        estimator: estimator.to_string(),
        value,
        seed: cfg.seed,
    };
    if kind == "zk" {
        let opts = PowerOptions { seed: cfg.seed, ..PowerOptions::default() };
        return vs.iter().map(|v| Ok(row(*v, "power_lower", cyclic_shifted_power(size, *v)?.lower_bound(p, &opts)))).collect();
    }
    let system = system_for(kind, size, cfg)?;
    let family = generating_family(system.num_modes());
    vs.iter().map(|v| Ok(row(*v, "span_lower", family_lower_bound(&system, &family, *v, p)?))).collect()
}

pub fn fit_curve(rows: &[GrowthRow]) -> Option<GrowthFit> {
    let first = rows.first()?;
    let v: Vec<f64> = rows.iter().map(|r| r.v).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.value.ln()).collect();
    let lv: Vec<f64> = v.iter().map(|x| x.abs().ln_1p()).collect();
    let logarithmic = line_fit(&lv, &y);
    let v_max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Some(GrowthFit {
        system: first.system.clone(),
        size: first.size,
        p: first.p,
        linear: line_fit(&v, &y),
        logarithmic,
        secant_slope: logarithmic.filter(|_| v_max > 0.0).map(|f| f.slope * v_max.ln_1p() / v_max),
    })
}

fn default_v() -> Vec<f64> {
    (0..=20).map(f64::from).collect()
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let kinds = cfg.system.kinds.clone().unwrap_or_else(|| KINDS.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = kinds.iter().find(|k| !KINDS.contains(&k.as_str())) {
        return Err(Error::Parameter(format!("unknown system kind `{bad}`; expected one of {KINDS:?}")));
    }
    let ps = or_default(&cfg.sweep.p, &[4.0]);
    let vs = cfg.sweep.v.clone().unwrap_or_else(default_v);
    let n_maxes = or_default(&cfg.sweep.n_max, &[64]);
    let ks = or_default(&cfg.sweep.k, &[64]);

    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for kind in &kinds {
        let sizes = if kind == "zk" { &ks } else { &n_maxes };
        for &size in sizes {
            for &p in &ps {
                let curve = growth_curve(kind, size, p, &vs, cfg)?;
                fits.extend(fit_curve(&curve));
                rows.extend(curve);
            }
        }
    }
    let mut contrasts = Vec::new();
    for ou in fits.iter().filter(|f| f.system == "ou") {
        for zk in fits.iter().filter(|f| f.system == "zk" && f.p == ou.p) {
            if let (Some(lin), Some(log), Some(secant)) = (ou.linear, zk.logarithmic, zk.secant_slope) {
                contrasts.push(Contrast {
                    size: ou.size,
                    p: ou.p,
                    ou_slope: lin.slope,
                    zk_secant_slope: secant,
                    zk_log_coefficient: log.slope,
                    ratio: lin.slope / secant,
                });
            }
        }
    }
    let csv_path = cfg.output.join("imaginary-growth.csv");
    write_csv(&csv_path, &["system", "size", "p", "v", "estimator", "value", "seed"], &rows)?;
    let json_path = cfg.output.join("imaginary-growth-fit.json");
    write_json(&json_path, &GrowthSummary { fits, contrasts })?;
    let flags = rows
        .iter()
        .filter(|r| !r.value.is_finite())
        .map(|r| format!("{} size {} v = {}: non-finite bound", r.system, r.size, r.v))
        .collect();
    Ok(Outcome { files: vec![csv_path, json_path], flags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_zero_is_identity() {
        let sys = ou_system(1, 8).unwrap();
        let fam = generating_family(8);
        assert!((family_lower_bound(&sys, &fam, 0.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
        let m = cyclic_shifted_power(16, 0.0).unwrap();
        assert!((m.l2_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_on_l2() {
        // (L+I)^{iv} is unitary on the span, so every ratio is 1 at p = 2
        let sys = ou_system(1, 12).unwrap();
        let fam = generating_family(12);
        assert!((family_lower_bound(&sys, &fam, 3.0, 2.0).unwrap() - 1.0).abs() < 1e-10);
    }
}
