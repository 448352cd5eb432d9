//! Closed forms, involutions and convolution identities of the Hankel and
//! Dunkl transforms on one axis.

use super::config::ExperimentConfig;
use super::{write_json, Outcome};
use crate::error::Result;
use crate::handun::dunkl::{dunkl_convolve, dunkl_inverse, dunkl_transform, Dunkl, DunklConfig};
use crate::handun::hankel::{gaussian_constant, hankel_convolve, hankel_transform, Hankel, HankelConfig};
use crate::quadrature::composite_legendre;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const GAUSSIAN_TOL: f64 = 1e-7;
pub const ROUND_TRIP_TOL: f64 = 1e-6;
pub const FOURIER_TOL: f64 = 1e-7;
pub const CONVOLUTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub alpha: f64,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, alpha: f64, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), alpha, value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Largest deviation relative to the peak of `b`.
pub fn peak_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let peak = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / peak
}

/// `(c_0 + c_1 x² + c_2 x⁴) e^{−t x²}`.
fn random_even(rng: &mut ChaCha8Rng) -> impl Fn(&[f64]) -> Complex64 {
    let c: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let t = rng.random_range(0.6..1.5);
    move |x: &[f64]| {
        let s = x[0] * x[0];
        Complex64::new((c[0] + c[1] * s + c[2] * s * s) * (-t * s).exp(), 0.0)
    }
}

/// `(c_0 + c_1 x + c_2 x² + i c_3 x) e^{−t x²}`, no parity.
fn random_smooth(rng: &mut ChaCha8Rng) -> impl Fn(&[f64]) -> Complex64 {
    let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let t = rng.random_range(0.6..1.5);
    move |x: &[f64]| {
        let v = x[0];
        Complex64::new(c[0] + c[1] * v + c[2] * v * v, c[3] * v) * (-t * v * v).exp()
    }
}

fn gaussian_pair(alpha: f64, t: f64) -> (impl Fn(&[f64]) -> Complex64, impl Fn(&[f64]) -> Complex64) {
    let c = gaussian_constant(alpha) * t.powf(-(2.0 * alpha + 1.0) / 2.0);
    (
        move |x: &[f64]| Complex64::new((-t * x[0] * x[0]).exp(), 0.0),
        move |x: &[f64]| Complex64::new(c * (-x[0] * x[0] / (4.0 * t)).exp(), 0.0),
    )
}

fn l2_rel(grid: &crate::grid::WeightedGrid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    grid.lp_norm(&diff, 2.0) / grid.lp_norm(b, 2.0)
}

pub fn alpha_checks(alpha: f64, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let h = Hankel::standard(HankelConfig::new(vec![alpha])?)?;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let (f, want) = gaussian_pair(alpha, t);
        worst = worst.max(peak_rel_err(&hankel_transform(&h, &h.sample(f))?, &h.sample(want)));
    }
    checks.push(Check::new("hankel_gaussian", alpha, worst, GAUSSIAN_TOL));
    let f = h.sample(random_even(&mut rng));
    let back = hankel_transform(&h, &hankel_transform(&h, &f)?)?;
    checks.push(Check::new("hankel_involution", alpha, l2_rel(h.grid(), &back, &f), ROUND_TRIP_TOL));
    let g = h.sample(random_even(&mut rng));
    let lhs = hankel_transform(&h, &hankel_convolve(&h, &f, &g)?)?;
    let rhs: Vec<Complex64> =
        hankel_transform(&h, &f)?.iter().zip(&hankel_transform(&h, &g)?).map(|(a, b)| a * b).collect();
    checks.push(Check::new("hankel_convolution", alpha, peak_rel_err(&lhs, &rhs), CONVOLUTION_TOL));

    let dk = Dunkl::standard(DunklConfig::new(vec![alpha])?)?;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let (f, want) = gaussian_pair(alpha, t);
        worst = worst.max(peak_rel_err(&dunkl_transform(&dk, &dk.sample(f))?, &dk.sample(want)));
    }
    checks.push(Check::new("dunkl_gaussian", alpha, worst, GAUSSIAN_TOL));
    let f = dk.sample(random_smooth(&mut rng));
    let back = dunkl_inverse(&dk, &dunkl_transform(&dk, &f)?)?;
    checks.push(Check::new("dunkl_round_trip", alpha, l2_rel(dk.grid(), &back, &f), ROUND_TRIP_TOL));

    if alpha == 0.0 {
        let fx = |x: f64| Complex64::new(1.0 + x, 0.5 * x * x) * (-(x - 0.3) * (x - 0.3)).exp();
        let df = dunkl_transform(&dk, &dk.sample(|x| fx(x[0])))?;
        let oracle = composite_legendre(-12.0, 12.0, 600, 10)?;
        let nodes = dk.axes()[0].nodes();
        let worst = (0..nodes.len())
            .step_by(37)
            .map(|i| {
                let e = |y: f64| fx(y) * Complex64::from_polar(1.0, -nodes[i] * y);
                let want = Complex64::new(oracle.integrate(|y| e(y).re), oracle.integrate(|y| e(y).im)) / (2.0 * PI).sqrt();
                (df[i] - want).norm()
            })
            .fold(0.0, f64::max);
        checks.push(Check::new("dunkl_fourier", alpha, worst, FOURIER_TOL));
    }

    let du = Dunkl::uniform(DunklConfig::new(vec![alpha])?, 12.0, 48, 8)?;
    let f = du.sample(random_smooth(&mut rng));
    let g = du.sample(random_smooth(&mut rng));
    let lhs = dunkl_transform(&du, &dunkl_convolve(&du, &f, &g)?)?;
    let c = du.config().c_alpha();
    let rhs: Vec<Complex64> =
        dunkl_transform(&du, &f)?.iter().zip(&dunkl_transform(&du, &g)?).map(|(a, b)| c * a * b).collect();
    checks.push(Check::new("dunkl_convolution", alpha, peak_rel_err(&lhs, &rhs), CONVOLUTION_TOL));
    Ok(checks)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let alphas = cfg.system.alpha.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.5]);
    let checks: Vec<Check> = alphas
        .par_iter()
        .enumerate()
        .map(|(i, a)| alpha_checks(*a, cfg.seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let report = ConformanceReport { pass: checks.iter().all(|c| c.pass), checks };
    let path = cfg.output.join("hankel-dunkl-conformance.json");
    write_json(&path, &report)?;
    let flags = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} at α = {}: {:e} exceeds {:e}", c.name, c.alpha, c.value, c.tolerance))
        .collect();
    Ok(Outcome { files: vec![path], flags })
}
