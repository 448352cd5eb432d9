//! Heat kernels on the second factor and checks of their Gaussian bounds.

use super::space::HomogeneousSpace;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Constants of the Gaussian upper and Hölder bounds of a heat kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernelBounds {
    pub big_c: f64,
    pub c: f64,
    pub delta: f64,
}

/// Samples `h_t(x, y)` of `e^{-tA}` at a list of times.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernelSamples {
    pub times: Vec<f64>,
    pub kernels: Vec<DMatrix<f64>>,
}

/// A sample at which the kernel is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeSample {
    pub t: f64,
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBoundsReport {
    /// `None` when a sample is negative or no admissible δ was found.
    pub bounds: Option<GaussianKernelBounds>,
    /// Fitted `C` of the upper bound for the given `c`.
    pub upper_constant: f64,
    /// Fitted constants of the Hölder bounds in `y` and in `x` at the chosen δ.
    pub lipschitz_y: f64,
    pub lipschitz_x: f64,
    pub first_negative: Option<NegativeSample>,
    pub pass: bool,
}

/// Kernel of `e^{-tA}` for the graph Laplacian `A f(x) = 2f(x) − f(x−1) − f(x+1)`
/// on `Z_K`, summed from its Fourier series.
pub fn torus_heat_kernel(k: usize, t: f64) -> Result<DMatrix<f64>> {
    if k == 0 || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("heat kernel on Z_{k} at t = {t}")));
    }
    let profile: Vec<f64> = (0..k)
        .map(|n| {
            (0..k)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / k as f64;
                    (-t * (2.0 - 2.0 * th.cos())).exp() * (th * n as f64).cos()
                })
                .sum::<f64>()
                / k as f64
        })
        .collect();
    Ok(DMatrix::from_fn(k, k, |x, y| profile[(x + k - y) % k]))
}

pub fn torus_heat_samples(k: usize, times: &[f64]) -> Result<HeatKernelSamples> {
    let kernels = times.iter().map(|t| torus_heat_kernel(k, *t)).collect::<Result<Vec<_>>>()?;
    Ok(HeatKernelSamples { times: times.to_vec(), kernels })
}

/// Smallest `C_δ` with `R ≤ C_δ u^δ` over the given `(u, R)` pairs.
fn holder_constant(pairs: &[(f64, f64)], delta: f64) -> f64 {
    pairs.iter().map(|(u, r)| r / u.powf(delta)).fold(0.0, f64::max)
}

/// Checks `h_t ≥ 0`, fits the minimal `C` in
/// `h_t(x, y) ≤ C μ(B(x, √t))^{-1} e^{-cζ(x,y)²/t}`, and fits δ in the Hölder
/// bounds on pairs with `2ζ(y, y') ≤ ζ(x, y)` (and symmetrically in `x`).
/// δ is the largest value on a grid of step `0.05` whose Hölder constants
/// stay within `lipschitz_factor · C`.
pub fn gaussian_bounds_check(
    samples: &HeatKernelSamples,
    space: &HomogeneousSpace,
    c: f64,
    lipschitz_factor: f64,
) -> Result<GaussianBoundsReport> {
    if !(c > 0.0) || !(lipschitz_factor > 0.0) {
        return Err(Error::Parameter(format!("c = {c} and Hölder factor {lipschitz_factor} must be positive")));
    }
    if samples.times.len() != samples.kernels.len() {
        return Err(Error::Shape("one kernel per time is required".into()));
    }
    let n = space.len();
    let mut first_negative = None;
    let mut upper = 0.0f64;
    let (mut pairs_y, mut pairs_x) = (Vec::new(), Vec::new());
    for (t, h) in samples.times.iter().zip(&samples.kernels) {
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::Shape(format!("kernel is {}x{} on a space of {n} points", h.nrows(), h.ncols())));
        }
        if !(*t > 0.0) {
            return Err(Error::Parameter(format!("time t = {t} must be positive")));
        }
        let st = t.sqrt();
        let balls: Vec<f64> = (0..n).map(|x| space.ball_measure(x, st)).collect();
        let envelope = |x: usize, y: usize| balls[x] * (c * space.distance(x, y).powi(2) / t).exp();
        for x in 0..n {
            for y in 0..n {
                let v = h[(x, y)];
                if v < 0.0 && first_negative.is_none() {
                    first_negative = Some(NegativeSample { t: *t, x, y, value: v });
                }
                upper = upper.max(v * envelope(x, y));
                for z in 0..n {
                    let dxy = space.distance(x, y);
                    let dyz = space.distance(y, z);
                    if z != y && 2.0 * dyz <= dxy {
                        pairs_y.push((dyz / st, (v - h[(x, z)]).abs() * envelope(x, y)));
                    }
                    let dxz = space.distance(x, z);
                    if z != x && 2.0 * dxz <= dxy {
                        pairs_x.push((dxz / st, (v - h[(z, y)]).abs() * envelope(x, y)));
                    }
                }
            }
        }
    }
    let cap = lipschitz_factor * upper;
    let chosen = (1..=20)
        .rev()
        .map(|i| i as f64 * 0.05)
        .find(|d| holder_constant(&pairs_y, *d) <= cap && holder_constant(&pairs_x, *d) <= cap);
    let delta = chosen.unwrap_or(0.05);
    let nonnegative = first_negative.is_none();
    let pass = nonnegative && chosen.is_some() && upper.is_finite();
    Ok(GaussianBoundsReport {
        bounds: pass.then_some(GaussianKernelBounds { big_c: upper, c, delta }),
        upper_constant: upper,
        lipschitz_y: holder_constant(&pairs_y, delta),
        lipschitz_x: holder_constant(&pairs_x, delta),
        first_negative,
        pass,
    })
}

/// Times `0` and `2^{j/2}` for `j = −8..=jmax` used for heat maximal functions.
pub fn default_heat_times(k: usize) -> Vec<f64> {
    let jmax = (2.0 * (k as f64).powi(2).log2()).ceil() as i32;
    std::iter::once(0.0).chain((-8..=jmax).map(|j| 2f64.powf(j as f64 / 2.0))).collect()
}

/// `x ↦ sup_t |e^{-tA} f(x)|` over the given times, on `Z_K`.
pub fn heat_maximal(f: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    let k = f.len();
    let mut out = vec![0.0f64; k];
    for t in times {
        let h = torus_heat_kernel(k, *t)?;
        let v = &h * nalgebra::DVector::from_column_slice(f);
        out.iter_mut().zip(v.iter()).for_each(|(o, a)| *o = o.max(a.abs()));
    }
    Ok(out)
}

/// `‖sup_t |e^{-tA} f|‖_{L¹(Z_K)}`.
pub fn heat_maximal_l1(f: &[f64], times: &[f64]) -> Result<f64> {
    Ok(heat_maximal(f, times)?.iter().sum())
}
