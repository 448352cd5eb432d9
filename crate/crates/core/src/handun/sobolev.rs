//! Euclidean `L²`-Sobolev norms, isotropic and of dominating mixed
//! smoothness, from a quadrature Fourier transform.

use crate::error::{Error, Result};
use crate::quadrature::composite_legendre;
use crate::squarefn::DyadicBump;
use crate::tensor::apply_per_axis;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smoothness index: `(1+|y|)^s` or `∏(1+y_r²)^{s_r/2}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SobolevOrder {
    Isotropic(f64),
    Mixed(Vec<f64>),
}

impl SobolevOrder {
    fn weight(&self, y: &[f64]) -> f64 {
        match self {
            Self::Isotropic(s) => (1.0 + y.iter().map(|v| v * v).sum::<f64>().sqrt()).powf(*s),
            Self::Mixed(s) => y.iter().zip(s).map(|(v, sr)| (1.0 + v * v).powf(0.5 * sr)).product(),
        }
    }
}

/// Space and frequency boxes `[-R, R]^d`, `[-Ξ, Ξ]^d` with composite
/// Gauss-Legendre panels.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevOptions {
    pub space_radius: f64,
    pub space_panels: usize,
    pub freq_radius: f64,
    pub freq_panels: usize,
    pub order: usize,
}

impl Default for SobolevOptions {
    fn default() -> Self {
        Self { space_radius: 10.0, space_panels: 80, freq_radius: 10.0, freq_panels: 80, order: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SobolevReport {
    pub norm: f64,
    /// Largest value on the outermost panels of either box, relative to the peak.
    pub tail_ratio: f64,
    /// Set when `tail_ratio > 1e-8`: the boxes cut off visible mass.
    pub decay_warning: bool,
}

const DECAY_TOL: f64 = 1e-8;

fn outer_ratio(values: &[Complex64], nodes: &[Vec<f64>], shape: &[usize], edge: f64) -> f64 {
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for (flat, v) in values.iter().enumerate() {
        let idx = crate::tensor::unravel(flat, shape);
        if idx.iter().zip(nodes).any(|(i, ax)| ax[*i].abs() > edge) {
            worst = worst.max(v.norm());
        }
    }
    worst / peak
}

/// `‖w_s · Ff‖_2` with `F` the unitary Fourier transform.
pub fn sobolev_norm(
    f: &dyn Fn(&[f64]) -> Complex64,
    dim: usize,
    s: &SobolevOrder,
    opts: &SobolevOptions,
) -> Result<SobolevReport> {
    if dim == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    if let SobolevOrder::Mixed(v) = s {
        if v.len() != dim {
            return Err(Error::Shape(format!("mixed order {v:?} for dimension {dim}")));
        }
    }
    let space = composite_legendre(-opts.space_radius, opts.space_radius, opts.space_panels, opts.order)?;
    let freq = composite_legendre(-opts.freq_radius, opts.freq_radius, opts.freq_panels, opts.order)?;
    let fm = DMatrix::from_fn(freq.len(), space.len(), |i, j| {
        Complex64::from_polar(space.weights[j] / (2.0 * PI).sqrt(), -freq.nodes[i] * space.nodes[j])
    });
    let ns = space.len();
    let shape_s = vec![ns; dim];
    let shape_f = vec![freq.len(); dim];
    let values: Vec<Complex64> = (0..ns.pow(dim as u32))
        .map(|flat| {
            let x: Vec<f64> = crate::tensor::unravel(flat, &shape_s).iter().map(|i| space.nodes[*i]).collect();
            f(&x)
        })
        .collect();
    let mats = vec![&fm; dim];
    let ff = apply_per_axis(&values, &shape_s, &mats);
    let mut sq = 0.0;
    for (flat, v) in ff.iter().enumerate() {
        let idx = crate::tensor::unravel(flat, &shape_f);
        let y: Vec<f64> = idx.iter().map(|i| freq.nodes[*i]).collect();
        let w: f64 = idx.iter().map(|i| freq.weights[*i]).product();
        sq += w * (s.weight(&y) * v.norm()).powi(2);
    }
    let space_nodes = vec![space.nodes.clone(); dim];
    let freq_nodes = vec![freq.nodes.clone(); dim];
    let edge_s = opts.space_radius * (1.0 - 1.0 / opts.space_panels as f64);
    let edge_f = opts.freq_radius * (1.0 - 1.0 / opts.freq_panels as f64);
    let tail_ratio = outer_ratio(&values, &space_nodes, &shape_s, edge_s).max(outer_ratio(&ff, &freq_nodes, &shape_f, edge_f));
    Ok(SobolevReport { norm: sq.sqrt(), tail_ratio, decay_warning: tail_ratio > DECAY_TOL })
}

/// `‖Ψ · m(2^{j_1}·, …, 2^{j_d}·)‖_{W_s}` over a box of dyadic scales.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSobolevReport {
    pub per_scale: Vec<(Vec<i32>, f64)>,
    pub sup: f64,
    pub decay_warning: bool,
}

/// Sweep of the local Sobolev condition `sup_j ‖Ψ m(2^j ·)‖_{W_s}` with the
/// tensor dyadic bump `Ψ(y) = ψ(y_1)⋯ψ(y_d)`.
pub fn local_sobolev_sup(
    m: &(dyn Fn(&[f64]) -> Complex64 + Sync),
    dim: usize,
    s: &SobolevOrder,
    scales: (i32, i32),
    opts: &SobolevOptions,
) -> Result<LocalSobolevReport> {
    if scales.0 > scales.1 {
        return Err(Error::Parameter(format!("empty scale range {scales:?}")));
    }
    let psi = DyadicBump;
    let count = (scales.1 - scales.0 + 1) as usize;
    let mut per_scale = Vec::with_capacity(count.pow(dim as u32));
    let mut warn = false;
    for flat in 0..count.pow(dim as u32) {
        let j: Vec<i32> = crate::tensor::unravel(flat, &vec![count; dim]).iter().map(|k| scales.0 + *k as i32).collect();
        let g = |y: &[f64]| {
            let bump: f64 = y.iter().map(|v| psi.eval(*v)).product();
            if bump == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let z: Vec<f64> = y.iter().zip(&j).map(|(v, jr)| v * 2f64.powi(*jr)).collect();
            bump * m(&z)
        };
        let rep = sobolev_norm(&g, dim, s, opts)?;
        warn |= rep.decay_warning;
        per_scale.push((j, rep.norm));
    }
    let sup = per_scale.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(LocalSobolevReport { per_scale, sup, decay_warning: warn })
}
