//! Discretized measure spaces: nodes with positive quadrature weights.

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A finite set of points in `R^m` carrying positive weights, standing in for
/// a σ-finite measure space. Product grids remember their factor sizes so
/// axis-wise operations can find their way around the flat storage
/// (row-major, first factor slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGrid {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    label: String,
    shape: Vec<usize>,
}

impl WeightedGrid {
    /// Grid of points in `R^dim`; `nodes` holds the coordinates flat, point by point.
    pub fn new(dim: usize, nodes: Vec<f64>, weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("grid dimension must be positive".into()));
        }
        if nodes.len() != dim * weights.len() {
            return Err(Error::Shape(format!(
                "{} coordinates do not describe {} points in dimension {dim}",
                nodes.len(),
                weights.len()
            )));
        }
        if weights.is_empty() {
            return Err(Error::Parameter("grid must contain at least one node".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::Parameter(format!("weight {w} at node {i} is not strictly positive")));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("grid nodes must be finite".into()));
        }
        let n = weights.len();
        Ok(Self { dim, nodes, weights, label: label.into(), shape: vec![n] })
    }

    /// One-dimensional grid.
    pub fn line(nodes: Vec<f64>, weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        Self::new(1, nodes, weights, label)
    }

    /// One-dimensional grid from a quadrature rule.
    pub fn from_rule(rule: &GaussRule, label: impl Into<String>) -> Result<Self> {
        Self::line(rule.nodes.clone(), rule.weights.clone(), label)
    }

    /// Counting measure on `{0, 1, …, n-1}`.
    pub fn counting(n: usize, label: impl Into<String>) -> Result<Self> {
        Self::line((0..n).map(|i| i as f64).collect(), vec![1.0; n], label)
    }

    /// Cartesian product with product weights.
    pub fn product(factors: &[&WeightedGrid]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parameter("product of zero grids".into()));
        }
        let mut grid = factors[0].clone();
        for f in &factors[1..] {
            let mut nodes = Vec::with_capacity((grid.dim + f.dim) * grid.len() * f.len());
            let mut weights = Vec::with_capacity(grid.len() * f.len());
            for i in 0..grid.len() {
                for j in 0..f.len() {
                    nodes.extend_from_slice(grid.node(i));
                    nodes.extend_from_slice(f.node(j));
                    weights.push(grid.weights[i] * f.weights[j]);
                }
            }
            let mut shape = grid.shape.clone();
            shape.extend_from_slice(&f.shape);
            grid = WeightedGrid {
                dim: grid.dim + f.dim,
                nodes,
                weights,
                label: format!("{} x {}", grid.label, f.label),
                shape,
            };
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Factor sizes of a product grid (a single entry for a plain grid).
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted `L^p` norm; `p = ∞` gives the maximum modulus.
    pub fn lp_norm(&self, f: &[Complex64], p: f64) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        if p.is_infinite() {
            return f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        let s: f64 = f
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * z.norm().powf(p))
            .sum();
        s.powf(1.0 / p)
    }

    /// Weighted `L^p` norm of a real function.
    pub fn lp_norm_real(&self, f: &[f64], p: f64) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        if p.is_infinite() {
            return f.iter().map(|x| x.abs()).fold(0.0, f64::max);
        }
        let s: f64 = f.iter().zip(&self.weights).map(|(x, w)| w * x.abs().powf(p)).sum();
        s.powf(1.0 / p)
    }

    /// Weighted inner product `Σ w_i f_i conj(g_i)`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum()
    }

    /// Weighted integral `Σ w_i f_i`.
    pub fn integrate(&self, f: &[Complex64]) -> Complex64 {
        f.iter().zip(&self.weights).map(|(a, w)| a * *w).sum()
    }

    /// Samples a function at every node.
    pub fn sample(&self, f: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
        (0..self.len()).map(|i| f(self.node(i))).collect()
    }

    /// `true` when both grids carry identical nodes and weights.
    pub fn same_measure(&self, other: &WeightedGrid) -> bool {
        self.dim == other.dim && self.nodes == other.nodes && self.weights == other.weights
    }
}
