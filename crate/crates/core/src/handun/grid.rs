//! Composite quadrature grids for `x^{2α} dx` on `(0, R]` and `|x|^{2α} dx`
//! on `[-R, R]`, with panel-local Lagrange interpolation.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::quadrature::{gauss_jacobi, gauss_legendre};
use num_complex::Complex64;

/// Equal panels on `(0, R]`. The first panel uses Gauss-Jacobi nodes for the
/// weight `x^{2α}`, the others Gauss-Legendre nodes times `x^{2α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineGrid {
    alpha: f64,
    radius: f64,
    panels: usize,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
}

impl HalfLineGrid {
    pub fn new(alpha: f64, radius: f64, panels: usize, order: usize) -> Result<Self> {
        if !(alpha > -0.5 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("α = {alpha} must exceed -1/2")));
        }
        if !(radius > 0.0 && radius.is_finite()) || panels == 0 || order < 2 {
            return Err(Error::Parameter(format!(
                "half-line grid needs R > 0, panels ≥ 1 and order ≥ 2 (got {radius}, {panels}, {order})"
            )));
        }
        let h = radius / panels as f64;
        let first = gauss_jacobi(order, 0.0, 2.0 * alpha)?;
        let gl = gauss_legendre(order)?;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        let scale = (0.5 * h).powf(2.0 * alpha + 1.0);
        for (s, w) in first.nodes.iter().zip(&first.weights) {
            nodes.push(0.5 * h * (1.0 + s));
            weights.push(w * scale);
        }
        for p in 1..panels {
            let r = gl.mapped(p as f64 * h, (p + 1) as f64 * h);
            for (x, w) in r.nodes.iter().zip(&r.weights) {
                nodes.push(*x);
                weights.push(w * x.powf(2.0 * alpha));
            }
        }
        let mut bary = vec![0.0; nodes.len()];
        for p in 0..panels {
            let xs = &nodes[p * order..(p + 1) * order];
            for k in 0..order {
                let prod: f64 = (0..order).filter(|m| *m != k).map(|m| xs[k] - xs[m]).product();
                bary[p * order + k] = 1.0 / prod;
            }
        }
        Ok(Self { alpha, radius, panels, order, nodes, weights, bary })
    }

    /// `R = 16` with 64 panels of 8 nodes.
    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 16.0, 64, 8)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panel_width(&self) -> f64 {
        self.radius / self.panels as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Lagrange coefficients at `z ∈ [0, R]` on the panel containing `z`,
    /// written into `out[..order]`. Returns the index of the panel's first node,
    /// or `None` beyond `R`.
    pub fn lagrange(&self, z: f64, out: &mut [f64]) -> Option<usize> {
        if !(0.0..=self.radius).contains(&z) {
            return None;
        }
        let p = ((z / self.panel_width()) as usize).min(self.panels - 1);
        let start = p * self.order;
        let xs = &self.nodes[start..start + self.order];
        let ws = &self.bary[start..start + self.order];
        if let Some(k) = xs.iter().position(|x| *x == z) {
            out[..self.order].iter_mut().for_each(|c| *c = 0.0);
            out[k] = 1.0;
            return Some(start);
        }
        let mut total = 0.0;
        for k in 0..self.order {
            let c = ws[k] / (z - xs[k]);
            out[k] = c;
            total += c;
        }
        out[..self.order].iter_mut().for_each(|c| *c /= total);
        Some(start)
    }

    /// Piecewise polynomial interpolant of nodal values, zero beyond `R`.
    pub fn interpolate(&self, values: &[Complex64], z: f64) -> Complex64 {
        let mut coef = vec![0.0; self.order];
        match self.lagrange(z, &mut coef) {
            Some(start) => coef.iter().zip(&values[start..]).map(|(c, v)| v * *c).sum(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Smallest panel boundary beyond which all values are below `rel` of the peak.
    pub fn effective_radius(&self, values: &[Complex64], rel: f64) -> f64 {
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let last = values.iter().rposition(|v| v.norm() > rel * peak).unwrap_or(0);
        let panel = last / self.order + 1;
        (panel as f64 * self.panel_width()).min(self.radius)
    }

    pub fn to_weighted(&self) -> Result<WeightedGrid> {
        WeightedGrid::line(self.nodes.clone(), self.weights.clone(), format!("(0,{}] x^{}dx", self.radius, 2.0 * self.alpha))
    }
}

/// Mirror image of a [`HalfLineGrid`]: nodes `-x_{n-1} < … < -x_0 < x_0 < … < x_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGrid {
    half: HalfLineGrid,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LineGrid {
    pub fn new(alpha: f64, radius: f64, panels: usize, order: usize) -> Result<Self> {
        Ok(Self::mirror(HalfLineGrid::new(alpha, radius, panels, order)?))
    }

    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 16.0, 64, 8)
    }

    pub fn mirror(half: HalfLineGrid) -> Self {
        let nodes = half.nodes.iter().rev().map(|x| -x).chain(half.nodes.iter().copied()).collect();
        let weights = half.weights.iter().rev().chain(half.weights.iter()).copied().collect();
        Self { half, nodes, weights }
    }

    pub fn half(&self) -> &HalfLineGrid {
        &self.half
    }

    pub fn alpha(&self) -> f64 {
        self.half.alpha
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Line indices of `+x_k` and `-x_k`.
    pub fn signed_indices(&self, k: usize) -> (usize, usize) {
        let n = self.half.len();
        (n + k, n - 1 - k)
    }

    /// Even part `f_e(x_k)` and `f_o(x_k)/x_k` on the half-grid nodes.
    pub fn even_odd(&self, f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        (0..self.half.len())
            .map(|k| {
                let (p, m) = self.signed_indices(k);
                (0.5 * (f[p] + f[m]), 0.5 * (f[p] - f[m]) / self.half.nodes[k])
            })
            .unzip()
    }

    /// `f(z) = f_e(|z|) + z · (f_o/x)(|z|)` from the half-grid interpolants.
    pub fn interpolate(&self, f: &[Complex64], z: f64) -> Complex64 {
        let (e, h) = self.even_odd(f);
        self.half.interpolate(&e, z.abs()) + z * self.half.interpolate(&h, z.abs())
    }

    pub fn to_weighted(&self) -> Result<WeightedGrid> {
        WeightedGrid::line(
            self.nodes.clone(),
            self.weights.clone(),
            format!("[-{0},{0}] |x|^{1}dx", self.half.radius, 2.0 * self.half.alpha),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn moments_are_exact() {
        for alpha in [-0.25, 0.0, 0.5, 1.3, 2.5] {
            let g = HalfLineGrid::new(alpha, 4.0, 16, 8).unwrap();
            assert!(g.weights().iter().all(|w| *w > 0.0));
            for k in [0.0, 1.0, 3.0] {
                let exact = 4f64.powf(2.0 * alpha + k + 1.0) / (2.0 * alpha + k + 1.0);
                let q: f64 = g.nodes().iter().zip(g.weights()).map(|(x, w)| w * x.powf(k)).sum();
                assert!((q - exact).abs() < 1e-12 * exact, "α={alpha} k={k}");
            }
        }
    }

    #[test]
    fn gaussian_mass() {
        let alpha = 0.75;
        let g = HalfLineGrid::standard(alpha).unwrap();
        let q: f64 = g.nodes().iter().zip(g.weights()).map(|(x, w)| w * (-x * x).exp()).sum();
        let exact = 0.5 * gamma(alpha + 0.5);
        assert!((q - exact).abs() < 1e-13);
    }

    #[test]
    fn interpolation_of_smooth_functions() {
        let g = HalfLineGrid::new(0.5, 8.0, 32, 8).unwrap();
        let f = |x: f64| (-(x - 1.0) * (x - 1.0)).exp();
        let vals: Vec<Complex64> = g.nodes().iter().map(|x| Complex64::new(f(*x), 0.0)).collect();
        for z in [0.0, 0.013, 0.25, 1.7, 3.1, 7.999, 8.0] {
            assert!((g.interpolate(&vals, z).re - f(z)).abs() < 1e-9, "z={z}");
        }
        assert_eq!(g.interpolate(&vals, 8.5), Complex64::new(0.0, 0.0));
        assert!((g.effective_radius(&vals, 1e-12) - 7.0).abs() < 1.0);
    }

    #[test]
    fn line_grid_is_symmetric() {
        let l = LineGrid::new(1.0, 4.0, 8, 6).unwrap();
        let n = l.len();
        for i in 0..n {
            assert_eq!(l.nodes()[i], -l.nodes()[n - 1 - i]);
            assert_eq!(l.weights()[i], l.weights()[n - 1 - i]);
        }
        let f: Vec<Complex64> = l.nodes().iter().map(|x| Complex64::new((x - 0.3).sin(), 0.0)).collect();
        for z in [-2.2, -0.01, 0.4, 3.3] {
            assert!((l.interpolate(&f, z).re - (z - 0.3).sin()).abs() < 1e-6);
        }
    }
}
