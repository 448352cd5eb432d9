//! Hermite, Laguerre and Jacobi systems on Gauss grids, the Mehler kernel,
//! and Jacobi imaginary powers.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::operator::OperatorRep;
use crate::quadrature::{gauss_hermite, gauss_jacobi, gauss_laguerre, hermite_recurrence, jacobi_recurrence, laguerre_recurrence, Recurrence};
use crate::spectral::{SpectralAxis, SpectralSystem};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

fn check_modes(n_max: usize, nodes: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be positive".into()));
    }
    if nodes < n_max {
        return Err(Error::Parameter(format!(
            "{nodes} quadrature nodes cannot carry {n_max} orthonormal modes"
        )));
    }
    Ok(())
}

/// Matrix `Φ[i, k] = scale · q_k(x_i)` of orthonormal polynomials.
fn polynomial_matrix(rec: &Recurrence, xs: &[f64], n_max: usize, scale: f64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(xs.len(), n_max);
    for (i, &x) in xs.iter().enumerate() {
        for (k, q) in rec.eval(x, n_max).into_iter().enumerate() {
            m[(i, k)] = Complex64::new(scale * q, 0.0);
        }
    }
    m
}

/// Ornstein-Uhlenbeck axis: Hermite polynomials orthonormal in
/// `L²(π^{-1/2} e^{-x²} dx)`, eigenvalue `k` for degree `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    n_max: usize,
    nodes: usize,
}

impl HermiteBasis {
    /// `n_max` modes on `2 n_max` Gauss-Hermite nodes.
    pub fn new(n_max: usize) -> Result<Self> {
        Self::with_nodes(n_max, 2 * n_max)
    }

    pub fn with_nodes(n_max: usize, nodes: usize) -> Result<Self> {
        check_modes(n_max, nodes)?;
        Ok(Self { n_max, nodes })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn grid(&self) -> Result<WeightedGrid> {
        WeightedGrid::from_rule(&gauss_hermite(self.nodes)?, format!("hermite[{}]", self.nodes))
    }

    /// Orthonormal Hermite polynomials `H̃_0, …, H̃_{n_max-1}` at `x`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        hermite_recurrence(self.n_max).eval(x, self.n_max)
    }

    pub fn axis(&self) -> Result<SpectralAxis> {
        let grid = self.grid()?;
        let phi = polynomial_matrix(&hermite_recurrence(self.n_max), grid.nodes(), self.n_max, 1.0);
        SpectralAxis::new((0..self.n_max).map(|k| k as f64).collect(), grid, phi)
    }
}

/// Laguerre axis for `x^α e^{-x}/Γ(α+1) dx`, eigenvalue `k` for degree `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreBasis {
    alpha: f64,
    n_max: usize,
    nodes: usize,
}

impl LaguerreBasis {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self> {
        Self::with_nodes(alpha, n_max, 2 * n_max)
    }

    pub fn with_nodes(alpha: f64, n_max: usize, nodes: usize) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::Parameter(format!("Laguerre parameter α = {alpha} must exceed -1")));
        }
        check_modes(n_max, nodes)?;
        Ok(Self { alpha, n_max, nodes })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> Result<WeightedGrid> {
        WeightedGrid::from_rule(
            &gauss_laguerre(self.nodes, self.alpha)?,
            format!("laguerre[{}, {}]", self.alpha, self.nodes),
        )
    }

    pub fn axis(&self) -> Result<SpectralAxis> {
        let grid = self.grid()?;
        let phi = polynomial_matrix(&laguerre_recurrence(self.n_max, self.alpha), grid.nodes(), self.n_max, 1.0);
        SpectralAxis::new((0..self.n_max).map(|k| k as f64).collect(), grid, phi)
    }
}

/// Jacobi trigonometric system on `(0, π)` with measure
/// `(sin θ/2)^{2α+1} (cos θ/2)^{2β+1} dθ`; grid nodes are the angles θ.
/// Modes are the Jacobi polynomials in `cos θ`, normalized to unit weighted
/// `L²` norm, with eigenvalue `(k + (α+β+1)/2)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiBasis {
    alpha: f64,
    beta: f64,
    n_max: usize,
    nodes: usize,
}

impl JacobiBasis {
    pub fn new(alpha: f64, beta: f64, n_max: usize) -> Result<Self> {
        Self::with_nodes(alpha, beta, n_max, 2 * n_max)
    }

    pub fn with_nodes(alpha: f64, beta: f64, n_max: usize, nodes: usize) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0 && alpha + beta > -1.0) {
            return Err(Error::Parameter(format!(
                "Jacobi parameters (α, β) = ({alpha}, {beta}) need α, β > -1 and α + β > -1"
            )));
        }
        check_modes(n_max, nodes)?;
        Ok(Self { alpha, beta, n_max, nodes })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `(k + (α+β+1)/2)²`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        (k as f64 + 0.5 * (self.alpha + self.beta + 1.0)).powi(2)
    }

    /// Density of `dθ`-measure relative to `(1-x)^α (1+x)^β dx` under `x = cos θ`.
    fn measure_scale(&self) -> f64 {
        2f64.powf(-self.alpha - self.beta - 1.0)
    }

    pub fn grid(&self) -> Result<WeightedGrid> {
        let rule = gauss_jacobi(self.nodes, self.alpha, self.beta)?;
        let c = self.measure_scale();
        let mut pairs: Vec<(f64, f64)> = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| (x.acos(), w * c)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        WeightedGrid::line(
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            format!("jacobi[{}, {}, {}]", self.alpha, self.beta, self.nodes),
        )
    }

    /// Normalized trigonometric polynomials `P_0, …, P_{n_max-1}` at angle θ.
    pub fn eval(&self, theta: f64) -> Vec<f64> {
        let s = 1.0 / self.measure_scale().sqrt();
        jacobi_recurrence(self.n_max, self.alpha, self.beta)
            .eval(theta.cos(), self.n_max)
            .into_iter()
            .map(|q| q * s)
            .collect()
    }

    pub fn axis(&self) -> Result<SpectralAxis> {
        let grid = self.grid()?;
        let xs: Vec<f64> = grid.nodes().iter().map(|t| t.cos()).collect();
        let rec = jacobi_recurrence(self.n_max, self.alpha, self.beta);
        let phi = polynomial_matrix(&rec, &xs, self.n_max, 1.0 / self.measure_scale().sqrt());
        SpectralAxis::new((0..self.n_max).map(|k| self.eigenvalue(k)).collect(), grid, phi)
    }
}

/// One axis of a product system.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    Hermite(HermiteBasis),
    Laguerre(LaguerreBasis),
    Jacobi(JacobiBasis),
}

impl Basis {
    pub fn axis(&self) -> Result<SpectralAxis> {
        match self {
            Basis::Hermite(b) => b.axis(),
            Basis::Laguerre(b) => b.axis(),
            Basis::Jacobi(b) => b.axis(),
        }
    }
}

/// Tensor-product system of the given axes.
pub fn build_system(bases: &[Basis]) -> Result<SpectralSystem> {
    if bases.is_empty() {
        return Err(Error::Parameter("at least one basis is required".into()));
    }
    SpectralSystem::new(bases.iter().map(Basis::axis).collect::<Result<Vec<_>>>()?)
}

/// `d`-dimensional Ornstein-Uhlenbeck system with `n_max` modes per axis.
pub fn ou_system(d: usize, n_max: usize) -> Result<SpectralSystem> {
    let b = Basis::Hermite(HermiteBasis::new(n_max)?);
    build_system(&vec![b; d])
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("Mehler parameter r = {r} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_points(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Shape(format!("points of dimensions {} and {}", x.len(), y.len())));
    }
    Ok(())
}

/// `M_r(x, y) = π^{-d/2} (1-r²)^{-d/2} exp(-|rx - y|² / (1-r²))`.
pub fn mehler_kernel(r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_r(r)?;
    check_points(x, y)?;
    let d = x.len() as f64;
    let s = 1.0 - r * r;
    let q: f64 = x.iter().zip(y).map(|(a, b)| (r * a - b).powi(2)).sum();
    Ok(PI.powf(-d / 2.0) * s.powf(-d / 2.0) * (-q / s).exp())
}

/// `∂_r M_r(x, y) = π^{-d/2} (1-r²)^{-d/2-1} [dr - 2⟨rx-y, x⟩ - 2r|rx-y|²/(1-r²)] e^{-|rx-y|²/(1-r²)}`.
pub fn mehler_derivative(r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_r(r)?;
    check_points(x, y)?;
    let d = x.len() as f64;
    let s = 1.0 - r * r;
    let q: f64 = x.iter().zip(y).map(|(a, b)| (r * a - b).powi(2)).sum();
    let ip: f64 = x.iter().zip(y).map(|(a, b)| (r * a - b) * a).sum();
    let bracket = d * r - 2.0 * ip - 2.0 * r * q / s;
    Ok(PI.powf(-d / 2.0) * s.powf(-d / 2.0 - 1.0) * bracket * (-q / s).exp())
}

/// Smallest `C` with `|∂_r M_r(x, y)| ≤ C (1 + |x|)` over the sampled
/// `r ∈ [ε, 1-ε]`, `x`, `y` (one-dimensional).
pub fn fit_mehler_derivative_constant(eps: f64, rs: usize, xs: &[f64], ys: &[f64]) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) || rs < 2 {
        return Err(Error::Parameter(format!("need 0 < ε < 1/2 and at least two r samples, got ε = {eps}")));
    }
    let mut c = 0.0f64;
    for i in 0..rs {
        let r = eps + (1.0 - 2.0 * eps) * i as f64 / (rs - 1) as f64;
        for &x in xs {
            for &y in ys {
                c = c.max(mehler_derivative(r, &[x], &[y])?.abs() / (1.0 + x.abs()));
            }
        }
    }
    Ok(c)
}

/// `r^𝓛` on a Hermite grid built from the Mehler kernel integrated against
/// Lebesgue measure in `y`: `(Tg)(x_i) = Σ_j M_r(x_i, y_j) g(y_j) ℓ_j`
/// with `ℓ_j = √π e^{y_j²} w_j` the Lebesgue weights of the Gauss-Hermite rule.
pub fn mehler_operator(r: f64, basis: &HermiteBasis) -> Result<OperatorRep> {
    check_r(r)?;
    let grid = basis.grid()?;
    let n = grid.len();
    let nodes = grid.nodes();
    let leb: Vec<f64> = nodes
        .iter()
        .zip(grid.weights())
        .map(|(y, w)| (y * y + w.ln() + 0.5 * PI.ln()).exp())
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(mehler_kernel(r, &[nodes[i]], &[nodes[j]])? * leb[j], 0.0);
        }
    }
    OperatorRep::new(m, grid)
}

/// `‖(T_r - r^𝓛) P‖` in `L²(γ)`, where `T_r` is [`mehler_operator`], `r^𝓛` the
/// diagonal heat operator at time `-ln r`, and `P` the projection onto the
/// retained Hermite span.
pub fn mehler_heat_discrepancy(r: f64, basis: &HermiteBasis) -> Result<f64> {
    let sys = SpectralSystem::new(vec![basis.axis()?])?;
    let kernel_op = mehler_operator(r, basis)?;
    let diag = sys.semigroup(&[-r.ln()], crate::spectral::SemigroupKind::Heat)?;
    let diff = kernel_op.compose(&sys.projection_operator()?)?;
    let m = diff.matrix() - diag.matrix();
    crate::norms::exact_norm(&OperatorRep::new(m, sys.grid().clone())?, 2.0)
}

/// Jacobi imaginary power `(L^{α,β})^{iv}`: coefficient `k` scaled by
/// `(k + (α+β+1)/2)^{2iv}`.
pub fn jacobi_imaginary_power(basis: &JacobiBasis, v: f64, f: &[Complex64]) -> Result<Vec<Complex64>> {
    let sys = SpectralSystem::new(vec![basis.axis()?])?;
    let diag = jacobi_power_diagonal(basis, v);
    sys.apply_diagonal(&diag, f)
}

/// Dense matrix of the Jacobi imaginary power.
pub fn jacobi_imaginary_power_operator(basis: &JacobiBasis, v: f64) -> Result<OperatorRep> {
    let sys = SpectralSystem::new(vec![basis.axis()?])?;
    sys.diagonal_operator(&jacobi_power_diagonal(basis, v))
}

fn jacobi_power_diagonal(basis: &JacobiBasis, v: f64) -> Vec<Complex64> {
    (0..basis.n_max())
        .map(|k| Complex64::new(0.0, v * basis.eigenvalue(k).ln()).exp())
        .collect()
}
