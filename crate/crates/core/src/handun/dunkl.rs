//! Dunkl transform for the reflection group `Z_2^d` on `(R^d, ν_α)`,
//! generalized translations, convolution, multipliers, Riesz-Dunkl
//! transforms and the product maximal function `M_P`.

use super::grid::LineGrid;
use super::hankel::transform_matrix;
use super::product::{b_alpha, PhiDensity, RuleBank};
use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::norms::WeightedOperator;
use crate::special::{bessel_j_normalized, gamma};
use crate::squarefn::UnitaryTransform;
use crate::symbol::Symbol;
use crate::tensor::{apply_along_axis, apply_per_axis, unravel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Multi-index `α ∈ [0, ∞)^d` with the normalizing constant
/// `c_α = ∫ e^{−|x|²/2} dν_α(x) = ∏ 2^{α_r+1/2} Γ(α_r+1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DunklConfig {
    alpha: Vec<f64>,
    c_alpha: f64,
}

impl DunklConfig {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Parameter("α must have at least one component".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(Error::Parameter(format!("Dunkl parameter α_r = {a} must be nonnegative")));
        }
        let c_alpha: f64 = alpha.iter().map(|a| axis_constant(*a)).product();
        let mut quad = 1.0;
        for a in &alpha {
            let g = super::grid::HalfLineGrid::standard(*a)?;
            quad *= 2.0 * g.nodes().iter().zip(g.weights()).map(|(x, w)| w * (-0.5 * x * x).exp()).sum::<f64>();
        }
        if (quad - c_alpha).abs() > 1e-10 * c_alpha {
            return Err(Error::Numerical(format!("c_α = {c_alpha} disagrees with its Gaussian integral {quad}")));
        }
        Ok(Self { alpha, c_alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }
}

/// `2^{α+1/2} Γ(α+1/2)`.
pub fn axis_constant(alpha: f64) -> f64 {
    2f64.powf(alpha + 0.5) * gamma(alpha + 0.5)
}

/// One-dimensional kernel `E_α(−ix, y)/c_α = ½[j_{α−1/2}(xy) − i xy j_{α+1/2}(xy)]`
/// with `j_ν(z) = z^{−ν} J_ν(z)`.
pub fn dunkl_kernel(alpha: f64, x: f64, y: f64) -> Result<Complex64> {
    let z = x * y;
    let even = bessel_j_normalized(alpha - 0.5, z.abs())?;
    let odd = bessel_j_normalized(alpha + 0.5, z.abs())?;
    Ok(Complex64::new(0.5 * even, -0.5 * z * odd))
}

fn kernel_matrix(g: &LineGrid) -> Result<DMatrix<Complex64>> {
    let n = g.len();
    let (x, w) = (g.nodes(), g.weights());
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|k| Ok(dunkl_kernel(g.alpha(), x[i], x[k])? * w[k])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, k| rows[i][k]))
}

/// Variant of the one-dimensional translation used on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisTranslation {
    /// The Dunkl translation `τ^s`.
    Tau,
    /// `τ_1^s F(t) = b_α ∫ F(√(t²+s²−2stu)) (1−u²)^{α−1} du`.
    TauOne,
}

/// `τ_ε^y`: `τ` on axes with `ε_r = 0`, `τ_1` on axes with `ε_r = 1`.
pub fn eps_variant(eps: &[u8]) -> Vec<AxisTranslation> {
    eps.iter().map(|e| if *e == 0 { AxisTranslation::Tau } else { AxisTranslation::TauOne }).collect()
}

/// Transform engine over a product of line grids.
#[derive(Debug, Clone)]
pub struct Dunkl {
    cfg: DunklConfig,
    axes: Vec<LineGrid>,
    kernels: Vec<DMatrix<Complex64>>,
    grid: WeightedGrid,
    shape: Vec<usize>,
}

impl Dunkl {
    pub fn new(cfg: DunklConfig, axes: Vec<LineGrid>) -> Result<Self> {
        if axes.len() != cfg.dim() {
            return Err(Error::Shape(format!("{} grids for a {}-dimensional configuration", axes.len(), cfg.dim())));
        }
        for (r, (g, a)) in axes.iter().zip(cfg.alpha()).enumerate() {
            if g.alpha() != *a {
                return Err(Error::Parameter(format!("grid on axis {r} carries α = {}, expected {a}", g.alpha())));
            }
        }
        let kernels = axes.iter().map(kernel_matrix).collect::<Result<_>>()?;
        let factors = axes.iter().map(LineGrid::to_weighted).collect::<Result<Vec<_>>>()?;
        let grid = WeightedGrid::product(&factors.iter().collect::<Vec<_>>())?;
        let shape = axes.iter().map(LineGrid::len).collect();
        Ok(Self { cfg, axes, kernels, grid, shape })
    }

    pub fn standard(cfg: DunklConfig) -> Result<Self> {
        let axes = cfg.alpha().iter().map(|a| LineGrid::standard(*a)).collect::<Result<_>>()?;
        Self::new(cfg, axes)
    }

    /// The same line grid shape `(R, panels, order)` on every axis.
    pub fn uniform(cfg: DunklConfig, radius: f64, panels: usize, order: usize) -> Result<Self> {
        let axes = cfg.alpha().iter().map(|a| LineGrid::new(*a, radius, panels, order)).collect::<Result<_>>()?;
        Self::new(cfg, axes)
    }

    pub fn config(&self) -> &DunklConfig {
        &self.cfg
    }

    pub fn axes(&self) -> &[LineGrid] {
        &self.axes
    }

    pub fn grid(&self) -> &WeightedGrid {
        &self.grid
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
        self.grid.sample(f)
    }

    fn check(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.grid.len() {
            return Err(Error::Shape(format!("{} values on a Dunkl grid of {} nodes", f.len(), self.grid.len())));
        }
        Ok(())
    }
}

/// `D_α f` on the grid nodes, by the kernel on each axis.
pub fn dunkl_transform(dk: &Dunkl, f: &[Complex64]) -> Result<Vec<Complex64>> {
    dk.check(f)?;
    let mats: Vec<&DMatrix<Complex64>> = dk.kernels.iter().collect();
    Ok(apply_per_axis(f, &dk.shape, &mats))
}

/// `D_α f(x) = H_α(f_e)(|x|) − i x H_{α+1}(f_o/y)(|x|)` on each axis.
pub fn dunkl_transform_split(dk: &Dunkl, f: &[Complex64]) -> Result<Vec<Complex64>> {
    dk.check(f)?;
    let mut cur = f.to_vec();
    for (r, g) in dk.axes.iter().enumerate() {
        let half = g.half();
        let n = half.len();
        let ha = transform_matrix(half, g.alpha() - 0.5, 0)?;
        let hb = transform_matrix(half, g.alpha() + 0.5, 2)?;
        let y = half.nodes();
        let mut m = DMatrix::from_element(2 * n, 2 * n, Complex64::new(0.0, 0.0));
        for i in 0..2 * n {
            let x = g.nodes()[i];
            let xi = if i >= n { i - n } else { n - 1 - i };
            for k in 0..n {
                let (p, q) = g.signed_indices(k);
                let even = 0.5 * ha[(xi, k)];
                let odd = Complex64::new(0.0, -x) * hb[(xi, k)] * (0.5 / y[k]);
                m[(i, p)] += even + odd;
                m[(i, q)] += even - odd;
            }
        }
        cur = apply_along_axis(&cur, &dk.shape, r, &m);
    }
    Ok(cur)
}

/// `f^∨(x) = f(−x)`; on a mirrored product grid this reverses the flat storage.
pub fn reflect(f: &[Complex64]) -> Vec<Complex64> {
    f.iter().rev().copied().collect()
}

/// `D_α^{−1} f = D_α(f^∨)`.
pub fn dunkl_inverse(dk: &Dunkl, f: &[Complex64]) -> Result<Vec<Complex64>> {
    dunkl_transform(dk, &reflect(f))
}

/// An `ε`-symmetric component of a function on a symmetric product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsComponent {
    pub eps: Vec<u8>,
    pub values: Vec<Complex64>,
}

fn axis_coordinates(grid: &WeightedGrid, axis: usize) -> Vec<f64> {
    let shape = grid.shape();
    let stride: usize = shape[axis + 1..].iter().product();
    (0..shape[axis]).map(|i| grid.node(i * stride)[axis]).collect()
}

/// `f = Σ_ε f_ε` with `f_ε(σ_r x) = (−1)^{ε_r} f_ε(x)`.
pub fn epsilon_decompose(grid: &WeightedGrid, f: &[Complex64]) -> Result<Vec<EpsComponent>> {
    if f.len() != grid.len() {
        return Err(Error::Shape(format!("{} values on a grid of {} nodes", f.len(), grid.len())));
    }
    let shape = grid.shape().to_vec();
    if grid.dim() != shape.len() {
        return Err(Error::Shape("ε-decomposition needs a product of one-dimensional grids".into()));
    }
    for axis in 0..shape.len() {
        let xs = axis_coordinates(grid, axis);
        let n = xs.len();
        let scale = xs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if (0..n).any(|i| (xs[i] + xs[n - 1 - i]).abs() > 1e-12 * scale) {
            return Err(Error::Shape(format!("grid is not symmetric under the reflection of axis {axis}")));
        }
    }
    let d = shape.len();
    let reflect_index = |idx: &[usize], mask: usize| -> usize {
        let mut j = idx.to_vec();
        for (r, i) in j.iter_mut().enumerate() {
            if mask >> (d - 1 - r) & 1 == 1 {
                *i = shape[r] - 1 - *i;
            }
        }
        crate::tensor::ravel(&j, &shape)
    };
    let norm = 1.0 / (1usize << d) as f64;
    Ok((0..1usize << d)
        .map(|e| {
            let eps: Vec<u8> = (0..d).map(|r| (e >> (d - 1 - r) & 1) as u8).collect();
            let values = (0..f.len())
                .map(|flat| {
                    // evaluate on the positive orthant and copy out by symmetry, so
                    // that the parity relations hold bit for bit
                    let idx = unravel(flat, &shape);
                    let to_canon = (0..d).fold(0usize, |m, r| m | usize::from(2 * idx[r] < shape[r]) << (d - 1 - r));
                    let canon = unravel(reflect_index(&idx, to_canon), &shape);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for mask in 0..1usize << d {
                        let sign = if (mask & e).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        acc += sign * f[reflect_index(&canon, mask)];
                    }
                    let sign = if (to_canon & e).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc * (norm * sign)
                })
                .collect();
            EpsComponent { eps, values }
        })
        .collect())
}

/// Quadrature point for `F(z) = F_e(|z|) + c · (F_o/y)(|z|)`.
#[derive(Debug, Clone, Copy)]
struct DPoint {
    z: f64,
    w: f64,
    c: f64,
}

struct AxisRules {
    alpha: f64,
    tau: RuleBank,
    tau_one: RuleBank,
}

impl AxisRules {
    fn new(alpha: f64) -> Self {
        Self { alpha, tau: RuleBank::new(alpha - 1.0, alpha), tau_one: RuleBank::new(alpha - 1.0, alpha - 1.0) }
    }

    /// Points of `τ^s F(t)` restricted to `|z| ≤ cutoff`.
    fn points(&self, variant: AxisTranslation, t: f64, s: f64, cutoff: f64, out: &mut Vec<DPoint>) {
        out.clear();
        if self.alpha == 0.0 {
            match variant {
                AxisTranslation::Tau => out.push(DPoint { z: (t - s).abs(), w: 1.0, c: t - s }),
                AxisTranslation::TauOne => {
                    for z in [(t - s).abs(), (t + s).abs()] {
                        out.push(DPoint { z, w: 0.5, c: z });
                    }
                }
            }
            out.retain(|p| p.z <= cutoff);
            return;
        }
        let mut q = Vec::new();
        let b = b_alpha(self.alpha);
        match variant {
            AxisTranslation::Tau => {
                self.tau.points(t, s, cutoff, &mut q);
                out.extend(q.iter().map(|p| DPoint { z: p.z, w: b * p.w, c: t - s }));
            }
            AxisTranslation::TauOne => {
                self.tau_one.points(t, s, cutoff, &mut q);
                out.extend(q.iter().map(|p| DPoint { z: p.z, w: b * p.w, c: p.z }));
            }
        }
    }
}

/// Row of the translation matrix: coefficients on the line nodes.
fn accumulate(g: &LineGrid, pts: &[DPoint], coef: &mut [f64], row: &mut [f64]) {
    let half = g.half();
    let y = half.nodes();
    for p in pts {
        if let Some(start) = half.lagrange(p.z, coef) {
            for (j, l) in coef.iter().enumerate() {
                let k = start + j;
                let (plus, minus) = g.signed_indices(k);
                row[plus] += 0.5 * p.w * l * (1.0 + p.c / y[k]);
                row[minus] += 0.5 * p.w * l * (1.0 - p.c / y[k]);
            }
        }
    }
}

fn translation_matrix(g: &LineGrid, s: f64, variant: AxisTranslation) -> DMatrix<f64> {
    let n = g.len();
    let rules = AxisRules::new(g.alpha());
    let cutoff = g.half().radius();
    let rows: Vec<Vec<f64>> = g
        .nodes()
        .par_iter()
        .map(|&t| {
            let mut row = vec![0.0; n];
            let mut pts = Vec::new();
            let mut coef = vec![0.0; g.half().order()];
            rules.points(variant, t, s, cutoff, &mut pts);
            accumulate(g, &pts, &mut coef, &mut row);
            row
        })
        .collect();
    DMatrix::from_fn(n, n, |i, k| rows[i][k])
}

/// `τ^s f` (or `τ_ε^s f`) axis by axis from the explicit integral
/// representation, sampling `f` through its piecewise interpolant.
pub fn dunkl_translate(dk: &Dunkl, s: &[f64], f: &[Complex64], variant: &[AxisTranslation]) -> Result<Vec<Complex64>> {
    dk.check(f)?;
    if s.len() != dk.cfg.dim() || variant.len() != dk.cfg.dim() {
        return Err(Error::Shape("translation vector and variants must have one entry per axis".into()));
    }
    let mut cur = f.to_vec();
    for (r, g) in dk.axes.iter().enumerate() {
        let m = translation_matrix(g, s[r], variant[r]).map(|v| Complex64::new(v, 0.0));
        cur = apply_along_axis(&cur, &dk.shape, r, &m);
    }
    Ok(cur)
}

/// `f⋆g(x) = ∫ f(y) τ^x g^∨(y) dν_α(y)` in one dimension.
pub fn dunkl_convolve(dk: &Dunkl, f: &[Complex64], g: &[Complex64]) -> Result<Vec<Complex64>> {
    dk.check(f)?;
    dk.check(g)?;
    if dk.cfg.dim() != 1 {
        return Err(Error::UnsupportedMode("direct Dunkl convolution is implemented for d = 1".into()));
    }
    let grid = &dk.axes[0];
    let half = grid.half();
    let gv = reflect(g);
    let (ge, gh) = grid.even_odd(&gv);
    let size: Vec<Complex64> =
        ge.iter().zip(&gh).zip(half.nodes()).map(|((e, h), y)| Complex64::new(e.norm() + (h * y).norm(), 0.0)).collect();
    let cutoff = half.effective_radius(&size, 1e-15);
    let rules = AxisRules::new(grid.alpha());
    let (x, w) = (grid.nodes(), grid.weights());
    Ok(x.par_iter()
        .map(|&xi| {
            let mut pts = Vec::new();
            let mut coef = vec![0.0; half.order()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &yj) in x.iter().enumerate() {
                if (yj.abs() - xi.abs()).abs() > cutoff {
                    continue;
                }
                rules.points(AxisTranslation::Tau, yj, xi, cutoff, &mut pts);
                let mut tau = Complex64::new(0.0, 0.0);
                for p in &pts {
                    if let Some(start) = half.lagrange(p.z, &mut coef) {
                        for (k, l) in coef.iter().enumerate() {
                            tau += p.w * l * (ge[start + k] + p.c * gh[start + k]);
                        }
                    }
                }
                acc += w[j] * f[j] * tau;
            }
            acc
        })
        .collect())
}

/// `δ_λ f(x) = λ^{−2α−1} f(x_1/λ_1, …, x_d/λ_d)`, so that `D(δ_λ f)(x) = Df(λx)`.
pub fn dunkl_dilate(dk: &Dunkl, f: &dyn Fn(&[f64]) -> Complex64, lambda: &[f64]) -> Result<Vec<Complex64>> {
    if lambda.len() != dk.cfg.dim() || lambda.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::Parameter(format!("dilation {lambda:?} must be a positive vector of dimension {}", dk.cfg.dim())));
    }
    let scale: f64 = lambda.iter().zip(dk.cfg.alpha()).map(|(l, a)| l.powf(-2.0 * a - 1.0)).product();
    Ok(dk.sample(|x| {
        let y: Vec<f64> = x.iter().zip(lambda).map(|(v, l)| v / l).collect();
        scale * f(&y)
    }))
}

fn symbol_table(dk: &Dunkl, m: &Symbol) -> Result<Vec<Complex64>> {
    if m.dim() != dk.cfg.dim() {
        return Err(Error::Shape(format!("symbol of dimension {} on a {}-dimensional grid", m.dim(), dk.cfg.dim())));
    }
    Ok((0..dk.grid.len()).map(|i| m.eval(dk.grid.node(i))).collect())
}

fn apply_table(dk: &Dunkl, table: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut df = dunkl_transform(dk, f)?;
    df.iter_mut().zip(table).for_each(|(v, m)| *v *= m);
    dunkl_inverse(dk, &df)
}

/// `T_m f = D_α^{−1}(m · D_α f)`.
pub fn dunkl_multiplier(dk: &Dunkl, m: &Symbol, f: &[Complex64]) -> Result<Vec<Complex64>> {
    apply_table(dk, &symbol_table(dk, m)?, f)
}

/// Symbol `x_r/|x|` of the `r`-th Riesz-Dunkl transform, zero at the origin.
pub fn riesz_symbol(d: usize, r: usize) -> Result<Symbol> {
    if r >= d {
        return Err(Error::Parameter(format!("Riesz index {r} out of range for d = {d}")));
    }
    Ok(Symbol::new(d, format!("x_{r}/|x|"), move |x| {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(if n == 0.0 { 0.0 } else { x[r] / n }, 0.0)
    })
    .with_bound(1.0))
}

/// `R_r^D f = D_α^{−1}(x_r/|x| · D_α f)`.
pub fn riesz_dunkl(dk: &Dunkl, r: usize, f: &[Complex64]) -> Result<Vec<Complex64>> {
    dunkl_multiplier(dk, &riesz_symbol(dk.cfg.dim(), r)?, f)
}

/// A Dunkl multiplier as a matrix-free operator in `L²(ν_α)`.
pub struct DunklMultiplierOp<'a> {
    dk: &'a Dunkl,
    table: Vec<Complex64>,
    conj: Vec<Complex64>,
}

impl<'a> DunklMultiplierOp<'a> {
    pub fn new(dk: &'a Dunkl, m: &Symbol) -> Result<Self> {
        let table = symbol_table(dk, m)?;
        let conj = table.iter().map(|z| z.conj()).collect();
        Ok(Self { dk, table, conj })
    }

    pub fn riesz(dk: &'a Dunkl, r: usize) -> Result<Self> {
        Self::new(dk, &riesz_symbol(dk.cfg.dim(), r)?)
    }
}

impl WeightedOperator for DunklMultiplierOp<'_> {
    fn weights(&self) -> &[f64] {
        self.dk.grid.weights()
    }

    fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        apply_table(self.dk, &self.table, f).expect("operator input has the grid length")
    }

    // the discrete kernel satisfies D* = D∘∨, so (D^{-1} m D)* = D^{-1} m̄ D
    fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64> {
        apply_table(self.dk, &self.conj, g).expect("operator input has the grid length")
    }
}

/// Number of radii in the maximal-function sweep.
const RADII: usize = 48;

/// `τ^x χ_{[−t,t]}(y)`; `phi` is `None` for `α = 0`.
fn ball_translate(phi: Option<&PhiDensity>, x: f64, y: f64, t: f64) -> f64 {
    let Some(phi) = phi else {
        return if (y - x).abs() <= t { 1.0 } else { 0.0 };
    };
    let p = 2.0 * x * y;
    let base = x * x + y * y;
    if p == 0.0 {
        return if base <= t * t { 1.0 } else { 0.0 };
    }
    let c = (base - t * t) / p;
    if p > 0.0 {
        phi.mass(c, 1.0)
    } else {
        phi.mass(-1.0, c)
    }
}

fn maximal_axis(g: &LineGrid, f: &[f64]) -> Result<Vec<f64>> {
    let alpha = g.alpha();
    let (x, w) = (g.nodes(), g.weights());
    let h = g.half().panel_width();
    let top = 2.0 * g.half().radius();
    let radii: Vec<f64> = (0..RADII).map(|k| h * (top / h).powf(k as f64 / (RADII - 1) as f64)).collect();
    let phi = if alpha > 0.0 { Some(PhiDensity::new(alpha)?) } else { None };
    Ok(x.par_iter()
        .enumerate()
        .map(|(i, &xi)| {
            let mut best = f[i].abs();
            for &t in &radii {
                let mut acc = 0.0;
                for (j, &yj) in x.iter().enumerate() {
                    if (yj.abs() - xi.abs()).abs() > t {
                        continue;
                    }
                    acc += w[j] * f[j] * ball_translate(phi.as_ref(), xi, yj, t);
                }
                let ball = 2.0 * t.powf(2.0 * alpha + 1.0) / (2.0 * alpha + 1.0);
                best = best.max(acc.abs() / ball);
            }
            best
        })
        .collect())
}

/// `M_P f = M_1 ∘ ⋯ ∘ M_d (|f|)`, each `M_r` the one-dimensional maximal
/// function of the `Z_2` setting over a geometric sweep of radii, with the
/// limit `t → 0⁺` included as `|f(x)|`.
pub fn maximal_mp(dk: &Dunkl, f: &[Complex64]) -> Result<Vec<f64>> {
    dk.check(f)?;
    let mut cur: Vec<f64> = f.iter().map(|z| z.norm()).collect();
    let shape = &dk.shape;
    for r in (0..dk.cfg.dim()).rev() {
        let n = shape[r];
        let outer: usize = shape[..r].iter().product();
        let inner: usize = shape[r + 1..].iter().product();
        let mut next = vec![0.0; cur.len()];
        for o in 0..outer {
            for j in 0..inner {
                let line: Vec<f64> = (0..n).map(|k| cur[(o * n + k) * inner + j]).collect();
                let m = maximal_axis(&dk.axes[r], &line)?;
                for (k, v) in m.into_iter().enumerate() {
                    next[(o * n + k) * inner + j] = v;
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

impl UnitaryTransform for Dunkl {
    fn space_grid(&self) -> &WeightedGrid {
        &self.grid
    }

    fn frequency_grid(&self) -> &WeightedGrid {
        &self.grid
    }

    fn frequencies(&self) -> Vec<Vec<f64>> {
        self.axes.iter().map(|g| g.nodes().to_vec()).collect()
    }

    fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        dunkl_transform(self, f)
    }

    fn inverse(&self, fhat: &[Complex64]) -> Result<Vec<Complex64>> {
        dunkl_inverse(self, fhat)
    }
}
