//! Symbol conditions: dyadic Marcinkiewicz norms, Mikhlin suprema and the
//! annular Hörmander functional.

use super::loggrid::LogAxis;
use crate::error::{Error, Result};
use crate::quadrature::{composite_legendre, GaussRule};
use crate::symbol::Symbol;
use crate::tensor::unravel;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// Multi-index `ρ` bounding the derivatives in a condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionOrder {
    rho: Vec<usize>,
}

impl ConditionOrder {
    pub fn new(rho: Vec<usize>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::Parameter("condition order needs at least one component".into()));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    /// All `γ ≤ ρ` componentwise, in row-major order.
    pub fn multi_indices(&self) -> Vec<Vec<usize>> {
        let shape: Vec<usize> = self.rho.iter().map(|r| r + 1).collect();
        (0..shape.iter().product()).map(|k| unravel(k, &shape)).collect()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `∂^γ m(x)` by tensor central differences with per-axis steps `h`.
pub fn finite_difference(m: &Symbol, gamma: &[usize], x: &[f64], h: &[f64]) -> Complex64 {
    let shape: Vec<usize> = gamma.iter().map(|g| g + 1).collect();
    let total: usize = shape.iter().product();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pt = x.to_vec();
    for flat in 0..total {
        let js = unravel(flat, &shape);
        let mut coef = 1.0;
        for r in 0..gamma.len() {
            let g = gamma[r];
            let j = js[r];
            pt[r] = x[r] + (g as f64 / 2.0 - j as f64) * h[r];
            let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            coef *= sign * binomial(g, j) / h[r].powi(g as i32);
        }
        acc += m.eval(&pt) * coef;
    }
    acc
}

/// `∂^γ m(λ)`: analytic when the symbol provides it, otherwise central
/// differences starting from steps `rel_step · scale_r` and shrinking by 4
/// until two successive estimates agree or roundoff would dominate.
pub fn symbol_derivative(m: &Symbol, gamma: &[usize], x: &[f64], scale: &[f64], rel_step: f64) -> Result<Complex64> {
    let v = match m.analytic_derivative(gamma, x) {
        Some(v) => v,
        None => {
            let order: usize = gamma.iter().sum();
            let floor = 10.0 * f64::EPSILON.powf(1.0 / (order as f64 + 1.0));
            let unit: Vec<f64> = scale.iter().map(|s| s.abs().max(f64::MIN_POSITIVE)).collect();
            let natural = m.eval(x).norm() / unit.iter().zip(gamma).map(|(u, g)| u.powi(*g as i32)).product::<f64>();
            let at = |rho: f64| {
                let h: Vec<f64> = unit.iter().map(|u| rho * u).collect();
                finite_difference(m, gamma, x, &h)
            };
            let mut rho = rel_step;
            let mut prev = at(rho);
            while order > 0 && rho / 4.0 >= floor {
                rho /= 4.0;
                let cur = at(rho);
                let settled = (cur - prev).norm() <= 1e-6 * cur.norm() + 1e-8 * natural;
                prev = cur;
                if settled {
                    break;
                }
            }
            prev
        }
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Numerical(format!(
            "derivative γ = {gamma:?} of `{}` is not finite at {x:?}",
            m.name()
        )));
    }
    Ok(v)
}

/// Settings of the dyadic sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Block corners `R_r = 2^j`, `j_min ≤ j ≤ j_max`.
    pub j_min: i32,
    pub j_max: i32,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    pub rel_tol: f64,
    /// Cap on the number of quadrature nodes per block.
    pub max_nodes: usize,
    pub rel_step: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { j_min: -20, j_max: 20, order: 8, rel_tol: 1e-10, max_nodes: 1 << 19, rel_step: 1e-3 }
    }
}

/// `‖m‖_{(γ)}` with its sweep history.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaNorm {
    pub gamma: Vec<usize>,
    pub norm: f64,
    /// Running supremum over shells `max_r |j_r| ≤ n`, `n = 0, 1, …`.
    pub shell_sups: Vec<f64>,
    /// Last three shell suprema within 1%.
    pub stable: bool,
    /// Blocks whose quadrature hit the node cap before converging.
    pub unconverged_blocks: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarcinkiewiczReport {
    pub per_gamma: Vec<GammaNorm>,
    /// `‖m‖_{Mar,ρ} = max_γ ‖m‖_{(γ)}`.
    pub total: f64,
    pub stable: bool,
}

impl MarcinkiewiczReport {
    pub fn divergent(&self) -> bool {
        !self.stable
    }

    pub fn get(&self, gamma: &[usize]) -> Option<&GammaNorm> {
        self.per_gamma.iter().find(|g| g.gamma == gamma)
    }
}

/// Tensor quadrature over a box in the log variables.
fn box_integral(lo: &[f64], hi: &[f64], panels: usize, base: &GaussRule, f: &(dyn Fn(&[f64]) -> Result<f64> + Sync)) -> Result<f64> {
    let rules: Vec<GaussRule> = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| {
            let h = (b - a) / panels as f64;
            let mut nodes = Vec::with_capacity(panels * base.len());
            let mut weights = Vec::with_capacity(panels * base.len());
            for p in 0..panels {
                let r = base.mapped(a + p as f64 * h, a + (p + 1) as f64 * h);
                nodes.extend(r.nodes);
                weights.extend(r.weights);
            }
            GaussRule { nodes, weights }
        })
        .collect();
    let shape: Vec<usize> = rules.iter().map(|r| r.len()).collect();
    let total: usize = shape.iter().product();
    let mut acc = 0.0;
    let mut pt = vec![0.0; lo.len()];
    for flat in 0..total {
        let idx = unravel(flat, &shape);
        let mut w = 1.0;
        for r in 0..lo.len() {
            pt[r] = rules[r].nodes[idx[r]];
            w *= rules[r].weights[idx[r]];
        }
        acc += w * f(&pt)?;
    }
    Ok(acc)
}

/// Adaptive tensor Gauss-Legendre: panels double until the relative change
/// drops below `rel_tol` or the node cap is reached. Returns `(value, converged)`.
pub(crate) fn adaptive_box(
    lo: &[f64],
    hi: &[f64],
    order: usize,
    rel_tol: f64,
    max_nodes: usize,
    f: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
) -> Result<(f64, bool)> {
    let base = composite_legendre(-1.0, 1.0, 1, order)?;
    let d = lo.len() as u32;
    let mut panels = 1usize;
    let mut prev = box_integral(lo, hi, panels, &base, f)?;
    loop {
        let next_panels = panels * 2;
        if (next_panels * order).pow(d) > max_nodes {
            return Ok((prev, false));
        }
        let cur = box_integral(lo, hi, next_panels, &base, f)?;
        if (cur - prev).abs() <= rel_tol * cur.abs() || cur.abs() < 1e-300 {
            return Ok((cur, true));
        }
        prev = cur;
        panels = next_panels;
    }
}

/// `∫_{R_1}^{2R_1}⋯∫_{R_d}^{2R_d} |λ^γ ∂^γ m(λ)|² dλ/λ`.
pub fn dyadic_block_integral(m: &Symbol, gamma: &[usize], corner: &[f64], opts: &SweepOptions) -> Result<(f64, bool)> {
    let lo: Vec<f64> = corner.iter().map(|r| r.ln()).collect();
    let hi: Vec<f64> = lo.iter().map(|a| a + LN_2).collect();
    let f = |s: &[f64]| -> Result<f64> {
        let lam: Vec<f64> = s.iter().map(|x| x.exp()).collect();
        let d = symbol_derivative(m, gamma, &lam, &lam, opts.rel_step)?;
        let pw: f64 = lam.iter().zip(gamma).map(|(l, g)| l.powi(*g as i32)).product();
        Ok((d * pw).norm_sqr())
    };
    adaptive_box(&lo, &hi, opts.order, opts.rel_tol, opts.max_nodes, &f)
}

fn stable_tail(s: &[f64]) -> bool {
    if s.len() < 3 {
        return true;
    }
    let last = s[s.len() - 1];
    let third = s[s.len() - 3];
    last == 0.0 || (last - third).abs() <= 0.01 * last.abs()
}

/// `‖m‖_{(γ)}` for every `γ ≤ ρ` over the dyadic sweep, and their maximum.
pub fn marcinkiewicz_norm(m: &Symbol, rho: &ConditionOrder, opts: &SweepOptions) -> Result<MarcinkiewiczReport> {
    let d = m.dim();
    if rho.rho().len() != d {
        return Err(Error::Shape(format!("order {:?} for a symbol in {d} variables", rho.rho())));
    }
    if opts.j_min > opts.j_max {
        return Err(Error::Parameter(format!("empty sweep [{}, {}]", opts.j_min, opts.j_max)));
    }
    let span = (opts.j_max - opts.j_min + 1) as usize;
    let blocks: Vec<Vec<i32>> = (0..span.pow(d as u32))
        .map(|k| unravel(k, &vec![span; d]).into_iter().map(|i| opts.j_min + i as i32).collect())
        .collect();
    let shells = opts.j_min.unsigned_abs().max(opts.j_max.unsigned_abs()) as usize + 1;
    let mut per_gamma = Vec::new();
    for gamma in rho.multi_indices() {
        let values: Vec<(usize, f64, bool)> = blocks
            .par_iter()
            .map(|js| {
                let corner: Vec<f64> = js.iter().map(|j| 2f64.powi(*j)).collect();
                let shell = js.iter().map(|j| j.unsigned_abs() as usize).max().unwrap_or(0);
                dyadic_block_integral(m, &gamma, &corner, opts).map(|(v, c)| (shell, v, c))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut shell_max = vec![0.0f64; shells];
        for (sh, v, _) in &values {
            shell_max[*sh] = shell_max[*sh].max(*v);
        }
        let mut running = Vec::with_capacity(shells);
        let mut acc = 0.0f64;
        for v in shell_max {
            acc = acc.max(v);
            running.push(acc.sqrt());
        }
        let stable = stable_tail(&running);
        per_gamma.push(GammaNorm {
            norm: *running.last().unwrap_or(&0.0),
            stable,
            unconverged_blocks: values.iter().filter(|v| !v.2).count(),
            shell_sups: running,
            gamma,
        });
    }
    let total = per_gamma.iter().map(|g| g.norm).fold(0.0, f64::max);
    let stable = per_gamma.iter().all(|g| g.stable);
    Ok(MarcinkiewiczReport { per_gamma, total, stable })
}

/// `sup_λ |λ_1^{γ_1}⋯λ_d^{γ_d} ∂^γ m(λ)|` over a log grid, for every `γ ≤ ρ`.
pub fn mikhlin_check(m: &Symbol, rho: &ConditionOrder, axes: &[LogAxis], rel_step: f64) -> Result<Vec<(Vec<usize>, f64)>> {
    if axes.len() != m.dim() || rho.rho().len() != m.dim() {
        return Err(Error::Shape("grid, order and symbol dimensions differ".into()));
    }
    let shape: Vec<usize> = axes.iter().map(|a| a.count).collect();
    let n: usize = shape.iter().product();
    rho.multi_indices()
        .into_iter()
        .map(|gamma| {
            let sup = (0..n)
                .into_par_iter()
                .map(|flat| {
                    let idx = unravel(flat, &shape);
                    let lam: Vec<f64> = idx.iter().zip(axes).map(|(k, a)| a.s(*k).exp()).collect();
                    let d = symbol_derivative(m, &gamma, &lam, &lam, rel_step)?;
                    let pw: f64 = lam.iter().zip(&gamma).map(|(l, g)| l.powi(*g as i32)).product();
                    Ok((d * pw).norm())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((gamma, sup))
        })
        .collect()
}

/// Settings of the annular sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct HormanderOptions {
    pub j_min: i32,
    pub j_max: i32,
    pub order: usize,
    /// Refinement levels: angular panels `4·2^ℓ`, radial panels `2^ℓ`.
    pub max_level: usize,
    pub rel_tol: f64,
    pub rel_step: f64,
}

impl Default for HormanderOptions {
    fn default() -> Self {
        Self { j_min: -6, j_max: 6, order: 8, max_level: 7, rel_tol: 1e-8, rel_step: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HormanderGamma {
    pub gamma: Vec<usize>,
    /// Value of the annular functional at each `R = 2^j` (square-rooted).
    pub per_radius: Vec<f64>,
    pub sup: f64,
    /// All annuli converged under refinement.
    pub converged: bool,
    /// Some annulus kept growing under refinement.
    pub divergent: bool,
    /// Last three refinement growth ratios of the worst annulus.
    pub growth: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HormanderReport {
    pub per_gamma: Vec<HormanderGamma>,
    pub sup: f64,
    pub divergent: bool,
}

/// `R^{-d} ∫_{R ≤ |ξ| ≤ 2R} |R^{|γ|} ∂^γ m(ξ)|² dξ` at one refinement level.
fn annulus(m: &Symbol, gamma: &[usize], radius: f64, level: usize, base: &GaussRule, opts: &HormanderOptions) -> Result<f64> {
    let d = m.dim();
    let order_g: i32 = gamma.iter().sum::<usize>() as i32;
    let integrand = |xi: &[f64]| -> Result<f64> {
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = vec![norm; d];
        let v = symbol_derivative(m, gamma, xi, &scale, opts.rel_step)?;
        Ok((v * radius.powi(order_g)).norm_sqr())
    };
    let radial = {
        let panels = 1usize << level;
        let h = radius / panels as f64;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in 0..panels {
            let r = base.mapped(radius + p as f64 * h, radius + (p + 1) as f64 * h);
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        GaussRule { nodes, weights }
    };
    let total = match d {
        1 => {
            let mut acc = 0.0;
            for (r, w) in radial.nodes.iter().zip(&radial.weights) {
                acc += w * (integrand(&[*r])? + integrand(&[-*r])?);
            }
            acc
        }
        2 => {
            let panels = 4usize << level;
            let h = 2.0 * PI / panels as f64;
            // angular panels start at a small irrational offset so no node sits on an axis
            let offset = 0.123_456_789 * h;
            let mut acc = 0.0;
            for p in 0..panels {
                let ang = base.mapped(offset + p as f64 * h, offset + (p + 1) as f64 * h);
                for (t, wt) in ang.nodes.iter().zip(&ang.weights) {
                    let (s, c) = t.sin_cos();
                    for (r, wr) in radial.nodes.iter().zip(&radial.weights) {
                        acc += wt * wr * r * integrand(&[r * c, r * s])?;
                    }
                }
            }
            acc
        }
        _ => {
            return Err(Error::UnsupportedMode(format!(
                "annular functional implemented for d ∈ {{1, 2}}, got d = {d}"
            )))
        }
    };
    Ok(total / radius.powi(d as i32))
}

/// The annular functional for every `|γ| ≤ order`, swept over `R = 2^j`.
pub fn hormander_norm(m: &Symbol, order: usize, opts: &HormanderOptions) -> Result<HormanderReport> {
    let d = m.dim();
    if d == 0 || d > 2 {
        return Err(Error::UnsupportedMode(format!("annular functional implemented for d ∈ {{1, 2}}, got d = {d}")));
    }
    let base = composite_legendre(-1.0, 1.0, 1, opts.order)?;
    let gammas: Vec<Vec<usize>> = ConditionOrder::new(vec![order; d])?
        .multi_indices()
        .into_iter()
        .filter(|g| g.iter().sum::<usize>() <= order)
        .collect();
    let radii: Vec<f64> = (opts.j_min..=opts.j_max).map(|j| 2f64.powi(j)).collect();
    let mut per_gamma = Vec::new();
    for gamma in gammas {
        let rows: Vec<(f64, bool, bool, Vec<f64>)> = radii
            .par_iter()
            .map(|&radius| {
                let mut vals = vec![annulus(m, &gamma, radius, 0, &base, opts)?];
                let mut converged = false;
                for level in 1..=opts.max_level {
                    let v = annulus(m, &gamma, radius, level, &base, opts)?;
                    let prev = *vals.last().unwrap_or(&0.0);
                    vals.push(v);
                    if (v - prev).abs() <= opts.rel_tol * v.abs() || v.abs() < 1e-300 {
                        converged = true;
                        break;
                    }
                }
                let ratios: Vec<f64> = vals.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 1.0 }).collect();
                let tail: Vec<f64> = ratios.iter().rev().take(3).rev().copied().collect();
                let divergent = !converged && tail.len() >= 2 && tail.iter().all(|r| *r > 1.5);
                Ok((vals.last().copied().unwrap_or(0.0).sqrt(), converged, divergent, tail))
            })
            .collect::<Result<Vec<_>>>()?;
        let sup = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let worst = rows
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|r| r.3.clone())
            .unwrap_or_default();
        per_gamma.push(HormanderGamma {
            per_radius: rows.iter().map(|r| r.0).collect(),
            sup,
            converged: rows.iter().all(|r| r.1),
            divergent: rows.iter().any(|r| r.2),
            growth: worst,
            gamma,
        });
    }
    let sup = per_gamma.iter().map(|g| g.sup).fold(0.0, f64::max);
    let divergent = per_gamma.iter().any(|g| g.divergent);
    Ok(HormanderReport { per_gamma, sup, divergent })
}

/// `|ξ_1|^{iu_1} ⋯ |ξ_d|^{iu_d}` on `R^d` with exact derivatives off the axes.
pub fn product_imaginary_power(u: Vec<f64>) -> Symbol {
    let d = u.len();
    let ue = u.clone();
    let ud = u.clone();
    Symbol::new(d, format!("|ξ|^(iu) product {u:?}"), move |xi| {
        xi.iter()
            .zip(&ue)
            .map(|(x, ur)| if *x == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, ur * x.abs().ln()).exp() })
            .product()
    })
    .with_bound(1.0)
    .with_derivative(move |gamma, xi| {
        let mut acc = Complex64::new(1.0, 0.0);
        for ((g, x), ur) in gamma.iter().zip(xi).zip(&ud) {
            if *x == 0.0 {
                return None;
            }
            let a = Complex64::new(0.0, *ur);
            let mut falling = Complex64::new(1.0, 0.0);
            for j in 0..*g {
                falling *= a - j as f64;
            }
            acc *= falling * Complex64::new(0.0, ur * x.abs().ln()).exp() / x.powi(*g as i32);
        }
        Some(acc)
    })
}

/// `ξ_r / |ξ|` on `R^d` (zero at the origin).
pub fn riesz_symbol(d: usize, r: usize) -> Symbol {
    Symbol::new(d, format!("xi_{r}/|xi|"), move |xi| {
        let n = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(xi[r] / n, 0.0)
        }
    })
    .with_bound(1.0)
}
