//! Modified Hankel transform on `(R_+^d, ν_α)`, its translations,
//! convolution, dilations and multipliers.

use super::grid::HalfLineGrid;
use super::product::{b_alpha, QPoint, RuleBank};
use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::special::{bessel_j_normalized, gamma};
use crate::symbol::Symbol;
use crate::tensor::apply_per_axis;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Multi-index `α ∈ (−1/2, ∞)^d` of the Hankel setting.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelConfig {
    alpha: Vec<f64>,
}

/// Which parameter-restricted statements apply to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HankelCapabilities {
    /// `α_r > 0` on every axis: the Gegenbauer product formula is available.
    pub product_formula: bool,
    /// `α_r ≥ 1/2` on every axis: translations have total mass `≤ 1`.
    pub l1_contraction: bool,
}

impl HankelConfig {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Parameter("α must have at least one component".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !(**a > -0.5 && a.is_finite())) {
            return Err(Error::Parameter(format!("α_r = {a} must exceed -1/2")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Homogeneous dimension `Q = Σ(2α_r + 1)`.
    pub fn q(&self) -> f64 {
        self.alpha.iter().map(|a| 2.0 * a + 1.0).sum()
    }

    pub fn capabilities(&self) -> HankelCapabilities {
        HankelCapabilities {
            product_formula: self.alpha.iter().all(|a| *a > 0.0),
            l1_contraction: self.alpha.iter().all(|a| *a >= 0.5),
        }
    }
}

/// `E_x(λ) = (xλ)^{−α+1/2} J_{α−1/2}(xλ)` in one variable.
pub fn hankel_kernel(alpha: f64, x: f64, lambda: f64) -> Result<f64> {
    bessel_j_normalized(alpha - 0.5, (x * lambda).abs())
}

/// `E_x(0) = 2^{1/2−α} / Γ(α+1/2)`, the total mass of the translation measures.
pub fn translation_mass(alpha: f64) -> f64 {
    2f64.powf(0.5 - alpha) / gamma(alpha + 0.5)
}

/// `C_α` in `H(e^{−t|·|²})(x) = C_α t^{−(2α+1)/2} e^{−x²/4t}`.
pub fn gaussian_constant(alpha: f64) -> f64 {
    2f64.powf(-alpha - 0.5)
}

/// Transform matrix `E_{x_i}(λ_k) w_k` on a half-line grid.
pub(crate) fn transform_matrix(g: &HalfLineGrid, nu: f64, extra_power: i32) -> Result<DMatrix<Complex64>> {
    let n = g.len();
    let (x, w) = (g.nodes(), g.weights());
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|k| Ok(bessel_j_normalized(nu, x[i] * x[k])? * w[k] * x[k].powi(extra_power)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, k| Complex64::new(rows[i][k], 0.0)))
}

/// Transform engine: per-axis grids and matrices for a configuration.
#[derive(Debug, Clone)]
pub struct Hankel {
    cfg: HankelConfig,
    axes: Vec<HalfLineGrid>,
    mats: Vec<DMatrix<Complex64>>,
    grid: WeightedGrid,
    shape: Vec<usize>,
}

impl Hankel {
    pub fn new(cfg: HankelConfig, axes: Vec<HalfLineGrid>) -> Result<Self> {
        if axes.len() != cfg.dim() {
            return Err(Error::Shape(format!("{} grids for a {}-dimensional configuration", axes.len(), cfg.dim())));
        }
        for (r, (g, a)) in axes.iter().zip(cfg.alpha()).enumerate() {
            if g.alpha() != *a {
                return Err(Error::Parameter(format!("grid on axis {r} carries α = {}, expected {a}", g.alpha())));
            }
        }
        let mats = axes.iter().map(|g| transform_matrix(g, g.alpha() - 0.5, 0)).collect::<Result<_>>()?;
        let factors = axes.iter().map(HalfLineGrid::to_weighted).collect::<Result<Vec<_>>>()?;
        let grid = WeightedGrid::product(&factors.iter().collect::<Vec<_>>())?;
        let shape = axes.iter().map(HalfLineGrid::len).collect();
        Ok(Self { cfg, axes, mats, grid, shape })
    }

    /// Standard grid (`R = 16`, 64 panels of 8 nodes) on every axis.
    pub fn standard(cfg: HankelConfig) -> Result<Self> {
        let axes = cfg.alpha().iter().map(|a| HalfLineGrid::standard(*a)).collect::<Result<_>>()?;
        Self::new(cfg, axes)
    }

    pub fn config(&self) -> &HankelConfig {
        &self.cfg
    }

    pub fn axes(&self) -> &[HalfLineGrid] {
        &self.axes
    }

    /// Product grid; frequencies live on the same nodes.
    pub fn grid(&self) -> &WeightedGrid {
        &self.grid
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn check(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.grid.len() {
            return Err(Error::Shape(format!("{} values on a Hankel grid of {} nodes", f.len(), self.grid.len())));
        }
        Ok(())
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
        self.grid.sample(f)
    }
}

/// `Hf` on the grid nodes.
pub fn hankel_transform(h: &Hankel, f: &[Complex64]) -> Result<Vec<Complex64>> {
    h.check(f)?;
    let mats: Vec<&DMatrix<Complex64>> = h.mats.iter().collect();
    Ok(apply_per_axis(f, &h.shape, &mats))
}

/// `Hf(x)` at an arbitrary point.
pub fn hankel_transform_at(h: &Hankel, f: &[Complex64], x: &[f64]) -> Result<Complex64> {
    h.check(f)?;
    if x.len() != h.cfg.dim() {
        return Err(Error::Shape(format!("point of dimension {} for a {}-dimensional transform", x.len(), h.cfg.dim())));
    }
    let rows: Vec<DMatrix<Complex64>> = h
        .axes
        .iter()
        .zip(x)
        .map(|(g, xr)| {
            let vals = g
                .nodes()
                .iter()
                .zip(g.weights())
                .map(|(l, w)| Ok(Complex64::new(hankel_kernel(g.alpha(), *xr, *l)? * w, 0.0)))
                .collect::<Result<Vec<_>>>()?;
            Ok(DMatrix::from_row_slice(1, g.len(), &vals))
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&DMatrix<Complex64>> = rows.iter().collect();
    Ok(apply_per_axis(f, &h.shape, &refs)[0])
}

/// `τ^y f = H(E_y · Hf)`.
pub fn hankel_translate(h: &Hankel, y: &[f64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    if y.len() != h.cfg.dim() {
        return Err(Error::Shape("translation vector has the wrong dimension".into()));
    }
    let mut hf = hankel_transform(h, f)?;
    for (i, v) in hf.iter_mut().enumerate() {
        let node = h.grid.node(i);
        let mut e = 1.0;
        for (r, a) in h.cfg.alpha().iter().enumerate() {
            e *= hankel_kernel(*a, y[r], node[r])?;
        }
        *v *= e;
    }
    hankel_transform(h, &hf)
}

/// Product-formula points of the one-dimensional translation `τ^s F(t)`,
/// weights normalized to total mass `E(0)`.
fn translation_points(alpha: f64, bank: &RuleBank, t: f64, s: f64, cutoff: f64, out: &mut Vec<QPoint>) {
    let kappa = translation_mass(alpha);
    if alpha == 0.0 {
        for z in [(t - s).abs(), t + s] {
            if z <= cutoff {
                out.push(QPoint { z, w: 0.5 * kappa });
            }
        }
        return;
    }
    let start = out.len();
    bank.points(t, s, cutoff, out);
    let c = kappa * b_alpha(alpha);
    out[start..].iter_mut().for_each(|p| p.w *= c);
}

fn bank_for(alpha: f64) -> RuleBank {
    RuleBank::new(alpha - 1.0, alpha - 1.0)
}

/// One-dimensional translation matrix `T[i, k]` with `τ^s F(x_i) = Σ_k T[i,k] F(x_k)`.
fn translation_matrix(g: &HalfLineGrid, s: f64) -> DMatrix<Complex64> {
    let n = g.len();
    let bank = bank_for(g.alpha());
    let rows: Vec<Vec<f64>> = g
        .nodes()
        .par_iter()
        .map(|&t| {
            let mut row = vec![0.0; n];
            let mut pts = Vec::new();
            let mut coef = vec![0.0; g.order()];
            translation_points(g.alpha(), &bank, t, s.abs(), g.radius(), &mut pts);
            for p in &pts {
                if let Some(start) = g.lagrange(p.z, &mut coef) {
                    for (k, c) in coef.iter().enumerate() {
                        row[start + k] += p.w * c;
                    }
                }
            }
            row
        })
        .collect();
    DMatrix::from_fn(n, n, |i, k| Complex64::new(rows[i][k], 0.0))
}

/// `τ^y f` by the Gegenbauer product formula, axis by axis, with the
/// argument `√(x²+y²−2xyu)` read off the piecewise interpolant of `f`.
pub fn hankel_translate_direct(h: &Hankel, y: &[f64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    h.check(f)?;
    if y.len() != h.cfg.dim() {
        return Err(Error::Shape("translation vector has the wrong dimension".into()));
    }
    if let Some(a) = h.cfg.alpha().iter().find(|a| **a < 0.0) {
        return Err(Error::UnsupportedMode(format!("product formula needs α_r ≥ 0, got {a}")));
    }
    let mats: Vec<DMatrix<Complex64>> = h.axes.iter().zip(y).map(|(g, s)| translation_matrix(g, *s)).collect();
    let refs: Vec<&DMatrix<Complex64>> = mats.iter().collect();
    Ok(apply_per_axis(f, &h.shape, &refs))
}

/// `f♮g(x) = ∫ τ^x f(y) g(y) dν_α(y)` in one dimension, with the
/// translation taken from the product formula.
pub fn hankel_convolve(h: &Hankel, f: &[Complex64], g: &[Complex64]) -> Result<Vec<Complex64>> {
    h.check(f)?;
    h.check(g)?;
    if h.cfg.dim() != 1 {
        return Err(Error::UnsupportedMode("direct Hankel convolution is implemented for d = 1".into()));
    }
    let grid = &h.axes[0];
    let alpha = grid.alpha();
    if alpha < 0.0 {
        return Err(Error::UnsupportedMode(format!("product formula needs α ≥ 0, got {alpha}")));
    }
    let bank = bank_for(alpha);
    let cutoff = grid.effective_radius(f, 1e-15);
    let (x, w) = (grid.nodes(), grid.weights());
    Ok(x.par_iter()
        .map(|&xi| {
            let mut pts = Vec::new();
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &yj) in x.iter().enumerate() {
                if (xi - yj).abs() > cutoff {
                    continue;
                }
                pts.clear();
                translation_points(alpha, &bank, yj, xi, cutoff, &mut pts);
                let tau: Complex64 = pts.iter().map(|p| p.w * grid.interpolate(f, p.z)).sum();
                acc += w[j] * tau * g[j];
            }
            acc
        })
        .collect())
}

/// `f_t(x) = t^Q f(tx)`, so that `H(f_t)(x) = Hf(x/t)` and `‖f_t‖_1 = ‖f‖_1`.
pub fn hankel_dilate(h: &Hankel, f: &dyn Fn(&[f64]) -> Complex64, t: f64) -> Result<Vec<Complex64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("dilation factor {t} must be positive")));
    }
    let scale = t.powf(h.cfg.q());
    Ok(h.sample(|x| {
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        scale * f(&tx)
    }))
}

/// `T_m f = H(m · Hf)`.
pub fn hankel_multiplier(h: &Hankel, m: &Symbol, f: &[Complex64]) -> Result<Vec<Complex64>> {
    if m.dim() != h.cfg.dim() {
        return Err(Error::Shape(format!("symbol of dimension {} on a {}-dimensional grid", m.dim(), h.cfg.dim())));
    }
    let mut hf = hankel_transform(h, f)?;
    for (i, v) in hf.iter_mut().enumerate() {
        *v *= m.eval(h.grid.node(i));
    }
    hankel_transform(h, &hf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite_legendre;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let peak = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / peak
    }

    fn engine(alpha: f64) -> Hankel {
        Hankel::standard(HankelConfig::new(vec![alpha]).unwrap()).unwrap()
    }

    /// Even test functions `(c_0 + c_1 x² + c_2 x⁴) e^{−t x²}`.
    fn random_even(rng: &mut ChaCha8Rng) -> impl Fn(&[f64]) -> Complex64 {
        let c: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = rng.random_range(0.6..1.5);
        move |x: &[f64]| {
            let s = x[0] * x[0];
            Complex64::new((c[0] + c[1] * s + c[2] * s * s) * (-t * s).exp(), 0.0)
        }
    }

    #[test]
    fn gaussian_closed_form() {
        for alpha in [0.0, 0.5, 1.0, 2.5] {
            let h = engine(alpha);
            for t in [0.5, 1.0, 2.0] {
                let f = h.sample(|x| Complex64::new((-t * x[0] * x[0]).exp(), 0.0));
                let got = hankel_transform(&h, &f).unwrap();
                let c = gaussian_constant(alpha) * t.powf(-(2.0 * alpha + 1.0) / 2.0);
                let want = h.sample(|x| Complex64::new(c * (-x[0] * x[0] / (4.0 * t)).exp(), 0.0));
                assert!(rel_err(&got, &want) < 1e-7, "α={alpha} t={t}: {}", rel_err(&got, &want));
                // fitted constant from the value at the first node
                let x0 = h.grid().node(0)[0];
                let fitted = got[0].re * t.powf((2.0 * alpha + 1.0) / 2.0) / (-x0 * x0 / (4.0 * t)).exp();
                assert!((fitted - gaussian_constant(alpha)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn alpha_zero_is_a_cosine_transform() {
        let h = engine(0.0);
        let f = |l: f64| (1.0 + l * l) * (-l * l).exp();
        let fv = h.sample(|x| Complex64::new(f(x[0]), 0.0));
        let oracle = composite_legendre(0.0, 12.0, 400, 10).unwrap();
        for x in [0.0, 0.7, 2.3, 5.0, 9.1] {
            let want = (2.0 / std::f64::consts::PI).sqrt() * oracle.integrate(|l| f(l) * (x * l).cos());
            let got = hankel_transform_at(&h, &fv, &[x]).unwrap();
            assert!((got.re - want).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn involution_and_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for alpha in [-0.3, 0.0, 1.5] {
            let h = engine(alpha);
            let f = h.sample(random_even(&mut rng));
            let back = hankel_transform(&h, &hankel_transform(&h, &f).unwrap()).unwrap();
            let diff: Vec<Complex64> = back.iter().zip(&f).map(|(a, b)| a - b).collect();
            assert!(h.grid().lp_norm(&diff, 2.0) < 1e-6 * h.grid().lp_norm(&f, 2.0));
        }
        let axes = vec![HalfLineGrid::new(0.5, 12.0, 24, 8).unwrap(), HalfLineGrid::new(1.0, 12.0, 24, 8).unwrap()];
        let h2 = Hankel::new(HankelConfig::new(vec![0.5, 1.0]).unwrap(), axes).unwrap();
        let f = h2.sample(|x| Complex64::new((-x[0] * x[0] - 0.5 * x[1] * x[1]).exp(), 0.0));
        let got = hankel_transform(&h2, &f).unwrap();
        let want = h2.sample(|x| {
            let c = gaussian_constant(0.5) * gaussian_constant(1.0) * 0.5f64.powf(-1.5);
            Complex64::new(c * (-x[0] * x[0] / 4.0 - x[1] * x[1] / 2.0).exp(), 0.0)
        });
        assert!(rel_err(&got, &want) < 1e-7);
        assert_eq!(HankelConfig::new(vec![0.5, 1.0]).unwrap().q(), 5.0);
    }

    #[test]
    fn translation_routes_agree_and_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for alpha in [0.0, 0.5, 1.75] {
            let h = engine(alpha);
            let f = h.sample(random_even(&mut rng));
            for y in [0.4, 1.3, 2.9] {
                let a = hankel_translate(&h, &[y], &f).unwrap();
                let b = hankel_translate_direct(&h, &[y], &f).unwrap();
                assert!(rel_err(&a, &b) < 1e-6, "α={alpha} y={y}: {}", rel_err(&a, &b));
            }
            let hf = hankel_transform(&h, &f).unwrap();
            let tau = |x: f64, y: f64| -> Complex64 {
                let g: Vec<Complex64> = hf
                    .iter()
                    .zip(h.grid().nodes())
                    .map(|(v, l)| v * hankel_kernel(alpha, y, *l).unwrap())
                    .collect();
                hankel_transform_at(&h, &g, &[x]).unwrap()
            };
            for _ in 0..5 {
                let (x, y) = (rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
                assert!((tau(x, y) - tau(y, x)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_support_and_mass() {
        let alpha = 1.0;
        let h = engine(alpha);
        let a = 1.5;
        let bump = |x: f64| if x < a { (1.0 - (x / a).powi(2)).powi(8) } else { 0.0 };
        let f = h.sample(|x| Complex64::new(bump(x[0]), 0.0));
        let y = 4.0;
        let tf = hankel_translate_direct(&h, &[y], &f).unwrap();
        let nodes = h.grid().nodes();
        let outside: f64 = tf
            .iter()
            .zip(nodes)
            .zip(h.grid().weights())
            .filter(|((_, x), _)| **x < y - a || **x > y + a)
            .map(|((v, _), w)| v.norm() * w)
            .sum();
        assert!(outside <= 1e-8);
        let l1 = |v: &[Complex64]| h.grid().lp_norm(v, 1.0);
        let ratio = l1(&tf) / l1(&f);
        assert!((ratio - translation_mass(alpha)).abs() < 1e-6, "{ratio}");
        assert!(ratio <= 1.0 + 1e-6);
    }

    #[test]
    fn convolution_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in [0.0, 0.5, 1.0, 2.5] {
            let h = engine(alpha);
            let f = h.sample(random_even(&mut rng));
            let g = h.sample(random_even(&mut rng));
            let fg = hankel_convolve(&h, &f, &g).unwrap();
            let gf = hankel_convolve(&h, &g, &f).unwrap();
            assert!(rel_err(&fg, &gf) < 1e-8, "α={alpha}: {}", rel_err(&fg, &gf));
            let lhs = hankel_transform(&h, &fg).unwrap();
            let hf = hankel_transform(&h, &f).unwrap();
            let hg = hankel_transform(&h, &g).unwrap();
            let rhs: Vec<Complex64> = hf.iter().zip(&hg).map(|(a, b)| a * b).collect();
            assert!(rel_err(&lhs, &rhs) < 1e-6, "α={alpha}: {}", rel_err(&lhs, &rhs));
        }
    }

    #[test]
    fn young_bound_for_nonnegative_inputs() {
        let h = engine(0.5);
        let f = h.sample(|x| Complex64::new((-x[0] * x[0]).exp() * (1.0 + x[0] * x[0]), 0.0));
        let g = h.sample(|x| Complex64::new((-2.0 * x[0] * x[0]).exp(), 0.0));
        let fg = hankel_convolve(&h, &f, &g).unwrap();
        let n1 = |v: &[Complex64]| h.grid().lp_norm(v, 1.0);
        assert!(n1(&fg) <= (1.0 + 1e-6) * n1(&f) * n1(&g));
    }

    #[test]
    fn dilation() {
        let h = engine(1.0);
        let f = |x: &[f64]| Complex64::new((-x[0] * x[0]).exp(), 0.0);
        let t = 1.7;
        let ft = hankel_dilate(&h, &f, t).unwrap();
        let f0 = h.sample(f);
        let n1 = |v: &[Complex64]| h.grid().lp_norm(v, 1.0);
        assert!((n1(&ft) - n1(&f0)).abs() < 1e-12 * n1(&f0));
        for x in [0.3, 1.0, 2.5] {
            let lhs = hankel_transform_at(&h, &ft, &[x]).unwrap();
            let rhs = hankel_transform_at(&h, &f0, &[x / t]).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
        assert!(hankel_dilate(&h, &f, 0.0).is_err());
    }

    #[test]
    fn multipliers() {
        let h = engine(0.5);
        let f = h.sample(|x| Complex64::new(x[0] * x[0] * (-x[0] * x[0]).exp(), 0.0));
        let one = Symbol::constant(1, Complex64::new(1.0, 0.0));
        assert!(rel_err(&hankel_multiplier(&h, &one, &f).unwrap(), &f) < 1e-8);
        let laplace = Symbol::new(1, "λ²/(λ²+1)", |l| Complex64::new(l[0] * l[0] / (l[0] * l[0] + 1.0), 0.0));
        let n2 = |v: &[Complex64]| h.grid().lp_norm(v, 2.0);
        assert!(n2(&hankel_multiplier(&h, &laplace, &f).unwrap()) <= n2(&f));
        // f = H(φ) with φ vanishing to order 8 at the origin, so m·Hf stays smooth
        let phi = h.sample(|x| Complex64::new(x[0].powi(8) * (-(x[0] - 2.0).powi(2)).exp(), 0.0));
        let f = hankel_transform(&h, &phi).unwrap();
        let ip = Symbol::imaginary_power(vec![2.0 * 1.5]);
        let out = hankel_multiplier(&h, &ip, &f).unwrap();
        assert!((n2(&out) - n2(&f)).abs() < 1e-6 * n2(&f));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(HankelConfig::new(vec![-0.5]).is_err());
        assert!(HankelConfig::new(vec![]).is_err());
        let h = engine(0.5);
        assert!(hankel_transform(&h, &[Complex64::new(1.0, 0.0)]).is_err());
        let caps = HankelConfig::new(vec![0.25, 1.0]).unwrap().capabilities();
        assert!(caps.product_formula && !caps.l1_contraction);
    }
}
