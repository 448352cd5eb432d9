//! Modulated symbols `m_{N,t}(λ) = λ^N t^N e^{-⟨t,λ⟩/2} m(λ)`, their Mellin
//! transforms and the weighted `u`-integral of the sup over `t`.

use super::loggrid::LinAxis;
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::tensor::unravel;
use num_complex::Complex64;
use rayon::prelude::*;

/// `m_{N,t}` for a fixed base symbol, order `N ≥ 1` and scale `t > 0`.
#[derive(Debug, Clone)]
pub struct ModulatedSymbol {
    base: Symbol,
    n: Vec<u32>,
    t: Vec<f64>,
}

fn check_nt(dim: usize, n: &[u32], t: &[f64]) -> Result<()> {
    if n.len() != dim || t.len() != dim {
        return Err(Error::Shape(format!("N and t must have {dim} components")));
    }
    if n.contains(&0) {
        return Err(Error::Parameter(format!("N = {n:?} must be ≥ 1 componentwise")));
    }
    if t.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::Parameter(format!("t = {t:?} must be positive")));
    }
    Ok(())
}

impl ModulatedSymbol {
    pub fn new(base: Symbol, n: Vec<u32>, t: Vec<f64>) -> Result<Self> {
        check_nt(base.dim(), &n, &t)?;
        Ok(Self { base, n, t })
    }

    pub fn base(&self) -> &Symbol {
        &self.base
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn eval(&self, lambda: &[f64]) -> Complex64 {
        let mut s = 0.0;
        let mut pre = 1.0;
        for ((l, t), n) in lambda.iter().zip(&self.t).zip(&self.n) {
            pre *= (l * t).powi(*n as i32);
            s += l * t;
        }
        self.base.eval(lambda) * (pre * (-0.5 * s).exp())
    }

    /// As a plain [`Symbol`].
    pub fn to_symbol(&self) -> Symbol {
        let me = self.clone();
        Symbol::new(self.base.dim(), format!("{}_N{:?}_t{:?}", self.base.name(), self.n, self.t), move |l| me.eval(l))
    }

    /// `𝓜(m_{N,t})(u)`.
    pub fn mellin(&self, u: &[f64], opts: &ModulatedOptions) -> Result<Complex64> {
        modulated_mellin(&self.base, &self.n, &self.t, u, opts)
    }
}

/// Quadrature settings in the variable `σ = ln(tλ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulatedOptions {
    pub step: f64,
    /// Lower end is `-lower_decay / N_r`.
    pub lower_decay: f64,
    pub upper: f64,
}

impl Default for ModulatedOptions {
    fn default() -> Self {
        Self { step: 0.02, lower_decay: 37.0, upper: 120f64.ln() }
    }
}

/// `𝓜(m_{N,t})(u) = t^{iu} ∫ e^{(N-iu)·σ} e^{-Σe^{σ_r}/2} m(e^σ/t) dσ` by the
/// trapezoid rule.
pub fn modulated_mellin(m: &Symbol, n: &[u32], t: &[f64], u: &[f64], opts: &ModulatedOptions) -> Result<Complex64> {
    let d = m.dim();
    check_nt(d, n, t)?;
    if u.len() != d {
        return Err(Error::Shape(format!("{} frequencies for a {d}-dimensional symbol", u.len())));
    }
    if !(opts.step > 0.0) {
        return Err(Error::Parameter("quadrature step must be positive".into()));
    }
    // per-axis factors e^{(N-iu)σ - e^σ/2} times trapezoid weights
    let axes: Vec<(Vec<f64>, Vec<Complex64>)> = (0..d)
        .map(|r| {
            let lo = -opts.lower_decay / n[r] as f64;
            let count = ((opts.upper - lo) / opts.step).ceil() as usize + 1;
            let h = (opts.upper - lo) / (count - 1) as f64;
            let w = super::loggrid::trapezoid(count, h);
            let a = Complex64::new(n[r] as f64, -u[r]);
            let mut lam = Vec::with_capacity(count);
            let mut f = Vec::with_capacity(count);
            for (k, wk) in w.iter().enumerate() {
                let s = lo + k as f64 * h;
                lam.push(s.exp() / t[r]);
                f.push((a * s - 0.5 * s.exp()).exp() * wk);
            }
            (lam, f)
        })
        .collect();
    let shape: Vec<usize> = axes.iter().map(|a| a.0.len()).collect();
    let total: usize = shape.iter().product();
    let sum: Complex64 = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = unravel(flat, &shape);
            let mut lam = Vec::with_capacity(d);
            let mut f = Complex64::new(1.0, 0.0);
            for r in 0..d {
                lam.push(axes[r].0[idx[r]]);
                f *= axes[r].1[idx[r]];
            }
            f * m.eval(&lam)
        })
        .sum();
    let phase: f64 = u.iter().zip(t).map(|(ur, tr)| ur * tr.ln()).sum();
    let v = sum * Complex64::from_polar(1.0, phase);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Numerical(format!("modulated transform of `{}` is not finite at u = {u:?}", m.name())));
    }
    Ok(v)
}

/// Product sweep of `count` log-spaced values in `[lo, hi]` per axis.
pub fn log_t_sweep(dim: usize, lo: f64, hi: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    if !(lo > 0.0 && hi >= lo) || count == 0 {
        return Err(Error::Parameter(format!("invalid t sweep [{lo}, {hi}] with {count} points")));
    }
    let vals: Vec<f64> = (0..count)
        .map(|k| if count == 1 { lo } else { (lo.ln() + (hi / lo).ln() * k as f64 / (count - 1) as f64).exp() })
        .collect();
    let shape = vec![count; dim];
    Ok((0..count.pow(dim as u32))
        .map(|flat| unravel(flat, &shape).into_iter().map(|k| vals[k]).collect())
        .collect())
}

/// `max_{t ∈ sweep} |𝓜(m_{N,t})(u)|`.
pub fn modulated_mellin_sup(m: &Symbol, n: &[u32], u: &[f64], t_sweep: &[Vec<f64>], opts: &ModulatedOptions) -> Result<f64> {
    t_sweep
        .iter()
        .map(|t| modulated_mellin(m, n, t, u, opts).map(|v| v.norm()))
        .try_fold(0.0f64, |acc, v| v.map(|x| acc.max(x)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedaOptions {
    /// Frequency box `[-u_max, u_max]^d`.
    pub u_max: f64,
    pub u_count: usize,
    pub t_sweep: Vec<Vec<f64>>,
    pub quad: ModulatedOptions,
}

impl MedaOptions {
    pub fn standard(dim: usize) -> Self {
        Self {
            u_max: 40.0,
            u_count: 321,
            t_sweep: log_t_sweep(dim, 1e-2, 1e2, 9).expect("valid sweep"),
            quad: ModulatedOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedaReport {
    pub value: f64,
    /// Extrapolated contribution from outside the frequency box.
    pub tail_estimate: f64,
    /// Fitted power-law decay exponent of the integrand's axis marginals (minimum over axes).
    pub decay_exponent: f64,
    pub divergent: bool,
}

/// `∫ w(u) sup_t |𝓜(m_{N,t})(u)| du` over the truncated box.
pub fn meda_functional(
    m: &Symbol,
    n: &[u32],
    weight: &(dyn Fn(&[f64]) -> f64 + Sync),
    opts: &MedaOptions,
) -> Result<MedaReport> {
    let d = m.dim();
    let axis = LinAxis::new(opts.u_count, -opts.u_max, opts.u_max)?;
    let u_vals = axis.values();
    let w = axis.weights();
    let shape = vec![opts.u_count; d];
    let total: usize = shape.iter().product();
    let integrand: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let u: Vec<f64> = unravel(flat, &shape).into_iter().map(|k| u_vals[k]).collect();
            let s = modulated_mellin_sup(m, n, &u, &opts.t_sweep, &opts.quad)?;
            Ok(weight(&u) * s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut value = 0.0;
    for (flat, g) in integrand.iter().enumerate() {
        let wt: f64 = unravel(flat, &shape).into_iter().map(|k| w[k]).product();
        value += wt * g;
    }
    let mut tail = 0.0;
    let mut exponent = f64::INFINITY;
    for r in 0..d {
        let mut marg = vec![0.0; opts.u_count];
        for (flat, g) in integrand.iter().enumerate() {
            let idx = unravel(flat, &shape);
            let wt: f64 = idx.iter().enumerate().filter(|(s, _)| *s != r).map(|(_, k)| w[*k]).product();
            marg[idx[r]] += wt * g;
        }
        let (a, t) = power_tail(&u_vals, &marg, opts.u_max);
        exponent = exponent.min(a);
        tail += t;
    }
    Ok(MedaReport { value, tail_estimate: tail, decay_exponent: exponent, divergent: exponent <= 1.0 })
}

/// Fits `g(u) ≈ C|u|^{-a}` on `U/10 ≤ |u| ≤ U` (both signs pooled) and
/// integrates the fit beyond `U`. Returns `(a, tail)`.
fn power_tail(u: &[f64], g: &[f64], u_max: f64) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = u
        .iter()
        .zip(g)
        .filter(|(x, v)| x.abs() >= u_max / 10.0 && **v > 0.0)
        .map(|(x, v)| (x.abs().ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return (f64::INFINITY, 0.0);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    let a = -sxy / sxx;
    let c = (my + a * mx).exp();
    if a <= 1.0 {
        return (a, f64::INFINITY);
    }
    (a, 2.0 * c * u_max.powf(1.0 - a) / (a - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite_legendre;
    use crate::special::gamma_complex;

    #[test]
    fn constant_symbol_gamma_oracle() {
        let one = Symbol::constant(1, Complex64::new(1.0, 0.0));
        let opts = ModulatedOptions::default();
        for u in [0.0, 0.7, 3.0] {
            for t in [0.01, 1.0, 50.0] {
                let got = modulated_mellin(&one, &[1], &[t], &[u], &opts).unwrap();
                let want = Complex64::from_polar(2.0, -u * 2f64.ln() + u * f64::ln(t))
                    * gamma_complex(Complex64::new(1.0, -u));
                assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "u={u} t={t}");
            }
            let sweep = log_t_sweep(1, 1e-2, 1e2, 7).unwrap();
            let sup = modulated_mellin_sup(&one, &[1], &[u], &sweep, &opts).unwrap();
            let want = 2.0 * gamma_complex(Complex64::new(1.0, -u)).norm();
            assert!((sup - want).abs() < 1e-10);
        }
        let at0 = modulated_mellin(&one, &[1], &[3.0], &[0.0], &opts).unwrap();
        assert!((at0.norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn modulated_eval_and_validation() {
        let one = Symbol::constant(1, Complex64::new(1.0, 0.0));
        let ms = ModulatedSymbol::new(one.clone(), vec![2], vec![0.5]).unwrap();
        assert!((ms.eval(&[2.0]).re - (-0.5f64).exp()).abs() < 1e-15);
        assert!(ModulatedSymbol::new(one.clone(), vec![0], vec![1.0]).is_err());
        assert!(ModulatedSymbol::new(one, vec![1], vec![-1.0]).is_err());
    }

    #[test]
    fn sup_is_monotone_under_refinement() {
        let m = Symbol::new(1, "λ/(1+λ)", |l| Complex64::new(l[0] / (1.0 + l[0]), 0.0));
        let opts = ModulatedOptions::default();
        let coarse = log_t_sweep(1, 1e-2, 1e2, 5).unwrap();
        let fine = log_t_sweep(1, 1e-2, 1e2, 9).unwrap();
        for u in [0.0, 1.0, 4.0] {
            let a = modulated_mellin_sup(&m, &[1], &[u], &coarse, &opts).unwrap();
            let b = modulated_mellin_sup(&m, &[1], &[u], &fine, &opts).unwrap();
            assert!(b >= a && a.is_finite());
        }
    }

    #[test]
    fn meda_of_constant_symbol() {
        let one = Symbol::constant(1, Complex64::new(1.0, 0.0));
        let opts = MedaOptions { t_sweep: vec![vec![1.0]], ..MedaOptions::standard(1) };
        let rep = meda_functional(&one, &[1], &|_| 1.0, &opts).unwrap();
        let oracle = composite_legendre(-40.0, 40.0, 400, 10)
            .unwrap()
            .integrate(|u| 2.0 * gamma_complex(Complex64::new(1.0, -u)).norm());
        assert!((rep.value - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", rep.value);
        assert!(!rep.divergent);
        assert!(rep.tail_estimate < 1e-12);
        let zero = Symbol::constant(1, Complex64::new(0.0, 0.0));
        assert_eq!(meda_functional(&zero, &[1], &|_| 1.0, &opts).unwrap().value, 0.0);
    }
}
