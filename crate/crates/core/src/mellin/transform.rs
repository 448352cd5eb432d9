//! Mellin transform `𝓜m(u) = ∫ λ^{-iu} m(λ) dλ/λ` on a log grid, its
//! inverse, and the Plancherel pair.

use super::loggrid::{boundary_ratio, marginal, tail_estimate, LinAxis, LogAxis, LogGridSymbol};
use crate::error::{Error, Result};
use crate::tensor::apply_per_axis;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{LN_10, PI};

/// Relative boundary magnitude above which a symbol is flagged as not decayed.
pub const SYMBOL_DECAY_TOL: f64 = 1e-12;
/// Same for transform values at the ends of the `u` grid.
pub const TRANSFORM_DECAY_TOL: f64 = 1e-10;

/// A value together with the estimated truncation tail and a decay flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    /// Estimate of `∫|m| dλ/λ` outside the grid box.
    pub tail_estimate: f64,
    pub decay_warning: bool,
}

/// Transform values on a product of `u` axes.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinSamples {
    pub axes: Vec<LinAxis>,
    pub values: Vec<Complex64>,
    pub tail_estimate: f64,
    pub decay_warning: bool,
}

/// Result of the inverse transform.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinInverse {
    pub symbol: LogGridSymbol,
    pub decay_warning: bool,
}

fn symbol_tail(m: &LogGridSymbol) -> f64 {
    let shape = m.shape();
    let w: Vec<Vec<f64>> = m.axes().iter().map(|a| a.weights()).collect();
    (0..m.dim())
        .map(|r| {
            let g = marginal(m.values(), &shape, &w, r);
            tail_estimate(&m.axes()[r].s_values(), &g, LN_10)
        })
        .sum()
}

/// Per-axis matrix `E[i, j] = w_j e^{-i u_i s_j}`.
fn forward_matrix(s_axis: &LogAxis, u: &[f64]) -> DMatrix<Complex64> {
    let w = s_axis.weights();
    let s = s_axis.s_values();
    DMatrix::from_fn(u.len(), s.len(), |i, j| Complex64::from_polar(w[j], -u[i] * s[j]))
}

/// `𝓜m(u)` at a single frequency vector.
pub fn mellin_transform(m: &LogGridSymbol, u: &[f64]) -> Result<MellinValue> {
    if u.len() != m.dim() {
        return Err(Error::Shape(format!("{} frequencies for a {}-dimensional symbol", u.len(), m.dim())));
    }
    let mats: Vec<DMatrix<Complex64>> = m.axes().iter().zip(u).map(|(a, ur)| forward_matrix(a, &[*ur])).collect();
    let refs: Vec<&DMatrix<Complex64>> = mats.iter().collect();
    let v = apply_per_axis(m.values(), &m.shape(), &refs);
    Ok(MellinValue {
        value: v[0],
        tail_estimate: symbol_tail(m),
        decay_warning: m.boundary_ratio() > SYMBOL_DECAY_TOL,
    })
}

/// `𝓜m` on a whole product grid of frequencies.
pub fn mellin_transform_grid(m: &LogGridSymbol, u_axes: &[LinAxis]) -> Result<MellinSamples> {
    if u_axes.len() != m.dim() {
        return Err(Error::Shape(format!("{} frequency axes for a {}-dimensional symbol", u_axes.len(), m.dim())));
    }
    let mats: Vec<DMatrix<Complex64>> =
        m.axes().iter().zip(u_axes).map(|(a, ua)| forward_matrix(a, &ua.values())).collect();
    let refs: Vec<&DMatrix<Complex64>> = mats.iter().collect();
    let values = apply_per_axis(m.values(), &m.shape(), &refs);
    Ok(MellinSamples {
        axes: u_axes.to_vec(),
        values,
        tail_estimate: symbol_tail(m),
        decay_warning: m.boundary_ratio() > SYMBOL_DECAY_TOL,
    })
}

/// `(2π)^{-d} ∫ 𝓜m(u) λ^{iu} du` sampled on the given log axes.
pub fn mellin_inverse(samples: &MellinSamples, s_axes: &[LogAxis]) -> Result<MellinInverse> {
    if samples.axes.is_empty() {
        return Err(Error::Parameter("empty frequency grid".into()));
    }
    if s_axes.len() != samples.axes.len() {
        return Err(Error::Shape("inverse grid dimension differs from the frequency grid".into()));
    }
    let shape: Vec<usize> = samples.axes.iter().map(|a| a.count).collect();
    if samples.values.len() != shape.iter().product::<usize>() {
        return Err(Error::Shape("frequency samples do not fill their grid".into()));
    }
    let mats: Vec<DMatrix<Complex64>> = samples
        .axes
        .iter()
        .zip(s_axes)
        .map(|(ua, sa)| {
            let u = ua.values();
            let w = ua.weights();
            let s = sa.s_values();
            DMatrix::from_fn(s.len(), u.len(), |i, j| Complex64::from_polar(w[j] / (2.0 * PI), u[j] * s[i]))
        })
        .collect();
    let refs: Vec<&DMatrix<Complex64>> = mats.iter().collect();
    let values = apply_per_axis(&samples.values, &shape, &refs);
    Ok(MellinInverse {
        symbol: LogGridSymbol::from_values(s_axes.to_vec(), values)?,
        decay_warning: boundary_ratio(&samples.values, &shape) > TRANSFORM_DECAY_TOL,
    })
}

/// `(2π)^{-d} ∫ |𝓜m|² du` by the trapezoid rule.
pub fn transform_l2_squared(samples: &MellinSamples) -> f64 {
    let shape: Vec<usize> = samples.axes.iter().map(|a| a.count).collect();
    let w: Vec<Vec<f64>> = samples.axes.iter().map(|a| a.weights()).collect();
    let d = samples.axes.len() as i32;
    super::loggrid::weighted_sum(&samples.values, &shape, &w, |z| z.norm_sqr()) / (2.0 * PI).powi(d)
}

/// Outcome of a transform/inverse/Plancherel check on one symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfTest {
    pub plancherel_rel_err: f64,
    pub round_trip_rel_err: f64,
}

/// Compares `∫|m|²dλ/λ` with `(2π)^{-d}∫|𝓜m|²du` and the inverse of the
/// transform with `m` on its own grid.
pub fn self_test(m: &LogGridSymbol, u_axes: &[LinAxis]) -> Result<SelfTest> {
    let t = mellin_transform_grid(m, u_axes)?;
    let lhs = m.l2_squared();
    let rhs = transform_l2_squared(&t);
    let back = mellin_inverse(&t, m.axes())?;
    let w: Vec<Vec<f64>> = m.axes().iter().map(|a| a.weights()).collect();
    let diff: Vec<Complex64> = back.symbol.values().iter().zip(m.values()).map(|(a, b)| a - b).collect();
    let err = super::loggrid::weighted_sum(&diff, &m.shape(), &w, |z| z.norm_sqr());
    Ok(SelfTest {
        plancherel_rel_err: (lhs - rhs).abs() / lhs,
        round_trip_rel_err: (err / lhs).sqrt(),
    })
}

/// Log-Gaussian test symbol `exp(-a (ln λ - b)² + i k ln λ)` in each variable.
pub fn log_gaussian(axes: Vec<LogAxis>, a: &[f64], b: &[f64], k: &[f64]) -> Result<LogGridSymbol> {
    if a.len() != axes.len() || b.len() != axes.len() || k.len() != axes.len() {
        return Err(Error::Shape("log-Gaussian parameters differ in length from the grid".into()));
    }
    LogGridSymbol::from_log_fn(axes, |s| {
        s.iter()
            .enumerate()
            .map(|(r, x)| Complex64::from_polar((-a[r] * (x - b[r]).powi(2)).exp(), k[r] * x))
            .product()
    })
}

/// Closed-form transform of [`log_gaussian`]:
/// `∏ √(π/a) e^{-i(u-k)b} e^{-(u-k)²/(4a)}`.
pub fn log_gaussian_transform(a: &[f64], b: &[f64], k: &[f64], u: &[f64]) -> Complex64 {
    (0..u.len())
        .map(|r| {
            let v = u[r] - k[r];
            Complex64::from_polar((PI / a[r]).sqrt() * (-v * v / (4.0 * a[r])).exp(), -v * b[r])
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_complex;
    use crate::symbol::Symbol;

    #[test]
    fn gamma_oracle_for_lambda_exp() {
        let axis = LogAxis::new(4001, 1e-14, 60.0).unwrap();
        let m = LogGridSymbol::sample(&Symbol::new(1, "λe^-λ", |l| Complex64::new(l[0] * (-l[0]).exp(), 0.0)), vec![axis])
            .unwrap();
        for u in [0.0, 0.5, 1.0, 3.0] {
            let got = mellin_transform(&m, &[u]).unwrap();
            let want = gamma_complex(Complex64::new(1.0, -u));
            assert!((got.value - want).norm() < 1e-7, "u={u}");
            assert!(!got.decay_warning);
        }
        let one = mellin_transform(&m, &[1.0]).unwrap().value.norm();
        assert!((one - 0.521564).abs() < 1e-6);
    }

    #[test]
    fn indicator_closed_form() {
        // grid with nodes at s = 0 and s = 1, jumps sampled at their midpoint value
        let axis = LogAxis::new(2001, (-10.0f64).exp(), 10.0f64.exp()).unwrap();
        let m = LogGridSymbol::from_log_fn(vec![axis], |s| {
            let x = s[0];
            let v = if (x - 0.0).abs() < 1e-9 || (x - 1.0).abs() < 1e-9 {
                0.5
            } else if x > 0.0 && x < 1.0 {
                1.0
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .unwrap();
        for u in [0.5, 1.0, 3.0] {
            let got = mellin_transform(&m, &[u]).unwrap().value;
            let iu = Complex64::new(0.0, u);
            let want = (1.0 - (-iu).exp()) / iu;
            assert!((got - want).norm() < 1e-4, "u={u}");
        }
        assert!((mellin_transform(&m, &[0.0]).unwrap().value - 1.0).norm() < 1e-12);
    }

    #[test]
    fn log_gaussian_matches_closed_form_and_round_trips() {
        let axes = vec![LogAxis::standard()];
        let (a, b, k) = ([0.7], [1.2], [-2.0]);
        let m = log_gaussian(axes.clone(), &a, &b, &k).unwrap();
        for u in [-5.0, 0.0, 2.5] {
            let got = mellin_transform(&m, &[u]).unwrap().value;
            assert!((got - log_gaussian_transform(&a, &b, &k, &[u])).norm() < 1e-10);
        }
        let st = self_test(&m, &[LinAxis::standard()]).unwrap();
        assert!(st.plancherel_rel_err < 1e-6 && st.round_trip_rel_err < 1e-6);
    }

    #[test]
    fn zero_and_conjugation() {
        let axes = vec![LogAxis::new(201, 1e-3, 1e3).unwrap()];
        let zero = LogGridSymbol::from_values(axes.clone(), vec![Complex64::new(0.0, 0.0); 201]).unwrap();
        let t = mellin_transform_grid(&zero, &[LinAxis::new(11, -5.0, 5.0).unwrap()]).unwrap();
        let back = mellin_inverse(&t, &axes).unwrap();
        assert!(back.symbol.values().iter().all(|z| z.norm() == 0.0));
        let m = log_gaussian(axes.clone(), &[1.0], &[0.3], &[1.5]).unwrap();
        let conj = LogGridSymbol::from_values(axes, m.values().iter().map(|z| z.conj()).collect()).unwrap();
        let u = 0.8;
        let lhs = mellin_transform(&conj, &[u]).unwrap().value;
        let rhs = mellin_transform(&m, &[-u]).unwrap().value.conj();
        assert!((lhs - rhs).norm() < 1e-13);
    }
}
