//! Gauss quadrature from three-term recurrences (Golub-Welsch), and the
//! orthonormal polynomials attached to each measure.
//!
//! Nodes come from the symmetric Jacobi matrix, polished by Newton steps on
//! the degree-`n` orthonormal polynomial. Weights use the Christoffel formula
//! `w_i = 1 / Σ_{k<n} q_k(x_i)²`, which keeps full relative accuracy even for
//! the tiny tail weights of the Gaussian and Laguerre measures.

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma;
use nalgebra::DMatrix;

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine map of a rule on `[-1, 1]` onto `[lo, hi]` (Lebesgue-type weight).
    pub fn mapped(&self, lo: f64, hi: f64) -> GaussRule {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        GaussRule {
            nodes: self.nodes.iter().map(|t| mid + half * t).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

/// Recurrence `x q_k = b_{k+1} q_{k+1} + a_k q_k + b_k q_{k-1}` of the
/// orthonormal polynomials of a measure with total mass `mass`.
#[derive(Debug, Clone)]
pub struct Recurrence {
    /// Diagonal coefficients `a_0, a_1, …`.
    pub a: Vec<f64>,
    /// Off-diagonal coefficients; `b[k]` couples degrees `k-1` and `k`, `b[0]` is unused.
    pub b: Vec<f64>,
    pub mass: f64,
}

impl Recurrence {
    /// Values `q_0(x), …, q_{n-1}(x)`.
    pub fn eval(&self, x: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return out;
        }
        let mut prev = 0.0;
        let mut cur = 1.0 / self.mass.sqrt();
        out.push(cur);
        for k in 0..n - 1 {
            let next = ((x - self.a[k]) * cur - self.b[k] * prev) / self.b[k + 1];
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    /// `(q_n(x), q_n'(x))` by the differentiated recurrence.
    fn eval_with_derivative(&self, x: f64, n: usize) -> (f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mass.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        for k in 0..n {
            let p_next = ((x - self.a[k]) * p - self.b[k] * p_prev) / self.b[k + 1];
            let d_next = (p + (x - self.a[k]) * d - self.b[k] * d_prev) / self.b[k + 1];
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d)
    }

    /// `n`-point Gauss rule (exact for polynomials of degree `2n - 1`).
    pub fn gauss_rule(&self, n: usize) -> Result<GaussRule> {
        if n == 0 {
            return Err(Error::Parameter("quadrature needs at least one node".into()));
        }
        if self.a.len() < n || self.b.len() < n + 1 {
            return Err(Error::Parameter(format!(
                "recurrence has too few coefficients for {n} nodes"
            )));
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jac[(k, k)] = self.a[k];
            if k + 1 < n {
                jac[(k, k + 1)] = self.b[k + 1];
                jac[(k + 1, k)] = self.b[k + 1];
            }
        }
        let eig = jac.symmetric_eigen();
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|x, y| x.total_cmp(y));
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, d) = self.eval_with_derivative(*x, n);
                if d == 0.0 || !d.is_finite() || !p.is_finite() {
                    break;
                }
                let step = p / d;
                if step.abs() > 1e-6 * (1.0 + x.abs()) {
                    break;
                }
                *x -= step;
            }
        }
        let mut weights = Vec::with_capacity(n);
        for &x in &nodes {
            let s: f64 = self.eval(x, n).iter().map(|q| q * q).sum();
            let w = 1.0 / s;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Numerical(format!(
                    "Christoffel weight at node {x} is not a positive finite number"
                )));
            }
            weights.push(w);
        }
        Ok(GaussRule { nodes, weights })
    }
}

/// Recurrence for the Gaussian probability measure `π^{-1/2} e^{-x²} dx`.
pub fn hermite_recurrence(n: usize) -> Recurrence {
    Recurrence {
        a: vec![0.0; n + 1],
        b: (0..=n + 1).map(|k| (k as f64 / 2.0).sqrt()).collect(),
        mass: 1.0,
    }
}

/// Recurrence for `x^α e^{-x} / Γ(α+1) dx` on `(0, ∞)`.
pub fn laguerre_recurrence(n: usize, alpha: f64) -> Recurrence {
    Recurrence {
        a: (0..=n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect(),
        b: (0..=n + 1)
            .map(|k| (k as f64 * (k as f64 + alpha)).max(0.0).sqrt())
            .collect(),
        mass: 1.0,
    }
}

/// Recurrence for `(1-x)^a (1+x)^b dx` on `(-1, 1)`, `a, b > -1`.
pub fn jacobi_recurrence(n: usize, a: f64, b: f64) -> Recurrence {
    let s = a + b;
    let mut ra = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let kf = k as f64;
        if k == 0 {
            ra.push((b - a) / (s + 2.0));
        } else {
            ra.push((b * b - a * a) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0)));
        }
    }
    let mut rb = vec![0.0; n + 2];
    for (k, slot) in rb.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let v = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s).powi(2) * (3.0 + s))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + s)
                / ((2.0 * kf + s).powi(2) * (2.0 * kf + s + 1.0) * (2.0 * kf + s - 1.0))
        };
        *slot = v.sqrt();
    }
    let mass = ((s + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(s + 2.0))
    .exp();
    Recurrence { a: ra, b: rb, mass }
}

/// Gauss rule for the Gaussian probability measure.
pub fn gauss_hermite(n: usize) -> Result<GaussRule> {
    hermite_recurrence(n).gauss_rule(n)
}

/// Gauss rule for `x^α e^{-x}/Γ(α+1) dx`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<GaussRule> {
    if !(alpha > -1.0) {
        return Err(Error::Parameter(format!("Laguerre parameter {alpha} must exceed -1")));
    }
    laguerre_recurrence(n, alpha).gauss_rule(n)
}

/// Gauss rule for `(1-x)^a (1+x)^b dx` on `(-1, 1)`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Parameter(format!(
            "Jacobi weight exponents ({a}, {b}) must both exceed -1"
        )));
    }
    jacobi_recurrence(n, a, b).gauss_rule(n)
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Composite Gauss-Legendre rule with `panels` equal panels on `[lo, hi]`.
pub fn composite_legendre(lo: f64, hi: f64, panels: usize, order: usize) -> Result<GaussRule> {
    let base = gauss_legendre(order)?;
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let r = base.mapped(lo + p as f64 * h, lo + (p + 1) as f64 * h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Ok(GaussRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma;

    fn laguerre_moment(alpha: f64, k: u32) -> f64 {
        gamma(alpha + k as f64 + 1.0) / gamma(alpha + 1.0)
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = gauss_legendre(10).unwrap();
        for k in 0..20u32 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = r.integrate(|x| x.powi(k as i32));
            assert!((got - exact).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn hermite_moments() {
        // E[x^{2k}] = (2k-1)!! / 2^k under π^{-1/2} e^{-x²}
        let r = gauss_hermite(20).unwrap();
        let mut dfact = 1.0;
        for k in 0..20u32 {
            if k > 0 {
                dfact *= (2 * k - 1) as f64;
            }
            let exact = dfact / 2f64.powi(k as i32);
            let got = r.integrate(|x| x.powi(2 * k as i32));
            assert!((got - exact).abs() <= 1e-12 * exact, "k = {k}");
        }
    }

    #[test]
    fn laguerre_moments() {
        let alpha = 0.5;
        let r = gauss_laguerre(16, alpha).unwrap();
        for k in 0..30u32 {
            let exact = laguerre_moment(alpha, k);
            let got = r.integrate(|x| x.powi(k as i32));
            assert!((got - exact).abs() <= 1e-11 * exact, "k = {k}");
        }
    }

    #[test]
    fn jacobi_mass_and_first_moment() {
        let (a, b) = (0.3, -0.4);
        let r = gauss_jacobi(12, a, b).unwrap();
        let rec = jacobi_recurrence(1, a, b);
        assert!((r.integrate(|_| 1.0) - rec.mass).abs() < 1e-13);
        // mean of x under the Jacobi weight is (b - a)/(a + b + 2)
        let mean = r.integrate(|x| x) / rec.mass;
        assert!((mean - (b - a) / (a + b + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn tail_weights_keep_relative_accuracy() {
        let r = gauss_hermite(128).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(r.weights.iter().all(|w| *w > 0.0));
        // the outermost weight is tiny but must be a positive normal number
        assert!(r.weights[0] < 1e-50 && r.weights[0].is_normal());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(gauss_laguerre(4, -1.0).is_err());
        assert!(gauss_jacobi(4, -1.2, 0.0).is_err());
        assert!(gauss_legendre(0).is_err());
    }
}
