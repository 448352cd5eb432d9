//! Multiplier symbols `m : [0, ∞)^d → C` with optional metadata: a known
//! bound, a holomorphic extension to a polysector, analytic derivatives.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

pub type RealFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>;
/// `(γ, λ) ↦ ∂^γ m(λ)`, or `None` when that derivative is not available.
pub type DerivativeFn = Arc<dyn Fn(&[usize], &[f64]) -> Option<Complex64> + Send + Sync>;

#[derive(Clone)]
pub struct Symbol {
    dim: usize,
    name: String,
    eval: RealFn,
    bound: Option<f64>,
    sector: Option<Vec<f64>>,
    holomorphic: Option<ComplexFn>,
    derivative: Option<DerivativeFn>,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .field("bound", &self.bound)
            .field("sector", &self.sector)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl Symbol {
    pub fn new(dim: usize, name: impl Into<String>, eval: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            name: name.into(),
            eval: Arc::new(eval),
            bound: None,
            sector: None,
            holomorphic: None,
            derivative: None,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    /// Declares a holomorphic extension to the polysector `|arg z_r| < angles_r`.
    pub fn with_holomorphic(
        mut self,
        angles: Vec<f64>,
        ext: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if angles.len() != self.dim {
            return Err(Error::Shape(format!(
                "{} sector angles for a {}-variable symbol",
                angles.len(),
                self.dim
            )));
        }
        if angles.iter().any(|a| !(*a > 0.0 && *a <= std::f64::consts::FRAC_PI_2 + 1e-15)) {
            return Err(Error::Parameter(format!(
                "sector angles {angles:?} must lie in (0, π/2]"
            )));
        }
        self.sector = Some(angles);
        self.holomorphic = Some(Arc::new(ext));
        Ok(self)
    }

    pub fn with_derivative(
        mut self,
        d: impl Fn(&[usize], &[f64]) -> Option<Complex64> + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn sector(&self) -> Option<&[f64]> {
        self.sector.as_deref()
    }

    pub fn eval(&self, lambda: &[f64]) -> Complex64 {
        (self.eval)(lambda)
    }

    /// Value of the holomorphic extension, when one was declared.
    pub fn eval_complex(&self, z: &[Complex64]) -> Option<Complex64> {
        self.holomorphic.as_ref().map(|h| h(z))
    }

    /// Analytic derivative `∂^γ m(λ)` when available; `γ = 0` is the value itself.
    pub fn analytic_derivative(&self, gamma: &[usize], lambda: &[f64]) -> Option<Complex64> {
        if gamma.iter().all(|g| *g == 0) {
            return Some(self.eval(lambda));
        }
        self.derivative.as_ref().and_then(|d| d(gamma, lambda))
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Pointwise product; the bound multiplies when both are known.
    pub fn product(&self, other: &Symbol) -> Result<Symbol> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "cannot multiply symbols in {} and {} variables",
                self.dim, other.dim
            )));
        }
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut s = Symbol::new(self.dim, format!("({})*({})", self.name, other.name), move |x| a(x) * b(x));
        if let (Some(x), Some(y)) = (self.bound, other.bound) {
            s.bound = Some(x * y);
        }
        Ok(s)
    }

    /// `m ≡ c`.
    pub fn constant(dim: usize, c: Complex64) -> Symbol {
        Symbol::new(dim, format!("const({c})"), move |_| c)
            .with_bound(c.norm())
            .with_derivative(|_, _| Some(Complex64::new(0.0, 0.0)))
    }

    /// `λ^{iu} = λ_1^{iu_1} ⋯ λ_d^{iu_d}`, with analytic derivatives of every
    /// order and the principal-branch extension to the right half-plane.
    pub fn imaginary_power(u: Vec<f64>) -> Symbol {
        let dim = u.len();
        let ue = u.clone();
        let ud = u.clone();
        let uh = u.clone();
        Symbol::new(dim, format!("imaginary_power({u:?})"), move |lam| {
            lam.iter()
                .zip(&ue)
                .map(|(l, ur)| Complex64::new(0.0, ur * l.ln()).exp())
                .product()
        })
        .with_bound(1.0)
        .with_derivative(move |gamma, lam| {
            let mut acc = Complex64::new(1.0, 0.0);
            for ((g, l), ur) in gamma.iter().zip(lam).zip(&ud) {
                let a = Complex64::new(0.0, *ur);
                let mut falling = Complex64::new(1.0, 0.0);
                for j in 0..*g {
                    falling *= a - j as f64;
                }
                acc *= falling * (a - *g as f64).scale(l.ln()).exp();
            }
            Some(acc)
        })
        .with_holomorphic(vec![std::f64::consts::FRAC_PI_2; dim], move |z| {
            z.iter()
                .zip(&uh)
                .map(|(zr, ur)| (Complex64::new(0.0, *ur) * zr.ln()).exp())
                .product()
        })
        .expect("sector angles are valid")
    }

    /// `exp(-⟨t, λ⟩)`.
    pub fn heat(t: Vec<f64>) -> Symbol {
        let dim = t.len();
        let tt = t.clone();
        Symbol::new(dim, format!("heat({t:?})"), move |lam| {
            let s: f64 = lam.iter().zip(&tt).map(|(l, t)| l * t).sum();
            Complex64::new((-s).exp(), 0.0)
        })
        .with_bound(1.0)
    }
}

/// Growth data attached to a system: polynomial exponents θ and σ, and the
/// per-axis angle φ_p.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GrowthProfile {
    theta: Vec<f64>,
    sigma: Vec<f64>,
    phi_p: Vec<f64>,
}

impl GrowthProfile {
    pub fn new(theta: Vec<f64>, sigma: Vec<f64>, phi_p: Vec<f64>) -> Result<Self> {
        if theta.len() != sigma.len() || theta.len() != phi_p.len() {
            return Err(Error::Shape("growth profile vectors differ in length".into()));
        }
        if theta.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::Parameter(format!("theta {theta:?} must be nonnegative")));
        }
        if sigma.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::Parameter(format!("sigma {sigma:?} must be positive")));
        }
        if phi_p
            .iter()
            .any(|p| !(*p > 0.0 && *p < std::f64::consts::FRAC_PI_2))
        {
            return Err(Error::Parameter(format!("angles {phi_p:?} must lie in (0, π/2)")));
        }
        Ok(Self { theta, sigma, phi_p })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn phi_p(&self) -> &[f64] {
        &self.phi_p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imaginary_power_derivative_matches_difference() {
        let m = Symbol::imaginary_power(vec![3.0]);
        let l = 1.7;
        let h = 1e-5;
        let fd = (m.eval(&[l + h]) - m.eval(&[l - h])) / (2.0 * h);
        let an = m.analytic_derivative(&[1], &[l]).unwrap();
        assert!((fd - an).norm() < 1e-8);
        let fd2 = (m.eval(&[l + h]) - 2.0 * m.eval(&[l]) + m.eval(&[l - h])) / (h * h);
        let an2 = m.analytic_derivative(&[2], &[l]).unwrap();
        assert!((fd2 - an2).norm() < 1e-4);
    }

    #[test]
    fn holomorphic_extension_agrees_on_the_axis() {
        let m = Symbol::imaginary_power(vec![2.0, -1.0]);
        let x = [0.3, 4.0];
        let z = [Complex64::new(0.3, 0.0), Complex64::new(4.0, 0.0)];
        assert!((m.eval(&x) - m.eval_complex(&z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn growth_profile_validation() {
        assert!(GrowthProfile::new(vec![0.0], vec![1.0], vec![0.5]).is_ok());
        assert!(GrowthProfile::new(vec![0.0], vec![0.0], vec![0.5]).is_err());
        assert!(GrowthProfile::new(vec![0.0], vec![1.0], vec![std::f64::consts::FRAC_PI_2]).is_err());
    }
}
