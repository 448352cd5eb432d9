//! Ornstein-Uhlenbeck multipliers and Laplace-transform-type joint
//! multipliers `m_κ(λ, a) = λ ∫_0^∞ e^{-λt} e^{-at} κ(t) dt`.

use crate::error::{Error, Result};
use crate::operator::OperatorRep;
use crate::quadrature::{gauss_legendre, GaussRule};
use crate::spectral::{SpectralSystem, ZERO_EIGENVALUE_TOL};
use num_complex::Complex64;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Support of `κ`: all of `(0, ∞)` or the truncation `[ε, 1/ε]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaSupport {
    Full,
    Truncated(f64),
}

/// Bounded `κ` on `R_+` together with its support and sup norm.
#[derive(Clone)]
pub struct LaplaceSymbolKappa {
    kappa: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    support: KappaSupport,
    sup_norm: f64,
}

impl fmt::Debug for LaplaceSymbolKappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplaceSymbolKappa").field("support", &self.support).field("sup_norm", &self.sup_norm).finish()
    }
}

impl LaplaceSymbolKappa {
    pub fn new(
        kappa: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        support: KappaSupport,
        sup_norm: f64,
    ) -> Result<Self> {
        if !(sup_norm.is_finite() && sup_norm >= 0.0) {
            return Err(Error::Parameter(format!("sup norm {sup_norm} must be finite")));
        }
        if let KappaSupport::Truncated(eps) = support {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::Parameter(format!("truncation ε = {eps} must lie in (0, 1)")));
            }
        }
        Ok(Self { kappa: Arc::new(kappa), support, sup_norm })
    }

    /// `κ ≡ 1`.
    pub fn one(support: KappaSupport) -> Result<Self> {
        Self::new(|_| Complex64::new(1.0, 0.0), support, 1.0)
    }

    /// `κ(t) = e^{-iωt}`.
    pub fn oscillating(omega: f64, support: KappaSupport) -> Result<Self> {
        Self::new(move |t| Complex64::from_polar(1.0, -omega * t), support, 1.0)
    }

    pub fn support(&self) -> KappaSupport {
        self.support
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Same `κ` restricted to `[ε, 1/ε]`.
    pub fn truncated(&self, eps: f64) -> Result<Self> {
        let kappa = self.kappa.clone();
        Self::new(move |t| kappa(t), KappaSupport::Truncated(eps), self.sup_norm)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self.support {
            KappaSupport::Truncated(eps) if t < eps || t > 1.0 / eps => Complex64::new(0.0, 0.0),
            _ => (self.kappa)(t),
        }
    }
}

fn rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20).expect("fixed order"))
}

const MAX_DEPTH: u32 = 40;

/// Adaptive bisection with a 20-point rule against its two halves.
fn adaptive(
    f: &dyn Fn(f64) -> Result<Complex64>,
    lo: f64,
    hi: f64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let mid = 0.5 * (lo + hi);
    let left = panel(f, lo, mid)?;
    let right = panel(f, mid, hi)?;
    let both = left + right;
    if (both - whole).norm() <= tol || depth >= MAX_DEPTH {
        return Ok(both);
    }
    Ok(adaptive(f, lo, mid, left, 0.5 * tol, depth + 1)? + adaptive(f, mid, hi, right, 0.5 * tol, depth + 1)?)
}

fn panel(f: &dyn Fn(f64) -> Result<Complex64>, lo: f64, hi: f64) -> Result<Complex64> {
    let r = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, w) in r.nodes.iter().zip(&r.weights) {
        acc += f(mid + half * s)? * (w * half);
    }
    Ok(acc)
}

/// Integration range in `u = (λ + a) t` beyond which `e^{-u}` is negligible.
const DECAY_CUTOFF: f64 = 60.0;

/// `m_κ(λ, a) = λ ∫ e^{-(λ+a)t} κ(t) dt`, computed in `u = (λ+a)t`.
pub fn laplace_type_symbol(kappa: &LaplaceSymbolKappa, lambda: f64, a: f64) -> Result<Complex64> {
    if !(lambda >= 0.0 && lambda.is_finite() && a >= 0.0 && a.is_finite()) {
        return Err(Error::Parameter(format!("(λ, a) = ({lambda}, {a}) outside [0, ∞)²")));
    }
    if lambda == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rate = lambda + a;
    let (lo, hi) = match kappa.support {
        KappaSupport::Full => (0.0, DECAY_CUTOFF),
        KappaSupport::Truncated(eps) => (rate * eps, (rate / eps).min(rate * eps + DECAY_CUTOFF)),
    };
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let bound = kappa.sup_norm * (1.0 + 1e-12);
    let integrand = |u: f64| -> Result<Complex64> {
        let k = (kappa.kappa)(u / rate);
        if !(k.re.is_finite() && k.im.is_finite()) || k.norm() > bound {
            return Err(Error::Parameter(format!("|κ({})| = {} exceeds the declared bound {}", u / rate, k.norm(), kappa.sup_norm)));
        }
        Ok(k * (-u).exp())
    };
    // panels of unit length in u resolve both the decay and oscillation up to |ω|/rate ~ 1
    let pieces = ((hi - lo).ceil() as usize).clamp(1, 4096);
    let step = (hi - lo) / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..pieces {
        let a0 = lo + p as f64 * step;
        let b0 = a0 + step;
        let whole = panel(&integrand, a0, b0)?;
        total += adaptive(&integrand, a0, b0, whole, 1e-15, 0)?;
    }
    Ok(total * (lambda / rate))
}

/// `m(𝓛) f = Σ_j m(j) P_j f` on an Ornstein-Uhlenbeck system; `m[j]` is the
/// value at total degree `j`.
pub fn ou_multiplier(system: &SpectralSystem, m: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    let diag = ou_diagonal(system, m)?;
    system.apply_diagonal(&diag, f)
}

pub fn ou_multiplier_operator(system: &SpectralSystem, m: &[Complex64]) -> Result<OperatorRep> {
    system.diagonal_operator(&ou_diagonal(system, m)?)
}

fn ou_diagonal(system: &SpectralSystem, m: &[Complex64]) -> Result<Vec<Complex64>> {
    (0..system.num_modes())
        .map(|k| {
            let j = system.joint_eigenvalue(k).iter().sum::<f64>().round() as usize;
            m.get(j).copied().ok_or_else(|| {
                Error::Shape(format!("multiplier sequence of length {} misses total degree {j}", m.len()))
            })
        })
        .collect()
}

/// Joint system `(𝓛_1, …, 𝓛_d, A_1, …)` and the diagonal of `m_κ(Σ𝓛_r, ΣA_s)`.
fn joint_diagonal(
    kappa: &LaplaceSymbolKappa,
    ou: &SpectralSystem,
    a: &SpectralSystem,
) -> Result<(SpectralSystem, Vec<Complex64>)> {
    if let Some(axis) = a.atl_violation() {
        return Err(Error::Atl { axis: ou.dim() + axis });
    }
    let axes: Vec<_> = ou.axes().iter().chain(a.axes()).cloned().collect();
    let joint = SpectralSystem::new(axes)?;
    let na = a.num_modes();
    let a_mask = a.retained_mask();
    let mut cache = std::collections::HashMap::new();
    let mut diag = Vec::with_capacity(joint.num_modes());
    for k in 0..joint.num_modes() {
        let (ko, ka) = (k / na, k % na);
        if !a_mask[ka] {
            diag.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let lam: f64 = ou.joint_eigenvalue(ko).iter().sum();
        let av: f64 = a.joint_eigenvalue(ka).iter().sum();
        if av <= ZERO_EIGENVALUE_TOL {
            return Err(Error::Atl { axis: ou.dim() });
        }
        let key = (lam.to_bits(), av.to_bits());
        let v = match cache.get(&key) {
            Some(v) => *v,
            None => {
                let v = laplace_type_symbol(kappa, lam, av)?;
                cache.insert(key, v);
                v
            }
        };
        diag.push(v);
    }
    Ok((joint, diag))
}

/// `m_κ(𝓛, A) f` on the product grid (Gaussian variables first).
pub fn joint_laplace_multiplier(
    kappa: &LaplaceSymbolKappa,
    ou: &SpectralSystem,
    a: &SpectralSystem,
    f: &[Complex64],
) -> Result<Vec<Complex64>> {
    let (joint, diag) = joint_diagonal(kappa, ou, a)?;
    joint.apply_diagonal(&diag, f)
}

pub fn joint_laplace_operator(kappa: &LaplaceSymbolKappa, ou: &SpectralSystem, a: &SpectralSystem) -> Result<OperatorRep> {
    let (joint, diag) = joint_diagonal(kappa, ou, a)?;
    joint.diagonal_operator(&diag)
}

/// `sup |m_κ|` over the retained joint spectrum.
pub fn joint_symbol_sup(kappa: &LaplaceSymbolKappa, ou: &SpectralSystem, a: &SpectralSystem) -> Result<f64> {
    let (_, diag) = joint_diagonal(kappa, ou, a)?;
    Ok(diag.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
