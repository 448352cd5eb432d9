//! Quadrature for product-formula integrals
//! `∫_{-1}^{1} F(√(t²+s²−2stu)) (1−u)^a (1+u)^b du`.
//!
//! `Z = t²+s²−2stu` is affine in `u`, so the rule works in `u` directly and
//! cuts the range where `√Z` exceeds the support radius of `F`.

use crate::error::Result;
use crate::quadrature::{gauss_jacobi, GaussRule};
use crate::special::{beta, gamma};
use std::sync::OnceLock;

const STEP: usize = 8;
const MAX_NODES: usize = 256;

/// One quadrature point: `F` is sampled at `z ≥ 0` with weight `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct QPoint {
    pub z: f64,
    pub w: f64,
}

/// Lazily built Gauss-Jacobi rules for the exponent pairs
/// `(a, b)`, `(b, a)`, `(a, 0)` and `(b, 0)`, indexed by node count.
pub(crate) struct RuleBank {
    a: f64,
    b: f64,
    slots: Vec<[OnceLock<GaussRule>; 4]>,
}

impl RuleBank {
    pub fn new(a: f64, b: f64) -> Self {
        let slots = (0..MAX_NODES / STEP).map(|_| std::array::from_fn(|_| OnceLock::new())).collect();
        Self { a, b, slots }
    }

    fn rule(&self, n: usize, kind: usize) -> &GaussRule {
        let slot = (n / STEP - 1).min(self.slots.len() - 1);
        self.slots[slot][kind].get_or_init(|| {
            let (a, b) = match kind {
                0 => (self.a, self.b),
                1 => (self.b, self.a),
                2 => (self.a, 0.0),
                _ => (self.b, 0.0),
            };
            gauss_jacobi((slot + 1) * STEP, a, b).expect("exponents validated by the caller")
        })
    }

    /// Total mass `∫(1−u)^a(1+u)^b du`.
    pub fn mass(&self) -> f64 {
        2f64.powf(self.a + self.b + 1.0) * beta(self.a + 1.0, self.b + 1.0)
    }

    /// Appends the points of `∫ F(√Z) (1−u)^a (1+u)^b du` over `√Z ≤ cutoff`.
    pub fn points(&self, t: f64, s: f64, cutoff: f64, out: &mut Vec<QPoint>) {
        let p = 2.0 * t * s;
        let base = t * t + s * s;
        if p == 0.0 {
            let z = base.sqrt();
            if z <= cutoff {
                out.push(QPoint { z, w: self.mass() });
            }
            return;
        }
        // for p < 0 substitute u → −u so that small Z sits at u = 1
        let flip = p < 0.0;
        let big = p.abs();
        let (full_kind, cut_kind, other_exp) = if flip { (1, 3, self.a) } else { (0, 2, self.b) };
        let lead_exp = if flip { self.b } else { self.a };
        let u_lo = (base - cutoff * cutoff) / big;
        if u_lo >= 1.0 {
            return;
        }
        if u_lo <= -0.5 {
            let rule = self.rule(node_count(2.0 * big), full_kind);
            for (u, w) in rule.nodes.iter().zip(&rule.weights) {
                let z = (base - big * u).max(0.0).sqrt();
                out.push(QPoint { z, w: *w });
            }
            return;
        }
        let half = 0.5 * (1.0 - u_lo);
        let rule = self.rule(node_count(big * (1.0 - u_lo)), cut_kind);
        let scale = half.powf(lead_exp + 1.0);
        for (sn, w) in rule.nodes.iter().zip(&rule.weights) {
            let u = u_lo + half * (1.0 + sn);
            let z = (base - big * u).max(0.0).sqrt();
            out.push(QPoint { z, w: w * scale * (1.0 + u).powf(other_exp) });
        }
    }
}

/// Node count for an integrand that may vary like `e^{-Z}` over a `Z`-range of length `len`.
fn node_count(len: f64) -> usize {
    let n = 24.0 + 0.25 * len + 3.0 * (0.5 * len).sqrt();
    let n = (n as usize).div_ceil(STEP) * STEP;
    n.min(MAX_NODES)
}

/// `b_α = Γ(α+1/2) / (√π Γ(α))`, normalizing `b_α ∫(1−u²)^{α−1} du = 1`.
pub fn b_alpha(alpha: f64) -> f64 {
    gamma(alpha + 0.5) / (std::f64::consts::PI.sqrt() * gamma(alpha))
}

/// The density `Φ_α(u) = b_α (1+u)(1−u²)^{α−1}` on `(−1, 1)`, `α > 0`,
/// with interval masses from incomplete beta integrals.
pub(crate) struct PhiDensity {
    alpha: f64,
    left: GaussRule,
    right: GaussRule,
    full: f64,
    scale: f64,
}

impl PhiDensity {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            left: gauss_jacobi(24, 0.0, alpha - 1.0)?,
            right: gauss_jacobi(24, alpha, 0.0)?,
            full: beta(alpha, alpha + 1.0),
            scale: b_alpha(alpha) * 4f64.powf(alpha),
        })
    }

    /// `∫_0^v x^{α−1}(1−x)^α dx`.
    fn incomplete(&self, v: f64) -> f64 {
        let a = self.alpha;
        if v <= 0.0 {
            return 0.0;
        }
        if v <= 0.5 {
            (0.5 * v).powf(a) * self.left.integrate(|s| (1.0 - 0.5 * v * (1.0 + s)).powf(a))
        } else {
            let tail = (0.5 * (1.0 - v)).powf(a + 1.0)
                * self.right.integrate(|s| (v + 0.5 * (1.0 - v) * (1.0 + s)).powf(a - 1.0));
            self.full - tail
        }
    }

    /// `∫_{lo}^{hi} Φ_α(u) du`; `v = (1−u)/2` turns it into `4^α b_α ∫ v^{α−1}(1−v)^α dv`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.clamp(-1.0, 1.0);
        let hi = hi.clamp(-1.0, 1.0);
        if hi <= lo {
            return 0.0;
        }
        self.scale * (self.incomplete(0.5 * (1.0 - lo)) - self.incomplete(0.5 * (1.0 - hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_a_probability_density() {
        for alpha in [0.1, 0.5, 1.0, 2.5] {
            let phi = PhiDensity::new(alpha).unwrap();
            assert!((phi.mass(-1.0, 1.0) - 1.0).abs() < 1e-13);
            assert!((phi.mass(-1.0, 0.3) + phi.mass(0.3, 1.0) - 1.0).abs() < 1e-13);
        }
        // α = 1: Φ(u) = (1+u)/2
        assert!((PhiDensity::new(1.0).unwrap().mass(0.0, 1.0) - 0.75).abs() < 1e-14);
    }

    #[test]
    fn rule_integrates_smooth_functions_with_cut() {
        let alpha = 0.7;
        let bank = RuleBank::new(alpha - 1.0, alpha - 1.0);
        let f = |z: f64| (-z * z).exp();
        for (t, s) in [(0.5, 0.8), (3.0, 2.5), (6.0, -5.5), (0.0, 1.0), (9.0, 9.2)] {
            let mut pts = Vec::new();
            bank.points(t, s, 7.0, &mut pts);
            let q: f64 = pts.iter().map(|p| p.w * f(p.z)).sum();
            let fine = gauss_jacobi(256, alpha - 1.0, alpha - 1.0).unwrap();
            let ex = fine.integrate(|u| f((t * t + s * s - 2.0 * t * s * u).max(0.0).sqrt()));
            assert!((q - ex).abs() < 1e-10 * ex.abs() + 1e-16, "t={t} s={s}: {q} vs {ex}");
        }
    }
}
