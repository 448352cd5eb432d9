//! Operator norms `‖T‖_{L^p(w) → L^p(w)}` for matrices acting on grid values.
//!
//! Exact formulas exist for `p ∈ {1, 2, ∞}`. For other `p` the norm is
//! bracketed: from below by the dual power iteration (Boyd's method, in the
//! form popularized by Higham), from above by Riesz-Thorin interpolation
//! between the exact endpoints.

use crate::error::{Error, Result};
use crate::operator::OperatorRep;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// How a norm is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    Exact,
    Lower,
    Upper,
}

impl std::str::FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "lower" => Ok(Self::Lower),
            "upper" => Ok(Self::Upper),
            _ => Err(Error::Parameter(format!("unknown norm mode `{s}`"))),
        }
    }
}

/// Settings of the power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
    /// Number of random starting vectors.
    pub restarts: usize,
    pub seed: u64,
    /// Structured starting vectors (best column, sign of the heaviest row,
    /// top singular vector) in addition to the random ones.
    pub structured_starts: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { max_iter: 200, rel_tol: 1e-9, restarts: 8, seed: 0, structured_starts: true }
    }
}

/// A linear map on functions over a weighted grid, accessed only through
/// its action and its adjoint in `L²(w)`.
pub trait WeightedOperator: Sync {
    fn weights(&self) -> &[f64];
    fn apply(&self, f: &[Complex64]) -> Vec<Complex64>;
    /// Adjoint with respect to `⟨f, g⟩ = Σ w_i f_i conj(g_i)`.
    fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64>;

    fn len(&self) -> usize {
        self.weights().len()
    }

    fn is_empty(&self) -> bool {
        self.weights().is_empty()
    }
}

impl WeightedOperator for OperatorRep {
    fn weights(&self) -> &[f64] {
        self.grid().weights()
    }

    fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        (self.matrix() * DVector::from_column_slice(f)).iter().copied().collect()
    }

    fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64> {
        let w = self.weights();
        let scaled: Vec<Complex64> = g.iter().zip(w).map(|(z, w)| z * *w).collect();
        let v = self.matrix().adjoint() * DVector::from_vec(scaled);
        v.iter().zip(w).map(|(z, w)| z / *w).collect()
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("exponent p = {p} must lie in [1, ∞]")));
    }
    Ok(())
}

/// `‖T‖_{p→p}` in the requested mode with default power-iteration settings.
pub fn lp_operator_norm(op: &OperatorRep, p: f64, mode: NormMode) -> Result<f64> {
    lp_operator_norm_with(op, p, mode, &PowerOptions::default())
}

pub fn lp_operator_norm_with(op: &OperatorRep, p: f64, mode: NormMode, opts: &PowerOptions) -> Result<f64> {
    check_p(p)?;
    match mode {
        NormMode::Exact => exact_norm(op, p),
        NormMode::Upper => upper_norm(op, p),
        NormMode::Lower => {
            let starts = if opts.structured_starts { structured_starts(op, p) } else { Vec::new() };
            Ok(power_lower_bound(op, p, opts, &starts))
        }
    }
}

/// Exact norm for `p ∈ {1, 2, ∞}`.
pub fn exact_norm(op: &OperatorRep, p: f64) -> Result<f64> {
    check_p(p)?;
    let t = op.matrix();
    let w = op.grid().weights();
    let n = op.size();
    if p == 1.0 {
        Ok((0..n)
            .map(|j| (0..n).map(|i| w[i] * t[(i, j)].norm()).sum::<f64>() / w[j])
            .fold(0.0, f64::max))
    } else if p.is_infinite() {
        Ok((0..n)
            .map(|i| (0..n).map(|j| t[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max))
    } else if p == 2.0 {
        let a = conjugated(t, w, 2.0);
        Ok(a.singular_values().iter().copied().fold(0.0, f64::max))
    } else {
        Err(Error::UnsupportedMode(format!("exact norm is available for p in {{1, 2, ∞}}, not p = {p}")))
    }
}

/// Riesz-Thorin upper bound from the exact endpoint norms.
pub fn upper_norm(op: &OperatorRep, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 1.0 || p == 2.0 || p.is_infinite() {
        return exact_norm(op, p);
    }
    let n1 = exact_norm(op, 1.0)?;
    let n2 = exact_norm(op, 2.0)?;
    let ninf = exact_norm(op, f64::INFINITY)?;
    let inv = 1.0 / p;
    let interp = |a: f64, ia: f64, b: f64, ib: f64| -> Option<f64> {
        // 1/p = (1-θ)/p0 + θ/p1
        let theta = (ia - inv) / (ia - ib);
        (0.0..=1.0).contains(&theta).then(|| a.powf(1.0 - theta) * b.powf(theta))
    };
    let cands = [
        interp(n1, 1.0, n2, 0.5),
        interp(n2, 0.5, ninf, 0.0),
        interp(n1, 1.0, ninf, 0.0),
    ];
    Ok(cands.iter().flatten().copied().fold(f64::INFINITY, f64::min))
}

/// `W^{1/p} T W^{-1/p}`: the matrix of `T` between unweighted `ℓ^p` spaces.
fn conjugated(t: &DMatrix<Complex64>, w: &[f64], p: f64) -> DMatrix<Complex64> {
    let n = t.nrows();
    DMatrix::from_fn(n, n, |i, j| t[(i, j)] * (w[i] / w[j]).powf(1.0 / p))
}

fn plain_norm(x: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else if p == 1.0 {
        x.iter().map(|z| z.norm()).sum()
    } else {
        x.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// A vector `x` with `‖x‖_{p'} = 1` and `⟨y, x⟩ = ‖y‖_p`.
fn dual_vector(y: &[Complex64], p: f64) -> Vec<Complex64> {
    let ny = plain_norm(y, p);
    let n = y.len();
    if ny == 0.0 {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    if p == 1.0 {
        y.iter().map(|z| if z.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { unit_phase(*z) }).collect()
    } else if p.is_infinite() {
        let (k, _) = y
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[k] = unit_phase(y[k]);
        x
    } else {
        y.iter()
            .map(|z| {
                let r = z.norm();
                if r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    unit_phase(*z) * (r / ny).powf(p - 1.0)
                }
            })
            .collect()
    }
}

fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Unweighted view `A = W^{1/p} T W^{-1/p}` of a weighted operator.
struct Conjugated<'a> {
    op: &'a dyn WeightedOperator,
    p: f64,
}

impl Conjugated<'_> {
    fn scale(&self, x: &[Complex64], power: f64) -> Vec<Complex64> {
        x.iter().zip(self.op.weights()).map(|(z, w)| z * w.powf(power)).collect()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let inv = if self.p.is_infinite() { 0.0 } else { 1.0 / self.p };
        let y = self.op.apply(&self.scale(x, -inv));
        self.scale(&y, inv)
    }

    /// `A^* = W^{-1/p} T^* W^{1/p} = W^{1/q} T^† W^{-1/q}` with `T^†` the weighted adjoint.
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let inv = if self.p.is_infinite() { 0.0 } else { 1.0 / self.p };
        let invq = 1.0 - inv;
        let z = self.op.apply_adjoint(&self.scale(y, -invq));
        self.scale(&z, invq)
    }
}

/// Lower bound for `‖T‖_{p→p}` by dual power iteration. Every iterate is a
/// genuine unit vector, so the reported value never exceeds the true norm.
pub fn power_lower_bound(
    op: &dyn WeightedOperator,
    p: f64,
    opts: &PowerOptions,
    extra_starts: &[Vec<Complex64>],
) -> f64 {
    let n = op.len();
    let a = Conjugated { op, p };
    let mut starts: Vec<Vec<Complex64>> = (0..opts.restarts)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(s as u64));
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    starts.extend(extra_starts.iter().cloned());
    starts
        .par_iter()
        .map(|x0| iterate(&a, p, x0, opts))
        .reduce(|| 0.0, f64::max)
}

fn iterate(a: &Conjugated<'_>, p: f64, x0: &[Complex64], opts: &PowerOptions) -> f64 {
    let q = dual_exponent(p);
    let nx = plain_norm(x0, p);
    if nx == 0.0 || !nx.is_finite() {
        return 0.0;
    }
    let mut x: Vec<Complex64> = x0.iter().map(|z| z / nx).collect();
    let mut best = 0.0f64;
    let mut prev = 0.0f64;
    for it in 0..opts.max_iter {
        let y = a.apply(&x);
        let gamma = plain_norm(&y, p);
        if !gamma.is_finite() {
            break;
        }
        best = best.max(gamma);
        if gamma == 0.0 {
            break;
        }
        let z = a.apply_adjoint(&dual_vector(&y, p));
        let nz = plain_norm(&z, q);
        let zx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if it > 0 && (gamma - prev).abs() <= opts.rel_tol * gamma {
            break;
        }
        if nz <= zx * (1.0 + 1e-15) {
            break;
        }
        prev = gamma;
        x = dual_vector(&z, q);
    }
    best
}

/// Starting vectors that make the iteration exact at `p ∈ {1, 2, ∞}`.
fn structured_starts(op: &OperatorRep, p: f64) -> Vec<Vec<Complex64>> {
    let a = conjugated(op.matrix(), op.grid().weights(), p);
    let n = a.nrows();
    let mut out = Vec::new();
    let best_col = (0..n)
        .map(|j| (j, plain_norm(&a.column(j).iter().copied().collect::<Vec<_>>(), p)))
        .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc })
        .0;
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[best_col] = Complex64::new(1.0, 0.0);
    out.push(e);
    let best_row = (0..n)
        .map(|i| (i, a.row(i).iter().map(|z| z.norm()).sum::<f64>()))
        .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc })
        .0;
    out.push(a.row(best_row).iter().map(|z| unit_phase(z.conj())).collect());
    if n <= 1024 {
        let svd = a.clone().svd(false, true);
        if let Some(vt) = svd.v_t {
            let (k, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, s)| if *s > acc.1 { (i, *s) } else { acc });
            out.push(vt.row(k).iter().map(|z| z.conj()).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WeightedGrid;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn random_op(n: usize, seed: u64, weighted: bool) -> OperatorRep {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<f64> = (0..n).map(|_| if weighted { rng.random_range(0.2..2.0) } else { 1.0 }).collect();
        let g = WeightedGrid::line((0..n).map(|i| i as f64).collect(), w, "r").unwrap();
        let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        OperatorRep::new(m, g).unwrap()
    }

    #[test]
    fn identity_has_norm_one() {
        let g = WeightedGrid::line(vec![0.0, 1.0, 2.0], vec![0.1, 1.0, 3.0], "g").unwrap();
        let id = OperatorRep::identity(&g);
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            for mode in [NormMode::Lower, NormMode::Upper] {
                assert!((lp_operator_norm(&id, p, mode).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_two_norm() {
        let g = WeightedGrid::counting(2, "u").unwrap();
        let op = OperatorRep::new(DMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0), c(3.0)])), g).unwrap();
        assert!((exact_norm(&op, 2.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn exact_mode_rejects_other_exponents() {
        let op = random_op(3, 1, false);
        assert!(matches!(exact_norm(&op, 1.5), Err(Error::UnsupportedMode(_))));
        assert!(lp_operator_norm(&op, 0.5, NormMode::Lower).is_err());
    }

    #[test]
    fn three_modes_agree_at_endpoints() {
        for seed in 0..5 {
            let op = random_op(6, seed, true);
            for p in [1.0, 2.0, f64::INFINITY] {
                let e = exact_norm(&op, p).unwrap();
                let l = lp_operator_norm(&op, p, NormMode::Lower).unwrap();
                let u = lp_operator_norm(&op, p, NormMode::Upper).unwrap();
                assert!((l - e).abs() <= 1e-10 * e, "p={p} lower {l} exact {e}");
                assert!((u - e).abs() <= 1e-10 * e);
            }
        }
    }

    #[test]
    fn lower_bound_beats_random_probes() {
        let op = random_op(3, 7, false);
        let p = 1.5;
        let lower = lp_operator_norm(&op, p, NormMode::Lower).unwrap();
        let upper = lp_operator_norm(&op, p, NormMode::Upper).unwrap();
        assert!(lower <= upper * (1.0 + 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut brute = 0.0f64;
        for _ in 0..100_000 {
            let f: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let tf = op.apply(&f).unwrap();
            brute = brute.max(op.grid().lp_norm(&tf, p) / op.grid().lp_norm(&f, p));
        }
        assert!(lower >= 0.99 * brute, "lower {lower} brute {brute}");
        assert!(lower <= brute * 1.05);
    }

    #[test]
    fn weighted_adjoint_is_adjoint() {
        let op = random_op(5, 3, true);
        let f: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let g: Vec<Complex64> = (0..5).map(|i| Complex64::new(1.0, -(i as f64))).collect();
        let lhs = op.grid().inner(&WeightedOperator::apply(&op, &f), &g);
        let rhs = op.grid().inner(&f, &op.apply_adjoint(&g));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
