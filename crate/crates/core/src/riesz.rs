//! Riesz transforms as products of a first-order piece and the joint
//! spectral factor `L_r^σ (L_1 + ⋯ + L_d)^{-σ}`: on abstract spectral
//! systems, on torus lattices and exactly on products of cyclic groups.

use crate::error::{Error, Result};
use crate::fourier::Lattice;
use crate::grid::WeightedGrid;
use crate::norms::{power_lower_bound, PowerOptions, WeightedOperator};
use crate::operator::OperatorRep;
use crate::spectral::{SpectralAxis, SpectralSystem, SpectrumFilter, ZERO_EIGENVALUE_TOL};
use crate::tensor::{ravel, unravel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

const MASS_TOL: f64 = 1e-12;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Z_K^d` with a symmetric probability measure `μ` on `Z_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicGroupSpec {
    k: usize,
    d: usize,
    mu: Vec<f64>,
}

impl CyclicGroupSpec {
    /// `mu[g]` is the mass of `g ∈ Z_K`.
    pub fn new(k: usize, d: usize, mu: Vec<f64>) -> Result<Self> {
        if k < 2 || d == 0 {
            return Err(Error::Parameter(format!("need K ≥ 2 and d ≥ 1, got K = {k}, d = {d}")));
        }
        if mu.len() != k {
            return Err(Error::Shape(format!("measure has {} entries on Z_{k}", mu.len())));
        }
        if mu.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::Parameter("measure entries must be finite and nonnegative".into()));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Parameter(format!("measure has total mass {total}, not 1")));
        }
        if let Some(g) = (0..k).find(|g| (mu[*g] - mu[(k - g) % k]).abs() > MASS_TOL) {
            return Err(Error::Parameter(format!("measure is not symmetric at g = {g}")));
        }
        Ok(Self { k, d, mu })
    }

    /// Nearest-neighbour walk `μ = (δ_1 + δ_{-1})/2`.
    pub fn simple_walk(k: usize, d: usize) -> Result<Self> {
        let mut mu = vec![0.0; k.max(1)];
        if k >= 2 {
            mu[1 % k] += 0.5;
            mu[(k - 1) % k] += 0.5;
        }
        Self::new(k, d, mu)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Index of the subgroup generated by the support of `μ`; `1` when it generates `Z_K`.
    pub fn generated_index(&self) -> usize {
        (0..self.k).filter(|g| self.mu[*g] > 0.0).fold(self.k, gcd)
    }

    pub fn generates(&self) -> bool {
        self.generated_index() == 1
    }

    pub fn with_dim(&self, d: usize) -> Result<Self> {
        Self::new(self.k, d, self.mu.clone())
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::cube(self.k, self.d).expect("validated sizes")
    }

    pub fn is_simple_walk(&self) -> bool {
        self.k == 2 && self.mu[1] == 1.0 || self.k > 2 && self.mu[1] == 0.5 && self.mu[self.k - 1] == 0.5
    }

    /// `μ̂(n) = Σ_g μ(g) cos(2πng/K)`, the eigenvalue of `P` on `e^{2πinx/K}`.
    pub fn mu_hat(&self, n: i64) -> f64 {
        self.mu
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(g, m)| m * (2.0 * PI * (n * g as i64) as f64 / self.k as f64).cos())
            .sum()
    }

    /// Eigenvalues `1 − μ̂(n)` of `L = I − P` in DFT order.
    pub fn laplacian_eigenvalues(&self) -> Vec<f64> {
        (0..self.k as i64).map(|n| (1.0 - self.mu_hat(n)).max(0.0)).collect()
    }
}

/// Complex values on `Z_K^d` in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    k: usize,
    d: usize,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(k: usize, d: usize, values: Vec<Complex64>) -> Result<Self> {
        let n = k.checked_pow(d as u32).ok_or_else(|| Error::Parameter("group too large".into()))?;
        if values.len() != n {
            return Err(Error::Shape(format!("{} values on Z_{k}^{d}", values.len())));
        }
        Ok(Self { k, d, values })
    }

    pub fn from_fn(k: usize, d: usize, f: impl Fn(&[usize]) -> Complex64) -> Self {
        let shape = vec![k; d];
        let values = (0..k.pow(d as u32)).map(|flat| f(&unravel(flat, &shape))).collect();
        Self { k, d, values }
    }

    pub fn constant(k: usize, d: usize, c: Complex64) -> Self {
        Self { k, d, values: vec![c; k.pow(d as u32)] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// `ℓ^p` norm with counting measure.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
        } else {
            self.values.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }

    fn check(&self, spec: &CyclicGroupSpec) -> Result<()> {
        if self.k != spec.k || self.d != spec.d {
            return Err(Error::Shape(format!(
                "function on Z_{}^{} for a group Z_{}^{}",
                self.k, self.d, spec.k, spec.d
            )));
        }
        Ok(())
    }
}

/// Convolution operator on a periodic lattice given by its symbol table, in
/// DFT order. Weights are the counting measure.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMultiplier {
    lattice: Lattice,
    table: Vec<Complex64>,
    weights: Vec<f64>,
}

impl LatticeMultiplier {
    pub fn new(lattice: Lattice, table: Vec<Complex64>) -> Result<Self> {
        if table.len() != lattice.len() {
            return Err(Error::Shape(format!("{} symbol values on {} lattice points", table.len(), lattice.len())));
        }
        let weights = vec![1.0; lattice.len()];
        Ok(Self { lattice, table, weights })
    }

    pub fn from_symbol(lattice: Lattice, symbol: impl Fn(&[i64]) -> Complex64) -> Self {
        let table = lattice.symbol_table(symbol);
        let weights = vec![1.0; lattice.len()];
        Self { lattice, table, weights }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    pub fn compose(&self, other: &LatticeMultiplier) -> Result<LatticeMultiplier> {
        if self.lattice != other.lattice {
            return Err(Error::Shape("multipliers live on different lattices".into()));
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a * b).collect();
        Self::new(self.lattice.clone(), table)
    }

    /// Convolution kernel `k` with `Tf = f ∗ k`.
    pub fn kernel(&self) -> Vec<Complex64> {
        self.lattice.inverse(&self.table).expect("table length checked")
    }

    pub fn matrix(&self) -> Result<DMatrix<Complex64>> {
        self.lattice.multiplier_matrix(&self.table)
    }

    pub fn to_operator(&self) -> Result<OperatorRep> {
        OperatorRep::new(self.matrix()?, self.lattice.grid()?)
    }

    /// `‖T‖_{1→1} = ‖T‖_{∞→∞} = Σ_x |k(x)|`.
    pub fn l1_norm(&self) -> f64 {
        self.kernel().iter().map(|z| z.norm()).sum()
    }

    /// `‖T‖_{2→2} = max |m|`.
    pub fn l2_norm(&self) -> f64 {
        self.table.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Riesz-Thorin bound from the `ℓ¹` and `ℓ²` norms.
    pub fn upper_bound(&self, p: f64) -> f64 {
        let theta = (1.0 - 2.0 / p).abs();
        self.l1_norm().powf(theta) * self.l2_norm().powf(1.0 - theta)
    }

    /// Power-iteration lower bound, started also from a point mass.
    pub fn lower_bound(&self, p: f64, opts: &PowerOptions) -> f64 {
        let mut delta = vec![Complex64::new(0.0, 0.0); self.lattice.len()];
        delta[0] = Complex64::new(1.0, 0.0);
        power_lower_bound(self, p, opts, &[delta])
    }

    fn apply_table(&self, f: &[Complex64], conj: bool) -> Vec<Complex64> {
        let mut fhat = self.lattice.forward(f).expect("length checked by caller");
        for (z, m) in fhat.iter_mut().zip(&self.table) {
            *z *= if conj { m.conj() } else { *m };
        }
        self.lattice.inverse(&fhat).expect("same lattice")
    }
}

impl WeightedOperator for LatticeMultiplier {
    fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.apply_table(f, false)
    }

    fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64> {
        self.apply_table(g, true)
    }
}

/// `P_r f = f ∗ μ` in the `r`-th coordinate.
pub fn markov_axis(spec: &CyclicGroupSpec, r: usize, f: &GroupFunction) -> Result<GroupFunction> {
    f.check(spec)?;
    check_axis(spec.d, r)?;
    let op = LatticeMultiplier::from_symbol(spec.lattice(), |n| Complex64::new(spec.mu_hat(n[r]), 0.0));
    GroupFunction::new(spec.k, spec.d, op.apply(&f.values))
}

/// `P_1 ⋯ P_d f`, convolution with the product measure `μ^{⊗d}`.
pub fn markov_operator(spec: &CyclicGroupSpec, f: &GroupFunction) -> Result<GroupFunction> {
    f.check(spec)?;
    let op = LatticeMultiplier::from_symbol(spec.lattice(), |n| {
        Complex64::new(n.iter().map(|v| spec.mu_hat(*v)).product(), 0.0)
    });
    GroupFunction::new(spec.k, spec.d, op.apply(&f.values))
}

/// Direct-sum evaluation of `f ∗ μ` along axis `r`, without the DFT.
pub fn markov_axis_direct(spec: &CyclicGroupSpec, r: usize, f: &GroupFunction) -> Result<GroupFunction> {
    f.check(spec)?;
    check_axis(spec.d, r)?;
    let shape = vec![spec.k; spec.d];
    let values = (0..f.values.len())
        .map(|flat| {
            let mut idx = unravel(flat, &shape);
            let x = idx[r];
            let mut acc = Complex64::new(0.0, 0.0);
            for (g, m) in spec.mu.iter().enumerate().filter(|(_, m)| **m > 0.0) {
                idx[r] = (x + g) % spec.k;
                acc += f.values[ravel(&idx, &shape)] * *m;
            }
            acc
        })
        .collect();
    GroupFunction::new(spec.k, spec.d, values)
}

fn check_axis(d: usize, r: usize) -> Result<()> {
    if r >= d {
        return Err(Error::Parameter(format!("axis {r} out of range for d = {d}")));
    }
    Ok(())
}

/// Symbol of `R_r = (∂_1 ⊗ I_{(r)})(L_1 + ⋯ + L_d)^{-1/2} Π_0` for the
/// nearest-neighbour walk: `(e^{iθ_r} − 1)/(Σ_s (1 − cos θ_s))^{1/2}`, `θ = 2πn/K`.
fn discrete_riesz_symbol(k: usize, r: usize, n: &[i64]) -> Complex64 {
    let theta: Vec<f64> = n.iter().map(|v| 2.0 * PI * *v as f64 / k as f64).collect();
    let total: f64 = theta.iter().map(|t| 1.0 - t.cos()).sum();
    if n.iter().all(|v| *v == 0) || total <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (Complex64::from_polar(1.0, theta[r]) - 1.0) / total.sqrt()
}

/// `R_r` as a lattice multiplier. Defined for the nearest-neighbour walk,
/// with `g_0` the generator `1`.
pub fn discrete_riesz_operator(spec: &CyclicGroupSpec, r: usize) -> Result<LatticeMultiplier> {
    check_axis(spec.d, r)?;
    if !spec.is_simple_walk() {
        return Err(Error::Parameter("discrete Riesz transforms use the walk μ = (δ_1 + δ_{-1})/2".into()));
    }
    let k = spec.k;
    Ok(LatticeMultiplier::from_symbol(spec.lattice(), move |n| discrete_riesz_symbol(k, r, n)))
}

pub fn discrete_riesz(spec: &CyclicGroupSpec, r: usize, f: &GroupFunction) -> Result<GroupFunction> {
    f.check(spec)?;
    let op = discrete_riesz_operator(spec, r)?;
    GroupFunction::new(spec.k, spec.d, op.apply(&f.values))
}

/// `∂_r (−Δ)^{-1/2} Π_0` with `−Δ = Σ_s (2 − τ_s − τ_s^{-1})`, built from the
/// finite-difference stencils and a symmetric eigendecomposition.
pub fn normalized_discrete_riesz_matrix(k: usize, d: usize, r: usize) -> Result<DMatrix<f64>> {
    check_axis(d, r)?;
    if k < 2 {
        return Err(Error::Parameter("need K ≥ 2".into()));
    }
    let shape = vec![k; d];
    let n = k.pow(d as u32);
    let shift = |flat: usize, axis: usize, step: usize| {
        let mut idx = unravel(flat, &shape);
        idx[axis] = (idx[axis] + step) % k;
        ravel(&idx, &shape)
    };
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for s in 0..d {
            lap[(x, x)] += 2.0;
            lap[(x, shift(x, s, 1))] -= 1.0;
            lap[(x, shift(x, s, k - 1))] -= 1.0;
        }
    }
    let eig = lap.symmetric_eigen();
    let inv_sqrt = eig.eigenvalues.map(|l| if l > 1e-9 { 1.0 / l.sqrt() } else { 0.0 });
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose();
    let mut diff = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        diff[(x, shift(x, r, 1))] += 1.0;
        diff[(x, x)] -= 1.0;
    }
    Ok(diff * root)
}

/// `L_r^σ (L_1 + ⋯ + L_d)^{-σ}` on the retained spectrum of `system`.
pub fn riesz_factor(system: &SpectralSystem, r: usize, sigma: f64) -> Result<OperatorRep> {
    check_axis(system.dim(), r)?;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Parameter(format!("σ = {sigma} must be positive")));
    }
    let mask = system.retained_mask();
    let mut diag = Vec::with_capacity(system.num_modes());
    for (k, keep) in mask.iter().enumerate() {
        if !keep {
            diag.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let lambda = system.joint_eigenvalue(k);
        let total: f64 = lambda.iter().sum();
        if total <= ZERO_EIGENVALUE_TOL {
            return Err(Error::Domain { tuple: lambda });
        }
        diag.push(Complex64::new((lambda[r] / total).powf(sigma), 0.0));
    }
    system.diagonal_operator(&diag)
}

/// `(L_1, …, L_d)` with `L_r = I − P_r` on `Z_K^d`, eigenbasis `e^{2πinx/K}/√K`,
/// the zero total eigenvalue filtered out.
pub fn cyclic_system(spec: &CyclicGroupSpec) -> Result<SpectralSystem> {
    let k = spec.k;
    let grid = WeightedGrid::counting(k, format!("Z_{k}"))?;
    let synthesis = DMatrix::from_fn(k, k, |x, n| {
        Complex64::from_polar(1.0 / (k as f64).sqrt(), 2.0 * PI * ((x * n) % k) as f64 / k as f64)
    });
    let axis = SpectralAxis::new(spec.laplacian_eigenvalues(), grid, synthesis)?;
    Ok(SpectralSystem::new(vec![axis; spec.d])?.with_filter(SpectrumFilter::ExcludeZeroTotal))
}

/// [`riesz_factor`] of [`cyclic_system`] as a lattice multiplier.
pub fn riesz_factor_lattice(spec: &CyclicGroupSpec, r: usize, sigma: f64) -> Result<LatticeMultiplier> {
    check_axis(spec.d, r)?;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Parameter(format!("σ = {sigma} must be positive")));
    }
    Ok(LatticeMultiplier::from_symbol(spec.lattice(), |n| {
        let lambda: Vec<f64> = n.iter().map(|v| 1.0 - spec.mu_hat(*v)).collect();
        let total: f64 = lambda.iter().sum();
        if total <= ZERO_EIGENVALUE_TOL {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((lambda[r].max(0.0) / total).powf(sigma), 0.0)
        }
    }))
}

fn check_torus(lattice: &Lattice, r: usize) -> Result<()> {
    check_axis(lattice.dim(), r)?;
    if let Some(n) = lattice.sizes().iter().find(|n| !n.is_power_of_two()) {
        return Err(Error::Parameter(format!("torus lattice size {n} is not a power of two")));
    }
    Ok(())
}

fn torus_norm(n: &[i64]) -> f64 {
    n.iter().map(|v| (*v * *v) as f64).sum::<f64>().sqrt()
}

/// Classical Riesz transform on a torus lattice: multiplier `k_r/|k|`, zero at `k = 0`.
pub fn classical_riesz_torus_operator(lattice: &Lattice, r: usize) -> Result<LatticeMultiplier> {
    check_torus(lattice, r)?;
    Ok(LatticeMultiplier::from_symbol(lattice.clone(), |n| {
        let m = torus_norm(n);
        Complex64::new(if m == 0.0 { 0.0 } else { n[r] as f64 / m }, 0.0)
    }))
}

pub fn classical_riesz_torus(lattice: &Lattice, r: usize, f: &[Complex64]) -> Result<Vec<Complex64>> {
    let op = classical_riesz_torus_operator(lattice, r)?;
    if f.len() != lattice.len() {
        return Err(Error::Shape(format!("{} values on {} lattice points", f.len(), lattice.len())));
    }
    Ok(op.apply(f))
}

/// The one-dimensional piece `sgn k_r`.
pub fn torus_hilbert_factor(lattice: &Lattice, r: usize) -> Result<LatticeMultiplier> {
    check_torus(lattice, r)?;
    Ok(LatticeMultiplier::from_symbol(lattice.clone(), |n| Complex64::new(n[r].signum() as f64, 0.0)))
}

/// The joint spectral piece `|k_r|/|k|`.
pub fn torus_spectral_factor(lattice: &Lattice, r: usize) -> Result<LatticeMultiplier> {
    check_torus(lattice, r)?;
    Ok(LatticeMultiplier::from_symbol(lattice.clone(), |n| {
        let m = torus_norm(n);
        Complex64::new(if m == 0.0 { 0.0 } else { n[r].unsigned_abs() as f64 / m }, 0.0)
    }))
}

/// One result line: `{K, d, p, r, estimator, value, seed}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    pub p: f64,
    /// Axis index, or `all` for the vector-valued transform.
    pub r: String,
    pub estimator: String,
    pub value: f64,
    pub seed: u64,
}

pub fn write_rows<W: Write>(rows: &[RieszRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn lp(values: &[f64], p: f64) -> f64 {
    values.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
}

fn dual_direction(z: &[Complex64], q: f64) -> Vec<Complex64> {
    let nz = lp(&z.iter().map(|v| v.norm()).collect::<Vec<_>>(), q);
    if nz == 0.0 {
        return vec![Complex64::new(0.0, 0.0); z.len()];
    }
    z.iter()
        .map(|v| {
            let a = v.norm();
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v / a * (a / nz).powf(q - 1.0)
            }
        })
        .collect()
}

/// Lower bound for `‖(Σ_r |T_r f|²)^{1/2}‖_p / ‖f‖_p`, `1 < p < ∞`, by the
/// dual power iteration for `ℓ^p → ℓ^p(ℓ²)`.
pub fn vector_lower_bound(ops: &[LatticeMultiplier], p: f64, opts: &PowerOptions) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("vector bounds need 1 < p < ∞, got {p}")));
    }
    let n = ops.first().map(|o| o.lattice.len()).ok_or_else(|| Error::Parameter("no operators".into()))?;
    let q = p / (p - 1.0);
    let mut starts: Vec<Vec<Complex64>> = (0..opts.restarts)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(s as u64));
            (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
        })
        .collect();
    let mut delta = vec![Complex64::new(0.0, 0.0); n];
    delta[0] = Complex64::new(1.0, 0.0);
    starts.push(delta);
    let run = |x0: &Vec<Complex64>| -> f64 {
        let nx = lp(&x0.iter().map(|v| v.norm()).collect::<Vec<_>>(), p);
        let mut x: Vec<Complex64> = x0.iter().map(|v| v / nx).collect();
        let mut best = 0.0f64;
        let mut prev = 0.0f64;
        for it in 0..opts.max_iter {
            let ys: Vec<Vec<Complex64>> = ops.iter().map(|o| o.apply(&x)).collect();
            let mag: Vec<f64> = (0..n).map(|i| ys.iter().map(|y| y[i].norm_sqr()).sum::<f64>().sqrt()).collect();
            let gamma = lp(&mag, p);
            if !gamma.is_finite() || gamma == 0.0 {
                break;
            }
            best = best.max(gamma);
            if it > 0 && (gamma - prev).abs() <= opts.rel_tol * gamma {
                break;
            }
            prev = gamma;
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for (o, y) in ops.iter().zip(&ys) {
                let psi: Vec<Complex64> = y
                    .iter()
                    .zip(&mag)
                    .map(|(v, m)| if *m == 0.0 { Complex64::new(0.0, 0.0) } else { v * (m / gamma).powf(p - 2.0) / gamma })
                    .collect();
                z.iter_mut().zip(o.apply_adjoint(&psi)).for_each(|(a, b)| *a += b);
            }
            x = dual_direction(&z, q);
        }
        best
    };
    Ok(starts.par_iter().map(run).reduce(|| 0.0, f64::max))
}

/// Exact `ℓ²(ℓ²)` norm of the vector transform: `max_n (Σ_r |m_r(n)|²)^{1/2}`.
pub fn vector_l2_norm(ops: &[LatticeMultiplier]) -> f64 {
    let n = ops.first().map(|o| o.table.len()).unwrap_or(0);
    (0..n).map(|i| ops.iter().map(|o| o.table[i].norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

fn row(spec: &CyclicGroupSpec, p: f64, r: impl Into<String>, estimator: &str, value: f64, seed: u64) -> RieszRow {
    RieszRow { k: spec.k, d: spec.d, p, r: r.into(), estimator: estimator.into(), value, seed }
}

/// Scalar and vector bounds for the discrete Riesz transforms over a range of
/// dimensions, with the envelopes `C·d` and `C·√d` fitted at the first dimension.
pub fn vector_riesz_norms(spec: &CyclicGroupSpec, p: f64, dims: &[usize], opts: &PowerOptions) -> Result<Vec<RieszRow>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must lie in (1, ∞)")));
    }
    let mut rows = Vec::new();
    let mut first = None;
    for &d in dims {
        let s = spec.with_dim(d)?;
        let ops: Vec<LatticeMultiplier> = (0..d).map(|r| discrete_riesz_operator(&s, r)).collect::<Result<_>>()?;
        rows.push(row(&s, p, "0", "scalar_lower", ops[0].lower_bound(p, opts), opts.seed));
        rows.push(row(&s, p, "0", "scalar_upper", ops[0].upper_bound(p), opts.seed));
        let vector = if p == 2.0 { vector_l2_norm(&ops) } else { vector_lower_bound(&ops, p, opts)? };
        rows.push(row(&s, p, "all", if p == 2.0 { "vector_exact" } else { "vector_lower" }, vector, opts.seed));
        let (c, d0) = *first.get_or_insert((vector, d as f64));
        let ratio = d as f64 / d0;
        rows.push(row(&s, p, "all", "envelope_d", c * ratio, opts.seed));
        rows.push(row(&s, p, "all", "envelope_sqrt_d", c * ratio.sqrt(), opts.seed));
    }
    Ok(rows)
}

/// Scalar bounds of `R_r` on `Z_K^d` for growing `K`: the infinite group `Z`
/// is approached through large cyclic groups.
pub fn cyclic_k_study(d: usize, p: f64, ks: &[usize], opts: &PowerOptions) -> Result<Vec<RieszRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        let s = CyclicGroupSpec::simple_walk(k, d)?;
        let op = discrete_riesz_operator(&s, 0)?;
        rows.push(row(&s, p, "0", "scalar_lower", op.lower_bound(p, opts), opts.seed));
        rows.push(row(&s, p, "0", "l1_exact", op.l1_norm(), opts.seed));
    }
    Ok(rows)
}

/// Factor in `R_r = √2 · ∂_r(−Δ)^{-1/2}Π_0`.
pub const NORMALIZATION: f64 = SQRT_2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{exact_norm, lp_operator_norm, NormMode};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sample(k: usize, d: usize, seed: u64) -> GroupFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..k.pow(d as u32)).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        GroupFunction::new(k, d, values).unwrap()
    }

    #[test]
    fn spec_validation() {
        let sub = CyclicGroupSpec::new(6, 1, vec![0.0, 0.0, 0.5, 0.0, 0.5, 0.0]).unwrap();
        assert_eq!(sub.generated_index(), 2);
        assert!(CyclicGroupSpec::simple_walk(6, 1).unwrap().generates());
        assert!(CyclicGroupSpec::new(4, 1, vec![0.0, 0.6, 0.0, 0.4]).is_err());
        assert!(CyclicGroupSpec::new(4, 1, vec![0.5, 0.5, 0.0, 0.5]).is_err());
        assert!(CyclicGroupSpec::new(4, 1, vec![-0.5, 0.75, 0.0, 0.75]).is_err());
        assert!(CyclicGroupSpec::new(5, 2, vec![0.2, 0.2, 0.2, 0.2, 0.2]).is_ok());
        assert!(CyclicGroupSpec::simple_walk(8, 3).unwrap().is_simple_walk());
    }

    #[test]
    fn markov_operator_basics() {
        let spec = CyclicGroupSpec::new(8, 2, {
            let mut m = vec![0.0; 8];
            m[0] = 1.0;
            m
        })
        .unwrap();
        let f = sample(8, 2, 1);
        let g = markov_operator(&spec, &f).unwrap();
        assert!(g.values().iter().zip(f.values()).all(|(a, b)| (a - b).norm() < 1e-14));

        let walk = CyclicGroupSpec::simple_walk(8, 1).unwrap();
        for n in 0..8usize {
            let e = GroupFunction::from_fn(8, 1, |x| Complex64::from_polar(1.0, 2.0 * PI * (n * x[0]) as f64 / 8.0));
            let pe = markov_operator(&walk, &e).unwrap();
            let lam = (2.0 * PI * n as f64 / 8.0).cos();
            assert!(pe.values().iter().zip(e.values()).all(|(a, b)| (a - b * lam).norm() < 1e-14));
        }
        let one = GroupFunction::constant(8, 2, c(3.0));
        let spec = CyclicGroupSpec::new(8, 2, vec![0.2, 0.2, 0.05, 0.0, 0.3, 0.0, 0.05, 0.2]).unwrap();
        let p1 = markov_operator(&spec, &one).unwrap();
        assert!(p1.values().iter().all(|v| (v - c(3.0)).norm() < 1e-13));
    }

    #[test]
    fn markov_routes_and_contraction() {
        let spec = CyclicGroupSpec::new(7, 2, vec![0.2, 0.1, 0.15, 0.15, 0.15, 0.15, 0.1]).unwrap();
        let f = sample(7, 2, 3);
        for r in 0..2 {
            let a = markov_axis(&spec, r, &f).unwrap();
            let b = markov_axis_direct(&spec, r, &f).unwrap();
            assert!(a.values().iter().zip(b.values()).all(|(x, y)| (x - y).norm() < 1e-13));
        }
        let op = LatticeMultiplier::from_symbol(spec.lattice(), |n| c(spec.mu_hat(n[1]))).to_operator().unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            assert!(exact_norm(&op, p).unwrap() <= 1.0 + 1e-12);
        }
        let adj = op.weighted_adjoint();
        assert!(adj.max_abs_diff(&op) < 1e-13);
    }

    #[test]
    fn discrete_riesz_l2_norm_is_sqrt_two() {
        for k in [4, 8, 16] {
            for d in 1..=3 {
                let spec = CyclicGroupSpec::simple_walk(k, d).unwrap();
                for r in 0..d {
                    let op = discrete_riesz_operator(&spec, r).unwrap();
                    assert!((op.l2_norm() - SQRT_2).abs() < 1e-10, "K={k} d={d}");
                }
                let f = GroupFunction::constant(k, d, c(1.0));
                let rf = discrete_riesz(&spec, 0, &f).unwrap();
                assert!(rf.lp_norm(f64::INFINITY) < 1e-13);
            }
        }
        let lazy = CyclicGroupSpec::new(4, 1, vec![0.5, 0.25, 0.0, 0.25]).unwrap();
        assert!(discrete_riesz_operator(&lazy, 0).is_err());
    }

    #[test]
    fn relation_to_the_normalized_transform() {
        for (k, d) in [(4, 1), (8, 1), (4, 2), (8, 2), (4, 3)] {
            let spec = CyclicGroupSpec::simple_walk(k, d).unwrap();
            for r in 0..d {
                let ours = discrete_riesz_operator(&spec, r).unwrap().matrix().unwrap();
                let lit = normalized_discrete_riesz_matrix(k, d, r).unwrap();
                let err = ours.iter().zip(lit.iter()).map(|(a, b)| (a - c(NORMALIZATION * b)).norm()).fold(0.0, f64::max);
                assert!(err < 1e-12, "K={k} d={d} r={r}: {err}");
            }
        }
    }

    #[test]
    fn dense_l2_norm_agrees() {
        let spec = CyclicGroupSpec::simple_walk(4, 2).unwrap();
        let op = discrete_riesz_operator(&spec, 1).unwrap().to_operator().unwrap();
        assert!((lp_operator_norm(&op, 2.0, NormMode::Exact).unwrap() - SQRT_2).abs() < 1e-10);
        let l1 = discrete_riesz_operator(&spec, 1).unwrap().l1_norm();
        assert!((exact_norm(&op, 1.0).unwrap() - l1).abs() < 1e-12);
    }

    #[test]
    fn riesz_factor_routes_agree() {
        let spec = CyclicGroupSpec::simple_walk(4, 2).unwrap();
        let sys = cyclic_system(&spec).unwrap();
        for sigma in [0.5, 1.0, 1.7] {
            let dense = riesz_factor(&sys, 0, sigma).unwrap();
            let lat = riesz_factor_lattice(&spec, 0, sigma).unwrap().matrix().unwrap();
            let err = dense.matrix().iter().zip(lat.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "σ={sigma}: {err}");
            assert!(exact_norm(&dense, 2.0).unwrap() <= 1.0 + 1e-12);
        }
        let a = riesz_factor(&sys, 1, 0.3).unwrap();
        let b = riesz_factor(&sys, 1, 0.9).unwrap();
        let ab = riesz_factor(&sys, 1, 1.2).unwrap();
        assert!(a.compose(&b).unwrap().max_abs_diff(&ab) < 1e-12);

        let full = SpectralSystem::new(sys.axes().to_vec()).unwrap();
        assert!(matches!(riesz_factor(&full, 0, 0.5), Err(Error::Domain { .. })));
        assert!(riesz_factor(&sys, 2, 0.5).is_err());
        assert!(riesz_factor(&sys, 0, 0.0).is_err());
    }

    #[test]
    fn riesz_factor_in_one_dimension_is_the_projection() {
        let spec = CyclicGroupSpec::simple_walk(8, 1).unwrap();
        let sys = cyclic_system(&spec).unwrap();
        let op = riesz_factor(&sys, 0, 0.5).unwrap();
        let proj = sys.projection_operator().unwrap();
        assert!(op.max_abs_diff(&proj) < 1e-13);
    }

    #[test]
    fn torus_riesz() {
        let lat = Lattice::cube(16, 1).unwrap();
        let h = classical_riesz_torus_operator(&lat, 0).unwrap();
        assert!((h.l2_norm() - 1.0).abs() < 1e-15);
        assert!(Lattice::new(vec![12, 8]).map(|l| classical_riesz_torus_operator(&l, 0)).unwrap().is_err());

        let lat = Lattice::cube(8, 3).unwrap();
        let f = sample(8, 3, 9).into_values();
        let mean: Complex64 = f.iter().sum::<Complex64>() / f.len() as f64;
        let centred: f64 = f.iter().map(|v| (v - mean).norm_sqr()).sum();
        let total: f64 = (0..3).map(|r| {
            classical_riesz_torus(&lat, r, &f).unwrap().iter().map(|v| v.norm_sqr()).sum::<f64>()
        }).sum();
        assert!((total - centred).abs() < 1e-10 * centred);
        for r in 0..3 {
            let direct = classical_riesz_torus_operator(&lat, r).unwrap();
            let split = torus_hilbert_factor(&lat, r).unwrap();
            let spectral = torus_spectral_factor(&lat, r).unwrap();
            let composed = split.apply(&spectral.apply(&f));
            let once = direct.apply(&f);
            assert!(composed.iter().zip(&once).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn vector_norms() {
        let spec = CyclicGroupSpec::simple_walk(8, 1).unwrap();
        let opts = PowerOptions { restarts: 2, ..PowerOptions::default() };
        let rows = vector_riesz_norms(&spec, 2.0, &[1, 2, 3], &opts).unwrap();
        for r in rows.iter().filter(|r| r.estimator == "vector_exact") {
            assert!((r.value - SQRT_2).abs() < 1e-10);
        }
        let rows = vector_riesz_norms(&spec, 3.0, &[1, 2], &opts).unwrap();
        for block in rows.chunks(5) {
            assert!(block[0].value <= block[1].value * (1.0 + 1e-9));
            assert!(block[2].value > 1.0);
        }
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("K,d,p,r,estimator,value,seed"));
    }
}
