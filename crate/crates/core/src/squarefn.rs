//! The square function `g_N`, its Mellin form, and Littlewood–Paley blocks.

use crate::error::{Error, Result};
use crate::fourier::Lattice;
use crate::grid::WeightedGrid;
use crate::mellin::LinAxis;
use crate::special::{gamma, gamma_complex};
use crate::spectral::{SpectralSystem, ZERO_EIGENVALUE_TOL};
use crate::tensor::{apply_per_axis, unravel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Log-spaced times per axis with `dt/t` weights equal to the log spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    axes: Vec<Vec<f64>>,
    steps: Vec<f64>,
}

impl TimeGrid {
    /// `count` nodes per axis on `[lo_r, hi_r]`.
    pub fn new(bounds: &[(f64, f64)], count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Parameter("time grid needs at least two nodes per axis".into()));
        }
        let mut axes = Vec::new();
        let mut steps = Vec::new();
        for &(lo, hi) in bounds {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::Parameter(format!("time interval [{lo}, {hi}] must satisfy 0 < lo < hi")));
            }
            let h = (hi / lo).ln() / (count - 1) as f64;
            axes.push((0..count).map(|k| (lo.ln() + k as f64 * h).exp()).collect());
            steps.push(h);
        }
        Ok(Self { axes, steps })
    }

    /// `[1e-4/λ_max, 1e2/λ_min]` per axis over the retained nonzero eigenvalues.
    pub fn for_system(system: &SpectralSystem, count: usize) -> Result<Self> {
        let spec = system.joint_spectrum();
        let bounds: Vec<(f64, f64)> = (0..system.dim())
            .map(|r| {
                let vals = spec.iter().map(|l| l[r]).filter(|x| *x > ZERO_EIGENVALUE_TOL);
                let (lo, hi) = vals.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
                if hi == 0.0 {
                    Err(Error::Parameter(format!("axis {r} has no positive retained eigenvalue")))
                } else {
                    Ok((1e-4 / hi, 1e2 / lo))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(&bounds, count)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn nodes(&self, axis: usize) -> &[f64] {
        &self.axes[axis]
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.steps[axis]
    }
}

/// `C_N = ∏ Γ(2N_r) / 4^{N_r}`.
pub fn isometry_constant(n: &[u32]) -> f64 {
    n.iter().map(|k| gamma(2.0 * *k as f64) / 4f64.powi(*k as i32)).product()
}

fn check(system: &SpectralSystem, n: &[u32], f: &[Complex64]) -> Result<()> {
    if n.len() != system.dim() {
        return Err(Error::Shape(format!("N has {} components for {} operators", n.len(), system.dim())));
    }
    if n.contains(&0) {
        return Err(Error::Parameter(format!("N = {n:?} must be ≥ 1 componentwise")));
    }
    if f.len() != system.grid().len() {
        return Err(Error::Shape(format!("{} values on a grid of {} nodes", f.len(), system.grid().len())));
    }
    if let Some(axis) = system.atl_violation() {
        return Err(Error::Atl { axis });
    }
    Ok(())
}

/// `x ↦ (Σ_{k,l} v_k(x) conj(v_l(x)) K[k, l])^{1/2}` with `v_k(x) = c_k e_k(x)`
/// and `K = ⊗ K_r`.
fn quadratic_form(system: &SpectralSystem, c: &[Complex64], kernels: &[DMatrix<Complex64>]) -> Vec<f64> {
    let mode_shape = system.mode_shape();
    let node_shape = system.node_shape();
    let kt: Vec<DMatrix<Complex64>> = kernels.iter().map(|k| k.transpose()).collect();
    let refs: Vec<&DMatrix<Complex64>> = kt.iter().collect();
    let nodes: usize = node_shape.iter().product();
    (0..nodes)
        .into_par_iter()
        .map(|x| {
            let xi = unravel(x, &node_shape);
            let v: Vec<Complex64> = c
                .iter()
                .enumerate()
                .map(|(k, ck)| {
                    if ck.norm_sqr() == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let ki = unravel(k, &mode_shape);
                    let e: Complex64 = (0..ki.len()).map(|r| system.axes()[r].synthesis()[(xi[r], ki[r])]).product();
                    ck * e
                })
                .collect();
            let w = apply_per_axis(&v, &mode_shape, &refs);
            let s: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            s.re.max(0.0).sqrt()
        })
        .collect()
}

/// `g_N(f)(x) = (∫ |t^N L^N e^{-⟨t,L⟩} f(x)|² dt/t)^{1/2}` on the time grid.
///
/// The time quadrature is separable, so it is evaluated per axis as the
/// kernel `K_r[a, b] = Σ_t h (tλ_a)^N (tλ_b)^N e^{-t(λ_a+λ_b)}` and recombined.
pub fn g_function(system: &SpectralSystem, n: &[u32], f: &[Complex64], tgrid: &TimeGrid) -> Result<Vec<f64>> {
    check(system, n, f)?;
    if tgrid.dim() != system.dim() {
        return Err(Error::Shape("time grid dimension differs from the system".into()));
    }
    let c = system.analysis(f)?;
    let kernels: Vec<DMatrix<Complex64>> = system
        .axes()
        .iter()
        .enumerate()
        .map(|(r, axis)| {
            let lam = axis.eigenvalues();
            let nr = n[r] as i32;
            let h = tgrid.step(r);
            let phi = |t: f64, l: f64| (t * l).powi(nr) * (-t * l).exp();
            DMatrix::from_fn(lam.len(), lam.len(), |a, b| {
                let s: f64 = tgrid.nodes(r).iter().map(|t| phi(*t, lam[a]) * phi(*t, lam[b])).sum();
                Complex64::new(h * s, 0.0)
            })
        })
        .collect();
    Ok(quadratic_form(system, &c, &kernels))
}

/// The same quadrature evaluated node by node in `t`: synthesizes
/// `t^N L^N e^{-⟨t,L⟩} f` at every time and accumulates.
pub fn g_function_direct(system: &SpectralSystem, n: &[u32], f: &[Complex64], tgrid: &TimeGrid) -> Result<Vec<f64>> {
    check(system, n, f)?;
    let c = system.analysis(f)?;
    let shape: Vec<usize> = (0..tgrid.dim()).map(|r| tgrid.nodes(r).len()).collect();
    let total: usize = shape.iter().product();
    let weight: f64 = (0..tgrid.dim()).map(|r| tgrid.step(r)).product();
    let spectrum: Vec<Vec<f64>> = (0..system.num_modes()).map(|k| system.joint_eigenvalue(k)).collect();
    let acc = (0..total)
        .into_par_iter()
        .map(|flat| {
            let t: Vec<f64> = unravel(flat, &shape).iter().enumerate().map(|(r, k)| tgrid.nodes(r)[*k]).collect();
            let coeffs: Vec<Complex64> = c
                .iter()
                .zip(&spectrum)
                .map(|(ck, lam)| {
                    let s: f64 = lam
                        .iter()
                        .zip(&t)
                        .zip(n)
                        .map(|((l, tr), nr)| (tr * l).powi(*nr as i32) * (-tr * l).exp())
                        .product();
                    ck * s
                })
                .collect();
            system.synthesis(&coeffs).map(|v| v.iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>())
        })
        .try_reduce(
            || vec![0.0; system.grid().len()],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(acc.into_iter().map(|s| (weight * s).sqrt()).collect())
}

/// `(2π)^{-d/2} (∫ |Γ(N−iu) L^{iu} f(x)|² du)^{1/2}` on a product `u` grid.
pub fn g_function_mellin(system: &SpectralSystem, n: &[u32], f: &[Complex64], u_axes: &[LinAxis]) -> Result<Vec<f64>> {
    check(system, n, f)?;
    if u_axes.len() != system.dim() {
        return Err(Error::Shape("frequency grid dimension differs from the system".into()));
    }
    let c = system.analysis(f)?;
    let kernels: Vec<DMatrix<Complex64>> = system
        .axes()
        .iter()
        .zip(u_axes)
        .enumerate()
        .map(|(r, (axis, ua))| {
            let lam = axis.eigenvalues();
            let u = ua.values();
            let w = ua.weights();
            let g2: Vec<f64> =
                u.iter().zip(&w).map(|(x, wx)| wx * gamma_complex(Complex64::new(n[r] as f64, -x)).norm_sqr()).collect();
            DMatrix::from_fn(lam.len(), lam.len(), |a, b| {
                if lam[a] <= ZERO_EIGENVALUE_TOL || lam[b] <= ZERO_EIGENVALUE_TOL {
                    return Complex64::new(0.0, 0.0);
                }
                let ratio = (lam[a] / lam[b]).ln();
                let s: Complex64 = u.iter().zip(&g2).map(|(x, g)| Complex64::from_polar(*g, x * ratio)).sum();
                s / (2.0 * PI)
            })
        })
        .collect();
    Ok(quadratic_form(system, &c, &kernels))
}

/// Smooth dyadic bump `ψ` supported in `1/2 ≤ |ξ| ≤ 2` with
/// `Σ_l ψ(2^{-l}ξ)² = 1` for `ξ ≠ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DyadicBump;

impl DyadicBump {
    fn transition(x: f64) -> f64 {
        let s = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
        let (a, b) = (s(x), s(1.0 - x));
        a / (a + b)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            return 0.0;
        }
        let y = xi.abs().log2();
        let sq = if y <= -1.0 || y >= 1.0 {
            0.0
        } else if y <= 0.0 {
            Self::transition(y + 1.0)
        } else {
            1.0 - Self::transition(y)
        };
        sq.sqrt()
    }

    /// `ψ(2^{-j}ξ)`.
    pub fn scaled(&self, j: i32, xi: f64) -> f64 {
        self.eval(xi * 2f64.powi(-j))
    }
}

/// `max |Σ_{l ∈ range} ψ(2^{-l}ξ)² − 1|` over the nonzero sample points.
pub fn partition_defect(psi: &DyadicBump, xi: &[f64], range: (i32, i32)) -> f64 {
    xi.iter()
        .filter(|x| **x != 0.0)
        .map(|x| ((range.0..=range.1).map(|l| psi.scaled(l, *x).powi(2)).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// A unitary transform with a product frequency grid.
pub trait UnitaryTransform: Sync {
    fn space_grid(&self) -> &WeightedGrid;
    fn frequency_grid(&self) -> &WeightedGrid;
    /// Frequency values per axis.
    fn frequencies(&self) -> Vec<Vec<f64>>;
    fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>>;
    fn inverse(&self, fhat: &[Complex64]) -> Result<Vec<Complex64>>;
}

/// Unitary DFT on a lattice: counting measure in space, counting measure
/// scaled by `1/|lattice|` on frequencies, integer signed frequencies.
#[derive(Debug, Clone)]
pub struct LatticeTransform {
    lattice: Lattice,
    grid: WeightedGrid,
    freq: WeightedGrid,
}

impl LatticeTransform {
    pub fn new(lattice: Lattice) -> Result<Self> {
        let grid = lattice.grid()?;
        let n = lattice.len() as f64;
        let freq = WeightedGrid::new(
            grid.dim(),
            grid.nodes().to_vec(),
            vec![1.0 / n; lattice.len()],
            format!("dual {}", grid.label()),
        )?;
        Ok(Self { lattice, grid, freq })
    }
}

impl UnitaryTransform for LatticeTransform {
    fn space_grid(&self) -> &WeightedGrid {
        &self.grid
    }

    fn frequency_grid(&self) -> &WeightedGrid {
        &self.freq
    }

    fn frequencies(&self) -> Vec<Vec<f64>> {
        self.lattice.sizes().iter().map(|n| (0..*n).map(|k| Lattice::signed(k, *n) as f64).collect()).collect()
    }

    fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.lattice.forward(f)
    }

    fn inverse(&self, fhat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.lattice.inverse(fhat)
    }
}

/// One block `S_j f`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBlock {
    pub j: Vec<i32>,
    pub values: Vec<Complex64>,
}

/// Maximum tolerated partition defect.
pub const PARTITION_TOL: f64 = 1e-8;

/// `S_j f` with transform `ψ(2^{-j_1}ξ_1)⋯ψ(2^{-j_d}ξ_d)·(transform of f)` for
/// all `j` in the product of per-axis ranges.
pub fn littlewood_paley_blocks(
    psi: &DyadicBump,
    transform: &dyn UnitaryTransform,
    f: &[Complex64],
    ranges: &[(i32, i32)],
) -> Result<Vec<LpBlock>> {
    let freqs = transform.frequencies();
    if ranges.len() != freqs.len() {
        return Err(Error::Shape(format!("{} ranges for {} frequency axes", ranges.len(), freqs.len())));
    }
    for (r, (xi, range)) in freqs.iter().zip(ranges).enumerate() {
        let defect = partition_defect(psi, xi, *range);
        if defect > PARTITION_TOL {
            return Err(Error::Numerical(format!("partition of unity on axis {r} has defect {defect:e}")));
        }
    }
    let fhat = transform.forward(f)?;
    let fshape: Vec<usize> = freqs.iter().map(|x| x.len()).collect();
    let jshape: Vec<usize> = ranges.iter().map(|(a, b)| (b - a + 1).max(0) as usize).collect();
    let count: usize = jshape.iter().product();
    (0..count)
        .into_par_iter()
        .map(|flat| {
            let j: Vec<i32> = unravel(flat, &jshape).iter().zip(ranges).map(|(k, (a, _))| a + *k as i32).collect();
            let tables: Vec<Vec<f64>> = freqs.iter().zip(&j).map(|(xi, jr)| xi.iter().map(|x| psi.scaled(*jr, *x)).collect()).collect();
            let masked: Vec<Complex64> = fhat
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    let idx = unravel(k, &fshape);
                    z * idx.iter().enumerate().map(|(r, i)| tables[r][*i]).product::<f64>()
                })
                .collect();
            Ok(LpBlock { values: transform.inverse(&masked)?, j })
        })
        .collect()
}

/// `‖(Σ_j |S_j f|²)^{1/2}‖_2`.
pub fn square_sum_norm(grid: &WeightedGrid, blocks: &[LpBlock]) -> f64 {
    let n = grid.len();
    let sq: Vec<f64> = (0..n).map(|x| blocks.iter().map(|b| b.values[x].norm_sqr()).sum::<f64>().sqrt()).collect();
    grid.lp_norm_real(&sq, 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{build_system, ou_system, Basis, JacobiBasis};
    use crate::spectral::SpectrumFilter;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_f(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    }

    fn jacobi_system(d: usize) -> SpectralSystem {
        let b: Vec<Basis> = (0..d).map(|_| Basis::Jacobi(JacobiBasis::new(0.0, 0.5, 12).unwrap())).collect();
        build_system(&b).unwrap()
    }

    #[test]
    fn eigenfunction_gives_half_modulus() {
        let sys = jacobi_system(1);
        let tg = TimeGrid::for_system(&sys, 256).unwrap();
        for k in [0, 3, 7] {
            let e = sys.eigenfunction(&[k]).unwrap();
            let g = g_function(&sys, &[1], &e, &tg).unwrap();
            for (gv, ev) in g.iter().zip(&e) {
                assert!((gv - ev.norm() / 2.0).abs() < 1e-8 * (1.0 + ev.norm()));
            }
            let gm = g_function_mellin(&sys, &[1], &e, &[LinAxis::standard()]).unwrap();
            for (gv, ev) in gm.iter().zip(&e) {
                assert!((gv - ev.norm() / 2.0).abs() < 1e-8 * (1.0 + ev.norm()));
            }
        }
    }

    #[test]
    fn isometry_and_two_formulas() {
        let sys = jacobi_system(1);
        let tg = TimeGrid::for_system(&sys, 256).unwrap();
        let grid = sys.grid().clone();
        for seed in 0..4 {
            let f = sys.project(&random_f(grid.len(), seed)).unwrap();
            for n in [1u32, 2] {
                let g = g_function(&sys, &[n], &f, &tg).unwrap();
                let ratio = grid.lp_norm_real(&g, 2.0).powi(2) / grid.lp_norm(&f, 2.0).powi(2);
                assert!((ratio / isometry_constant(&[n]) - 1.0).abs() < 1e-6);
            }
            let g = g_function(&sys, &[1], &f, &tg).unwrap();
            let gd = g_function_direct(&sys, &[1], &f, &tg).unwrap();
            let gm = g_function_mellin(&sys, &[1], &f, &[LinAxis::standard()]).unwrap();
            for ((a, b), c) in g.iter().zip(&gd).zip(&gm) {
                assert!((a - b).abs() < 1e-10 * (1.0 + a));
                assert!((a - c).abs() < 1e-5 * (1.0 + a));
            }
        }
    }

    #[test]
    fn zero_eigenvalue_rejected_and_homogeneity() {
        let ou = ou_system(1, 8).unwrap();
        let f = random_f(ou.grid().len(), 3);
        let tg = TimeGrid::new(&[(1e-4, 1e3)], 64).unwrap();
        assert!(matches!(g_function(&ou, &[1], &f, &tg), Err(Error::Atl { .. })));
        let ou = ou.with_filter(SpectrumFilter::ExcludeAxisZeros);
        let g = g_function(&ou, &[1], &f, &tg).unwrap();
        let c = Complex64::new(-2.0, 1.5);
        let fc: Vec<Complex64> = f.iter().map(|z| z * c).collect();
        let gc = g_function(&ou, &[1], &fc, &tg).unwrap();
        assert!(g.iter().zip(&gc).all(|(a, b)| (b - c.norm() * a).abs() <= 1e-12 * (1.0 + b)));
        let zero = vec![Complex64::new(0.0, 0.0); f.len()];
        assert!(g_function(&ou, &[1], &zero, &tg).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn bump_partition() {
        let psi = DyadicBump;
        assert_eq!(psi.eval(0.5), 0.0);
        assert_eq!(psi.eval(2.0), 0.0);
        let xi: Vec<f64> = (0..1000).map(|k| (-6.0 + 12.0 * k as f64 / 999.0f64).exp2() * if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(partition_defect(&psi, &xi, (-10, 10)) < 1e-12);
        let d1 = partition_defect(&psi, &xi, (-3, 3));
        let d2 = partition_defect(&psi, &xi, (-5, 5));
        let d3 = partition_defect(&psi, &xi, (-7, 7));
        assert!(d1 >= d2 && d2 >= d3 && d1 > 0.1);
    }

    #[test]
    fn lattice_blocks_reconstruct() {
        let lt = LatticeTransform::new(Lattice::cube(16, 2).unwrap()).unwrap();
        let mut f = random_f(256, 9);
        let mean = f.iter().sum::<Complex64>() / 256.0;
        f.iter_mut().for_each(|z| *z -= mean);
        // axis marginals would still carry zero frequencies; remove them too
        let mut fhat = lt.forward(&f).unwrap();
        for (k, z) in fhat.iter_mut().enumerate() {
            if k % 16 == 0 || k < 16 {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        let f = lt.inverse(&fhat).unwrap();
        let blocks = littlewood_paley_blocks(&DyadicBump, &lt, &f, &[(-1, 4), (-1, 4)]).unwrap();
        let lhs = square_sum_norm(lt.space_grid(), &blocks);
        let rhs = lt.space_grid().lp_norm(&f, 2.0);
        assert!((lhs - rhs).abs() < 1e-6 * rhs);
        let err = littlewood_paley_blocks(&DyadicBump, &lt, &f, &[(0, 1), (0, 4)]).unwrap_err();
        assert!(err.to_string().contains("defect"));
        let zero = vec![Complex64::new(0.0, 0.0); 256];
        let zb = littlewood_paley_blocks(&DyadicBump, &lt, &zero, &[(-1, 4), (-1, 4)]).unwrap();
        assert!(zb.iter().all(|b| b.values.iter().all(|z| z.norm() == 0.0)));
    }

    #[test]
    fn annulus_support_hits_few_blocks() {
        let lt = LatticeTransform::new(Lattice::cube(32, 1).unwrap()).unwrap();
        let mut fhat = vec![Complex64::new(0.0, 0.0); 32];
        fhat[5] = Complex64::new(1.0, 0.0);
        fhat[6] = Complex64::new(0.0, 1.0);
        let f = lt.inverse(&fhat).unwrap();
        let blocks = littlewood_paley_blocks(&DyadicBump, &lt, &f, &[(-1, 5)]).unwrap();
        let nonzero = blocks.iter().filter(|b| b.values.iter().any(|z| z.norm() > 1e-14)).count();
        assert!(nonzero <= 2);
    }
}
