//! Joint spectral calculus of finitely many commuting operators, realized by
//! a tensor-product eigenbasis on a product grid.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::operator::OperatorRep;
use crate::symbol::Symbol;
use crate::tensor::{apply_per_axis, kron_all, unravel};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues at or below this are treated as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

/// One operator `L_r`: eigenvalues, the grid it acts on, and the matrices of
/// its eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAxis {
    eigenvalues: Vec<f64>,
    grid: WeightedGrid,
    /// Columns are eigenfunctions sampled at the nodes.
    synthesis: DMatrix<Complex64>,
    /// Weighted adjoint of `synthesis`: coefficients `c_k = ⟨f, φ_k⟩_w`.
    analysis: DMatrix<Complex64>,
}

impl SpectralAxis {
    /// Builds an axis from eigenfunctions orthonormal in `L²(grid)`. Modes are
    /// reordered so eigenvalues ascend.
    pub fn new(eigenvalues: Vec<f64>, grid: WeightedGrid, synthesis: DMatrix<Complex64>) -> Result<Self> {
        if synthesis.nrows() != grid.len() || synthesis.ncols() != eigenvalues.len() {
            return Err(Error::Shape(format!(
                "eigenbasis matrix is {}x{}, expected {}x{}",
                synthesis.nrows(),
                synthesis.ncols(),
                grid.len(),
                eigenvalues.len()
            )));
        }
        if eigenvalues.is_empty() {
            return Err(Error::Parameter("an axis needs at least one mode".into()));
        }
        if let Some(l) = eigenvalues.iter().find(|l| !(l.is_finite() && **l >= -ZERO_EIGENVALUE_TOL)) {
            return Err(Error::Parameter(format!("eigenvalue {l} is negative or not finite")));
        }
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eigenvalues[k].max(0.0)).collect();
        let synthesis = DMatrix::from_fn(synthesis.nrows(), order.len(), |i, k| synthesis[(i, order[k])]);
        let w = grid.weights();
        let analysis = DMatrix::from_fn(order.len(), grid.len(), |k, i| synthesis[(i, k)].conj() * w[i]);
        Ok(Self { eigenvalues, grid, synthesis, analysis })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn grid(&self) -> &WeightedGrid {
        &self.grid
    }

    pub fn synthesis(&self) -> &DMatrix<Complex64> {
        &self.synthesis
    }

    pub fn analysis(&self) -> &DMatrix<Complex64> {
        &self.analysis
    }

    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `L_r + δ`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::Parameter(format!("shift {delta} must be finite and nonnegative")));
        }
        let mut out = self.clone();
        out.eigenvalues.iter_mut().for_each(|l| *l += delta);
        Ok(out)
    }

    /// Gram matrix `analysis · synthesis`; the identity for an orthonormal basis.
    pub fn gram(&self) -> DMatrix<Complex64> {
        &self.analysis * &self.synthesis
    }
}

/// Which joint eigenvalue tuples a system keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumFilter {
    #[default]
    Full,
    /// Drops tuples with `λ_1 + ⋯ + λ_d = 0`.
    ExcludeZeroTotal,
    /// Drops tuples with any zero component, so that every `L_r` restricted
    /// to the retained span has trivial kernel.
    ExcludeAxisZeros,
}

/// Kind of semigroup generated by the joint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupKind {
    /// `exp(-⟨t, λ⟩)`.
    Heat,
    /// `exp(-⟨t, √λ⟩)`.
    Poisson,
}

/// `d` commuting operators with a joint eigenbasis on a product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSystem {
    axes: Vec<SpectralAxis>,
    grid: WeightedGrid,
    filter: SpectrumFilter,
}

impl SpectralSystem {
    pub fn new(axes: Vec<SpectralAxis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Parameter("a system needs at least one axis".into()));
        }
        let grids: Vec<&WeightedGrid> = axes.iter().map(|a| a.grid()).collect();
        let grid = WeightedGrid::product(&grids)?;
        Ok(Self { axes, grid, filter: SpectrumFilter::Full })
    }

    pub fn with_filter(mut self, filter: SpectrumFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn filter(&self) -> SpectrumFilter {
        self.filter
    }

    /// Every axis shifted by `delta`, keeping the filter.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        let axes = self.axes.iter().map(|a| a.shifted(delta)).collect::<Result<Vec<_>>>()?;
        Ok(Self { axes, grid: self.grid.clone(), filter: self.filter })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[SpectralAxis] {
        &self.axes
    }

    pub fn grid(&self) -> &WeightedGrid {
        &self.grid
    }

    pub fn axis_grids(&self) -> Vec<&WeightedGrid> {
        self.axes.iter().map(|a| a.grid()).collect()
    }

    /// Number of modes per axis.
    pub fn mode_shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.modes()).collect()
    }

    /// Number of nodes per axis.
    pub fn node_shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.grid().len()).collect()
    }

    pub fn num_modes(&self) -> usize {
        self.mode_shape().iter().product()
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        unravel(flat, &self.mode_shape())
    }

    /// Joint eigenvalue `(λ^1_{k_1}, …, λ^d_{k_d})` of a flat mode index.
    pub fn joint_eigenvalue(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(k, a)| a.eigenvalues()[*k])
            .collect()
    }

    fn keeps(&self, lambda: &[f64]) -> bool {
        match self.filter {
            SpectrumFilter::Full => true,
            SpectrumFilter::ExcludeZeroTotal => lambda.iter().sum::<f64>() > ZERO_EIGENVALUE_TOL,
            SpectrumFilter::ExcludeAxisZeros => lambda.iter().all(|l| *l > ZERO_EIGENVALUE_TOL),
        }
    }

    /// Whether a flat mode index survives the filter.
    pub fn retained(&self, flat: usize) -> bool {
        self.keeps(&self.joint_eigenvalue(flat))
    }

    pub fn retained_mask(&self) -> Vec<bool> {
        (0..self.num_modes()).map(|k| self.retained(k)).collect()
    }

    /// Retained joint eigenvalue tuples.
    pub fn joint_spectrum(&self) -> Vec<Vec<f64>> {
        (0..self.num_modes())
            .map(|k| self.joint_eigenvalue(k))
            .filter(|l| self.keeps(l))
            .collect()
    }

    /// Joint coefficients of `f`; filtered-out coefficients are zero.
    pub fn analysis(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(f.len(), self.grid.len(), "function")?;
        let mats: Vec<&DMatrix<Complex64>> = self.axes.iter().map(|a| a.analysis()).collect();
        let mut c = apply_per_axis(f, &self.node_shape(), &mats);
        self.mask_coefficients(&mut c);
        Ok(c)
    }

    /// Grid values of a coefficient array; filtered-out coefficients are ignored.
    pub fn synthesis(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(c.len(), self.num_modes(), "coefficient array")?;
        let mut c = c.to_vec();
        self.mask_coefficients(&mut c);
        let mats: Vec<&DMatrix<Complex64>> = self.axes.iter().map(|a| a.synthesis()).collect();
        Ok(apply_per_axis(&c, &self.mode_shape(), &mats))
    }

    /// Orthogonal projection onto the retained span.
    pub fn project(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.synthesis(&self.analysis(f)?)
    }

    /// Joint eigenfunction of a multi-index, sampled on the grid.
    pub fn eigenfunction(&self, index: &[usize]) -> Result<Vec<Complex64>> {
        let shape = self.mode_shape();
        if index.len() != shape.len() || index.iter().zip(&shape).any(|(k, n)| k >= n) {
            return Err(Error::Shape(format!("multi-index {index:?} outside mode box {shape:?}")));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); self.num_modes()];
        c[crate::tensor::ravel(index, &shape)] = Complex64::new(1.0, 0.0);
        let mats: Vec<&DMatrix<Complex64>> = self.axes.iter().map(|a| a.synthesis()).collect();
        Ok(apply_per_axis(&c, &shape, &mats))
    }

    /// `m(λ_k)` on every mode (zero on filtered-out modes).
    pub fn symbol_values(&self, m: &Symbol) -> Result<Vec<Complex64>> {
        if m.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "symbol in {} variables for a system of {} operators",
                m.dim(),
                self.dim()
            )));
        }
        let mut out = Vec::with_capacity(self.num_modes());
        for k in 0..self.num_modes() {
            let lambda = self.joint_eigenvalue(k);
            if !self.keeps(&lambda) {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let v = m.eval(&lambda);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Domain { tuple: lambda });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// `m(L) f = synthesis(m(λ_k) · analysis(f))`.
    pub fn apply_multiplier(&self, m: &Symbol, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let d = self.symbol_values(m)?;
        self.apply_diagonal(&d, f)
    }

    /// Applies a diagonal given directly on the mode box.
    pub fn apply_diagonal(&self, diag: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(diag.len(), self.num_modes(), "diagonal")?;
        let mut c = self.analysis(f)?;
        c.iter_mut().zip(diag).for_each(|(a, m)| *a *= m);
        self.synthesis(&c)
    }

    /// Dense matrix of a diagonal given on the mode box.
    pub fn diagonal_operator(&self, diag: &[Complex64]) -> Result<OperatorRep> {
        self.check_len(diag.len(), self.num_modes(), "diagonal")?;
        let s_mats: Vec<&DMatrix<Complex64>> = self.axes.iter().map(|a| a.synthesis()).collect();
        let a_mats: Vec<&DMatrix<Complex64>> = self.axes.iter().map(|a| a.analysis()).collect();
        let s = kron_all(&s_mats);
        let mut a = kron_all(&a_mats);
        let mask = self.retained_mask();
        for (k, mut row) in a.row_iter_mut().enumerate() {
            let scale = if mask[k] { diag[k] } else { Complex64::new(0.0, 0.0) };
            row *= scale;
        }
        OperatorRep::new(s * a, self.grid.clone())
    }

    /// Dense matrix of `m(L)`.
    pub fn multiplier_operator(&self, m: &Symbol) -> Result<OperatorRep> {
        let d = self.symbol_values(m)?;
        self.diagonal_operator(&d)
    }

    /// Projection onto the retained span as an operator.
    pub fn projection_operator(&self) -> Result<OperatorRep> {
        self.diagonal_operator(&vec![Complex64::new(1.0, 0.0); self.num_modes()])
    }

    /// First axis carrying a zero eigenvalue on a retained tuple, if any.
    pub fn atl_violation(&self) -> Option<usize> {
        (0..self.num_modes())
            .map(|k| self.joint_eigenvalue(k))
            .filter(|l| self.keeps(l))
            .find_map(|l| l.iter().position(|x| *x <= ZERO_EIGENVALUE_TOL))
    }

    /// `L^{iu} = L_1^{iu_1} ⋯ L_d^{iu_d}` on the retained span.
    pub fn imaginary_powers(&self, u: &[f64]) -> Result<OperatorRep> {
        if u.len() != self.dim() {
            return Err(Error::Shape(format!("{} exponents for {} operators", u.len(), self.dim())));
        }
        if let Some(axis) = self.atl_violation() {
            return Err(Error::Atl { axis });
        }
        self.multiplier_operator(&Symbol::imaginary_power(u.to_vec()))
    }

    /// Heat or Poisson semigroup at multi-time `t`.
    pub fn semigroup(&self, t: &[f64], kind: SemigroupKind) -> Result<OperatorRep> {
        if t.len() != self.dim() {
            return Err(Error::Shape(format!("{} times for {} operators", t.len(), self.dim())));
        }
        if let Some(x) = t.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Parameter(format!("semigroup time {x} must be positive")));
        }
        let tt = t.to_vec();
        let m = match kind {
            SemigroupKind::Heat => Symbol::heat(tt),
            SemigroupKind::Poisson => Symbol::new(self.dim(), "poisson", move |lam| {
                let s: f64 = lam.iter().zip(&tt).map(|(l, t)| t * l.sqrt()).sum();
                Complex64::new((-s).exp(), 0.0)
            })
            .with_bound(1.0),
        };
        self.multiplier_operator(&m)
    }

    fn mask_coefficients(&self, c: &mut [Complex64]) {
        if self.filter == SpectrumFilter::Full {
            return;
        }
        for (k, v) in c.iter_mut().enumerate() {
            if !self.retained(k) {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn check_len(&self, got: usize, want: usize, what: &str) -> Result<()> {
        if got == want {
            Ok(())
        } else {
            Err(Error::Shape(format!("{what} of length {got}, expected {want}")))
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Discrete cosine-type system on `n` equally weighted points: the DFT
    /// basis of the cycle graph Laplacian, eigenvalues `2 - 2cos(2πk/n)`.
    pub(crate) fn cycle_axis(n: usize) -> SpectralAxis {
        let grid = WeightedGrid::counting(n, format!("Z_{n}")).unwrap();
        let phi = DMatrix::from_fn(n, n, |x, k| {
            Complex64::from_polar(1.0 / (n as f64).sqrt(), 2.0 * std::f64::consts::PI * (k * x) as f64 / n as f64)
        });
        let eig = (0..n)
            .map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        SpectralAxis::new(eig, grid, phi).unwrap()
    }

    fn signal(n: usize) -> Vec<Complex64> {
        (0..n).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).collect()
    }

    #[test]
    fn eigenvalues_sorted_and_gram_identity() {
        let a = cycle_axis(6);
        assert!(a.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let g = a.gram();
        let id = DMatrix::<Complex64>::identity(6, 6);
        assert!((g - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn identity_symbol_round_trip() {
        let s = SpectralSystem::new(vec![cycle_axis(4), cycle_axis(5)]).unwrap();
        let f = signal(20);
        let g = s.apply_multiplier(&Symbol::constant(2, Complex64::new(1.0, 0.0)), &f).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn heat_scales_eigenfunction() {
        let s = SpectralSystem::new(vec![cycle_axis(4), cycle_axis(5)]).unwrap();
        let idx = [1, 2];
        let flat = crate::tensor::ravel(&idx, &s.mode_shape());
        let lam = s.joint_eigenvalue(flat);
        let f = s.eigenfunction(&idx).unwrap();
        let t = [0.3, 0.7];
        let g = s.apply_multiplier(&Symbol::heat(t.to_vec()), &f).unwrap();
        let scale = (-(t[0] * lam[0] + t[1] * lam[1])).exp();
        for (a, b) in f.iter().zip(&g) {
            assert!((a * scale - b).norm() < 1e-12);
        }
    }

    #[test]
    fn domain_error_names_tuple() {
        let s = SpectralSystem::new(vec![cycle_axis(4)]).unwrap();
        let m = Symbol::new(1, "1/λ", |l| Complex64::new(1.0 / l[0], 0.0));
        match s.apply_multiplier(&m, &signal(4)) {
            Err(Error::Domain { tuple }) => assert_eq!(tuple, vec![0.0]),
            other => panic!("expected domain error, got {other:?}"),
        }
        let filtered = s.with_filter(SpectrumFilter::ExcludeAxisZeros);
        assert!(filtered.apply_multiplier(&m, &signal(4)).is_ok());
    }

    #[test]
    fn ratio_symbol_in_unit_interval() {
        let s = SpectralSystem::new(vec![cycle_axis(4), cycle_axis(6)])
            .unwrap()
            .with_filter(SpectrumFilter::ExcludeZeroTotal);
        let m = Symbol::new(2, "ratio", |l| Complex64::new(l[0] / (l[0] + l[1]), 0.0));
        for v in s.symbol_values(&m).unwrap() {
            assert!(v.re >= 0.0 && v.re <= 1.0 && v.im == 0.0);
        }
    }

    #[test]
    fn imaginary_powers_need_atl() {
        let s = SpectralSystem::new(vec![cycle_axis(4), cycle_axis(4)]).unwrap();
        assert!(matches!(s.imaginary_powers(&[1.0, 1.0]), Err(Error::Atl { axis: 0 })));
        let f = s.clone().with_filter(SpectrumFilter::ExcludeAxisZeros);
        let op = f.imaginary_powers(&[1.0, -2.0]).unwrap();
        let proj = f.projection_operator().unwrap();
        let id0 = f.imaginary_powers(&[0.0, 0.0]).unwrap();
        assert!(id0.max_abs_diff(&proj) < 1e-12);
        let back = op.compose(&op.weighted_adjoint()).unwrap();
        assert!(back.max_abs_diff(&proj) < 1e-12);
        assert!(s.shifted(1.0).unwrap().imaginary_powers(&[1.0, 1.0]).is_ok());
    }

    #[test]
    fn semigroup_rejects_nonpositive_time() {
        let s = SpectralSystem::new(vec![cycle_axis(4)]).unwrap();
        assert!(s.semigroup(&[0.0], SemigroupKind::Heat).is_err());
        assert!(s.semigroup(&[-1.0], SemigroupKind::Poisson).is_err());
        let small = s.semigroup(&[1e-12], SemigroupKind::Heat).unwrap();
        assert!(small.max_abs_diff(&OperatorRep::identity(s.grid())) < 1e-10);
    }
}
