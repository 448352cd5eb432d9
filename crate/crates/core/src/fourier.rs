//! Multi-dimensional DFT on the lattice `Z_{K_1} × ⋯ × Z_{K_d}`.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use crate::tensor::unravel;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Periodic lattice with counting measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    sizes: Vec<usize>,
}

impl Lattice {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Parameter(format!("lattice sizes {sizes:?} must be positive")));
        }
        Ok(Self { sizes })
    }

    /// `Z_K^d`.
    pub fn cube(k: usize, d: usize) -> Result<Self> {
        Self::new(vec![k; d])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn grid(&self) -> Result<WeightedGrid> {
        let axes: Vec<WeightedGrid> = self
            .sizes
            .iter()
            .map(|k| WeightedGrid::counting(*k, format!("Z_{k}")))
            .collect::<Result<_>>()?;
        let refs: Vec<&WeightedGrid> = axes.iter().collect();
        WeightedGrid::product(&refs)
    }

    /// Signed frequency of DFT index `k` on an axis of size `n`: `k` or `k − n`.
    pub fn signed(k: usize, n: usize) -> i64 {
        if 2 * k <= n {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Signed frequency vector of a flat index.
    pub fn frequency(&self, flat: usize) -> Vec<i64> {
        unravel(flat, &self.sizes).into_iter().zip(&self.sizes).map(|(k, n)| Self::signed(k, *n)).collect()
    }

    fn transform(&self, data: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
        if data.len() != self.len() {
            return Err(Error::Shape(format!("{} values on a lattice of {} points", data.len(), self.len())));
        }
        let mut out = data.to_vec();
        let mut planner = FftPlanner::new();
        for axis in 0..self.dim() {
            let n = self.sizes[axis];
            let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
            let inner: usize = self.sizes[axis + 1..].iter().product();
            let outer: usize = self.sizes[..axis].iter().product();
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for o in 0..outer {
                for j in 0..inner {
                    for (k, b) in buf.iter_mut().enumerate() {
                        *b = out[(o * n + k) * inner + j];
                    }
                    fft.process(&mut buf);
                    for (k, b) in buf.iter().enumerate() {
                        out[(o * n + k) * inner + j] = *b;
                    }
                }
            }
        }
        if inverse {
            let s = 1.0 / self.len() as f64;
            out.iter_mut().for_each(|z| *z *= s);
        }
        Ok(out)
    }

    /// `f̂(k) = Σ_x f(x) e^{-2πi⟨k, x/K⟩}`.
    pub fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.transform(f, false)
    }

    /// Inverse of [`Lattice::forward`].
    pub fn inverse(&self, fhat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.transform(fhat, true)
    }

    /// Fourier multiplier with symbol given on signed frequencies.
    pub fn multiplier(&self, f: &[Complex64], symbol: impl Fn(&[i64]) -> Complex64) -> Result<Vec<Complex64>> {
        let mut fhat = self.forward(f)?;
        for (flat, z) in fhat.iter_mut().enumerate() {
            *z *= symbol(&self.frequency(flat));
        }
        self.inverse(&fhat)
    }

    /// Values of a symbol on all frequencies, in DFT order.
    pub fn symbol_table(&self, symbol: impl Fn(&[i64]) -> Complex64) -> Vec<Complex64> {
        (0..self.len()).map(|k| symbol(&self.frequency(k))).collect()
    }

    /// Dense matrix of the multiplier on the lattice grid.
    pub fn multiplier_matrix(&self, table: &[Complex64]) -> Result<nalgebra::DMatrix<Complex64>> {
        let n = self.len();
        if table.len() != n {
            return Err(Error::Shape("symbol table does not match the lattice".into()));
        }
        // convolution kernel k(x) = inverse DFT of the table; T[x, y] = k(x − y)
        let kernel = self.inverse(table)?;
        let diff = |x: usize, y: usize| -> usize {
            let a = unravel(x, &self.sizes);
            let b = unravel(y, &self.sizes);
            let idx: Vec<usize> = a.iter().zip(&b).zip(&self.sizes).map(|((p, q), k)| (p + k - q) % k).collect();
            crate::tensor::ravel(&idx, &self.sizes)
        };
        Ok(nalgebra::DMatrix::from_fn(n, n, |x, y| kernel[diff(x, y)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn round_trip_and_plane_wave() {
        let lat = Lattice::new(vec![4, 6]).unwrap();
        let f: Vec<Complex64> = (0..24).map(|k| Complex64::new(k as f64, (k * k % 7) as f64)).collect();
        let back = lat.inverse(&lat.forward(&f).unwrap()).unwrap();
        assert!(back.iter().zip(&f).all(|(a, b)| (a - b).norm() < 1e-12));
        // e^{2πi(x_1/4 + 2x_2/6)} concentrates on frequency (1, 2)
        let wave: Vec<Complex64> = (0..24)
            .map(|k| {
                let x = unravel(k, &[4, 6]);
                Complex64::from_polar(1.0, 2.0 * PI * (x[0] as f64 / 4.0 + 2.0 * x[1] as f64 / 6.0))
            })
            .collect();
        let fhat = lat.forward(&wave).unwrap();
        let peak = crate::tensor::ravel(&[1, 2], &[4, 6]);
        assert!((fhat[peak] - 24.0).norm() < 1e-10);
        assert!(fhat.iter().enumerate().filter(|(k, _)| *k != peak).all(|(_, z)| z.norm() < 1e-10));
    }

    #[test]
    fn signed_frequencies() {
        assert_eq!((0..8).map(|k| Lattice::signed(k, 8)).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert!(Lattice::new(vec![]).is_err());
    }

    #[test]
    fn matrix_matches_fft_multiplier() {
        let lat = Lattice::cube(4, 2).unwrap();
        let sym = |k: &[i64]| Complex64::new(k[0] as f64, 0.5 * k[1] as f64);
        let m = lat.multiplier_matrix(&lat.symbol_table(sym)).unwrap();
        let f: Vec<Complex64> = (0..16).map(|k| Complex64::new((k as f64).sin(), (k as f64).cos())).collect();
        let via_fft = lat.multiplier(&f, sym).unwrap();
        let via_mat = &m * nalgebra::DVector::from_vec(f);
        assert!(via_fft.iter().zip(via_mat.iter()).all(|(a, b)| (a - b).norm() < 1e-12));
    }
}
