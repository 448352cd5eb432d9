//! Dense operators acting on grid values, tensor lifts, and the flat binary
//! cache format.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A square complex matrix acting on functions sampled on `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorRep {
    matrix: DMatrix<Complex64>,
    grid: WeightedGrid,
}

/// JSON sidecar written next to the binary matrix dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSidecar {
    pub rows: usize,
    pub cols: usize,
    pub grid_label: String,
}

impl OperatorRep {
    pub fn new(matrix: DMatrix<Complex64>, grid: WeightedGrid) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Shape(format!(
                "operator matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != grid.len() {
            return Err(Error::Shape(format!(
                "operator of size {} on a grid with {} nodes",
                matrix.nrows(),
                grid.len()
            )));
        }
        Ok(Self { matrix, grid })
    }

    pub fn identity(grid: &WeightedGrid) -> Self {
        Self { matrix: DMatrix::identity(grid.len(), grid.len()), grid: grid.clone() }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn grid(&self) -> &WeightedGrid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.size() {
            return Err(Error::Shape(format!(
                "function of length {} for an operator of size {}",
                f.len(),
                self.size()
            )));
        }
        let v = &self.matrix * DVector::from_column_slice(f);
        Ok(v.iter().copied().collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OperatorRep) -> Result<OperatorRep> {
        if !self.grid.same_measure(&other.grid) {
            return Err(Error::Shape("composing operators on different grids".into()));
        }
        Ok(Self { matrix: &self.matrix * &other.matrix, grid: self.grid.clone() })
    }

    /// Adjoint with respect to the weighted inner product: `W^{-1} T^* W`.
    pub fn weighted_adjoint(&self) -> OperatorRep {
        let w = self.grid.weights();
        let n = self.size();
        let m = DMatrix::from_fn(n, n, |i, j| self.matrix[(j, i)].conj() * (w[j] / w[i]));
        Self { matrix: m, grid: self.grid.clone() }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &OperatorRep) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Little-endian `f64` dump, row-major, real and imaginary parts interleaved.
    pub fn to_bytes(&self) -> Vec<u8> {
        let (r, c) = self.matrix.shape();
        let mut out = Vec::with_capacity(r * c * 16);
        for i in 0..r {
            for j in 0..c {
                let z = self.matrix[(i, j)];
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out
    }

    pub fn sidecar(&self) -> OperatorSidecar {
        OperatorSidecar {
            rows: self.matrix.nrows(),
            cols: self.matrix.ncols(),
            grid_label: self.grid.label().to_string(),
        }
    }

    /// Writes `<stem>.bin` and `<stem>.json`.
    pub fn save(&self, stem: &Path) -> Result<()> {
        std::fs::write(stem.with_extension("bin"), self.to_bytes())?;
        let json = serde_json::to_string_pretty(&self.sidecar())?;
        std::fs::write(stem.with_extension("json"), json)?;
        Ok(())
    }

    /// Reads a dump written by [`OperatorRep::save`]; the grid is supplied by
    /// the caller and must match the stored label and size.
    pub fn load(stem: &Path, grid: &WeightedGrid) -> Result<OperatorRep> {
        let side: OperatorSidecar =
            serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json"))?)?;
        if side.grid_label != grid.label() {
            return Err(Error::Shape(format!(
                "cached operator belongs to grid `{}`, not `{}`",
                side.grid_label,
                grid.label()
            )));
        }
        let bytes = std::fs::read(stem.with_extension("bin"))?;
        Self::from_bytes(&bytes, side.rows, side.cols, grid)
    }

    pub fn from_bytes(bytes: &[u8], rows: usize, cols: usize, grid: &WeightedGrid) -> Result<OperatorRep> {
        if bytes.len() != rows * cols * 16 {
            return Err(Error::Shape(format!(
                "{} bytes cannot hold a {rows}x{cols} complex matrix",
                bytes.len()
            )));
        }
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let k = (i * cols + j) * 16;
                let re = f64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(bytes[k + 8..k + 16].try_into().expect("8 bytes"));
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        OperatorRep::new(m, grid.clone())
    }
}

/// Lifts an operator on factor `axis` of a product space to the whole product,
/// acting on that variable only: `I ⊗ ⋯ ⊗ T ⊗ ⋯ ⊗ I`.
pub fn tensor_lift(op: &OperatorRep, axis: usize, factors: &[&WeightedGrid]) -> Result<OperatorRep> {
    if axis >= factors.len() {
        return Err(Error::Shape(format!(
            "axis {axis} out of range for a product of {} factors",
            factors.len()
        )));
    }
    if !op.grid().same_measure(factors[axis]) {
        return Err(Error::Shape(format!(
            "operator grid `{}` is not factor {axis} of the product",
            op.grid().label()
        )));
    }
    let before: usize = factors[..axis].iter().map(|g| g.len()).product();
    let after: usize = factors[axis + 1..].iter().map(|g| g.len()).product();
    let left = DMatrix::<Complex64>::identity(before, before);
    let right = DMatrix::<Complex64>::identity(after, after);
    let matrix = left.kronecker(op.matrix()).kronecker(&right);
    let grid = WeightedGrid::product(factors)?;
    OperatorRep::new(matrix, grid)
}
