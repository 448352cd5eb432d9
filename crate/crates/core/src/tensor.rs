//! Axis-wise linear maps on row-major multi-dimensional arrays.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Applies `mat` (rows = new axis length, columns = `shape[axis]`) along one
/// axis of a row-major array. Returns the new data; the new shape is `shape`
/// with `shape[axis]` replaced by `mat.nrows()`.
pub fn apply_along_axis(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    mat: &DMatrix<Complex64>,
) -> Vec<Complex64> {
    let n = shape[axis];
    debug_assert_eq!(mat.ncols(), n);
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    let m = mat.nrows();
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * m * inner];
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        for j in 0..inner {
            for (k, c) in column.iter_mut().enumerate() {
                *c = data[(o * n + k) * inner + j];
            }
            for i in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in column.iter().enumerate() {
                    acc += mat[(i, k)] * c;
                }
                out[(o * m + i) * inner + j] = acc;
            }
        }
    }
    out
}

/// Applies one matrix per axis, in order.
pub fn apply_per_axis(data: &[Complex64], shape: &[usize], mats: &[&DMatrix<Complex64>]) -> Vec<Complex64> {
    let mut cur = data.to_vec();
    let mut cur_shape = shape.to_vec();
    for (axis, mat) in mats.iter().enumerate() {
        cur = apply_along_axis(&cur, &cur_shape, axis, mat);
        cur_shape[axis] = mat.nrows();
    }
    cur
}

/// Kronecker product of a list of matrices (first factor slowest).
pub fn kron_all(mats: &[&DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc = acc.kronecker(m);
    }
    acc
}

/// Multi-index of a flat row-major position.
pub fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for r in (0..shape.len()).rev() {
        idx[r] = flat % shape[r];
        flat /= shape[r];
    }
    idx
}

/// Flat row-major position of a multi-index.
pub fn ravel(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (i, n)| acc * n + i)
}
