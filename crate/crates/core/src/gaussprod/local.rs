//! The local region `N_s` of the Gaussian measure and the local/global
//! splitting of kernels on `R^d × Y`.

use crate::bases::mehler_derivative;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use nalgebra::DMatrix;

/// `|x_1 − y_1| ≤ s / (1 + |x_1| + |y_1|)`.
pub fn local_region(s: f64, x1: &[f64], y1: &[f64]) -> Result<bool> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Parameter(format!("local region scale s = {s} must be positive")));
    }
    if x1.len() != y1.len() {
        return Err(Error::Shape(format!("points of dimensions {} and {}", x1.len(), y1.len())));
    }
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let diff: f64 = x1.iter().zip(y1).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok(diff <= s / (1.0 + norm(x1) + norm(y1)))
}

/// `(χ_{N_s} K, (1 − χ_{N_s}) K)` for a kernel on a product grid. Rows and
/// columns are `(i_1, i_2)` with the `R^d` index slowest; `points[i_1]` are
/// the `R^d` coordinates and `n2` the size of the second factor.
pub fn kernel_split(
    kernel: &DMatrix<f64>,
    points: &[Vec<f64>],
    n2: usize,
    s: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = points.len() * n2;
    if kernel.nrows() != n || kernel.ncols() != n {
        return Err(Error::Shape(format!("kernel is {}x{}, grid has {n} points", kernel.nrows(), kernel.ncols())));
    }
    if kernel.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("kernel has non-finite entries".into()));
    }
    let mut local = DMatrix::zeros(n, n);
    let mut global = DMatrix::zeros(n, n);
    for i in 0..points.len() {
        for j in 0..points.len() {
            let inside = local_region(s, &points[i], &points[j])?;
            for a in 0..n2 {
                for b in 0..n2 {
                    let (r, c) = (i * n2 + a, j * n2 + b);
                    if inside {
                        local[(r, c)] = kernel[(r, c)];
                    } else {
                        global[(r, c)] = kernel[(r, c)];
                    }
                }
            }
        }
    }
    Ok((local, global))
}

/// `∫_ε^{1−ε} ∂_r M_r(x_1, y_1) κ(r) dr`, the Gaussian factor of the kernel of
/// `m_κ(𝓛, A)` written in `r = e^{-t}`, with `κ` given in `r`.
pub fn mehler_laplace_kernel(kappa: &dyn Fn(f64) -> f64, eps: f64, x1: &[f64], y1: &[f64]) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Parameter(format!("ε = {eps} must lie in (0, 1/2)")));
    }
    let rule = gauss_legendre(40)?;
    let panels = 16;
    let h = (1.0 - 2.0 * eps) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let r = rule.mapped(eps + p as f64 * h, eps + (p + 1) as f64 * h);
        for (t, w) in r.nodes.iter().zip(&r.weights) {
            acc += w * kappa(*t) * mehler_derivative(*t, x1, y1)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_hermite;

    #[test]
    fn region_examples() {
        for s in [0.1, 1.0, 7.0] {
            assert!(local_region(s, &[0.0], &[0.0]).unwrap());
        }
        for (x, y) in [(0.3, 1.1), (-2.0, 4.0), (3.0, 2.6)] {
            assert_eq!(local_region(2.0, &[x], &[y]).unwrap(), local_region(2.0, &[y], &[x]).unwrap());
        }
        assert!(local_region(0.0, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn boundary_crossing() {
        // s = 2, x = 3: y > 3 solves y − 3 = 2/(4 + y), i.e. y² + y − 14 = 0
        let y_star = 0.5 * (-1.0 + 57f64.sqrt());
        let phi = |y: f64| (y - 3.0) - 2.0 / (4.0 + y);
        let (mut lo, mut hi) = (3.0, 5.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - y_star).abs() < 1e-12);
        assert!(local_region(2.0, &[3.0], &[y_star - 1e-9]).unwrap());
        assert!(!local_region(2.0, &[3.0], &[y_star + 1e-9]).unwrap());
    }

    #[test]
    fn split_reconstructs() {
        let pts: Vec<Vec<f64>> = [-2.0, -0.5, 0.0, 0.4, 3.0].iter().map(|x| vec![*x]).collect();
        let n2 = 3;
        let k = DMatrix::from_fn(15, 15, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let (l, g) = kernel_split(&k, &pts, n2, 2.0).unwrap();
        assert_eq!(&l + &g, k);
        assert!(l.iter().zip(g.iter()).all(|(a, b)| *a == 0.0 || *b == 0.0));
        for i in 0..5 {
            for j in 0..5 {
                if local_region(2.0, &pts[i], &pts[j]).unwrap() {
                    assert!((0..n2).all(|a| g[(i * n2 + a, j * n2)] == 0.0));
                }
            }
        }
        // kernel supported on the diagonal block of nearby points
        let near = DMatrix::from_fn(15, 15, |i, j| if i / n2 == j / n2 { 1.0 } else { 0.0 });
        let (_, g) = kernel_split(&near, &pts, n2, 2.0).unwrap();
        assert!(g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn global_mehler_part_is_integrable() {
        let eps = 0.1;
        let kappa = |_: f64| 1.0;
        let gh = gauss_hermite(40).unwrap();
        // Lebesgue measure in y_1 and Gaussian in x_1, restricted to the global region
        let mut total = 0.0;
        for (x, wx) in gh.nodes.iter().zip(&gh.weights) {
            let rule = crate::quadrature::composite_legendre(-12.0, 12.0, 96, 8).unwrap();
            for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
                if !local_region(2.0, &[*x], &[*y]).unwrap() {
                    total += wx * wy * mehler_laplace_kernel(&kappa, eps, &[*x], &[*y]).unwrap().abs();
                }
            }
        }
        assert!(total.is_finite() && total > 0.0 && total < 100.0, "{total}");
    }
}
