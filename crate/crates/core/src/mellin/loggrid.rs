//! Log-uniform sampling grids for symbols and uniform grids for the Mellin
//! variable.

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::tensor::unravel;
use num_complex::Complex64;
use std::path::Path;

/// `count` points `s_j = ln(lo) + j h` on `[ln lo, ln hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAxis {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl LogAxis {
    pub fn new(count: usize, lo: f64, hi: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::Parameter(format!("log grid needs at least 2 points, got {count}")));
        }
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Parameter(format!("log grid bounds [{lo}, {hi}] must satisfy 0 < lo < hi")));
        }
        Ok(Self { count, lo, hi })
    }

    /// `[1e-6, 1e6]` with 801 points.
    pub fn standard() -> Self {
        Self { count: 801, lo: 1e-6, hi: 1e6 }
    }

    pub fn step(&self) -> f64 {
        (self.hi.ln() - self.lo.ln()) / (self.count - 1) as f64
    }

    pub fn s(&self, j: usize) -> f64 {
        self.lo.ln() + j as f64 * self.step()
    }

    pub fn s_values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.s(j)).collect()
    }

    pub fn lambda_values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.s(j).exp()).collect()
    }

    /// Trapezoid weights in `s` (equivalently for `dλ/λ`).
    pub fn weights(&self) -> Vec<f64> {
        trapezoid(self.count, self.step())
    }
}

/// `count` equally spaced points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinAxis {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl LinAxis {
    pub fn new(count: usize, lo: f64, hi: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::Parameter(format!("grid needs at least 2 points, got {count}")));
        }
        if !(hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::Parameter(format!("grid bounds [{lo}, {hi}] are not an interval")));
        }
        Ok(Self { count, lo, hi })
    }

    /// `u ∈ [-40, 40]` with 801 points.
    pub fn standard() -> Self {
        Self { count: 801, lo: -40.0, hi: 40.0 }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.lo + j as f64 * self.step()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        trapezoid(self.count, self.step())
    }
}

pub(crate) fn trapezoid(count: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; count];
    w[0] = 0.5 * h;
    w[count - 1] = 0.5 * h;
    w
}

/// Samples of a symbol on a product of log axes, row-major (first axis slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct LogGridSymbol {
    axes: Vec<LogAxis>,
    values: Vec<Complex64>,
}

impl LogGridSymbol {
    pub fn from_values(axes: Vec<LogAxis>, values: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Parameter("empty grid".into()));
        }
        let n: usize = axes.iter().map(|a| a.count).product();
        if values.len() != n {
            return Err(Error::Shape(format!("{} samples for a grid of {n} points", values.len())));
        }
        Ok(Self { axes, values })
    }

    /// Samples a function of the log variables `s = ln λ`.
    pub fn from_log_fn(axes: Vec<LogAxis>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Parameter("empty grid".into()));
        }
        let shape: Vec<usize> = axes.iter().map(|a| a.count).collect();
        let n: usize = shape.iter().product();
        let mut s = vec![0.0; axes.len()];
        let values = (0..n)
            .map(|flat| {
                for (r, k) in unravel(flat, &shape).into_iter().enumerate() {
                    s[r] = axes[r].s(k);
                }
                f(&s)
            })
            .collect();
        Ok(Self { axes, values })
    }

    /// Samples a symbol at the grid points `λ = e^s`.
    pub fn sample(m: &Symbol, axes: Vec<LogAxis>) -> Result<Self> {
        if m.dim() != axes.len() {
            return Err(Error::Shape(format!("symbol in {} variables on a {}-axis grid", m.dim(), axes.len())));
        }
        let out = Self::from_log_fn(axes, |s| {
            let lam: Vec<f64> = s.iter().map(|x| x.exp()).collect();
            m.eval(&lam)
        })?;
        if let Some(v) = out.values.iter().find(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical(format!("symbol `{}` produced the non-finite sample {v}", m.name())));
        }
        Ok(out)
    }

    /// Reads rows `λ_1, …, λ_d, re, im` in row-major grid order and checks
    /// that the λ columns lie on the declared grid.
    pub fn from_csv(path: &Path, axes: Vec<LogAxis>) -> Result<Self> {
        let d = axes.len();
        let shape: Vec<usize> = axes.iter().map(|a| a.count).collect();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
        let mut values = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec?;
            if rec.len() != d + 2 {
                return Err(Error::Shape(format!("row {row} has {} columns, expected {}", rec.len(), d + 2)));
            }
            let nums: Vec<f64> = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parameter(format!("row {row}: {e}")))?;
            if row >= shape.iter().product::<usize>() {
                return Err(Error::Shape("more rows than grid points".into()));
            }
            let idx = unravel(row, &shape);
            for r in 0..d {
                let want = axes[r].s(idx[r]).exp();
                if (nums[r] - want).abs() > 1e-9 * want {
                    return Err(Error::Parameter(format!(
                        "row {row}: λ_{} = {} is off the declared grid (expected {want})",
                        r + 1,
                        nums[r]
                    )));
                }
            }
            values.push(Complex64::new(nums[d], nums[d + 1]));
        }
        Self::from_values(axes, values)
    }

    pub fn axes(&self) -> &[LogAxis] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    /// Largest modulus on the boundary of the grid box divided by the peak.
    pub fn boundary_ratio(&self) -> f64 {
        boundary_ratio(&self.values, &self.shape())
    }

    /// `∫ |m|² dλ/λ` by the trapezoid rule.
    pub fn l2_squared(&self) -> f64 {
        let w: Vec<Vec<f64>> = self.axes.iter().map(|a| a.weights()).collect();
        weighted_sum(&self.values, &self.shape(), &w, |z| z.norm_sqr())
    }
}

pub(crate) fn boundary_ratio(values: &[Complex64], shape: &[usize]) -> f64 {
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let mut edge = 0.0f64;
    for (flat, v) in values.iter().enumerate() {
        let idx = unravel(flat, shape);
        if idx.iter().zip(shape).any(|(k, n)| *k == 0 || *k == n - 1) {
            edge = edge.max(v.norm());
        }
    }
    edge / peak
}

pub(crate) fn weighted_sum(values: &[Complex64], shape: &[usize], w: &[Vec<f64>], f: impl Fn(&Complex64) -> f64) -> f64 {
    values
        .iter()
        .enumerate()
        .map(|(flat, v)| {
            let idx = unravel(flat, shape);
            let wt: f64 = idx.iter().zip(w).map(|(k, wr)| wr[*k]).product();
            wt * f(v)
        })
        .sum()
}

/// Marginal profile of `|values|` along one axis (integrated against the
/// other axes' weights).
pub(crate) fn marginal(values: &[Complex64], shape: &[usize], w: &[Vec<f64>], axis: usize) -> Vec<f64> {
    let mut out = vec![0.0; shape[axis]];
    for (flat, v) in values.iter().enumerate() {
        let idx = unravel(flat, shape);
        let wt: f64 = idx
            .iter()
            .zip(w)
            .enumerate()
            .filter(|(r, _)| *r != axis)
            .map(|(_, (k, wr))| wr[*k])
            .product();
        out[idx[axis]] += wt * v.norm();
    }
    out
}

/// Estimate of `∫` of a decaying profile beyond both ends of its grid, from
/// an exponential fit (power law in `λ` when `x = ln λ`) over the last
/// `window` of the variable at each end. Infinite when the fit does not decay.
pub(crate) fn tail_estimate(x: &[f64], g: &[f64], window: f64) -> f64 {
    let n = x.len();
    let fit = |idx: Vec<usize>| -> Option<f64> {
        let pts: Vec<(f64, f64)> = idx.iter().filter(|&&i| g[i] > 0.0).map(|&i| (x[i], g[i].ln())).collect();
        if pts.len() < 2 {
            return None;
        }
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        Some(sxy / sxx)
    };
    let mut total = 0.0;
    let hi_idx: Vec<usize> = (0..n).filter(|&i| x[i] >= x[n - 1] - window).collect();
    let lo_idx: Vec<usize> = (0..n).filter(|&i| x[i] <= x[0] + window).collect();
    if g[n - 1] > 0.0 {
        match fit(hi_idx) {
            Some(a) if a < 0.0 => total += g[n - 1] / -a,
            _ => return f64::INFINITY,
        }
    }
    if g[0] > 0.0 {
        match fit(lo_idx) {
            Some(a) if a > 0.0 => total += g[0] / a,
            _ => return f64::INFINITY,
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_validate() {
        assert!(LogAxis::new(1, 1.0, 2.0).is_err());
        assert!(LogAxis::new(3, 0.0, 2.0).is_err());
        assert!(LinAxis::new(3, 1.0, 1.0).is_err());
        let a = LogAxis::standard();
        assert!((a.s(400)).abs() < 1e-12);
        assert!((a.s(800) - 1e6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn tail_of_exponential_profile() {
        let x: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let g: Vec<f64> = x.iter().map(|t| (-2.0 * t).exp()).collect();
        // only the upper tail is nonzero-decaying here; the lower end grows into the grid
        let t = tail_estimate(&x, &g, 2.0);
        assert!(t.is_infinite());
        let g2: Vec<f64> = x.iter().map(|t| (-2.0 * (t - 5.0).abs()).exp()).collect();
        let t2 = tail_estimate(&x, &g2, 2.0);
        assert!((t2 - (-10.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn csv_round_trip() {
        let axis = LogAxis::new(5, 0.1, 10.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let mut w = csv::Writer::from_path(&path).unwrap();
        w.write_record(["lambda1", "re", "im"]).unwrap();
        for l in axis.lambda_values() {
            w.write_record([format!("{l:.17e}"), format!("{}", l.sin()), "0.5".to_string()]).unwrap();
        }
        w.flush().unwrap();
        let m = LogGridSymbol::from_csv(&path, vec![axis]).unwrap();
        assert_eq!(m.values().len(), 5);
        assert!((m.values()[2].re - 1f64.sin()).abs() < 1e-12);
        let bad = LogGridSymbol::from_csv(&path, vec![LogAxis::new(5, 0.2, 10.0).unwrap()]);
        assert!(bad.is_err());
    }
}
