//! Bessel functions of the first kind `J_ν(z)` for real order `ν > -1` and
//! real argument `z ≥ 0`.
//!
//! Power series on `z ≤ 12`, Hankel asymptotic expansion beyond. The
//! normalized form `z^{-ν} J_ν(z)` is what the Hankel and Dunkl kernels use;
//! it stays finite at the origin for every admissible order.

use super::gamma::gamma;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Argument below which the power series is used.
pub const SERIES_LIMIT: f64 = 12.0;

fn check(nu: f64, z: f64) -> Result<()> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Parameter(format!("Bessel order {nu} must exceed -1")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Numerical(format!(
            "Bessel argument {z} outside [0, inf) or not finite"
        )));
    }
    Ok(())
}

/// `z^{-ν} J_ν(z)` by its power series, accurate for moderate `z`.
fn normalized_series(nu: f64, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0 / gamma(nu + 1.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 2.0 {
            break;
        }
        if k > 400.0 {
            break;
        }
    }
    sum * 2f64.powf(-nu)
}

/// Hankel asymptotic expansion of `J_ν(z)` for large `z`.
fn asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k / z^k including the sign pattern
    let mut prev = f64::INFINITY;
    let mut k = 0usize;
    loop {
        k += 1;
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        if a == 0.0 || a.abs() > prev {
            break;
        }
        prev = a.abs();
        // P collects even k with sign (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 || k > 200 {
            break;
        }
    }
    let omega = z - 0.5 * nu * PI - 0.25 * PI;
    (2.0 / (PI * z)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// `J_ν(z)`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            return Err(Error::Numerical(format!(
                "J_{nu}(0) is infinite for negative order"
            )));
        });
    }
    let v = if z <= SERIES_LIMIT {
        normalized_series(nu, z) * z.powf(nu)
    } else {
        asymptotic(nu, z)
    };
    finite(v, nu, z)
}

/// `z^{-ν} J_ν(z)`, extended continuously to `z = 0` by `2^{-ν}/Γ(ν+1)`.
pub fn bessel_j_normalized(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    let v = if z <= SERIES_LIMIT {
        normalized_series(nu, z)
    } else {
        asymptotic(nu, z) * z.powf(-nu)
    };
    finite(v, nu, z)
}

fn finite(v: f64, nu: f64, z: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!(
            "Bessel evaluation overflow at order {nu}, argument {z}"
        )))
    }
}
