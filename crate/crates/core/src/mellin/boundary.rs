//! Boundary values of holomorphic symbols on rotated rays, and the critical
//! angle `φ*_p`.

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use num_complex::Complex64;

/// `λ ↦ m(e^{iε_1φ_1}λ_1, …, e^{iε_dφ_d}λ_d)` for a symbol holomorphic on a
/// polysector strictly containing the rays.
pub fn boundary_symbol(m: &Symbol, eps: &[i8], phi: &[f64]) -> Result<Symbol> {
    let d = m.dim();
    if eps.len() != d || phi.len() != d {
        return Err(Error::Shape(format!("sign and angle vectors must have {d} components")));
    }
    if eps.iter().any(|e| *e != 1 && *e != -1) {
        return Err(Error::Parameter(format!("signs {eps:?} must be ±1")));
    }
    let sector = m
        .sector()
        .ok_or_else(|| Error::Parameter(format!("`{}` has no holomorphic extension", m.name())))?
        .to_vec();
    for r in 0..d {
        if !(phi[r] >= 0.0 && phi[r] < sector[r]) {
            return Err(Error::Parameter(format!(
                "angle φ_{r} = {} outside [0, {}) of the holomorphy sector",
                phi[r], sector[r]
            )));
        }
    }
    if phi.iter().all(|p| *p == 0.0) {
        return Ok(m.clone());
    }
    let rot: Vec<Complex64> = eps.iter().zip(phi).map(|(e, p)| Complex64::from_polar(1.0, *e as f64 * p)).collect();
    let (me, mh) = (m.clone(), m.clone());
    let (re, rh) = (rot.clone(), rot);
    let s = Symbol::new(d, format!("{}∘rot(ε={eps:?}, φ={phi:?})", m.name()), move |lam| {
        let z: Vec<Complex64> = lam.iter().zip(&re).map(|(l, w)| w * l).collect();
        me.eval_complex(&z).expect("extension present")
    });
    let s = match m.bound() {
        Some(b) => s.with_bound(b),
        None => s,
    };
    let angles: Vec<f64> = sector.iter().zip(phi).map(|(a, p)| a - p).collect();
    s.with_holomorphic(angles, move |z| {
        let w: Vec<Complex64> = z.iter().zip(&rh).map(|(zr, wr)| zr * wr).collect();
        mh.eval_complex(&w).expect("extension present")
    })
}

/// `φ*_p = arcsin|2/p − 1|`.
pub fn critical_angle(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("critical angle needs finite p > 1, got {p}")));
    }
    Ok((2.0 / p - 1.0).abs().asin())
}
