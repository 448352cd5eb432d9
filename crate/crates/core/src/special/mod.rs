//! Special functions used by the transforms and oracles.

pub mod bessel;
pub mod gamma;

pub use bessel::{bessel_j, bessel_j_normalized};
pub use gamma::{beta, gamma, gamma_complex, ln_gamma, ln_gamma_complex};
