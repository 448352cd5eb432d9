//! Multipliers and harmonic analysis on `(R^d, γ) × (Y, ζ, μ)`: Gaussian
//! factor, space of homogeneous type, dyadic tools and heat-kernel checks.

pub mod cz;
pub mod heat;
pub mod laplace;
pub mod local;
pub mod space;

pub use cz::{
    cz_decompose, dyadic_maximal, dyadic_maximal_slice, h1_atom_check, h1_atomic_upper, h1_cross_check, Ball,
    BadPart, CzDecomposition, CzExport, CzProperties, H1CrossCheck,
};
pub use heat::{
    gaussian_bounds_check, heat_maximal, heat_maximal_l1, torus_heat_kernel, torus_heat_samples,
    GaussianBoundsReport, GaussianKernelBounds, HeatKernelSamples,
};
pub use laplace::{
    joint_laplace_multiplier, joint_laplace_operator, joint_symbol_sup, laplace_type_symbol, ou_multiplier,
    ou_multiplier_operator, KappaSupport, LaplaceSymbolKappa,
};
pub use local::{kernel_split, local_region, mehler_laplace_kernel};
pub use space::{Cube, DyadicSystem, HomogeneousSpace, Metric, ProductSpace};
