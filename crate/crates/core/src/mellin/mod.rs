//! Mellin analysis of spectral symbols: log grids, the transform and its
//! inverse, symbol conditions, modulated symbols and boundary values.

pub mod boundary;
pub mod conditions;
pub mod discrete;
pub mod loggrid;
pub mod modulated;
pub mod transform;

pub use conditions::{
    finite_difference, hormander_norm, marcinkiewicz_norm, mikhlin_check, product_imaginary_power, riesz_symbol,
    symbol_derivative, ConditionOrder, GammaNorm, HormanderOptions, HormanderReport, MarcinkiewiczReport, SweepOptions,
};
pub use boundary::{boundary_symbol, critical_angle};
pub use discrete::{discrete_marcinkiewicz_check, dyadic_block, BlockSum, DiscreteReport};
pub use modulated::{
    log_t_sweep, meda_functional, modulated_mellin, modulated_mellin_sup, MedaOptions, MedaReport, ModulatedOptions,
    ModulatedSymbol,
};
pub use loggrid::{LinAxis, LogAxis, LogGridSymbol};
pub use transform::{
    mellin_inverse, mellin_transform, mellin_transform_grid, self_test, MellinInverse, MellinSamples, MellinValue,
    SelfTest,
};
