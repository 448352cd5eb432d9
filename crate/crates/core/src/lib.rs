pub mod bases;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod gaussprod;
pub mod grid;
pub mod handun;
pub mod mellin;
pub mod norms;
pub mod operator;
pub mod quadrature;
pub mod riesz;
pub mod special;
pub mod spectral;
pub mod squarefn;
pub mod symbol;
pub mod tensor;

pub use error::{Error, Result};
pub use grid::WeightedGrid;
pub use norms::{lp_operator_norm, NormMode, PowerOptions, WeightedOperator};
pub use operator::{tensor_lift, OperatorRep};
pub use spectral::{SemigroupKind, SpectralAxis, SpectralSystem, SpectrumFilter};
pub use symbol::{GrowthProfile, Symbol};
