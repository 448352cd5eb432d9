//! Hankel and Dunkl transforms on weighted half-line and line grids.

pub mod dunkl;
pub mod grid;
pub mod hankel;
mod product;
pub mod sobolev;

pub use dunkl::{
    axis_constant, dunkl_convolve, dunkl_dilate, dunkl_inverse, dunkl_kernel, dunkl_multiplier, dunkl_transform,
    dunkl_transform_split, dunkl_translate, epsilon_decompose, eps_variant, maximal_mp, reflect, riesz_dunkl,
    riesz_symbol, AxisTranslation, Dunkl, DunklConfig, DunklMultiplierOp, EpsComponent,
};
pub use grid::{HalfLineGrid, LineGrid};
pub use hankel::{
    gaussian_constant, hankel_convolve, hankel_dilate, hankel_kernel, hankel_multiplier, hankel_transform,
    hankel_transform_at, hankel_translate, hankel_translate_direct, translation_mass, Hankel, HankelCapabilities,
    HankelConfig,
};
pub use product::b_alpha;
pub use sobolev::{local_sobolev_sup, sobolev_norm, LocalSobolevReport, SobolevOptions, SobolevOrder, SobolevReport};
