//! Valuations on convex functions: exponential valuations, gradient
//! valuations and their Monge–Ampère duals, epi-homogeneous
//! decomposition and the functional Steiner formula.

mod density;
mod measure;
mod quadrature;
mod steiner;
mod valuation;

pub use density::{AtomicMeasure, DensityFunc};
pub use measure::monge_ampere;
pub use quadrature::gauss_legendre;
pub use steiner::{epi_homog_components, functional_intrinsic, EpiComponents, FunctionalIntrinsic, SteinerInput};
pub use valuation::{
    exp_integral, exp_min, function_valuation_check, grad_valuation, vertical_shift_check, FuncFlags, FuncValuation,
};
