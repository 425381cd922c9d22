//! Convex functions in two dual forms: polyhedral functions on a cell
//! complex (possibly `+∞` outside a domain) and finite maxima of affine
//! functions, with Legendre conjugation between them.

mod conjugate;
mod diag;
mod envelope;
mod max_affine;
mod polyhedral;

pub use conjugate::{biconjugate, conjugate, conjugate_max_affine, inf_conv, max, min, split_pair};
pub use diag::{epi_convergence_diag, LevelDiag, MIN_LEVEL_GAP};
pub use max_affine::MaxAffineFunc;
pub use polyhedral::{Cell, CellShape, CoercivityWitness, Domain, Halfspace, PolyhedralFunc, CONVEXITY_EPS};
