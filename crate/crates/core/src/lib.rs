//! Valuations on convex polytopes and on convex functions.

// `!(x > 0.0)` also rejects NaN; index loops follow the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod affine;
pub mod dehn;
pub mod error;
pub mod fconv;
pub mod fval;
pub mod geom;
pub mod intrinsic;

pub use error::{Error, Result};
