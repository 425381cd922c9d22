//! Intrinsic volumes and the classical valuation machinery on polytopes.

mod decomposition;
mod kinematic;
mod valuation;
mod volumes;

pub use decomposition::{canonical_simplex_decomposition, cylinder_decomposition, DecompositionPiece};
pub use kinematic::{
    kinematic_integral_mc, kinematic_integral_mc_window, kinematic_target, required_window, KinematicEstimate,
};
pub use valuation::{homogeneous_components, valuation_check, BodyValuation, HomogeneousComponents, ValuationFlags};
pub use volumes::{
    elementary_symmetric, intrinsic_volumes, kappa, steiner_check, steiner_volume, IntrinsicVector, KappaTable,
    SteinerCheck,
};

use crate::error::{Error, Result};
use crate::geom::{Polytope, Vector};

/// `Σ_F ζ(ν_F)·area(F)`, the integral of ζ against the surface area
/// measure of a polytope.
pub fn facet_valuation<F>(p: &Polytope, zeta: F) -> Result<f64>
where
    F: Fn(&Vector) -> f64,
{
    let facets = p.facets().ok_or(Error::MissingFacets)?;
    Ok(facets.iter().map(|f| zeta(f.plane.normal()) * p.facet_area(f)).sum())
}
