use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("operation undefined on the empty body")]
    EmptyBody,
    #[error("not a proper rotation: {0}")]
    InvalidRotation(String),
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("negative scale factor {0}")]
    NegativeScale(f64),
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),
    #[error("polytope has no facet representation")]
    MissingFacets,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("precision of {digits} digits is too low for relation height {height} in dimension {dim}")]
    PrecisionTooLow { digits: u32, height: u64, dim: usize },
    #[error("tangent lines at the two parameters are parallel")]
    ParallelTangents,
    #[error("h + h'' = {value} <= 0 at theta = {theta}")]
    NonConvexSupport { theta: f64, value: f64 },
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("origin lies outside the body")]
    OriginOutside,
    #[error("translation window half-width {given} is smaller than the required {required}")]
    WindowTooSmall { given: f64, required: f64 },
    #[error("input is not convex (involution residual {residual})")]
    NonConvexInput { residual: f64 },
    #[error("function is not coercive along direction {direction:?}")]
    NotCoercive { direction: Vec<f64> },
    #[error("function is not super-coercive: unbounded cell with slope {slope:?}")]
    NotSuperCoercive { slope: Vec<f64> },
    #[error("pointwise minimum is not convex (residual {residual})")]
    NonConvexMin { residual: f64 },
    #[error("need at least {needed} distinct nodes, got {got}")]
    InsufficientNodes { needed: usize, got: usize },
    #[error("linear system is numerically singular: {0}")]
    SingularSystem(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
