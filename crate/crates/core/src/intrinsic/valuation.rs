use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::volumes::intrinsic_volumes;
use crate::error::{Error, Result};
use crate::geom::{section, split_by_hyperplane, Hyperplane, Polytope, Vector};

/// Properties a caller asserts for a valuation; the harness checks them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValuationFlags {
    pub translation_invariant: bool,
    pub simple: bool,
    pub continuous: bool,
}

type BodyFn = dyn Fn(&Polytope) -> Result<f64> + Send + Sync;

/// A real functional on nonempty polytopes, extended by `Z(∅) = 0`.
#[derive(Clone)]
pub struct BodyValuation {
    eval: Arc<BodyFn>,
    pub flags: ValuationFlags,
}

impl fmt::Debug for BodyValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BodyValuation").field("flags", &self.flags).finish_non_exhaustive()
    }
}

impl BodyValuation {
    pub fn new<F>(f: F, flags: ValuationFlags) -> Self
    where
        F: Fn(&Polytope) -> Result<f64> + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f), flags }
    }

    pub fn evaluate(&self, p: Option<&Polytope>) -> Result<f64> {
        match p {
            Some(p) => (self.eval)(p),
            None => Ok(0.0),
        }
    }

    /// `V_j`.
    pub fn intrinsic(j: usize) -> Self {
        let flags = ValuationFlags { translation_invariant: true, simple: false, continuous: true };
        Self::new(
            move |p| {
                let v = intrinsic_volumes(p)?;
                Ok(if j < v.values.len() { v.values[j] } else { 0.0 })
            },
            flags,
        )
    }

    pub fn volume() -> Self {
        let flags = ValuationFlags { translation_invariant: true, simple: true, continuous: true };
        Self::new(|p| p.volume(), flags)
    }

    /// `2V_1`, the boundary length for polygons.
    pub fn perimeter() -> Self {
        let v1 = Self::intrinsic(1);
        let flags = v1.flags;
        Self::new(move |p| Ok(2.0 * v1.evaluate(Some(p))?), flags)
    }

    /// `Σ_j c_j V_j`.
    pub fn intrinsic_combination(coeffs: Vec<f64>) -> Self {
        let flags = ValuationFlags { translation_invariant: true, simple: false, continuous: true };
        Self::new(
            move |p| {
                let v = intrinsic_volumes(p)?;
                Ok(coeffs.iter().zip(&v.values).map(|(c, x)| c * x).sum())
            },
            flags,
        )
    }
}

/// `|Z(P⁺) + Z(P⁻) − Z(P) − Z(P ∩ h)|` for the split of `P` by `h`.
pub fn valuation_check(z: &BodyValuation, p: &Polytope, h: &Hyperplane) -> Result<f64> {
    let (plus, minus) = split_by_hyperplane(p, h)?;
    let cut = section(p, h)?;
    let lhs = z.evaluate(plus.as_ref())? + z.evaluate(minus.as_ref())?;
    let rhs = z.evaluate(Some(p))? + z.evaluate(cut.as_ref())?;
    Ok((lhs - rhs).abs())
}

/// `Z_0, …, Z_n` with `Z(λP) = Σ_j Z_j(P) λʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousComponents {
    pub components: Vec<f64>,
}

impl HomogeneousComponents {
    pub fn reconstruct(&self, lambda: f64) -> f64 {
        self.components.iter().rev().fold(0.0, |acc, c| acc * lambda + c)
    }
}

/// Largest dimension for which the Vandermonde solve is trusted.
const MAX_VANDERMONDE: usize = 8;

/// Splits a translation invariant valuation into homogeneous parts.
///
/// `Z_0 = Z({0})`; the remaining parts solve the Vandermonde system
/// `Z(mP) − Z_0 = Σ_{j=1}^n Z_j m^j` for `m = 1, …, n`.
pub fn homogeneous_components(z: &BodyValuation, p: &Polytope) -> Result<HomogeneousComponents> {
    let n = p.dim();
    if n > MAX_VANDERMONDE {
        return Err(Error::SingularSystem(format!("Vandermonde system of order {n} is too ill-conditioned")));
    }
    let z0 = z.evaluate(Some(&Polytope::point(&Vector::zeros(n))))?;
    let a = DMatrix::from_fn(n, n, |i, j| ((i + 1) as f64).powi(j as i32 + 1));
    let mut rhs = DVector::zeros(n);
    for m in 1..=n {
        rhs[m - 1] = z.evaluate(Some(&p.dilate(m as f64)?))? - z0;
    }
    let sol = a.lu().solve(&rhs).ok_or_else(|| Error::SingularSystem("Vandermonde matrix".into()))?;
    let mut components = vec![z0];
    components.extend(sol.iter());
    Ok(HomogeneousComponents { components })
}
