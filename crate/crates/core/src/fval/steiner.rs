use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::density::DensityFunc;
use super::quadrature::integrate;
use super::valuation::FuncValuation;
use crate::error::{Error, Result};
use crate::fconv::PolyhedralFunc;
use crate::geom::Polytope;
use crate::intrinsic::kappa;

/// Decomposition of `Z(u)` into epi-homogeneous parts.
#[derive(Debug, Clone, PartialEq)]
pub struct EpiComponents {
    /// `Z_0(u), …, Z_n(u)`.
    pub components: Vec<f64>,
    /// `Z(j◻u)` for `j = 0, …, n`.
    pub values: Vec<f64>,
    /// `|Σ_i Z_i (n+1)^i − Z((n+1)◻u)|`.
    pub reconstruction_residual: f64,
    /// Whether the reconstruction residual is within `1e−6` (relative),
    /// i.e. `λ ↦ Z(λ◻u)` looks polynomial of degree `n`.
    pub polynomial: bool,
}

/// Exact inverse of the Vandermonde matrix `V_{jk} = j^k`, `j, k = 0..=n`.
fn inverse_vandermonde(n: usize) -> Vec<Vec<f64>> {
    let size = n + 1;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a: Vec<Vec<BigRational>> = (0..size)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..size).map(|k| int((j as i64).pow(k as u32))).collect();
            row.extend((0..size).map(|k| if k == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero()).expect("Vandermonde is invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..size {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * size {
                    let sub = &f * &a[col][k];
                    a[r][k] = &a[r][k] - sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[size..].iter().map(|x| x.to_f64().expect("finite rational")).collect()).collect()
}

/// `Z_i(u) = Σ_j α_{ij} Z(j◻u)` with `α` the inverse Vandermonde matrix on
/// the nodes `0, …, n`.
pub fn epi_homog_components(z: &FuncValuation, u: &PolyhedralFunc) -> Result<EpiComponents> {
    let n = u.dim();
    let values = (0..=n).map(|j| z.evaluate(Some(&u.epi_scale(j as f64)?))).collect::<Result<Vec<f64>>>()?;
    let inv = inverse_vandermonde(n);
    let components: Vec<f64> = inv.iter().map(|row| row.iter().zip(&values).map(|(a, v)| a * v).sum()).collect();
    let lambda = (n + 1) as f64;
    let predicted: f64 = components.iter().enumerate().map(|(i, c)| c * lambda.powi(i as i32)).sum();
    let actual = z.evaluate(Some(&u.epi_scale(lambda)?))?;
    let reconstruction_residual = (predicted - actual).abs();
    let polynomial = reconstruction_residual <= 1e-6 * actual.abs().max(1.0);
    Ok(EpiComponents { components, values, reconstruction_residual, polynomial })
}

/// Functions for which `Z_{n,α}(u □ ind_{rB})` has a closed route.
#[derive(Debug, Clone, PartialEq)]
pub enum SteinerInput {
    Indicator(Polytope),
    /// `u(x) = c|x|²/2` on ℝⁿ with `c > 0`.
    RadialQuadratic {
        dim: usize,
        c: f64,
    },
}

impl SteinerInput {
    pub fn dim(&self) -> usize {
        match self {
            SteinerInput::Indicator(k) => k.dim(),
            SteinerInput::RadialQuadratic { dim, .. } => *dim,
        }
    }
}

/// Result of the functional Steiner fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalIntrinsic {
    /// `Z_{0,α}(u), …, Z_{n,α}(u)`.
    pub components: Vec<f64>,
    /// Coefficients of `r⁰, …, rⁿ` in the fitted polynomial.
    pub coefficients: Vec<f64>,
    /// `Z_{n,α}(u □ ind_{rB})` at each node.
    pub values: Vec<f64>,
    /// Largest absolute misfit at the nodes.
    pub residual: f64,
}

/// `V_n(K + rB)` summed over the normal cones of the faces of `K`.
fn parallel_volume(k: &Polytope, r: f64) -> Result<f64> {
    match (k.dim(), k.affine_dim()) {
        (1, _) => {
            let len = k.vertices().last().expect("nonempty")[0] - k.vertices()[0][0];
            Ok(len + 2.0 * r)
        }
        (2, 2) => Ok(k.volume()? + r * k.surface_area()? + PI * r * r),
        (2, 1) => {
            let len = (k.vertices().last().expect("nonempty") - &k.vertices()[0]).norm();
            Ok(2.0 * len * r + PI * r * r)
        }
        (2, 0) => Ok(PI * r * r),
        (3, 3) => {
            let facets = k.facets().ok_or(Error::MissingFacets)?;
            let wedges: f64 = k
                .edges()?
                .iter()
                .map(|e| {
                    let len = (&k.vertices()[e.a] - &k.vertices()[e.b]).norm();
                    let turn = facets[e.facets[0]]
                        .plane
                        .normal()
                        .dot(facets[e.facets[1]].plane.normal())
                        .clamp(-1.0, 1.0)
                        .acos();
                    0.5 * len * r * r * turn
                })
                .sum();
            Ok(k.volume()? + r * k.surface_area()? + wedges + 4.0 * PI * r.powi(3) / 3.0)
        }
        (3, 0) => Ok(4.0 * PI * r.powi(3) / 3.0),
        (n, d) => Err(Error::Unsupported(format!("parallel volume of a {d}-dimensional body in ℝ^{n}"))),
    }
}

/// `Z_{n,α}(u □ ind_{rB}) = ∫ α(|∇(u □ ind_{rB})|)`.
fn top_degree_value(input: &SteinerInput, alpha: &DensityFunc, r: f64) -> Result<f64> {
    match input {
        SteinerInput::Indicator(k) => Ok(alpha.at(0.0) * parallel_volume(k, r)?),
        SteinerInput::RadialQuadratic { dim, c } => {
            let n = *dim;
            // |∇| = c(|x| − r)₊, so the outer shell contributes
            // nκ_n ∫ α(cs)(s + r)^{n−1} ds.
            let knots: Vec<f64> = alpha.breakpoints().iter().map(|t| t / c).collect();
            let mut shell = 0.0;
            for w in knots.windows(2) {
                shell += integrate(|s| Ok(alpha.at(c * s) * (s + r).powi(n as i32 - 1)), w[0], w[1], 8)?;
            }
            Ok(alpha.at(0.0) * kappa(n) * r.powi(n as i32) + n as f64 * kappa(n) * shell)
        }
    }
}

/// Fits `r ↦ Z_{n,α}(u □ ind_{rB})` by a polynomial of degree `n` and
/// reads off `Z_{j,α}(u)` as the coefficient of `r^{n−j}` over `κ_{n−j}`.
pub fn functional_intrinsic(input: &SteinerInput, alpha: &DensityFunc, r_nodes: &[f64]) -> Result<FunctionalIntrinsic> {
    let n = input.dim();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("functional Steiner formula in dimension {n}")));
    }
    if !matches!(alpha, DensityFunc::HalfLine { .. }) {
        return Err(Error::InvalidInput("α must be a half-line density".into()));
    }
    if let SteinerInput::RadialQuadratic { c, .. } = input {
        if !(*c > 0.0) {
            return Err(Error::InvalidInput("radial coefficient must be positive".into()));
        }
    }
    let mut distinct: Vec<f64> = r_nodes.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < n + 1 {
        return Err(Error::InsufficientNodes { needed: n + 1, got: distinct.len() });
    }
    if r_nodes.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::NegativeRadius(r_nodes.iter().copied().fold(f64::INFINITY, f64::min)));
    }
    let values = r_nodes.iter().map(|&r| top_degree_value(input, alpha, r)).collect::<Result<Vec<f64>>>()?;
    let design = DMatrix::from_fn(r_nodes.len(), n + 1, |i, k| r_nodes[i].powi(k as i32));
    let rhs = DVector::from_column_slice(&values);
    let coefficients: Vec<f64> = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::SingularSystem(e.into()))?
        .iter()
        .copied()
        .collect();
    let fitted = &design * DVector::from_column_slice(&coefficients);
    let residual = (fitted - rhs).amax();
    let components = (0..=n).map(|j| coefficients[n - j] / kappa(n - j)).collect();
    Ok(FunctionalIntrinsic { components, coefficients, values, residual })
}
