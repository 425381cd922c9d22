use std::f64::consts::PI;

use crate::dehn::dihedral_angles;
use crate::error::{Error, Result};
use crate::geom::{minkowski_sum, BallApprox, Family, Polytope};

/// Volume of the unit ball in ℝʲ, by `κ_j = (2π/j)·κ_{j−2}`.
pub fn kappa(j: usize) -> f64 {
    match j {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / j as f64 * kappa(j - 2),
    }
}

/// `κ_0, …, κ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaTable {
    values: Vec<f64>,
}

impl KappaTable {
    pub fn new(n: usize) -> Self {
        Self { values: (0..=n).map(kappa).collect() }
    }

    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `V_0(P), …, V_n(P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVector {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl IntrinsicVector {
    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }
}

/// Largest dimension accepted for boxes.
const MAX_BOX_DIM: usize = 6;

/// Intrinsic volumes of a nonempty polytope.
///
/// Boxes use elementary symmetric polynomials of the side lengths. Planar
/// bodies give `(1, perimeter/2, area)`; in ℝ³ the mean-width term is the
/// edge sum `Σ ℓ(E)(π − α(E))/(2π)` over dihedral angles α. Bodies of lower
/// dimension are measured inside their affine hull.
pub fn intrinsic_volumes(p: &Polytope) -> Result<IntrinsicVector> {
    let n = p.dim();
    if let Family::Box { lo, hi } = p.family() {
        if n > MAX_BOX_DIM {
            return Err(Error::Unsupported(format!("intrinsic volumes of boxes beyond n = {MAX_BOX_DIM}")));
        }
        let sides: Vec<f64> = (hi - lo).iter().copied().collect();
        return Ok(IntrinsicVector { dim: n, values: elementary_symmetric(&sides) });
    }
    if !p.is_full_dimensional() {
        let mut values = vec![0.0; n + 1];
        match p.in_affine_hull()? {
            (_, _, None) => values[0] = 1.0,
            (_, _, Some(local)) => {
                let inner = intrinsic_volumes(&local)?;
                values[..inner.values.len()].copy_from_slice(&inner.values);
            }
        }
        return Ok(IntrinsicVector { dim: n, values });
    }
    let values = match n {
        1 => vec![1.0, p.volume()?],
        2 => vec![1.0, 0.5 * p.surface_area()?, p.volume()?],
        3 => {
            let v1 = dihedral_angles(p)?.iter().map(|e| e.length * (PI - e.angle) / (2.0 * PI)).sum();
            vec![1.0, v1, 0.5 * p.surface_area()?, p.volume()?]
        }
        _ => return Err(Error::Unsupported(format!("intrinsic volumes of non-box polytopes in dimension {n}"))),
    };
    Ok(IntrinsicVector { dim: n, values })
}

/// `e_0, …, e_k` of the given numbers.
pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &s) in x.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += s * e[j - 1];
        }
    }
    e
}

/// Steiner polynomial `Σ_j r^{n−j} κ_{n−j} V_j(P)`.
pub fn steiner_volume(p: &Polytope, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    let v = intrinsic_volumes(p)?;
    let n = p.dim();
    Ok((0..=n).map(|j| r.powi((n - j) as i32) * kappa(n - j) * v.get(j)).sum())
}

/// Steiner polynomial bracketed by polytopal parallel bodies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerCheck {
    pub steiner: f64,
    /// `V_n(P ⊕ r·B_poly)` with the inscribed approximation.
    pub inner: f64,
    /// `V_n(P ⊕ (r/ρ)·B_poly)`, whose ball summand contains `rB`.
    pub outer: f64,
}

impl SteinerCheck {
    /// Width of the bracket, the error bound for `|steiner − inner|`.
    pub fn bound(&self) -> f64 {
        self.outer - self.inner
    }

    pub fn residual(&self) -> f64 {
        (self.steiner - self.inner).abs()
    }

    pub fn holds(&self) -> bool {
        self.residual() <= self.bound() + 1e-12 * self.outer.abs().max(1.0)
            && self.steiner >= self.inner - 1e-12 * self.outer.abs().max(1.0)
    }
}

/// Compares the Steiner polynomial with parallel bodies built from a unit
/// ball approximation `unit_ball`.
pub fn steiner_check(p: &Polytope, r: f64, unit_ball: &BallApprox) -> Result<SteinerCheck> {
    let steiner = steiner_volume(p, r)?;
    let inner = minkowski_sum(p, &unit_ball.polytope.dilate(r * unit_ball.radius.recip())?)?.volume()?;
    let outer = minkowski_sum(p, &unit_ball.polytope.dilate(r / unit_ball.inradius)?)?.volume()?;
    Ok(SteinerCheck { steiner, inner, outer })
}
