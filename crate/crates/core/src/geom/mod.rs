//! Convex bodies in ℝⁿ: polytopes in vertex/facet form, sampled support
//! functions, and the constructions the valuation modules consume.

mod ball;
mod hausdorff;
pub(crate) mod hull;
mod minkowski;
mod polytope;
mod sampled;
mod split;

pub use ball::{ball_polygon, ball_polytope, circle_directions, fibonacci_sphere, BallApprox};
pub use hausdorff::{hausdorff_distance, SupportBody};
pub use hull::hull;
pub use minkowski::minkowski_sum;
pub use polytope::{Edge, Facet, Family, Polytope};
pub use sampled::{rotational_mean, Rotation, SampledBody};
pub use split::{intersect, section, split_by_hyperplane};

use crate::error::{Error, Result};

/// Module-wide equality tolerance.
pub const EPS: f64 = 1e-10;

/// Vertices closer than this (relative to the body scale) are merged.
pub const DEDUP_EPS: f64 = 1e-12;

pub type Vector = nalgebra::DVector<f64>;

pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

/// Affine hyperplane `{x : ⟨normal, x⟩ = offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vector,
    offset: f64,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len.is_finite() && len > 0.0) || !offset.is_finite() {
            return Err(Error::InvalidInput("hyperplane normal must be finite and nonzero".into()));
        }
        if (len - 1.0).abs() > 1e-12 {
            return Ok(Self { normal: normal / len, offset: offset / len });
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed distance, positive on the side the normal points to.
    pub fn signed_distance(&self, x: &Vector) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn flipped(&self) -> Self {
        Self { normal: -&self.normal, offset: -self.offset }
    }
}

pub(crate) fn lex_cmp(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

pub(crate) fn check_finite(points: &[Vector]) -> Result<()> {
    if points.iter().all(|p| p.iter().all(|c| c.is_finite())) {
        Ok(())
    } else {
        Err(Error::InvalidInput("non-finite coordinate".into()))
    }
}

/// Largest absolute coordinate, at least 1; used to scale tolerances.
pub(crate) fn scale_of(points: &[Vector]) -> f64 {
    points.iter().flat_map(|p| p.iter()).fold(1.0_f64, |m, c| m.max(c.abs()))
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn to3(v: &Vector) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

pub(crate) fn to2(v: &Vector) -> [f64; 2] {
    [v[0], v[1]]
}

pub(crate) fn cross2(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Orthonormal basis of the affine hull of `points` (Gram–Schmidt on the
/// difference vectors from the first point).
pub(crate) fn affine_basis(points: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    let Some(origin) = points.first() else {
        return basis;
    };
    // Pick the farthest-remaining direction first for numerical stability.
    loop {
        let mut best: Option<(f64, Vector)> = None;
        for p in points {
            let mut d = p - origin;
            for b in &basis {
                let c = b.dot(&d);
                d -= b * c;
            }
            let n = d.norm();
            if n > tol && best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, d / n));
            }
        }
        match best {
            Some((_, dir)) => {
                // Re-orthogonalize once to keep the basis clean.
                let mut dir = dir;
                for b in &basis {
                    let c = b.dot(&dir);
                    dir -= b * c;
                }
                let n = dir.norm();
                basis.push(dir / n);
                if basis.len() == origin.len() {
                    break;
                }
            }
            None => break,
        }
    }
    basis
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
