use std::f64::consts::PI;

use super::hull::hull;
use super::polytope::Polytope;
use super::{vector, Vector};
use crate::error::{Error, Result};

/// Inscribed polytopal approximation of the ball `rBⁿ` centered at 0.
///
/// `inradius · B ⊂ polytope ⊂ radius · B`, so the Hausdorff error is at most
/// `radius − inradius`.
#[derive(Debug, Clone)]
pub struct BallApprox {
    pub polytope: Polytope,
    pub radius: f64,
    pub inradius: f64,
}

impl BallApprox {
    pub fn error_bound(&self) -> f64 {
        self.radius - self.inradius
    }

    /// Factor `radius / inradius` by which the approximation must be dilated
    /// to contain the true ball.
    pub fn outer_factor(&self) -> f64 {
        self.radius / self.inradius
    }
}

/// Regular `k`-gon inscribed in the circle of radius `r`.
pub fn ball_polygon(k: usize, r: f64) -> Result<BallApprox> {
    if !(r >= 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    if k < 3 {
        return Err(Error::InvalidInput("a ball polygon needs at least 3 vertices".into()));
    }
    let pts: Vec<Vector> = (0..k)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / k as f64;
            vector(&[r * t.cos(), r * t.sin()])
        })
        .collect();
    Ok(BallApprox { polytope: hull(&pts)?, radius: r, inradius: r * (PI / k as f64).cos() })
}

/// Inscribed approximation of `rBⁿ` for n ≤ 3 with roughly `k` vertices
/// (a regular polygon in the plane, a Fibonacci point set on the sphere).
pub fn ball_polytope(n: usize, k: usize, r: f64) -> Result<BallApprox> {
    if !(r >= 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    match n {
        1 => Ok(BallApprox { polytope: hull(&[vector(&[-r]), vector(&[r])])?, radius: r, inradius: r }),
        2 => ball_polygon(k, r),
        3 => {
            if k < 4 {
                return Err(Error::InvalidInput("a ball polytope needs at least 4 vertices".into()));
            }
            let pts: Vec<Vector> = fibonacci_sphere(k).into_iter().map(|u| u * r).collect();
            let polytope = hull(&pts)?;
            let inradius = polytope
                .facets()
                .map(|fs| fs.iter().map(|f| f.plane.offset()).fold(f64::INFINITY, f64::min))
                .unwrap_or(0.0);
            Ok(BallApprox { polytope, radius: r, inradius })
        }
        _ => Err(Error::Unsupported(format!("ball approximation in dimension {n}"))),
    }
}

/// `k` nearly uniform unit vectors on S².
pub fn fibonacci_sphere(k: usize) -> Vec<Vector> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..k)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / k as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            vector(&[rho * phi.cos(), rho * phi.sin(), z])
        })
        .collect()
}

/// `k` equally spaced unit vectors on S¹ starting at e₁.
pub fn circle_directions(k: usize) -> Vec<Vector> {
    (0..k)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / k as f64;
            vector(&[t.cos(), t.sin()])
        })
        .collect()
}
