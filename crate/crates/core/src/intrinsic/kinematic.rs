use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::volumes::{intrinsic_volumes, kappa};
use crate::error::{Error, Result};
use crate::geom::{binomial, Polytope, Vector};

/// Result of a kinematic Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// `Σ_i κ_iκ_{n−i}/(C(n,i)κ_n) · V_i(K) V_{n−i}(L)`.
    pub target: f64,
    pub hits: u64,
    pub samples: u64,
    /// Half-width of the translation window.
    pub window: f64,
}

/// Independent random streams the sample budget is split into.
const STREAMS: u64 = 16;

/// Closed-form value of `∫ V_0(K ∩ φL) dφ` in the plane.
pub fn kinematic_target(k: &Polytope, l: &Polytope) -> Result<f64> {
    let n = k.dim();
    let vk = intrinsic_volumes(k)?;
    let vl = intrinsic_volumes(l)?;
    Ok((0..=n).map(|i| kappa(i) * kappa(n - i) / (binomial(n, i) as f64 * kappa(n)) * vk.get(i) * vl.get(n - i)).sum())
}

/// Minimal window half-width: circumradii about the vertex centroids.
pub fn required_window(k: &Polytope, l: &Polytope) -> f64 {
    k.circumradius(&k.centroid()) + l.circumradius(&l.centroid())
}

/// Monte Carlo estimate of `∫ V_0(K ∩ φL) dφ` over rigid motions φ of the
/// plane (rotations with probability Haar measure, translations Lebesgue).
pub fn kinematic_integral_mc(k: &Polytope, l: &Polytope, samples: u64, seed: u64) -> Result<KinematicEstimate> {
    kinematic_integral_mc_window(k, l, samples, seed, required_window(k, l))
}

/// As [`kinematic_integral_mc`] with an explicit window half-width.
pub fn kinematic_integral_mc_window(
    k: &Polytope,
    l: &Polytope,
    samples: u64,
    seed: u64,
    window: f64,
) -> Result<KinematicEstimate> {
    if k.dim() != 2 || l.dim() != 2 {
        return Err(Error::Unsupported("kinematic integrals are implemented for n = 2".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let required = required_window(k, l);
    if window < required * (1.0 - 1e-12) {
        return Err(Error::WindowTooSmall { given: window, required });
    }
    let ck = k.centroid();
    let cl = l.centroid();
    let kv: Vec<[f64; 2]> = k.vertices().iter().map(|v| [v[0] - ck[0], v[1] - ck[1]]).collect();
    let lv: Vec<[f64; 2]> = l.vertices().iter().map(|v| [v[0] - cl[0], v[1] - cl[1]]).collect();
    let kaxes = axes(k);
    let laxes = axes(l);
    let hits: u64 = (0..STREAMS)
        .into_par_iter()
        .map(|s| {
            let count = samples / STREAMS + u64::from(s < samples % STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let mut moved = vec![[0.0; 2]; lv.len()];
            let mut hits = 0u64;
            for _ in 0..count {
                let theta = rng.gen::<f64>() * 2.0 * PI;
                let tx = (rng.gen::<f64>() * 2.0 - 1.0) * window;
                let ty = (rng.gen::<f64>() * 2.0 - 1.0) * window;
                let (sn, cs) = theta.sin_cos();
                for (m, v) in moved.iter_mut().zip(&lv) {
                    *m = [cs * v[0] - sn * v[1] + tx, sn * v[0] + cs * v[1] + ty];
                }
                let rotated: Vec<[f64; 2]> =
                    laxes.iter().map(|a| [cs * a[0] - sn * a[1], sn * a[0] + cs * a[1]]).collect();
                if intersects(&kv, &moved, kaxes.iter().chain(rotated.iter())) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let area = (2.0 * window).powi(2);
    let p = hits as f64 / samples as f64;
    Ok(KinematicEstimate {
        estimate: area * p,
        stderr: area * (p * (1.0 - p) / samples as f64).sqrt(),
        target: kinematic_target(k, l)?,
        hits,
        samples,
        window,
    })
}

/// Separating-axis candidates: facet normals, or for a segment its normal
/// and direction.
fn axes(p: &Polytope) -> Vec<[f64; 2]> {
    match p.facets() {
        Some(fs) => fs.iter().map(|f| [f.plane.normal()[0], f.plane.normal()[1]]).collect(),
        None if p.vertices().len() == 2 => {
            let d: Vector = &p.vertices()[1] - &p.vertices()[0];
            vec![[d[0], d[1]], [-d[1], d[0]]]
        }
        None => Vec::new(),
    }
}

fn intersects<'a>(a: &[[f64; 2]], b: &[[f64; 2]], axes: impl Iterator<Item = &'a [f64; 2]>) -> bool {
    let range = |pts: &[[f64; 2]], u: &[f64; 2]| {
        pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let d = p[0] * u[0] + p[1] * u[1];
            (lo.min(d), hi.max(d))
        })
    };
    for u in axes {
        let (alo, ahi) = range(a, u);
        let (blo, bhi) = range(b, u);
        if ahi < blo || bhi < alo {
            return false;
        }
    }
    true
}
