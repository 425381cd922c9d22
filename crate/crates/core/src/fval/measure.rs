use nalgebra::{Matrix2, Vector2};

use super::density::AtomicMeasure;
use crate::error::{Error, Result};
use crate::fconv::MaxAffineFunc;
use crate::geom::{hull, vector, Vector};

/// Monge–Ampère measure of a max-affine function: one atom per vertex of
/// its subdivision, weighted by the volume of the subdifferential there
/// (the convex hull of the active slopes).
pub fn monge_ampere(v: &MaxAffineFunc) -> Result<AtomicMeasure> {
    if v.interval().is_some() {
        return Err(Error::Unsupported("Monge–Ampère measure of a restricted function".into()));
    }
    let pieces = v.pieces();
    match v.dim() {
        1 => {
            let mut order: Vec<usize> = (0..pieces.len()).collect();
            order.sort_by(|&a, &b| pieces[a].0[0].partial_cmp(&pieces[b].0[0]).unwrap());
            let atoms = order
                .windows(2)
                .map(|w| {
                    let ((s, c), (t, d)) = (&pieces[w[0]], &pieces[w[1]]);
                    (vector(&[(c - d) / (t[0] - s[0])]), t[0] - s[0])
                })
                .collect();
            Ok(AtomicMeasure { atoms })
        }
        2 => {
            let scale = pieces.iter().map(|(y, c)| y.amax().max(c.abs())).fold(1.0, f64::max);
            let mut vertices: Vec<Vector> = Vec::new();
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    for k in j + 1..pieces.len() {
                        let (yi, ci) = &pieces[i];
                        let (yj, cj) = &pieces[j];
                        let (yk, ck) = &pieces[k];
                        let m = Matrix2::new(yj[0] - yi[0], yj[1] - yi[1], yk[0] - yi[0], yk[1] - yi[1]);
                        let Some(x) = m.lu().solve(&Vector2::new(ci - cj, ci - ck)) else { continue };
                        if !x.iter().all(|c| c.is_finite()) {
                            continue;
                        }
                        let x = vector(&[x[0], x[1]]);
                        let value = yi.dot(&x) + ci;
                        let tol = 1e-10 * scale * x.amax().max(1.0);
                        if v.evaluate(&x)? > value + tol {
                            continue;
                        }
                        if !vertices.iter().any(|p| (p - &x).amax() <= 1e-9 * x.amax().max(1.0)) {
                            vertices.push(x);
                        }
                    }
                }
            }
            let atoms = vertices
                .into_iter()
                .map(|x| {
                    let tol = 1e-10 * scale * x.amax().max(1.0);
                    let slopes: Vec<Vector> = v.active(&x, tol).iter().map(|&i| pieces[i].0.clone()).collect();
                    Ok((x, hull(&slopes)?.volume()?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AtomicMeasure { atoms: atoms.into_iter().filter(|(_, m)| *m > 0.0).collect() })
        }
        n => Err(Error::Unsupported(format!("Monge–Ampère measures in dimension {n}"))),
    }
}
