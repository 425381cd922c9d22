use super::hull::hull;
use super::polytope::{Family, Polytope};
use super::{to2, Vector};
use crate::error::{check_dim, Error, Result};

/// Minkowski sum `P ⊕ Q = {p + q : p ∈ P, q ∈ Q}`.
///
/// Polygons are merged edge by edge; lower-dimensional summands and 3-D
/// bodies go through the hull of pairwise vertex sums. In higher dimensions
/// only box + box is available.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    check_dim(p.dim(), q.dim())?;
    let n = p.dim();
    if let (Family::Box { lo: a, hi: b }, Family::Box { lo: c, hi: d }) = (p.family(), q.family()) {
        return Polytope::new_box(&(a + c), &(b + d));
    }
    if q.vertices().len() == 1 {
        return p.translate(&q.vertices()[0]);
    }
    if p.vertices().len() == 1 {
        return q.translate(&p.vertices()[0]);
    }
    match n {
        2 if p.is_full_dimensional() && q.is_full_dimensional() => hull(&merge_edges(&p.ccw_ring(), &q.ccw_ring())),
        1..=3 => {
            let sums: Vec<Vector> = p.vertices().iter().flat_map(|a| q.vertices().iter().map(move |b| a + b)).collect();
            hull(&sums)
        }
        _ => Err(Error::Unsupported(format!("Minkowski sum in dimension {n} beyond boxes"))),
    }
}

/// Merges two counter-clockwise convex rings by edge angle.
fn merge_edges(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let start = |ring: &[Vector]| {
        (0..ring.len())
            .min_by(|&i, &j| {
                let (p, q) = (to2(&ring[i]), to2(&ring[j]));
                p[1].partial_cmp(&q[1]).unwrap().then(p[0].partial_cmp(&q[0]).unwrap())
            })
            .unwrap()
    };
    let (sa, sb) = (start(a), start(b));
    let (ka, kb) = (a.len(), b.len());
    let at = |ring: &[Vector], s: usize, i: usize| ring[(s + i) % ring.len()].clone();
    let edge = |ring: &[Vector], s: usize, i: usize| at(ring, s, i + 1) - at(ring, s, i);
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(ka + kb);
    while i < ka || j < kb {
        out.push(at(a, sa, i) + at(b, sb, j));
        if i == ka {
            j += 1;
            continue;
        }
        if j == kb {
            i += 1;
            continue;
        }
        let (ea, eb) = (edge(a, sa, i), edge(b, sb, j));
        let c = ea[0] * eb[1] - ea[1] * eb[0];
        if c > 0.0 {
            i += 1;
        } else if c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}
