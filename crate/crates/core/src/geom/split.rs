use super::hull::hull;
use super::polytope::{Facet, Polytope};
use super::{scale_of, Hyperplane, Vector};
use crate::error::{check_dim, Error, Result};

/// Relative tolerance for deciding on which side of a plane a vertex lies.
const SIDE_EPS: f64 = 1e-12;

/// Relative tolerance for recognizing a piece facet as part of a known plane.
const SNAP_EPS: f64 = 1e-9;

/// Splits `P` into `(P ∩ H⁺, P ∩ H⁻)` where `H⁺ = {⟨n,x⟩ ≥ c}`. A part that
/// is empty comes back as `None`.
///
/// Facets of the pieces that lie in a facet plane of `P` or in `h` inherit
/// that plane exactly, so normals survive repeated cutting unchanged.
pub fn split_by_hyperplane(p: &Polytope, h: &Hyperplane) -> Result<(Option<Polytope>, Option<Polytope>)> {
    check_dim(p.dim(), h.dim())?;
    if p.dim() > 3 {
        return Err(Error::Unsupported("hyperplane splits beyond n = 3".into()));
    }
    let cut = Cut::new(p, h);
    let plus = cut.piece(1.0)?.map(|q| snap(q, p, h, 1.0));
    let minus = cut.piece(-1.0)?.map(|q| snap(q, p, h, -1.0));
    Ok((plus, minus))
}

/// `P ∩ h`, a body of lower dimension (or `None`).
pub fn section(p: &Polytope, h: &Hyperplane) -> Result<Option<Polytope>> {
    check_dim(p.dim(), h.dim())?;
    if p.dim() > 3 {
        return Err(Error::Unsupported("hyperplane sections beyond n = 3".into()));
    }
    Cut::new(p, h).piece(0.0)
}

/// `P ∩ Q` by successive splits along the facets of `Q`.
pub fn intersect(p: &Polytope, q: &Polytope) -> Result<Option<Polytope>> {
    check_dim(p.dim(), q.dim())?;
    let facets = q.facets().ok_or(Error::MissingFacets)?;
    let mut acc = p.clone();
    for f in facets {
        match split_by_hyperplane(&acc, &f.plane)?.1 {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

struct Cut<'a> {
    p: &'a Polytope,
    dist: Vec<f64>,
    crossings: Vec<Vector>,
    tol: f64,
}

impl<'a> Cut<'a> {
    fn new(p: &'a Polytope, h: &Hyperplane) -> Self {
        let verts = p.vertices();
        let tol = SIDE_EPS * scale_of(verts);
        let dist: Vec<f64> = verts.iter().map(|v| h.signed_distance(v)).collect();
        let mut crossings = Vec::new();
        for (a, b) in edge_pairs(p) {
            let (da, db) = (dist[a], dist[b]);
            if (da > tol && db < -tol) || (da < -tol && db > tol) {
                let (va, vb) = (&verts[a], &verts[b]);
                // Interpolate from the endpoint with the smaller index so
                // both pieces see the same point.
                crossings.push(va + (vb - va) * (da / (da - db)));
            }
        }
        Self { p, dist, crossings, tol }
    }

    /// The piece on side `sign`, or the section for `sign == 0`.
    fn piece(&self, sign: f64) -> Result<Option<Polytope>> {
        let verts = self.p.vertices();
        let strictly_inside = self.dist.iter().any(|&d| sign * d > self.tol);
        if sign == 0.0 || !strictly_inside {
            let pts: Vec<Vector> = verts
                .iter()
                .zip(&self.dist)
                .filter(|(_, d)| d.abs() <= self.tol)
                .map(|(v, _)| v.clone())
                .chain(if sign == 0.0 { self.crossings.clone() } else { Vec::new() })
                .collect();
            return if pts.is_empty() { Ok(None) } else { hull(&pts).map(Some) };
        }
        if self.dist.iter().all(|&d| sign * d >= -self.tol) {
            return Ok(Some(self.p.clone()));
        }
        let pts: Vec<Vector> = verts
            .iter()
            .zip(&self.dist)
            .filter(|(_, &d)| sign * d >= -self.tol)
            .map(|(v, _)| v.clone())
            .chain(self.crossings.iter().cloned())
            .collect();
        hull(&pts).map(Some)
    }
}

/// Vertex index pairs that may be crossed by a plane: polytope edges when
/// facets are known, all pairs otherwise.
fn edge_pairs(p: &Polytope) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match p.facets() {
        Some(fs) if p.dim() >= 2 => {
            for f in fs {
                let k = f.vertices.len();
                for i in 0..k {
                    let (a, b) = (f.vertices[i], f.vertices[(i + 1) % k]);
                    if k > 2 || i == 0 {
                        out.push((a.min(b), a.max(b)));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
        }
        _ => {
            let k = p.vertices().len();
            for a in 0..k {
                for b in a + 1..k {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Replaces each facet of a piece by the exact facet of `orig` or the cut
/// plane it lies in.
fn snap(mut piece: Polytope, orig: &Polytope, h: &Hyperplane, sign: f64) -> Polytope {
    let Some(facets) = piece.facets() else {
        return piece;
    };
    let tol = SNAP_EPS * scale_of(piece.vertices());
    let cut_plane = if sign > 0.0 { h.flipped() } else { h.clone() };
    let cut_facet = Facet { raw_normal: cut_plane.normal.clone(), plane: cut_plane, vertices: Vec::new() };
    let known: Vec<&Facet> = orig.facets().into_iter().flatten().chain(std::iter::once(&cut_facet)).collect();
    let verts = piece.vertices().to_vec();
    let snapped: Vec<Facet> = facets
        .iter()
        .map(|f| {
            let hit = known.iter().find(|k| {
                k.plane.normal.dot(&f.plane.normal) > 1.0 - 1e-9
                    && f.vertices.iter().all(|&i| k.plane.signed_distance(&verts[i]).abs() <= tol)
            });
            match hit {
                Some(k) => {
                    Facet { plane: k.plane.clone(), raw_normal: k.raw_normal.clone(), vertices: f.vertices.clone() }
                }
                None => f.clone(),
            }
        })
        .collect();
    piece.replace_facets(snapped);
    piece
}
