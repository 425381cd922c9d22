//! Exact convex hulls for n ≤ 3 and recognition of boxes and simplices in
//! higher dimensions.

use std::collections::HashSet;

use super::polytope::{Facet, Family, Polytope};
use super::{
    affine_basis, check_finite, cross2, cross3, dot3, lex_cmp, norm3, scale_of, sub3, to3, vector, Hyperplane, Vector,
    DEDUP_EPS,
};
use crate::error::{check_dim, Error, Result};

/// Convex hull of a finite point set.
///
/// Any point set is accepted for n ≤ 3. For n > 3 the input must be the
/// vertex set of a simplex or of an axis-parallel box.
pub fn hull(points: &[Vector]) -> Result<Polytope> {
    let first = points.first().ok_or_else(|| Error::InvalidInput("hull of an empty point set".into()))?;
    let n = first.len();
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    for p in points {
        check_dim(n, p.len())?;
    }
    check_finite(points)?;
    let pts = dedup(points);
    match n {
        1 => Ok(hull1(&pts)),
        2 => Ok(hull2(&pts)),
        3 => Ok(hull3(&pts)),
        _ => recognize_family(&pts),
    }
}

pub(crate) fn dedup(points: &[Vector]) -> Vec<Vector> {
    let tol = DEDUP_EPS * scale_of(points);
    let mut sorted: Vec<Vector> = points.to_vec();
    sorted.sort_by(lex_cmp);
    let mut out: Vec<Vector> = Vec::with_capacity(sorted.len());
    'outer: for p in sorted {
        // Near-duplicates are close in the first coordinate, so scanning back
        // while the first coordinate is within tolerance suffices.
        for q in out.iter().rev() {
            if p[0] - q[0] > tol {
                break;
            }
            if (&p - q).amax() <= tol {
                continue 'outer;
            }
        }
        out.push(p);
    }
    out
}

fn hull1(pts: &[Vector]) -> Polytope {
    let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let tol = DEDUP_EPS * lo.abs().max(hi.abs()).max(1.0);
    if hi - lo <= tol {
        return Polytope::from_parts(1, vec![vector(&[lo])], None, Family::General, 0);
    }
    let facets = vec![
        Facet {
            plane: Hyperplane { normal: vector(&[-1.0]), offset: -lo },
            raw_normal: vector(&[-1.0]),
            vertices: vec![0],
        },
        Facet {
            plane: Hyperplane { normal: vector(&[1.0]), offset: hi },
            raw_normal: vector(&[1.0]),
            vertices: vec![1],
        },
    ];
    Polytope::from_parts(1, vec![vector(&[lo]), vector(&[hi])], Some(facets), Family::General, 1)
}

/// Andrew's monotone chain on 2-D points; returns indices of the strict hull
/// in counter-clockwise order.
pub(crate) fn monotone_chain(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].partial_cmp(&pts[b][0]).unwrap().then(pts[a][1].partial_cmp(&pts[b][1]).unwrap()));
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| -> f64 {
        let oa = ((pts[a][0] - pts[o][0]).powi(2) + (pts[a][1] - pts[o][1]).powi(2)).sqrt();
        let ob = ((pts[b][0] - pts[o][0]).powi(2) + (pts[b][1] - pts[o][1]).powi(2)).sqrt();
        let c = cross2(&pts[o], &pts[a], &pts[b]);
        // Compare the sine of the turning angle scaled by the shorter arm
        // against the length tolerance.
        if oa == 0.0 || ob == 0.0 {
            0.0
        } else {
            c / oa.max(ob)
        }
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= tol {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= tol {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull2(pts: &[Vector]) -> Polytope {
    let p2: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
    let tol = 1e-12 * diameter(pts).max(f64::MIN_POSITIVE);
    let ring = monotone_chain(&p2, tol);
    polygon_from_ring(pts, &ring)
}

/// Builds a 2-D polytope from a counter-clockwise ring of indices into `pts`.
pub(crate) fn polygon_from_ring(pts: &[Vector], ring: &[usize]) -> Polytope {
    match ring.len() {
        0 => unreachable!("hull of a nonempty set"),
        1 => Polytope::from_parts(2, vec![pts[ring[0]].clone()], None, Family::General, 0),
        2 => Polytope::from_parts(2, vec![pts[ring[0]].clone(), pts[ring[1]].clone()], None, Family::General, 1),
        k => {
            let verts: Vec<Vector> = ring.iter().map(|&i| pts[i].clone()).collect();
            let facets = (0..k)
                .map(|i| {
                    let a = &verts[i];
                    let b = &verts[(i + 1) % k];
                    let raw = vector(&[b[1] - a[1], a[0] - b[0]]);
                    let normal = &raw / raw.norm();
                    let offset = normal.dot(a).max(normal.dot(b));
                    Facet { plane: Hyperplane { normal, offset }, raw_normal: raw, vertices: vec![i, (i + 1) % k] }
                })
                .collect();
            Polytope::from_parts(2, verts, Some(facets), Family::General, 2)
        }
    }
}

fn diameter(pts: &[Vector]) -> f64 {
    let n = pts[0].len();
    (0..n)
        .map(|k| {
            let lo = pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max)
}

struct Tri {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
}

impl Tri {
    fn new(v: [usize; 3], p: &[[f64; 3]]) -> Self {
        let n = cross3(&sub3(&p[v[1]], &p[v[0]]), &sub3(&p[v[2]], &p[v[0]]));
        let len = norm3(&n);
        let normal = [n[0] / len, n[1] / len, n[2] / len];
        let offset = dot3(&normal, &p[v[0]]);
        Tri { v, normal, offset, alive: true }
    }

    fn distance(&self, x: &[f64; 3]) -> f64 {
        dot3(&self.normal, x) - self.offset
    }
}

fn hull3(pts: &[Vector]) -> Polytope {
    let p: Vec<[f64; 3]> = pts.iter().map(to3).collect();
    let diam = diameter(pts);
    let tol = 1e-11 * diam.max(f64::MIN_POSITIVE);

    let i0 = 0; // lexicographically smallest after dedup
    let far = |f: &dyn Fn(&[f64; 3]) -> f64| -> (usize, f64) {
        p.iter().enumerate().map(|(i, q)| (i, f(q))).fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
    };
    let (i1, d1) = far(&|q| norm3(&sub3(q, &p[i0])));
    if d1 <= tol {
        return Polytope::from_parts(3, vec![pts[i0].clone()], None, Family::General, 0);
    }
    let axis = sub3(&p[i1], &p[i0]);
    let (i2, d2) = far(&|q| norm3(&cross3(&axis, &sub3(q, &p[i0]))) / d1);
    if d2 <= tol {
        // Collinear: the two extreme points along the axis.
        let proj: Vec<f64> = p.iter().map(|q| dot3(&axis, &sub3(q, &p[i0]))).collect();
        let lo = (0..p.len()).min_by(|&a, &b| proj[a].partial_cmp(&proj[b]).unwrap()).unwrap();
        let hi = (0..p.len()).max_by(|&a, &b| proj[a].partial_cmp(&proj[b]).unwrap()).unwrap();
        return Polytope::from_parts(3, vec![pts[lo].clone(), pts[hi].clone()], None, Family::General, 1);
    }
    let pn = cross3(&axis, &sub3(&p[i2], &p[i0]));
    let pn_len = norm3(&pn);
    let (i3, d3) = far(&|q| (dot3(&pn, &sub3(q, &p[i0])) / pn_len).abs());
    if d3 <= tol {
        return planar_hull(pts, 3);
    }

    let interior = [
        (p[i0][0] + p[i1][0] + p[i2][0] + p[i3][0]) / 4.0,
        (p[i0][1] + p[i1][1] + p[i2][1] + p[i3][1]) / 4.0,
        (p[i0][2] + p[i1][2] + p[i2][2] + p[i3][2]) / 4.0,
    ];
    let mut faces: Vec<Tri> = Vec::new();
    for v in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let mut t = Tri::new(v, &p);
        if t.distance(&interior) > 0.0 {
            t = Tri::new([v[0], v[2], v[1]], &p);
        }
        faces.push(t);
    }
    let seeds = [i0, i1, i2, i3];
    for (pi, q) in p.iter().enumerate() {
        if seeds.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> =
            faces.iter().enumerate().filter(|(_, f)| f.alive && f.distance(q) > tol).map(|(i, _)| i).collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &fi in &visible {
            let v = faces[fi].v;
            edges.insert((v[0], v[1]));
            edges.insert((v[1], v[2]));
            edges.insert((v[2], v[0]));
        }
        for &fi in &visible {
            faces[fi].alive = false;
        }
        let mut horizon: Vec<(usize, usize)> =
            edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        horizon.sort_unstable();
        for (a, b) in horizon {
            faces.push(Tri::new([a, b, pi], &p));
        }
    }
    let faces: Vec<Tri> = faces.into_iter().filter(|f| f.alive).collect();
    assemble_facets(pts, &p, &faces, tol)
}

/// Merges coplanar triangles into polygonal facets and extracts the strict
/// vertex set.
fn assemble_facets(pts: &[Vector], p: &[[f64; 3]], faces: &[Tri], tol: f64) -> Polytope {
    // Group triangles by supporting plane.
    let mut groups: Vec<(Vec<usize>, [f64; 3], f64)> = Vec::new();
    for (fi, f) in faces.iter().enumerate() {
        let found = groups
            .iter_mut()
            .find(|(_, n, off)| dot3(n, &f.normal) > 1.0 - 1e-9 && (off - f.offset).abs() <= 10.0 * tol);
        match found {
            Some(g) => g.0.push(fi),
            None => groups.push((vec![fi], f.normal, f.offset)),
        }
    }
    let mut used: Vec<Option<usize>> = vec![None; pts.len()];
    let mut verts: Vec<Vector> = Vec::new();
    let mut facets: Vec<Facet> = Vec::new();
    for (members, _, _) in &groups {
        // Area-weighted normal of the group.
        let mut acc = [0.0; 3];
        let mut ids: Vec<usize> = Vec::new();
        for &fi in members {
            let t = &faces[fi];
            let c = cross3(&sub3(&p[t.v[1]], &p[t.v[0]]), &sub3(&p[t.v[2]], &p[t.v[0]]));
            acc = [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]];
            ids.extend_from_slice(&t.v);
        }
        ids.sort_unstable();
        ids.dedup();
        let len = norm3(&acc);
        let normal = [acc[0] / len, acc[1] / len, acc[2] / len];
        let (e1, e2) = plane_basis(&normal);
        let proj: Vec<[f64; 2]> = ids.iter().map(|&i| [dot3(&e1, &p[i]), dot3(&e2, &p[i])]).collect();
        let ring = monotone_chain(&proj, tol);
        if ring.len() < 3 {
            continue;
        }
        let poly: Vec<usize> = ring.iter().map(|&r| ids[r]).collect();
        let raw = best_raw_normal(p, &poly);
        let offset = poly.iter().map(|&i| dot3(&normal, &p[i])).fold(f64::NEG_INFINITY, f64::max);
        let local: Vec<usize> = poly
            .iter()
            .map(|&i| {
                *used[i].get_or_insert_with(|| {
                    verts.push(pts[i].clone());
                    verts.len() - 1
                })
            })
            .collect();
        facets.push(Facet {
            plane: Hyperplane { normal: vector(&normal), offset },
            raw_normal: vector(&raw),
            vertices: local,
        });
    }
    Polytope::from_parts(3, verts, Some(facets), Family::General, 3)
}

/// Cross product of two edges at the polygon corner with the largest
/// cross-product norm.
fn best_raw_normal(p: &[[f64; 3]], poly: &[usize]) -> [f64; 3] {
    let k = poly.len();
    (0..k)
        .map(|i| {
            let a = &p[poly[(i + k - 1) % k]];
            let b = &p[poly[i]];
            let c = &p[poly[(i + 1) % k]];
            cross3(&sub3(c, b), &sub3(a, b))
        })
        .fold([0.0; 3], |best, c| if norm3(&c) > norm3(&best) { c } else { best })
}

/// Right-handed orthonormal pair spanning the plane orthogonal to `n`.
pub(crate) fn plane_basis(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = cross3(&helper, n);
    let l = norm3(&e1);
    let e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
    let e2 = cross3(n, &e1);
    (e1, e2)
}

/// Hull of points spanning a 2-flat in ℝⁿ (no facet representation).
fn planar_hull(pts: &[Vector], n: usize) -> Polytope {
    let origin = pts[0].clone();
    let basis = affine_basis(pts, 0.0);
    let basis = &basis[..2.min(basis.len())];
    let proj: Vec<[f64; 2]> = pts
        .iter()
        .map(|q| {
            let d = q - &origin;
            [basis[0].dot(&d), basis[1].dot(&d)]
        })
        .collect();
    let tol = 1e-12 * diameter(pts).max(f64::MIN_POSITIVE);
    let ring = monotone_chain(&proj, tol);
    let verts: Vec<Vector> = ring.iter().map(|&i| pts[i].clone()).collect();
    let k = verts.len();
    Polytope::from_parts(n, verts, None, Family::General, k.min(3) - 1)
}

fn recognize_family(pts: &[Vector]) -> Result<Polytope> {
    let n = pts[0].len();
    let scale = scale_of(pts);
    let tol = 1e-10 * scale;
    let basis = affine_basis(pts, tol);
    if pts.len() == n + 1 && basis.len() == n {
        return Ok(Polytope::from_parts(n, pts.to_vec(), None, Family::Simplex, n));
    }
    let lo: Vec<f64> = (0..n).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|k| pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let free = (0..n).filter(|&k| hi[k] - lo[k] > tol).count();
    let corners = pts.iter().all(|p| (0..n).all(|k| (p[k] - lo[k]).abs() <= tol || (p[k] - hi[k]).abs() <= tol));
    if corners && pts.len() == 1usize << free {
        return Polytope::new_box(&vector(&lo), &vector(&hi));
    }
    Err(Error::Unsupported(format!("hull in dimension {n} is only available for simplices and boxes")))
}
