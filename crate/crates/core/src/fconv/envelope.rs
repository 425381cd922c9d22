//! Upper envelopes of lines and lower convex hulls of lifted points, the
//! combinatorial core of conjugation in dimensions one and two.

use crate::error::{Error, Result};
use crate::geom::{affine_basis, hull, vector, Vector};

/// Piece `index` of an envelope is active on `[start, end]` (ends may be
/// infinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Span {
    pub start: f64,
    pub end: f64,
    pub index: usize,
}

fn crossing(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1 - b.1) / (b.0 - a.0)
}

/// Upper envelope of the lines `x ↦ s_i x + c_i` restricted to `[lo, hi]`.
pub(crate) fn upper_envelope_1d(lines: &[(f64, f64)], lo: f64, hi: f64) -> Vec<Span> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| {
        lines[a].0.partial_cmp(&lines[b].0).unwrap().then(lines[b].1.partial_cmp(&lines[a].1).unwrap())
    });
    order.dedup_by(|b, a| lines[*a].0 == lines[*b].0);
    let mut stack: Vec<usize> = Vec::new();
    for &i in &order {
        while stack.len() >= 2 {
            let (p, q) = (stack[stack.len() - 2], stack[stack.len() - 1]);
            if crossing(lines[p], lines[i]) <= crossing(lines[p], lines[q]) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    if lo == hi {
        let best = (0..lines.len())
            .max_by(|&a, &b| {
                let (va, vb) = (lines[a].0 * lo + lines[a].1, lines[b].0 * lo + lines[b].1);
                va.partial_cmp(&vb).unwrap()
            })
            .expect("nonempty");
        return vec![Span { start: lo, end: hi, index: best }];
    }
    let mut spans = Vec::new();
    for (k, &i) in stack.iter().enumerate() {
        let start = if k == 0 { f64::NEG_INFINITY } else { crossing(lines[stack[k - 1]], lines[i]) };
        let end = if k + 1 == stack.len() { f64::INFINITY } else { crossing(lines[i], lines[stack[k + 1]]) };
        let (s, e) = (start.max(lo), end.min(hi));
        if s < e {
            spans.push(Span { start: s, end: e, index: i });
        }
    }
    spans
}

/// One cell of a lower hull: the lifted points on it and the affine
/// function `z = ⟨slope, s⟩ + offset` of its plane.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct HullCell {
    pub points: Vec<Vector>,
    pub slope: Vector,
    pub offset: f64,
}

/// Lower convex hull of `{(s_i, z_i)}` with `s_i ∈ ℝ²`, projected back
/// to the plane.
pub(crate) fn lower_hull_2d(points: &[(Vector, f64)]) -> Result<Vec<HullCell>> {
    let lifted: Vec<Vector> = points.iter().map(|(s, z)| vector(&[s[0], s[1], *z])).collect();
    let scale = lifted.iter().map(|p| p.amax()).fold(1.0, f64::max);
    let poly = hull(&lifted)?;
    let verts = poly.vertices();
    let project = |v: &Vector| vector(&[v[0], v[1]]);
    match poly.affine_dim() {
        3 => {
            let facets = poly.facets().ok_or(Error::MissingFacets)?;
            let mut cells = Vec::new();
            for f in facets {
                let n = f.plane.normal();
                if n[2] >= -1e-12 {
                    continue;
                }
                let d = f.plane.offset();
                cells.push(HullCell {
                    points: f.vertices.iter().map(|&i| project(&verts[i])).collect(),
                    slope: vector(&[-n[0] / n[2], -n[1] / n[2]]),
                    offset: d / n[2],
                });
            }
            Ok(cells)
        }
        2 => {
            let basis = affine_basis(verts, 1e-12 * scale);
            let (e1, e2) = (&basis[0], &basis[1]);
            let n =
                vector(&[e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]]);
            if n[2].abs() > 1e-9 * n.norm() {
                let d = n.dot(&verts[0]);
                Ok(vec![HullCell {
                    points: verts.iter().map(project).collect(),
                    slope: vector(&[-n[0] / n[2], -n[1] / n[2]]),
                    offset: d / n[2],
                }])
            } else {
                lower_hull_on_line(verts)
            }
        }
        1 => lower_hull_on_line(verts),
        _ => Ok(vec![HullCell { points: vec![project(&verts[0])], slope: Vector::zeros(2), offset: verts[0][2] }]),
    }
}

/// Lower hull of lifted points whose projections are collinear.
fn lower_hull_on_line(verts: &[Vector]) -> Result<Vec<HullCell>> {
    let s0 = vector(&[verts[0][0], verts[0][1]]);
    let spread = verts
        .iter()
        .map(|v| vector(&[v[0], v[1]]) - &s0)
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .expect("nonempty");
    if spread.norm() == 0.0 {
        let low = verts.iter().map(|v| v[2]).fold(f64::INFINITY, f64::min);
        return Ok(vec![HullCell { points: vec![s0], slope: Vector::zeros(2), offset: low }]);
    }
    let d = &spread / spread.norm();
    let mut pts: Vec<(f64, f64)> = verts.iter().map(|v| (d.dot(&(vector(&[v[0], v[1]]) - &s0)), v[2])).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut chain: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0.0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    Ok(chain
        .windows(2)
        .map(|w| {
            let m = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            HullCell {
                points: vec![&s0 + &d * w[0].0, &s0 + &d * w[1].0],
                slope: &d * m,
                offset: w[0].1 - m * w[0].0 - m * d.dot(&s0),
            }
        })
        .collect())
}
