use super::envelope::{lower_hull_2d, upper_envelope_1d};
use super::max_affine::MaxAffineFunc;
use super::polyhedral::{Cell, CellShape, Domain, PolyhedralFunc, CONVEXITY_EPS};
use crate::error::{check_dim, Error, Result};
use crate::geom::{hull, intersect, split_by_hyperplane, vector, Hyperplane, Polytope, Vector};

/// `u*(x) = sup_y ⟨x, y⟩ − u(y)`, one piece per cell vertex.
pub fn conjugate(u: &PolyhedralFunc) -> Result<MaxAffineFunc> {
    let pieces: Vec<(Vector, f64)> = u.vertex_values().into_iter().map(|(w, val)| (w, -val)).collect();
    let bounded = u.cells().iter().all(|c| matches!(c.shape, CellShape::Bounded(_)));
    if bounded {
        return MaxAffineFunc::build(pieces, None);
    }
    if u.dim() != 1 {
        return Err(Error::Unsupported("conjugates of unbounded functions for n ≥ 2".into()));
    }
    // The recession slopes bound the domain of u*.
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for c in u.cells() {
        for r in c.rays() {
            if r[0] < 0.0 {
                lo = lo.max(c.slope[0]);
            } else {
                hi = hi.min(c.slope[0]);
            }
        }
    }
    MaxAffineFunc::build(pieces, Some((lo, hi)))
}

/// `v*` as a cell complex: the cells are where one piece of `v` is active
/// in the dual picture, i.e. the projected lower hull of `(y_i, −c_i)`.
pub fn conjugate_max_affine(v: &MaxAffineFunc) -> Result<PolyhedralFunc> {
    match v.dim() {
        1 => conjugate_line(v),
        2 if v.interval().is_none() => {
            let lifted: Vec<(Vector, f64)> = v.pieces().iter().map(|(y, c)| (y.clone(), -c)).collect();
            let cells = lower_hull_2d(&lifted)?
                .into_iter()
                .map(|c| Ok(Cell::bounded(hull(&c.points)?, c.slope, c.offset)))
                .collect::<Result<Vec<_>>>()?;
            let slopes: Vec<Vector> = v.pieces().iter().map(|(y, _)| y.clone()).collect();
            Ok(PolyhedralFunc::from_parts(2, cells, Domain::Body(hull(&slopes)?)))
        }
        n => Err(Error::Unsupported(format!("conjugating max-affine functions in dimension {n}"))),
    }
}

fn conjugate_line(v: &MaxAffineFunc) -> Result<PolyhedralFunc> {
    let (lo, hi) = v.interval().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let lines: Vec<(f64, f64)> = v.pieces().iter().map(|(y, c)| (y[0], *c)).collect();
    let spans = upper_envelope_1d(&lines, lo, hi);
    let first = lines[spans[0].index].0;
    let last = lines[spans.last().expect("nonempty").index].0;
    let dual_lo = if lo.is_finite() { f64::NEG_INFINITY } else { first };
    let dual_hi = if hi.is_finite() { f64::INFINITY } else { last };
    let mut breaks: Vec<f64> = spans.iter().flat_map(|s| [s.start, s.end]).filter(|x| x.is_finite()).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    if breaks.is_empty() {
        // v is a single affine function on ℝ.
        let (y, c) = lines[spans[0].index];
        return PolyhedralFunc::from_lines(&[(0.0, -c)], y, y);
    }
    let dual: Vec<(f64, f64)> =
        breaks.iter().map(|&x| Ok((x, -v.evaluate(&vector(&[x]))?))).collect::<Result<Vec<_>>>()?;
    PolyhedralFunc::from_lines(&dual, dual_lo, dual_hi)
}

/// `(u*)*`, which equals `u` for a correctly represented convex function.
pub fn biconjugate(u: &PolyhedralFunc) -> Result<PolyhedralFunc> {
    conjugate_max_affine(&conjugate(u)?)
}

/// Infimal convolution `u □ v`, computed as `(u* + v*)*`.
pub fn inf_conv(u: &PolyhedralFunc, v: &PolyhedralFunc) -> Result<PolyhedralFunc> {
    check_dim(u.dim(), v.dim())?;
    u.coercivity_witness()?;
    v.coercivity_witness()?;
    conjugate_max_affine(&conjugate(u)?.add(&conjugate(v)?)?)
}

/// Pointwise maximum `u ∨ v`; `None` when the domains are disjoint.
pub fn max(u: &PolyhedralFunc, v: &PolyhedralFunc) -> Result<Option<PolyhedralFunc>> {
    check_dim(u.dim(), v.dim())?;
    let mut pieces = u.pieces();
    pieces.extend(v.pieces());
    if u.dim() == 1 {
        let ((a, b), (c, d)) = (u.interval()?, v.interval()?);
        let (lo, hi) = (a.max(c), b.min(d));
        if lo > hi {
            return Ok(None);
        }
        let lines: Vec<(f64, f64)> = pieces.iter().map(|(s, o)| (s[0], *o)).collect();
        return PolyhedralFunc::from_lines(&lines, lo, hi).map(Some);
    }
    let (Domain::Body(du), Domain::Body(dv)) = (u.domain(), v.domain()) else {
        return Err(Error::Unsupported("maximum of unbounded functions for n ≥ 2".into()));
    };
    let meet = if dv.facets().is_some() { intersect(du, dv)? } else { intersect(dv, du)? };
    match meet {
        Some(d) => PolyhedralFunc::from_pieces(&d, &pieces).map(Some),
        None => Ok(None),
    }
}

/// Pointwise minimum `u ∧ v`, which must be convex. It is built as
/// `(u* ∨ v*)*` and then compared with the pointwise minimum on the
/// vertices of the common refinement of all three cell complexes.
pub fn min(u: &PolyhedralFunc, v: &PolyhedralFunc) -> Result<PolyhedralFunc> {
    check_dim(u.dim(), v.dim())?;
    let w = conjugate_max_affine(&conjugate(u)?.max(&conjugate(v)?)?)?;
    let residual = min_residual(u, v, &w)?;
    if residual > CONVEXITY_EPS {
        return Err(Error::NonConvexMin { residual });
    }
    Ok(w)
}

fn min_residual(u: &PolyhedralFunc, v: &PolyhedralFunc, w: &PolyhedralFunc) -> Result<f64> {
    let mut points: Vec<Vector> = Vec::new();
    for f in [u, v, w] {
        points.extend(f.vertex_values().into_iter().map(|(x, _)| x));
    }
    let mut coverage_gap = 0.0;
    if u.dim() == 1 {
        // Crossings of every pair of pieces.
        let pieces: Vec<(Vector, f64)> = u.pieces().into_iter().chain(v.pieces()).chain(w.pieces()).collect();
        for (i, (a, b)) in pieces.iter().enumerate() {
            for (c, d) in &pieces[i + 1..] {
                if a[0] != c[0] {
                    points.push(vector(&[(d - b) / (a[0] - c[0])]));
                }
            }
        }
        let ((a, b), (c, d)) = (u.interval()?, v.interval()?);
        if a.max(c) > b.min(d) {
            coverage_gap = f64::INFINITY;
        }
    } else {
        let bodies = |f: &PolyhedralFunc| -> Vec<(Polytope, Vector, f64)> {
            f.cells()
                .iter()
                .filter_map(|c| match &c.shape {
                    CellShape::Bounded(p) => Some((p.clone(), c.slope.clone(), c.offset)),
                    CellShape::Unbounded { .. } => None,
                })
                .collect()
        };
        let (bu, bv, bw) = (bodies(u), bodies(v), bodies(w));
        for (xs, ys) in [(&bu, &bv), (&bu, &bw), (&bv, &bw)] {
            for (p, a, b) in xs {
                for (q, c, d) in ys {
                    let Some(meet) = intersect(p, q).ok().flatten() else { continue };
                    points.extend(meet.vertices().iter().cloned());
                    if let Ok(h) = Hyperplane::new(a - c, d - b) {
                        if let Ok((Some(s), _)) = split_by_hyperplane(&meet, &h) {
                            points.extend(s.vertices().iter().cloned());
                        }
                    }
                }
            }
        }
        if let (Domain::Body(du), Domain::Body(dv), Domain::Body(dw)) = (u.domain(), v.domain(), w.domain()) {
            if dw.is_full_dimensional() {
                let meet = intersect(du, dv).ok().flatten().map(|m| m.volume()).transpose()?.unwrap_or(0.0);
                let union = du.volume()? + dv.volume()? - meet;
                coverage_gap = (dw.volume()? - union).abs();
            }
        }
    }
    let mut worst = coverage_gap;
    for x in &points {
        let target = u.evaluate(x)?.min(v.evaluate(x)?);
        let got = w.evaluate(x)?;
        let diff = if target.is_infinite() && got.is_infinite() { 0.0 } else { (got - target).abs() };
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// The pair `(u + ind_{H⁺}, u + ind_{H⁻})`; either side may be empty.
pub fn split_pair(u: &PolyhedralFunc, h: &Hyperplane) -> Result<(Option<PolyhedralFunc>, Option<PolyhedralFunc>)> {
    let plus = u.restrict(&-h.normal(), -h.offset())?;
    let minus = u.restrict(h.normal(), h.offset())?;
    Ok((plus, minus))
}
