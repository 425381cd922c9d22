use super::envelope::{lower_hull_2d, upper_envelope_1d};
use super::polyhedral::{Cell, Domain, PolyhedralFunc};
use crate::error::{check_dim, Error, Result};
use crate::geom::{hull, vector, Vector};

/// `v(x) = max_i ⟨y_i, x⟩ + c_i`, finite on ℝⁿ. On the line an interval
/// domain is allowed, outside of which `v = +∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxAffineFunc {
    dim: usize,
    pieces: Vec<(Vector, f64)>,
    interval: Option<(f64, f64)>,
}

impl MaxAffineFunc {
    /// Builds the function and drops pieces that are not active on an
    /// open set (exact for `n ≤ 2`, duplicate slopes only beyond).
    pub fn new(pieces: Vec<(Vector, f64)>) -> Result<Self> {
        Self::build(pieces, None)
    }

    /// One-dimensional function restricted to `[lo, hi]`.
    pub fn on_interval(pieces: Vec<(Vector, f64)>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        Self::build(pieces, Some((lo, hi)))
    }

    pub(crate) fn build(pieces: Vec<(Vector, f64)>, interval: Option<(f64, f64)>) -> Result<Self> {
        let dim = pieces.first().ok_or_else(|| Error::InvalidInput("no pieces".into()))?.0.len();
        for (y, c) in &pieces {
            check_dim(dim, y.len())?;
            if !c.is_finite() || y.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite piece".into()));
            }
        }
        if interval.is_some() && dim != 1 {
            return Err(Error::Unsupported("restricted max-affine functions beyond n = 1".into()));
        }
        let interval = interval.filter(|&(lo, hi)| lo.is_finite() || hi.is_finite());
        let mut unique: Vec<(Vector, f64)> = Vec::new();
        for (y, c) in pieces {
            match unique.iter_mut().find(|(s, _)| *s == y) {
                Some(slot) => slot.1 = slot.1.max(c),
                None => unique.push((y, c)),
            }
        }
        let keep: Vec<bool> = match dim {
            1 => {
                let (lo, hi) = interval.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
                let lines: Vec<(f64, f64)> = unique.iter().map(|(y, c)| (y[0], *c)).collect();
                let spans = upper_envelope_1d(&lines, lo, hi);
                (0..unique.len()).map(|i| spans.iter().any(|s| s.index == i)).collect()
            }
            2 => {
                let lifted: Vec<(Vector, f64)> = unique.iter().map(|(y, c)| (y.clone(), -c)).collect();
                let cells = lower_hull_2d(&lifted)?;
                lifted
                    .iter()
                    .map(|(y, z)| {
                        cells
                            .iter()
                            .flat_map(|c| c.points.iter().map(move |p| (p, c)))
                            .any(|(p, c)| p == y && (c.slope.dot(y) + c.offset - z).abs() <= 1e-9 * (1.0 + z.abs()))
                    })
                    .collect()
            }
            _ => vec![true; unique.len()],
        };
        let pieces: Vec<(Vector, f64)> = unique.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
        Ok(Self { dim, pieces, interval })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(Vector, f64)] {
        &self.pieces
    }

    /// The interval domain on the line, if restricted.
    pub fn interval(&self) -> Option<(f64, f64)> {
        self.interval
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        if let Some((lo, hi)) = self.interval {
            let tol = 1e-12 * x[0].abs().max(1.0);
            if x[0] < lo - tol || x[0] > hi + tol {
                return Ok(f64::INFINITY);
            }
        }
        Ok(self.pieces.iter().map(|(y, c)| y.dot(x) + c).fold(f64::NEG_INFINITY, f64::max))
    }

    /// Indices of pieces attaining the maximum at `x` within `tol`.
    pub fn active(&self, x: &Vector, tol: f64) -> Vec<usize> {
        let values: Vec<f64> = self.pieces.iter().map(|(y, c)| y.dot(x) + c).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..values.len()).filter(|&i| values[i] >= best - tol).collect()
    }

    fn meet_intervals(&self, other: &Self) -> Result<Option<(f64, f64)>> {
        Ok(match (self.interval, other.interval) {
            (None, i) | (i, None) => i,
            (Some((a, b)), Some((c, d))) => {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo > hi {
                    return Err(Error::EmptyBody);
                }
                Some((lo, hi))
            }
        })
    }

    /// Pointwise sum, with pieces added pairwise.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let interval = self.meet_intervals(other)?;
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for (y, c) in &self.pieces {
            for (z, d) in &other.pieces {
                pieces.push((y + z, c + d));
            }
        }
        Self::build(pieces, interval)
    }

    /// The same function as a cell complex on ℝⁿ (`n ≤ 2`), for use as a
    /// primal function. The cell of piece `i` is the hull of the adjacent
    /// vertices plus the normal cone of the slope hull at `y_i`.
    ///
    /// Slopes with a lower-dimensional hull give cells with a lineality
    /// space, which are not representable; such functions are never
    /// coercive and are reported as [`Error::NotCoercive`].
    pub fn to_polyhedral(&self) -> Result<PolyhedralFunc> {
        if self.dim == 1 {
            let (lo, hi) = self.interval.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
            let lines: Vec<(f64, f64)> = self.pieces.iter().map(|(y, c)| (y[0], *c)).collect();
            return PolyhedralFunc::from_lines(&lines, lo, hi);
        }
        if self.dim != 2 {
            return Err(Error::Unsupported(format!(
                "cell complexes of max-affine functions in dimension {}",
                self.dim
            )));
        }
        let slopes: Vec<Vector> = self.pieces.iter().map(|(y, _)| y.clone()).collect();
        let k = hull(&slopes)?;
        let Some(facets) = k.facets().filter(|_| k.is_full_dimensional()) else {
            return Err(Error::NotCoercive { direction: flat_direction(&slopes) });
        };
        let lifted: Vec<(Vector, f64)> = self.pieces.iter().map(|(y, c)| (y.clone(), -c)).collect();
        let dual = lower_hull_2d(&lifted)?;
        let mut cells = Vec::with_capacity(self.pieces.len());
        for (y, c) in &self.pieces {
            let vertices: Vec<Vector> =
                dual.iter().filter(|d| d.points.iter().any(|p| p == y)).map(|d| d.slope.clone()).collect();
            let tol = 1e-12 * (1.0 + y.amax());
            let rays: Vec<Vector> = facets
                .iter()
                .filter(|f| (f.plane.normal().dot(y) - f.plane.offset()).abs() <= tol)
                .map(|f| f.plane.normal().clone())
                .collect();
            cells.push(if rays.is_empty() {
                Cell::bounded(hull(&vertices)?, y.clone(), *c)
            } else {
                Cell::unbounded(vertices, rays, y.clone(), *c)
            });
        }
        PolyhedralFunc::with_domain(cells, Domain::Unbounded(Vec::new()))
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let interval = self.meet_intervals(other)?;
        let pieces = self.pieces.iter().chain(&other.pieces).cloned().collect();
        Self::build(pieces, interval)
    }
}

/// A direction along which every piece is non-increasing, for slopes
/// spanning at most a line in the plane.
fn flat_direction(slopes: &[Vector]) -> Vec<f64> {
    let base = &slopes[0];
    let along = slopes
        .iter()
        .map(|y| y - base)
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .filter(|d| d.norm() > 0.0)
        .unwrap_or_else(|| if base.norm() > 0.0 { base.clone() } else { vector(&[1.0, 0.0]) });
    let perp = vector(&[-along[1], along[0]]).normalize();
    let d = if base.dot(&perp) <= 0.0 { perp } else { -perp };
    d.iter().copied().collect()
}
