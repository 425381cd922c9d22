use nalgebra::DMatrix;

use super::envelope::upper_envelope_1d;
use crate::error::{check_dim, Error, Result};
use crate::geom::{affine_basis, hull, intersect, scale_of, split_by_hyperplane, vector, Hyperplane, Polytope, Vector};

/// Largest convexity violation accepted from input data.
pub const CONVEXITY_EPS: f64 = 1e-8;

/// Tolerance for membership in the domain during evaluation.
const DOMAIN_EPS: f64 = 1e-10;

/// Closed halfspace `{x : ⟨normal, x⟩ ≤ offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Self {
        Self { normal, offset }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol * self.normal.norm().max(1.0)
    }
}

/// Support of one affine piece.
#[derive(Debug, Clone, PartialEq)]
pub enum CellShape {
    Bounded(Polytope),
    /// `conv(vertices) + cone(rays)`.
    Unbounded {
        vertices: Vec<Vector>,
        rays: Vec<Vector>,
    },
}

/// The function equals `⟨slope, x⟩ + offset` on the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub shape: CellShape,
    pub slope: Vector,
    pub offset: f64,
}

impl Cell {
    pub fn bounded(body: Polytope, slope: Vector, offset: f64) -> Self {
        Self { shape: CellShape::Bounded(body), slope, offset }
    }

    pub fn unbounded(vertices: Vec<Vector>, rays: Vec<Vector>, slope: Vector, offset: f64) -> Self {
        Self { shape: CellShape::Unbounded { vertices, rays }, slope, offset }
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn vertices(&self) -> &[Vector] {
        match &self.shape {
            CellShape::Bounded(p) => p.vertices(),
            CellShape::Unbounded { vertices, .. } => vertices,
        }
    }

    pub fn rays(&self) -> &[Vector] {
        match &self.shape {
            CellShape::Bounded(_) => &[],
            CellShape::Unbounded { rays, .. } => rays,
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.slope.dot(x) + self.offset
    }

    /// Lebesgue measure; infinite for full-dimensional unbounded cells.
    pub fn volume(&self) -> Result<f64> {
        match &self.shape {
            CellShape::Bounded(p) => p.volume(),
            CellShape::Unbounded { vertices, rays } => {
                let mut pts = vertices.clone();
                pts.extend(rays.iter().map(|r| &vertices[0] + r));
                let full = affine_basis(&pts, 1e-12 * scale_of(&pts)).len() == self.dim();
                Ok(if full { f64::INFINITY } else { 0.0 })
            }
        }
    }

    /// `[lo, hi]` of a cell on the line (ends may be infinite).
    fn interval(&self) -> (f64, f64) {
        let xs = self.vertices().iter().map(|v| v[0]);
        let mut lo = xs.clone().fold(f64::INFINITY, f64::min);
        let mut hi = xs.fold(f64::NEG_INFINITY, f64::max);
        for r in self.rays() {
            if r[0] < 0.0 {
                lo = f64::NEG_INFINITY;
            }
            if r[0] > 0.0 {
                hi = f64::INFINITY;
            }
        }
        (lo, hi)
    }
}

/// `dom u`, either a polytope or an intersection of finitely many halfspaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Body(Polytope),
    Unbounded(Vec<Halfspace>),
}

impl Domain {
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        match self {
            Domain::Body(p) => p.contains(x, tol),
            Domain::Unbounded(hs) => Ok(hs.iter().all(|h| h.contains(x, tol))),
        }
    }

    pub fn body(&self) -> Option<&Polytope> {
        match self {
            Domain::Body(p) => Some(p),
            Domain::Unbounded(_) => None,
        }
    }
}

/// `u(x) ≥ a|x| + b` for all `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityWitness {
    pub a: f64,
    pub b: f64,
}

impl CoercivityWitness {
    /// Checks the bound at every cell vertex and along every ray, which
    /// suffices by convexity of the norm.
    pub fn verify(&self, u: &PolyhedralFunc) -> bool {
        u.cells.iter().all(|c| {
            c.vertices().iter().all(|v| c.value(v) >= self.a * v.norm() + self.b - 1e-9 * (1.0 + c.value(v).abs()))
                && c.rays().iter().all(|r| c.slope.dot(r) >= self.a * r.norm() - 1e-12)
        })
    }
}

/// Convex piecewise-affine function, `+∞` outside its domain. Inside the
/// domain it is the maximum of its pieces, which is how it is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralFunc {
    dim: usize,
    cells: Vec<Cell>,
    domain: Domain,
}

fn cut(p: &Polytope, normal: &Vector, offset: f64) -> Result<Option<Polytope>> {
    let len = normal.norm();
    if len < 1e-14 {
        return Ok(if offset >= -1e-12 { Some(p.clone()) } else { None });
    }
    Ok(split_by_hyperplane(p, &Hyperplane::new(normal.clone(), offset)?)?.1)
}

fn interval_domain(lo: f64, hi: f64) -> Result<Domain> {
    if lo.is_finite() && hi.is_finite() {
        return Ok(Domain::Body(hull(&[vector(&[lo]), vector(&[hi])])?));
    }
    let mut hs = Vec::new();
    if lo.is_finite() {
        hs.push(Halfspace::new(vector(&[-1.0]), -lo));
    }
    if hi.is_finite() {
        hs.push(Halfspace::new(vector(&[1.0]), hi));
    }
    Ok(Domain::Unbounded(hs))
}

fn interval_cell(lo: f64, hi: f64, slope: f64, offset: f64) -> Result<Cell> {
    let slope = vector(&[slope]);
    Ok(match (lo.is_finite(), hi.is_finite()) {
        (true, true) => Cell::bounded(hull(&[vector(&[lo]), vector(&[hi])])?, slope, offset),
        (true, false) => Cell::unbounded(vec![vector(&[lo])], vec![vector(&[1.0])], slope, offset),
        (false, true) => Cell::unbounded(vec![vector(&[hi])], vec![vector(&[-1.0])], slope, offset),
        (false, false) => Cell::unbounded(vec![vector(&[0.0])], vec![vector(&[-1.0]), vector(&[1.0])], slope, offset),
    })
}

impl PolyhedralFunc {
    /// Builds a function from cells whose union is its domain. The domain
    /// is the convex hull of the cells; unbounded cells need `n = 1` here
    /// (use [`PolyhedralFunc::with_domain`] otherwise).
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self> {
        let dim = cells.first().ok_or_else(|| Error::InvalidInput("no cells".into()))?.dim();
        for c in &cells {
            check_dim(dim, c.dim())?;
            for v in c.vertices().iter().chain(c.rays()) {
                check_dim(dim, v.len())?;
            }
        }
        let bounded = cells.iter().all(|c| matches!(c.shape, CellShape::Bounded(_)));
        let domain = if bounded {
            let pts: Vec<Vector> = cells.iter().flat_map(|c| c.vertices().iter().cloned()).collect();
            Domain::Body(hull(&pts)?)
        } else if dim == 1 {
            let (lo, hi) = cells
                .iter()
                .map(Cell::interval)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (a, b)| (l.min(a), h.max(b)));
            interval_domain(lo, hi)?
        } else {
            return Err(Error::Unsupported("unbounded cells without an explicit domain for n ≥ 2".into()));
        };
        let u = Self::with_domain(cells, domain)?;
        if let Domain::Body(d) = &u.domain {
            if d.is_full_dimensional() && dim <= 3 {
                let total = d.volume()?;
                let covered: f64 = u.cells.iter().map(|c| c.volume()).sum::<Result<f64>>()?;
                if (covered - total).abs() > 1e-9 * total.max(1e-300) {
                    return Err(Error::InvalidInput(format!(
                        "cells cover volume {covered} of a convex hull with volume {total}"
                    )));
                }
            }
        }
        Ok(u)
    }

    /// Builds a function on an explicit domain, trusting that the cells
    /// cover it. Convexity is still certified.
    pub fn with_domain(cells: Vec<Cell>, domain: Domain) -> Result<Self> {
        let dim = cells.first().ok_or_else(|| Error::InvalidInput("no cells".into()))?.dim();
        let u = Self { dim, cells, domain };
        let residual = u.convexity_residual();
        if residual > CONVEXITY_EPS {
            return Err(Error::NonConvexInput { residual });
        }
        Ok(u)
    }

    pub(crate) fn from_parts(dim: usize, cells: Vec<Cell>, domain: Domain) -> Self {
        Self { dim, cells, domain }
    }

    /// `ind_K`.
    pub fn indicator(k: &Polytope) -> Self {
        Self::linear_plus_indicator(&Vector::zeros(k.dim()), k).expect("dimensions agree")
    }

    /// `ℓ_y + ind_K` with `ℓ_y(x) = ⟨y, x⟩`.
    pub fn linear_plus_indicator(y: &Vector, k: &Polytope) -> Result<Self> {
        Self::affine_on(k, y, 0.0)
    }

    /// `⟨slope, x⟩ + offset` restricted to `K`.
    pub fn affine_on(k: &Polytope, slope: &Vector, offset: f64) -> Result<Self> {
        check_dim(k.dim(), slope.len())?;
        Ok(Self {
            dim: k.dim(),
            cells: vec![Cell::bounded(k.clone(), slope.clone(), offset)],
            domain: Domain::Body(k.clone()),
        })
    }

    /// Gauge `g_K(x) = min{t ≥ 0 : x ∈ tK}`. With the origin on the
    /// boundary the domain is the cone spanned by `K`.
    pub fn gauge(k: &Polytope) -> Result<Self> {
        let n = k.dim();
        let scale = scale_of(k.vertices());
        let origin = Vector::zeros(n);
        if !k.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        if !k.contains(&origin, 1e-12 * scale)? {
            return Err(Error::OriginOutside);
        }
        let facets = k.facets().ok_or(Error::MissingFacets)?;
        let mut cells = Vec::new();
        let mut walls = Vec::new();
        for f in facets {
            let c = f.plane.offset();
            if c <= 1e-12 * scale {
                walls.push(Halfspace::new(f.plane.normal().clone(), 0.0));
                continue;
            }
            let rays: Vec<Vector> = f.vertices.iter().map(|&i| k.vertices()[i].clone()).collect();
            cells.push(Cell::unbounded(vec![origin.clone()], rays, f.plane.normal() / c, 0.0));
        }
        Ok(Self { dim: n, cells, domain: Domain::Unbounded(walls) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// `[lo, hi]` of the domain on the line.
    pub fn interval(&self) -> Result<(f64, f64)> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.dim });
        }
        Ok(match &self.domain {
            Domain::Body(p) => (p.vertices()[0][0], p.vertices().last().expect("nonempty")[0]),
            Domain::Unbounded(hs) => {
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for h in hs {
                    if h.normal[0] > 0.0 {
                        hi = hi.min(h.offset / h.normal[0]);
                    } else if h.normal[0] < 0.0 {
                        lo = lo.max(h.offset / h.normal[0]);
                    }
                }
                (lo, hi)
            }
        })
    }

    /// Distinct affine pieces `(slope, offset)`.
    pub fn pieces(&self) -> Vec<(Vector, f64)> {
        let mut out: Vec<(Vector, f64)> = Vec::new();
        for c in &self.cells {
            if !out.iter().any(|(s, b)| *s == c.slope && *b == c.offset) {
                out.push((c.slope.clone(), c.offset));
            }
        }
        out
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let tol = DOMAIN_EPS * x.amax().max(1.0);
        if !self.domain.contains(x, tol)? {
            return Ok(f64::INFINITY);
        }
        Ok(self.cells.iter().map(|c| c.value(x)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// Largest amount by which a piece exceeds the piece of the cell it is
    /// evaluated on, over all cell vertices and rays. Zero for convex input.
    pub fn convexity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, ci) in self.cells.iter().enumerate() {
            for (j, cj) in self.cells.iter().enumerate() {
                if i == j {
                    continue;
                }
                for w in ci.vertices() {
                    worst = worst.max(cj.value(w) - ci.value(w));
                }
                for r in ci.rays() {
                    worst = worst.max((&cj.slope - &ci.slope).dot(r) / r.norm());
                }
            }
        }
        worst
    }

    /// Every cell vertex with the value of its own piece.
    pub fn vertex_values(&self) -> Vec<(Vector, f64)> {
        self.cells.iter().flat_map(|c| c.vertices().iter().map(move |v| (v.clone(), c.value(v)))).collect()
    }

    pub fn coercivity_witness(&self) -> Result<CoercivityWitness> {
        let mut a = 1.0f64;
        for c in &self.cells {
            for r in c.rays() {
                let growth = c.slope.dot(r) / r.norm();
                if growth <= 0.0 {
                    return Err(Error::NotCoercive { direction: r.iter().copied().collect() });
                }
                a = a.min(growth);
            }
        }
        let b = self.vertex_values().iter().map(|(v, val)| val - a * v.norm()).fold(f64::INFINITY, f64::min);
        Ok(CoercivityWitness { a, b })
    }

    /// `min u`, attained at a cell vertex.
    pub fn minimum(&self) -> Result<f64> {
        self.coercivity_witness()?;
        Ok(self.vertex_values().iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min))
    }

    /// `{u ≤ t}`, or `None` below the minimum.
    pub fn sublevel(&self, t: f64) -> Result<Option<Polytope>> {
        let witness = self.coercivity_witness()?;
        let min = self.minimum()?;
        if t < min - 1e-12 * min.abs().max(1.0) {
            return Ok(None);
        }
        let t = t.max(min);
        let mut body = match &self.domain {
            Domain::Body(p) => p.clone(),
            Domain::Unbounded(hs) => {
                let r = ((t - witness.b) / witness.a).max(0.0) * 1.01 + 1.0;
                let mut b = Polytope::new_box(&Vector::from_element(self.dim, -r), &Vector::from_element(self.dim, r))?;
                for h in hs {
                    match cut(&b, &h.normal, h.offset)? {
                        Some(next) => b = next,
                        None => return Ok(None),
                    }
                }
                b
            }
        };
        for (slope, offset) in self.pieces() {
            match cut(&body, &slope, t - offset)? {
                Some(next) => body = next,
                None => return Ok(None),
            }
        }
        Ok(Some(body))
    }

    /// `w(x) = s·u(M⁻¹(x − t)) + c` for invertible `M` and `s > 0`.
    pub(crate) fn affine_change(&self, m: &DMatrix<f64>, t: &Vector, s: f64, c: f64) -> Result<Self> {
        check_dim(self.dim, m.ncols())?;
        check_dim(self.dim, t.len())?;
        let m_inv = m.clone().try_inverse().ok_or_else(|| Error::SingularSystem("linear map".into()))?;
        let m_inv_t = m_inv.transpose();
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                let slope = &m_inv_t * &cell.slope * s;
                let offset = s * (cell.offset - cell.slope.dot(&(&m_inv * t))) + c;
                let shape = match &cell.shape {
                    CellShape::Bounded(p) => CellShape::Bounded(p.map_affine(m, t)?),
                    CellShape::Unbounded { vertices, rays } => CellShape::Unbounded {
                        vertices: vertices.iter().map(|v| m * v + t).collect(),
                        rays: rays.iter().map(|r| m * r).collect(),
                    },
                };
                Ok(Cell { shape, slope, offset })
            })
            .collect::<Result<Vec<_>>>()?;
        let domain = match &self.domain {
            Domain::Body(p) => Domain::Body(p.map_affine(m, t)?),
            Domain::Unbounded(hs) => Domain::Unbounded(
                hs.iter()
                    .map(|h| {
                        let normal = &m_inv_t * &h.normal;
                        let offset = h.offset + normal.dot(t);
                        Halfspace::new(normal, offset)
                    })
                    .collect(),
            ),
        };
        Ok(Self { dim: self.dim, cells, domain })
    }

    /// `u + t`.
    pub fn shift(&self, t: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.cells {
            c.offset += t;
        }
        out
    }

    /// `x ↦ u(x − x₀)`.
    pub fn translate(&self, x0: &Vector) -> Result<Self> {
        self.affine_change(&DMatrix::identity(self.dim, self.dim), x0, 1.0, 0.0)
    }

    /// Epi-multiplication `(λ◻u)(x) = λ u(x/λ)`, with `0◻u = ind_{0}`.
    pub fn epi_scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        if lambda == 0.0 {
            return Ok(Self::indicator(&Polytope::point(&Vector::zeros(self.dim))));
        }
        self.affine_change(&(DMatrix::identity(self.dim, self.dim) * lambda), &Vector::zeros(self.dim), lambda, 0.0)
    }

    /// `(λ⊙u)(x) = u(x/λ)` for `λ > 0`.
    pub fn horizontal_scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        self.affine_change(&(DMatrix::identity(self.dim, self.dim) * lambda), &Vector::zeros(self.dim), 1.0, 0.0)
    }

    /// `x ↦ u(A⁻¹x)` for invertible `A`.
    pub fn linear_image(&self, a: &DMatrix<f64>) -> Result<Self> {
        self.affine_change(a, &Vector::zeros(self.dim), 1.0, 0.0)
    }

    /// Restriction to `{⟨normal, x⟩ ≤ offset}`, or `None` if that misses
    /// the domain.
    pub fn restrict(&self, normal: &Vector, offset: f64) -> Result<Option<Self>> {
        check_dim(self.dim, normal.len())?;
        if self.dim == 1 {
            let (mut lo, mut hi) = self.interval()?;
            let bound = offset / normal[0];
            if normal[0] > 0.0 {
                hi = hi.min(bound);
            } else if normal[0] < 0.0 {
                lo = lo.max(bound);
            }
            if lo > hi {
                return Ok(None);
            }
            return Ok(Some(self.restrict_interval(lo, hi)?));
        }
        let Domain::Body(d) = &self.domain else {
            return Err(Error::Unsupported("restricting unbounded functions for n ≥ 2".into()));
        };
        let Some(domain) = cut(d, normal, offset)? else {
            return Ok(None);
        };
        let mut cells = Vec::new();
        for c in &self.cells {
            let CellShape::Bounded(p) = &c.shape else { unreachable!("bounded domain") };
            if let Some(q) = cut(p, normal, offset)? {
                if q.affine_dim() == domain.affine_dim() {
                    cells.push(Cell::bounded(q, c.slope.clone(), c.offset));
                }
            }
        }
        if cells.is_empty() {
            // The domain touches the plane in a face smaller than every cell
            // piece; keep the pieces of the cells meeting it.
            for c in &self.cells {
                let CellShape::Bounded(p) = &c.shape else { unreachable!() };
                if let Some(q) = intersect(&domain, p).ok().flatten() {
                    cells.push(Cell::bounded(q, c.slope.clone(), c.offset));
                }
            }
        }
        Ok(Some(Self { dim: self.dim, cells, domain: Domain::Body(domain) }))
    }

    fn restrict_interval(&self, lo: f64, hi: f64) -> Result<Self> {
        let mut cells = Vec::new();
        for c in &self.cells {
            let (a, b) = c.interval();
            let (a, b) = (a.max(lo), b.min(hi));
            if a < b || (lo == hi && a == b) {
                cells.push(interval_cell(a, b, c.slope[0], c.offset)?);
            }
        }
        if cells.is_empty() {
            let x = vector(&[lo]);
            let v = self.evaluate(&x)?;
            cells.push(interval_cell(lo, lo, 0.0, v)?);
        }
        Ok(Self { dim: 1, cells, domain: interval_domain(lo, hi)? })
    }

    /// `max_i ⟨a_i, x⟩ + b_i` on the interval `[lo, hi]` (ends may be
    /// infinite).
    pub(crate) fn from_lines(lines: &[(f64, f64)], lo: f64, hi: f64) -> Result<Self> {
        let spans = upper_envelope_1d(lines, lo, hi);
        let cells = spans
            .iter()
            .map(|s| {
                let (a, b) = lines[s.index];
                interval_cell(s.start, s.end, a, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: 1, cells, domain: interval_domain(lo, hi)? })
    }

    /// `max_i ⟨a_i, x⟩ + b_i` on a polytope, cut into the regions where
    /// each piece is largest (`n ≤ 3`).
    pub(crate) fn from_pieces(domain: &Polytope, pieces: &[(Vector, f64)]) -> Result<Self> {
        let n = domain.dim();
        if n == 1 {
            let lines: Vec<(f64, f64)> = pieces.iter().map(|(a, b)| (a[0], *b)).collect();
            let (lo, hi) = (domain.vertices()[0][0], domain.vertices().last().expect("nonempty")[0]);
            return Self::from_lines(&lines, lo, hi);
        }
        let mut cells = Vec::new();
        'pieces: for (i, (ai, bi)) in pieces.iter().enumerate() {
            let mut region = domain.clone();
            for (j, (aj, bj)) in pieces.iter().enumerate() {
                if i == j {
                    continue;
                }
                let normal = aj - ai;
                if normal.norm() < 1e-14 {
                    if bj > bi || (bj == bi && j < i) {
                        continue 'pieces;
                    }
                    continue;
                }
                match cut(&region, &normal, bi - bj)? {
                    Some(next) => region = next,
                    None => continue 'pieces,
                }
            }
            if region.affine_dim() == domain.affine_dim() {
                cells.push(Cell::bounded(region, ai.clone(), *bi));
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidInput("no piece is active on the domain".into()));
        }
        Ok(Self { dim: n, cells, domain: Domain::Body(domain.clone()) })
    }
}
