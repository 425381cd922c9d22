use nalgebra::DMatrix;

use super::hull::{dedup, hull};
use super::{
    affine_basis, cross3, dot3, factorial, lex_cmp, scale_of, sub3, to2, to3, vector, Hyperplane, Vector, EPS,
};
use crate::error::{check_dim, Error, Result};

/// Special families that are supported in every dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    General,
    /// Axis-parallel box `[lo, hi]`.
    Box {
        lo: Vector,
        hi: Vector,
    },
    Simplex,
}

/// A facet with its supporting hyperplane (outer unit normal) and the
/// indices of its vertices, counter-clockwise seen from outside in ℝ³.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub plane: Hyperplane,
    /// Unnormalized normal as computed from vertex differences. Carries the
    /// exact direction for inputs with exactly representable coordinates.
    pub raw_normal: Vector,
    pub vertices: Vec<usize>,
}

/// Nonempty convex polytope in canonical vertex form. The empty body is
/// modeled as `None` wherever an operation may produce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Option<Vec<Facet>>,
    family: Family,
    affine_dim: usize,
}

impl Polytope {
    /// Sorts vertices lexicographically and remaps facet indices.
    pub(crate) fn from_parts(
        dim: usize,
        vertices: Vec<Vector>,
        facets: Option<Vec<Facet>>,
        family: Family,
        affine_dim: usize,
    ) -> Self {
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(&vertices[a], &vertices[b]));
        let mut remap = vec![0; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<Vector> = order.iter().map(|&i| vertices[i].clone()).collect();
        let facets = facets.map(|fs| {
            fs.into_iter()
                .map(|mut f| {
                    for v in f.vertices.iter_mut() {
                        *v = remap[*v];
                    }
                    f
                })
                .collect()
        });
        Self { dim, vertices: sorted, facets, family, affine_dim }
    }

    pub fn from_points(points: &[Vector]) -> Result<Self> {
        hull(points)
    }

    pub fn point(x: &Vector) -> Self {
        Self::from_parts(x.len(), vec![x.clone()], None, Family::General, 0)
    }

    /// Axis-parallel box `[lo, hi]` in any dimension.
    pub fn new_box(lo: &Vector, hi: &Vector) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        if lo.iter().zip(hi.iter()).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput("box requires finite lo <= hi".into()));
        }
        if n > 16 {
            return Err(Error::Unsupported("boxes beyond dimension 16".into()));
        }
        let mut corners = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let c: Vec<f64> = (0..n).map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] }).collect();
            corners.push(vector(&c));
        }
        let family = Family::Box { lo: lo.clone(), hi: hi.clone() };
        if n <= 3 {
            let mut p = hull(&corners)?;
            p.family = family;
            return Ok(p);
        }
        let corners = dedup(&corners);
        let affine_dim = (0..n).filter(|&k| hi[k] > lo[k]).count();
        Ok(Self::from_parts(n, corners, None, family, affine_dim))
    }

    /// Box `[0, s₁] × … × [0, sₙ]`.
    pub fn from_sides(sides: &[f64]) -> Result<Self> {
        Self::new_box(&Vector::zeros(sides.len()), &vector(sides))
    }

    pub fn cube(n: usize, side: f64) -> Result<Self> {
        Self::from_sides(&vec![side; n])
    }

    /// Simplex with the given n+1 affinely independent vertices.
    pub fn simplex(vertices: &[Vector]) -> Result<Self> {
        let n = vertices.first().map(|v| v.len()).unwrap_or(0);
        if vertices.len() != n + 1 {
            return Err(Error::DegenerateSimplex(format!(
                "need {} vertices in dimension {n}, got {}",
                n + 1,
                vertices.len()
            )));
        }
        if affine_basis(vertices, EPS * scale_of(vertices)).len() != n {
            return Err(Error::DegenerateSimplex("vertices are affinely dependent".into()));
        }
        let mut p = hull(vertices)?;
        p.family = Family::Simplex;
        Ok(p)
    }

    /// `scale · conv{0, e₁, …, eₙ}`.
    pub fn standard_simplex(n: usize, scale: f64) -> Result<Self> {
        let mut vs = vec![Vector::zeros(n)];
        for k in 0..n {
            let mut e = Vector::zeros(n);
            e[k] = scale;
            vs.push(e);
        }
        Self::simplex(&vs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> Option<&[Facet]> {
        self.facets.as_deref()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub(crate) fn replace_facets(&mut self, facets: Vec<Facet>) {
        self.facets = Some(facets);
    }

    /// Lebesgue measure in the ambient dimension.
    pub fn volume(&self) -> Result<f64> {
        if !self.is_full_dimensional() {
            return Ok(0.0);
        }
        match (&self.family, self.dim) {
            (Family::Box { lo, hi }, _) => Ok((hi - lo).iter().product()),
            (_, 1) => Ok(self.vertices[1][0] - self.vertices[0][0]),
            (_, 2) => Ok(shoelace(&self.ccw_ring())),
            (_, 3) => {
                let c = self.centroid();
                let facets = self.facets.as_ref().ok_or(Error::MissingFacets)?;
                Ok(facets
                    .iter()
                    .map(|f| {
                        let h = f.plane.offset - f.plane.normal.dot(&c);
                        self.facet_area(f) * h / 3.0
                    })
                    .sum())
            }
            (Family::Simplex, n) => {
                let m = DMatrix::from_fn(n, n, |r, k| self.vertices[k + 1][r] - self.vertices[0][r]);
                Ok(m.determinant().abs() / factorial(n))
            }
            (_, n) => Err(Error::Unsupported(format!("volume of a general polytope in dimension {n}"))),
        }
    }

    /// (n−1)-dimensional measure of a facet.
    pub fn facet_area(&self, f: &Facet) -> f64 {
        match self.dim {
            1 => 1.0,
            2 => (&self.vertices[f.vertices[0]] - &self.vertices[f.vertices[1]]).norm(),
            3 => {
                let ring: Vec<[f64; 3]> = f.vertices.iter().map(|&i| to3(&self.vertices[i])).collect();
                polygon_area3(&ring, &to3(&f.plane.normal))
            }
            _ => f64::NAN,
        }
    }

    /// Sum of facet measures (perimeter in the plane).
    pub fn surface_area(&self) -> Result<f64> {
        let facets = self.facets.as_ref().ok_or(Error::MissingFacets)?;
        Ok(facets.iter().map(|f| self.facet_area(f)).sum())
    }

    /// Vertices of a full-dimensional polygon in counter-clockwise order.
    pub fn ccw_ring(&self) -> Vec<Vector> {
        match &self.facets {
            Some(fs) if self.dim == 2 => fs.iter().map(|f| self.vertices[f.vertices[0]].clone()).collect(),
            _ => self.vertices.clone(),
        }
    }

    /// Average of the vertices; an interior point of full-dimensional bodies.
    pub fn centroid(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    pub fn support(&self, y: &Vector) -> Result<f64> {
        check_dim(self.dim, y.len())?;
        Ok(self.vertices.iter().map(|v| v.dot(y)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// Radius of the smallest ball centered at `center` containing the body.
    pub fn circumradius(&self, center: &Vector) -> f64 {
        self.vertices.iter().map(|v| (v - center).norm()).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        if let Family::Box { lo, hi } = &self.family {
            return Ok((0..self.dim).all(|k| x[k] >= lo[k] - tol && x[k] <= hi[k] + tol));
        }
        if self.is_full_dimensional() {
            if let Some(fs) = &self.facets {
                return Ok(fs.iter().all(|f| f.plane.signed_distance(x) <= tol));
            }
            if self.family == Family::Simplex {
                let n = self.dim;
                let m = DMatrix::from_fn(n, n, |r, k| self.vertices[k + 1][r] - self.vertices[0][r]);
                let rhs = x - &self.vertices[0];
                let lu = m.lu();
                let lam = lu.solve(&rhs).ok_or_else(|| Error::DegenerateSimplex("singular".into()))?;
                let s: f64 = lam.iter().sum();
                return Ok(lam.iter().all(|&l| l >= -tol) && s <= 1.0 + tol);
            }
            return Err(Error::Unsupported("membership without facets".into()));
        }
        let (origin, basis, local) = self.in_affine_hull()?;
        let d = x - &origin;
        let coords: Vec<f64> = basis.iter().map(|b| b.dot(&d)).collect();
        let mut residual = d.clone();
        for (b, c) in basis.iter().zip(&coords) {
            residual -= b * *c;
        }
        if residual.norm() > tol {
            return Ok(false);
        }
        match local {
            None => Ok(true),
            Some(local) => local.contains(&vector(&coords), tol),
        }
    }

    /// Expresses a lower-dimensional body in coordinates of its affine hull.
    /// Returns the origin, an orthonormal basis, and the body in ℝᵏ (or
    /// `None` for a point).
    pub fn in_affine_hull(&self) -> Result<(Vector, Vec<Vector>, Option<Polytope>)> {
        let origin = self.vertices[0].clone();
        if self.affine_dim == 0 {
            return Ok((origin, Vec::new(), None));
        }
        let basis = affine_basis(&self.vertices, EPS * 1e-3 * scale_of(&self.vertices));
        let basis: Vec<Vector> = basis.into_iter().take(self.affine_dim).collect();
        let local: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| {
                let d = v - &origin;
                Vector::from_iterator(basis.len(), basis.iter().map(|b| b.dot(&d)))
            })
            .collect();
        Ok((origin, basis, Some(hull(&local)?)))
    }

    pub fn translate(&self, t: &Vector) -> Result<Self> {
        check_dim(self.dim, t.len())?;
        let vertices = self.vertices.iter().map(|v| v + t).collect();
        let facets = self.facets.as_ref().map(|fs| {
            fs.iter()
                .map(|f| Facet {
                    plane: Hyperplane {
                        normal: f.plane.normal.clone(),
                        offset: f.plane.offset + f.plane.normal.dot(t),
                    },
                    raw_normal: f.raw_normal.clone(),
                    vertices: f.vertices.clone(),
                })
                .collect()
        });
        let family = match &self.family {
            Family::Box { lo, hi } => Family::Box { lo: lo + t, hi: hi + t },
            f => f.clone(),
        };
        Ok(Self { dim: self.dim, vertices, facets, family, affine_dim: self.affine_dim })
    }

    /// The dilate `λP` about the origin; `λ = 0` gives the point {0}.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        if lambda == 0.0 {
            return Ok(Self::point(&Vector::zeros(self.dim)));
        }
        let vertices = self.vertices.iter().map(|v| v * lambda).collect();
        let facets = self.facets.as_ref().map(|fs| {
            fs.iter()
                .map(|f| Facet {
                    plane: Hyperplane { normal: f.plane.normal.clone(), offset: f.plane.offset * lambda },
                    raw_normal: f.raw_normal.clone(),
                    vertices: f.vertices.clone(),
                })
                .collect()
        });
        let family = match &self.family {
            Family::Box { lo, hi } => Family::Box { lo: lo * lambda, hi: hi * lambda },
            f => f.clone(),
        };
        Ok(Self { dim: self.dim, vertices, facets, family, affine_dim: self.affine_dim })
    }

    /// Image under `x ↦ A x + b`.
    pub fn map_affine(&self, a: &DMatrix<f64>, b: &Vector) -> Result<Self> {
        check_dim(self.dim, a.ncols())?;
        check_dim(a.nrows(), b.len())?;
        let pts: Vec<Vector> = self.vertices.iter().map(|v| a * v + b).collect();
        if self.dim > 3 {
            if let Family::Simplex = self.family {
                return Self::simplex(&pts);
            }
        }
        hull(&pts)
    }

    /// Edges of a 3-polytope with the two facets meeting there.
    pub fn edges(&self) -> Result<Vec<Edge>> {
        if self.dim != 3 {
            return Err(Error::Unsupported("edge extraction is implemented for n = 3".into()));
        }
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let facets = self.facets.as_ref().ok_or(Error::MissingFacets)?;
        let mut map: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for (fi, f) in facets.iter().enumerate() {
            let k = f.vertices.len();
            for i in 0..k {
                let a = f.vertices[i];
                let b = f.vertices[(i + 1) % k];
                map.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        map.into_iter()
            .map(|((a, b), fs)| {
                if fs.len() != 2 {
                    return Err(Error::InvalidInput(format!("edge ({a},{b}) borders {} facets", fs.len())));
                }
                Ok(Edge { a, b, facets: [fs[0], fs[1]] })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub facets: [usize; 2],
}

pub(crate) fn shoelace(ring: &[Vector]) -> f64 {
    let k = ring.len();
    let mut s = 0.0;
    for i in 0..k {
        let a = to2(&ring[i]);
        let b = to2(&ring[(i + 1) % k]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub(crate) fn polygon_area3(ring: &[[f64; 3]], normal: &[f64; 3]) -> f64 {
    let k = ring.len();
    let mut acc = [0.0; 3];
    for i in 1..k.saturating_sub(1) {
        let c = cross3(&sub3(&ring[i], &ring[0]), &sub3(&ring[i + 1], &ring[0]));
        acc = [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]];
    }
    0.5 * dot3(&acc, normal).abs()
}
