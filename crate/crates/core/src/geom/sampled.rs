use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::ball::{circle_directions, fibonacci_sphere};
use super::hull::hull;
use super::polytope::Polytope;
use super::{vector, Vector};
use crate::error::{check_dim, Error, Result};

/// Convex body known through its support values on a fixed direction set.
#[derive(Debug, Clone)]
pub struct SampledBody {
    directions: Vec<Vector>,
    values: Vec<f64>,
    envelope: OnceLock<std::result::Result<Polytope, Error>>,
}

/// Proper rotation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation(DMatrix<f64>);

impl Rotation {
    /// Accepts `m` if `mᵀm = I` and `det m = 1` within 1e−10.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidRotation("matrix is not square".into()));
        }
        let n = m.nrows();
        let dev = (m.transpose() * &m - DMatrix::identity(n, n)).amax();
        if dev > 1e-10 {
            return Err(Error::InvalidRotation(format!("orthogonality defect {dev:e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidRotation(format!("determinant {det}")));
        }
        Ok(Self(m))
    }

    pub fn planar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    /// Rotation by `angle` about a unit `axis` in ℝ³.
    pub fn axis_angle(axis: &Vector, angle: f64) -> Result<Self> {
        check_dim(3, axis.len())?;
        let a = axis.normalize();
        let r = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(nalgebra::Vector3::new(a[0], a[1], a[2])),
            angle,
        );
        Ok(Self(DMatrix::from_fn(3, 3, |i, j| r[(i, j)])))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.0 * x
    }
}

impl SampledBody {
    pub fn new(directions: Vec<Vector>, values: Vec<f64>) -> Result<Self> {
        if directions.is_empty() || directions.len() != values.len() {
            return Err(Error::InvalidInput("need one support value per direction".into()));
        }
        let n = directions[0].len();
        for (u, h) in directions.iter().zip(&values) {
            check_dim(n, u.len())?;
            if (u.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput("directions must be unit vectors".into()));
            }
            if !h.is_finite() {
                return Err(Error::InvalidInput("support values must be finite".into()));
            }
        }
        Ok(Self { directions, values, envelope: OnceLock::new() })
    }

    /// Samples `h_P` on the given directions.
    pub fn from_polytope(p: &Polytope, directions: Vec<Vector>) -> Result<Self> {
        let values = directions.iter().map(|u| p.support(u)).collect::<Result<Vec<_>>>()?;
        Self::new(directions, values)
    }

    /// Standard direction set: `k` equally spaced angles in the plane,
    /// `k` Fibonacci points on S².
    pub fn standard_directions(n: usize, k: usize) -> Result<Vec<Vector>> {
        match n {
            2 => Ok(circle_directions(k)),
            3 => Ok(fibonacci_sphere(k)),
            _ => Err(Error::Unsupported(format!("sampled bodies in dimension {n}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Support value in an arbitrary direction. Sampled directions return
    /// the stored value; others are read off the halfspace intersection.
    pub fn support(&self, y: &Vector) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        let len = y.norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let u = y / len;
        if let Some(i) = self.lookup(&u) {
            return Ok(len * self.values[i]);
        }
        self.envelope()?.support(y)
    }

    fn lookup(&self, u: &Vector) -> Option<usize> {
        self.directions.iter().position(|d| (d - u).amax() <= 1e-12)
    }

    /// Support value at a unit vector, without rescaling stored values.
    fn support_unit(&self, u: &Vector) -> Result<f64> {
        match self.lookup(u) {
            Some(i) => Ok(self.values[i]),
            None => self.envelope()?.support(u),
        }
    }

    /// Polytope `⋂ {⟨u_i, x⟩ ≤ h_i}`.
    pub fn envelope(&self) -> Result<&Polytope> {
        self.envelope.get_or_init(|| self.build_envelope()).as_ref().map_err(|e| e.clone())
    }

    fn build_envelope(&self) -> Result<Polytope> {
        match self.dim() {
            2 => {
                let mut order: Vec<usize> = (0..self.directions.len()).collect();
                let angle = |i: usize| self.directions[i][1].atan2(self.directions[i][0]);
                order.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap());
                let k = order.len();
                if k < 3 {
                    return Err(Error::InvalidInput("need at least 3 directions in the plane".into()));
                }
                let mut pts = Vec::with_capacity(k);
                for w in 0..k {
                    let (i, j) = (order[w], order[(w + 1) % k]);
                    let (a, b) = (&self.directions[i], &self.directions[j]);
                    let det = a[0] * b[1] - a[1] * b[0];
                    if det <= 1e-14 {
                        return Err(Error::InvalidInput("angular gap of at least π".into()));
                    }
                    let (ha, hb) = (self.values[i], self.values[j]);
                    pts.push(vector(&[(ha * b[1] - hb * a[1]) / det, (a[0] * hb - b[0] * ha) / det]));
                }
                hull(&pts)
            }
            3 => {
                // Polar duality about an interior point.
                let k = self.directions.len() as f64;
                let mut c = Vector::zeros(3);
                for (u, h) in self.directions.iter().zip(&self.values) {
                    c += u * (*h * 3.0 / k);
                }
                let mut dual = Vec::with_capacity(self.directions.len());
                for (u, h) in self.directions.iter().zip(&self.values) {
                    let s = h - u.dot(&c);
                    if s <= 0.0 {
                        return Err(Error::InvalidInput("estimated center is not interior".into()));
                    }
                    dual.push(u / s);
                }
                let dh = hull(&dual)?;
                let facets = dh.facets().ok_or(Error::NotFullDimensional)?;
                let pts: Vec<Vector> = facets.iter().map(|f| &c + f.plane.normal() / f.plane.offset()).collect();
                hull(&pts)
            }
            n => Err(Error::Unsupported(format!("sampled bodies in dimension {n}"))),
        }
    }
}

/// Support values of `(1/m) Σ ϑ_i K` on the directions of `K`, using
/// `h_{ϑK}(u) = h_K(ϑᵀu)`.
pub fn rotational_mean(k: &SampledBody, rotations: &[Rotation]) -> Result<SampledBody> {
    if rotations.is_empty() {
        return Err(Error::InvalidInput("need at least one rotation".into()));
    }
    let n = k.dim();
    if !(n == 2 || n == 3) {
        return Err(Error::Unsupported(format!("rotational means in dimension {n}")));
    }
    for r in rotations {
        check_dim(n, r.dim())?;
    }
    let m = rotations.len() as f64;
    let values = k
        .directions
        .iter()
        .map(|u| rotations.iter().map(|r| k.support_unit(&(r.0.transpose() * u))).sum::<Result<f64>>().map(|s| s / m))
        .collect::<Result<Vec<_>>>()?;
    SampledBody::new(k.directions.clone(), values)
}
