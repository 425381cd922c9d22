use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Shape of a planar convex body, described through its support function
/// `h(θ) = h_K(cos θ, sin θ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// Centered ellipse with semi-axes `a` (along `angle`) and `b`.
    Ellipse { a: f64, b: f64, angle: f64 },
    /// Truncated Fourier series `a_0 + Σ_k a_k cos kθ + b_k sin kθ`, with
    /// `cos[k−1] = a_k` and `sin[k−1] = b_k`.
    Fourier { mean: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// Convex polygon through its vertices; `h + h''` vanishes away from
    /// the edge normals.
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Planar convex body with a twice differentiable support function (away
/// from finitely many parameters for polygons), translated by `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothBody2 {
    profile: Profile,
    center: [f64; 2],
}

/// `(h, h', h'')` at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportJet {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl SupportJet {
    /// Radius of curvature `h + h''`.
    pub fn curvature_radius(&self) -> f64 {
        self.h + self.d2h
    }
}

impl SmoothBody2 {
    pub fn new(profile: Profile) -> Result<Self> {
        match &profile {
            Profile::Ellipse { a, b, angle } => {
                if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0 && angle.is_finite()) {
                    return Err(Error::InvalidInput("ellipse semi-axes must be positive".into()));
                }
            }
            Profile::Fourier { mean, cos, sin } => {
                if cos.len() != sin.len() {
                    return Err(Error::InvalidInput("cosine and sine tables differ in length".into()));
                }
                if !mean.is_finite() || cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput("Fourier coefficients must be finite".into()));
                }
            }
            Profile::Polygon { vertices } => {
                if vertices.is_empty() || vertices.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput("polygon needs finite vertices".into()));
                }
            }
        }
        Ok(Self { profile, center: [0.0, 0.0] })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(Profile::Ellipse { a, b, angle: 0.0 })
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(Profile::Polygon { vertices })
    }

    /// Fits a Fourier profile to `values[j] = h(2πj/m)` and keeps at most
    /// `modes` harmonics.
    pub fn from_samples(values: &[f64], modes: usize) -> Result<Self> {
        let m = values.len();
        if m < 2 * modes + 1 {
            return Err(Error::InsufficientNodes { needed: 2 * modes + 1, got: m });
        }
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let scale = 2.0 / m as f64;
        let mean = buf[0].re / m as f64;
        let cos = (1..=modes).map(|k| buf[k].re * scale).collect();
        let sin = (1..=modes).map(|k| -buf[k].im * scale).collect();
        Self::new(Profile::Fourier { mean, cos, sin })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn translate(&self, t: [f64; 2]) -> Self {
        Self { profile: self.profile.clone(), center: [self.center[0] + t[0], self.center[1] + t[1]] }
    }

    /// `λK` for `λ > 0`, scaling about the origin.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        let profile = match &self.profile {
            Profile::Ellipse { a, b, angle } => Profile::Ellipse { a: a * lambda, b: b * lambda, angle: *angle },
            Profile::Fourier { mean, cos, sin } => Profile::Fourier {
                mean: mean * lambda,
                cos: cos.iter().map(|c| c * lambda).collect(),
                sin: sin.iter().map(|c| c * lambda).collect(),
            },
            Profile::Polygon { vertices } => {
                Profile::Polygon { vertices: vertices.iter().map(|v| [v[0] * lambda, v[1] * lambda]).collect() }
            }
        };
        Ok(Self { profile, center: [self.center[0] * lambda, self.center[1] * lambda] })
    }

    /// Image under the linear map `a` (row-major), refitted as a Fourier
    /// profile from `h_{AK}(u) = h_K(Aᵀu)` on `samples` equally spaced
    /// directions.
    pub fn linear_image(&self, a: [[f64; 2]; 2], samples: usize, modes: usize) -> Result<Self> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if !(det.abs() > 1e-12) {
            return Err(Error::InvalidInput("linear map is singular".into()));
        }
        let values: Vec<f64> = (0..samples)
            .map(|j| {
                let (s, c) = (2.0 * PI * j as f64 / samples as f64).sin_cos();
                let w = [a[0][0] * c + a[1][0] * s, a[0][1] * c + a[1][1] * s];
                self.support_vec(w)
            })
            .collect();
        Self::from_samples(&values, modes)
    }

    /// `h_K(w)` for any `w ∈ ℝ²`.
    pub fn support_vec(&self, w: [f64; 2]) -> f64 {
        let len = w[0].hypot(w[1]);
        if len == 0.0 {
            return 0.0;
        }
        len * self.jet(w[1].atan2(w[0])).h
    }

    /// Support function and its first two derivatives at `θ`.
    pub fn jet(&self, theta: f64) -> SupportJet {
        let (s, c) = theta.sin_cos();
        let (cx, cy) = (self.center[0], self.center[1]);
        // ⟨c, u⟩, ⟨c, u'⟩, ⟨c, u''⟩ = −⟨c, u⟩.
        let shift = cx * c + cy * s;
        let dshift = -cx * s + cy * c;
        let base = match &self.profile {
            Profile::Ellipse { a, b, angle } => {
                let (s, c) = (theta - angle).sin_cos();
                let g = a * a * c * c + b * b * s * s;
                let h = g.sqrt();
                let dg = 2.0 * (b * b - a * a) * s * c;
                let d2g = 2.0 * (b * b - a * a) * (c * c - s * s);
                let dh = dg / (2.0 * h);
                SupportJet { h, dh, d2h: (0.5 * d2g - dh * dh) / h }
            }
            Profile::Fourier { mean, cos, sin } => {
                let mut jet = SupportJet { h: *mean, dh: 0.0, d2h: 0.0 };
                for (k, (ak, bk)) in cos.iter().zip(sin).enumerate() {
                    let kf = (k + 1) as f64;
                    let (sk, ck) = (kf * theta).sin_cos();
                    let v = ak * ck + bk * sk;
                    jet.h += v;
                    jet.dh += kf * (bk * ck - ak * sk);
                    jet.d2h -= kf * kf * v;
                }
                jet
            }
            Profile::Polygon { vertices } => {
                let v = polygon_vertex(vertices, theta, 0.0);
                let h = v[0] * c + v[1] * s;
                SupportJet { h, dh: -v[0] * s + v[1] * c, d2h: -h }
            }
        };
        SupportJet { h: base.h + shift, dh: base.dh + dshift, d2h: base.d2h - shift }
    }

    /// Boundary point with outer normal `u(θ)`. Where the normal cone is
    /// an edge, `side > 0` picks the endpoint reached by increasing θ and
    /// `side < 0` the other one.
    pub fn boundary_point(&self, theta: f64, side: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        match &self.profile {
            Profile::Polygon { vertices } => {
                let v = polygon_vertex(vertices, theta, side);
                [v[0] + self.center[0], v[1] + self.center[1]]
            }
            _ => {
                let j = self.jet(theta);
                [j.h * c - j.dh * s, j.h * s + j.dh * c]
            }
        }
    }

    /// Smallest `h + h''` over `m` equally spaced parameters.
    pub fn min_curvature_radius(&self, m: usize) -> (f64, f64) {
        (0..m)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                (t, self.jet(t).curvature_radius())
            })
            .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }
}

/// Vertex maximizing `⟨v, u(θ)⟩`; ties go to the larger `side·⟨v, u'(θ)⟩`.
fn polygon_vertex(vertices: &[[f64; 2]], theta: f64, side: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    let tol = 1e-12 * vertices.iter().map(|v| v[0].abs().max(v[1].abs())).fold(1.0, f64::max);
    let score = |v: &[f64; 2]| v[0] * c + v[1] * s;
    let best = vertices.iter().map(score).fold(f64::NEG_INFINITY, f64::max);
    *vertices
        .iter()
        .filter(|v| score(v) >= best - tol)
        .max_by(|a, b| {
            let ta = side * (-a[0] * s + a[1] * c);
            let tb = side * (-b[0] * s + b[1] * c);
            ta.partial_cmp(&tb).unwrap()
        })
        .expect("nonempty vertex list")
}
