use std::f64::consts::PI;

use super::ball::fibonacci_sphere;
use super::polytope::Polytope;
use super::sampled::SampledBody;
use super::{vector, Vector};
use crate::error::{check_dim, Result};

/// Either representation of a convex body accepted by
/// [`hausdorff_distance`].
#[derive(Debug, Clone, Copy)]
pub enum SupportBody<'a> {
    Polytope(&'a Polytope),
    Sampled(&'a SampledBody),
}

impl<'a> From<&'a Polytope> for SupportBody<'a> {
    fn from(p: &'a Polytope) -> Self {
        SupportBody::Polytope(p)
    }
}

impl<'a> From<&'a SampledBody> for SupportBody<'a> {
    fn from(s: &'a SampledBody) -> Self {
        SupportBody::Sampled(s)
    }
}

impl SupportBody<'_> {
    pub fn dim(&self) -> usize {
        match self {
            SupportBody::Polytope(p) => p.dim(),
            SupportBody::Sampled(s) => s.dim(),
        }
    }

    pub fn support(&self, y: &Vector) -> Result<f64> {
        match self {
            SupportBody::Polytope(p) => p.support(y),
            SupportBody::Sampled(s) => s.support(y),
        }
    }

    fn normals(&self) -> Vec<Vector> {
        match self {
            SupportBody::Polytope(p) => {
                p.facets().map(|fs| fs.iter().map(|f| f.plane.normal().clone()).collect()).unwrap_or_default()
            }
            SupportBody::Sampled(s) => s.directions().to_vec(),
        }
    }
}

/// Number of sphere directions used when no exact method applies.
const SPHERE_SAMPLES: usize = 4000;

/// `sup_{|u|=1} |h_A(u) − h_B(u)|`.
///
/// Exact for intervals and for pairs of planar polytopes. Otherwise the
/// supremum is taken over the sampled directions of the operands, their
/// facet normals, and (in ℝ³) a Fibonacci sphere.
pub fn hausdorff_distance<'a, 'b>(a: impl Into<SupportBody<'a>>, b: impl Into<SupportBody<'b>>) -> Result<f64> {
    let (a, b) = (a.into(), b.into());
    check_dim(a.dim(), b.dim())?;
    let n = a.dim();
    if let (SupportBody::Polytope(p), SupportBody::Polytope(q)) = (a, b) {
        if n == 1 {
            let (pl, ph) = interval(p);
            let (ql, qh) = interval(q);
            return Ok((pl - ql).abs().max((ph - qh).abs()));
        }
        if n == 2 {
            return Ok(planar_exact(p, q));
        }
    }
    let sampled = matches!(a, SupportBody::Sampled(_)) || matches!(b, SupportBody::Sampled(_));
    let mut dirs = Vec::new();
    if !sampled || n != 2 {
        dirs.extend(a.normals());
        dirs.extend(b.normals());
    }
    if let SupportBody::Sampled(s) = a {
        dirs.extend(s.directions().iter().cloned());
    }
    if let SupportBody::Sampled(s) = b {
        dirs.extend(s.directions().iter().cloned());
    }
    if !sampled && n == 3 {
        dirs.extend(fibonacci_sphere(SPHERE_SAMPLES));
    }
    if !sampled && n > 3 {
        for k in 0..n {
            let mut e = Vector::zeros(n);
            e[k] = 1.0;
            dirs.push(-&e);
            dirs.push(e);
        }
    }
    let mut best: f64 = 0.0;
    for u in &dirs {
        best = best.max((a.support(u)? - b.support(u)?).abs());
    }
    Ok(best)
}

fn interval(p: &Polytope) -> (f64, f64) {
    let v = p.vertices();
    (v[0][0], v[v.len() - 1][0])
}

/// Outer normal angles where the maximizing vertex of `p` can change.
fn breakpoints(p: &Polytope, out: &mut Vec<f64>) {
    let v = p.vertices();
    match p.facets() {
        Some(fs) => out.extend(fs.iter().map(|f| f.plane.normal()[1].atan2(f.plane.normal()[0]))),
        None if v.len() == 2 => {
            let d = &v[1] - &v[0];
            let t = (-d[0]).atan2(d[1]);
            out.push(t);
            out.push(t + PI);
        }
        None => {}
    }
}

fn planar_exact(p: &Polytope, q: &Polytope) -> f64 {
    let mut cuts = vec![0.0];
    breakpoints(p, &mut cuts);
    breakpoints(q, &mut cuts);
    let mut cuts: Vec<f64> = cuts.into_iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.push(cuts[0] + 2.0 * PI);
    let argmax = |body: &Polytope, u: &Vector| -> Vector {
        body.vertices().iter().max_by(|x, y| x.dot(u).partial_cmp(&y.dot(u)).unwrap()).unwrap().clone()
    };
    let dir = |t: f64| vector(&[t.cos(), t.sin()]);
    let mut best: f64 = 0.0;
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 0.0 {
            continue;
        }
        let mid = dir(0.5 * (t0 + t1));
        let diff = argmax(p, &mid) - argmax(q, &mid);
        let mut cand = vec![t0, t1];
        let phi = diff[1].atan2(diff[0]);
        for base in [phi, phi + PI] {
            let mut t = base;
            while t < t0 {
                t += 2.0 * PI;
            }
            while t > t0 + 2.0 * PI {
                t -= 2.0 * PI;
            }
            if t <= t1 {
                cand.push(t);
            }
        }
        for t in cand {
            best = best.max(diff.dot(&dir(t)).abs());
        }
    }
    best
}
