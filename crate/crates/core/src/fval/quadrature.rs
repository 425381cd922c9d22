use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geom::factorial;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_a^b f` with an `m`-point Gauss–Legendre rule.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, m: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(m);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        acc += wi * f(mid + half * xi)?;
    }
    Ok(acc * half)
}

/// Adaptive Gauss–Legendre: halves the interval until a 10-point and a
/// 20-point rule agree to `tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let coarse = integrate(&mut *f, a, b, 10)?;
    let fine = integrate(&mut *f, a, b, 20)?;
    if (fine - coarse).abs() <= tol || depth == 0 {
        return Ok(fine);
    }
    let mid = 0.5 * (a + b);
    Ok(integrate_adaptive(f, a, mid, 0.5 * tol, depth - 1)? + integrate_adaptive(f, mid, b, 0.5 * tol, depth - 1)?)
}

/// `L^{−m} ∫_0^L s^m e^{−s} ds`, accurate for small and large `L`.
pub fn scaled_lower_gamma(m: usize, len: f64) -> f64 {
    if len < 2.0 {
        // L e^{−L} Σ_k L^k / ((m+1)(m+2)⋯(m+1+k)).
        let (mut term, mut sum) = (1.0 / (m + 1) as f64, 0.0f64);
        let mut k = 0;
        while term > 1e-18 * sum.max(1e-300) || k < 3 {
            sum += term;
            k += 1;
            term *= len / (m + 1 + k) as f64;
        }
        return len * (-len).exp() * sum;
    }
    let (mut partial, mut power) = (0.0, 1.0);
    for k in 0..=m {
        partial += power / factorial(k);
        power *= len;
    }
    factorial(m) * (1.0 - (-len).exp() * partial) / len.powi(m as i32)
}

/// Coefficients `c` of the polynomial of degree `nodes.len() − 1` through
/// `(nodes[j], values[j])`, lowest degree first.
pub fn interpolate_poly(nodes: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let k = nodes.len();
    let v = DMatrix::from_fn(k, k, |r, c| nodes[r].powi(c as i32));
    let rhs = DVector::from_column_slice(values);
    let sol = v.lu().solve(&rhs).ok_or_else(|| Error::SingularSystem("interpolation nodes".into()))?;
    Ok(sol.iter().copied().collect())
}

pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}
