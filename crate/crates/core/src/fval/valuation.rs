use std::fmt;
use std::sync::Arc;

use super::density::DensityFunc;
use super::quadrature::{eval_poly, integrate_adaptive, interpolate_poly, scaled_lower_gamma};
use crate::error::{check_dim, Error, Result};
use crate::fconv::{max, min, Domain, PolyhedralFunc};
use crate::geom::factorial;

type EvalFn = dyn Fn(&PolyhedralFunc) -> Result<f64> + Send + Sync;

/// Structural properties a valuation claims; the harness checks them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FuncFlags {
    pub epi_translation_invariant: bool,
    pub degree: Option<usize>,
}

/// Real-valued map on convex functions, with `Z(+∞) = 0`.
#[derive(Clone)]
pub struct FuncValuation {
    name: String,
    flags: FuncFlags,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for FuncValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuncValuation").field("name", &self.name).field("flags", &self.flags).finish()
    }
}

impl FuncValuation {
    pub fn new<F>(name: impl Into<String>, flags: FuncFlags, f: F) -> Self
    where
        F: Fn(&PolyhedralFunc) -> Result<f64> + Send + Sync + 'static,
    {
        Self { name: name.into(), flags, eval: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> FuncFlags {
        self.flags
    }

    /// `Z(u)`, with `None` standing for the constant `+∞`.
    pub fn evaluate(&self, u: Option<&PolyhedralFunc>) -> Result<f64> {
        match u {
            Some(u) => (self.eval)(u),
            None => Ok(0.0),
        }
    }

    pub fn exp_min() -> Self {
        Self::new("exp_min", FuncFlags::default(), exp_min)
    }

    pub fn exp_integral() -> Self {
        Self::new("exp_integral", FuncFlags::default(), exp_integral)
    }

    /// `u ↦ ∫ ζ(∇u)`, epi-homogeneous of degree `n`.
    pub fn gradient(zeta: DensityFunc) -> Self {
        let flags = FuncFlags { epi_translation_invariant: true, degree: Some(zeta.dim()) };
        Self::new("grad", flags, move |u| grad_valuation(u, &zeta))
    }

    pub fn constant(c: f64) -> Self {
        let flags = FuncFlags { epi_translation_invariant: true, degree: Some(0) };
        Self::new("constant", flags, move |_| Ok(c))
    }

    /// Largest relative deviation of `Z(λ◻u)` from `λ^d Z(u)` over the
    /// given `λ`, or `None` without a degree flag.
    pub fn degree_residual(&self, u: &PolyhedralFunc, lambdas: &[f64]) -> Result<Option<f64>> {
        let Some(d) = self.flags.degree else { return Ok(None) };
        let base = self.evaluate(Some(u))?;
        let mut worst = 0.0f64;
        for &l in lambdas {
            let scaled = self.evaluate(Some(&u.epi_scale(l)?))?;
            worst = worst.max((scaled - l.powi(d as i32) * base).abs() / base.abs().max(1.0));
        }
        Ok(Some(worst))
    }
}

/// `e^{−min u}`.
pub fn exp_min(u: &PolyhedralFunc) -> Result<f64> {
    Ok((-u.minimum()?).exp())
}

/// `∫ e^{−u}`, integrated level by level: `∫ V_n({u ≤ t}) e^{−t} dt`.
/// Between consecutive vertex values the level volume is a polynomial of
/// degree at most `n`, which is interpolated and integrated in closed form.
pub fn exp_integral(u: &PolyhedralFunc) -> Result<f64> {
    let n = u.dim();
    u.coercivity_witness()?;
    if let Domain::Body(d) = u.domain() {
        if !d.is_full_dimensional() {
            return Ok(0.0);
        }
    }
    let volume_at = |t: f64| -> Result<f64> {
        Ok(match u.sublevel(t)? {
            Some(p) => p.volume()?,
            None => 0.0,
        })
    };
    let mut levels: Vec<f64> = u.vertex_values().into_iter().map(|(_, v)| v).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * a.abs().max(1.0));
    let mut total = 0.0;
    for w in levels.windows(2) {
        total += level_piece(&volume_at, w[0], w[1], n)?;
    }
    let top = *levels.last().expect("at least one vertex");
    match u.domain() {
        Domain::Body(d) => total += d.volume()? * (-top).exp(),
        Domain::Unbounded(_) => {
            let nodes: Vec<f64> = (0..=n).map(|j| j as f64).collect();
            let values = nodes.iter().map(|&s| volume_at(top + s)).collect::<Result<Vec<_>>>()?;
            let c = interpolate_poly(&nodes, &values)?;
            let tail: f64 = c.iter().enumerate().map(|(m, cm)| cm * factorial(m)).sum();
            total += (-top).exp() * tail;
        }
    }
    Ok(total)
}

/// `∫_{t0}^{t1} V(t) e^{−t} dt` for a level volume that is polynomial of
/// degree `≤ n` on the interval, with an adaptive fallback if the
/// interpolant misses a check point.
fn level_piece<F: Fn(f64) -> Result<f64>>(volume_at: &F, t0: f64, t1: f64, n: usize) -> Result<f64> {
    let len = t1 - t0;
    let sigma: Vec<f64> = (0..=n)
        .map(|j| 0.5 * (1.0 - (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * (n + 1)) as f64).cos()))
        .collect();
    let values = sigma.iter().map(|&s| volume_at(t0 + len * s)).collect::<Result<Vec<_>>>()?;
    let c = interpolate_poly(&sigma, &values)?;
    let probe = 0.3;
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if (eval_poly(&c, probe) - volume_at(t0 + len * probe)?).abs() > 1e-9 * scale {
        let mut f = |t: f64| Ok(volume_at(t)? * (-t).exp());
        return integrate_adaptive(&mut f, t0, t1, 1e-10, 30);
    }
    let sum: f64 = c.iter().enumerate().map(|(m, cm)| cm * scaled_lower_gamma(m, len)).sum();
    Ok((-t0).exp() * sum)
}

/// `Σ_i ζ(a_i) V_n(P_i)` over the cells of `u`.
pub fn grad_valuation(u: &PolyhedralFunc, zeta: &DensityFunc) -> Result<f64> {
    check_dim(u.dim(), zeta.dim())?;
    let mut acc = 0.0;
    for c in u.cells() {
        let z = zeta.evaluate(&c.slope)?;
        if z == 0.0 {
            continue;
        }
        let vol = c.volume()?;
        if !vol.is_finite() {
            return Err(Error::NotSuperCoercive { slope: c.slope.iter().copied().collect() });
        }
        acc += z * vol;
    }
    Ok(acc)
}

/// `max_t |Z(u + t) − e^{−t} Z(u)|`.
pub fn vertical_shift_check(z: &FuncValuation, u: &PolyhedralFunc, ts: &[f64]) -> Result<f64> {
    let base = z.evaluate(Some(u))?;
    let mut worst = 0.0f64;
    for &t in ts {
        worst = worst.max((z.evaluate(Some(&u.shift(t)))? - (-t).exp() * base).abs());
    }
    Ok(worst)
}

/// `|Z(u) + Z(v) − Z(u ∨ v) − Z(u ∧ v)|`; fails with `NonConvexMin` when
/// `u ∧ v` is not convex.
pub fn function_valuation_check(z: &FuncValuation, u: &PolyhedralFunc, v: &PolyhedralFunc) -> Result<f64> {
    let low = min(u, v)?;
    let high = max(u, v)?;
    let lhs = z.evaluate(Some(u))? + z.evaluate(Some(v))?;
    let rhs = z.evaluate(high.as_ref())? + z.evaluate(Some(&low))?;
    Ok((lhs - rhs).abs())
}
