use crate::error::{check_dim, Error, Result};
use crate::geom::Vector;

/// Compactly supported piecewise-linear densities.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityFunc {
    /// Multilinear interpolation on a rectangular grid in ℝⁿ, zero outside
    /// it. `values` is row-major with the last axis varying fastest.
    Grid { axes: Vec<Vec<f64>>, values: Vec<f64> },
    /// Linear interpolation on `[0, ∞)`, zero beyond the last breakpoint.
    HalfLine { breakpoints: Vec<f64>, values: Vec<f64> },
}

fn check_axis(axis: &[f64]) -> Result<()> {
    if axis.len() < 2 || axis.windows(2).any(|w| !(w[0] < w[1])) || axis.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("grid axes need at least two increasing finite nodes".into()));
    }
    Ok(())
}

impl DensityFunc {
    /// Grid density; values on the grid boundary must vanish so the
    /// extension by zero stays continuous.
    pub fn grid(axes: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one axis".into()));
        }
        for a in &axes {
            check_axis(a)?;
        }
        let count: usize = axes.iter().map(Vec::len).product();
        if values.len() != count {
            return Err(Error::InvalidInput(format!("grid has {count} nodes but {} values", values.len())));
        }
        let d = Self::Grid { axes, values };
        let Self::Grid { axes, values } = &d else { unreachable!() };
        for (flat, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput("non-finite density value".into()));
            }
            let idx = unflatten(flat, axes);
            let on_boundary = idx.iter().zip(axes).any(|(&i, a)| i == 0 || i + 1 == a.len());
            if on_boundary && *v != 0.0 {
                return Err(Error::InvalidInput("grid density must vanish on the grid boundary".into()));
            }
        }
        Ok(d)
    }

    /// Density on `[0, ∞)` with `breakpoints[0] = 0` and a zero last value.
    pub fn half_line(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_axis(&breakpoints)?;
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidInput("half-line density must start at 0".into()));
        }
        if values.len() != breakpoints.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("one finite value per breakpoint".into()));
        }
        if *values.last().expect("nonempty") != 0.0 {
            return Err(Error::InvalidInput("half-line density must end at zero".into()));
        }
        Ok(Self::HalfLine { breakpoints, values })
    }

    /// Tensor product of tents of half-width `radius` around `center`,
    /// with peak `height`.
    pub fn hat(center: &Vector, radius: f64, height: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput("hat radius must be positive".into()));
        }
        let axes: Vec<Vec<f64>> = center.iter().map(|&c| vec![c - radius, c, c + radius]).collect();
        let mut values = vec![0.0; 3usize.pow(center.len() as u32)];
        let mid: usize = (0..center.len()).map(|k| 3usize.pow(k as u32)).sum();
        values[mid] = height;
        Self::grid(axes, values)
    }

    /// Dimension of the argument (1 for half-line densities).
    pub fn dim(&self) -> usize {
        match self {
            Self::Grid { axes, .. } => axes.len(),
            Self::HalfLine { .. } => 1,
        }
    }

    /// Value at `x`; half-line densities vanish for negative arguments.
    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        match self {
            Self::HalfLine { breakpoints, values } => Ok(interpolate(breakpoints, values, x[0])),
            Self::Grid { axes, values } => {
                let mut cell = Vec::with_capacity(axes.len());
                for (a, &t) in axes.iter().zip(x.iter()) {
                    if t < a[0] || t > *a.last().expect("nonempty") {
                        return Ok(0.0);
                    }
                    let i = a.partition_point(|&node| node <= t).clamp(1, a.len() - 1) - 1;
                    cell.push((i, (t - a[i]) / (a[i + 1] - a[i])));
                }
                let mut acc = 0.0;
                for corner in 0..(1usize << axes.len()) {
                    let mut weight = 1.0;
                    let mut flat = 0;
                    for (k, ((i, s), a)) in cell.iter().zip(axes).enumerate() {
                        let up = corner >> k & 1 == 1;
                        weight *= if up { *s } else { 1.0 - s };
                        flat = flat * a.len() + i + usize::from(up);
                    }
                    if weight != 0.0 {
                        acc += weight * values[flat];
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Value of a half-line density at `t`.
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Self::HalfLine { breakpoints, values } => interpolate(breakpoints, values, t),
            Self::Grid { .. } => self.evaluate(&Vector::from_element(1, t)).unwrap_or(0.0),
        }
    }

    /// Breakpoints of a half-line density (empty for grids).
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Self::HalfLine { breakpoints, .. } => breakpoints,
            Self::Grid { .. } => &[],
        }
    }
}

fn unflatten(mut flat: usize, axes: &[Vec<f64>]) -> Vec<usize> {
    let mut idx = vec![0; axes.len()];
    for k in (0..axes.len()).rev() {
        idx[k] = flat % axes[k].len();
        flat /= axes[k].len();
    }
    idx
}

fn interpolate(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    if t < xs[0] || t > *xs.last().expect("nonempty") {
        return 0.0;
    }
    let i = xs.partition_point(|&x| x <= t).clamp(1, xs.len() - 1) - 1;
    let s = (t - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] * (1.0 - s) + ys[i + 1] * s
}

/// Finite sum of weighted point masses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomicMeasure {
    pub atoms: Vec<(Vector, f64)>,
}

impl AtomicMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }

    /// `∫ ζ dμ`.
    pub fn integrate(&self, zeta: &DensityFunc) -> Result<f64> {
        self.atoms.iter().map(|(x, m)| Ok(m * zeta.evaluate(x)?)).sum()
    }
}
