use super::polyhedral::PolyhedralFunc;
use crate::error::Result;
use crate::geom::hausdorff_distance;

/// Levels closer than this to `min u` are not compared.
pub const MIN_LEVEL_GAP: f64 = 1e-9;

/// Sublevel comparison at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDiag {
    pub level: f64,
    /// `d_H({u_k ≤ t}, {u ≤ t})` for each `k`, or `None` at the minimum
    /// level, where sublevel sets need not converge. An empty set against
    /// a nonempty one counts as infinitely far.
    pub distances: Option<Vec<f64>>,
}

/// Per-level Hausdorff distances between the sublevel sets of a sequence
/// and of its candidate epi-limit.
pub fn epi_convergence_diag(sequence: &[PolyhedralFunc], u: &PolyhedralFunc, levels: &[f64]) -> Result<Vec<LevelDiag>> {
    let min = u.minimum()?;
    levels
        .iter()
        .map(|&t| {
            if (t - min).abs() <= MIN_LEVEL_GAP {
                return Ok(LevelDiag { level: t, distances: None });
            }
            let target = u.sublevel(t)?;
            let distances = sequence
                .iter()
                .map(|uk| {
                    Ok(match (uk.sublevel(t)?, &target) {
                        (Some(a), Some(b)) => hausdorff_distance(&a, b)?,
                        (None, None) => 0.0,
                        _ => f64::INFINITY,
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(LevelDiag { level: t, distances: Some(distances) })
        })
        .collect()
}
