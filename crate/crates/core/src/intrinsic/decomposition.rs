use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::geom::{affine_basis, hull, minkowski_sum, scale_of, Polytope, Vector, EPS};

/// One piece of a dissection, standing for `multiplicity` translates of
/// `body`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionPiece {
    pub body: Polytope,
    pub multiplicity: u64,
    /// Canonical pieces carry `[k]`; cylinder pieces carry the block ends
    /// `j_1 < … < j_ℓ = n` of their signature.
    pub label: Vec<usize>,
}

fn check_chain(vertices: &[Vector]) -> Result<usize> {
    let n = vertices.first().map(|v| v.len()).unwrap_or(0);
    if n == 0 || vertices.len() != n + 1 {
        return Err(Error::DegenerateSimplex(format!(
            "expected n + 1 vertices in dimension n, got {}",
            vertices.len()
        )));
    }
    if vertices.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: vertices.iter().map(|v| v.len()).find(|&l| l != n).unwrap(),
        });
    }
    if affine_basis(vertices, EPS * scale_of(vertices)).len() != n {
        return Err(Error::DegenerateSimplex("steps are linearly dependent".into()));
    }
    if n > 3 {
        return Err(Error::Unsupported("decompositions are implemented for n ≤ 3".into()));
    }
    Ok(n)
}

/// Pieces `Q_k(t) = (1−t)·conv{p_0..p_k} + t·conv{p_k..p_n}`, `k = 0..n`,
/// of the simplex with ordered vertices `p_0, …, p_n`
/// (steps `x_i = p_i − p_{i−1}`).
pub fn canonical_simplex_decomposition(vertices: &[Vector], t: f64) -> Result<Vec<DecompositionPiece>> {
    let n = check_chain(vertices)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("t = {t} is outside (0, 1)")));
    }
    (0..=n)
        .map(|k| {
            let mut pts = Vec::with_capacity((k + 1) * (n - k + 1));
            for a in &vertices[..=k] {
                for b in &vertices[k..] {
                    pts.push(a * (1.0 - t) + b * t);
                }
            }
            Ok(DecompositionPiece { body: hull(&pts)?, multiplicity: 1, label: vec![k] })
        })
        .collect()
}

/// Largest dilation factor accepted by [`cylinder_decomposition`].
const MAX_CYLINDER_FACTOR: usize = 6;

type Signature = Vec<(usize, usize)>;

/// Dissection of `m·S` into cylinders `S_{0j_1} + S_{j_1j_2} + … + S_{j_{ℓ−1}n}`
/// where `S_{ij} = conv{p_i, …, p_j}`. Signatures with ℓ blocks occur
/// `C(m, ℓ)` times; counts are tracked symbolically.
pub fn cylinder_decomposition(vertices: &[Vector], m: usize) -> Result<Vec<DecompositionPiece>> {
    let n = check_chain(vertices)?;
    if m == 0 || m > MAX_CYLINDER_FACTOR {
        return Err(Error::Unsupported(format!("dilation factor {m} outside 1..={MAX_CYLINDER_FACTOR}")));
    }
    let mut memo = HashMap::new();
    let counts = signatures(m, 0, n, &mut memo);
    counts
        .into_iter()
        .map(|(sig, multiplicity)| {
            let mut body: Option<Polytope> = None;
            for &(i, j) in &sig {
                let block = hull(&vertices[i..=j])?;
                body = Some(match body {
                    None => block,
                    Some(acc) => minkowski_sum(&acc, &block)?,
                });
            }
            Ok(DecompositionPiece {
                body: body.expect("signature is nonempty"),
                multiplicity,
                label: sig.iter().map(|&(_, j)| j).collect(),
            })
        })
        .collect()
}

/// Signature counts for the dissection of `m·conv{p_a..p_b}`.
///
/// Peeling off the canonical decomposition at `t = 1/m` gives the piece
/// `S_{ab}` itself, a translate of `(m−1)·S_{ab}`, and for `a < c < b` the
/// sums `(m−1)·S_{ac} + S_{cb}`.
fn signatures(
    m: usize,
    a: usize,
    b: usize,
    memo: &mut HashMap<(usize, usize, usize), BTreeMap<Signature, u64>>,
) -> BTreeMap<Signature, u64> {
    if let Some(hit) = memo.get(&(m, a, b)) {
        return hit.clone();
    }
    let mut out: BTreeMap<Signature, u64> = BTreeMap::new();
    *out.entry(vec![(a, b)]).or_default() += 1;
    if m > 1 {
        for (sig, c) in signatures(m - 1, a, b, memo) {
            *out.entry(sig).or_default() += c;
        }
        for mid in a + 1..b {
            for (mut sig, c) in signatures(m - 1, a, mid, memo) {
                sig.push((mid, b));
                *out.entry(sig).or_default() += c;
            }
        }
    }
    memo.insert((m, a, b), out.clone());
    out
}
