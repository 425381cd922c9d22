//! Dehn invariants of 3-polytopes as formal sums `Σ ℓ_i ⊗ α_i` modulo
//! rational multiples of π, and a height-bounded equality test.

pub mod hp;
pub(crate) mod lll;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geom::{cross3, dot3, norm3, to3, vector, Polytope, Vector};
use hp::Fixed;

/// Decimal digits of a double-precision symbol.
pub const DEFAULT_PRECISION: u32 = 15;
pub const DEFAULT_HEIGHT: u64 = 10_000;
pub const DEFAULT_DIGITS: u32 = 64;

/// Largest denominator tried when recognizing α/π as a rational.
const MAX_PI_DENOMINATOR: i64 = 1000;
const PI_RATIO_EPS: f64 = 1e-12;

/// Dihedral angle at one edge, with the outer normals of the two facets.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAngle {
    pub length: f64,
    pub angle: f64,
    pub normals: (Vector, Vector),
}

/// Interior angle `atan2(|n₁×n₂|, −⟨n₁,n₂⟩)` between facets with outer
/// normals `n₁, n₂`.
fn interior_angle(n1: &[f64; 3], n2: &[f64; 3]) -> f64 {
    norm3(&cross3(n1, n2)).atan2(-dot3(n1, n2))
}

/// One entry per edge of a full-dimensional 3-polytope.
pub fn dihedral_angles(p: &Polytope) -> Result<Vec<EdgeAngle>> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.dim() });
    }
    let facets = p.facets().ok_or(Error::MissingFacets)?;
    let verts = p.vertices();
    Ok(p.edges()?
        .into_iter()
        .map(|e| {
            let (f, g) = (&facets[e.facets[0]], &facets[e.facets[1]]);
            EdgeAngle {
                length: (&verts[e.a] - &verts[e.b]).norm(),
                angle: interior_angle(&to3(f.plane.normal()), &to3(g.plane.normal())),
                normals: (f.raw_normal.clone(), g.raw_normal.clone()),
            }
        })
        .collect())
}

/// Term `ℓ ⊗ α` of a symbol. The facet normals are kept so the angle can be
/// recomputed to any precision.
#[derive(Debug, Clone, PartialEq)]
pub struct DehnTerm {
    pub length: f64,
    pub angle: f64,
    pub normals: (Vector, Vector),
}

impl DehnTerm {
    /// The angle as a fixed-point number in context `f`.
    fn refine(&self, f: &Fixed, pi: &BigInt) -> BigInt {
        let (a, b) = (&self.normals.0, &self.normals.1);
        let a: Vec<BigInt> = a.iter().map(|&x| f.from_f64(x)).collect();
        let b: Vec<BigInt> = b.iter().map(|&x| f.from_f64(x)).collect();
        let c = [
            f.mul(&a[1], &b[2]) - f.mul(&a[2], &b[1]),
            f.mul(&a[2], &b[0]) - f.mul(&a[0], &b[2]),
            f.mul(&a[0], &b[1]) - f.mul(&a[1], &b[0]),
        ];
        let cross_sq: BigInt = c.iter().map(|x| f.mul(x, x)).sum();
        let dot: BigInt = (0..3).map(|i| f.mul(&a[i], &b[i])).sum();
        f.atan2(&f.sqrt(&cross_sq), &-dot, pi)
    }
}

/// Canonical Dehn symbol: terms sorted by angle, equal angles merged,
/// rational multiples of π removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DehnSymbol {
    terms: Vec<DehnTerm>,
    precision: u32,
}

/// `Some(p/q)` if `x` is within `PI_RATIO_EPS` of a rational with
/// denominator at most `MAX_PI_DENOMINATOR`.
fn small_rational(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e9 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_PI_DENOMINATOR {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= PI_RATIO_EPS {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

impl DehnSymbol {
    pub fn empty(precision: u32) -> Self {
        Self { terms: Vec::new(), precision }
    }

    pub fn from_terms(terms: Vec<DehnTerm>, precision: u32) -> Self {
        let mut s = Self { terms, precision };
        s.canonicalize();
        s
    }

    pub fn terms(&self) -> &[DehnTerm] {
        &self.terms
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Angles closer than this are treated as equal.
    pub fn merge_tolerance(&self) -> f64 {
        10f64.powi(4 - self.precision as i32)
    }

    fn canonicalize(&mut self) {
        let tol = self.merge_tolerance();
        let scale = self.terms.iter().map(|t| t.length.abs()).fold(1.0, f64::max);
        let mut terms = std::mem::take(&mut self.terms);
        terms.retain(|t| small_rational(t.angle / PI).is_none());
        terms.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
        let mut out: Vec<DehnTerm> = Vec::new();
        let mut anchor = f64::NEG_INFINITY;
        for t in terms {
            match out.last_mut() {
                Some(last) if t.angle - anchor <= tol => last.length += t.length,
                _ => {
                    anchor = t.angle;
                    out.push(t);
                }
            }
        }
        out.retain(|t| t.length.abs() > 1e-12 * scale);
        self.terms = out;
    }

    /// Formal sum of two symbols.
    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Self::from_terms(terms, self.precision.min(other.precision))
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|t| DehnTerm { length: -t.length, ..t.clone() }).collect();
        Self { terms, precision: self.precision }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Symbol of the dilate `λP` given the symbol of `P`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let terms = self.terms.iter().map(|t| DehnTerm { length: lambda * t.length, ..t.clone() }).collect();
        Self::from_terms(terms, self.precision)
    }
}

/// Canonical Dehn symbol of a 3-polytope.
pub fn dehn_symbol(p: &Polytope) -> Result<DehnSymbol> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let terms = dihedral_angles(p)?
        .into_iter()
        .map(|e| DehnTerm { length: e.length, angle: e.angle, normals: e.normals })
        .collect();
    Ok(DehnSymbol::from_terms(terms, DEFAULT_PRECISION))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Equal,
    Distinct,
    Unknown,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Equal => "Equal",
            VerdictKind::Distinct => "Distinct",
            VerdictKind::Unknown => "Unknown",
        }
    }
}

/// Integer relation `m_π·π + Σ_b m_b·β_b + m·α = 0` expressing an angle of
/// the difference symbol through the basis angles `β_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub angle: f64,
    pub pi: i64,
    pub basis: Vec<i64>,
    pub own: i64,
    pub residual: f64,
}

/// Evidence behind a verdict.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Certificate {
    /// Angles found independent of each other and of π.
    pub basis_angles: Vec<f64>,
    /// Whether independence of each basis angle is proven up to the height.
    pub certified: Vec<bool>,
    pub relations: Vec<Relation>,
    /// Length coefficient of each basis angle after applying the relations.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationVerdict {
    pub kind: VerdictKind,
    pub certificate: Option<Certificate>,
    pub height_bound: u64,
}

/// Compares two symbols modulo ℚ-linear relations with π.
///
/// Builds a basis of the angles of `a − b` incrementally. Each angle is
/// tested against π and the current basis for an integer relation of height
/// at most `height_bound`. Equal if the length coefficients on the basis all
/// vanish; Distinct if one survives and every basis angle was proven free of
/// relations up to the height; Unknown otherwise.
pub fn symbol_equal(a: &DehnSymbol, b: &DehnSymbol, height_bound: u64, digits: u32) -> Result<RelationVerdict> {
    if height_bound < 10 {
        return Err(Error::InvalidInput("height bound must be at least 10".into()));
    }
    if digits < 32 {
        return Err(Error::PrecisionTooLow { digits, height: height_bound, dim: 0 });
    }
    let diff = a.sub(b);
    if diff.is_empty() {
        return Ok(RelationVerdict {
            kind: VerdictKind::Equal,
            certificate: Some(Certificate::default()),
            height_bound,
        });
    }
    let f = Fixed::for_digits(digits);
    let pi = f.pi();
    let mut basis: Vec<(usize, BigInt, bool)> = Vec::new();
    let mut expressed: Vec<(usize, Relation)> = Vec::new();
    for (i, term) in diff.terms.iter().enumerate() {
        let alpha = term.refine(&f, &pi);
        let mut values: Vec<&BigInt> = vec![&pi];
        values.extend(basis.iter().map(|(_, v, _)| v));
        values.push(&alpha);
        match find_relation(&f, &values, height_bound, digits)? {
            Search::Found(m, residual) => {
                let k = m.len();
                expressed.push((
                    i,
                    Relation { angle: term.angle, pi: m[0], basis: m[1..k - 1].to_vec(), own: m[k - 1], residual },
                ));
            }
            Search::Free { certified } => basis.push((i, alpha, certified)),
        }
    }
    let mut coefficients: Vec<f64> = basis.iter().map(|(i, _, _)| diff.terms[*i].length).collect();
    for (i, rel) in &expressed {
        let len = diff.terms[*i].length;
        for (c, m) in coefficients.iter_mut().zip(&rel.basis) {
            *c -= len * *m as f64 / rel.own as f64;
        }
    }
    let scale = diff.terms.iter().map(|t| t.length.abs()).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let all_vanish = coefficients.iter().all(|c| c.abs() <= tol);
    let all_certified = basis.iter().all(|(_, _, c)| *c);
    let kind = if all_vanish {
        VerdictKind::Equal
    } else if all_certified {
        VerdictKind::Distinct
    } else {
        VerdictKind::Unknown
    };
    let certificate = Certificate {
        basis_angles: basis.iter().map(|(i, _, _)| diff.terms[*i].angle).collect(),
        certified: basis.iter().map(|(_, _, c)| *c).collect(),
        relations: expressed.into_iter().map(|(_, r)| r).collect(),
        coefficients,
    };
    Ok(RelationVerdict { kind, certificate: Some(certificate), height_bound })
}

enum Search {
    /// Coefficients on (π, basis…, α) with nonzero last entry, and residual.
    Found(Vec<i64>, f64),
    Free {
        certified: bool,
    },
}

/// Looks for an integer relation among `values` whose last coefficient is
/// nonzero, using LLL on the lattice `[I | N·x]` with `N = 10^{digits−10}`.
fn find_relation(f: &Fixed, values: &[&BigInt], height: u64, digits: u32) -> Result<Search> {
    let d = values.len();
    let needed = d as f64 * (height as f64).log10() + 10.0;
    if (digits as f64) < needed {
        return Err(Error::PrecisionTooLow { digits, height, dim: d });
    }
    let e = digits - 10;
    let scaled: Vec<BigInt> = values.iter().map(|x| f.scaled_round(x, e)).collect();
    let rows: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut row = vec![BigInt::zero(); d + 1];
            row[i] = BigInt::from(1);
            row[d] = scaled[i].clone();
            row
        })
        .collect();
    let reduced = lll::reduce(rows)?;
    let h = BigInt::from(height);
    for row in &reduced.basis {
        let m = &row[..d];
        if m[d - 1].is_zero() || m.iter().any(|c| c.abs() > h) {
            continue;
        }
        let residual: BigInt = m.iter().zip(values).map(|(c, x)| c * *x).sum();
        let residual = f.to_f64(&residual).abs();
        if residual <= 10f64.powi(-(digits as i32 - 8)) {
            let coeffs = m.iter().map(|c| c.to_i64().expect("bounded by height")).collect();
            return Ok(Search::Found(coeffs, residual));
        }
    }
    // A relation of height ≤ H gives a lattice vector of squared norm at
    // most d·H² + (d·H/2)² (rounding of the scaled entries).
    let dh = BigInt::from(d as u64) * &h;
    let bound: BigInt = BigInt::from(d as u64) * &h * &h + (&dh * &dh + 3u32) / 4u32 + 1u32;
    Ok(Search::Free { certified: reduced.shortest_exceeds(&bound) })
}

/// Cube and regular tetrahedron of equal volume with their symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Hilbert3Report {
    pub cube_volume: f64,
    pub tetrahedron_volume: f64,
    pub cube_symbol: DehnSymbol,
    pub tetrahedron_symbol: DehnSymbol,
    pub verdict: RelationVerdict,
}

/// Unit-volume instance at the default height and precision.
pub fn hilbert3_report(volume_tol: f64) -> Result<Hilbert3Report> {
    hilbert3_report_with_volume(1.0, volume_tol, DEFAULT_HEIGHT, DEFAULT_DIGITS)
}

pub fn hilbert3_report_with_volume(
    volume: f64,
    volume_tol: f64,
    height_bound: u64,
    digits: u32,
) -> Result<Hilbert3Report> {
    if !(volume > 0.0) {
        return Err(Error::InvalidInput("volume must be positive".into()));
    }
    let side = volume.cbrt();
    let cube = Polytope::cube(3, side)?;
    let cube = crate::geom::hull(cube.vertices())?;
    // The tetrahedron below has volume 8/3.
    let s = (volume * 3.0 / 8.0).cbrt();
    let tetra = regular_tetrahedron(s)?;
    let cube_volume = cube.volume()?;
    let tetrahedron_volume = tetra.volume()?;
    if (cube_volume - tetrahedron_volume).abs() > volume_tol {
        return Err(Error::InvalidInput(format!("volumes differ by {:e}", (cube_volume - tetrahedron_volume).abs())));
    }
    let cube_symbol = dehn_symbol(&cube)?;
    let tetrahedron_symbol = dehn_symbol(&tetra)?;
    let verdict = symbol_equal(&tetrahedron_symbol, &cube_symbol, height_bound, digits)?;
    Ok(Hilbert3Report { cube_volume, tetrahedron_volume, cube_symbol, tetrahedron_symbol, verdict })
}

/// `s · conv{(1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1)}`, edge length `2√2·s`.
pub fn regular_tetrahedron(s: f64) -> Result<Polytope> {
    let pts = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let pts: Vec<Vector> = pts.iter().map(|p| vector(p) * s).collect();
    Polytope::simplex(&pts)
}
