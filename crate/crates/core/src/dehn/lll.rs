//! Integral LLL reduction (δ = 3/4) on integer row vectors, with exact
//! Gram–Schmidt data kept as integers throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Reduced basis together with the Gram determinants `d_0 = 1, d_1, …, d_k`,
/// so that `|b*_i|² = d_{i+1} / d_i`.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub basis: Vec<Vec<BigInt>>,
    pub gram: Vec<BigInt>,
}

impl Reduced {
    /// True when every Gram–Schmidt vector has squared norm above `bound`,
    /// which rules out nonzero lattice vectors of squared norm ≤ `bound`.
    pub fn shortest_exceeds(&self, bound: &BigInt) -> bool {
        (1..self.gram.len()).all(|i| self.gram[i] > bound * &self.gram[i - 1])
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

pub fn reduce(mut b: Vec<Vec<BigInt>>) -> Result<Reduced> {
    let n = b.len();
    // 1-based indices for λ and d, following the textbook formulation.
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::from(1);
    if n == 0 {
        return Ok(Reduced { basis: b, gram: d });
    }
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::SingularSystem("zero lattice vector".into()));
    }
    let mut k = 2;
    let mut k_max = 1;
    while k <= n {
        if k > k_max {
            k_max = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::SingularSystem("lattice vectors are dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        size_reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            swap(&mut b, &mut lam, &mut d, k, k_max);
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                size_reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(Reduced { basis: b, gram: d })
}

fn size_reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let twice: BigInt = &lam[k][l] * 2;
    if twice.abs() <= d[l] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l]);
    let bl = b[l - 1].clone();
    for (x, y) in b[k - 1].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * &d[l];
    for i in 1..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, k_max: usize) {
    b.swap(k - 1, k - 2);
    for j in 1..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
    for i in k + 1..=k_max {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
        lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
    }
    d[k - 1] = big_b;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn reduces_a_skewed_planar_basis() {
        let r = reduce(vec![v(&[1, 0]), v(&[1000, 1])]).unwrap();
        for row in &r.basis {
            assert!(row.iter().all(|c| c.abs() <= BigInt::from(1)));
        }
        assert_eq!(r.gram[2], BigInt::from(1));
    }

    #[test]
    fn finds_small_relation() {
        // x = (1, 2, 3) scaled: relation x0 + x1 − x2 = 0.
        let scale = 1_000_000i64;
        let r = reduce(vec![v(&[1, 0, 0, scale]), v(&[0, 1, 0, 2 * scale]), v(&[0, 0, 1, 3 * scale])]).unwrap();
        let first = &r.basis[0];
        assert!(first[3].is_zero());
        let h: i64 = first[..3].iter().map(|c| c.abs().try_into().unwrap_or(i64::MAX)).max().unwrap();
        assert!(h <= 2);
    }

    #[test]
    fn dependent_vectors_are_rejected() {
        assert!(reduce(vec![v(&[1, 2]), v(&[2, 4])]).is_err());
    }
}
