//! Binary fixed-point reals backed by `BigInt`, enough for angles and π at
//! a few hundred digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A context fixing the number of fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixed {
    pub bits: u32,
}

impl Fixed {
    /// Enough bits for `digits` decimal digits plus guard bits.
    pub fn for_digits(digits: u32) -> Self {
        Self { bits: (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64 }
    }

    pub fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    /// Exact conversion of a finite double (rounded below 2^−bits).
    pub fn from_f64(&self, x: f64) -> BigInt {
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        let shift = e + self.bits as i64;
        if shift >= 0 {
            m << shift as usize
        } else {
            round_shift(&m, (-shift) as usize)
        }
    }

    pub fn from_int(&self, k: i64) -> BigInt {
        BigInt::from(k) << self.bits
    }

    pub fn to_f64(&self, x: &BigInt) -> f64 {
        let shift = x.bits().saturating_sub(60);
        let top = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        round_shift(&(a * b), self.bits as usize)
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let num: BigInt = a << (self.bits as usize + 1);
        let q = num.div_floor(b);
        // Round half up.
        (q + 1) >> 1
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        assert!(!a.is_negative(), "square root of a negative number");
        (a << self.bits as usize).sqrt()
    }

    /// arctan for |x| ≤ 1 by argument halving and the Taylor series,
    /// evaluated with guard bits.
    pub fn atan(&self, x: &BigInt) -> BigInt {
        let guard = Fixed { bits: self.bits + 32 };
        round_shift(&guard.atan_halving(&(x << 32usize)), 32)
    }

    fn atan_halving(&self, x: &BigInt) -> BigInt {
        let one = self.one();
        let mut y = x.clone();
        let mut halvings = 0u32;
        // atan(x) = 2 atan(x / (1 + sqrt(1 + x²)))
        while y.abs() > (&one >> 8) {
            let s = self.sqrt(&(&one + self.mul(&y, &y)));
            y = self.div(&y, &(&one + s));
            halvings += 1;
        }
        let y2 = self.mul(&y, &y);
        let mut term = y.clone();
        let mut sum = y;
        let mut k = 1i64;
        loop {
            term = -self.mul(&term, &y2);
            let t = &term / (2 * k + 1);
            if t.is_zero() {
                break;
            }
            sum += t;
            k += 1;
        }
        sum << halvings as usize
    }

    /// Angle of (x, y) in (−π, π].
    pub fn atan2(&self, y: &BigInt, x: &BigInt, pi: &BigInt) -> BigInt {
        let half_pi: BigInt = pi >> 1;
        if x.is_zero() && y.is_zero() {
            return BigInt::zero();
        }
        if y.abs() <= x.abs() {
            let base = self.atan(&self.div(y, x));
            if x.is_positive() {
                base
            } else if y.is_negative() {
                base - pi
            } else {
                base + pi
            }
        } else {
            let base = self.atan(&self.div(x, y));
            if y.is_positive() {
                half_pi - base
            } else {
                -half_pi - base
            }
        }
    }

    /// π by Machin's formula.
    pub fn pi(&self) -> BigInt {
        let guard = Fixed { bits: self.bits + 16 };
        let inv = |k: i64| guard.div(&guard.one(), &guard.from_int(k));
        let a = guard.atan_series(&inv(5));
        let b = guard.atan_series(&inv(239));
        round_shift(&(a * 16 - b * 4), 16)
    }

    fn atan_series(&self, x: &BigInt) -> BigInt {
        let x2 = self.mul(x, x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1i64;
        loop {
            term = -self.mul(&term, &x2);
            let t = &term / (2 * k + 1);
            if t.is_zero() {
                return sum;
            }
            sum += t;
            k += 1;
        }
    }

    /// `round(x · 10^e)` as an integer.
    pub fn scaled_round(&self, x: &BigInt, e: u32) -> BigInt {
        round_shift(&(x * BigInt::from(10u32).pow(e)), self.bits as usize)
    }
}

fn round_shift(m: &BigInt, shift: usize) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    // `>>` on BigInt rounds toward −∞, so this is round-half-up.
    (m + (BigInt::one() << (shift - 1))) >> shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_known_digits() {
        let f = Fixed::for_digits(60);
        let pi = f.pi();
        let digits = f.scaled_round(&pi, 50).to_string();
        assert_eq!(digits, "314159265358979323846264338327950288419716939937511");
    }

    #[test]
    fn atan_of_one_is_quarter_pi() {
        let f = Fixed::for_digits(80);
        let pi = f.pi();
        let q = f.atan(&f.one());
        let diff: BigInt = q * 4 - &pi;
        let diff = diff.abs();
        assert!(diff < BigInt::from(1u32) << 8);
    }

    #[test]
    fn atan2_quadrants_agree_with_f64() {
        let f = Fixed::for_digits(40);
        let pi = f.pi();
        for (y, x) in [(1.0, 2.0), (2.0, -1.0), (-0.5, -3.0), (-4.0, 0.25), (1.0, 0.0)] {
            let a = f.to_f64(&f.atan2(&f.from_f64(y), &f.from_f64(x), &pi));
            assert!((a - f64::atan2(y, x)).abs() < 1e-15, "{y} {x}");
        }
    }

    #[test]
    fn exact_double_conversion() {
        let f = Fixed::for_digits(20);
        for x in [0.1, -3.75, 1e-12, 12345.678] {
            assert_eq!(f.to_f64(&f.from_f64(x)), x);
        }
    }
}
