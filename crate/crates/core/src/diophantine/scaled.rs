//! Nonnegative reals with an unbounded binary exponent.
//!
//! Small denominators in factorial-series constructions produce quantities
//! like `10^{-5040}` that underflow `f64`. [`Scaled`] keeps a 53-bit
//! mantissa and an `i64` exponent, which is all the certified bounds need.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// `mant · 2^exp2` with `mant ∈ [0.5, 1)`, or zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    mant: f64,
    exp2: i64,
}

/// Splits `x = m · 2^e` with `|m| ∈ [0.5, 1)`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff_u64 << 52)) | (1022_u64 << 52));
    (m, exp - 1022)
}

/// Top 64 bits of `v` as a float and the shift that was dropped.
fn top_bits(v: &BigInt) -> (f64, i64) {
    let shift = (v.bits() as i64 - 64).max(0);
    let top = (v >> shift as usize).to_f64().expect("64-bit value fits in f64");
    (top, shift)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, exp2: 0 };
    pub const ONE: Scaled = Scaled { mant: 0.5, exp2: 1 };

    fn normalized(m: f64, e: i64) -> Self {
        debug_assert!(m >= 0.0 && m.is_finite(), "Scaled holds finite nonnegative values");
        if m == 0.0 {
            return Self::ZERO;
        }
        let (mant, de) = frexp(m);
        Self { mant, exp2: e + de }
    }

    /// `|x|` for a finite float.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "Scaled::from_f64 needs a finite value");
        Self::normalized(x.abs(), 0)
    }

    /// `|x|` for an exact rational, to within a few ulps.
    pub fn from_ratio(x: &BigRational) -> Self {
        Self::from_parts(&x.numer().abs(), x.denom())
    }

    /// `|n| / |d|` without forming the quotient exactly.
    pub fn from_parts(n: &BigInt, d: &BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        if n.is_zero() {
            return Self::ZERO;
        }
        let (mn, en) = top_bits(&n.abs());
        let (md, ed) = top_bits(&d.abs());
        Self::normalized(mn / md, en - ed)
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::from_parts(n, &BigInt::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    /// Value as `f64`; underflows to zero and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp2.clamp(-1100, 1100) as i32;
        // two steps so that 2^e itself never under- or overflows prematurely
        self.mant * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn log10(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.log10() + self.exp2 as f64 * std::f64::consts::LOG10_2
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mant * other.mant, self.exp2 + other.exp2)
    }

    pub fn div(self, other: Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mant / other.mant, self.exp2 - other.exp2)
    }

    pub fn mul_f64(self, c: f64) -> Self {
        self.mul(Self::from_f64(c))
    }

    pub fn recip(self) -> Self {
        Self::ONE.div(self)
    }

    pub fn powi(self, k: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// `self + other`.
    pub fn add(self, other: Self) -> Self {
        let (big, small) = if self >= other { (self, other) } else { (other, self) };
        if small.is_zero() {
            return big;
        }
        let shift = (small.exp2 - big.exp2).max(-1100) as i32;
        Self::normalized(big.mant + small.mant * 2f64.powi(shift), big.exp2)
    }

    /// `max(self - other, 0)`.
    pub fn sub_saturating(self, other: Self) -> Self {
        if other >= self {
            return Self::ZERO;
        }
        if other.is_zero() {
            return self;
        }
        let shift = (other.exp2 - self.exp2).max(-1100) as i32;
        let m = self.mant - other.mant * 2f64.powi(shift);
        Self::normalized(m.max(0.0), self.exp2)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Scaled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp2.cmp(&other.exp2).then(self.mant.total_cmp(&other.mant)),
        })
    }
}

impl fmt::Display for Scaled {
    /// Scientific notation with 15 significant digits, e.g. `3.14159265358979e-18`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let l = self.log10();
        let mut e = l.floor();
        let mut m = 10f64.powf(l - e);
        if m >= 9.999_999_999_999_995 {
            m /= 10.0;
            e += 1.0;
        }
        write!(f, "{m:.14}e{}", e as i64)
    }
}

impl Serialize for Scaled {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trips_ordinary_floats() {
        for x in [1.0, 0.3, 7.25e-300, 1e300, 5e-324] {
            assert_eq!(Scaled::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn tiny_ratios_keep_their_exponent() {
        let d = BigInt::from(10).pow(5040);
        let s = Scaled::from_parts(&BigInt::from(3), &d);
        assert_relative_eq!(s.log10(), 3f64.log10() - 5040.0, epsilon = 1e-12);
        assert_eq!(s.to_f64(), 0.0);
    }

    #[test]
    fn arithmetic_matches_f64_in_range() {
        let a = Scaled::from_f64(3.5);
        let b = Scaled::from_f64(0.25);
        assert_eq!(a.mul(b).to_f64(), 0.875);
        assert_eq!(a.div(b).to_f64(), 14.0);
        assert_eq!(a.add(b).to_f64(), 3.75);
        assert_eq!(a.sub_saturating(b).to_f64(), 3.25);
        assert_eq!(b.sub_saturating(a), Scaled::ZERO);
        assert_eq!(b.powi(3).to_f64(), 0.015625);
        assert!(b < a && Scaled::ZERO < b);
    }

    #[test]
    fn display_is_scientific() {
        assert_eq!(Scaled::from_f64(1.0).to_string(), "1.00000000000000e0");
        let tiny = Scaled::from_parts(&BigInt::from(1), &BigInt::from(10).pow(720));
        assert!(tiny.to_string().ends_with("e-720"), "{tiny}");
    }
}
