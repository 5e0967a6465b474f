//! Exact arithmetic behind the small-denominator analysis.
//!
//! All inequalities are decided on [`BigRational`]s. Floating point enters
//! only when taking `|sin(πδ)|` of an exactly reduced offset `δ`, and even
//! then the result is an interval (see [`sine`]).

pub mod cfrac;
pub mod number_class;
pub mod oddtype;
pub mod probes;
pub mod scaled;
pub mod sine;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

pub use cfrac::{continued_fraction, irrationality_exponent_probe, ContinuedFraction, ExponentEntry, ExponentProbe};
pub use number_class::{
    liouville_truncation, odd_type_truncation, BoundedIrrational, CoefficientRule, LiouvilleSeries, NumberClass,
    MAX_DEPTH,
};
pub use oddtype::{
    doubled_liouville_bound, odd_type_verifier, odd_type_verifier_with_depth, DoubledWitness, OddTypeReport,
};
pub use probes::{joint_sine_lower_bound_check, slowly_decreasing_probe, JointBound, SdProbe, SdRow};
pub use scaled::Scaled;
pub use sine::{
    exact_sine_abs, sine_abs_ball, sine_abs_interval, slow_decay_check, small_denominator_sequence, CertifiedSine, SineRow,
    SmallDenTable,
};

/// `p/q` as a reduced rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `b^e` for a small base.
pub fn big_pow(b: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

/// `n!` for `n ≤ 20`.
pub fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Nearest integer; half-integers round to the even neighbour.
pub fn nearest_integer(x: &BigRational) -> BigInt {
    let f = x.floor().to_integer();
    let r = x - BigRational::from_integer(f.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match r.cmp(&half) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal if f.is_even() => f,
        std::cmp::Ordering::Equal => f + 1,
    }
}

/// `|x - [x]|`, the distance to the nearest integer.
pub fn dist_to_integer(x: &BigRational) -> BigRational {
    (x - BigRational::from_integer(nearest_integer(x))).abs()
}

/// Bezout pair `(k, l)` with `kp + lq = 1`, `|k| ≤ |q|` and `|l| ≤ |p|`.
///
/// Among all solutions `k` is the residue of least absolute value modulo `q`,
/// positive on ties; `l` follows.
pub fn bezout(p: i64, q: i64) -> Result<(i64, i64)> {
    let eg = p.extended_gcd(&q);
    if eg.gcd.abs() != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let k0 = if eg.gcd == 1 { eg.x } else { -eg.x };
    let m = q.abs();
    if m == 0 {
        return Ok((p, 0));
    }
    let mut k = k0.rem_euclid(m);
    if 2 * k > m {
        k -= m;
    }
    let l = (1 - k as i128 * p as i128) / q as i128;
    Ok((k, l as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_integer_ties_to_even() {
        assert_eq!(nearest_integer(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(nearest_integer(&ratio(5, 2)), BigInt::from(2));
        assert_eq!(nearest_integer(&ratio(5, 3)), BigInt::from(2));
        assert_eq!(nearest_integer(&ratio(-1, 2)), BigInt::from(0));
        assert_eq!(nearest_integer(&ratio(-3, 2)), BigInt::from(-2));
        assert_eq!(nearest_integer(&ratio(-4, 3)), BigInt::from(-1));
    }

    #[test]
    fn bezout_reference_pairs() {
        assert_eq!(bezout(2, 3).unwrap(), (-1, 1));
        assert_eq!(bezout(1, 2).unwrap(), (1, 0));
        assert_eq!(bezout(5, 7).unwrap(), (3, -2));
        assert!(matches!(bezout(4, 6), Err(Error::NotCoprime { p: 4, q: 6 })));
    }

    #[test]
    fn bezout_identity_and_bounds() {
        for p in 1..40i64 {
            for q in 1..40i64 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let (k, l) = bezout(p, q).unwrap();
                assert_eq!(k * p + l * q, 1, "p={p} q={q}");
                assert!(k.abs() <= q && l.abs() <= p, "p={p} q={q} -> ({k},{l})");
            }
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(7), 5040);
    }
}
