//! Scalar abstraction shared by the floating-point modules.
//!
//! Everything that evaluates trigonometric symbols is generic over [`Real`],
//! which is implemented for `f32` and `f64`. Exact work (continued fractions,
//! certified sine bounds) lives in [`crate::diophantine`] on `BigRational`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a (possibly large) integer into the working scalar.
#[inline]
pub(crate) fn int<T: Real>(x: i64) -> T {
    T::from_i64(x).expect("integer representable in scalar type")
}

/// Tolerance below which `|sin x|` counts as an exact zero.
///
/// `1e-14` in double precision; never below a few dozen ulps of the scalar.
#[inline]
pub fn zero_sine_tol<T: Real>() -> T {
    lit::<T>(1e-14).max(T::epsilon() * lit(45.0))
}

/// `sin x` and `cos x` after reducing `x` modulo `π`.
///
/// Writes `x = jπ + r` with `|r| ≤ π/2`, so that integer multiples of the
/// floating-point `π` give an exact zero sine.
#[inline]
pub fn sin_cos_reduced<T: Real>(x: T) -> (T, T) {
    let (r, odd) = reduce_pi(x);
    let (s, c) = r.sin_cos();
    if odd {
        (-s, -c)
    } else {
        (s, c)
    }
}

/// `sin x` with the argument reduced modulo `π`.
#[inline]
pub fn sin_reduced<T: Real>(x: T) -> T {
    sin_cos_reduced(x).0
}

/// Reduces `x = jπ + r`; returns `r` and whether `j` is odd.
#[inline]
pub(crate) fn reduce_pi<T: Real>(x: T) -> (T, bool) {
    let j = (x / T::PI()).round();
    // plain product on purpose: x computed as j*PI must reduce to exactly 0
    let r = x - j * T::PI();
    let odd = (j / lit(2.0)).fract() != T::zero();
    (r, odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reduced_sine_vanishes_on_multiples_of_pi() {
        for j in 0..50 {
            let x = j as f64 * PI;
            assert_eq!(sin_reduced(x), 0.0, "j = {j}");
            assert_eq!(sin_reduced(-x), 0.0);
        }
        assert_eq!(sin_reduced(2.0 * PI), 0.0);
        assert_eq!(sin_reduced(0.5 * (2.0 * PI)), 0.0);
    }

    #[test]
    fn reduced_matches_libm_away_from_zeros() {
        for i in 0..1000 {
            let x = -40.0 + 0.0837 * i as f64;
            let (s, c) = sin_cos_reduced(x);
            assert!((s - x.sin()).abs() < 1e-13);
            assert!((c - x.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn single_precision_works() {
        let (s, c) = sin_cos_reduced(std::f32::consts::PI);
        assert_eq!(s, 0.0);
        assert_eq!(c, -1.0);
        assert!(zero_sine_tol::<f32>() > 1e-6);
        assert_eq!(zero_sine_tol::<f64>(), 1e-14);
    }
}
