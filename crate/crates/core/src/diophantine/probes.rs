//! Numeric probes of lower-bound conditions on symbols.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::number_class::NumberClass;
use super::sine::sine_abs_interval;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::MultiplierSymbol;

/// Outcome of [`joint_sine_lower_bound_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointBound {
    /// `min_x (|sin x| + |sin αx|)/|x| · (1 + |x|)^N` over the sample set.
    pub c: f64,
    pub passes: bool,
    /// Where the minimum was attained.
    pub argmin: f64,
    /// Number of points examined.
    pub points: usize,
}

fn scaled_interval(k: i64, (lo, hi): &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let k = BigRational::from_integer(BigInt::from(k));
    (&k * lo, &k * hi)
}

/// Sweep of `F(x) = (|sin x| + |sin αx|)/|x|` against `C(1 + |x|)^{-N}`.
///
/// The minimum of `F` sits at zeros of one of the two sines, so besides a
/// uniform grid of `samples` points every `x = jπ` and `x = jπ/α` up to
/// `x_max` is visited. At those points the vanishing sine is exactly zero
/// and the other one is evaluated by exact reduction, giving a certified
/// lower bound. `F` is even, so only `x > 0` is sampled.
pub fn joint_sine_lower_bound_check(alpha: &NumberClass, n: u32, x_max: f64, samples: usize) -> Result<JointBound> {
    let NumberClass::IrrationalBounded(_) = alpha else {
        return Err(Error::Precondition(format!(
            "joint bound needs an irrational with a measure bound, got {alpha}"
        )));
    };
    if !(x_max > 0.0) {
        return Err(Error::Precondition("x_max must be positive".into()));
    }
    let (lo, hi) = alpha.interval();
    if !lo.is_positive() {
        return Err(Error::Precondition("α must be positive".into()));
    }
    let inv = (hi.recip(), lo.recip());
    let a = alpha.approximation().to_f64().expect("finite α");
    let weight = |x: f64| (1.0 + x).powi(n as i32);

    let mut best = (f64::INFINITY, 0.0);
    let mut points = 0;
    let mut visit = |x: f64, f: f64| {
        points += 1;
        let v = f * weight(x);
        if v < best.0 {
            best = (v, x);
        }
    };
    for i in 1..=samples {
        let x = x_max * i as f64 / samples as f64;
        visit(x, ((x.sin()).abs() + (a * x).sin().abs()) / x);
    }
    // x = jπ: sin x = 0, |sin(αjπ)| certified from jα
    let jmax = (x_max / PI).floor() as i64;
    for j in 1..=jmax {
        let (l, h) = scaled_interval(j, &(lo.clone(), hi.clone()));
        let s = sine_abs_interval(&l, &h)?;
        let x = j as f64 * PI;
        visit(x, s.lo.to_f64() / (x * (1.0 + 1e-15)));
    }
    // x = jπ/α: sin αx = 0, |sin(jπ/α)| certified from j/α
    let jmax = (x_max * a / PI).floor() as i64;
    for j in 1..=jmax {
        let (l, h) = scaled_interval(j, &inv);
        let s = sine_abs_interval(&l, &h)?;
        let x = j as f64 * PI / a;
        visit(x, s.lo.to_f64() / (x * (1.0 + 1e-15)));
    }
    let (c, argmin) = best;
    Ok(JointBound { c, passes: c > 0.0 && c.is_finite(), argmin, points })
}

/// One sampled frequency of a slowly-decreasing probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdRow {
    pub xi: f64,
    /// Witness `η` with `|η - ξ| < A log(2 + |ξ|)` and `|F(η)| ≥ (A + |ξ|)^{-A}`.
    pub eta: Option<f64>,
    /// `|F(η)|` at the witness, or the best value found.
    pub value: f64,
    pub threshold: f64,
}

/// Result of [`slowly_decreasing_probe`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdProbe {
    pub rows: Vec<SdRow>,
    pub passes: bool,
}

/// Searches, for each sampled `ξ ∈ [0, xi_max]`, a real `η` near `ξ` where
/// the radial symbol `F` is not too small.
///
/// Candidates are `ξ` itself, the half-integer multiples of `π` inside the
/// window (where `|sin|` peaks) and a uniform grid over the window.
pub fn slowly_decreasing_probe<T: Real>(
    symbol: &MultiplierSymbol<T>,
    a: f64,
    xi_max: f64,
    samples: usize,
) -> Result<SdProbe> {
    if !(a > 0.0) {
        return Err(Error::Precondition(format!("A must be positive, got {a}")));
    }
    if samples < 2 || !(xi_max >= 0.0) {
        return Err(Error::Precondition("need at least two samples on a nonnegative range".into()));
    }
    let eval = |eta: f64| -> f64 {
        let lambda = T::from_f64(eta.abs()).expect("representable frequency");
        symbol.eval(lambda).norm().to_f64().unwrap_or(0.0)
    };
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let xi = xi_max * i as f64 / (samples - 1) as f64;
        let radius = a * (2.0 + xi).ln();
        let threshold = (a + xi).powf(-a);
        let mut candidates = vec![xi];
        let k0 = ((xi - radius) / PI - 0.5).floor() as i64;
        let k1 = ((xi + radius) / PI - 0.5).ceil() as i64;
        let mut half: Vec<f64> = (k0..=k1).map(|k| (k as f64 + 0.5) * PI).collect();
        half.sort_by(|x, y| (x - xi).abs().total_cmp(&(y - xi).abs()));
        candidates.extend(half);
        candidates.extend((0..=256).map(|g| xi - radius + 2.0 * radius * g as f64 / 256.0));

        let mut best = (None, 0.0f64);
        for eta in candidates.into_iter().filter(|e| (e - xi).abs() < radius) {
            let v = eval(eta);
            if v >= threshold {
                best = (Some(eta), v);
                break;
            }
            best.1 = best.1.max(v);
        }
        rows.push(SdRow { xi, eta: best.0, value: best.1, threshold });
    }
    let passes = rows.iter().all(|r| r.eta.is_some());
    Ok(SdProbe { rows, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::ratio;
    use crate::propagators::symbol_s;

    #[test]
    fn sqrt2_passes_with_cubic_weight() {
        let r = joint_sine_lower_bound_check(&NumberClass::sqrt2(), 3, 200.0, 2000).unwrap();
        assert!(r.passes && r.c > 0.0);
    }

    #[test]
    fn compact_interval_has_positive_minimum() {
        let r = joint_sine_lower_bound_check(&NumberClass::sqrt2(), 0, 2.0 * PI, 500).unwrap();
        assert!(r.c > 0.05, "{r:?}");
    }

    #[test]
    fn rational_alpha_is_rejected() {
        let q = NumberClass::Rational(ratio(3, 2));
        assert!(matches!(joint_sine_lower_bound_check(&q, 3, 10.0, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn sinc_is_slowly_decreasing() {
        let p = slowly_decreasing_probe(&symbol_s(1.0f64), 4.0, 1000.0, 501).unwrap();
        assert!(p.passes);
    }

    #[test]
    fn constants() {
        let one = slowly_decreasing_probe(&MultiplierSymbol::constant(1.0f64), 1.0, 100.0, 11).unwrap();
        assert!(one.passes && one.rows.iter().all(|r| r.eta == Some(r.xi)));
        let zero = slowly_decreasing_probe(&MultiplierSymbol::constant(0.0f64), 4.0, 100.0, 11).unwrap();
        assert!(!zero.passes && zero.rows.iter().all(|r| r.eta.is_none()));
    }
}
