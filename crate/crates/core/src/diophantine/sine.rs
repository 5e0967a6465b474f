//! Certified `|sin(πx)|` for exact and interval arguments, and the
//! small-denominator sequences `l ↦ |sin((l + s)βπ)|`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::number_class::NumberClass;
use super::scaled::Scaled;
use super::nearest_integer;
use crate::error::{Error, Result};

/// Relative error of `|sin(πδ)|` evaluated in double precision for an
/// exactly reduced `|δ| ≤ 3/4`: conversion, product and `sin` each cost at
/// most a couple of ulps.
const SINE_REL_ERR: f64 = 1e-15;

/// Offsets below this are handled as `sin(πδ) = πδ`; the cubic term is then
/// far below `SINE_REL_ERR`.
const LINEAR_REGIME_LOG2: i64 = -900;

/// Certified enclosure `lo ≤ |sin(πx)| ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifiedSine {
    pub lo: Scaled,
    pub hi: Scaled,
}

impl CertifiedSine {
    /// The value is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.hi.is_zero()
    }

    /// Zero is not excluded.
    pub fn may_vanish(&self) -> bool {
        self.lo.is_zero()
    }

    /// Both bounds agree to at least one significant digit.
    pub fn is_certified(&self) -> bool {
        !self.lo.is_zero() && self.hi <= self.lo.mul_f64(1.5)
    }

    pub fn width(&self) -> f64 {
        self.hi.to_f64() - self.lo.to_f64()
    }
}

/// `|sin(π|δ|)|` enclosure for an offset known to a few ulps.
fn point_bounds(delta: Scaled) -> (Scaled, Scaled) {
    if delta.is_zero() {
        return (Scaled::ZERO, Scaled::ZERO);
    }
    let mid = if delta.log10() > LINEAR_REGIME_LOG2 as f64 * std::f64::consts::LOG10_2 {
        Scaled::from_f64((PI * delta.to_f64()).sin().abs())
    } else {
        delta.mul_f64(PI)
    };
    (mid.mul_f64(1.0 - SINE_REL_ERR), mid.mul_f64(1.0 + SINE_REL_ERR).min(Scaled::ONE))
}

/// Enclosure of `|sin(πy)|` over `y ∈ [δ, δ + w]` given `|δ|` and `w`.
///
/// `|sin(πy)|` is π-Lipschitz, so widening the point enclosure by `πw` is
/// enough; the width must stay below a quarter period.
fn widened(delta: Scaled, w: Scaled) -> Result<CertifiedSine> {
    if w > Scaled::from_f64(0.25) {
        return Err(Error::PrecisionExhausted(format!("argument enclosure of width {w} is too wide")));
    }
    let (lo, hi) = point_bounds(delta);
    let slack = w.mul_f64(PI * (1.0 + SINE_REL_ERR));
    Ok(CertifiedSine { lo: lo.sub_saturating(slack), hi: hi.add(slack).min(Scaled::ONE) })
}

/// `|sin(πx)|` after exact reduction of `x` modulo 1.
pub fn exact_sine_abs(x: &BigRational) -> CertifiedSine {
    let delta = x - BigRational::from_integer(nearest_integer(x));
    let (lo, hi) = point_bounds(Scaled::from_ratio(&delta));
    CertifiedSine { lo, hi }
}

/// Enclosure of `|sin(πx)|` over `x ∈ [lo, hi]`.
pub fn sine_abs_interval(lo: &BigRational, hi: &BigRational) -> Result<CertifiedSine> {
    if hi < lo {
        return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(exact_sine_abs(lo));
    }
    let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
    let half = (hi - lo) / BigRational::from_integer(BigInt::from(2));
    sine_abs_ball(&mid, Scaled::from_ratio(&half))
}

/// `|sin(πx)|` over `|x - center| ≤ radius`, for radii too small to hold as rationals.
pub fn sine_abs_ball(center: &BigRational, radius: Scaled) -> Result<CertifiedSine> {
    if radius.is_zero() {
        return Ok(exact_sine_abs(center));
    }
    let delta = center - BigRational::from_integer(nearest_integer(center));
    let (d, w) = (Scaled::from_ratio(&delta), radius);
    // |δ| ≤ w means the enclosure contains an integer
    if d <= w.mul_f64(1.0 + 4.0 * f64::EPSILON) {
        let hi = widened(d, w)?.hi;
        return Ok(CertifiedSine { lo: Scaled::ZERO, hi });
    }
    widened(d, w)
}

/// One row of a small-denominator table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SineRow {
    pub l: u64,
    /// Enclosure of `|sin((l + s)βπ)|`.
    pub value: CertifiedSine,
}

/// `l ↦ |sin((l + s)βπ)|` for `0 ≤ l ≤ L`, with a decay fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallDenTable {
    pub rows: Vec<SineRow>,
    /// Number of rows whose value is exactly zero.
    pub exact_zeros: usize,
    /// Minus the slope of `log(block minimum)` against `log l` on dyadic
    /// blocks; infinite when a block contains an exact zero, absent with
    /// fewer than two blocks.
    pub fitted_decay: Option<f64>,
}

impl SmallDenTable {
    /// `(l, certified lower bound)` pairs for [`slow_decay_check`].
    pub fn lower_bounds(&self) -> Vec<(u64, f64)> {
        self.rows.iter().map(|r| (r.l, r.value.lo.to_f64())).collect()
    }
}

/// Certified table of `|sin((l + num/den)βπ)|`, `l = 0..=count`.
///
/// The lower end of `β`'s enclosure is reduced incrementally with exact
/// integer arithmetic; the enclosure width enters as a Lipschitz slack.
pub fn small_denominator_sequence(beta: &NumberClass, shift_num: u64, shift_den: u64, count: u64) -> Result<SmallDenTable> {
    if !(shift_den == 1 || shift_den == 2) {
        return Err(Error::Precondition(format!("shift denominator must be 1 or 2, got {shift_den}")));
    }
    if count > 1_000_000 {
        return Err(Error::Precondition(format!("L = {count} exceeds 10^6")));
    }
    let (lo, hi) = beta.interval();
    let width = Scaled::from_ratio(&(&hi - &lo));
    // (l + sn/sd)·N/D = (l·sd + sn)·N / (sd·D)
    let (n, d) = (lo.numer().clone(), lo.denom().clone());
    let modulus = &d * BigInt::from(shift_den);
    let step = (&n * BigInt::from(shift_den)).mod_floor(&modulus);
    let mut r = (&n * BigInt::from(shift_num)).mod_floor(&modulus);

    let mut rows = Vec::with_capacity(count as usize + 1);
    let mut exact_zeros = 0;
    for l in 0..=count {
        let twice = &r << 1;
        let offset = if twice <= modulus { r.clone() } else { &modulus - &r };
        let delta = Scaled::from_parts(&offset, &modulus);
        let k = Scaled::from_f64((l * shift_den + shift_num) as f64 / shift_den as f64);
        let value = if width.is_zero() {
            let (a, b) = point_bounds(delta);
            CertifiedSine { lo: a, hi: b }
        } else {
            widened(delta, width.mul(k))?
        };
        if value.is_exact_zero() {
            exact_zeros += 1;
        }
        rows.push(SineRow { l, value });
        r += &step;
        if r >= modulus {
            r -= &modulus;
        }
    }
    let fitted_decay = fit_decay(&rows);
    Ok(SmallDenTable { rows, exact_zeros, fitted_decay })
}

/// Lower-envelope decay exponent on dyadic blocks `[2^i, 2^{i+1})`.
fn fit_decay(rows: &[SineRow]) -> Option<f64> {
    let mut points = Vec::new();
    let mut i = 0u32;
    loop {
        let (a, b) = (1u64 << i, (1u64 << (i + 1)) - 1);
        let block: Vec<&SineRow> = rows.iter().filter(|r| r.l >= a && r.l <= b).collect();
        if block.is_empty() {
            break;
        }
        let min = block.iter().min_by(|x, y| x.value.lo.partial_cmp(&y.value.lo).unwrap())?;
        if min.value.is_exact_zero() {
            return Some(f64::INFINITY);
        }
        if min.value.lo.is_zero() {
            return None;
        }
        points.push(((min.l as f64).log10(), min.value.lo.log10()));
        i += 1;
    }
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

/// `C = min_l value_l·(1 + l)^M`; passes iff every value is nonzero and `C > 0`.
pub fn slow_decay_check(table: &[(u64, f64)], m: u32) -> (bool, f64) {
    let c = table
        .iter()
        .map(|&(l, v)| v * (1.0 + l as f64).powi(m as i32))
        .fold(f64::INFINITY, f64::min);
    let nonzero = table.iter().all(|&(_, v)| v > 0.0);
    let c = if table.is_empty() { 0.0 } else { c };
    (nonzero && c > 0.0, if nonzero { c } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{big_pow, liouville_truncation, ratio};
    use num_traits::One;

    #[test]
    fn exact_values() {
        let half = exact_sine_abs(&ratio(1, 2));
        assert!(half.lo.to_f64() <= 1.0 && half.hi.to_f64() == 1.0 && half.lo.to_f64() > 1.0 - 1e-14);
        for k in -5..5 {
            assert!(exact_sine_abs(&ratio(k, 1)).is_exact_zero());
        }
    }

    #[test]
    fn integer_shift_invariance_is_exact() {
        for (p, q) in [(1, 7), (-3, 11), (22, 7), (5, 2)] {
            let x = ratio(p, q);
            let base = exact_sine_abs(&x);
            for k in [-3, 1, 1000] {
                assert_eq!(exact_sine_abs(&(&x + ratio(k, 1))), base);
            }
        }
    }

    #[test]
    fn tiny_offsets_against_series_oracle() {
        // x = q·(0.110001) with q = 100 has fractional part 1e-4
        let x = ratio(100, 1) * liouville_truncation(10, &[1], 3).unwrap().approximation();
        let s = exact_sine_abs(&x);
        let y = PI * 1e-4;
        let oracle = y - y.powi(3) / 6.0 + y.powi(5) / 120.0;
        assert!(s.lo.to_f64() <= oracle && oracle <= s.hi.to_f64());
        assert!(s.width() < 1e-14);
        // 10^{-5000}: far below f64
        let tiny = BigRational::new(BigInt::one(), big_pow(10, 5000)) + ratio(3, 1);
        let t = exact_sine_abs(&tiny);
        assert!((t.lo.log10() - (PI.log10() - 5000.0)).abs() < 1e-12);
        assert!(t.is_certified());
    }

    #[test]
    fn intervals_straddling_an_integer_may_vanish() {
        let s = sine_abs_interval(&ratio(-1, 1000), &ratio(1, 1000)).unwrap();
        assert!(s.may_vanish() && s.hi.to_f64() >= (PI / 1000.0).sin());
        assert!(sine_abs_interval(&ratio(0, 1), &ratio(3, 5)).is_err());
    }

    #[test]
    fn rational_sequence_has_exact_zeros() {
        let t = small_denominator_sequence(&NumberClass::rational(2, 5).unwrap(), 0, 1, 50).unwrap();
        for r in &t.rows {
            assert_eq!(r.value.is_exact_zero(), r.l % 5 == 0, "l = {}", r.l);
        }
        assert_eq!(t.fitted_decay, Some(f64::INFINITY));
    }

    #[test]
    fn half_shift_with_odd_numerator_stays_away_from_zero() {
        let q = 7;
        let t = small_denominator_sequence(&NumberClass::rational(3, q).unwrap(), 1, 2, 10_000).unwrap();
        let floor = (PI / (2.0 * q as f64)).sin();
        assert!(t.rows.iter().all(|r| r.value.lo.to_f64() >= floor * (1.0 - 1e-12)));
    }

    #[test]
    fn sequence_rows_match_direct_evaluation() {
        let beta = NumberClass::golden();
        let t = small_denominator_sequence(&beta, 1, 2, 200).unwrap();
        let (lo, hi) = beta.interval();
        for r in t.rows.iter().step_by(17) {
            let k = ratio(2 * r.l as i64 + 1, 2);
            let direct = sine_abs_interval(&(&k * &lo), &(&k * &hi)).unwrap();
            assert!(r.value.lo <= direct.hi && direct.lo <= r.value.hi);
        }
    }

    #[test]
    fn slow_decay_check_cases() {
        assert_eq!(slow_decay_check(&[(0, 1.0), (5, 1.0)], 0), (true, 1.0));
        assert_eq!(slow_decay_check(&[(0, 1.0), (1, 0.0)], 3), (false, 0.0));
        let (ok, c) = slow_decay_check(&[(1, 0.5), (3, 0.01)], 2);
        assert!(ok && (c - 0.16).abs() < 1e-12);
    }
}
