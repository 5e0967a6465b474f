//! `β = Σ 2^{-j!}` is not a Liouville number of odd type, and every
//! Liouville number is approximable to any order with even denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::number_class::{CoefficientRule, LiouvilleSeries, NumberClass, MAX_DEPTH};
use super::scaled::Scaled;
use super::{big_pow, factorial, liouville_truncation};
use crate::error::{Error, Result};

/// Scan of `|qβ - [qβ]| > q^{-3}` over odd `q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OddTypeReport {
    pub qmax: u64,
    /// Truncation depth used for `β`.
    pub depth: u32,
    /// Number of odd `q` examined.
    pub checked: u64,
    /// Smallest certified `|qβ - [qβ]| · q^3`; exceeds 1 when nothing fails.
    pub min_ratio: f64,
    pub argmin_q: u64,
    /// Smallest certified margin `|qβ - [qβ]| - q^{-3}`.
    pub min_margin: Scaled,
    pub violations: Vec<u64>,
}

impl OddTypeReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }
}

/// Depth `J` with `qmax · 2^{-(J+1)!+1} < ½ qmax^{-3}`.
fn depth_for(qmax: u64) -> Result<u32> {
    let q = BigRational::from_integer(BigInt::from(qmax));
    let target = (&q * &q * &q * &q * BigRational::from_integer(BigInt::from(2))).recip();
    for j in 1..=MAX_DEPTH {
        let tail = BigRational::new(BigInt::one(), big_pow(2, factorial(j + 1) as u32 - 1));
        if tail < target {
            return Ok(j);
        }
    }
    Err(Error::PrecisionExhausted(format!("qmax = {qmax} needs depth beyond {MAX_DEPTH}")))
}

/// Exact check of `|qβ - [qβ]| > q^{-3}` for every odd `q ∈ (2^{3!}, qmax]`.
pub fn odd_type_verifier(qmax: u64) -> Result<OddTypeReport> {
    odd_type_verifier_with_depth(qmax, depth_for(qmax)?)
}

/// As [`odd_type_verifier`] with an explicit truncation depth.
///
/// With `β_J = N/2^{J!}` the offset `qβ_J mod 1` is an exact dyadic; the
/// tail moves `qβ` by at most `q·2^{-(J+1)!+1}`, so the certified margin is
/// `dist(qβ_J) - q·tail - q^{-3}`.
pub fn odd_type_verifier_with_depth(qmax: u64, depth: u32) -> Result<OddTypeReport> {
    if qmax > 100_000 {
        return Err(Error::Precondition(format!("qmax = {qmax} exceeds 10^5")));
    }
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::PrecisionExhausted(format!("depth {depth} outside 1..={MAX_DEPTH}")));
    }
    let beta = liouville_truncation(2, &[1], depth)?;
    let series = beta.series().expect("series class");
    let v = series.truncation();
    let tail = series.tail_bound();
    let (num, den) = (v.numer().clone(), v.denom().clone());

    let mut report = OddTypeReport {
        qmax,
        depth,
        checked: 0,
        min_ratio: f64::INFINITY,
        argmin_q: 0,
        min_margin: Scaled::ZERO,
        violations: Vec::new(),
    };
    let mut min_margin: Option<BigRational> = None;
    let mut q = 65u64;
    while q <= qmax {
        let r = (&num * BigInt::from(q)).mod_floor(&den);
        let off = r.clone().min(&den - &r);
        let dist = BigRational::new(off, den.clone());
        let qr = BigRational::from_integer(BigInt::from(q));
        let lower = &dist - &qr * &tail;
        let q3 = &qr * &qr * &qr;
        let margin = &lower - q3.recip();
        if !margin.is_positive() {
            report.violations.push(q);
        }
        let ratio = (&lower * &q3).to_f64().unwrap_or(f64::NAN);
        if ratio < report.min_ratio {
            report.min_ratio = ratio;
            report.argmin_q = q;
        }
        if min_margin.as_ref().is_none_or(|m| &margin < m) {
            min_margin = Some(margin);
        }
        report.checked += 1;
        q += 2;
    }
    if let Some(m) = min_margin {
        report.min_margin = if m.is_positive() { Scaled::from_ratio(&m) } else { Scaled::ZERO };
    }
    Ok(report)
}

/// Witness that a Liouville number admits even-denominator approximations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubledWitness {
    pub n: u32,
    /// Truncation depth `K` giving `p₁/q₁`.
    pub depth: u32,
    #[serde(serialize_with = "crate::io::ser_display")]
    pub p1: BigInt,
    #[serde(serialize_with = "crate::io::ser_display")]
    pub q1: BigInt,
    /// `|β - p₁/q₁| < q₁^{-2N}` holds with the certified tail.
    pub base_inequality: bool,
    /// `0 < |β - 2p₁/2q₁| < (2q₁)^{-N}` holds.
    pub doubled_inequality: bool,
    /// `log10` of the certified upper bound on `|β - p₁/q₁|`.
    pub log10_error: f64,
}

/// Builds `2p₁/2q₁` from a truncation `p₁/q₁` with `|β - p₁/q₁| < q₁^{-2N}`.
pub fn doubled_liouville_bound(x: &NumberClass, n: u32) -> Result<DoubledWitness> {
    let series: &LiouvilleSeries = match x {
        NumberClass::Liouville(s) | NumberClass::OddTypeLiouville(s) => s,
        other => return Err(Error::Precondition(format!("needs a Liouville construction, got {other}"))),
    };
    if n == 0 {
        return Err(Error::Precondition("N must be ≥ 1".into()));
    }
    for k in (2 * n).max(2)..=MAX_DEPTH {
        let v = series.partial_sum(k);
        // common denominator scale_den · b^{k!}
        let q1 = series.scale().denom() * big_pow(series.base(), factorial(k) as u32);
        let p1 = (&v * BigRational::from_integer(q1.clone())).to_integer();
        let tail = series.tail_bound_at(k);
        let q1r = BigRational::from_integer(q1.clone());
        let base_ok = tail < q1r.pow(-2 * n as i32);
        if !base_ok {
            continue;
        }
        let two_q1 = &q1r * BigRational::from_integer(BigInt::from(2));
        let doubled_ok = tail < two_q1.pow(-(n as i32)) && !tail.is_zero() && tail_is_strict(series);
        return Ok(DoubledWitness {
            n,
            depth: k,
            p1,
            q1,
            base_inequality: base_ok,
            doubled_inequality: doubled_ok,
            log10_error: Scaled::from_ratio(&tail).log10(),
        });
    }
    Err(Error::PrecisionExhausted(format!(
        "N = {n} needs truncation depth {} beyond the cap {MAX_DEPTH}",
        2 * n
    )))
}

/// The tail after any depth is nonzero: some coefficient in every period is.
fn tail_is_strict(series: &LiouvilleSeries) -> bool {
    match series.rule() {
        CoefficientRule::Constant(a) => *a > 0,
        CoefficientRule::Periodic(p) => p.iter().any(|&a| a > 0),
    }
}
