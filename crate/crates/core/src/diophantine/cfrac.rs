//! Continued fractions and irrationality-exponent probes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::number_class::NumberClass;
use super::scaled::Scaled;
use crate::error::{Error, Result};

/// `[a0; a1, a2, …]` with its convergents `p_k/q_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<BigRational>,
    /// The expansion reached the exact value.
    pub terminated: bool,
}

impl ContinuedFraction {
    /// `(p_k, q_k)` with `q_k > 0`, unreduced exactly as the recurrence gives them.
    pub fn convergent_pairs(&self) -> Vec<(BigInt, BigInt)> {
        let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
        let mut out = Vec::with_capacity(self.partial_quotients.len());
        for a in &self.partial_quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            out.push((p.clone(), q.clone()));
            (p2, p1, q2, q1) = (p1, p, q1, q);
        }
        out
    }
}

/// Euclidean expansion of `x`, stopping at `max_terms` quotients.
pub fn continued_fraction(x: &BigRational, max_terms: usize) -> Result<ContinuedFraction> {
    if max_terms == 0 {
        return Err(Error::Precondition("max_terms must be ≥ 1".into()));
    }
    let mut quotients = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut terminated = false;
    while quotients.len() < max_terms {
        let a = num.div_floor(&den);
        let rem = &num - &a * &den;
        quotients.push(a);
        if rem.is_zero() {
            terminated = true;
            break;
        }
        (num, den) = (den, rem);
    }
    let mut cf = ContinuedFraction { partial_quotients: quotients, convergents: Vec::new(), terminated };
    cf.convergents = cf.convergent_pairs().into_iter().map(|(p, q)| BigRational::new(p, q)).collect();
    Ok(cf)
}

/// One certified line of an exponent probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEntry {
    #[serde(serialize_with = "crate::io::ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::io::ser_display")]
    pub q: BigInt,
    /// Certified lower bound on `-log|x - p/q| / log q`.
    pub mu_lower: f64,
    /// The distance bound came from the truncation tail rather than a gap.
    pub from_tail: bool,
}

/// Exponents `μ_k` along the convergents of a number's enclosure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentProbe {
    pub entries: Vec<ExponentEntry>,
    /// The enclosure became too wide to separate `x` from the next convergent.
    pub exhausted: bool,
}

/// Certified lower bounds `μ_k ≤ -log|x - p_k/q_k| / log q_k` per convergent.
///
/// Convergents are those of the class's central approximation. A gap
/// `d = |approx - p/q|` is usable when it exceeds twice the error bound `e`;
/// then `|x - p/q| ≤ d + e`. For factorial series the final convergent is
/// the truncation itself and `|x - p/q|` is bounded by the tail, which is
/// strictly positive.
pub fn irrationality_exponent_probe(x: &NumberClass, depth: usize) -> Result<ExponentProbe> {
    let approx = x.approximation();
    let err = x.error_bound();
    let cf = continued_fraction(&approx, depth)?;
    let mut entries = Vec::new();
    let mut exhausted = false;
    let pairs = cf.convergent_pairs();
    let last = pairs.len() - 1;
    for (i, (p, q)) in pairs.into_iter().enumerate() {
        if q <= BigInt::one() {
            continue;
        }
        let d = (&approx - BigRational::new(p.clone(), q.clone())).abs();
        let (upper, from_tail) = if d.is_zero() {
            let exact_end = cf.terminated && i == last;
            match x {
                NumberClass::Liouville(_) | NumberClass::OddTypeLiouville(_) if exact_end => (err.clone(), true),
                NumberClass::Rational(_) => break,
                _ => {
                    exhausted = true;
                    break;
                }
            }
        } else if d <= &err * BigRational::from_integer(BigInt::from(2)) {
            exhausted = true;
            break;
        } else {
            (&d + &err, false)
        };
        let log_q = Scaled::from_int(&q).log10();
        let mu = -Scaled::from_ratio(&upper).log10() / log_q;
        // absorb the few-ulp error of the two logarithms
        let mu_lower = mu - 1e-12 * mu.abs().max(1.0);
        entries.push(ExponentEntry { p, q, mu_lower, from_tail });
    }
    Ok(ExponentProbe { entries, exhausted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{liouville_truncation, ratio};

    fn quotients(x: &BigRational) -> Vec<i64> {
        continued_fraction(x, 50)
            .unwrap()
            .partial_quotients
            .iter()
            .map(|a| i64::try_from(a).unwrap())
            .collect()
    }

    #[test]
    fn hand_expansions() {
        assert_eq!(quotients(&ratio(355, 113)), vec![3, 7, 16]);
        assert_eq!(quotients(&ratio(1, 2)), vec![0, 2]);
        assert_eq!(quotients(&ratio(7, 1)), vec![7]);
        assert_eq!(quotients(&ratio(-7, 3)), vec![-3, 1, 2]);
    }

    #[test]
    fn determinant_identity() {
        let cf = continued_fraction(&ratio(1_234_567, 7_654_321), 100).unwrap();
        let pairs = cf.convergent_pairs();
        for k in 1..pairs.len() {
            let det = &pairs[k].0 * &pairs[k - 1].1 - &pairs[k - 1].0 * &pairs[k].1;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(det, BigInt::from(sign));
        }
        assert_eq!(cf.convergents.last().unwrap(), &ratio(1_234_567, 7_654_321));
    }

    #[test]
    fn truncated_expansion_reports_not_terminated() {
        let cf = continued_fraction(&ratio(355, 113), 2).unwrap();
        assert!(!cf.terminated);
        assert_eq!(cf.convergents, vec![ratio(3, 1), ratio(22, 7)]);
    }

    #[test]
    fn rationals_give_a_finite_list() {
        let probe = irrationality_exponent_probe(&NumberClass::Rational(ratio(3, 2)), 50).unwrap();
        assert!(probe.entries.is_empty() && !probe.exhausted);
    }

    #[test]
    fn fibonacci_ratio_has_exponent_near_two() {
        let (mut a, mut b) = (1i64, 1i64);
        for _ in 0..28 {
            (a, b) = (b, a + b);
        }
        // b/a = F30/F29
        let probe = irrationality_exponent_probe(&NumberClass::Rational(ratio(b, a)), 50).unwrap();
        assert!(probe.entries.len() > 20);
        for e in probe.entries.iter().filter(|e| e.q > BigInt::from(100)) {
            assert!((e.mu_lower - 2.0).abs() < 0.2, "q = {}, μ = {}", e.q, e.mu_lower);
        }
    }

    #[test]
    fn liouville_truncations_are_convergents_with_growing_exponent() {
        let x = liouville_truncation(10, &[1], 5).unwrap();
        let probe = irrationality_exponent_probe(&x, 10_000).unwrap();
        for n in 2..=5u32 {
            let q = crate::diophantine::big_pow(10, crate::diophantine::factorial(n) as u32);
            let e = probe.entries.iter().find(|e| e.q == q).expect("10^{N!} is a convergent");
            assert!(e.mu_lower >= n as f64, "N = {n}: μ = {}", e.mu_lower);
        }
        assert!(probe.entries.last().unwrap().from_tail);
    }
}
