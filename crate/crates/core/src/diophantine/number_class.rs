//! Symbolic descriptions of time ratios with certified enclosures.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{big_pow, factorial, ratio};
use crate::error::{Error, Result};

/// Largest truncation depth of a factorial series (`7! = 5040` digits).
pub const MAX_DEPTH: u32 = 7;

/// Coefficient sequence `a_1, a_2, …` of `Σ a_j b^{-j!}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientRule {
    Constant(u32),
    /// `a_j = pattern[(j - 1) mod len]`.
    Periodic(Vec<u32>),
}

impl CoefficientRule {
    pub fn coefficient(&self, j: u32) -> u32 {
        match self {
            Self::Constant(a) => *a,
            Self::Periodic(p) => p[(j as usize - 1) % p.len()],
        }
    }

    fn values(&self) -> &[u32] {
        match self {
            Self::Constant(a) => std::slice::from_ref(a),
            Self::Periodic(p) => p,
        }
    }

    fn from_list(coeffs: &[u32]) -> Result<Self> {
        match coeffs {
            [] => Err(Error::InvalidCoefficient("empty coefficient list".into())),
            [a] => Ok(Self::Constant(*a)),
            _ => Ok(Self::Periodic(coeffs.to_vec())),
        }
    }
}

/// `scale · Σ_{j≥1} a_j base^{-j!}`, truncated at `depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleSeries {
    base: u32,
    rule: CoefficientRule,
    depth: u32,
    scale: BigRational,
}

impl LiouvilleSeries {
    fn validate(base: u32, rule: &CoefficientRule, depth: u32, allow_zero: bool) -> Result<()> {
        if base < 2 {
            return Err(Error::InvalidCoefficient(format!("base must be ≥ 2, got {base}")));
        }
        if depth == 0 {
            return Err(Error::InvalidCoefficient("truncation depth must be ≥ 1".into()));
        }
        if depth > MAX_DEPTH {
            return Err(Error::PrecisionExhausted(format!("depth {depth} exceeds the cap {MAX_DEPTH}")));
        }
        let lo = if allow_zero { 0 } else { 1 };
        if let Some(a) = rule.values().iter().find(|&&a| a < lo || a >= base) {
            return Err(Error::InvalidCoefficient(format!("coefficient {a} outside {lo}..={}", base - 1)));
        }
        if rule.values().iter().all(|&a| a == 0) {
            return Err(Error::InvalidCoefficient("all coefficients are zero".into()));
        }
        Ok(())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn rule(&self) -> &CoefficientRule {
        &self.rule
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    /// Same series multiplied by a nonzero rational.
    pub fn with_scale(mut self, scale: BigRational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::InvalidCoefficient("scale must be nonzero".into()));
        }
        self.scale = scale;
        Ok(self)
    }

    /// Same series truncated at another depth.
    pub fn with_depth(mut self, depth: u32) -> Result<Self> {
        Self::validate(self.base, &self.rule, depth, true)?;
        self.depth = depth;
        Ok(self)
    }

    /// `scale · Σ_{j≤k} a_j base^{-j!}`.
    pub fn partial_sum(&self, k: u32) -> BigRational {
        let den = big_pow(self.base, factorial(k) as u32);
        let mut num = BigInt::zero();
        for j in 1..=k {
            let a = BigInt::from(self.rule.coefficient(j));
            num += a * big_pow(self.base, (factorial(k) - factorial(j)) as u32);
        }
        &self.scale * BigRational::new(num, den)
    }

    /// Bound `|scale| · base^{-(k+1)!+1}` on the tail after term `k`.
    pub fn tail_bound_at(&self, k: u32) -> BigRational {
        let e = factorial(k + 1) as u32 - 1;
        self.scale.abs() / BigRational::from_integer(big_pow(self.base, e))
    }

    pub fn truncation(&self) -> BigRational {
        self.partial_sum(self.depth)
    }

    pub fn tail_bound(&self) -> BigRational {
        self.tail_bound_at(self.depth)
    }

    /// Enclosure of the full sum; the tail has the sign of `scale`.
    pub fn interval(&self) -> (BigRational, BigRational) {
        let v = self.truncation();
        let t = self.tail_bound();
        if self.scale.is_positive() {
            (v.clone(), v + t)
        } else {
            (v.clone() - t, v)
        }
    }
}

/// Irrational with a certified rational approximation and a bound on its
/// irrationality measure.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedIrrational {
    pub name: String,
    /// No `p/q` with large `q` satisfies `|x - p/q| < q^{-measure_bound}`.
    pub measure_bound: u32,
    pub approximation: BigRational,
    /// `|x - approximation| ≤ error_bound`.
    pub error_bound: BigRational,
}

/// What is known about a real number, enough to decide the inequalities used
/// by the snapshot theorems.
#[derive(Clone, Debug, PartialEq)]
pub enum NumberClass {
    Rational(BigRational),
    IrrationalBounded(BoundedIrrational),
    /// `Σ a_j b^{-j!}` with `1 ≤ a_j < b`.
    Liouville(LiouvilleSeries),
    /// Factorial series with odd base and coefficients in `0..b`, not all
    /// zero: its truncations have odd denominators.
    OddTypeLiouville(LiouvilleSeries),
}

impl NumberClass {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidCoefficient("zero denominator".into()));
        }
        Ok(Self::Rational(ratio(p, q)))
    }

    /// Golden ratio from Fibonacci convergents `F_{k+1}/F_k`, `k = 120`.
    pub fn golden() -> Self {
        let (mut a, mut b) = (BigInt::one(), BigInt::one());
        for _ in 0..119 {
            let c = &a + &b;
            a = b;
            b = c;
        }
        // |φ - F_{k+1}/F_k| < 1/F_k²
        let error_bound = BigRational::new(BigInt::one(), &a * &a);
        Self::IrrationalBounded(BoundedIrrational {
            name: "golden".into(),
            measure_bound: 2,
            approximation: BigRational::new(b, a),
            error_bound,
        })
    }

    /// `√2` truncated to 60 decimal digits.
    pub fn sqrt2() -> Self {
        let scale = big_pow(10, 60);
        let root = (BigInt::from(2) * &scale * &scale).sqrt();
        Self::IrrationalBounded(BoundedIrrational {
            name: "sqrt2".into(),
            measure_bound: 2,
            approximation: BigRational::new(root, scale.clone()),
            error_bound: BigRational::new(BigInt::one(), scale),
        })
    }

    /// Centre of the certified enclosure.
    pub fn approximation(&self) -> BigRational {
        match self {
            Self::Rational(r) => r.clone(),
            Self::IrrationalBounded(b) => b.approximation.clone(),
            Self::Liouville(s) | Self::OddTypeLiouville(s) => s.truncation(),
        }
    }

    /// `|x - approximation()|` is at most this.
    pub fn error_bound(&self) -> BigRational {
        match self {
            Self::Rational(_) => BigRational::zero(),
            Self::IrrationalBounded(b) => b.error_bound.clone(),
            Self::Liouville(s) | Self::OddTypeLiouville(s) => s.tail_bound(),
        }
    }

    /// Closed interval certainly containing the number.
    pub fn interval(&self) -> (BigRational, BigRational) {
        match self {
            Self::Liouville(s) | Self::OddTypeLiouville(s) => s.interval(),
            _ => {
                let (a, e) = (self.approximation(), self.error_bound());
                (&a - &e, a + e)
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Self::Rational(_))
    }

    pub fn series(&self) -> Option<&LiouvilleSeries> {
        match self {
            Self::Liouville(s) | Self::OddTypeLiouville(s) => Some(s),
            _ => None,
        }
    }

    /// Same number times a nonzero rational, when the class is closed under it.
    pub fn scaled_by(&self, c: &BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidCoefficient("scale must be nonzero".into()));
        }
        Ok(match self {
            Self::Rational(r) => Self::Rational(r * c),
            Self::IrrationalBounded(b) => Self::IrrationalBounded(BoundedIrrational {
                name: format!("{}*{}", c, b.name),
                measure_bound: b.measure_bound,
                approximation: &b.approximation * c,
                error_bound: &b.error_bound * c.abs(),
            }),
            Self::Liouville(s) => Self::Liouville(s.clone().with_scale(s.scale() * c)?),
            Self::OddTypeLiouville(s) => Self::OddTypeLiouville(s.clone().with_scale(s.scale() * c)?),
        })
    }
}

/// `Σ_{j≤J} a_j base^{-j!}` with `1 ≤ a_j < base`.
///
/// A list shorter than `J` repeats periodically.
pub fn liouville_truncation(base: u32, coeffs: &[u32], depth: u32) -> Result<NumberClass> {
    let rule = CoefficientRule::from_list(coeffs)?;
    LiouvilleSeries::validate(base, &rule, depth, false)?;
    Ok(NumberClass::Liouville(LiouvilleSeries { base, rule, depth, scale: BigRational::one() }))
}

/// Odd-base factorial series with coefficients in `0..base` (ternary when `base = 3`).
pub fn odd_type_truncation(base: u32, coeffs: &[u32], depth: u32) -> Result<NumberClass> {
    if base % 2 == 0 {
        return Err(Error::InvalidCoefficient(format!("odd-type series need an odd base, got {base}")));
    }
    let rule = CoefficientRule::from_list(coeffs)?;
    LiouvilleSeries::validate(base, &rule, depth, true)?;
    Ok(NumberClass::OddTypeLiouville(LiouvilleSeries { base, rule, depth, scale: BigRational::one() }))
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("`{t}`: {e}")));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("`{s}`: zero denominator")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn parse_coeffs(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("coefficient `{t}`: {e}"))))
        .collect()
}

/// Grammar accepted by [`NumberClass::from_str`]:
///
/// ```text
/// P/Q | N                                  rational
/// golden | sqrt2                           built-in bounded irrationals
/// bounded:APPROX:ERR:MU                    user-certified irrational
/// liouville:BASE[:DEPTH[:COEFFS[:SCALE]]]  factorial series, COEFFS like 1 or 1,2
/// oddtype[:DEPTH[:COEFFS[:SCALE]]]         ternary odd-type series
/// ```
impl FromStr for NumberClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let tail = |i: usize| parts.get(i).copied().filter(|t| !t.is_empty());
        match parts[0] {
            "golden" => Ok(Self::golden()),
            "sqrt2" => Ok(Self::sqrt2()),
            "bounded" => {
                let (Some(a), Some(e), Some(mu)) = (tail(1), tail(2), tail(3)) else {
                    return Err(Error::Parse("bounded:APPROX:ERR:MU".into()));
                };
                Ok(Self::IrrationalBounded(BoundedIrrational {
                    name: "user".into(),
                    measure_bound: mu.parse().map_err(|e| Error::Parse(format!("measure `{mu}`: {e}")))?,
                    approximation: parse_ratio(a)?,
                    error_bound: parse_ratio(e)?.abs(),
                }))
            }
            "liouville" | "oddtype" => {
                let odd = parts[0] == "oddtype";
                let off = usize::from(!odd);
                let base = if odd {
                    3
                } else {
                    tail(1)
                        .ok_or_else(|| Error::Parse("liouville:BASE[:DEPTH[:COEFFS[:SCALE]]]".into()))?
                        .parse()
                        .map_err(|e| Error::Parse(format!("base: {e}")))?
                };
                let depth = match tail(1 + off) {
                    Some(d) => d.parse().map_err(|e| Error::Parse(format!("depth: {e}")))?,
                    None => 6,
                };
                let coeffs = match tail(2 + off) {
                    Some(c) => parse_coeffs(c)?,
                    None => vec![1],
                };
                let class = if odd {
                    odd_type_truncation(base, &coeffs, depth)?
                } else {
                    liouville_truncation(base, &coeffs, depth)?
                };
                match tail(3 + off) {
                    Some(sc) => class.scaled_by(&parse_ratio(sc)?),
                    None => Ok(class),
                }
            }
            _ => Ok(Self::Rational(parse_ratio(s)?)),
        }
    }
}

impl fmt::Display for NumberClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let series = |f: &mut fmt::Formatter<'_>, kind: &str, s: &LiouvilleSeries| {
            let coeffs: Vec<String> = s.rule.values().iter().map(u32::to_string).collect();
            write!(f, "{kind}(base {}, coeffs {}, depth {}, scale {})", s.base, coeffs.join(","), s.depth, s.scale)
        };
        match self {
            Self::Rational(r) => write!(f, "rational {r}"),
            Self::IrrationalBounded(b) => write!(f, "bounded {} (measure ≤ {})", b.name, b.measure_bound),
            Self::Liouville(s) => series(f, "liouville", s),
            Self::OddTypeLiouville(s) => series(f, "oddtype", s),
        }
    }
}
