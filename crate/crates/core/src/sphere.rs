//! The shifted wave equation `∂²u/∂t² = (Δ − ((n−1)/2)²)u` on the sphere `Sⁿ`.
//!
//! Fields are finite tables of spherical-harmonic coefficients indexed by
//! degree `l` and a basis index `1 ≤ m ≤ d(l)`. Every rotation-invariant
//! operator acts on degree `l` by a scalar Schur constant, and with
//! `ν = l + (n−1)/2` the propagators have constants `sin(νt)/ν` and `cos(νt)`.
//!
//! Only zonal fields (all mass on `m = 1`, with `Y_{l1} = √d(l)·φ_l`) can be
//! evaluated at points. Times that are rational multiples of `π`, or any
//! [`NumberClass`] times `π`, are handled exactly through [`AlphaSpec::PiTimes`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diophantine::{exact_sine_abs, nearest_integer, slow_decay_check, small_denominator_sequence, NumberClass};
use crate::error::{Error, Result};
use crate::euclid::{SolveStatus, OBSTRUCTION_TOL};
use crate::propagators::{cosine_symbol_value, psi_value, sine_symbol_value};
use crate::scalar::{lit, sin_cos_reduced, zero_sine_tol, Real};

/// Sphere dimension `n ≥ 2`; the shift is `(n−1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereParams {
    n: u32,
}

impl SphereParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("sphere dimension must be ≥ 2, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn shift<T: Real>(&self) -> T {
        lit::<T>(self.n as f64 - 1.0) / lit(2.0)
    }

    pub fn shift_is_integer(&self) -> bool {
        self.n % 2 == 1
    }

    /// `2ν = 2l + n − 1`, always an integer.
    pub fn twice_nu(&self, l: u64) -> u64 {
        2 * l + self.n as u64 - 1
    }

    pub fn nu<T: Real>(&self, l: u64) -> T {
        lit::<T>(self.twice_nu(l) as f64) / lit(2.0)
    }
}

/// `d(l) = C(l+n, n) − C(l+n−2, n)`, the dimension of degree-`l` harmonics on `Sⁿ`.
pub fn dim_hl(n: u32, l: u64) -> BigUint {
    let top = binomial(BigUint::from(l + n as u64), BigUint::from(n));
    if l < 2 {
        return top;
    }
    top - binomial(BigUint::from(l + n as u64 - 2), BigUint::from(n))
}

/// `−l(l+n−1)`.
pub fn eigenvalue<T: Real>(n: u32, l: u64) -> T {
    let l = lit::<T>(l as f64);
    -l * (l + lit(n as f64 - 1.0))
}

/// Zonal spherical function `φ_l(c)` on `Sⁿ`, normalised by `φ_l(1) = 1`.
///
/// This is the Gegenbauer polynomial `C_l^{(n−1)/2}` divided by its value at
/// 1, which obeys `φ_{k+1} = (2(k+λ)c φ_k − k φ_{k−1}) / (k + 2λ)`.
pub fn gegenbauer_phi<T: Real>(n: u32, l: u64, c: T) -> T {
    let lambda = lit::<T>(n as f64 - 1.0) / lit(2.0);
    let two = lit::<T>(2.0);
    let (mut prev, mut cur) = (T::zero(), T::one());
    for k in 0..l {
        let k = lit::<T>(k as f64);
        let next = (two * (k + lambda) * c * cur - k * prev) / (k + two * lambda);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Ŝ_t(l) = sin(νt)/ν`.
pub fn schur_s<T: Real>(t: T, n: u32, l: u64) -> T {
    sine_symbol_value(t, SphereParams { n }.nu(l))
}

/// `Ŝ'_t(l) = cos(νt)`.
pub fn schur_sprime<T: Real>(t: T, n: u32, l: u64) -> T {
    cosine_symbol_value(t, SphereParams { n }.nu(l))
}

/// `Ψ̂_{m,α}(l) = U_{m−1}(cos να)`.
pub fn schur_psi<T: Real>(m: i64, alpha: T, n: u32, l: u64) -> Result<T> {
    if alpha == T::zero() || !alpha.is_finite() {
        return Err(Error::InvalidScale(format!("α must be finite and nonzero, got {alpha}")));
    }
    Ok(psi_value(m, SphereParams { n }.nu::<T>(l) * alpha))
}

/// A time, either a float or `β·π` with `β` described symbolically.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSpec<T> {
    Real(T),
    PiTimes(NumberClass),
}

/// `sin νt`, `cos νt` and whether the sine vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Trig<T> {
    sin: T,
    cos: T,
    sin_zero: bool,
}

/// Signed `sin(πx)` from an exact reduction `x = k + δ`.
fn sin_pi(x: &BigRational) -> f64 {
    let k = nearest_integer(x);
    let delta = x - BigRational::from_integer(k.clone());
    let abs = exact_sine_abs(x);
    let v = 0.5 * (abs.lo.to_f64() + abs.hi.to_f64());
    if delta.is_negative() != k.is_odd() {
        -v
    } else {
        v
    }
}

impl<T: Real> AlphaSpec<T> {
    /// Numeric value of the time.
    pub fn value(&self) -> T {
        match self {
            Self::Real(t) => *t,
            Self::PiTimes(b) => {
                let beta = b.approximation().to_f64().unwrap_or(f64::NAN);
                lit::<T>(beta) * T::PI()
            }
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Self::Real(t) => *t == T::zero(),
            Self::PiTimes(b) => b.approximation().is_zero(),
        }
    }

    fn trig(&self, params: SphereParams, l: u64) -> Result<Trig<T>> {
        match self {
            Self::Real(t) => {
                let (s, c) = sin_cos_reduced(*t * params.nu::<T>(l));
                Ok(Trig { sin: s, cos: c, sin_zero: s.abs() < zero_sine_tol() })
            }
            Self::PiTimes(beta) => {
                let nu = BigRational::new(BigInt::from(params.twice_nu(l)), BigInt::from(2));
                let x = &nu * beta.approximation();
                let sin_zero = beta.is_rational() && x.is_integer();
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let s = if sin_zero { 0.0 } else { sin_pi(&x) };
                let c = sin_pi(&(x + half));
                if s == 0.0 && !sin_zero {
                    return Err(Error::PrecisionExhausted(format!("sin(νβπ) underflows at l = {l}")));
                }
                Ok(Trig { sin: lit(s), cos: lit(c), sin_zero })
            }
        }
    }

    fn schur(&self, params: SphereParams, l: u64) -> Result<(T, T, bool)> {
        let tr = self.trig(params, l)?;
        let s = if self.is_zero() { T::zero() } else { tr.sin / params.nu::<T>(l) };
        Ok((s, tr.cos, tr.sin_zero))
    }
}

/// Finite spherical-harmonic expansion `Σ a_{lm} Y_{lm}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereField<T> {
    params: SphereParams,
    coeffs: BTreeMap<(u64, u64), Complex<T>>,
}

impl<T: Real> SphereField<T> {
    /// Builds a field; duplicate indices are summed and zero amplitudes dropped.
    pub fn new(params: SphereParams, entries: impl IntoIterator<Item = ((u64, u64), Complex<T>)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for ((l, m), amp) in entries {
            if m == 0 || BigUint::from(m) > dim_hl(params.n, l) {
                return Err(Error::InvalidIndex(format!(
                    "m = {m} outside 1..=d({l}) = {} on S^{}",
                    dim_hl(params.n, l),
                    params.n
                )));
            }
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::InvalidField(format!("non-finite amplitude at ({l}, {m})")));
            }
            *coeffs.entry((l, m)).or_insert_with(Complex::default) += amp;
        }
        coeffs.retain(|_, a| *a != Complex::default());
        Ok(Self { params, coeffs })
    }

    pub fn zero(params: SphereParams) -> Self {
        Self { params, coeffs: BTreeMap::new() }
    }

    /// `Σ a_l Y_{l1}` from `(l, a_l)` pairs.
    pub fn zonal(params: SphereParams, amps: impl IntoIterator<Item = (u64, Complex<T>)>) -> Result<Self> {
        Self::new(params, amps.into_iter().map(|(l, a)| ((l, 1), a)))
    }

    pub fn params(&self) -> SphereParams {
        self.params
    }

    pub fn coeffs(&self) -> &BTreeMap<(u64, u64), Complex<T>> {
        &self.coeffs
    }

    pub fn get(&self, l: u64, m: u64) -> Complex<T> {
        self.coeffs.get(&(l, m)).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zonal(&self) -> bool {
        self.coeffs.keys().all(|&(_, m)| m == 1)
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.coeffs.keys().map(|&(l, _)| l).max()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.values().map(|a| a.norm()).fold(T::zero(), T::max)
    }

    /// Multiplies degree `l` by `s(l)`.
    pub fn apply_schur(&self, mut s: impl FnMut(u64) -> T) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &a)| (k, a * s(k.0)))
            .filter(|(_, a)| *a != Complex::default())
            .collect();
        Self { params: self.params, coeffs }
    }

    /// Value at a point whose inner product with the pole is `c`; zonal fields only.
    pub fn evaluate_zonal(&self, c: T) -> Result<Complex<T>> {
        if !self.is_zonal() {
            return Err(Error::RequiresZonal);
        }
        let mut sum = Complex::default();
        for (&(l, _), &a) in &self.coeffs {
            let d = dim_hl(self.params.n, l).to_f64().unwrap_or(f64::INFINITY);
            sum += a * (lit::<T>(d.sqrt()) * gegenbauer_phi(self.params.n, l, c));
        }
        Ok(sum)
    }
}

fn same_params<T: Real>(a: &SphereField<T>, b: &SphereField<T>) -> Result<()> {
    if a.params != b.params {
        return Err(Error::ParamsMismatch { left: a.params.n, right: b.params.n });
    }
    Ok(())
}

/// `a·x + b·y` coefficient-wise with degree-dependent real weights.
fn combine<T: Real>(
    x: &SphereField<T>,
    y: &SphereField<T>,
    mut w: impl FnMut(u64) -> Result<(T, T)>,
) -> Result<SphereField<T>> {
    same_params(x, y)?;
    let mut keys: Vec<_> = x.coeffs.keys().chain(y.coeffs.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = BTreeMap::new();
    for k in keys {
        let (a, b) = w(k.0)?;
        let v = x.get(k.0, k.1) * a + y.get(k.0, k.1) * b;
        if v != Complex::default() {
            out.insert(k, v);
        }
    }
    Ok(SphereField { params: x.params, coeffs: out })
}

/// `u_t = f₀ * S'_t + g * S_t`.
pub fn sphere_evolve<T: Real>(f0: &SphereField<T>, g: &SphereField<T>, t: T) -> Result<SphereField<T>> {
    sphere_evolve_at(f0, g, &AlphaSpec::Real(t))
}

/// [`sphere_evolve`] at a possibly exact time.
pub fn sphere_evolve_at<T: Real>(f0: &SphereField<T>, g: &SphereField<T>, t: &AlphaSpec<T>) -> Result<SphereField<T>> {
    let p = f0.params;
    combine(f0, g, |l| match t {
        AlphaSpec::Real(t) => Ok((schur_sprime(*t, p.n, l), schur_s(*t, p.n, l))),
        _ => t.schur(p, l).map(|(s, c, _)| (c, s)),
    })
}

/// Largest coefficient of `(u_{t+h} − 2u_t + u_{t−h})/h² − (λ_l − shift²)u_t`.
pub fn shifted_wave_residual<T: Real>(f0: &SphereField<T>, g: &SphereField<T>, t: T, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::Precondition(format!("step h must be positive, got {h}")));
    }
    let n = f0.params.n;
    let shift2 = f0.params.shift::<T>().powi(2);
    let plus = sphere_evolve(f0, g, t + h)?;
    let mid = sphere_evolve(f0, g, t)?;
    let minus = sphere_evolve(f0, g, t - h)?;
    let second = combine(&combine(&plus, &minus, |_| Ok((T::one(), T::one())))?, &mid, |_| {
        Ok((T::one() / (h * h), lit::<T>(-2.0) / (h * h)))
    })?;
    let r = combine(&second, &mid, |l| Ok((T::one(), -(eigenvalue::<T>(n, l) - shift2))))?;
    Ok(r.max_abs())
}

/// `max |u(−x, t+π) − (−1)^{(n−1)/2} u(x, t)|` over `t_grid × c_grid`.
pub fn huygens_antipodal_check<T: Real>(f0: &SphereField<T>, g: &SphereField<T>, t_grid: &[T], c_grid: &[T]) -> Result<T> {
    same_params(f0, g)?;
    let n = f0.params.n;
    if n % 2 == 0 {
        return Err(Error::RequiresOddDimension(n));
    }
    if !(f0.is_zonal() && g.is_zonal()) {
        return Err(Error::RequiresZonal);
    }
    let sign = if ((n - 1) / 2) % 2 == 0 { T::one() } else { -T::one() };
    let mut worst = T::zero();
    for &t in t_grid {
        let now = sphere_evolve(f0, g, t)?;
        let later = sphere_evolve(f0, g, t + T::PI())?;
        for &c in c_grid {
            let r = later.evaluate_zonal(-c)? - now.evaluate_zonal(c)? * sign;
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// `u_{mα} = u₀ * S'_{mα} + (u_α − u₀ * S'_α) * Ψ_{m,α}`.
pub fn sphere_snapshot_m<T: Real>(u0: &SphereField<T>, ualpha: &SphereField<T>, alpha: T, m: i64) -> Result<SphereField<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidTime(format!("α must be positive, got {alpha}")));
    }
    let n = u0.params.n;
    let mt = lit::<T>(m as f64) * alpha;
    // u₀·(S'_{mα} − S'_α Ψ_m) + u_α·Ψ_m
    combine(u0, ualpha, |l| {
        let psi = schur_psi(m, alpha, n, l)?;
        Ok((schur_sprime(mt, n, l) - schur_sprime(alpha, n, l) * psi, psi))
    })
}

/// Solvability class of the two-snapshot problem at `α = βπ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Snapshots determine the wave and every pair of data is attained.
    UniqueAndSolvable,
    /// Snapshots determine the wave but some pairs are not attained.
    UniqueNotAlwaysSolvable,
    /// Uncountably many waves share the snapshots.
    NonUnique,
}

/// Classifies `α = βπ` on `Sⁿ` from what is known about `β`.
///
/// Odd `n`: rational gives non-uniqueness, bounded measure gives solvability,
/// a Liouville construction gives uniqueness without surjectivity. Even `n`:
/// a rational `p/q` is solvable iff `p` is odd; an irrational is solvable
/// unless `β/2` is a Liouville number of odd type. `β/2` is decided to be of
/// odd type when it is an odd-base construction times a rational with odd
/// denominator, and not of odd type when it is `Σ 2^{-j!}` times a rational
/// with odd numerator.
pub fn classify_alpha(beta: &NumberClass, n: u32) -> Result<Verdict> {
    SphereParams::new(n)?;
    let odd = n % 2 == 1;
    Ok(match beta {
        NumberClass::Rational(r) if odd || r.numer().is_even() => Verdict::NonUnique,
        NumberClass::Rational(_) => Verdict::UniqueAndSolvable,
        NumberClass::IrrationalBounded(_) => Verdict::UniqueAndSolvable,
        NumberClass::Liouville(_) | NumberClass::OddTypeLiouville(_) if odd => Verdict::UniqueNotAlwaysSolvable,
        NumberClass::Liouville(s) | NumberClass::OddTypeLiouville(s) => {
            let half = s.scale() / BigRational::from_integer(BigInt::from(2));
            let odd_type_half = matches!(beta, NumberClass::OddTypeLiouville(_)) && half.denom().is_odd();
            let dyadic = s.base() == 2 && *s.rule() == crate::diophantine::CoefficientRule::Constant(1);
            if odd_type_half {
                Verdict::UniqueNotAlwaysSolvable
            } else if dyadic && half.numer().is_odd() {
                Verdict::UniqueAndSolvable
            } else {
                return Err(Error::Unclassifiable(format!(
                    "no certificate decides whether {beta}/2 is a Liouville number of odd type"
                )));
            }
        }
    })
}

/// Degrees `l ≤ L` with `Ŝ_α(l) = 0`.
///
/// For `α = (p/q)π` this is `(2l + n − 1)p ≡ 0 mod 2q`; an irrational `β`
/// has none.
pub fn zero_degrees<T: Real>(alpha: &AlphaSpec<T>, params: SphereParams, l_max: u64) -> Result<Vec<u64>> {
    Ok(match alpha {
        AlphaSpec::Real(_) => {
            let mut out = Vec::new();
            for l in 0..=l_max {
                if alpha.trig(params, l)?.sin_zero {
                    out.push(l);
                }
            }
            out
        }
        AlphaSpec::PiTimes(NumberClass::Rational(r)) => {
            let modulus = r.denom() * BigInt::from(2);
            let num = r.numer();
            (0..=l_max)
                .filter(|&l| (num * BigInt::from(params.twice_nu(l))).is_multiple_of(&modulus))
                .collect()
        }
        AlphaSpec::PiTimes(_) => Vec::new(),
    })
}

/// Result of [`sphere_two_snapshot_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct SphereSolveReport<T> {
    /// Recovered velocity; absent when obstructed.
    pub solution: Option<SphereField<T>>,
    /// `max |u_α − f_α|` after solving, or the size of the obstruction.
    pub residual: T,
    /// Largest `1/|Ŝ_α(l)|` used.
    pub conditioning: T,
    /// Data indices sitting on zero Schur constants.
    pub kernel: Vec<(u64, u64)>,
    /// Degrees `l ≤ L` with `Ŝ_α(l) = 0`, on which the velocity is free.
    pub kernel_degrees: Vec<u64>,
    pub status: SolveStatus,
    pub note: Option<String>,
}

/// Velocities `g` with `g * S_α = f_α − f₀ * S'_α` among degrees `≤ l_max`.
pub fn sphere_two_snapshot_solve<T: Real>(
    f0: &SphereField<T>,
    falpha: &SphereField<T>,
    alpha: &AlphaSpec<T>,
    l_max: u64,
) -> Result<SphereSolveReport<T>> {
    same_params(f0, falpha)?;
    let p = f0.params;
    let top = f0.max_degree().into_iter().chain(falpha.max_degree()).max().unwrap_or(0);
    if top > l_max {
        return Err(Error::Precondition(format!("data has degree {top} above the cutoff L = {l_max}")));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidTime("α must be nonzero".into()));
    }
    let rhs = combine(falpha, f0, |l| Ok((T::one(), -alpha.schur(p, l)?.1)))?;
    let kernel_degrees = zero_degrees(alpha, p, l_max)?;
    let mut kernel: Vec<(u64, u64)> = f0
        .coeffs
        .keys()
        .chain(falpha.coeffs.keys())
        .filter(|k| kernel_degrees.binary_search(&k.0).is_ok())
        .copied()
        .collect();
    kernel.sort_unstable();
    kernel.dedup();

    let mut out = BTreeMap::new();
    let mut conditioning = T::zero();
    let mut obstruction = T::zero();
    for (&(l, m), &v) in &rhs.coeffs {
        let (s, _, zero) = alpha.schur(p, l)?;
        if zero {
            if v.norm() > lit(OBSTRUCTION_TOL) {
                obstruction = obstruction.max(v.norm());
            }
            continue;
        }
        conditioning = conditioning.max(T::one() / s.abs());
        out.insert((l, m), v / s);
    }
    if obstruction > T::zero() {
        return Ok(SphereSolveReport {
            solution: None,
            residual: obstruction,
            conditioning,
            kernel,
            kernel_degrees,
            status: SolveStatus::Obstructed,
            note: Some("f_α − f₀*S'_α has mass on a degree with Ŝ_α(l) = 0".into()),
        });
    }
    let g = SphereField { params: p, coeffs: out };
    let back = sphere_evolve_at(f0, &g, alpha)?;
    let residual = combine(&back, falpha, |_| Ok((T::one(), -T::one())))?.max_abs();
    let status = if kernel_degrees.is_empty() { SolveStatus::Unique } else { SolveStatus::NonUniqueKernel };
    Ok(SphereSolveReport { solution: Some(g), residual, conditioning, kernel, kernel_degrees, status, note: None })
}

/// `l ↦ Ŝ(l)` for `0 ≤ l ≤ L`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchurSequence {
    pub label: String,
    pub values: Vec<(u64, f64)>,
}

/// Lower bounds on `|Ŝ_α(l)|`, `l ≤ L`; exact zeros are `0`.
///
/// For `α = βπ` the sines are certified from `β`'s enclosure; a float `α`
/// uses the reduced sine with the zero tolerance.
pub fn schur_sequence<T: Real>(alpha: &AlphaSpec<T>, n: u32, l_max: u64) -> Result<SchurSequence> {
    let p = SphereParams::new(n)?;
    let values = match alpha {
        AlphaSpec::Real(t) => (0..=l_max)
            .map(|l| {
                let (s, _) = sin_cos_reduced(*t * p.nu::<T>(l));
                let v = if s.abs() < zero_sine_tol() { 0.0 } else { s.abs().to_f64().unwrap_or(0.0) };
                (l, v / (p.twice_nu(l) as f64 / 2.0))
            })
            .collect(),
        AlphaSpec::PiTimes(beta) => {
            let (num, den) = if n % 2 == 1 { ((n as u64 - 1) / 2, 1) } else { (n as u64 - 1, 2) };
            let table = small_denominator_sequence(beta, num, den, l_max)?;
            table
                .lower_bounds()
                .into_iter()
                // lower bound of |sin| over an upper bound of ν
                .map(|(l, s)| (l, s / (p.twice_nu(l) as f64 / 2.0) * (1.0 - 1e-15)))
                .collect()
        }
    };
    let label = match alpha {
        AlphaSpec::Real(t) => format!("S[{t}] on S^{n}"),
        AlphaSpec::PiTimes(b) => format!("S[({b})π] on S^{n}"),
    };
    Ok(SchurSequence { label, values })
}

/// Outcome of [`surjectivity_margin`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurjectivityMargin {
    /// `min_l |Ŝ_α(l)|(1+l)^M`.
    pub c: f64,
    pub passes: bool,
    pub m: u32,
    pub l_max: u64,
    pub exact_zeros: usize,
    /// Degree attaining the minimum.
    pub argmin: u64,
}

/// Empirical check of `|Ŝ_α(l)| ≥ C(1+l)^{−M}` for `l ≤ L`.
pub fn surjectivity_margin<T: Real>(alpha: &AlphaSpec<T>, n: u32, l_max: u64, m: u32) -> Result<SurjectivityMargin> {
    if l_max < 1 {
        return Err(Error::Precondition("L must be ≥ 1".into()));
    }
    let seq = schur_sequence(alpha, n, l_max)?;
    let (passes, c) = slow_decay_check(&seq.values, m);
    let argmin = seq
        .values
        .iter()
        .map(|&(l, v)| (l, v * (1.0 + l as f64).powi(m as i32)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0, |x| x.0);
    let exact_zeros = seq.values.iter().filter(|v| v.1 == 0.0).count();
    Ok(SurjectivityMargin { c, passes, m, l_max, exact_zeros, argmin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{odd_type_truncation, liouville_truncation, ratio};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(n: u32) -> SphereParams {
        SphereParams::new(n).unwrap()
    }

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn data(n: u32) -> (SphereField<f64>, SphereField<f64>) {
        let f = SphereField::new(p(n), [((0, 1), c(0.3)), ((1, 1), Complex::new(0.5, -0.2)), ((3, 2), c(-1.1)), ((7, 1), c(0.25))])
            .unwrap();
        let g = SphereField::new(p(n), [((1, 1), c(0.8)), ((2, 3), Complex::new(0.0, 0.6)), ((5, 1), c(-0.4))]).unwrap();
        (f, g)
    }

    #[test]
    fn harmonic_dimensions() {
        for n in 2..8 {
            assert_eq!(dim_hl(n, 0), BigUint::one());
            // d(1) = n + 1
            assert_eq!(dim_hl(n, 1), BigUint::from(n + 1));
        }
        for l in 0..40u64 {
            assert_eq!(dim_hl(2, l), BigUint::from(2 * l + 1));
            assert_eq!(dim_hl(3, l), BigUint::from((l + 1) * (l + 1)));
        }
        // (2l+n−1)(l+n−2)!/(l!(n−1)!) at n = 5, l = 6: 16·9!/(6!·4!)
        assert_eq!(dim_hl(5, 6), BigUint::from(16u32 * 362_880 / (720 * 24)));
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue::<f64>(4, 0), 0.0);
        assert_eq!(eigenvalue::<f64>(2, 1), -2.0);
        assert_eq!(eigenvalue::<f64>(3, 2), -8.0);
    }

    #[test]
    fn gegenbauer_normalisation_and_parity() {
        for n in 2..6 {
            assert_eq!(gegenbauer_phi(n, 0, 0.3f64), 1.0);
            for l in 0..=50 {
                assert_abs_diff_eq!(gegenbauer_phi(n, l, 1.0f64), 1.0, epsilon = 1e-12);
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(gegenbauer_phi(n, l, -1.0f64), sign, epsilon = 1e-12);
                for c in [0.1, 0.37, 0.9] {
                    assert_abs_diff_eq!(gegenbauer_phi(n, l, -c), sign * gegenbauer_phi(n, l, c), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn gegenbauer_closed_forms() {
        // n = 2: Legendre P_2, P_3
        let c = 0.4f64;
        assert_abs_diff_eq!(gegenbauer_phi(2, 2, c), 0.5 * (3.0 * c * c - 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(gegenbauer_phi(2, 3, c), 0.5 * (5.0 * c.powi(3) - 3.0 * c), epsilon = 1e-15);
        // n = 3: φ_l(cos θ) = sin((l+1)θ)/((l+1) sin θ)
        let th = 0.7f64;
        for l in 0..20u64 {
            let k = (l + 1) as f64;
            assert_abs_diff_eq!(gegenbauer_phi(3, l, th.cos()), (k * th).sin() / (k * th.sin()), epsilon = 1e-12);
        }
    }

    #[test]
    fn schur_constants() {
        for l in 0..30 {
            assert_abs_diff_eq!(schur_s(PI, 3, l), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(schur_sprime(2.0 * PI, 2, l), -1.0, epsilon = 1e-12);
            assert_eq!(schur_s(0.0f64, 4, l), 0.0);
            assert_eq!(schur_sprime(0.0f64, 4, l), 1.0);
            assert_eq!(schur_psi(1, 0.3f64, 3, l).unwrap(), 1.0);
            assert_eq!(schur_psi(0, 0.3f64, 3, l).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(schur_psi(2, FRAC_PI_2, 3, 1).unwrap(), -2.0, epsilon = 1e-12);
        assert!(matches!(schur_psi(2, 0.0f64, 3, 1), Err(Error::InvalidScale(_))));
    }

    #[test]
    fn field_validation() {
        assert!(matches!(SphereField::new(p(2), [((1, 4), c(1.0))]), Err(Error::InvalidIndex(_))));
        assert!(matches!(SphereField::new(p(2), [((1, 0), c(1.0))]), Err(Error::InvalidIndex(_))));
        let f = SphereField::new(p(3), [((2, 9), c(1.0)), ((2, 9), c(-1.0)), ((0, 1), c(2.0))]).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.is_zonal());
        assert!(SphereParams::new(1).is_err());
    }

    #[test]
    fn evolve_examples() {
        let (f, g) = data(3);
        assert_eq!(sphere_evolve(&f, &g, 0.0).unwrap(), f);
        let phi1 = SphereField::zonal(p(3), [(1, c(1.0))]).unwrap();
        let t = 0.83;
        let u = sphere_evolve(&phi1, &SphereField::zero(p(3)), t).unwrap();
        assert_abs_diff_eq!(u.get(1, 1).re, (2.0 * t).cos(), epsilon = 1e-15);
        let other = SphereField::<f64>::zero(p(2));
        assert!(matches!(sphere_evolve(&f, &other, t), Err(Error::ParamsMismatch { .. })));
    }

    #[test]
    fn periodicity() {
        for (n, period) in [(3, 2.0 * PI), (5, 2.0 * PI), (2, 4.0 * PI), (4, 4.0 * PI)] {
            let (f, g) = data(n);
            for t in [0.1, 1.3, 2.9] {
                let a = sphere_evolve(&f, &g, t).unwrap();
                let b = sphere_evolve(&f, &g, t + period).unwrap();
                let d = combine(&a, &b, |_| Ok((1.0, -1.0))).unwrap();
                assert!(d.max_abs() <= 1e-10, "n = {n}");
            }
        }
        // 2π is not a period in even dimension
        let (f, g) = data(2);
        let d = combine(&sphere_evolve(&f, &g, 0.4).unwrap(), &sphere_evolve(&f, &g, 0.4 + 2.0 * PI).unwrap(), |_| {
            Ok((1.0, -1.0))
        })
        .unwrap();
        assert!(d.max_abs() > 0.1);
    }

    #[test]
    fn shifted_wave_equation() {
        let (f, g) = data(4);
        let r1 = shifted_wave_residual(&f, &g, 0.6, 1e-2).unwrap();
        let r2 = shifted_wave_residual(&f, &g, 0.6, 5e-3).unwrap();
        assert!(r1 < 1e-2);
        assert!(((r1 / r2).log2() - 2.0).abs() < 0.05);
    }

    #[test]
    fn huygens_identity() {
        let zonal = |n| {
            let f = SphereField::zonal(p(n), (0..12).map(|l| (l, c(((l * 7 + 3) % 5) as f64 / 5.0 - 0.4)))).unwrap();
            let g = SphereField::zonal(p(n), (0..9).map(|l| (l, c(((l * 3 + 1) % 7) as f64 / 7.0 - 0.5)))).unwrap();
            (f, g)
        };
        let ts: Vec<f64> = (0..20).map(|i| 0.31 * i as f64).collect();
        let cs: Vec<f64> = (0..20).map(|i| -1.0 + 2.0 * i as f64 / 19.0).collect();
        for n in [3, 5, 7] {
            let (f, g) = zonal(n);
            assert!(huygens_antipodal_check(&f, &g, &ts, &cs).unwrap() <= 1e-10, "n = {n}");
        }
        let one = SphereField::zonal(p(3), [(0, c(1.0))]).unwrap();
        let z = SphereField::zero(p(3));
        let u = sphere_evolve(&one, &z, 0.5).unwrap().evaluate_zonal(0.2).unwrap();
        assert_abs_diff_eq!(u.re, 0.5f64.cos(), epsilon = 1e-15);
        let (f, g) = zonal(2);
        assert!(matches!(huygens_antipodal_check(&f, &g, &ts, &cs), Err(Error::RequiresOddDimension(2))));
        let (f, _) = data(3);
        assert!(matches!(huygens_antipodal_check(&f, &f, &ts, &cs), Err(Error::RequiresZonal)));
    }

    #[test]
    fn snapshots_reproduce_evolution() {
        for n in [2, 3] {
            let (f, g) = data(n);
            let alpha = 0.7;
            let u0 = sphere_evolve(&f, &g, 0.0).unwrap();
            let ua = sphere_evolve(&f, &g, alpha).unwrap();
            assert_eq!(sphere_snapshot_m(&u0, &ua, alpha, 0).unwrap(), u0);
            let one = sphere_snapshot_m(&u0, &ua, alpha, 1).unwrap();
            assert!(combine(&one, &ua, |_| Ok((1.0, -1.0))).unwrap().max_abs() < 1e-15);
            for m in -20..=20 {
                let um = sphere_snapshot_m(&u0, &ua, alpha, m).unwrap();
                let ex = sphere_evolve(&f, &g, m as f64 * alpha).unwrap();
                assert!(combine(&um, &ex, |_| Ok((1.0, -1.0))).unwrap().max_abs() <= 1e-10, "n={n} m={m}");
            }
        }
        let (f, _) = data(3);
        assert!(matches!(sphere_snapshot_m(&f, &f, 0.0, 2), Err(Error::InvalidTime(_))));
    }

    #[test]
    fn snapshot_at_pi_is_cosine_only() {
        let (f, g) = data(3);
        let u0 = sphere_evolve(&f, &g, 0.0).unwrap();
        let upi = sphere_evolve(&f, &g, PI).unwrap();
        for m in 0..6 {
            let um = sphere_snapshot_m(&u0, &upi, PI, m).unwrap();
            let cos_only = u0.apply_schur(|l| schur_sprime(m as f64 * PI, 3, l));
            assert!(combine(&um, &cos_only, |_| Ok((1.0, -1.0))).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn schur_multipliers_compose() {
        let (f, _) = data(4);
        let a = |l: u64| schur_s(0.4, 4, l);
        let b = |l: u64| schur_sprime(1.1, 4, l);
        let two = f.apply_schur(a).apply_schur(b);
        let once = f.apply_schur(|l| a(l) * b(l));
        assert!(combine(&two, &once, |_| Ok((1.0, -1.0))).unwrap().max_abs() <= 1e-15);
        for (&(l, m), &v) in f.coeffs() {
            assert_eq!(once.get(l, m), v * (a(l) * b(l)));
        }
    }

    #[test]
    fn classification_cells() {
        let r = |a, b| NumberClass::Rational(ratio(a, b));
        assert_eq!(classify_alpha(&r(1, 2), 3).unwrap(), Verdict::NonUnique);
        assert_eq!(classify_alpha(&r(1, 3), 2).unwrap(), Verdict::UniqueAndSolvable);
        assert_eq!(classify_alpha(&r(2, 5), 2).unwrap(), Verdict::NonUnique);
        assert_eq!(classify_alpha(&NumberClass::golden(), 3).unwrap(), Verdict::UniqueAndSolvable);
        let liou = liouville_truncation(10, &[1], 6).unwrap();
        assert_eq!(classify_alpha(&liou, 3).unwrap(), Verdict::UniqueNotAlwaysSolvable);
        let odd = odd_type_truncation(3, &[1], 6).unwrap().scaled_by(&ratio(2, 1)).unwrap();
        assert_eq!(classify_alpha(&odd, 2).unwrap(), Verdict::UniqueNotAlwaysSolvable);
        let dyadic = liouville_truncation(2, &[1], 6).unwrap().scaled_by(&ratio(2, 1)).unwrap();
        assert_eq!(classify_alpha(&dyadic, 2).unwrap(), Verdict::UniqueAndSolvable);
        assert!(matches!(classify_alpha(&liou, 2), Err(Error::Unclassifiable(_))));
    }

    fn random_wave(n: u32, l_max: u64) -> (SphereField<f64>, SphereField<f64>) {
        // deterministic pseudo-random amplitudes on a spread of (l, m)
        let amp = |i: u64| ((i * 2654435761) % 1000) as f64 / 500.0 - 1.0;
        let idx: Vec<(u64, u64)> = (0..=l_max).flat_map(|l| [(l, 1), (l, 1 + l)]).collect();
        let f = SphereField::new(p(n), idx.iter().enumerate().map(|(i, &k)| (k, Complex::new(amp(i as u64), amp(i as u64 + 7)))))
            .unwrap();
        let g = SphereField::new(p(n), idx.iter().enumerate().map(|(i, &k)| (k, c(amp(3 * i as u64 + 1))))).unwrap();
        (f, g)
    }

    #[test]
    fn solve_round_trip_at_third_of_pi() {
        let (f, g) = random_wave(2, 32);
        let alpha = AlphaSpec::PiTimes(NumberClass::Rational(ratio(1, 3)));
        let fa = sphere_evolve_at(&f, &g, &alpha).unwrap();
        let r = sphere_two_snapshot_solve(&f, &fa, &alpha, 32).unwrap();
        assert_eq!(r.status, SolveStatus::Unique);
        let sol = r.solution.unwrap();
        assert!(combine(&sol, &g, |_| Ok((1.0, -1.0))).unwrap().max_abs() <= 1e-9);
        assert!(r.residual <= 1e-9);
        let float = sphere_two_snapshot_solve(&f, &sphere_evolve(&f, &g, PI / 3.0).unwrap(), &AlphaSpec::Real(PI / 3.0), 32)
            .unwrap();
        assert!(combine(float.solution.as_ref().unwrap(), &g, |_| Ok((1.0, -1.0))).unwrap().max_abs() <= 1e-9);
    }

    #[test]
    fn solve_at_pi_in_odd_dimension() {
        let (f, g) = random_wave(3, 6);
        let alpha = AlphaSpec::PiTimes(NumberClass::Rational(ratio(1, 1)));
        let fa = sphere_evolve_at(&f, &g, &alpha).unwrap();
        let r = sphere_two_snapshot_solve(&f, &fa, &alpha, 6).unwrap();
        assert_eq!(r.status, SolveStatus::NonUniqueKernel);
        assert_eq!(r.kernel_degrees, (0..=6).collect::<Vec<_>>());
        assert!(r.solution.unwrap().is_empty());
        let bumped = combine(&fa, &SphereField::zonal(p(3), [(2, c(1e-3))]).unwrap(), |_| Ok((1.0, 1.0))).unwrap();
        let r = sphere_two_snapshot_solve(&f, &bumped, &alpha, 6).unwrap();
        assert_eq!(r.status, SolveStatus::Obstructed);
        assert_abs_diff_eq!(r.residual, 1e-3, epsilon = 1e-12);
        assert!(sphere_two_snapshot_solve(&f, &fa, &alpha, 3).is_err());
    }

    #[test]
    fn liouville_conditioning_outgrows_powers() {
        // ν = l + 1 = 10^{k!} sits on the bad subsequence of Σ 10^{-j!}
        let beta = liouville_truncation(10, &[1], 6).unwrap();
        let alpha = AlphaSpec::PiTimes(beta);
        for (l, k) in [(99u64, 2u32), (999_999, 3)] {
            let f0 = SphereField::<f64>::zero(p(3));
            let g = SphereField::zonal(p(3), [(l, c(1.0))]).unwrap();
            let fa = sphere_evolve_at(&f0, &g, &alpha).unwrap();
            let r = sphere_two_snapshot_solve(&f0, &fa, &alpha, l).unwrap();
            let nu = (l + 1) as f64;
            assert!(r.conditioning > nu.powi(k as i32), "l = {l}: {}", r.conditioning);
            // |sin(πνβ)| ≤ 2π ν^{-k} along l_k = 10^{k!}
            assert!(r.conditioning >= nu * nu.powi(k as i32) / (2.0 * PI));
        }
    }

    #[test]
    fn margins() {
        let third = AlphaSpec::<f64>::PiTimes(NumberClass::Rational(ratio(1, 3)));
        let m = surjectivity_margin(&third, 2, 10_000, 1).unwrap();
        assert!(m.passes && m.exact_zeros == 0);
        // period-6 value set: min over l of |sin((2l+1)π/6)| = 1/2, weighted by (1+l)/ν ≥ 1
        assert!(m.c >= 0.5 - 1e-12);
        let pi = AlphaSpec::<f64>::PiTimes(NumberClass::Rational(ratio(1, 1)));
        let m = surjectivity_margin(&pi, 3, 100, 3).unwrap();
        assert!(!m.passes && m.exact_zeros == 101);
        let float_pi = surjectivity_margin(&AlphaSpec::Real(PI), 3, 100, 3).unwrap();
        assert!(!float_pi.passes);
        let root2 = AlphaSpec::<f64>::PiTimes(NumberClass::sqrt2());
        assert!(surjectivity_margin(&root2, 3, 10_000, 3).unwrap().passes);
        let float_root2 = surjectivity_margin(&AlphaSpec::Real(2f64.sqrt() * PI), 3, 10_000, 3).unwrap();
        assert!(float_root2.passes);
        assert!(surjectivity_margin(&root2, 3, 0, 3).is_err());
    }
}
