//! Snapshot theory on ℝⁿ.
//!
//! A wave with Cauchy data `(f, g)` is `u_t = f * S'_t + g * S_t`. Every
//! operation below works mode by mode on [`SpectralField`]s, so the
//! convolution identities reduce to scalar identities between symbols.
//!
//! Solvers never enlarge the spectrum of their input. When a right-hand side
//! has mass on a zero of the symbol being inverted, there is no band-limited
//! preimage inside the given mode set and the solve is reported as
//! [`SolveStatus::Obstructed`]. Free directions (frequencies on which the
//! velocity is not determined) get amplitude zero and are listed.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::diophantine::{big_pow, bezout, factorial, liouville_truncation, sine_abs_ball, CertifiedSine, Scaled, MAX_DEPTH};
use crate::error::{Error, Result};
use crate::propagators::{symbol_psi, symbol_s, symbol_sprime};
use crate::scalar::{int, lit, sin_reduced, zero_sine_tol, Real};
use crate::spectral::{
    apply_multiplier, combine_real, difference, max_abs_amp, union_frequencies,
    Frequency, Mode, MultiplierSymbol, SpectralField,
};

/// Amplitude above which a right-hand side on a kernel frequency obstructs a solve.
pub const OBSTRUCTION_TOL: f64 = 1e-12;

/// Base tolerance of the three-snapshot consistency check, scaled by conditioning.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Admissible rational compatibility residual before reconstruction, relative to the data scale.
pub const RATIONAL_COMPAT_TOL: f64 = 1e-9;

/// Initial position and velocity of a wave.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyData<T> {
    pub position: SpectralField<T>,
    pub velocity: SpectralField<T>,
}

impl<T: Real> CauchyData<T> {
    pub fn new(position: SpectralField<T>, velocity: SpectralField<T>) -> Result<Self> {
        if position.dim() != velocity.dim() {
            return Err(Error::DimensionMismatch { expected: position.dim(), found: velocity.dim() });
        }
        Ok(Self { position, velocity })
    }

    pub fn dim(&self) -> usize {
        self.position.dim()
    }
}

/// Snapshots `f₀, f₁, f_α` at times `0, 1, α`.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotTriple<T> {
    pub f0: SpectralField<T>,
    pub f1: SpectralField<T>,
    pub falpha: SpectralField<T>,
    pub alpha: T,
}

impl<T: Real> SnapshotTriple<T> {
    pub fn new(f0: SpectralField<T>, f1: SpectralField<T>, falpha: SpectralField<T>, alpha: T) -> Result<Self> {
        same_dim(&[&f0, &f1, &falpha])?;
        Ok(Self { f0, f1, falpha, alpha })
    }
}

/// Outcome class of a snapshot solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    /// The velocity is determined on every frequency of the data.
    Unique,
    /// A solution exists; the listed kernel frequencies are free.
    NonUniqueKernel,
    /// No velocity supported on the data's frequencies fits.
    Obstructed,
}

/// Result of a velocity solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<T> {
    /// Recovered initial velocity; absent when obstructed.
    pub solution: Option<SpectralField<T>>,
    /// Post-verification residual, or the size of the obstruction.
    pub residual: T,
    /// Largest amplification `1/|σ(λ)|` used by the division.
    pub conditioning: T,
    /// Frequencies left free by the solve.
    pub kernel_modes: Vec<Frequency<T>>,
    pub status: SolveStatus,
    pub note: Option<String>,
}

fn same_dim<T: Real>(fields: &[&SpectralField<T>]) -> Result<()> {
    let d = fields[0].dim();
    match fields.iter().find(|f| f.dim() != d) {
        Some(f) => Err(Error::DimensionMismatch { expected: d, found: f.dim() }),
        None => Ok(()),
    }
}

fn is_zero_sine<T: Real>(t: T, lambda: T) -> bool {
    lambda > T::zero() && sin_reduced(t * lambda).abs() < zero_sine_tol()
}

/// `u_t = f * S'_t + g * S_t`.
pub fn evolve<T: Real>(data: &CauchyData<T>, t: T) -> Result<SpectralField<T>> {
    let a = apply_multiplier(&data.position, &symbol_sprime(t))?;
    let b = apply_multiplier(&data.velocity, &symbol_s(t))?;
    combine_real(&[(T::one(), &a), (T::one(), &b)])
}

/// Central-difference residual of `Δu = ∂²u/∂t²` at time `t` with step `h`.
pub fn wave_residual<T: Real>(data: &CauchyData<T>, t: T, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::Precondition(format!("step h must be positive, got {h}")));
    }
    let plus = evolve(data, t + h)?;
    let mid = evolve(data, t)?;
    let minus = evolve(data, t - h)?;
    let lap = apply_multiplier(&mid, &MultiplierSymbol::laplacian())?;
    let h2 = h * h;
    let r = combine_real(&[
        (T::one() / h2, &plus),
        (lit::<T>(-2.0) / h2, &mid),
        (T::one() / h2, &minus),
        (-T::one(), &lap),
    ])?;
    Ok(max_abs_amp(&r))
}

/// Frequencies of `field` lying in `ker C_{S_t}`, i.e. `|ξ| ∈ {πj/|t| : j ≥ 1}`.
pub fn kernel_modes<T: Real>(field: &SpectralField<T>, t: T) -> Result<Vec<Frequency<T>>> {
    if t == T::zero() {
        return Err(Error::InvalidTime("kernel of S_0 is everything; t must be nonzero".into()));
    }
    Ok(field.frequencies().filter(|f| is_zero_sine(t, f.radius())).cloned().collect())
}

/// `u_m = Ψ_m * u_1 - Ψ_{m-1} * u_0`.
pub fn integer_snapshot<T: Real>(u0: &SpectralField<T>, u1: &SpectralField<T>, m: i64) -> Result<SpectralField<T>> {
    snapshot_with_step(u0, u1, T::one(), m)
}

/// `u_{a+m(b-a)} = u_b * Ψ_{m,s} - u_a * Ψ_{m-1,s}` with `s = b - a`.
pub fn general_integer_snapshot<T: Real>(
    ua: &SpectralField<T>,
    ub: &SpectralField<T>,
    a: T,
    b: T,
    m: i64,
) -> Result<SpectralField<T>> {
    if !(a < b) {
        return Err(Error::InvalidTime(format!("need a < b, got a = {a}, b = {b}")));
    }
    snapshot_with_step(ua, ub, b - a, m)
}

fn snapshot_with_step<T: Real>(ua: &SpectralField<T>, ub: &SpectralField<T>, s: T, m: i64) -> Result<SpectralField<T>> {
    same_dim(&[ua, ub])?;
    let x = apply_multiplier(ub, &symbol_psi(m, s)?)?;
    let y = apply_multiplier(ua, &symbol_psi(m - 1, s)?)?;
    difference(&x, &y)
}

/// Velocities `g` with `g * S_1 = f_1 - f_0 * S'_1`.
pub fn two_snapshot_solve<T: Real>(f0: &SpectralField<T>, f1: &SpectralField<T>) -> Result<SolveReport<T>> {
    same_dim(&[f0, f1])?;
    let rhs = difference(f1, &apply_multiplier(f0, &symbol_sprime(T::one()))?)?;
    let kernel: Vec<_> = union_frequencies(&[f0, f1])
        .into_iter()
        .filter(|f| is_zero_sine(T::one(), f.radius()))
        .collect();

    let mut modes = Vec::new();
    let mut conditioning = T::one();
    let mut obstruction = T::zero();
    for m in rhs.modes() {
        let lambda = m.freq.radius();
        if is_zero_sine(T::one(), lambda) {
            if m.amp.norm() > lit(OBSTRUCTION_TOL) {
                obstruction = obstruction.max(m.amp.norm());
            }
            continue;
        }
        let s1 = symbol_s(T::one()).eval_re(lambda);
        conditioning = conditioning.max(T::one() / s1.abs());
        modes.push(Mode { freq: m.freq.clone(), amp: m.amp / s1 });
    }

    if obstruction > T::zero() {
        return Ok(SolveReport {
            solution: None,
            residual: obstruction,
            conditioning,
            kernel_modes: kernel,
            status: SolveStatus::Obstructed,
            note: Some(
                "right-hand side has mass on a zero of sin(λ); its preimage is not band-limited".into(),
            ),
        });
    }
    let g = SpectralField::new(f0.dim(), modes)?;
    let data = CauchyData::new(f0.clone(), g.clone())?;
    let residual = max_abs_amp(&difference(&evolve(&data, T::one())?, f1)?);
    let status = if kernel.is_empty() { SolveStatus::Unique } else { SolveStatus::NonUniqueKernel };
    Ok(SolveReport {
        solution: Some(g),
        residual,
        conditioning,
        kernel_modes: kernel,
        status,
        note: None,
    })
}

/// Field `f₀*S_{α-1} + f₁*S_{-α} + f_α*S₁`, zero for genuine snapshots.
pub fn compatibility_field<T: Real>(triple: &SnapshotTriple<T>) -> Result<SpectralField<T>> {
    compatibility_field_general(&triple.f0, &triple.f1, &triple.falpha, T::zero(), T::one(), triple.alpha)
}

/// Field `(f₁ - f₀*S'₁)*S_α - (f_α - f₀*S'_α)*S₁`; the negative of [`compatibility_field`].
pub fn compatibility_field_original<T: Real>(triple: &SnapshotTriple<T>) -> Result<SpectralField<T>> {
    let SnapshotTriple { f0, f1, falpha, alpha } = triple;
    same_dim(&[f0, f1, falpha])?;
    let v = difference(f1, &apply_multiplier(f0, &symbol_sprime(T::one()))?)?;
    let w = difference(falpha, &apply_multiplier(f0, &symbol_sprime(*alpha))?)?;
    difference(&apply_multiplier(&v, &symbol_s(*alpha))?, &apply_multiplier(&w, &symbol_s(T::one()))?)
}

/// Field `f_a*S_{c-b} + f_b*S_{a-c} + f_c*S_{b-a}`.
pub fn compatibility_field_general<T: Real>(
    fa: &SpectralField<T>,
    fb: &SpectralField<T>,
    fc: &SpectralField<T>,
    a: T,
    b: T,
    c: T,
) -> Result<SpectralField<T>> {
    same_dim(&[fa, fb, fc])?;
    let x = apply_multiplier(fa, &symbol_s(c - b))?;
    let y = apply_multiplier(fb, &symbol_s(a - c))?;
    let z = apply_multiplier(fc, &symbol_s(b - a))?;
    combine_real(&[(T::one(), &x), (T::one(), &y), (T::one(), &z)])
}

/// Size of the three-snapshot compatibility defect at times `0, 1, α`.
pub fn compatibility_residual<T: Real>(triple: &SnapshotTriple<T>) -> Result<T> {
    Ok(max_abs_amp(&compatibility_field(triple)?))
}

/// Size of the compatibility defect for snapshots at arbitrary times `a, b, c`.
pub fn compatibility_residual_general<T: Real>(
    fa: &SpectralField<T>,
    fb: &SpectralField<T>,
    fc: &SpectralField<T>,
    a: T,
    b: T,
    c: T,
) -> Result<T> {
    Ok(max_abs_amp(&compatibility_field_general(fa, fb, fc, a, b, c)?))
}

/// Velocity `g` with `g*S₁ = f₁ - f₀*S'₁` and `g*S_α = f_α - f₀*S'_α`.
///
/// Per frequency the two equations are scalar; whichever symbol is nonzero
/// determines `g` and the other equation is checked for consistency with a
/// tolerance growing with the amplification used.
pub fn three_snapshot_solve<T: Real>(triple: &SnapshotTriple<T>) -> Result<SolveReport<T>> {
    let SnapshotTriple { f0, f1, falpha, alpha } = triple;
    let alpha = *alpha;
    if alpha == T::zero() || alpha == T::one() || !alpha.is_finite() {
        return Err(Error::InvalidTime(format!("α must differ from 0 and 1, got {alpha}")));
    }
    same_dim(&[f0, f1, falpha])?;
    let v = difference(f1, &apply_multiplier(f0, &symbol_sprime(T::one()))?)?;
    let w = difference(falpha, &apply_multiplier(f0, &symbol_sprime(alpha))?)?;
    let (s1, sa) = (symbol_s(T::one()), symbol_s(alpha));

    let mut modes = Vec::new();
    let mut kernel = Vec::new();
    let mut conditioning = T::one();
    let mut inconsistency = T::zero();
    for freq in union_frequencies(&[f0, f1, falpha]) {
        let lambda = freq.radius();
        let (vj, wj) = (v.amplitude_at(&freq), w.amplitude_at(&freq));
        let scale = T::one() + vj.norm().max(wj.norm());
        let z1 = is_zero_sine(T::one(), lambda);
        let za = is_zero_sine(alpha, lambda);
        match (z1, za) {
            (false, _) => {
                let d = s1.eval_re(lambda);
                let cond = T::one() / d.abs();
                conditioning = conditioning.max(cond);
                let g = vj / d;
                let defect = (wj - g * sa.eval_re(lambda)).norm();
                if defect > lit::<T>(CONSISTENCY_TOL) * (T::one() + cond) * scale {
                    inconsistency = inconsistency.max(defect);
                }
                modes.push(Mode { freq, amp: g });
            }
            (true, false) => {
                let d = sa.eval_re(lambda);
                let cond = T::one() / d.abs();
                conditioning = conditioning.max(cond);
                if vj.norm() > lit::<T>(CONSISTENCY_TOL) * scale {
                    inconsistency = inconsistency.max(vj.norm());
                }
                modes.push(Mode { freq, amp: wj / d });
            }
            (true, true) => {
                let defect = vj.norm().max(wj.norm());
                if defect > lit::<T>(CONSISTENCY_TOL) * scale {
                    inconsistency = inconsistency.max(defect);
                }
                kernel.push(freq);
            }
        }
    }

    if inconsistency > T::zero() {
        return Ok(SolveReport {
            solution: None,
            residual: inconsistency,
            conditioning,
            kernel_modes: kernel,
            status: SolveStatus::Obstructed,
            note: Some("snapshot equations disagree on at least one frequency".into()),
        });
    }
    let g = SpectralField::new(f0.dim(), modes)?;
    let data = CauchyData::new(f0.clone(), g.clone())?;
    let r1 = max_abs_amp(&difference(&evolve(&data, T::one())?, f1)?);
    let ra = max_abs_amp(&difference(&evolve(&data, alpha)?, falpha)?);
    let status = if kernel.is_empty() { SolveStatus::Unique } else { SolveStatus::NonUniqueKernel };
    Ok(SolveReport {
        solution: Some(g),
        residual: r1.max(ra),
        conditioning,
        kernel_modes: kernel,
        status,
        note: None,
    })
}

/// Three-snapshot solve with an exact rational `α = p/q`.
///
/// Routes to the rational reconstruction with time unit `1/q`, so the
/// snapshots sit at integer multiples `0, p, q` of the unit.
pub fn three_snapshot_solve_rational<T: Real>(
    f0: &SpectralField<T>,
    f1: &SpectralField<T>,
    falpha: &SpectralField<T>,
    alpha: &BigRational,
) -> Result<RationalReconstruction<T>> {
    let (p, q) = (alpha.numer(), alpha.denom());
    let (Some(p), Some(q)) = (p.to_i64(), q.to_i64()) else {
        return Err(Error::InvalidTime(format!("α = {alpha} is too large")));
    };
    if p == 0 || p == q {
        return Err(Error::InvalidTime(format!("α must differ from 0 and 1, got {alpha}")));
    }
    let unit = T::one() / int::<T>(q);
    reconstruct_with_unit(f0, falpha, f1, p, q, unit)
}

fn check_pq(p: i64, q: i64) -> Result<()> {
    if p <= 0 || q <= 0 {
        return Err(Error::InvalidTimes(format!("p and q must be positive, got {p}, {q}")));
    }
    if p == q {
        return Err(Error::InvalidTimes("p and q must differ".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidTimes(format!("gcd({p}, {q}) ≠ 1")));
    }
    Ok(())
}

fn rational_compat_field<T: Real>(
    f0: &SpectralField<T>,
    fp: &SpectralField<T>,
    fq: &SpectralField<T>,
    p: i64,
    q: i64,
    unit: T,
) -> Result<SpectralField<T>> {
    same_dim(&[f0, fp, fq])?;
    let (pt, qt) = (int::<T>(p) * unit, int::<T>(q) * unit);
    let a = difference(fp, &apply_multiplier(f0, &symbol_sprime(pt))?)?;
    let b = difference(fq, &apply_multiplier(f0, &symbol_sprime(qt))?)?;
    difference(
        &apply_multiplier(&a, &symbol_psi(q, unit)?)?,
        &apply_multiplier(&b, &symbol_psi(p, unit)?)?,
    )
}

/// Size of `(f_p - f₀*S'_p)*Ψ_q - (f_q - f₀*S'_q)*Ψ_p` for coprime `p ≠ q`.
pub fn rational_compatibility_residual<T: Real>(
    f0: &SpectralField<T>,
    fp: &SpectralField<T>,
    fq: &SpectralField<T>,
    p: i64,
    q: i64,
) -> Result<T> {
    check_pq(p, q)?;
    Ok(max_abs_amp(&rational_compat_field(f0, fp, fq, p, q, T::one())?))
}

/// Output of [`rational_reconstruct`].
#[derive(Clone, Debug, PartialEq)]
pub struct RationalReconstruction<T> {
    pub report: SolveReport<T>,
    /// Bezout pair `(k, l)` with `kp + lq = 1`.
    pub bezout: (i64, i64),
    /// Compatibility residual of the input data.
    pub compatibility: T,
    /// `|evolve((f₀, g), p) - f_p|`.
    pub residual_p: T,
    /// `|evolve((f₀, g), q) - f_q|`.
    pub residual_q: T,
}

/// Wave with snapshots `f₀, f_p, f_q` at integer times `0, p, q`.
///
/// Builds `A = Ψ_{k,p}`, `B = Ψ_{l,q}` from the Bezout pair, forms
/// `(f_p - f₀*S'_p)*A*S'_{lq} + (f_q - f₀*S'_q)*B*S'_{kp}` and divides by
/// `S̃₁` mode-wise.
pub fn rational_reconstruct<T: Real>(
    f0: &SpectralField<T>,
    fp: &SpectralField<T>,
    fq: &SpectralField<T>,
    p: i64,
    q: i64,
) -> Result<RationalReconstruction<T>> {
    check_pq(p, q)?;
    reconstruct_with_unit(f0, fp, fq, p, q, T::one())
}

fn reconstruct_with_unit<T: Real>(
    f0: &SpectralField<T>,
    fp: &SpectralField<T>,
    fq: &SpectralField<T>,
    p: i64,
    q: i64,
    unit: T,
) -> Result<RationalReconstruction<T>> {
    same_dim(&[f0, fp, fq])?;
    let compat = max_abs_amp(&rational_compat_field(f0, fp, fq, p, q, unit)?);
    let data_scale = T::one().max(max_abs_amp(f0)).max(max_abs_amp(fp)).max(max_abs_amp(fq));
    let tolerance = lit::<T>(RATIONAL_COMPAT_TOL) * data_scale;
    if compat > tolerance {
        return Err(Error::IncompatibleData {
            residual: compat.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }

    let (k, l) = signed_bezout(p, q)?;
    let (pt, qt) = (int::<T>(p) * unit, int::<T>(q) * unit);
    let a_sym = symbol_psi(k, pt)?;
    let b_sym = symbol_psi(l, qt)?;
    let a = difference(fp, &apply_multiplier(f0, &symbol_sprime(pt))?)?;
    let b = difference(fq, &apply_multiplier(f0, &symbol_sprime(qt))?)?;
    let left = apply_multiplier(&a, &a_sym.product(&symbol_sprime(int::<T>(l) * qt)))?;
    let right = apply_multiplier(&b, &b_sym.product(&symbol_sprime(int::<T>(k) * pt)))?;
    let lhs = combine_real(&[(T::one(), &left), (T::one(), &right)])?;

    let s_unit = symbol_s(unit);
    let mut modes = Vec::new();
    let mut conditioning = T::one();
    let mut obstruction = T::zero();
    for m in lhs.modes() {
        let lambda = m.freq.radius();
        if is_zero_sine(unit, lambda) {
            if m.amp.norm() > lit::<T>(OBSTRUCTION_TOL) * data_scale {
                obstruction = obstruction.max(m.amp.norm());
            }
            continue;
        }
        let d = s_unit.eval_re(lambda);
        conditioning = conditioning.max(unit.abs() / d.abs());
        modes.push(Mode { freq: m.freq.clone(), amp: m.amp / d });
    }
    let kernel: Vec<_> = union_frequencies(&[f0, fp, fq])
        .into_iter()
        .filter(|f| is_zero_sine(unit, f.radius()))
        .collect();

    if obstruction > T::zero() {
        let report = SolveReport {
            solution: None,
            residual: obstruction,
            conditioning,
            kernel_modes: kernel,
            status: SolveStatus::Obstructed,
            note: Some("velocity equation has mass on a zero of S̃₁; preimage is not band-limited".into()),
        };
        return Ok(RationalReconstruction {
            report,
            bezout: (k, l),
            compatibility: compat,
            residual_p: obstruction,
            residual_q: obstruction,
        });
    }

    let g = SpectralField::new(f0.dim(), modes)?;
    let data = CauchyData::new(f0.clone(), g.clone())?;
    let residual_p = max_abs_amp(&difference(&evolve(&data, pt)?, fp)?);
    let residual_q = max_abs_amp(&difference(&evolve(&data, qt)?, fq)?);
    let status = if kernel.is_empty() { SolveStatus::Unique } else { SolveStatus::NonUniqueKernel };
    Ok(RationalReconstruction {
        report: SolveReport {
            solution: Some(g),
            residual: residual_p.max(residual_q),
            conditioning,
            kernel_modes: kernel,
            status,
            note: None,
        },
        bezout: (k, l),
        compatibility: compat,
        residual_p,
        residual_q,
    })
}

/// Bezout pair for `p` of either sign and `q > 0`.
fn signed_bezout(p: i64, q: i64) -> Result<(i64, i64)> {
    let (k, l) = bezout(p.abs(), q)?;
    Ok(if p < 0 { (-k, l) } else { (k, l) })
}

/// One row of the small-denominator obstruction table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiouvilleRow {
    pub k: u32,
    /// `log10 q_k = k!`.
    pub log10_q: u64,
    /// Enclosure of `|sin(πq_kα)|`.
    pub sin_abs: CertifiedSine,
    /// `π |sin(πq_kα)|^{-1} / q_k^{k-1}` at the centre of the enclosure.
    pub amplitude: Scaled,
    /// Certified lower bound on the amplitude.
    pub amplitude_lower: Scaled,
    /// `amplitude_lower > 1`.
    pub exceeds_one: bool,
    /// Sup norm `q_k^{-k}` of the data `f_k`.
    pub data_sup: Scaled,
}

/// Amplitudes of `C_{S_α}^{-1}(f_k)` for `f_k(x) = e^{iπq_k x₁}/q_k^k` and
/// the base-10 Liouville number `α = Σ 10^{-j!}` with `q_k = 10^{k!}`.
///
/// `q_kα` is enclosed exactly using the deepest admissible truncation; rows
/// whose sine cannot be certified to one digit raise `PrecisionExhausted`.
pub fn liouville_obstruction_demo(k_max: u32) -> Result<Vec<LiouvilleRow>> {
    if k_max == 0 || k_max > 25 {
        return Err(Error::Precondition(format!("k_max must lie in 1..=25, got {k_max}")));
    }
    let alpha = liouville_truncation(10, &[1], MAX_DEPTH)?;
    let series = alpha.series().expect("series class");
    let centre = series.truncation();
    let tail = Scaled::from_ratio(&series.tail_bound());
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let e = factorial(k);
        if e > factorial(MAX_DEPTH) {
            return Err(Error::PrecisionExhausted(format!("q_{k} = 10^{e} is beyond the truncation depth")));
        }
        let q = big_pow(10, e as u32);
        let qs = Scaled::from_int(&q);
        // qα ∈ [qα_J, qα_J + q·tail]
        let s = sine_abs_ball(&(&centre * BigRational::from_integer(q)), qs.mul(tail))?;
        if !s.is_certified() {
            return Err(Error::PrecisionExhausted(format!(
                "|sin(πq_{k}α)| is not separated from zero at truncation depth {MAX_DEPTH}"
            )));
        }
        let denom = qs.powi(k - 1);
        let pi = Scaled::from_f64(std::f64::consts::PI);
        let mid = Scaled::from_f64(0.5).mul(s.lo.add(s.hi));
        let amplitude = pi.div(mid.mul(denom));
        let amplitude_lower = pi.mul_f64(1.0 - 1e-15).div(s.hi.mul(denom).mul_f64(1.0 + 1e-15));
        rows.push(LiouvilleRow {
            k,
            log10_q: e,
            sin_abs: s,
            amplitude,
            amplitude_lower,
            exceeds_one: amplitude_lower > Scaled::ONE,
            data_sup: qs.powi(k).recip(),
        });
    }
    Ok(rows)
}
