//! Fourier symbols of the wave propagators `S_t`, `S'_t` and of the snapshot
//! recursion kernels `Ψ_{m,s}`, plus Chebyshev polynomials of the second kind.
//!
//! All symbols are evaluated on real spectral radii `λ ≥ 0`. Removable
//! singularities are handled explicitly:
//!
//! * `sin(tλ)/λ` switches to its Taylor series for `|tλ| < 1e-6`;
//! * `sin(msλ)/sin(sλ)` switches to `U_{m-1}(cos sλ)` when `|sin sλ| < 1e-6`.
//!
//! Arguments are reduced modulo `π` before any sine is taken, so that the
//! zeros at `sλ ∈ πℤ` come out exact.

use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalar::{int, lit, reduce_pi, sin_cos_reduced, sin_reduced, Real};
use crate::spectral::{MultiplierSymbol, Singularity};

/// Below this `|tλ|` the sine symbol uses its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Below this `|sin sλ|` the Ψ symbol uses the Chebyshev branch.
pub const CHEBYSHEV_SWITCH: f64 = 1e-6;

/// Tolerance of [`fundamental_identities_check`].
pub const IDENTITY_TOL: f64 = 1e-10;

/// Chebyshev polynomial of the second kind `U_m(x)` for any integer `m`.
///
/// Uses `U_{j+1} = 2x U_j - U_{j-1}` from `U_0 = 1`, `U_1 = 2x`, and the
/// extension `U_{-1} = 0`, `U_{-m-1} = -U_{m-1}` to negative degrees.
/// Generic over any ring, so exact rational values are available too.
pub fn chebyshev_u<T>(m: i64, x: T) -> T
where
    T: Num + Clone + Neg<Output = T>,
{
    if m < 0 {
        return if m == -1 { T::zero() } else { -chebyshev_u(-m - 2, x) };
    }
    let two_x = x.clone() + x;
    let (mut prev, mut cur) = (T::zero(), T::one());
    for _ in 0..m {
        let next = two_x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sin(tλ)/λ` with the value `t` at `λ = 0`.
pub fn sine_symbol_value<T: Real>(t: T, lambda: T) -> T {
    let x = t * lambda;
    if x.abs() < lit(SERIES_THRESHOLD) {
        let x2 = x * x;
        t * (T::one() - x2 / lit(6.0) + x2 * x2 / lit(120.0))
    } else {
        sin_reduced(x) / lambda
    }
}

/// `cos(tλ)`.
pub fn cosine_symbol_value<T: Real>(t: T, lambda: T) -> T {
    sin_cos_reduced(t * lambda).1
}

/// Ratio branch of `Ψ_m` at argument `x = sλ`: `sin(mx)/sin(x)`.
///
/// Both sines are taken after reducing `x = jπ + r`, which keeps the ratio
/// accurate close to the zeros of `sin x`. Undefined (non-finite) at `x ∈ πℤ`.
pub fn psi_ratio_branch<T: Real>(m: i64, x: T) -> T {
    let (r, j_odd) = reduce_pi(x);
    let m_t: T = int(m);
    let v = (m_t * r).sin() / r.sin();
    // sin(m(jπ+r)) / sin(jπ+r) = (-1)^{(m-1)j} sin(mr)/sin(r)
    if j_odd && (m - 1).rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

/// Chebyshev branch of `Ψ_m` at argument `x = sλ`: `U_{m-1}(cos x)`.
pub fn psi_chebyshev_branch<T: Real>(m: i64, x: T) -> T {
    chebyshev_u(m - 1, sin_cos_reduced(x).1)
}

/// `Ψ_m` at argument `x`, choosing the branch by `|sin x|`.
pub fn psi_value<T: Real>(m: i64, x: T) -> T {
    match m {
        0 => return T::zero(),
        1 => return T::one(),
        -1 => return -T::one(),
        _ => {}
    }
    if sin_reduced(x).abs() >= lit(CHEBYSHEV_SWITCH) {
        psi_ratio_branch(m, x)
    } else {
        psi_chebyshev_branch(m, x)
    }
}

/// Symbol of `S_t`: `λ ↦ sin(tλ)/λ`.
pub fn symbol_s<T: Real>(t: T) -> MultiplierSymbol<T> {
    MultiplierSymbol::new(
        format!("S[{t}]"),
        vec![Singularity::Point { at: T::zero(), value: Complex::new(t, T::zero()) }],
        move |l| Complex::new(sine_symbol_value(t, l), T::zero()),
    )
}

/// Symbol of `S'_t`: `λ ↦ cos(tλ)`.
pub fn symbol_sprime<T: Real>(t: T) -> MultiplierSymbol<T> {
    MultiplierSymbol::real(format!("S'[{t}]"), move |l| cosine_symbol_value(t, l))
}

/// Symbol of `Ψ_{m,s}`: `λ ↦ sin(msλ)/sin(sλ) = U_{m-1}(cos sλ)`.
pub fn symbol_psi<T: Real>(m: i64, s: T) -> Result<MultiplierSymbol<T>> {
    if s == T::zero() || !s.is_finite() {
        return Err(Error::InvalidScale(format!("Ψ scale must be finite and nonzero, got {s}")));
    }
    let singular_set = vec![
        Singularity::Point { at: T::zero(), value: Complex::new(int(m), T::zero()) },
        Singularity::Lattice { spacing: T::PI() / s.abs(), value: "U_{m-1}(±1)" },
    ];
    Ok(MultiplierSymbol::new(format!("Psi[{m},{s}]"), singular_set, move |l| {
        Complex::new(psi_value(m, s * l), T::zero())
    }))
}

/// Which propagator a [`PropagatorSpec`] denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagatorKind {
    /// `S_t`
    Sine,
    /// `S'_t`
    Cosine,
    /// `Ψ_{m,s}`
    Psi,
}

/// Declarative description of one propagator symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorSpec<T> {
    pub kind: PropagatorKind,
    /// `t` for the sine/cosine propagators, the scale `s` for `Ψ`.
    pub t_or_s: T,
    /// Degree, used by `Ψ` only.
    pub m: i64,
}

impl<T: Real> PropagatorSpec<T> {
    pub fn symbol(&self) -> Result<MultiplierSymbol<T>> {
        match self.kind {
            PropagatorKind::Sine => Ok(symbol_s(self.t_or_s)),
            PropagatorKind::Cosine => Ok(symbol_sprime(self.t_or_s)),
            PropagatorKind::Psi => symbol_psi(self.m, self.t_or_s),
        }
    }
}

/// `steps` equally spaced samples `(λ, σ(λ))` on `[lambda_min, lambda_max]`.
pub fn tabulate<T: Real>(
    symbol: &MultiplierSymbol<T>,
    lambda_min: T,
    lambda_max: T,
    steps: usize,
) -> Vec<(T, T)> {
    match steps {
        0 => Vec::new(),
        1 => vec![(lambda_min, symbol.eval_re(lambda_min))],
        _ => {
            let h = (lambda_max - lambda_min) / int(steps as i64 - 1);
            (0..steps)
                .map(|i| {
                    let l = lambda_min + h * int(i as i64);
                    (l, symbol.eval_re(l))
                })
                .collect()
        }
    }
}

/// Residuals of the trigonometric identities behind the snapshot recursion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport<T> {
    /// `Ψ̃_{m+2} + Ψ̃_m - 2 S̃'_1 Ψ̃_{m+1}`
    pub psi: T,
    /// `S̃_{m+2} + S̃_m - 2 S̃'_1 S̃_{m+1}`
    pub sine: T,
    /// `S̃'_{m+2} + S̃'_m - 2 S̃'_1 S̃'_{m+1}`
    pub cosine: T,
    /// `S̃_α S̃'_1 - S̃'_α S̃_1 - S̃_{α-1}`
    pub shift: T,
    pub max: T,
    pub passes: bool,
}

/// Maximum residual of the propagator identities over `lambda_grid`.
pub fn fundamental_identities_check<T: Real>(m: i64, alpha: T, lambda_grid: &[T]) -> IdentityReport<T> {
    let mt = |k: i64| -> T { int(m + k) };
    let mut rep = IdentityReport {
        psi: T::zero(),
        sine: T::zero(),
        cosine: T::zero(),
        shift: T::zero(),
        max: T::zero(),
        passes: false,
    };
    for &l in lambda_grid {
        let c1 = cosine_symbol_value(T::one(), l);
        let two = lit::<T>(2.0);

        let psi = psi_value(m + 2, l) + psi_value(m, l) - two * c1 * psi_value(m + 1, l);
        let sine = sine_symbol_value(mt(2), l) + sine_symbol_value(mt(0), l)
            - two * c1 * sine_symbol_value(mt(1), l);
        let cosine = cosine_symbol_value(mt(2), l) + cosine_symbol_value(mt(0), l)
            - two * c1 * cosine_symbol_value(mt(1), l);
        let shift = sine_symbol_value(alpha, l) * c1
            - cosine_symbol_value(alpha, l) * sine_symbol_value(T::one(), l)
            - sine_symbol_value(alpha - T::one(), l);

        rep.psi = rep.psi.max(psi.abs());
        rep.sine = rep.sine.max(sine.abs());
        rep.cosine = rep.cosine.max(cosine.abs());
        rep.shift = rep.shift.max(shift.abs());
    }
    rep.max = rep.psi.max(rep.sine).max(rep.cosine).max(rep.shift);
    rep.passes = lambda_grid.iter().all(|l| l.is_finite() && *l >= T::zero())
        && !lambda_grid.is_empty()
        && rep.max <= lit(IDENTITY_TOL);
    rep
}
