//! Band-limited fields on ℝⁿ as finite plane-wave sums, and the radial
//! multiplier operators that act diagonally on them.
//!
//! A [`SpectralField`] stores `f(x) = Σ_j c_j e^{i ξ_j·x}`. Every
//! rotation-invariant convolution operator scales the mode `e^{iξ·x}` by its
//! symbol evaluated at the spectral radius `λ = |ξ|`, so all operators here
//! are exact per mode.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Frequency vector `ξ ∈ ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frequency<T>(Vec<T>);

impl<T: Real> Frequency<T> {
    pub fn new(xi: Vec<T>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidField("frequency must have length ≥ 1".into()));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("frequency entries must be finite".into()));
        }
        // -0.0 and 0.0 describe the same plane wave
        let xi = xi
            .into_iter()
            .map(|v| if v == T::zero() { T::zero() } else { v })
            .collect();
        Ok(Self(xi))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    /// Spectral radius `|ξ|`.
    pub fn radius(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &v| acc.hypot(v))
    }

    pub fn dot(&self, x: &[T]) -> T {
        self.0.iter().zip(x).fold(T::zero(), |acc, (&a, &b)| a.mul_add(b, acc))
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.partial_cmp(b).expect("finite frequencies") {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// One term `amp · e^{i ξ·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode<T> {
    pub freq: Frequency<T>,
    pub amp: Complex<T>,
}

impl<T: Real> Mode<T> {
    pub fn new(xi: Vec<T>, amp: Complex<T>) -> Result<Self> {
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(Error::InvalidField("amplitude must be finite".into()));
        }
        Ok(Self { freq: Frequency::new(xi)?, amp })
    }

    pub fn real(xi: Vec<T>, amp: T) -> Result<Self> {
        Self::new(xi, Complex::new(amp, T::zero()))
    }
}

/// Finite eigenmode sum on ℝⁿ.
///
/// Fields built through [`SpectralField::new`] and every operation in this
/// module are canonical: distinct frequencies in lexicographic order, no
/// zero amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T> {
    dim: usize,
    modes: Vec<Mode<T>>,
}

impl<T: Real> SpectralField<T> {
    /// Builds a canonical field from arbitrary (unsorted, duplicated) modes.
    pub fn new(dim: usize, modes: Vec<Mode<T>>) -> Result<Self> {
        canonicalize(Self::raw(dim, modes)?)
    }

    /// Builds a field without canonicalizing; only dimensions are checked.
    pub fn raw(dim: usize, modes: Vec<Mode<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidField("dimension must be ≥ 1".into()));
        }
        Ok(Self { dim, modes })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be ≥ 1");
        Self { dim, modes: Vec::new() }
    }

    /// Single-mode field.
    pub fn mode(xi: Vec<T>, amp: Complex<T>) -> Result<Self> {
        let dim = xi.len();
        Self::new(dim, vec![Mode::new(xi, amp)?])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[Mode<T>] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = &Frequency<T>> {
        self.modes.iter().map(|m| &m.freq)
    }

    /// Amplitude of the mode at `xi`, zero if absent.
    pub fn amplitude_at(&self, xi: &Frequency<T>) -> Complex<T> {
        self.modes
            .binary_search_by(|m| m.freq.lex_cmp(xi))
            .map(|i| self.modes[i].amp)
            .unwrap_or_else(|_| Complex::new(T::zero(), T::zero()))
    }

    /// Point evaluation `Σ_j c_j e^{i ξ_j·x}`.
    pub fn evaluate(&self, x: &[T]) -> Result<Complex<T>> {
        evaluate(self, x)
    }

    /// Mode-wise map over amplitudes, followed by canonicalization.
    pub fn map_amplitudes<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Frequency<T>, Complex<T>) -> Result<Complex<T>>,
    {
        let mut modes = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let amp = f(&m.freq, m.amp)?;
            modes.push(Mode { freq: m.freq.clone(), amp });
        }
        canonicalize(Self { dim: self.dim, modes })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

/// Merges duplicate frequencies, drops zero amplitudes and sorts modes
/// lexicographically. Frequencies merge only on exact equality.
pub fn canonicalize<T: Real>(field: SpectralField<T>) -> Result<SpectralField<T>> {
    let SpectralField { dim, mut modes } = field;
    if let Some(m) = modes.iter().find(|m| m.freq.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: m.freq.dim() });
    }
    modes.sort_by(|a, b| a.freq.lex_cmp(&b.freq));
    let mut merged: Vec<Mode<T>> = Vec::with_capacity(modes.len());
    for m in modes {
        match merged.last_mut() {
            Some(last) if last.freq == m.freq => last.amp += m.amp,
            _ => merged.push(m),
        }
    }
    merged.retain(|m| m.amp.re != T::zero() || m.amp.im != T::zero());
    Ok(SpectralField { dim, modes: merged })
}

/// `Σ_j amp_j e^{i ξ_j·x}`.
pub fn evaluate<T: Real>(field: &SpectralField<T>, x: &[T]) -> Result<Complex<T>> {
    if x.len() != field.dim {
        return Err(Error::DimensionMismatch { expected: field.dim, found: x.len() });
    }
    Ok(field
        .modes
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, m| {
            acc + m.amp * Complex::from_polar(T::one(), m.freq.dot(x))
        }))
}

/// Scales every mode by `symbol(|ξ|)`.
pub fn apply_multiplier<T: Real>(
    field: &SpectralField<T>,
    symbol: &MultiplierSymbol<T>,
) -> Result<SpectralField<T>> {
    field.map_amplitudes(|freq, amp| Ok(symbol.try_eval(freq.radius())? * amp))
}

/// Canonical `Σ_k coeffs[k] · fields[k]`.
pub fn linear_combine<T: Real>(
    coeffs: &[Complex<T>],
    fields: &[&SpectralField<T>],
) -> Result<SpectralField<T>> {
    if coeffs.len() != fields.len() {
        return Err(Error::InvalidField(format!(
            "{} coefficients for {} fields",
            coeffs.len(),
            fields.len()
        )));
    }
    let Some(first) = fields.first() else {
        return Err(Error::InvalidField("linear combination of zero fields".into()));
    };
    let mut modes = Vec::new();
    for (&c, f) in coeffs.iter().zip(fields) {
        first.check_dim(f)?;
        modes.extend(f.modes.iter().map(|m| Mode { freq: m.freq.clone(), amp: c * m.amp }));
    }
    canonicalize(SpectralField { dim: first.dim, modes })
}

/// Real-coefficient convenience wrapper over [`linear_combine`].
pub fn combine_real<T: Real>(terms: &[(T, &SpectralField<T>)]) -> Result<SpectralField<T>> {
    let coeffs: Vec<_> = terms.iter().map(|(c, _)| Complex::new(*c, T::zero())).collect();
    let fields: Vec<_> = terms.iter().map(|(_, f)| *f).collect();
    linear_combine(&coeffs, &fields)
}

/// `a - b`.
pub fn difference<T: Real>(a: &SpectralField<T>, b: &SpectralField<T>) -> Result<SpectralField<T>> {
    combine_real(&[(T::one(), a), (-T::one(), b)])
}

/// Sorted, deduplicated frequencies appearing in any of `fields`.
pub fn union_frequencies<T: Real>(fields: &[&SpectralField<T>]) -> Vec<Frequency<T>> {
    let mut all: Vec<Frequency<T>> = fields.iter().flat_map(|f| f.frequencies().cloned()).collect();
    all.sort_by(|a, b| a.lex_cmp(b));
    all.dedup();
    all
}

/// Largest `|amp|` over the modes; `0` for the empty field.
pub fn max_abs_amp<T: Real>(field: &SpectralField<T>) -> T {
    field.modes.iter().fold(T::zero(), |acc, m| acc.max(m.amp.norm()))
}

/// A point where the defining formula of a symbol is singular, with the
/// value the symbol takes there by continuity.
#[derive(Clone, Debug, PartialEq)]
pub enum Singularity<T> {
    /// Isolated point `λ = at`.
    Point { at: T, value: Complex<T> },
    /// The lattice `λ = spacing · j`, `j ≥ 1`; `value` names the rule used there.
    Lattice { spacing: T, value: &'static str },
}

type SymbolFn<T> = dyn Fn(T) -> Complex<T> + Send + Sync;

/// Radial Fourier multiplier `λ ↦ σ(λ)`, total on `[0, ∞)`.
#[derive(Clone)]
pub struct MultiplierSymbol<T> {
    label: String,
    singular_set: Vec<Singularity<T>>,
    eval: Arc<SymbolFn<T>>,
}

impl<T: Real> MultiplierSymbol<T> {
    pub fn new<F>(label: impl Into<String>, singular_set: Vec<Singularity<T>>, eval: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        Self { label: label.into(), singular_set, eval: Arc::new(eval) }
    }

    /// Real-valued symbol with no singularities.
    pub fn real<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::new(label, Vec::new(), move |l| Complex::new(eval(l), T::zero()))
    }

    pub fn constant(value: T) -> Self {
        Self::real(format!("const({value})"), move |_| value)
    }

    pub fn identity() -> Self {
        Self::constant(T::one())
    }

    /// `λ ↦ -λ²`, the Laplacian on plane waves.
    pub fn laplacian() -> Self {
        Self::real("laplacian", |l: T| -l * l)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn singular_set(&self) -> &[Singularity<T>] {
        &self.singular_set
    }

    pub fn eval(&self, lambda: T) -> Complex<T> {
        (self.eval)(lambda)
    }

    /// Real part of the symbol value, for real-valued symbols.
    pub fn eval_re(&self, lambda: T) -> T {
        self.eval(lambda).re
    }

    /// Evaluates, rejecting non-finite results as an unhandled singularity.
    pub fn try_eval(&self, lambda: T) -> Result<Complex<T>> {
        let v = self.eval(lambda);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::SymbolUndefined {
                label: self.label.clone(),
                lambda: lambda.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// Pointwise product `σ₁ · σ₂`, the symbol of the composed operator.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut singular_set = self.singular_set.clone();
        singular_set.extend(other.singular_set.iter().cloned());
        Self {
            label: format!("{}*{}", self.label, other.label),
            singular_set,
            eval: Arc::new(move |l| a(l) * b(l)),
        }
    }
}

impl<T: Real> fmt::Debug for MultiplierSymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("label", &self.label)
            .field("singular_set", &self.singular_set)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn field(dim: usize, modes: &[(&[f64], Complex<f64>)]) -> SpectralField<f64> {
        let modes = modes.iter().map(|(xi, a)| Mode::new(xi.to_vec(), *a).unwrap()).collect();
        SpectralField::new(dim, modes).unwrap()
    }

    #[test]
    fn canonicalize_merges_duplicates() {
        let raw = SpectralField::raw(
            1,
            vec![Mode::real(vec![PI], 1.0).unwrap(), Mode::real(vec![PI], 2.0).unwrap()],
        )
        .unwrap();
        let f = canonicalize(raw).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.modes()[0].amp, c(3.0, 0.0));
    }

    #[test]
    fn canonicalize_drops_zero_amplitude() {
        let f = field(2, &[(&[1.0, 0.0], c(0.0, 0.0))]);
        assert!(f.is_empty());
    }

    #[test]
    fn canonicalize_sorts() {
        let f = field(1, &[(&[2.0], c(1.0, 0.0)), (&[1.0], c(1.0, 0.0))]);
        assert_eq!(f.modes()[0].freq.as_slice(), &[1.0]);
        assert_eq!(f.modes()[1].freq.as_slice(), &[2.0]);
    }

    #[test]
    fn canonicalize_rejects_mixed_dimensions() {
        let raw = SpectralField::raw(
            2,
            vec![Mode::real(vec![1.0, 0.0], 1.0).unwrap(), Mode::real(vec![1.0], 1.0).unwrap()],
        )
        .unwrap();
        assert!(matches!(canonicalize(raw), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn negative_zero_frequency_merges() {
        let f = field(1, &[(&[-0.0], c(1.0, 0.0)), (&[0.0], c(1.0, 0.0))]);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn evaluate_examples() {
        let f = field(1, &[(&[0.0], c(1.0, 0.0))]);
        assert_eq!(f.evaluate(&[5.0]).unwrap(), c(1.0, 0.0));

        let f = field(1, &[(&[PI], c(1.0, 0.0))]);
        let v = f.evaluate(&[1.0]).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        let f = field(2, &[(&[FRAC_PI_2, 0.0], c(1.0, 0.0)), (&[0.0, FRAC_PI_2], c(1.0, 0.0))]);
        let v = f.evaluate(&[1.0, 1.0]).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-15);

        assert!(matches!(f.evaluate(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn identity_multiplier_is_identity() {
        let f = field(2, &[(&[1.0, 2.0], c(1.0, -1.0)), (&[0.5, 0.0], c(2.0, 0.5))]);
        let g = apply_multiplier(&f, &MultiplierSymbol::identity()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn non_finite_symbol_is_reported() {
        let f = field(1, &[(&[1.0], c(1.0, 0.0))]);
        let bad = MultiplierSymbol::real("bad", |l: f64| 1.0 / (l - 1.0));
        assert!(matches!(apply_multiplier(&f, &bad), Err(Error::SymbolUndefined { .. })));
    }

    #[test]
    fn linear_combine_examples() {
        let f = field(1, &[(&[1.0], c(1.0, 0.0))]);
        let z = linear_combine(&[c(1.0, 0.0), c(-1.0, 0.0)], &[&f, &f]).unwrap();
        assert!(z.is_empty());

        let two = linear_combine(&[c(2.0, 0.0)], &[&f]).unwrap();
        assert_eq!(two.modes()[0].amp, c(2.0, 0.0));

        let g = field(1, &[(&[2.0], c(1.0, 0.0))]);
        let s = linear_combine(&[c(1.0, 0.0), c(1.0, 0.0)], &[&f, &g]).unwrap();
        assert_eq!(s.len(), 2);

        let h = field(2, &[(&[1.0, 1.0], c(1.0, 0.0))]);
        assert!(matches!(
            linear_combine(&[c(1.0, 0.0), c(1.0, 0.0)], &[&f, &h]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn max_abs_amp_examples() {
        assert_eq!(max_abs_amp(&SpectralField::<f64>::zero(1)), 0.0);
        assert_eq!(max_abs_amp(&field(1, &[(&[1.0], c(3.0, 4.0))])), 5.0);
        assert_eq!(max_abs_amp(&field(1, &[(&[1.0], c(1.0, 0.0)), (&[2.0], c(-2.0, 0.0))])), 2.0);
    }

    #[test]
    fn amplitude_lookup() {
        let f = field(1, &[(&[1.0], c(1.0, 0.0)), (&[3.0], c(2.0, 0.0))]);
        assert_eq!(f.amplitude_at(&Frequency::new(vec![3.0]).unwrap()), c(2.0, 0.0));
        assert_eq!(f.amplitude_at(&Frequency::new(vec![2.0]).unwrap()), c(0.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let f = SpectralField::<f32>::mode(vec![std::f32::consts::PI], Complex::new(1.0, 0.0)).unwrap();
        let v = f.evaluate(&[1.0]).unwrap();
        assert!((v.re + 1.0).abs() < 1e-6);
    }
}
