//! Spectral laboratory for wave snapshots.
//!
//! * [`spectral`]: band-limited fields on ℝⁿ and radial multipliers.
//! * [`propagators`]: symbols of `S_t`, `S'_t`, `Ψ_{m,s}` and Chebyshev `U_m`.
//! * [`euclid`]: evolution, integer-time snapshots, two/three-snapshot solvers.
//! * [`diophantine`]: exact rationals, Liouville constructions, certified sines.
//! * [`sphere`]: the shifted wave equation on `Sⁿ` in spherical-harmonic space.
//!
//! The floating-point modules are generic over [`Real`] (`f32`/`f64`); the
//! aliases below fix the double-precision instantiation used by the CLI.

pub mod diophantine;
pub mod error;
pub mod euclid;
pub mod experiments;
pub mod io;
pub mod propagators;
pub mod sample;
pub mod scalar;
pub mod spectral;
pub mod sphere;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision spectral field.
pub type Field = spectral::SpectralField<f64>;
/// Single-precision spectral field.
pub type Field32 = spectral::SpectralField<f32>;
/// Double-precision multiplier symbol.
pub type Symbol = spectral::MultiplierSymbol<f64>;
/// Double-precision sphere field.
pub type SphereField64 = sphere::SphereField<f64>;
