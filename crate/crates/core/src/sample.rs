//! Seeded random fields for property runs and experiments.
//!
//! Every generator takes an explicit seed and uses ChaCha8, so identical
//! seeds give identical fields on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::euclid::CauchyData;
use crate::scalar::{lit, Real};
use crate::spectral::{Mode, SpectralField};
use crate::sphere::{dim_hl, SphereField, SphereParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn amp<T: Real, R: Rng>(rng: &mut R) -> Complex<T> {
    Complex::new(lit(rng.random_range(-1.0..1.0)), lit(rng.random_range(-1.0..1.0)))
}

fn frequency<T: Real, R: Rng>(rng: &mut R, dim: usize, xi_max: f64) -> Vec<T> {
    (0..dim).map(|_| lit(rng.random_range(-xi_max..xi_max))).collect()
}

/// Field with `1..=max_modes` modes, frequencies uniform in `[-xi_max, xi_max]^dim`.
pub fn random_field<T: Real, R: Rng>(rng: &mut R, dim: usize, max_modes: usize, xi_max: f64) -> Result<SpectralField<T>> {
    let k = rng.random_range(1..=max_modes.max(1));
    let modes = (0..k)
        .map(|_| {
            let xi = frequency(rng, dim, xi_max);
            Mode::new(xi, amp(rng))
        })
        .collect::<Result<Vec<_>>>()?;
    SpectralField::new(dim, modes)
}

/// Cauchy data whose position and velocity share part of a common spectrum.
///
/// At most `max_modes` distinct frequencies are drawn; each lands in the
/// position, the velocity or both.
pub fn random_cauchy<T: Real>(seed: u64, dim: usize, max_modes: usize, xi_max: f64) -> Result<CauchyData<T>> {
    let mut rng = rng(seed);
    let k = rng.random_range(1..=max_modes.max(1));
    let (mut f, mut g) = (Vec::new(), Vec::new());
    for _ in 0..k {
        let xi: Vec<T> = frequency(&mut rng, dim, xi_max);
        match rng.random_range(0..3) {
            0 => f.push(Mode::new(xi, amp(&mut rng))?),
            1 => g.push(Mode::new(xi, amp(&mut rng))?),
            _ => {
                f.push(Mode::new(xi.clone(), amp(&mut rng))?);
                g.push(Mode::new(xi, amp(&mut rng))?);
            }
        }
    }
    CauchyData::new(SpectralField::new(dim, f)?, SpectralField::new(dim, g)?)
}

/// Sphere field with up to `count` coefficients of degree `≤ l_max`; `m ≤ min(d(l), 8)`.
pub fn random_sphere<T: Real>(seed: u64, params: SphereParams, l_max: u64, count: usize) -> Result<SphereField<T>> {
    let mut rng = rng(seed);
    let entries: Vec<_> = (0..count)
        .map(|_| {
            let l = rng.random_range(0..=l_max);
            let d = dim_hl(params.n(), l).try_into().unwrap_or(u64::MAX).min(8);
            let m = rng.random_range(1..=d);
            ((l, m), amp(&mut rng))
        })
        .collect();
    SphereField::new(params, entries)
}

/// Zonal field with every degree `≤ l_max` present.
pub fn random_zonal<T: Real>(seed: u64, params: SphereParams, l_max: u64) -> Result<SphereField<T>> {
    let mut rng = rng(seed);
    SphereField::zonal(params, (0..=l_max).map(|l| (l, amp(&mut rng))).collect::<Vec<_>>())
}
