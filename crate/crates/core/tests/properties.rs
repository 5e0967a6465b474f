//! Randomized invariants across the public API.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use wavesnap::diophantine::{bezout, exact_sine_abs, nearest_integer, slow_decay_check};
use wavesnap::euclid::{
    compatibility_residual, evolve, general_integer_snapshot, integer_snapshot, rational_reconstruct, CauchyData,
    SnapshotTriple,
};
use wavesnap::propagators::{chebyshev_u, fundamental_identities_check, psi_value, sine_symbol_value, symbol_sprime};
use wavesnap::sample::{random_cauchy, random_sphere};
use wavesnap::spectral::{apply_multiplier, canonicalize, combine_real, difference, max_abs_amp, Mode, SpectralField};
use wavesnap::sphere::{gegenbauer_phi, schur_psi, schur_s, sphere_evolve, SphereParams};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn cauchy(seed: u64, dim: usize) -> CauchyData<f64> {
    random_cauchy(seed, dim, 16, 6.0).unwrap()
}

fn gap(a: &SpectralField<f64>, b: &SpectralField<f64>) -> f64 {
    max_abs_amp(&difference(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_order_independent(
        raw in prop::collection::vec(((-3i8..3, -3i8..3), (-4i8..4, -4i8..4)), 0..12),
        rot in 0usize..12,
    ) {
        let modes: Vec<Mode<f64>> = raw
            .iter()
            .map(|&((x, y), (re, im))| {
                Mode::new(vec![x as f64, y as f64], Complex::new(re as f64 / 4.0, im as f64 / 4.0)).unwrap()
            })
            .collect();
        let mut shuffled = modes.clone();
        if !shuffled.is_empty() {
            let k = rot % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
        }
        let a = canonicalize(SpectralField::raw(2, modes).unwrap()).unwrap();
        let b = canonicalize(SpectralField::raw(2, shuffled).unwrap()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(canonicalize(a.clone()).unwrap(), a.clone());
        for w in a.modes().windows(2) {
            prop_assert!(w[0].freq != w[1].freq);
        }
        prop_assert!(a.modes().iter().all(|m| m.amp != Complex::new(0.0, 0.0)));
    }

    #[test]
    fn integer_snapshots_follow_the_wave(seed in any::<u64>(), dim in 1usize..=3, m in -20i64..=20) {
        let data = cauchy(seed, dim);
        let u0 = evolve(&data, 0.0).unwrap();
        let u1 = evolve(&data, 1.0).unwrap();
        let um = integer_snapshot(&u0, &u1, m).unwrap();
        prop_assert!(gap(&um, &evolve(&data, m as f64).unwrap()) <= 1e-10);
    }

    #[test]
    fn general_snapshots_follow_the_wave(
        seed in any::<u64>(),
        a in -2.0f64..2.0,
        s in 0.1f64..1.5,
        m in -10i64..=10,
    ) {
        let data = cauchy(seed, 2);
        let ua = evolve(&data, a).unwrap();
        let ub = evolve(&data, a + s).unwrap();
        let u = general_integer_snapshot(&ua, &ub, a, a + s, m).unwrap();
        prop_assert!(gap(&u, &evolve(&data, a + m as f64 * s).unwrap()) <= 1e-10);
    }

    #[test]
    fn snapshot_recurrence(seed in any::<u64>(), m in -15i64..=15) {
        let data = cauchy(seed, 2);
        let u = |k: i64| evolve(&data, k as f64).unwrap();
        let lhs = combine_real(&[(1.0, &u(m + 2)), (1.0, &u(m))]).unwrap();
        let rhs = combine_real(&[(2.0, &apply_multiplier(&u(m + 1), &symbol_sprime(1.0)).unwrap())]).unwrap();
        prop_assert!(gap(&lhs, &rhs) <= 1e-11);
    }

    #[test]
    fn propagator_identities(m in -10i64..=10, alpha in 0.05f64..4.0, lambdas in prop::collection::vec(0.0f64..50.0, 1..40)) {
        let r = fundamental_identities_check(m, alpha, &lambdas);
        prop_assert!(r.passes, "{r:?}");
        for &l in &lambdas {
            let lhs = psi_value(m, l) * sine_symbol_value(1.0, l);
            prop_assert!(close(lhs, sine_symbol_value(m as f64, l), 1e-10));
        }
    }

    #[test]
    fn chebyshev_reflection(m in -40i64..40, x in -1.0f64..1.0) {
        prop_assert!(close(chebyshev_u(-m - 2, x), -chebyshev_u(m, x), 1e-12));
    }

    #[test]
    fn genuine_waves_are_compatible(seed in any::<u64>(), alpha in 1.05f64..3.0) {
        let data = cauchy(seed, 2);
        let triple = SnapshotTriple::new(
            evolve(&data, 0.0).unwrap(),
            evolve(&data, 1.0).unwrap(),
            evolve(&data, alpha).unwrap(),
            alpha,
        )
        .unwrap();
        prop_assert!(compatibility_residual(&triple).unwrap() <= 1e-12);
    }

    #[test]
    fn rational_reconstruction_round_trip(seed in any::<u64>(), pq in prop::sample::select(vec![(1i64, 2i64), (2, 3), (3, 5), (5, 7)])) {
        let (p, q) = pq;
        let data = cauchy(seed, 2);
        let r = rational_reconstruct(
            &evolve(&data, 0.0).unwrap(),
            &evolve(&data, p as f64).unwrap(),
            &evolve(&data, q as f64).unwrap(),
            p,
            q,
        )
        .unwrap();
        prop_assert!(r.residual_p <= 1e-9 && r.residual_q <= 1e-9);
    }

    #[test]
    fn bezout_pairs(p in -500i64..500, q in 1i64..500) {
        match bezout(p, q) {
            Ok((k, l)) => {
                prop_assert_eq!(k * p + l * q, 1);
                prop_assert!(2 * k.abs() <= q);
                if 2 * k.abs() == q {
                    prop_assert!(k > 0);
                }
            }
            Err(_) => prop_assert!(num_integer::gcd(p, q) != 1),
        }
    }

    #[test]
    fn nearest_integer_rounds_half_to_even(n in -10_000i64..10_000, num in 0i64..64, den in 1i64..64) {
        let frac = BigRational::new(BigInt::from(num % den), BigInt::from(den));
        let x = BigRational::from_integer(BigInt::from(n)) + &frac;
        let k = nearest_integer(&x);
        let d = (&x - BigRational::from_integer(k.clone())).abs();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        prop_assert!(d <= half);
        if d == half {
            prop_assert!(k.clone() % 2 == BigInt::from(0));
        }
    }

    #[test]
    fn exact_sines_vanish_only_at_integers(num in -2000i64..2000, den in 1i64..50) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let s = exact_sine_abs(&x);
        prop_assert_eq!(s.is_exact_zero(), x.is_integer());
        let want = (PI * num as f64 / den as f64).sin().abs();
        prop_assert!(s.lo.to_f64() <= want + 1e-12 && want <= s.hi.to_f64() + 1e-12);
    }

    #[test]
    fn slow_decay_rejects_zeros(values in prop::collection::vec(0.0f64..1.0, 1..50), zero_at in any::<prop::sample::Index>()) {
        let mut table: Vec<(u64, f64)> = values.iter().enumerate().map(|(l, &v)| (l as u64, v + 1e-3)).collect();
        prop_assert!(slow_decay_check(&table, 3).0);
        let i = zero_at.index(table.len());
        table[i].1 = 0.0;
        let (passes, c) = slow_decay_check(&table, 3);
        prop_assert!(!passes && c == 0.0);
    }

    #[test]
    fn sphere_periodicity(seed in any::<u64>(), n in 2u32..=5, t in -3.0f64..3.0) {
        let p = SphereParams::new(n).unwrap();
        let f = random_sphere::<f64>(seed, p, 15, 12).unwrap();
        let g = random_sphere::<f64>(seed ^ 1, p, 15, 12).unwrap();
        let period = if n % 2 == 1 { 2.0 * PI } else { 4.0 * PI };
        let a = sphere_evolve(&f, &g, t).unwrap();
        let b = sphere_evolve(&f, &g, t + period).unwrap();
        for (k, v) in a.coeffs() {
            prop_assert!((*v - b.get(k.0, k.1)).norm() <= 1e-10);
        }
        prop_assert_eq!(a.len(), b.len());
    }

    #[test]
    fn gegenbauer_parity(n in 2u32..=6, l in 0u64..40, c in -1.0f64..1.0) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close(gegenbauer_phi(n, l, -c), sign * gegenbauer_phi::<f64>(n, l, c), 1e-12));
        prop_assert!(gegenbauer_phi::<f64>(n, l, c).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn schur_composition(n in 2u32..=6, l in 0u64..60, m in -8i64..=8, alpha in 0.05f64..3.0) {
        let lhs = schur_psi(m, alpha, n, l).unwrap() * schur_s(alpha, n, l);
        prop_assert!(close(lhs, schur_s(m as f64 * alpha, n, l), 1e-10));
    }
}
