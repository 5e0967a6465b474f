//! Seeded experiment bundles behind `reproduce` and the acceptance tests.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::diophantine::{
    joint_sine_lower_bound_check, liouville_truncation, odd_type_truncation, odd_type_verifier, ratio,
    slow_decay_check, slowly_decreasing_probe, NumberClass,
};
use crate::error::{Error, Result};
use crate::euclid::{
    compatibility_residual, evolve, general_integer_snapshot, integer_snapshot, liouville_obstruction_demo,
    rational_reconstruct, three_snapshot_solve, CauchyData, SnapshotTriple, SolveStatus,
};
use crate::propagators::{fundamental_identities_check, psi_value, sine_symbol_value, symbol_s, symbol_sprime};
use crate::sample::{random_cauchy, random_sphere, random_zonal, rng};
use crate::spectral::{apply_multiplier, combine_real, difference, max_abs_amp, Mode, SpectralField};
use crate::sphere::{
    classify_alpha, huygens_antipodal_check, schur_sequence, sphere_evolve, AlphaSpec, SphereParams, Verdict,
};

/// Suite names accepted by [`run_suite`], in acceptance order.
pub const SUITES: [&str; 9] =
    ["recursion", "identities", "threesnap", "liouville", "rational", "oddtype", "joint", "sphere", "sdprobe"];

/// One measured quantity against its bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    /// Reported for context; does not affect the suite verdict.
    pub informational: bool,
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), passed: value <= bound, value, bound, informational: false, detail: String::new() }
    }

    fn holds(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            value: f64::NAN,
            bound: f64::NAN,
            informational: false,
            detail: detail.into(),
        }
    }

    fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { informational: true, ..Self::holds(name, true, detail) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.informational || c.passed);
        Self { suite: suite.into(), seed, passed, checks }
    }

    /// `PASS  name: check; check; …`
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| {
                let mark = if c.passed { "ok" } else { "FAIL" };
                if c.value.is_nan() {
                    format!("{} {mark}", c.name)
                } else {
                    format!("{} {:.3e} <= {:.0e} {mark}", c.name, c.value, c.bound)
                }
            })
            .collect();
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.suite, parts.join("; "))
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, seed)).collect();
    }
    Ok(vec![run_one(name, seed)?])
}

fn run_one(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "recursion" => recursion(seed)?,
        "identities" => identities(seed),
        "threesnap" => threesnap(seed)?,
        "liouville" => liouville()?,
        "rational" => rational(seed)?,
        "oddtype" => oddtype()?,
        "joint" => joint()?,
        "sphere" => sphere(seed)?,
        "sdprobe" => sdprobe()?,
        other => return Err(Error::UnknownSuite(other.into())),
    };
    Ok(SuiteReport::new(name, seed, checks))
}

fn gap(a: &SpectralField<f64>, b: &SpectralField<f64>) -> Result<f64> {
    Ok(max_abs_amp(&difference(a, b)?))
}

fn wave(seed: u64, i: u64) -> Result<CauchyData<f64>> {
    random_cauchy(seed.wrapping_mul(1_000_003).wrapping_add(i), 1 + (i % 3) as usize, 16, 6.0)
}

fn recursion(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed);
    let (mut int_err, mut gen_err, mut rec_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let data = wave(seed, i)?;
        let u0 = evolve(&data, 0.0)?;
        let u1 = evolve(&data, 1.0)?;
        let a: f64 = r.random_range(-1.0..1.0);
        let b = a + r.random_range(0.2..1.5);
        let (ua, ub) = (evolve(&data, a)?, evolve(&data, b)?);
        let c1 = symbol_sprime(1.0);
        for m in -20i64..=20 {
            let exact = evolve(&data, m as f64)?;
            int_err = int_err.max(gap(&integer_snapshot(&u0, &u1, m)?, &exact)?);
            let t = a + m as f64 * (b - a);
            gen_err = gen_err.max(gap(&general_integer_snapshot(&ua, &ub, a, b, m)?, &evolve(&data, t)?)?);
            let next = evolve(&data, (m + 1) as f64)?;
            let next2 = evolve(&data, (m + 2) as f64)?;
            let lhs = combine_real(&[(1.0, &next2), (1.0, &exact), (-2.0, &apply_multiplier(&next, &c1)?)])?;
            rec_err = rec_err.max(max_abs_amp(&lhs));
        }
    }
    Ok(vec![
        Check::at_most("integer_snapshot", int_err, 1e-10),
        Check::at_most("general_integer_snapshot", gen_err, 1e-10),
        Check::at_most("recurrence", rec_err, 1e-11),
    ])
}

fn identities(seed: u64) -> Vec<Check> {
    let mut r = rng(seed);
    let grid: Vec<f64> = (0..1000).map(|_| r.random_range(0.0..=50.0)).collect();
    let mut worst = 0.0f64;
    for m in -10..=10 {
        for alpha in [0.3, SQRT_2, 2.5] {
            worst = worst.max(fundamental_identities_check(m, alpha, &grid).max);
        }
    }
    let mut product = 0.0f64;
    for m in -10..=10 {
        for &l in &grid {
            let d = psi_value(m, l) * sine_symbol_value(1.0, l) - sine_symbol_value(m as f64, l);
            product = product.max(d.abs());
        }
    }
    vec![Check::at_most("fundamental_identities", worst, 1e-10), Check::at_most("psi_times_s1", product, 1e-10)]
}

fn threesnap(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed ^ 0x5eed);
    let random_alpha: f64 = r.random_range(0.2..3.0);
    let (mut worst_rel, mut worst_compat) = (0.0f64, 0.0f64);
    let mut unique = true;
    for (j, alpha) in [SQRT_2, random_alpha].into_iter().enumerate() {
        for i in 0..20 {
            let data = wave(seed + 17 * j as u64, i)?;
            let t = SnapshotTriple::new(evolve(&data, 0.0)?, evolve(&data, 1.0)?, evolve(&data, alpha)?, alpha)?;
            worst_compat = worst_compat.max(compatibility_residual(&t)?);
            let rep = three_snapshot_solve(&t)?;
            unique &= rep.status == SolveStatus::Unique;
            let Some(g) = rep.solution else {
                unique = false;
                continue;
            };
            let back = evolve(&CauchyData::new(t.f0.clone(), g)?, alpha)?;
            let scale = max_abs_amp(&t.falpha).max(1.0);
            worst_rel = worst_rel.max(gap(&back, &t.falpha)? / (scale * rep.conditioning));
        }
    }
    Ok(vec![
        Check::at_most("solve_then_evolve / conditioning", worst_rel, 1e-9),
        Check::at_most("compatibility_residual", worst_compat, 1e-12),
        Check::holds("all_unique", unique, format!("alpha in {{sqrt2, {random_alpha}}}")),
    ])
}

fn liouville() -> Result<Vec<Check>> {
    let rows = liouville_obstruction_demo(6)?;
    Ok(rows
        .iter()
        .map(|row| {
            Check::holds(
                format!("k={}", row.k),
                row.exceeds_one,
                format!("amplitude >= {} with q_k = 1e{}", row.amplitude_lower, row.log10_q),
            )
        })
        .collect())
}

fn rational(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (p, q) in [(1i64, 2i64), (2, 3), (3, 5), (5, 7)] {
        let mut worst = 0.0f64;
        let mut rejected = true;
        for i in 0..50 {
            let data = wave(seed + 1000 * p as u64 + q as u64, i)?;
            let f0 = evolve(&data, 0.0)?;
            let fp = evolve(&data, p as f64)?;
            let fq = evolve(&data, q as f64)?;
            let rec = rational_reconstruct(&f0, &fp, &fq, p, q)?;
            worst = worst.max(rec.residual_p).max(rec.residual_q);
            // a mode at a fresh frequency in f_q alone breaks the compatibility condition
            let xi = vec![0.77; data.dim()];
            let bump = SpectralField::new(data.dim(), vec![Mode::new(xi, Complex::new(1e-3, 0.0))?])?;
            let bad = combine_real(&[(1.0, &fq), (1.0, &bump)])?;
            rejected &= matches!(rational_reconstruct(&f0, &fp, &bad, p, q), Err(Error::IncompatibleData { .. }));
        }
        checks.push(Check::at_most(format!("residual p/q={p}/{q}"), worst, 1e-9));
        checks.push(Check::holds(format!("rejects p/q={p}/{q}"), rejected, "perturbed f_q"));
    }
    Ok(checks)
}

fn oddtype() -> Result<Vec<Check>> {
    let rep = odd_type_verifier(10_000)?;
    Ok(vec![
        Check::holds(
            "no violations for odd q in (64, 1e4]",
            rep.passes(),
            format!("{} odd q checked at depth {}", rep.checked, rep.depth),
        ),
        Check::info("min ratio", format!("min q^3|q beta - [q beta]| = {} at q = {}", rep.min_ratio, rep.argmin_q)),
    ])
}

fn joint() -> Result<Vec<Check>> {
    let rep = joint_sine_lower_bound_check(&NumberClass::sqrt2(), 3, 1e4, 100_000)?;
    Ok(vec![Check::holds(
        "sqrt2, N = 3, x <= 1e4",
        rep.passes,
        format!("C = {:e} at x = {} over {} points", rep.c, rep.argmin, rep.points),
    )])
}

/// The six example classes with their expected verdicts.
pub fn sphere_cells() -> Result<Vec<(String, u32, NumberClass, Verdict)>> {
    let r = |a, b| NumberClass::Rational(ratio(a, b));
    Ok(vec![
        ("n=3 beta=1/2".into(), 3, r(1, 2), Verdict::NonUnique),
        ("n=2 beta=1/3".into(), 2, r(1, 3), Verdict::UniqueAndSolvable),
        ("n=2 beta=2/5".into(), 2, r(2, 5), Verdict::NonUnique),
        ("n=3 golden".into(), 3, NumberClass::golden(), Verdict::UniqueAndSolvable),
        ("n=3 liouville".into(), 3, liouville_truncation(10, &[1], 6)?, Verdict::UniqueNotAlwaysSolvable),
        (
            "n=2 odd-type beta/2".into(),
            2,
            odd_type_truncation(3, &[1], 6)?.scaled_by(&ratio(2, 1))?,
            Verdict::UniqueNotAlwaysSolvable,
        ),
    ])
}

fn sphere(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let p3 = SphereParams::new(3)?;
    let p2 = SphereParams::new(2)?;

    let f = random_zonal::<f64>(seed, p3, 12)?;
    let g = random_zonal::<f64>(seed + 1, p3, 12)?;
    let ts: Vec<f64> = (0..20).map(|i| 0.37 * i as f64).collect();
    let cs: Vec<f64> = (0..20).map(|i| -1.0 + 2.0 * i as f64 / 19.0).collect();
    checks.push(Check::at_most("huygens n=3 20x20", huygens_antipodal_check(&f, &g, &ts, &cs)?, 1e-10));

    for (params, period, label) in [(p3, 2.0 * PI, "period 2pi n=3"), (p2, 4.0 * PI, "period 4pi n=2")] {
        let f = random_sphere::<f64>(seed + 2, params, 20, 30)?;
        let g = random_sphere::<f64>(seed + 3, params, 20, 30)?;
        let mut worst = 0.0f64;
        for &t in &ts {
            let a = sphere_evolve(&f, &g, t)?;
            let b = sphere_evolve(&f, &g, t + period)?;
            for &(l, m) in a.coeffs().keys().chain(b.coeffs().keys()) {
                worst = worst.max((a.get(l, m) - b.get(l, m)).norm());
            }
        }
        checks.push(Check::at_most(label, worst, 1e-10));
    }

    for (label, n, beta, expected) in sphere_cells()? {
        let got = classify_alpha(&beta, n)?;
        checks.push(Check::holds(format!("classify {label}"), got == expected, format!("{got:?}")));
        let seq = schur_sequence(&AlphaSpec::<f64>::PiTimes(beta), n, 10_000)?;
        let zeros = seq.values.iter().filter(|v| v.1 == 0.0).count();
        let passing: Vec<u32> = (0..=3).filter(|&m| slow_decay_check(&seq.values, m).0).collect();
        let detail = format!("exact zeros {zeros}, passes at M in {passing:?}");
        match expected {
            Verdict::UniqueAndSolvable => {
                checks.push(Check::holds(format!("margin {label}"), !passing.is_empty(), detail));
            }
            _ if zeros > 0 => checks.push(Check::holds(format!("margin {label}"), passing.is_empty(), detail)),
            _ => checks.push(Check::info(format!("margin {label}"), detail)),
        }
    }
    Ok(checks)
}

fn sdprobe() -> Result<Vec<Check>> {
    let rep = slowly_decreasing_probe(&symbol_s(1.0f64), 4.0, 1000.0, 2001)?;
    let misses = rep.rows.iter().filter(|r| r.eta.is_none()).count();
    Ok(vec![Check::holds("S_1 with A = 4 up to 1e3", rep.passes, format!("{} samples, {misses} without witness", rep.rows.len()))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 0), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn summary_line_format() {
        let r = SuiteReport::new("x", 0, vec![Check::at_most("a", 1e-12, 1e-10), Check::info("b", "c")]);
        assert!(r.passed);
        assert_eq!(r.summary_line(), "PASS x: a 1.000e-12 <= 1e-10 ok");
        let r = SuiteReport::new("y", 0, vec![Check::holds("h", false, "")]);
        assert_eq!(r.summary_line(), "FAIL y: h FAIL");
    }

    #[test]
    fn cheap_suites_pass() {
        for name in ["liouville", "sdprobe"] {
            let r = run_suite(name, 0).unwrap();
            assert!(r[0].passed, "{}", r[0].summary_line());
        }
    }
}
