use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use wavesnap::diophantine::{
    continued_fraction, doubled_liouville_bound, irrationality_exponent_probe, joint_sine_lower_bound_check,
    liouville_truncation, odd_type_verifier, odd_type_verifier_with_depth, slowly_decreasing_probe,
    small_denominator_sequence, NumberClass,
};
use wavesnap::euclid::{
    compatibility_residual, evolve, general_integer_snapshot, integer_snapshot, liouville_obstruction_demo,
    rational_reconstruct, three_snapshot_solve, three_snapshot_solve_rational, two_snapshot_solve, CauchyData,
    RationalReconstruction, SnapshotTriple, CONSISTENCY_TOL,
};
use wavesnap::experiments::run_suite;
use wavesnap::io::{
    csv_table, field_from_json, field_to_value, fmt_f64, pretty, solve_report_value, sphere_from_json,
    sphere_report_value, sphere_to_value, with_meta,
};
use wavesnap::propagators::{symbol_psi, symbol_s, symbol_sprime, tabulate, PropagatorKind, PropagatorSpec};
use wavesnap::sample::random_cauchy;
use wavesnap::sphere::{
    classify_alpha, huygens_antipodal_check, sphere_evolve_at, sphere_snapshot_m, sphere_two_snapshot_solve,
    surjectivity_margin, AlphaSpec,
};
use wavesnap::{Error, Field, Result, SphereField64, Symbol};

use crate::args::{AlphaArgs, Command, Dio, SdprobeArgs, Sphere, SymbolKind, Wave};

/// What a verb produced: the main document, side files and the exit code.
pub struct Output {
    pub main: String,
    pub side: Vec<(PathBuf, String)>,
    pub exit: i32,
}

impl Output {
    fn doc(main: String) -> Self {
        Self { main, side: Vec::new(), exit: 0 }
    }

    fn with_side(mut self, path: Option<PathBuf>, text: impl FnOnce() -> Result<String>) -> Result<Self> {
        if let Some(p) = path {
            self.side.push((p, text()?));
        }
        Ok(self)
    }
}

struct Ctx {
    verb: &'static str,
    seed: u64,
}

impl Ctx {
    fn report(&self, v: Value) -> Output {
        Output::doc(pretty(&with_meta(self.verb, self.seed, v)))
    }

    fn ser(&self, v: &impl Serialize) -> Result<Output> {
        Ok(self.report(serde_json::to_value(v)?))
    }

    /// Field and sphere documents keep their schema and gain a `meta` key,
    /// so outputs can be fed back as inputs.
    fn field_doc(&self, mut v: Value) -> Output {
        if let Value::Object(map) = &mut v {
            let meta = with_meta(self.verb, self.seed, Value::Null)["meta"].take();
            map.insert("meta".into(), meta);
        }
        Output::doc(pretty(&v))
    }

    fn csv(&self, columns: &[&str], rows: &[Vec<String>]) -> Result<String> {
        csv_table(self.verb, self.seed, columns, rows)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn field(path: &Path) -> Result<Field> {
    field_from_json(&read(path)?)
}

fn sphere_field(path: &Path) -> Result<SphereField64> {
    sphere_from_json(&read(path)?)
}

fn class(s: &str) -> Result<NumberClass> {
    s.parse()
}

fn alpha_spec(a: &AlphaArgs) -> Result<AlphaSpec<f64>> {
    match (&a.alpha, &a.alpha_pi) {
        (Some(t), None) => Ok(AlphaSpec::Real(*t)),
        (None, Some(b)) => Ok(AlphaSpec::PiTimes(class(b)?)),
        _ => Err(Error::Parse("give exactly one of --alpha and --alpha-pi".into())),
    }
}

fn parse_num<N: std::str::FromStr>(s: &str, what: &str) -> Result<N>
where
    N::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| Error::Parse(format!("{what} `{s}`: {e}")))
}

/// Solvers report incompatible data as a result rather than a failure.
fn or_incompatible(ctx: &Ctx, r: Result<Value>) -> Result<Output> {
    match r {
        Ok(v) => Ok(ctx.report(v)),
        Err(Error::IncompatibleData { residual, tolerance }) => {
            Ok(ctx.report(json!({ "status": "Incompatible", "residual": residual, "tolerance": tolerance })))
        }
        Err(e) => Err(e),
    }
}

fn reconstruction_value(r: &RationalReconstruction<f64>) -> Value {
    json!({
        "report": solve_report_value(&r.report),
        "bezout": [r.bezout.0, r.bezout.1],
        "compatibility": r.compatibility,
        "residual_p": r.residual_p,
        "residual_q": r.residual_q,
    })
}

pub fn run(command: &Command, seed: u64) -> Result<Output> {
    match command {
        Command::Wave(w) => wave(w, seed),
        Command::Dio(d) => dio(d, seed),
        Command::Sphere(s) => sphere(s, seed),
        Command::Reproduce { suite } => reproduce(suite, seed),
    }
}

fn reproduce(suite: &str, seed: u64) -> Result<Output> {
    let reports = run_suite(suite, seed)?;
    let mut main: String = reports.iter().map(|r| r.summary_line() + "\n").collect();
    let passed = reports.iter().all(|r| r.passed);
    let n_pass = reports.iter().filter(|r| r.passed).count();
    main.push_str(&format!("{n_pass}/{} suites passed (seed {seed})\n", reports.len()));
    let ctx = Ctx { verb: "reproduce", seed };
    let detail = pretty(&with_meta(ctx.verb, seed, serde_json::to_value(&reports)?));
    Ok(Output { main, side: vec![(PathBuf::new(), detail)], exit: if passed { 0 } else { 1 } })
}

fn wave(w: &Wave, seed: u64) -> Result<Output> {
    match w {
        Wave::Evolve { field: f, velocity, t } => {
            let ctx = Ctx { verb: "wave evolve", seed };
            let data = CauchyData::new(field(f)?, field(velocity)?)?;
            Ok(ctx.field_doc(field_to_value(&evolve(&data, *t)?)))
        }
        Wave::Snapshot { u0, u1, m, a, b } => {
            let ctx = Ctx { verb: "wave snapshot", seed };
            let (u0, u1) = (field(u0)?, field(u1)?);
            let u = match (a, b) {
                (Some(a), Some(b)) => general_integer_snapshot(&u0, &u1, *a, *b, *m)?,
                _ => integer_snapshot(&u0, &u1, *m)?,
            };
            Ok(ctx.field_doc(field_to_value(&u)))
        }
        Wave::TwoSolve { f0, f1 } => {
            let ctx = Ctx { verb: "wave two-solve", seed };
            Ok(ctx.report(solve_report_value(&two_snapshot_solve(&field(f0)?, &field(f1)?)?)))
        }
        Wave::Compat { f0, f1, falpha, alpha } => {
            let ctx = Ctx { verb: "wave compat", seed };
            let triple = SnapshotTriple::new(field(f0)?, field(f1)?, field(falpha)?, *alpha)?;
            let residual = compatibility_residual(&triple)?;
            Ok(ctx.report(json!({
                "alpha": alpha,
                "residual": residual,
                "tolerance": CONSISTENCY_TOL,
                "compatible": residual <= CONSISTENCY_TOL,
            })))
        }
        Wave::ThreeSolve { f0, f1, falpha, alpha } => {
            let ctx = Ctx { verb: "wave three-solve", seed };
            let (f0, f1, fa) = (field(f0)?, field(f1)?, field(falpha)?);
            let r = if alpha.contains('/') {
                let NumberClass::Rational(q) = class(alpha)? else {
                    return Err(Error::Parse(format!("`{alpha}` is not a rational P/Q")));
                };
                three_snapshot_solve_rational(&f0, &f1, &fa, &q).map(|r| reconstruction_value(&r))
            } else {
                let a: f64 = parse_num(alpha, "alpha")?;
                SnapshotTriple::new(f0, f1, fa, a)
                    .and_then(|t| three_snapshot_solve(&t))
                    .map(|r| solve_report_value(&r))
            };
            or_incompatible(&ctx, r)
        }
        Wave::RationalSolve { f0, fp, fq, p, q } => {
            let ctx = Ctx { verb: "wave rational-solve", seed };
            let r = rational_reconstruct(&field(f0)?, &field(fp)?, &field(fq)?, *p, *q);
            or_incompatible(&ctx, r.map(|r| reconstruction_value(&r)))
        }
        Wave::LiouvilleDemo { kmax, csv } => {
            let ctx = Ctx { verb: "wave liouville-demo", seed };
            let rows = liouville_obstruction_demo(*kmax)?;
            let table = || {
                let cells: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        let mid = r.sin_abs.lo.add(r.sin_abs.hi).mul_f64(0.5);
                        vec![r.k.to_string(), format!("1e{}", r.log10_q), mid.to_string(), r.amplitude.to_string()]
                    })
                    .collect();
                ctx.csv(&["k", "q_k", "sin_abs", "amplitude"], &cells)
            };
            ctx.ser(&rows)?.with_side(csv.clone(), table)
        }
        Wave::Tabulate { symbol, t, m, range } => {
            let ctx = Ctx { verb: "wave tabulate", seed };
            let lmin: f64 = parse_num(&range[0], "LMIN")?;
            let lmax: f64 = parse_num(&range[1], "LMAX")?;
            let steps: usize = parse_num(&range[2], "STEPS")?;
            let kind = match symbol {
                SymbolKind::S => PropagatorKind::Sine,
                SymbolKind::Sprime => PropagatorKind::Cosine,
                SymbolKind::Psi => PropagatorKind::Psi,
            };
            let sym = PropagatorSpec { kind, t_or_s: *t, m: *m }.symbol()?;
            let rows: Vec<Vec<String>> =
                tabulate(&sym, lmin, lmax, steps).into_iter().map(|(l, v)| vec![fmt_f64(l), fmt_f64(v)]).collect();
            Ok(Output::doc(ctx.csv(&["lambda", "value"], &rows)?))
        }
        Wave::Random { dim, modes, xi_max, position, velocity } => {
            let ctx = Ctx { verb: "wave random", seed };
            let data = random_cauchy::<f64>(seed, *dim, *modes, *xi_max)?;
            let pos = ctx.field_doc(field_to_value(&data.position)).main;
            let vel = ctx.field_doc(field_to_value(&data.velocity)).main;
            let out = ctx.report(json!({
                "dim": dim,
                "position_modes": data.position.len(),
                "velocity_modes": data.velocity.len(),
            }));
            Ok(Output { side: vec![(position.clone(), pos), (velocity.clone(), vel)], ..out })
        }
    }
}

fn ratio_string(r: &num_rational::BigRational) -> String {
    r.to_string()
}

fn dio(d: &Dio, seed: u64) -> Result<Output> {
    match d {
        Dio::Cfrac { value, terms } => {
            let ctx = Ctx { verb: "dio cfrac", seed };
            let NumberClass::Rational(x) = class(value)? else {
                return Err(Error::Parse(format!("`{value}` is not a rational P/Q")));
            };
            let cf = continued_fraction(&x, *terms)?;
            let quotients: Vec<String> = cf.partial_quotients.iter().map(ToString::to_string).collect();
            let convergents: Vec<String> = cf.convergents.iter().map(ratio_string).collect();
            Ok(ctx.report(json!({
                "value": ratio_string(&x),
                "partial_quotients": quotients,
                "convergents": convergents,
                "terminated": cf.terminated,
            })))
        }
        Dio::Liouville { base, depth, coeffs, n } => {
            let ctx = Ctx { verb: "dio liouville", seed };
            let coeffs: Vec<u32> =
                coeffs.split(',').map(|c| parse_num(c, "coefficient")).collect::<Result<_>>()?;
            let x = liouville_truncation(*base, &coeffs, *depth)?;
            let (lo, hi) = x.interval();
            let mut out = Map::new();
            out.insert("class".into(), json!(x.to_string()));
            out.insert("truncation".into(), json!(ratio_string(&x.approximation())));
            out.insert("tail_bound".into(), json!(ratio_string(&x.error_bound())));
            out.insert("interval".into(), json!([ratio_string(&lo), ratio_string(&hi)]));
            if let Some(n) = n {
                out.insert("doubled".into(), serde_json::to_value(doubled_liouville_bound(&x, *n)?)?);
            }
            Ok(ctx.report(Value::Object(out)))
        }
        Dio::ProbeMu { beta, depth } => {
            let ctx = Ctx { verb: "dio probe-mu", seed };
            let x = class(beta)?;
            let probe = irrationality_exponent_probe(&x, *depth)?;
            Ok(ctx.report(json!({ "beta": x.to_string(), "probe": serde_json::to_value(&probe)? })))
        }
        Dio::Smallden { beta, shift, count, csv } => {
            let ctx = Ctx { verb: "dio smallden", seed };
            let x = class(beta)?;
            let (num, den) = match shift.split_once('/') {
                Some((s, d)) => (parse_num::<u64>(s, "shift")?, parse_num::<u64>(d, "shift")?),
                None => (parse_num::<u64>(shift, "shift")?, 1),
            };
            let table = small_denominator_sequence(&x, num, den, *count)?;
            let rows = || {
                let cells: Vec<Vec<String>> = table
                    .rows
                    .iter()
                    .map(|r| vec![r.l.to_string(), r.value.lo.to_string(), r.value.hi.to_string()])
                    .collect();
                ctx.csv(&["l", "sin_lower", "sin_upper"], &cells)
            };
            ctx.report(json!({ "beta": x.to_string(), "table": serde_json::to_value(&table)? }))
                .with_side(csv.clone(), rows)
        }
        Dio::Oddtype { qmax, depth } => {
            let ctx = Ctx { verb: "dio oddtype", seed };
            let r = match depth {
                Some(j) => odd_type_verifier_with_depth(*qmax, *j)?,
                None => odd_type_verifier(*qmax)?,
            };
            let mut v = serde_json::to_value(&r)?;
            v["passes"] = json!(r.passes());
            Ok(ctx.report(v))
        }
        Dio::Jointbound { alpha, n, xmax, samples } => {
            let ctx = Ctx { verb: "dio jointbound", seed };
            let x = class(alpha)?;
            let r = joint_sine_lower_bound_check(&x, *n, *xmax, *samples)?;
            Ok(ctx.report(json!({ "alpha": x.to_string(), "n": n, "bound": serde_json::to_value(&r)? })))
        }
        Dio::Sdprobe(args) => sdprobe(args, seed),
    }
}

/// `sinc`, `s:T`, `sprime:T` or `psi:M:S`.
fn parse_symbol(s: &str) -> Result<Symbol> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["sinc"] => Ok(symbol_s(1.0)),
        ["s", t] => Ok(symbol_s(parse_num(t, "t")?)),
        ["sprime", t] => Ok(symbol_sprime(parse_num(t, "t")?)),
        ["psi", m, sc] => symbol_psi(parse_num(m, "m")?, parse_num(sc, "s")?),
        _ => Err(Error::Parse(format!("symbol `{s}`: expected sinc, s:T, sprime:T or psi:M:S"))),
    }
}

fn sdprobe(a: &SdprobeArgs, seed: u64) -> Result<Output> {
    let ctx = Ctx { verb: "dio sdprobe", seed };
    let sym = parse_symbol(&a.symbol)?;
    let probe = slowly_decreasing_probe(&sym, a.a, a.xi_max, a.samples)?;
    let rows = || {
        let cells: Vec<Vec<String>> = probe
            .rows
            .iter()
            .map(|r| {
                let eta = r.eta.map(fmt_f64).unwrap_or_default();
                vec![fmt_f64(r.xi), eta, fmt_f64(r.value), fmt_f64(r.threshold)]
            })
            .collect();
        ctx.csv(&["xi", "eta", "value", "threshold"], &cells)
    };
    let failures = probe.rows.iter().filter(|r| r.eta.is_none()).count();
    ctx.report(json!({
        "symbol": sym.label(),
        "a": a.a,
        "xi_max": a.xi_max,
        "samples": probe.rows.len(),
        "failures": failures,
        "passes": probe.passes,
    }))
    .with_side(a.csv.clone(), rows)
}

fn sphere(s: &Sphere, seed: u64) -> Result<Output> {
    match s {
        Sphere::Evolve { field, velocity, t } => {
            let ctx = Ctx { verb: "sphere evolve", seed };
            let u = sphere_evolve_at(&sphere_field(field)?, &sphere_field(velocity)?, &alpha_spec(t)?)?;
            Ok(ctx.field_doc(sphere_to_value(&u)))
        }
        Sphere::Huygens { field, velocity, times, points } => {
            let ctx = Ctx { verb: "sphere huygens", seed };
            if *times == 0 || *points < 2 {
                return Err(Error::Precondition("need at least one time and two points".into()));
            }
            let ts: Vec<f64> = (0..*times).map(|i| 2.0 * PI * i as f64 / *times as f64).collect();
            let cs: Vec<f64> = (0..*points).map(|i| -1.0 + 2.0 * i as f64 / (*points - 1) as f64).collect();
            let r = huygens_antipodal_check(&sphere_field(field)?, &sphere_field(velocity)?, &ts, &cs)?;
            Ok(ctx.report(json!({ "times": times, "points": points, "residual": r })))
        }
        Sphere::Snapshot { u0, ualpha, alpha, m } => {
            let ctx = Ctx { verb: "sphere snapshot", seed };
            let u = sphere_snapshot_m(&sphere_field(u0)?, &sphere_field(ualpha)?, *alpha, *m)?;
            Ok(ctx.field_doc(sphere_to_value(&u)))
        }
        Sphere::Solve { f0, falpha, alpha, l_max } => {
            let ctx = Ctx { verb: "sphere solve", seed };
            let r = sphere_two_snapshot_solve(&sphere_field(f0)?, &sphere_field(falpha)?, &alpha_spec(alpha)?, *l_max)?;
            Ok(ctx.report(sphere_report_value(&r)))
        }
        Sphere::Classify { beta_class, n } => {
            let ctx = Ctx { verb: "sphere classify", seed };
            let x = class(beta_class)?;
            let v = classify_alpha(&x, *n)?;
            Ok(ctx.report(json!({ "beta": x.to_string(), "n": n, "verdict": v })))
        }
        Sphere::Margin { alpha, n, l_max, m } => {
            let ctx = Ctx { verb: "sphere margin", seed };
            ctx.ser(&surjectivity_margin(&alpha_spec(alpha)?, *n, *l_max, *m)?)
        }
    }
}
