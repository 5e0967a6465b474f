use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Largest snapshot index the recursions are asked for.
pub const MAX_M: i64 = 1_000_000;

fn snapshot_index(s: &str) -> Result<i64, String> {
    let m: i64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if m.abs() > MAX_M {
        return Err(format!("|m| = {} exceeds {MAX_M}", m.unsigned_abs()));
    }
    Ok(m)
}

#[derive(Parser, Debug)]
#[command(name = "wavesnap", version, about = "Spectral laboratory for wave snapshots")]
pub struct Cli {
    /// Seed for randomized runs, recorded in every output header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Waves on ℝⁿ: evolution, snapshots and solvers.
    #[command(subcommand)]
    Wave(Wave),
    /// Exact Diophantine tools.
    #[command(subcommand)]
    Dio(Dio),
    /// The shifted wave equation on Sⁿ.
    #[command(subcommand)]
    Sphere(Sphere),
    /// Runs a named experiment bundle.
    Reproduce {
        /// recursion, identities, threesnap, liouville, rational, oddtype, joint, sphere, sdprobe or all
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Wave {
    /// u_t = f * S'_t + g * S_t.
    Evolve {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        velocity: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// u_m from u_0 and u_1, or from u_a and u_b with --a and --b.
    Snapshot {
        #[arg(long)]
        u0: PathBuf,
        #[arg(long)]
        u1: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = snapshot_index)]
        m: i64,
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<f64>,
    },
    /// Velocity from snapshots at times 0 and 1.
    TwoSolve {
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        f1: PathBuf,
    },
    /// Compatibility residual of snapshots at 0, 1 and α.
    Compat {
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        falpha: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Velocity from snapshots at 0, 1 and α; `--alpha P/Q` takes the exact rational path.
    ThreeSolve {
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        falpha: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Velocity from snapshots at integer times 0, p and q.
    RationalSolve {
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        fp: PathBuf,
        #[arg(long)]
        fq: PathBuf,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Small-denominator amplitudes for α = Σ 10^{-j!}.
    LiouvilleDemo {
        #[arg(long, default_value_t = 6)]
        kmax: u32,
        /// Also write `k,q_k,sin_abs,amplitude`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Samples a propagator symbol as CSV `lambda,value`.
    Tabulate {
        #[arg(long, value_enum)]
        symbol: SymbolKind,
        /// Time t, or the scale s of Ψ.
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1, value_parser = snapshot_index)]
        m: i64,
        /// λmin λmax steps
        #[arg(
            long = "range",
            visible_alias = "tabulate",
            num_args = 3,
            allow_hyphen_values = true,
            value_names = ["LMIN", "LMAX", "STEPS"]
        )]
        range: Vec<String>,
    },
    /// Seeded random Cauchy data.
    Random {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        modes: usize,
        #[arg(long, default_value_t = 6.0)]
        xi_max: f64,
        #[arg(long)]
        position: PathBuf,
        #[arg(long)]
        velocity: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SymbolKind {
    S,
    Sprime,
    Psi,
}

#[derive(Subcommand, Debug)]
pub enum Dio {
    /// Continued fraction of a rational.
    Cfrac {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long, default_value_t = 1000)]
        terms: usize,
    },
    /// Truncation of Σ a_j B^{-j!}.
    Liouville {
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Comma-separated coefficients, repeated periodically.
        #[arg(long, default_value = "1")]
        coeffs: String,
        /// Also build the even-denominator witness of order N.
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// Irrationality-exponent lower bounds along convergents.
    ProbeMu {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 200)]
        depth: usize,
    },
    /// Certified table of |sin((l + S/D)βπ)|.
    Smallden {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value = "0/1")]
        shift: String,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Also write `l,sin_lower,sin_upper`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Scan of |qβ − [qβ]| > q^{-3} over odd q for β = Σ 2^{-j!}.
    Oddtype {
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Sweep of (|sin x| + |sin αx|)/|x| against C(1+|x|)^{-N}.
    Jointbound {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N", default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1e4)]
        xmax: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Witness search for the slowly-decreasing condition.
    Sdprobe(SdprobeArgs),
}

#[derive(Args, Debug)]
pub struct SdprobeArgs {
    /// sinc, s:T, sprime:T or psi:M:S
    #[arg(long, default_value = "sinc")]
    pub symbol: String,
    #[arg(long = "A", default_value_t = 4.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    /// Also write `xi,eta,value,threshold`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// A time on the sphere: a float or `(P/Q)π`.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct AlphaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// β with α = βπ; `P/Q` or any number class.
    #[arg(long)]
    pub alpha_pi: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Sphere {
    /// u_t coefficient-wise.
    Evolve {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        velocity: PathBuf,
        #[command(flatten)]
        t: AlphaArgs,
    },
    /// Antipodal identity residual for zonal data, odd n.
    Huygens {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        velocity: PathBuf,
        #[arg(long, default_value_t = 20)]
        times: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// u_{mα} from u_0 and u_α.
    Snapshot {
        #[arg(long)]
        u0: PathBuf,
        #[arg(long)]
        ualpha: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = snapshot_index)]
        m: i64,
    },
    /// Velocity from snapshots at 0 and α.
    Solve {
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        falpha: PathBuf,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long = "L", default_value_t = 256)]
        l_max: u64,
    },
    /// Verdict for α = βπ.
    Classify {
        #[arg(long)]
        beta_class: String,
        #[arg(long)]
        n: u32,
    },
    /// Empirical |Ŝ_α(l)| ≥ C(1+l)^{-M} for l ≤ L.
    Margin {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        n: u32,
        #[arg(long = "L", default_value_t = 10_000)]
        l_max: u64,
        #[arg(long = "M", default_value_t = 3)]
        m: u32,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn snapshot_index_bounds() {
        assert_eq!(snapshot_index("-1000000"), Ok(-MAX_M));
        assert!(snapshot_index("1000001").is_err());
        assert!(snapshot_index("two").is_err());
    }
}
