use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nustable::families::{FamilyKind, NuFamily, Param};
use nustable::harness::EXPERIMENTS;

use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "nustable", version, about = "Random-summation stable laws: tables, samplers, experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability table p_k of ν_p as CSV (k, p_k).
    Coeffs,
    /// Partial sums S(n, x) = P(ν_p ≤ n²x) for a range of n, with A(x).
    Figure1 {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 50)]
        n_max: u32,
    },
    /// The limit cdf A(x) of ξ_m by Laplace inversion, optionally with a
    /// Monte Carlo column (--N > 0).
    Xi,
    /// Sample dump from one of the implemented laws.
    Sample {
        #[arg(long, value_enum, default_value_t = Dist::Sech)]
        dist: Dist,
    },
    /// Run a verification experiment and print its report.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
        experiment: String,
        /// Lower end of an n range (theorem41, pgf-validity).
        #[arg(long)]
        n_min: Option<u32>,
        /// Upper end of an n range (theorem41, pgf-validity).
        #[arg(long)]
        n_max: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    /// Hyperbolic secant with ch.f. 1/cosh(a t).
    Sech,
    /// ξ_m by Karhunen–Loève.
    Xi,
    /// The index ν_p of the chosen family.
    Nu,
    /// Strictly ν-normal law φ(a t²) of the chosen family.
    NuNormal,
    /// Strictly ν-stable law φ(a |t|^α) of the chosen family.
    NuStable,
    /// Symmetric stable law exp(−a |t|^α).
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Deterministic,
    Geometric,
    Chebyshev,
    Melamed,
    ChebyshevM,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Deterministic => FamilyKind::Deterministic,
            FamilyArg::Geometric => FamilyKind::Geometric,
            FamilyArg::Chebyshev => FamilyKind::Chebyshev,
            FamilyArg::Melamed => FamilyKind::Melamed,
            FamilyArg::ChebyshevM => FamilyKind::ChebyshevM,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Summation scheme.
    #[arg(long, global = true, value_enum, default_value_t = FamilyArg::Chebyshev)]
    pub family: FamilyArg,
    /// Lattice index: p = 1/n (deterministic) or p = 1/n² (Chebyshev schemes).
    #[arg(long, global = true, conflicts_with = "p")]
    pub n: Option<u32>,
    /// Parameter p, as a decimal or a fraction such as 1/9.
    #[arg(long, global = true, value_parser = parse_fraction)]
    pub p: Option<f64>,
    /// Integer m of the melamed and chebyshev-m schemes, and of ξ_m.
    #[arg(long, global = true, default_value_t = 1)]
    pub m: u32,
    /// Stability index α in (0, 2].
    #[arg(long, global = true, default_value_t = 2.0)]
    pub alpha: f64,
    /// Scale: sech scale, ν-normal a, or stable c.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Evaluation points (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Truncation order; chosen automatically when absent.
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    /// Sample size.
    #[arg(long = "N", global = true)]
    pub sample_size: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Output format; csv for data commands and json for verify by default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if b == 0.0 {
                Err("division by zero".into())
            } else {
                Ok(a / b)
            }
        }
        None => parse(s),
    }
}

impl Common {
    pub fn family(&self) -> Result<NuFamily, Failure> {
        Ok(NuFamily::new(self.family.into(), self.m)?)
    }

    /// `--n` or `--p` resolved against the family's admissible set, falling
    /// back to `default_n` or `default_p`.
    pub fn param(&self, family: &NuFamily, default_n: u32, default_p: f64) -> Result<Param, Failure> {
        let lattice = !matches!(family.kind(), FamilyKind::Geometric | FamilyKind::Melamed);
        Ok(match (self.n, self.p) {
            (Some(n), _) => family.with_n(n)?,
            (None, Some(p)) => family.admit(p)?,
            (None, None) if lattice => family.with_n(default_n)?,
            (None, None) => family.admit(default_p)?,
        })
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn resolved(&self) -> Value {
        json!({
            "family": FamilyKind::from(self.family).name(),
            "n": self.n,
            "p": self.p,
            "m": self.m,
            "alpha": self.alpha,
            "a": self.a,
            "x": self.x,
            "K": self.k,
            "N": self.sample_size,
            "seed": self.seed,
            "workers": self.workers,
        })
    }
}
