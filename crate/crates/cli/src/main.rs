//! `sphere-strings`: products, coproducts, homology tables and geodesic
//! checks for spheres from the command line.
//!
//! Exit status: 0 all checks passed, 1 a verification failed, 2 usage or
//! input error, 3 numerical non-convergence.

mod commands;
mod config;
mod error;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use config::{Format, RunConfig};
use error::{CliError, EXIT_PASS, EXIT_VERIFICATION_FAILED};

#[derive(Debug, Parser)]
#[command(name = "sphere-strings", about = "Extended string-topology operations on spheres, checked exactly and numerically")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format [default: text, or the config file's `format`]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// TOML run configuration (tolerances, cutoff, seed, metric, format)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for random initial guesses [default: 0x5eed0001]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Shooting residual tolerance [default: 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Integration steps per π of geodesic length [default: 2000]
    #[arg(long, global = true)]
    pub steps_per_pi: Option<usize>,

    /// Gauss–Newton iteration limit [default: 50]
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Products and structural checks of the extended algebra
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Copairings, comodule maps and the dual cohomology product
    #[command(subcommand)]
    Coalgebra(CoalgebraCmd),
    /// Morse–Bott homology tables, spectra and diagrams
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Antipodal geodesics: shooting, indices, spectra
    #[command(subcommand)]
    Geodesics(GeodesicsCmd),
    /// Round-metric critical values and the resonance strip
    Resonance(ResonanceArgs),
    /// Density sum of inverse average indices around the mean frequency
    Density(DensityArgs),
    /// Print the effective run configuration as TOML
    Config,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Multiply two elements, e.g. `algebra mul --n 2 "B[0]" "A[0]"`
    Mul {
        #[arg(long = "n")]
        n: u32,
        /// Coefficient ring: Z, Q or Z2 [default: the regime's ring]
        #[arg(long)]
        coeff: Option<String>,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Check presentation, degree law, adaptedness, associativity and sign
    /// commutation up to an index cutoff
    Verify {
        #[arg(long = "n")]
        n: u32,
        /// Index cutoff [default: 10, or the config file's `cutoff`]
        #[arg(long)]
        cutoff: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoalgebraCmd {
    /// Apply copairing|left|right|loop|full to an element (even n)
    Apply {
        #[arg(long = "n")]
        n: u32,
        #[arg(long, default_value = "full")]
        map: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Dual product of two cohomology generators, e.g. `a[1] b[0]`
    Dual {
        #[arg(long = "n")]
        n: u32,
        phi: String,
        psi: String,
    },
    /// Check coassociativity, cocommutativity, comodule and duality identities
    Verify {
        #[arg(long = "n")]
        n: u32,
        #[arg(long)]
        cutoff: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HomologyCmd {
    /// Homology groups degree by degree
    Table {
        /// P (antipodal path space) or L (free loop space)
        #[arg(long, default_value = "P")]
        space: String,
        #[arg(long = "n")]
        n: u32,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
    },
    /// Critical manifolds of the round energy up to a length
    Spectrum {
        #[arg(long, default_value = "P")]
        space: String,
        #[arg(long = "n")]
        n: u32,
        /// Largest length, in units of π
        #[arg(long, default_value_t = 7.0)]
        max_length: f64,
    },
    /// Stacked diagram of the first critical levels
    Diagram {
        #[arg(long, default_value = "P")]
        space: String,
        #[arg(long = "n")]
        n: u32,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    /// round | ellipsoid:a0,…,an | conformal:c;c1:e0,…;… | path to a file with `metric = "…"`
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long = "n")]
    pub n: u32,
    /// Starting point (projected to the sphere) [default: e0]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<f64>>,
    /// Initial direction (projected to the tangent space) [default: e1]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub direction: Option<Vec<f64>>,
    /// Level k: initial speed (2k + 1)π, the k-th round antipodal geodesic
    #[arg(long, default_value_t = 0)]
    pub level: u32,
}

#[derive(Debug, Subcommand)]
pub enum GeodesicsCmd {
    /// Solve the antipodal boundary-value problem from one guess
    Shoot(GeodesicArgs),
    /// Shoot, then compute Morse index, endpoint nullity and (optionally)
    /// the average index over iterates
    Index {
        #[command(flatten)]
        geo: GeodesicArgs,
        /// Number of iterates for the average index (0 to skip)
        #[arg(long, default_value_t = 0)]
        iterates: usize,
    },
    /// Shoot from seeded random guesses and list length, energy, index
    Scan {
        #[arg(long)]
        metric: Option<String>,
        #[arg(long = "n")]
        n: u32,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        /// Guess speeds are drawn uniformly from [speed-min, speed-max]
        #[arg(long, default_value_t = 2.0)]
        speed_min: f64,
        #[arg(long, default_value_t = 16.0)]
        speed_max: f64,
    },
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long, default_value_t = 20)]
    pub cutoff: i64,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long = "n")]
    pub n: u32,
    /// Half-width of the band around the mean frequency ᾱ
    #[arg(long)]
    pub eps: f64,
    /// Override ᾱ [default: (n − 1)/π]
    #[arg(long)]
    pub alpha_bar: Option<f64>,
    /// Explicit geodesics as label:length:alpha (repeatable); without any,
    /// the prime antipodal geodesic of the metric is computed
    #[arg(long = "entry")]
    pub entries: Vec<String>,
    #[arg(long)]
    pub metric: Option<String>,
    /// Iterates used for the computed average index
    #[arg(long, default_value_t = 12)]
    pub iterates: usize,
}

fn effective_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(f) = g.format {
        cfg.format = f;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(t) = g.tol {
        cfg.shooting.tol = t;
    }
    if let Some(s) = g.steps_per_pi {
        cfg.shooting.steps_per_pi = s;
    }
    if let Some(m) = g.max_iterations {
        cfg.shooting.max_iterations = m;
    }
    Ok(cfg)
}

fn main() {
    let banner = render::banner();
    let cmd = Cli::command().version(banner.clone()).long_version(banner);
    let cli = match cmd.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        // help and version exit 0, parse errors exit 2
        Err(e) => e.exit(),
    };
    let code = match effective_config(&cli.global).and_then(|cfg| commands::dispatch(&cli.command, &cfg)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            for n in &out.notes {
                eprintln!("note: {}", n);
            }
            if out.passed {
                EXIT_PASS
            } else {
                EXIT_VERIFICATION_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    };
    std::process::exit(code);
}
