//! Command-line experiment runner.
//!
//! Exit status: `0` on success, `2` for configuration and parameter errors,
//! `3` for numerical failures, `4` for I/O errors.

pub mod config;
pub mod run;
pub mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{
    law_preset, parse_config, BudgetSpec, ExperimentConfig, ExperimentKind, FunctionalName, Grids, LawSpec, MarginalSpec,
    OutputFormat, OutputSpec, ScenarioName,
};
pub use run::{run_experiment, Report};

use crate::error::{Error, Result};
use crate::renewal::RenewalKind;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::InvalidParameter(_)
        | Error::UnknownTheorem(_)
        | Error::StandingAssumption(_)
        | Error::Coupling(_)
        | Error::Precondition(_)
        | Error::NotApplicable(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
        Error::Undefined(_)
        | Error::NoRoot(_)
        | Error::Quadrature { .. }
        | Error::Divergence(_)
        | Error::InsufficientSamples { .. } => EXIT_NUMERIC,
    }
}

#[derive(Debug, Parser)]
#[command(name = "prwlab", version, about = "Simulation and moment criteria for perturbed random walks")]
pub struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of simulated paths.
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    /// Steps simulated per path.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

/// Parameter overrides shared by the subcommands. Each flag takes a
/// comma-separated grid and replaces the configured one.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Named law used when the config has none: two-point, normal,
    /// exp-uniform, bernoulli-sieve.
    #[arg(long = "law", value_name = "PRESET")]
    pub law: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RenewalName {
    PlainU,
    LadderUGt,
    ExpV,
    PowerU,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trichotomy and moment criteria of a law.
    Classify(ParamArgs),
    /// Monte Carlo moments of a path functional.
    Moments {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        functional: Option<FunctionalName>,
    },
    /// Compares a criterion with its empirical verdict.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        theorem: Option<String>,
    },
    /// Shot-noise moments and criterion integrals.
    Shotnoise(ParamArgs),
    /// Renewal-function tables.
    Renewal {
        #[command(flatten)]
        params: ParamArgs,
        /// Renewal function; exp-v uses the first `a`, power-u the first `p`.
        #[arg(long, value_enum)]
        kind: Option<RenewalName>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Applied presets.
    Scenario {
        #[arg(value_enum)]
        name: Option<ScenarioName>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Classify(_) => ExperimentKind::Classify,
            Command::Moments { .. } => ExperimentKind::Moments,
            Command::Verify { .. } => ExperimentKind::Verify,
            Command::Shotnoise(_) => ExperimentKind::Shotnoise,
            Command::Renewal { .. } => ExperimentKind::Renewal,
            Command::Scenario { .. } => ExperimentKind::Scenario,
        }
    }

    fn params(&self) -> &ParamArgs {
        match self {
            Command::Classify(p) | Command::Shotnoise(p) => p,
            Command::Moments { params, .. }
            | Command::Verify { params, .. }
            | Command::Renewal { params, .. }
            | Command::Scenario { params, .. } => params,
        }
    }
}

fn replace(grid: &mut Vec<f64>, flag: &[f64]) {
    if !flag.is_empty() {
        *grid = flag.to_vec();
    }
}

/// Loads the config named on the command line (or the defaults) and applies
/// every flag on top of it.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.paths {
        cfg.budget.paths = n;
    }
    if let Some(h) = cli.horizon {
        cfg.budget.horizon = h;
    }
    if let Some(d) = &cli.out {
        cfg.output.dir = d.clone();
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    let p = cli.command.params();
    if let Some(name) = &p.law {
        cfg.law = Some(law_preset(name)?);
    }
    let g = &mut cfg.params;
    replace(&mut g.x, &p.x);
    replace(&mut g.a, &p.a);
    replace(&mut g.p, &p.p);
    replace(&mut g.t, &p.t);
    replace(&mut g.q, &p.q);
    replace(&mut g.c, &p.c);
    replace(&mut g.y, &p.y);
    match &cli.command {
        Command::Moments { functional: Some(f), .. } => cfg.functional = Some(*f),
        Command::Verify { theorem: Some(t), .. } => cfg.theorem = Some(t.clone()),
        Command::Scenario { name: Some(n), .. } => cfg.scenario = Some(*n),
        Command::Renewal { kind, n_max, .. } => {
            if let Some(n) = n_max {
                cfg.budget.n_max = *n;
            }
            if let Some(k) = kind {
                let first = |v: &[f64], name: &str| {
                    v.first().copied().ok_or_else(|| Error::Config {
                        path: format!("params.{name}"),
                        message: format!("{k:?} needs a value for `{name}`").to_lowercase(),
                    })
                };
                cfg.renewal = Some(match k {
                    RenewalName::PlainU => RenewalKind::PlainU,
                    RenewalName::LadderUGt => RenewalKind::LadderUGt,
                    RenewalName::ExpV => RenewalKind::ExpV { a: first(&cfg.params.a, "a")? },
                    RenewalName::PowerU => RenewalKind::PowerU { p: first(&cfg.params.p, "p")? },
                });
            }
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs a parsed command line and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = resolve_config(cli)?;
    let kind = cli.command.kind();
    log::info!("running {} with seed {}", kind.name(), cfg.seed);
    let report = match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("--threads: {e}")))?;
            pool.install(|| run_experiment(kind, &cfg))?
        }
        None => run_experiment(kind, &cfg)?,
    };
    report.write(&cfg.output.dir, cfg.output.format)
}

/// Process entry point; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("PRWLAB_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
