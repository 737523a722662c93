mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use skewprod::families::Family;
use skewprod::marked::Flavor;
use thiserror::Error;

use config::{RunConfig, Span};

/// Exit codes: 0 clean, 1 usage or config, 2 resource bound, 3 mathematical
/// finding.
#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource bound: {0}")]
    Resource(String),
    #[error("finding: {0}")]
    Finding(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Finding(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "skewprod",
    version,
    about = "Skew product census and classification runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// TOML or JSON file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    flavor: Option<Flavor>,
    #[arg(long, global = true)]
    family: Option<Family>,
    /// Single value or inclusive range such as 2-12.
    #[arg(long, global = true)]
    n: Option<Span>,
    #[arg(long, global = true)]
    m: Option<Span>,
    /// Largest |X|: the oracle bound for oracle, crosscheck and verify runs,
    /// the construct bound for params and build.
    #[arg(long, global = true)]
    bound: Option<usize>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Input census (JSON lines) or tuple file (JSON array or lines).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// CSV summary path for classify and verify.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// List valid parameter tuples as JSON.
    Params,
    /// Construct groups from tuples and write a census.
    Build,
    /// Classify every record of a census.
    Classify {
        /// Look up the first family tuple isomorphic to each core-free group.
        #[arg(long)]
        match_family: bool,
    },
    /// Enumerate skew products and write a census.
    Oracle,
    /// Compare oracle and family class sets.
    Crosscheck,
    /// Check the centralizer and normality claims on a census.
    Verify,
    /// Print a human-readable summary of a census.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Params => "params",
            Command::Build => "build",
            Command::Classify { .. } => "classify",
            Command::Oracle => "oracle",
            Command::Crosscheck => "crosscheck",
            Command::Verify => "verify",
            Command::Report => "report",
        }
    }

    fn from_name(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "params" => Command::Params,
            "build" => Command::Build,
            "classify" => Command::Classify {
                match_family: false,
            },
            "oracle" => Command::Oracle,
            "crosscheck" => Command::Crosscheck,
            "verify" => Command::Verify,
            "report" => Command::Report,
            other => return Err(CliError::Usage(format!("unknown command {other:?}"))),
        })
    }

    fn uses_construct_bound(self) -> bool {
        matches!(self, Command::Params | Command::Build)
    }
}

fn resolve(cli: Cli) -> Result<(Command, RunConfig), CliError> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let command = match (cli.command, &file.command) {
        (Some(c), _) => c,
        (None, Some(name)) => Command::from_name(name)?,
        (None, None) => return Err(CliError::Usage("no command given".into())),
    };
    let mut flags = RunConfig {
        command: Some(command.name().to_string()),
        flavor: cli.flavor,
        family: cli.family,
        n: cli.n,
        m: cli.m,
        input: cli.input,
        out: cli.out,
        csv: cli.csv,
        workers: cli.workers,
        ..RunConfig::default()
    };
    if let Some(b) = cli.bound {
        if command.uses_construct_bound() {
            flags.construct_bound = Some(b);
        } else {
            flags.oracle_bound = Some(b);
        }
    }
    let mut cfg = file.merged(flags);
    // A lone --bound above the default construct bound lifts it too.
    if cfg.construct_bound.is_none() && cfg.oracle_bound() > cfg.construct_bound() {
        cfg.construct_bound = cfg.oracle_bound;
    }
    cfg.check()?;
    Ok((command, cfg))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, cfg) = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match command {
        Command::Params => commands::params(&cfg),
        Command::Build => commands::build(&cfg),
        Command::Classify { match_family } => commands::classify(&cfg, match_family),
        Command::Oracle => commands::oracle(&cfg),
        Command::Crosscheck => commands::crosscheck(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Report => commands::report(&cfg),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
