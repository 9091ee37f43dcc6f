//! Command-line front end: configuration files in, CSV or JSON out.
//!
//! Exit codes: 0 success, 1 a verification ran and failed, 2 configuration
//! error, 3 numerical failure, 4 inconclusive verification. Failures also
//! print a one-line JSON trailer on stderr.

pub mod config;
pub mod output;
pub mod run;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{load_config, parse_config, validate, ExperimentConfig, OutputFormat, Task};
pub use run::{error_trailer, run, RunOptions, RunOutput, SPECIAL_FUNCTIONS};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "qws", version, about = "Radial scattering and bound states in q dimensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Experiment configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file (default: [output] path, else stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format, overriding the configuration.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    pub format: Option<String>,

    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "QWS_THREADS")]
    pub threads: Option<usize>,

    /// Omit the metadata block so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_metadata: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Γ, J, Y, I or K at one point.
    EvalSpecial {
        #[arg(long, value_parser = SPECIAL_FUNCTIONS.to_vec())]
        function: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
    },
    /// Regular, irregular or Jost solution on a radial grid.
    Solve,
    /// Phase shifts over a k-grid.
    PhaseShift,
    /// Wronskian constancy audit.
    WronskianAudit,
    /// Bound-state energies.
    BoundStates,
    /// Levinson-theorem check with the crossing staircase.
    Levinson {
        /// Where to write the staircase CSV.
        #[arg(long)]
        staircase: Option<PathBuf>,
    },
    /// Sign and size of the matching-function slopes below threshold.
    SturmCheck,
}

impl Command {
    fn task(&self) -> Task {
        match self {
            Command::EvalSpecial { .. } => Task::EvalSpecial,
            Command::Solve => Task::Solve,
            Command::PhaseShift => Task::PhaseShift,
            Command::WronskianAudit => Task::WronskianAudit,
            Command::BoundStates => Task::BoundStates,
            Command::Levinson { .. } => Task::Levinson,
            Command::SturmCheck => Task::SturmCheck,
        }
    }
}

fn config_for(cli: &Cli) -> Result<ExperimentConfig> {
    let task = cli.command.task();
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => match &cli.command {
            Command::EvalSpecial { .. } => parse_config("version = 1\ntask = eval-special\n", &PathBuf::new())?,
            _ => return Err(Error::Config(format!("{task} needs --config"))),
        },
    };
    if cfg.task != task {
        return Err(Error::Config(format!("config declares task '{}' but the subcommand is '{task}'", cfg.task)));
    }
    if let Command::EvalSpecial { function, nu, x } = &cli.command {
        if function.is_some() {
            cfg.special.function = function.clone();
        }
        if nu.is_some() {
            cfg.special.nu = *nu;
        }
        if x.is_some() {
            cfg.special.x = *x;
        }
    }
    Ok(cfg)
}

fn write_to(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<Option<bool>> {
    let threads = cli.threads.unwrap_or(0);
    if threads > 0 {
        // fails only if the pool already exists, e.g. when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let cfg = config_for(cli)?;
    let opts = RunOptions {
        format: cli.format.as_deref().and_then(OutputFormat::parse),
        no_metadata: cli.no_metadata,
        threads: rayon::current_num_threads(),
        staircase: match &cli.command {
            Command::Levinson { staircase } => staircase.clone(),
            _ => None,
        },
    };
    let out = run(&cfg, &opts)?;
    let target = cli.out.clone().or_else(|| cfg.output.path.clone());
    write_to(target.as_ref(), &out.primary)?;
    for (path, text) in &out.extra {
        write_to(Some(path), text)?;
    }
    Ok(out.verified)
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(Some(false)) => 1,
        Ok(_) => 0,
        Err(e) => {
            eprintln!("qws: {e}");
            eprintln!("{}", error_trailer(&e));
            e.category().exit_code()
        }
    }
}
