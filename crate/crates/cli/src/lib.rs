//! Command-line front end: scenario files in, CSV tables out.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Reduced,
    Oracle,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "kerrq", version, about = "Qubit spectroscopy through a driven Kerr resonator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file (.toml, or .json for the JSON mirror).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Engine::Reduced)]
    pub engine: Engine,
    /// Output directory; defaults to the scenario's `output`, else `.`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointer-state fields over the pump amplitude axis.
    Fields,
    /// Qubit spectrum and fitted peaks per pump amplitude.
    Spectrum,
    /// Bistability regions over (Ω/Ω_C, ε_p).
    Stability,
    /// Largest pull for which linear response holds, over Ω/Ω_C.
    Validity,
    /// Column-wise differences between two CSV files or output directories.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Model(#[from] kerrq::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Model(kerrq::Error::InvalidParameter { .. }) => 2,
            CliError::Model(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

/// Exit status of a completed run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_BREAKDOWN: i32 = 4;

fn needs_reduced(cmd: &str, engine: Engine) -> Result<(), CliError> {
    if engine == Engine::Reduced {
        Ok(())
    } else {
        Err(CliError::Usage(format!("`{cmd}` has only the reduced engine")))
    }
}

/// Runs one invocation; returns the exit code, printing errors and warnings
/// to stderr.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    if let Command::Compare { a, b } = &cli.command {
        if let Some(d) = &cli.out {
            create_dir(d)?;
        }
        let (_, diffs) = commands::compare(a, b, cli.out.as_deref())?;
        println!("file,column,max_abs_diff,max_rel_diff,text_mismatches");
        for (f, d) in diffs {
            println!(
                "{f},{},{},{},{}",
                d.column,
                output::format_f64(d.max_abs),
                output::format_f64(d.max_rel),
                d.text_mismatches
            );
        }
        return Ok(EXIT_OK);
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let scenario = config::load(path)?;
    let out = cli
        .out
        .clone()
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    create_dir(&out)?;
    let report = match cli.command {
        Command::Fields => {
            needs_reduced("fields", cli.engine)?;
            commands::fields(&scenario, &out)?
        }
        Command::Spectrum => commands::spectrum(&scenario, cli.engine, &out)?,
        Command::Stability => {
            needs_reduced("stability", cli.engine)?;
            commands::stability(&scenario, &out)?
        }
        Command::Validity => {
            needs_reduced("validity", cli.engine)?;
            commands::validity(&scenario, &out)?
        }
        Command::Compare { .. } => unreachable!(),
    };
    for p in &report.written {
        log::info!("wrote {}", p.display());
    }
    if report.breakdown.is_empty() {
        Ok(EXIT_OK)
    } else {
        for w in report.breakdown.iter().take(3) {
            eprintln!("warning: reduced model outside its validity: {w}");
        }
        if report.breakdown.len() > 3 {
            eprintln!("warning: ... and {} more points outside its validity", report.breakdown.len() - 3);
        }
        Ok(EXIT_BREAKDOWN)
    }
}

fn create_dir(d: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))
}
