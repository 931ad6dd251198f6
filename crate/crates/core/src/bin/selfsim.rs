use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use selfsim::engine::ExportFormat;
use selfsim::instances::{AnyInstance, InstanceConfig};
use selfsim::session::{self, AutomatonOutput};
use selfsim::verify::{Suite, VerifyOptions};
use selfsim::{Error, Result};

/// Self-similar group instances: decompositions, automata, verification, tameness.
///
/// Exit status: 0 success, 1 hypothesis failure, 2 verification failure,
/// 3 I/O, parse or usage error.
#[derive(Parser)]
#[command(name = "selfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a config and print the instance summary.
    Build { config: PathBuf },
    /// Decompose an element; with --depth, print its portrait.
    Decompose {
        config: PathBuf,
        expr: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Extract the state automaton of an element.
    Automaton {
        config: PathBuf,
        expr: String,
        #[arg(long, default_value_t = 64)]
        cap: usize,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: ExportFormat,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Expand each BFS level in parallel; output is identical.
        #[arg(long)]
        parallel: bool,
    },
    /// Run verification suites and print JSON results.
    Verify {
        config: PathBuf,
        /// core, borel, affine, lamplighter, wreath or tame; repeatable or
        /// comma-separated. Defaults to core plus the family suite.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Tameness and finiteness-type report for a lamplighter config.
    Tame { config: PathBuf },
}

fn parse_format(s: &str) -> std::result::Result<ExportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path) -> Result<(InstanceConfig, AnyInstance)> {
    let config = InstanceConfig::from_path(path)?;
    let inst = session::build_instance(&config)?;
    Ok((config, inst))
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build { config } => {
            let (cfg, inst) = load(&config)?;
            print_json(&session::summary(&cfg, &inst))?;
        }
        Command::Decompose { config, expr, depth } => {
            let (_, inst) = load(&config)?;
            print_json(&session::decompose_expr(&inst, &expr, depth)?)?;
        }
        Command::Automaton {
            config,
            expr,
            cap,
            format,
            output,
            parallel,
        } => {
            let (_, inst) = load(&config)?;
            match session::automaton_expr(&inst, &expr, cap, format, parallel)? {
                AutomatonOutput::Finite { text, states } => match output {
                    Some(path) => {
                        std::fs::write(&path, text)?;
                        eprintln!("{states} states written to {}", path.display());
                    }
                    None => emit(&text)?,
                },
                report @ AutomatonOutput::CapExceeded { .. } => print_json(&report)?,
            }
        }
        Command::Verify {
            config,
            suite,
            seed,
            pairs,
            depth,
            samples,
        } => {
            let (_, inst) = load(&config)?;
            let suites = if suite.is_empty() {
                session::default_suites(&inst)
            } else {
                suite.iter().map(|s| s.parse::<Suite>()).collect::<Result<_>>()?
            };
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                seed,
                pairs: pairs.unwrap_or(defaults.pairs),
                depth: depth.unwrap_or(defaults.depth),
                samples: samples.unwrap_or(defaults.samples),
                ..defaults
            };
            let reports = session::verify(&inst, &suites, &opts)?;
            print_json(&reports)?;
            if reports.iter().any(|r| !r.passed) {
                return Ok(2);
            }
        }
        Command::Tame { config } => {
            let (_, inst) = load(&config)?;
            print_json(&session::tame(&inst)?)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(session::exit_code(&e) as u8)
        }
    }
}
