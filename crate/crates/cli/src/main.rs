//! `diplab`: runs protocol sessions, attacks and the distinguisher experiment
//! and writes JSON reports.
//!
//! Exit codes: 0 when every checked claim passes, 1 when a claim fails,
//! 2 on a usage or configuration error.

mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diplab::Modulus;
use serde::Serialize;

use commands::{Claim, Report};

#[derive(Debug, Parser)]
#[command(
    name = "diplab",
    version,
    about = "Distributed inner product protocol lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one honest session and print its transcript.
    Run(Common),
    /// Recover P1's input from P2's views.
    Attack {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "scalar")]
        mode: Mode,
    },
    /// Measure real-vs-simulated distinguishing advantage.
    Distinguish(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    /// k = 1 sessions, one equation each
    Scalar,
    /// k sessions composed into a shared vector-by-matrix product
    Vecmat,
}

#[derive(Debug, Args)]
struct Common {
    /// Field modulus (prime below 2^31).
    #[arg(long, default_value_t = 101)]
    q: u64,
    /// Vector length.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, env = "DIPLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 = one per core. Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Common {
    fn validate(&self) -> Result<Modulus, String> {
        let q = Modulus::new(self.q).map_err(|e| e.to_string())?;
        if self.k == 0 {
            return Err("--k must be at least 1".into());
        }
        if self.trials == 0 {
            return Err("--trials must be at least 1".into());
        }
        Ok(q)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Run(c) | Command::Distinguish(c) | Command::Attack { common: c, .. } => c,
    };
    let q = match common.validate() {
        Ok(q) => q,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Common {
        k,
        trials,
        seed,
        threads,
        ..
    } = *common;

    let started = Instant::now();
    let emitted = match cli.command {
        Command::Run(_) => emit(commands::run(q, k, seed), common),
        Command::Attack {
            mode: Mode::Scalar, ..
        } => emit(commands::attack_scalar(q, trials, seed, threads), common),
        Command::Attack {
            mode: Mode::Vecmat, ..
        } => emit(commands::attack_vecmat(q, k, trials, seed, threads), common),
        Command::Distinguish(_) => emit(commands::distinguish(q, k, trials, seed, threads), common),
    };
    match emitted {
        Ok(pass) => {
            eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes the report and a one-line-per-claim summary; returns whether all claims passed.
fn emit<R: Serialize>(report: Report<R>, common: &Common) -> std::io::Result<bool> {
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    match &common.out {
        Some(path) => fs::write(path, &json)?,
        None => std::io::stdout().lock().write_all(json.as_bytes())?,
    }
    for Claim { name, check } in &report.claims {
        eprintln!(
            "[{}] {name}: observed {:.6}, expected {:.6} (bounds {:.6}..{:.6})",
            if check.pass { "pass" } else { "FAIL" },
            check.observed,
            check.expected,
            check.lower,
            check.upper
        );
    }
    Ok(report.pass)
}
