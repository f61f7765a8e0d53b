//! `diracspec`: batch runner for transform checks, bound experiments and
//! Strichartz scans. Exit status 0 when every hard check passes, 1 on a
//! numerical failure, 2 on a bad configuration.

mod commands;
mod config;
mod output;
mod seed;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::output::{Outcome, RunInfo};

#[derive(Debug, Parser)]
#[command(name = "diracspec", version, about = "Spectral simulator and estimate workbench for massive Dirac operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment config; omitted means an empty document.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output root; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Root seed; overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evolve a datum and write flow snapshots.
    Evolve,
    /// Forward and inverse transforms with an isometry report.
    Transform,
    /// Eigen-residuals, round trips, diagonalization and conservation.
    Verify,
    /// Dyadic Bessel norms against their power laws.
    BenchBessel,
    /// Coulomb radial functions against the sector bounds.
    BenchDcBounds,
    /// Frequency-localized kernels and the frequency constant.
    BenchLocalized,
    /// Strichartz ratios over a dyadic data family.
    ScanStrichartz,
    /// Admissibility boundary tables.
    Region,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Transform => "transform",
            Command::Verify => "verify",
            Command::BenchBessel => "bench-bessel",
            Command::BenchDcBounds => "bench-dc-bounds",
            Command::BenchLocalized => "bench-localized",
            Command::ScanStrichartz => "scan-strichartz",
            Command::Region => "region",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => String::new(),
    };
    let mut cfg = match Config::parse(&text, cli.command) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("error: {} schema violation(s)", errors.len());
            for e in &errors {
                eprintln!("  {e}");
            }
            return ExitCode::from(2);
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(dir) = cli.out {
        cfg.output_dir = dir;
    }
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start {n} worker threads");
            return ExitCode::from(2);
        }
    }

    let (outcome, error) = match commands::run(&cfg) {
        Ok(o) => (o, None),
        Err(e) => (Outcome::default(), Some(e.to_string())),
    };
    let info = RunInfo {
        subcommand: cli.command.name(),
        seed: cfg.seed,
        config: &cfg.text,
    };
    let manifest = match output::write_run(&cfg.output_dir, &info, &outcome, error.as_deref()) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot write artifacts under {}: {e}", cfg.output_dir.display());
            return ExitCode::from(1);
        }
    };

    if let Some(e) = &error {
        eprintln!("numerical failure: {e}");
    }
    for c in outcome.checks.iter().filter(|c| !c.passed) {
        let kind = if c.hard { "FAIL" } else { "soft" };
        println!("{kind} {}: {:.3e} (threshold {:.3e}) {}", c.name, c.value, c.threshold, c.detail);
    }
    let hard = outcome.checks.iter().filter(|c| c.hard).count();
    let failed = outcome.hard_failures().count();
    println!("{}: {} of {hard} hard checks passed; manifest {}", info.subcommand, hard - failed, manifest.display());
    if error.is_some() || failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
