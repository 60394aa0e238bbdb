//! Experiment runner for front propagation in degenerate monostable
//! reaction-diffusion equations with heavy-tailed initial data.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use frontspread_cli::config::Config;
use frontspread_cli::{artifacts, experiment, plots, sweep};

#[derive(Parser)]
#[command(
    name = "frontspread",
    version,
    about = "Simulation and verification toolkit for degenerate monostable fronts \
             with heavy-tailed initial data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Thread cap for concurrent work (sweep cells and grid updates).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Documents that every computation here is deterministic: there is no
    /// randomness to seed.  Accepted and ignored.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one configured problem and write its artifacts.
    Simulate {
        /// Config file (or a run.json to replay).
        #[arg(long)]
        config: PathBuf,
        /// Artifact directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write the long-form snapshots.csv next to snapshots.bin.
        #[arg(long)]
        snapshots_csv: bool,
    },
    /// Integrate and verify every comparison-function certificate that
    /// applies to the configured problem.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a phase-diagram sweep over (alpha, beta) cells.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Render SVG plots from the artifacts in a directory.
    Plot {
        /// Directory holding run.json/levelsets.csv or phase_diagram.csv.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(jobs) = cli.jobs {
        // The sweep builds its own scoped pool; this caps everything else.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match cli.cmd {
        Cmd::Simulate {
            config,
            out,
            snapshots_csv,
        } => {
            let cfg = Config::from_file(&config)?;
            let exp = experiment::experiment_from_config(&cfg)?;
            let (report, result) = experiment::simulate(&exp, cfg.raw())?;
            std::fs::create_dir_all(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            artifacts::write_run_json(&out, &report)?;
            artifacts::write_levelsets_csv(&out, &result)?;
            artifacts::write_snapshots_bin(&out, &result)?;
            if snapshots_csv {
                artifacts::write_snapshots_csv(&out, &result)?;
            }
            println!(
                "simulated to t = {} ({} snapshots, {} expansions); artifacts in {}",
                exp.solver.t_end,
                result.snapshots.len(),
                result.expansion_times.len(),
                out.display()
            );
            Ok(report.checks_passed)
        }
        Cmd::Certify { config, out } => {
            let cfg = Config::from_file(&config)?;
            let exp = experiment::experiment_from_config(&cfg)?;
            let (report, result) = experiment::certify(&exp, cfg.raw())?;
            std::fs::create_dir_all(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            artifacts::write_run_json(&out, &report)?;
            artifacts::write_certificates_json(&out, &report)?;
            artifacts::write_levelsets_csv(&out, &result)?;
            artifacts::write_snapshots_bin(&out, &result)?;
            for cert in &report.certificates {
                println!(
                    "certificate {}: {} (worst residual {:.3e} vs tolerance {:.1e}, {} samples)",
                    cert.id,
                    if cert.pass { "PASS" } else { "FAIL" },
                    cert.worst_residual,
                    cert.tolerance,
                    cert.samples
                );
            }
            if let Some(ordering) = &report.ordering {
                println!(
                    "ordering checks: {} (worst margins: sub {:.3e}, super {:.3e}, floor {:.3e})",
                    if ordering.pass { "PASS" } else { "FAIL" },
                    ordering.subsolution.worst,
                    ordering.supersolution.worst,
                    ordering.level_floor.worst
                );
            }
            Ok(report.checks_passed)
        }
        Cmd::Sweep { config, out } => {
            let cfg = Config::from_file(&config)?;
            sweep::run_sweep(&cfg, &out, cli.jobs)
        }
        Cmd::Plot { out } => plots::emit_plots(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
