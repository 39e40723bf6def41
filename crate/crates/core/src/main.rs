use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mhd2d::harness::{self, Suite};

#[derive(Parser)]
#[command(name = "mhd2d", version, about = "2D MHD with fractional dissipation: runs, sweeps and property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every (alpha, beta) point of a sweep spec.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the property suites: all, lp, inequalities or dynamics.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Continue from a checkpoint to the absolute time t_end.
    Resume {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long = "t-end")]
        t_end: f64,
        #[arg(long)]
        out: PathBuf,
        /// Step size and cadence; must agree with the checkpoint's parameters.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> mhd2d::Result<bool> {
    match command {
        Command::Run { config, out } => {
            let outcome = harness::cmd_run(&harness::parse_config(&config)?, &out)?;
            if let Some(reason) = &outcome.abort {
                eprintln!("run aborted: {reason}");
            }
            println!("{} samples, t = {}", outcome.records.len(), outcome.final_state.t);
            Ok(outcome.completed())
        }
        Command::Sweep { spec, out } => {
            let rows = harness::cmd_sweep(&harness::parse_sweep(&spec)?, &out)?;
            let failed = rows.iter().filter(|r| r.status != "completed").count();
            println!("{} points, {} failed", rows.len(), failed);
            Ok(failed == 0)
        }
        Command::Check { suite, seed, out } => {
            let report = harness::cmd_check(suite, seed, &out)?;
            for item in &report.items {
                println!("{} {}/{}: {}", if item.passed { "PASS" } else { "FAIL" }, item.suite, item.name, item.detail);
            }
            Ok(report.passed)
        }
        Command::Resume { checkpoint, t_end, out, config } => {
            let settings = config.map(|p| harness::parse_config(&p)).transpose()?;
            let outcome = harness::cmd_resume(&checkpoint, t_end, settings.as_ref(), &out)?;
            if let Some(reason) = &outcome.abort {
                eprintln!("run aborted: {reason}");
            }
            println!("{} samples, t = {}", outcome.records.len(), outcome.final_state.t);
            Ok(outcome.completed())
        }
    }
}
