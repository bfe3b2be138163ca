use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hbar_sim::config::load_config;
use hbar_sim::scenario::{emit_outputs, run_stage, RunReport, Stage};

#[derive(Parser)]
#[command(name = "hbar-sim", version, about = "Acceleration radiation from atoms falling into a black hole")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the infall geodesic and compare with the closed forms.
    Trajectory(Common),
    /// Excitation probabilities, numeric and closed form.
    Excite(Common),
    /// Evolve every mode from the vacuum to its thermal state.
    Evolve(Common),
    /// Entropy flux and entropy/area bookkeeping.
    Entropy(Common),
    /// Full pipeline with all checks.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. `--set atom.omega=[50,100]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; overrides `outputs.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn summarize(report: &RunReport) {
    let c = &report.checks;
    if let Some(v) = c.max_rel_diff {
        println!("max rel_diff numeric vs closed: {v:e} ({})", ok(c.rel_diff_ok));
    }
    if let Some(v) = c.max_steady_linf {
        println!("max steady-state L-inf error:   {v:e} ({})", ok(c.steady_ok));
    }
    if let Some(v) = c.entropy_area_residual {
        println!("entropy/area residual:          {v:e} ({})", ok(c.entropy_ok));
    }
    if let Some(t) = &report.trajectory {
        println!(
            "geodesic residual tau/t:        {:e} / {:e} ({})",
            t.max_residual_tau,
            t.max_residual_t,
            ok(c.trajectory_ok)
        );
    }
    if c.mode_errors > 0 {
        println!("modes with errors:              {}", c.mode_errors);
        for s in report
            .excitation
            .iter()
            .map(|e| &e.status)
            .chain(report.modes.iter().map(|m| &m.status))
            .filter(|s| *s != "ok")
        {
            println!("  {s}");
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, common) = match cli.command {
        Command::Trajectory(c) => (Stage::Trajectory, c),
        Command::Excite(c) => (Stage::Excite, c),
        Command::Evolve(c) => (Stage::Evolve, c),
        Command::Entropy(c) => (Stage::Entropy, c),
        Command::Report(c) => (Stage::Report, c),
    };
    let cfg = match load_config(&common.config, &common.set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    let report = match run_stage(&cfg, stage) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let dir = common
        .out
        .unwrap_or_else(|| PathBuf::from(&cfg.outputs.directory));
    match emit_outputs(&report, &cfg, &dir) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    summarize(&report);
    eprintln!("elapsed {:.2?}", start.elapsed());
    ExitCode::from(report.exit_code() as u8)
}
