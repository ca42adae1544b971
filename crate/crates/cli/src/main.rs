//! `vho` — pick the best handoff channel for a scenario.
//!
//! Subcommands: `rank` prints the deterministic oracle ranking, `run`
//! executes one seeded colony run, `sweep` repeats the run over a range of
//! ant counts. Exit codes: 0 success, 1 output failure, 2 input error,
//! 3 non-convergence, 4 no feasible channel.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vho_aco::scenario::{load_scenario, Scenario};
use vho_aco::sweep::{run_sweep, scenario_graph, SweepReport};
use vho_aco::trace::{emit_convergence_summary, emit_trace_csv, format_decimal};
use vho_aco::{aco, criteria, Error};

const EXIT_OK: u8 = 0;
const EXIT_OUTPUT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_NO_FEASIBLE: u8 = 4;

#[derive(Parser)]
#[command(name = "vho", version, about = "Multi-criteria ant colony channel selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the oracle ranking of the scenario's channels.
    Rank(RankArgs),
    /// Run the colony once and report the winning channel.
    Run(RunArgs),
    /// Run the colony once per ant count and summarize convergence.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RankArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Override the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the iteration trace CSV here.
    #[arg(long, value_name = "PATH")]
    trace_out: Option<PathBuf>,
    /// Suppress non-essential output (wall time).
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Override the scenario's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated ant counts, strictly increasing (default 3,4,5,6,7,8).
    #[arg(long, value_delimiter = ',', value_name = "N,..")]
    ants: Option<Vec<u32>>,
    /// Write the summary CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Directory for per-ant-count trace CSVs (trace-ants<N>.csv).
    #[arg(long, value_name = "DIR")]
    trace_out: Option<PathBuf>,
    /// Suppress non-essential output.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Rank(args) => cmd_rank(&args),
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    ExitCode::from(code)
}

/// Input-side failures (anything the user can fix in the scenario or the
/// invocation) exit 2; a run that finds every channel unavailable exits 4.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NoFeasibleChannel => EXIT_NO_FEASIBLE,
        _ => EXIT_INPUT,
    }
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    EXIT_INPUT
}

fn load(path: &Path) -> Result<Scenario, u8> {
    load_scenario(path).map_err(|err| fail(&err))
}

fn cmd_rank(args: &RankArgs) -> u8 {
    let scenario = match load(&args.scenario) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let ranking = match scenario_graph(&scenario)
        .and_then(|graph| criteria::oracle_rank(&graph, &scenario.criteria))
    {
        Ok(r) => r,
        Err(err) => return fail(&err),
    };
    println!("{:<16} {:>16} {:>10}", "channel", "score", "available");
    for row in &ranking {
        println!(
            "{:<16} {:>16} {:>10}",
            row.channel,
            format_decimal(row.score),
            if row.available { "yes" } else { "excluded" },
        );
    }
    EXIT_OK
}

fn cmd_run(args: &RunArgs) -> u8 {
    let mut scenario = match load(&args.scenario) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(seed) = args.seed {
        scenario.aco.seed = seed;
    }
    let report = match scenario_graph(&scenario)
        .and_then(|graph| aco::run_until_convergence(&graph, &scenario.criteria, &scenario.aco))
    {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_code_for(&err);
        }
    };

    if let Some(path) = &args.trace_out {
        if let Err(err) = write_file(path, |w| emit_trace_csv(&report, w)) {
            eprintln!("error: cannot write trace to `{}`: {err}", path.display());
            return EXIT_OUTPUT;
        }
    }

    match (&report.winner, report.converged_at) {
        (Some(winner), Some(at)) => {
            println!("winner: {winner}");
            println!("converged_at: {at}");
            if !args.quiet {
                println!("wall_time_ms: {:.3}", report.wall_time.as_secs_f64() * 1e3);
            }
            EXIT_OK
        }
        _ => {
            println!("winner: none");
            println!("converged_at: none");
            eprintln!(
                "did not converge within {} iterations",
                report.params.max_iterations
            );
            EXIT_NO_CONVERGENCE
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> u8 {
    let mut scenario = match load(&args.scenario) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(seed) = args.seed {
        scenario.aco.seed = seed;
    }
    let ant_counts = args.ants.clone().unwrap_or_else(|| (3..=8).collect());

    let sweep = match run_sweep(&scenario, &ant_counts) {
        Ok(s) => s,
        Err(err) => return fail(&err),
    };

    if let Some(dir) = &args.trace_out {
        if let Err(err) = write_entry_traces(&sweep, dir) {
            eprintln!(
                "error: cannot write traces under `{}`: {err}",
                dir.display()
            );
            return EXIT_OUTPUT;
        }
    }

    let emitted = match &args.out {
        Some(path) => write_file(path, |w| emit_convergence_summary(&sweep, w)).map(|()| {
            if !args.quiet {
                eprintln!("summary written to {}", path.display());
            }
        }),
        None => emit_convergence_summary(&sweep, io::stdout().lock()),
    };
    if let Err(err) = emitted {
        eprintln!("error: cannot write summary: {err}");
        return EXIT_OUTPUT;
    }

    for entry in &sweep.entries {
        if let Some(message) = &entry.error {
            eprintln!("ant_count {}: {message}", entry.ant_count);
        }
    }
    if sweep.all_converged() {
        EXIT_OK
    } else {
        EXIT_NO_CONVERGENCE
    }
}

fn write_file(path: &Path, emit: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> io::Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    emit(&mut writer)?;
    writer.flush()
}

fn write_entry_traces(sweep: &SweepReport, dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for entry in &sweep.entries {
        if let Some(report) = &entry.report {
            let path = dir.join(format!("trace-ants{}.csv", entry.ant_count));
            write_file(&path, |w| emit_trace_csv(report, w))?;
        }
    }
    Ok(())
}
