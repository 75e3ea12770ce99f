//! Batch front end for the bound-entanglement workbench.
//!
//! Subcommands: `state`, `bell`, `ppt`, `commsim`, `sweep`. Reports go to
//! standard output (JSON by default, CSV with `--format csv`), diagnostics to
//! standard error. Exit codes: 0 on success, 2 on usage or validation errors,
//! 3 on internal numerical-consistency failures. Randomized runs require an
//! explicit `--seed` and replay byte-identically.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};
use commands::Format;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "boundbell", version, about = "Four-qubit bound entanglement workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a state and summarize its spectrum
    State(StateArgs),
    /// Evaluate a two-setting Bell inequality for a state
    Bell(BellArgs),
    /// Partial-transpose eigenvalues across bipartite cuts, or the
    /// entanglement threshold of one cut
    Ppt(PptArgs),
    /// The communication game: exact values and seeded Monte Carlo rounds
    Commsim(CommsimArgs),
    /// Tabulate Bell, PPT, and game quantities over a noise range
    Sweep(SweepArgs),
}

#[derive(Args)]
struct StateArgs {
    /// State family: smolin | noisy-smolin | werner | ghz
    #[arg(long)]
    name: String,
    /// Mixing parameter (required for noisy-smolin and werner)
    #[arg(long)]
    p: Option<f64>,
    /// Qubit count for ghz
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Include the full matrix entries in the report
    #[arg(long)]
    matrix: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct BellArgs {
    /// State family: smolin | noisy-smolin | werner | ghz
    #[arg(long)]
    state: String,
    /// Mixing parameter where the family needs one
    #[arg(long)]
    p: Option<f64>,
    /// Inequality: nbella | wwzb-signb | chsh (auto picks by qubit count)
    #[arg(long, default_value = "auto")]
    inequality: String,
    /// Search for maximizing settings instead of using the built-in ones
    #[arg(long)]
    optimize: bool,
    /// Random restarts for the optimizer
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// RNG seed (required with --optimize)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct PptArgs {
    /// State family: smolin | noisy-smolin (scan) or noisy-smolin | werner
    /// (threshold)
    #[arg(long, default_value = "noisy-smolin")]
    state: String,
    /// Mixing parameter for the scan
    #[arg(long)]
    p: Option<f64>,
    /// Locate the sign change of the minimal eigenvalue by bisection
    #[arg(long)]
    threshold: bool,
    /// Cut label, e.g. A or AB
    #[arg(long)]
    cut: Option<String>,
    /// Lower bracket for the threshold search
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Upper bracket for the threshold search
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct CommsimArgs {
    /// Noise parameter of the shared state
    #[arg(long)]
    p: f64,
    /// Report only the exact probabilities, no simulation
    #[arg(long, conflicts_with_all = ["trials", "seed", "workers"])]
    exact_only: bool,
    /// Monte Carlo rounds
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed (required for simulation)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; the estimate is identical for any count
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Columns: all | bell | ppt | commsim
    #[arg(long, default_value = "all")]
    quantity: String,
    #[arg(long = "p-lo", default_value_t = 0.0)]
    p_lo: f64,
    #[arg(long = "p-hi", default_value_t = 1.0)]
    p_hi: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::State(a) => commands::cmd_state(&a.name, a.p, a.n, a.matrix, a.format),
        Command::Bell(a) => commands::cmd_bell(
            &a.state,
            a.p,
            &a.inequality,
            a.optimize,
            a.restarts,
            a.seed,
            a.format,
        ),
        Command::Ppt(a) => commands::cmd_ppt(
            &a.state,
            a.p,
            a.threshold,
            a.cut.as_deref(),
            a.lo,
            a.hi,
            a.format,
        ),
        Command::Commsim(a) => {
            commands::cmd_commsim(a.p, a.exact_only, a.trials, a.seed, a.workers, a.format)
        }
        Command::Sweep(a) => commands::cmd_sweep(&a.quantity, a.p_lo, a.p_hi, a.step, a.format),
    };
    match outcome {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("boundbell: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
