//! Command-line driver: derivation, exact verification suites, family
//! sweeps, integration runs, closure evidence, and the B = C exploration.
//!
//! Exit codes: 0 success, 1 verification failure, 2 runtime/domain error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_config_file, Format, RunConfig, Spacing};

#[derive(Parser)]
#[command(name = "spincone", version, about = "Verification and exploration toolkit for parallel Spin(7)-structures on cones over 3-Sasakian 7-manifolds")]
struct Cli {
    /// Line-based `key = value` configuration file; CLI flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the governing first-order system from dΦ = 0 and print it.
    Derive(DeriveArgs),
    /// Run the exact verification suites and report a per-check verdict.
    Verify(VerifyArgs),
    /// Evaluate the closed-form family ḡ_α over an (α, r) grid.
    Family(FamilyArgs),
    /// Integrate the system from a seed or a family point.
    Integrate(IntegrateArgs),
    /// Closure evidence (dΦ, dΩ̄1..3) per α, with a holonomy label.
    CheckHolonomy(CheckHolonomyArgs),
    /// Integrate the B = C system from the small-orbit seed out to large t.
    ExploreAlc(ExploreAlcArgs),
}

#[derive(Args)]
struct DeriveArgs {
    /// Exit 0 only if the derived system matches the hardcoded one exactly.
    #[arg(long)]
    check: bool,
    /// Print the B = C specialization instead of the full system.
    #[arg(long)]
    bc_equal: bool,
    /// Print the nonzero degree-5 components of dΦ before solving.
    #[arg(long)]
    show_dphi: bool,
    /// Output format of the system (csv is not meaningful here).
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite: derivation, ansatz, f-identity, d-squared,
    /// horizontal-table.
    #[arg(long)]
    suite: Option<String>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Single family parameter; omitting it sweeps the whole grid.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_samples: Option<usize>,
    /// 'linear' or 'log'.
    #[arg(long)]
    r_spacing: Option<Spacing>,
    /// CSV destination; stdout when omitted.
    #[arg(long, short)]
    output: Option<String>,
    /// Print the JSON summary (smoothness limits + holonomy evidence).
    #[arg(long)]
    summary: bool,
    /// Write a gnuplot script next to the CSV.
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    /// Seed kind: 'symmetric' or 'bc-equal'.
    #[arg(long, conflicts_with_all = ["from_family_r", "state"])]
    seed: Option<String>,
    /// Family parameter (symmetric seed, family starts, holonomy checks).
    #[arg(long)]
    alpha: Option<f64>,
    /// bc-equal seed: −A2(0) = A3(0) = a.
    #[arg(long)]
    a: Option<f64>,
    /// bc-equal seed: B(0) = C(0) = b.
    #[arg(long)]
    b: Option<f64>,
    /// Series-start offset t = ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Start on the closed-form family at this radius (t set to 0).
    #[arg(long)]
    from_family_r: Option<f64>,
    /// Explicit initial state "t,A1,A2,A3,B,C".
    #[arg(long)]
    state: Option<String>,
    /// Right-hand sides: 'full' (default) or 'bc-equal'.
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Stop when |A2| reaches this value instead of a time.
    #[arg(long, conflicts_with = "t_end")]
    until_a2: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Trajectory CSV destination; stdout when omitted.
    #[arg(long, short)]
    output: Option<String>,
    /// Write a gnuplot script next to the CSV.
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct CheckHolonomyArgs {
    /// Single family parameter; omitting it sweeps the whole grid.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct ExploreAlcArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Trajectory CSV destination; omitted means no trajectory dump.
    #[arg(long, short)]
    output: Option<String>,
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = path {
        let map = parse_config_file(path)?;
        cfg.apply_file(&map)?;
    }
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let cfg = load_config(cli.config.as_ref())?;
    match cli.command {
        Command::Derive(args) => commands::derive(&args, &cfg),
        Command::Verify(args) => commands::verify(&args),
        Command::Family(args) => commands::family(&args, &cfg),
        Command::Integrate(args) => commands::integrate(&args, &cfg),
        Command::CheckHolonomy(args) => commands::check_holonomy(&args, &cfg),
        Command::ExploreAlc(args) => commands::explore_alc(&args, &cfg),
    }
}
