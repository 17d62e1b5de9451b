//! `vhetnet-cs`: sweep runner, per-SBS snapshots, and link-budget tables
//! for the HAPS cell-switching simulator.

use std::fs;
use std::io;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use vhetnet_cs_cli::config::ConfigFile;
use vhetnet_cs_cli::output;
use vhetnet_cs_cli::runner::{self, SweepSpec};
use vhetnet_cs_core::scenario::{CaseStudy, TrafficKind};
use vhetnet_cs_core::strategies::StrategyId;

#[derive(Parser)]
#[command(
    name = "vhetnet-cs",
    version,
    about = "Deterministic simulator and exact optimizer for HAPS-assisted cell switching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run parameter sweeps and write plot-ready CSVs plus a manifest.
    Run(RunArgs),
    /// Solve one step with one strategy and dump per-SBS status.
    Snapshot(SnapshotArgs),
    /// Print zero-shadowing link budgets for every SBS.
    Linkbudget(LinkBudgetArgs),
}

fn parse_case(s: &str) -> Result<CaseStudy, String> {
    CaseStudy::parse(s).ok_or_else(|| format!("expected A or B, got {s}"))
}

fn parse_strategy(s: &str) -> Result<StrategyId, String> {
    StrategyId::parse(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<TrafficKind, String> {
    TrafficKind::parse(s).ok_or_else(|| format!("expected gaussian, gmm2, or uniform, got {s}"))
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON overrides on top of the case-study preset).
    #[arg(long)]
    scenario: PathBuf,
    /// Case study; overrides the scenario file's choice.
    #[arg(long, value_parser = parse_case)]
    case: Option<CaseStudy>,
    /// Load intensities for the alpha sweep.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// QoS thresholds (dBm) for the P_min sweep, e.g. --pmins -85 -70 -55
    /// or --pmins=-85,-70,-55.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    pmins: Option<Vec<f64>>,
    /// Grid sizes (perfect squares) for the scaling sweep.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    sbs_counts: Option<Vec<usize>>,
    /// Strategies to run (all-on, sorting, sorting-qos, terrestrial,
    /// haps-cs, haps-cs-noqos, es).
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_strategy)]
    strategies: Option<Vec<StrategyId>>,
    /// Traffic kinds for the alpha sweep (gaussian, gmm2, uniform).
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_kind)]
    kinds: Option<Vec<TrafficKind>>,
    /// Number of seed indices per cell.
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    /// Master seed; defaults to the scenario's rng_seed.
    #[arg(long)]
    master_seed: Option<u64>,
    /// Report only grid-side power and efficiency (HAPS assumed off-grid).
    #[arg(long)]
    grid_only: bool,
    /// Output directory for CSVs and the manifest.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct SnapshotArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_parser = parse_strategy)]
    strategy: StrategyId,
    /// QoS threshold in dBm.
    #[arg(long, allow_negative_numbers = true)]
    pmin: f64,
    #[arg(long, value_parser = parse_case)]
    case: Option<CaseStudy>,
    /// Load intensity override.
    #[arg(long)]
    alpha: Option<f64>,
    /// RNG seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Time step to solve.
    #[arg(long, default_value_t = 0)]
    step: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LinkBudgetArgs {
    /// Scenario file; the case-study preset is used when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_parser = parse_case)]
    case: Option<CaseStudy>,
    /// Grid size override (perfect square).
    #[arg(long)]
    num_sbs: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Snapshot(args) => cmd_snapshot(args),
        Command::Linkbudget(args) => cmd_linkbudget(args),
    };
    if let Err(err) = result {
        let payload = serde_json::json!({ "error": format!("{err:#}") });
        eprintln!("{payload}");
        std::process::exit(1);
    }
}

/// Case precedence: --case flag, then the scenario file, then A.
fn effective_case(flag: Option<CaseStudy>, file: &ConfigFile) -> Result<CaseStudy> {
    Ok(match flag {
        Some(c) => c,
        None => file.case()?.unwrap_or(CaseStudy::A),
    })
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let file = ConfigFile::load(&args.scenario)?;
    let case = effective_case(args.case, &file)?;
    let base_config = file.resolve(case)?;
    let master_seed = args.master_seed.unwrap_or(base_config.rng_seed);

    let mut spec = SweepSpec::defaults(case, file, master_seed);
    spec.num_seeds = args.seeds;
    spec.grid_only = args.grid_only;
    if let Some(alphas) = args.alphas {
        spec.alphas = alphas;
    }
    if let Some(pmins) = args.pmins {
        spec.p_mins_dbm = pmins;
    }
    if let Some(counts) = args.sbs_counts {
        spec.sbs_counts = counts;
    }
    if let Some(strategies) = args.strategies {
        spec.strategies = strategies;
    }
    if let Some(kinds) = args.kinds {
        spec.traffic_kinds = kinds;
    }

    let results = spec.execute()?;
    let outputs = output::write_sweep_csvs(&spec, &results, &args.out)?;
    let manifest = output::write_manifest(&spec, &results, &base_config, &outputs, &args.out)?;

    let records: usize = results.records.iter().map(Vec::len).sum();
    println!(
        "wrote {} files to {} ({} records, {} failed cells, manifest {})",
        outputs.len(),
        args.out.display(),
        records,
        results.failures.len(),
        manifest.display()
    );
    for failure in &results.failures {
        eprintln!("cell failed: {}: {}", failure.cell, failure.error);
    }
    Ok(())
}

fn cmd_snapshot(args: SnapshotArgs) -> Result<()> {
    let file = ConfigFile::load(&args.scenario)?;
    let case = effective_case(args.case, &file)?;
    let mut config = file.resolve(case)?;
    config.p_min_dbm = args.pmin;
    if let Some(alpha) = args.alpha {
        config.traffic.alpha = alpha;
    }
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    config.validate()?;

    let (rows, record) = runner::snapshot(&config, args.step, args.strategy)?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            output::write_snapshot_csv(&rows, file)?;
        }
        None => output::write_snapshot_csv(&rows, io::stdout().lock())?,
    }
    eprintln!(
        "{}: {} off of {} SBSs, {:.1} W total ({:.1} W grid), traffic {:.2}",
        record.strategy.as_str(),
        record.num_off,
        record.num_sbs,
        record.total_power_w,
        record.grid_power_w,
        record.served_traffic_qos
    );
    Ok(())
}

fn cmd_linkbudget(args: LinkBudgetArgs) -> Result<()> {
    let mut file = match &args.scenario {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(n) = args.num_sbs {
        file.num_sbs = Some(n);
    }
    let case = effective_case(args.case, &file)?;
    let config = file.resolve(case)?;
    let rows = runner::linkbudget(&config)?;
    match &args.out {
        Some(path) => {
            let out = fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            output::write_linkbudget_csv(&rows, out)?;
        }
        None => output::write_linkbudget_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}
