//! Experiment harness: executes strategies over scenario sweeps and
//! collects step-level metric records.
//!
//! Sweep cells run in parallel; determinism is preserved by deriving each
//! cell's RNG seed from `(master_seed, num_sbs, seed_index)` and sorting
//! results back into enumeration order. The derivation deliberately
//! ignores the load intensity, the QoS threshold, and the traffic kind,
//! so a fixed seed index sees identical shadowing across those axes and
//! per-seed curves are comparable point by point.

use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use vhetnet_cs_core::math::derive_seed;
use vhetnet_cs_core::metrics::MetricsRecord;
use vhetnet_cs_core::optimizer::NetworkState;
use vhetnet_cs_core::scenario::{
    CaseStudy, Point, ScenarioConfig, TrafficComponent, TrafficKind, TrafficModel,
};
use vhetnet_cs_core::strategies::{self, StrategyId, DEFAULT_ES_CAP};

use crate::config::ConfigFile;

/// Sweep axes and fixed context for one `run` invocation.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub case_study: CaseStudy,
    /// File-level overrides applied to every cell before the axis values.
    pub base: ConfigFile,
    /// Load intensities for the alpha families.
    pub alphas: Vec<f64>,
    /// QoS thresholds (dBm) for the P_min families.
    pub p_mins_dbm: Vec<f64>,
    /// Grid sizes for the scaling families; perfect squares.
    pub sbs_counts: Vec<usize>,
    pub strategies: Vec<StrategyId>,
    pub traffic_kinds: Vec<TrafficKind>,
    /// Seed indices 0..num_seeds are expanded per cell.
    pub num_seeds: u64,
    pub master_seed: u64,
    /// Report grid-side power and efficiency only (the HAPS is assumed
    /// off-grid).
    pub grid_only: bool,
}

/// Which axis a cell belongs to; fixes which CSV families it feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Alpha,
    PMin,
    SbsCount,
}

/// One unit of sweep work: a fully specified scenario and strategy for
/// one seed. Index fields locate the cell on its family's axes.
#[derive(Debug, Clone)]
pub struct CellJob {
    pub family: Family,
    pub kind_idx: usize,
    pub axis_idx: usize,
    pub strategy_idx: usize,
    pub seed_idx: u64,
    pub kind: TrafficKind,
    pub alpha: f64,
    pub p_min_dbm: f64,
    pub num_sbs: usize,
    pub strategy: StrategyId,
}

impl CellJob {
    /// Human-readable cell coordinates for failure reports.
    pub fn describe(&self) -> String {
        let axis = match self.family {
            Family::Alpha => format!("alpha={}", self.alpha),
            Family::PMin => format!("p_min_dbm={}", self.p_min_dbm),
            Family::SbsCount => format!("num_sbs={}", self.num_sbs),
        };
        format!(
            "{axis} traffic={} strategy={} seed={}",
            self.kind.as_str(),
            self.strategy.as_str(),
            self.seed_idx
        )
    }
}

/// A cell that could not be evaluated; the sweep continues without it.
#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub cell: String,
    pub error: String,
}

/// Everything run_sweep produced, for the manifest and the caller.
#[derive(Debug)]
pub struct SweepResults {
    pub jobs: Vec<CellJob>,
    /// Step-level records per job; empty for failed jobs.
    pub records: Vec<Vec<MetricsRecord>>,
    pub failures: Vec<CellFailure>,
    /// Exhaustive-search cells skipped because the grid exceeds its cap.
    pub skipped_es_cells: usize,
}

impl SweepSpec {
    /// Spec with the default publication axes for `case`, built on top of
    /// the scenario file overrides.
    pub fn defaults(case: CaseStudy, base: ConfigFile, master_seed: u64) -> SweepSpec {
        let base_kind = base
            .traffic
            .as_ref()
            .and_then(|t| t.kind.as_deref())
            .and_then(TrafficKind::parse)
            .unwrap_or(TrafficKind::Gaussian);
        SweepSpec {
            case_study: case,
            base,
            alphas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            p_mins_dbm: (0..=6).map(|i| -85.0 + 5.0 * i as f64).collect(),
            sbs_counts: vec![16, 25, 36, 49],
            strategies: vec![
                StrategyId::AllOn,
                StrategyId::Sorting,
                StrategyId::SortingQos,
                StrategyId::Terrestrial,
                StrategyId::HapsCs,
                StrategyId::HapsCsNoQos,
                StrategyId::ExhaustiveSearch,
            ],
            traffic_kinds: vec![base_kind],
            num_seeds: 50,
            master_seed,
            grid_only: false,
        }
    }

    fn validate(&self) -> Result<()> {
        anyhow::ensure!(!self.alphas.is_empty(), "alphas: empty sweep axis");
        anyhow::ensure!(!self.p_mins_dbm.is_empty(), "pmins: empty sweep axis");
        anyhow::ensure!(!self.sbs_counts.is_empty(), "sbs counts: empty sweep axis");
        anyhow::ensure!(!self.strategies.is_empty(), "strategies: empty list");
        anyhow::ensure!(!self.traffic_kinds.is_empty(), "traffic kinds: empty list");
        anyhow::ensure!(self.num_seeds > 0, "seeds: need at least one");
        for &a in &self.alphas {
            anyhow::ensure!((0.0..=1.0).contains(&a), "alpha {a} out of [0, 1]");
        }
        Ok(())
    }

    /// Baseline cell values taken from the resolved scenario: the P_min
    /// and alpha families hold the other axes here.
    fn base_config(&self) -> Result<ScenarioConfig> {
        self.base.resolve(self.case_study).context("resolving scenario")
    }

    /// Scenario for one cell. Axis values are applied on top of the
    /// resolved file; the cell seed depends only on the grid size and the
    /// seed index.
    pub fn cell_config(&self, job: &CellJob) -> Result<ScenarioConfig> {
        let mut file = self.base.clone();
        file.num_sbs = Some(job.num_sbs);
        let mut config = file.resolve(self.case_study)?;
        config.traffic = traffic_for_kind(&config.traffic, job.kind);
        config.traffic.alpha = job.alpha;
        config.p_min_dbm = job.p_min_dbm;
        config.rng_seed = derive_seed(self.master_seed, job.num_sbs as u64, job.seed_idx);
        config.validate()?;
        Ok(config)
    }

    /// All cells in deterministic enumeration order. Exhaustive-search
    /// cells beyond the strategy's grid cap are not emitted (the count of
    /// skips is reported separately); every other strategy runs on every
    /// cell.
    pub fn jobs(&self) -> (Vec<CellJob>, usize) {
        let base = self.base_config().ok();
        let base_alpha = base.as_ref().map_or(0.5, |c| c.traffic.alpha);
        let base_pmin = base.as_ref().map_or(-70.0, |c| c.p_min_dbm);
        let base_sbs = base.as_ref().map_or(49, |c| c.num_sbs());
        let base_kind = base.as_ref().map_or(TrafficKind::Gaussian, |c| c.traffic.kind);

        let mut jobs = Vec::new();
        let mut skipped = 0usize;
        let mut push = |job: CellJob| {
            if job.strategy == StrategyId::ExhaustiveSearch && job.num_sbs > DEFAULT_ES_CAP {
                skipped += 1;
            } else {
                jobs.push(job);
            }
        };

        for (kind_idx, &kind) in self.traffic_kinds.iter().enumerate() {
            for (axis_idx, &alpha) in self.alphas.iter().enumerate() {
                for (strategy_idx, &strategy) in self.strategies.iter().enumerate() {
                    for seed_idx in 0..self.num_seeds {
                        push(CellJob {
                            family: Family::Alpha,
                            kind_idx,
                            axis_idx,
                            strategy_idx,
                            seed_idx,
                            kind,
                            alpha,
                            p_min_dbm: base_pmin,
                            num_sbs: base_sbs,
                            strategy,
                        });
                    }
                }
            }
        }
        for (axis_idx, &p_min_dbm) in self.p_mins_dbm.iter().enumerate() {
            for (strategy_idx, &strategy) in self.strategies.iter().enumerate() {
                for seed_idx in 0..self.num_seeds {
                    push(CellJob {
                        family: Family::PMin,
                        kind_idx: 0,
                        axis_idx,
                        strategy_idx,
                        seed_idx,
                        kind: base_kind,
                        alpha: base_alpha,
                        p_min_dbm,
                        num_sbs: base_sbs,
                        strategy,
                    });
                }
            }
        }
        for (axis_idx, &num_sbs) in self.sbs_counts.iter().enumerate() {
            for (strategy_idx, &strategy) in self.strategies.iter().enumerate() {
                for seed_idx in 0..self.num_seeds {
                    push(CellJob {
                        family: Family::SbsCount,
                        kind_idx: 0,
                        axis_idx,
                        strategy_idx,
                        seed_idx,
                        kind: base_kind,
                        alpha: base_alpha,
                        p_min_dbm: base_pmin,
                        num_sbs,
                        strategy,
                    });
                }
            }
        }
        (jobs, skipped)
    }

    /// Runs every cell (in parallel) and collects records in enumeration
    /// order. A failing cell is recorded and skipped; only spec-level
    /// problems abort the sweep.
    pub fn execute(&self) -> Result<SweepResults> {
        self.validate()?;
        // Surface scenario-file problems once, up front, instead of as a
        // failure string on every cell.
        self.base_config()?;
        let (jobs, skipped_es_cells) = self.jobs();

        let mut outcomes: Vec<(usize, Result<Vec<MetricsRecord>>)> = jobs
            .par_iter()
            .enumerate()
            .map(|(i, job)| (i, self.execute_cell(job)))
            .collect();
        outcomes.sort_by_key(|(i, _)| *i);

        let mut records = Vec::with_capacity(jobs.len());
        let mut failures = Vec::new();
        for ((_, outcome), job) in outcomes.into_iter().zip(&jobs) {
            match outcome {
                Ok(recs) => records.push(recs),
                Err(err) => {
                    failures.push(CellFailure {
                        cell: job.describe(),
                        error: format!("{err:#}"),
                    });
                    records.push(Vec::new());
                }
            }
        }
        Ok(SweepResults { jobs, records, failures, skipped_es_cells })
    }

    fn execute_cell(&self, job: &CellJob) -> Result<Vec<MetricsRecord>> {
        let config = self.cell_config(job)?;
        let mut out = Vec::with_capacity(config.num_steps);
        for step in 0..config.num_steps {
            out.push(
                run_step(&config, step, job.strategy)
                    .with_context(|| format!("step {step}"))?,
            );
        }
        Ok(out)
    }
}

/// Generates the step's state, executes the strategy, and evaluates the
/// metrics. Deterministic in (config, step, strategy); the recorded solve
/// time is the wall clock around the strategy call only.
pub fn run_step(
    config: &ScenarioConfig,
    step: usize,
    strategy: StrategyId,
) -> Result<MetricsRecord> {
    let state = NetworkState::for_step(config, step)?;
    let profiles = config.network_profiles();
    let started = Instant::now();
    let mut solution = strategies::run(strategy, &state, &profiles)
        .with_context(|| format!("strategy {}", strategy.as_str()))?;
    solution.solve_time_s = started.elapsed().as_secs_f64();
    let record = MetricsRecord::compute(
        strategy,
        &solution,
        &state,
        &profiles,
        config.traffic.alpha,
        config.p_min_dbm,
        config.rng_seed,
    )?;
    Ok(record)
}

/// Canonical traffic model for a sweep kind, reusing the scenario's model
/// when the kind already matches.
fn traffic_for_kind(base: &TrafficModel, kind: TrafficKind) -> TrafficModel {
    if base.kind == kind {
        return base.clone();
    }
    let stddev = base.components.first().map_or(400.0, |c| c.stddev_m);
    let mean = base.components.first().map_or(Point::ORIGIN, |c| c.mean);
    let components = match kind {
        TrafficKind::Gaussian => vec![TrafficComponent { mean, stddev_m: stddev, weight: 1.0 }],
        // Two symmetric hotspots straddling the center.
        TrafficKind::GaussianMixture => vec![
            TrafficComponent {
                mean: Point::new(mean.x_m - 500.0, mean.y_m),
                stddev_m: stddev,
                weight: 0.5,
            },
            TrafficComponent {
                mean: Point::new(mean.x_m + 500.0, mean.y_m),
                stddev_m: stddev,
                weight: 0.5,
            },
        ],
        TrafficKind::Uniform => Vec::new(),
    };
    TrafficModel { kind, components, alpha: base.alpha, time_trace: Vec::new() }
}

/// One row of the snapshot table: where each SBS's users ended up.
#[derive(Debug, Clone)]
pub struct SnapshotRow {
    pub sbs_index: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub class: &'static str,
    pub load: f64,
    /// "on", "mbs", or "haps".
    pub status: &'static str,
    pub rx_mbs_dbm: f64,
    pub rx_haps_dbm: f64,
    pub d2d_clamped: bool,
}

/// Runs one strategy on one step and reports per-SBS status.
pub fn snapshot(
    config: &ScenarioConfig,
    step: usize,
    strategy: StrategyId,
) -> Result<(Vec<SnapshotRow>, MetricsRecord)> {
    use vhetnet_cs_core::optimizer::Association;
    use vhetnet_cs_core::units::mw_to_dbm;

    let state = NetworkState::for_step(config, step)?;
    let profiles = config.network_profiles();
    let started = Instant::now();
    let mut solution = strategies::run(strategy, &state, &profiles)?;
    solution.solve_time_s = started.elapsed().as_secs_f64();
    let record = MetricsRecord::compute(
        strategy,
        &solution,
        &state,
        &profiles,
        config.traffic.alpha,
        config.p_min_dbm,
        config.rng_seed,
    )?;

    let rows = (0..config.num_sbs())
        .map(|j| {
            let site = &config.layout.sbs[j];
            SnapshotRow {
                sbs_index: j,
                x_m: site.position.x_m,
                y_m: site.position.y_m,
                class: config.sbs_profile(j).class.as_str(),
                load: state.sbs_loads[j],
                status: match solution.assoc[j] {
                    Association::StaysOn => "on",
                    Association::ToMbs => "mbs",
                    Association::ToHaps => "haps",
                },
                rx_mbs_dbm: mw_to_dbm(state.p_r_mbs_mw[j]),
                rx_haps_dbm: mw_to_dbm(state.p_r_haps_mw[j]),
                d2d_clamped: state.clamped_sbs.contains(&j),
            }
        })
        .collect();
    Ok((rows, record))
}

/// One row of the link-budget table: both offload links for one SBS with
/// shadowing zeroed.
#[derive(Debug, Clone)]
pub struct LinkBudgetRow {
    pub sbs_index: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub d2d_mbs_m: f64,
    pub elevation_deg: f64,
    pub slant_m: f64,
    pub los_prob_mbs: f64,
    pub los_prob_haps: f64,
    pub pathloss_mbs_db: f64,
    pub pathloss_haps_db: f64,
    pub rx_mbs_dbm: f64,
    pub rx_haps_dbm: f64,
    pub d2d_clamped: bool,
}

/// Deterministic (zero-shadowing) link budgets for every SBS.
pub fn linkbudget(config: &ScenarioConfig) -> Result<Vec<LinkBudgetRow>> {
    use vhetnet_cs_core::channel::{
        elevation_angle_deg, los_probability_terrestrial, offload_received_powers,
        slant_distance_m, ShadowDraws, TERRESTRIAL_D2D_MIN_M,
    };
    use vhetnet_cs_core::units::mw_to_dbm;

    let zero = ShadowDraws {
        mbs_los_db: 0.0,
        mbs_nlos_db: 0.0,
        haps_los_db: 0.0,
        haps_nlos_db: 0.0,
    };
    let layout = &config.layout;
    let mut rows = Vec::with_capacity(config.num_sbs());
    for j in 0..config.num_sbs() {
        let site = &layout.sbs[j];
        let powers = offload_received_powers(config, j, &zero)
            .with_context(|| format!("sbs {j}"))?;
        let d2d_raw = site.position.distance_m(&layout.mbs_position);
        let d2d = if powers.d2d_clamped { TERRESTRIAL_D2D_MIN_M } else { d2d_raw };
        let ground = site.position.distance_m(&layout.haps_ground_position);
        let theta = elevation_angle_deg(ground, layout.haps_altitude_m);
        rows.push(LinkBudgetRow {
            sbs_index: j,
            x_m: site.position.x_m,
            y_m: site.position.y_m,
            d2d_mbs_m: d2d,
            elevation_deg: theta,
            slant_m: slant_distance_m(theta, layout.earth_radius_m, layout.haps_altitude_m),
            los_prob_mbs: los_probability_terrestrial(d2d),
            los_prob_haps: powers.haps.los_probability,
            pathloss_mbs_db: powers.mbs.pathloss_db,
            pathloss_haps_db: powers.haps.pathloss_db,
            rx_mbs_dbm: mw_to_dbm(powers.mbs.received_power_share_mw),
            rx_haps_dbm: mw_to_dbm(powers.haps.received_power_share_mw),
            d2d_clamped: powers.d2d_clamped,
        });
    }
    Ok(rows)
}
