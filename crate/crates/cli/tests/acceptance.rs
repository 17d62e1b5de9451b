//! Acceptance gate: ten end-to-end criteria, one test each, printing one
//! pass/fail line per criterion (run with `--nocapture` to see the lines
//! for passing tests). Tolerances are pinned as constants next to each
//! criterion.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use vhetnet_cs_cli::config::ConfigFile;
use vhetnet_cs_cli::runner::{run_step, Family, SweepSpec};
use vhetnet_cs_core::channel;
use vhetnet_cs_core::math::{derive_seed, exact_sum};
use vhetnet_cs_core::metrics::MetricsRecord;
use vhetnet_cs_core::optimizer::{
    build_mip, haps_enhanced_cs, Association, NetworkState, Solution,
};
use vhetnet_cs_core::scenario::{BsClass, BsProfile, CaseStudy, NetworkProfiles};
use vhetnet_cs_core::strategies::{exhaustive_search, StrategyId};

/// Criterion 1: remaining power fractions for the QoS solver.
const C1_MAX_RATIO_ALPHA_01: f64 = 0.30;
const C1_MAX_RATIO_ALPHA_09: f64 = 0.67;
const C1_WALL_BUDGET_S: f64 = 300.0;
/// Criterion 2: remaining power fractions without the QoS constraint.
const C2_MAX_RATIO_ALPHA_01: f64 = 0.17;
const C2_MAX_RATIO_ALPHA_09: f64 = 0.60;
/// Criterion 3: solver vs exhaustive search, absolute watts.
const C3_POWER_TOL_W: f64 = 1e-6;
const C3_SEEDS: [u64; 3] = [0, 1, 2];
/// Criterion 5: relative gap to the unconstrained solver at loose
/// thresholds.
const C5_LOW_PMIN_REL_TOL: f64 = 0.01;
/// Criterion 7: branch-and-bound vs full enumeration, absolute watts.
const C7_OBJ_TOL_W: f64 = 1e-9;
const C7_INSTANCES: usize = 200;
/// Criterion 9: solve-time budget for the full 49-cell grid.
const C9_MEDIAN_BUDGET_S: f64 = 1.0;
/// Criterion 10: channel golden values.
const C10_BREAKPOINT_M: f64 = 400.28;
const C10_BREAKPOINT_TOL_M: f64 = 1e-2;
const C10_FSPL_DB: f64 = 126.48;
const C10_FSPL_TOL_DB: f64 = 0.01;

fn report(number: u32, name: &str, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("criterion {number} ({name}): PASS - {detail}");
    } else {
        let joined = failures.join("; ");
        println!("criterion {number} ({name}): FAIL - {joined}");
        panic!("criterion {number} ({name}) failed: {joined}");
    }
}

/// Shared case A sweep over the default scenario: 49 SBSs, Gaussian
/// hotspot, 50 seeds, the four strategies the power criteria compare.
struct CaseASweep {
    spec: SweepSpec,
    index: BTreeMap<(u8, usize, usize, u64), MetricsRecord>,
    wall_s: f64,
}

const CASE_A_STRATEGIES: [StrategyId; 4] = [
    StrategyId::AllOn,
    StrategyId::Terrestrial,
    StrategyId::HapsCs,
    StrategyId::HapsCsNoQos,
];

fn family_tag(family: Family) -> u8 {
    match family {
        Family::Alpha => 0,
        Family::PMin => 1,
        Family::SbsCount => 2,
    }
}

impl CaseASweep {
    fn build() -> CaseASweep {
        let mut spec = SweepSpec::defaults(CaseStudy::A, ConfigFile::default(), 42);
        spec.strategies = CASE_A_STRATEGIES.to_vec();
        spec.num_seeds = 50;
        spec.sbs_counts = vec![49];
        let started = Instant::now();
        let results = spec.execute().expect("case A sweep");
        let wall_s = started.elapsed().as_secs_f64();
        assert!(
            results.failures.is_empty(),
            "case A sweep had failed cells: {:?}",
            results.failures
        );
        let mut index = BTreeMap::new();
        for (job, records) in results.jobs.iter().zip(&results.records) {
            assert_eq!(records.len(), 1);
            index.insert(
                (family_tag(job.family), job.axis_idx, job.strategy_idx, job.seed_idx),
                records[0].clone(),
            );
        }
        eprintln!("case A sweep: {} cells in {wall_s:.1} s", results.jobs.len());
        CaseASweep { spec, index, wall_s }
    }

    fn strategy_idx(&self, strategy: StrategyId) -> usize {
        self.spec.strategies.iter().position(|&s| s == strategy).expect("strategy in spec")
    }

    fn record(
        &self,
        family: Family,
        axis: usize,
        strategy: StrategyId,
        seed: u64,
    ) -> &MetricsRecord {
        self.index
            .get(&(family_tag(family), axis, self.strategy_idx(strategy), seed))
            .expect("sweep cell present")
    }

    fn seed_mean_power(&self, family: Family, axis: usize, strategy: StrategyId) -> f64 {
        let values: Vec<f64> = (0..self.spec.num_seeds)
            .map(|seed| self.record(family, axis, strategy, seed).total_power_w)
            .collect();
        exact_sum(&values) / values.len() as f64
    }
}

static CASE_A: OnceLock<CaseASweep> = OnceLock::new();

fn case_a() -> &'static CaseASweep {
    CASE_A.get_or_init(CaseASweep::build)
}

#[test]
fn criterion_01_qos_solver_power_savings_case_a() {
    let sweep = case_a();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for (axis, alpha, bound) in [
        (0, 0.1, C1_MAX_RATIO_ALPHA_01),
        (8, 0.9, C1_MAX_RATIO_ALPHA_09),
    ] {
        assert_eq!(sweep.spec.alphas[axis], alpha);
        let solver = sweep.seed_mean_power(Family::Alpha, axis, StrategyId::HapsCs);
        let all_on = sweep.seed_mean_power(Family::Alpha, axis, StrategyId::AllOn);
        let ratio = solver / all_on;
        if ratio > bound {
            failures.push(format!("alpha {alpha}: ratio {ratio:.4} > {bound}"));
        }
        details.push(format!("alpha {alpha}: {:.1}% of all-on (<= {:.0}%)", 100.0 * ratio, 100.0 * bound));
    }
    if sweep.wall_s >= C1_WALL_BUDGET_S {
        failures.push(format!("sweep took {:.1} s >= {C1_WALL_BUDGET_S} s", sweep.wall_s));
    }
    details.push(format!("sweep wall {:.1} s < {C1_WALL_BUDGET_S:.0} s", sweep.wall_s));
    report(1, "haps-cs power vs all-on, case A", &failures, &details.join("; "));
}

#[test]
fn criterion_02_noqos_solver_power_savings_case_a() {
    let sweep = case_a();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for (axis, alpha, bound) in [
        (0, 0.1, C2_MAX_RATIO_ALPHA_01),
        (8, 0.9, C2_MAX_RATIO_ALPHA_09),
    ] {
        let solver = sweep.seed_mean_power(Family::Alpha, axis, StrategyId::HapsCsNoQos);
        let all_on = sweep.seed_mean_power(Family::Alpha, axis, StrategyId::AllOn);
        let ratio = solver / all_on;
        if ratio > bound {
            failures.push(format!("alpha {alpha}: ratio {ratio:.4} > {bound}"));
        }
        details.push(format!("alpha {alpha}: {:.1}% of all-on (<= {:.0}%)", 100.0 * ratio, 100.0 * bound));
    }
    report(2, "haps-cs-noqos power vs all-on, case A", &failures, &details.join("; "));
}

#[test]
fn criterion_03_solver_matches_exhaustive_search_at_16_cells() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut cells = 0usize;
    for (i, alpha) in (1..=9).map(|i| (i, i as f64 / 10.0)) {
        let file = ConfigFile { num_sbs: Some(16), ..ConfigFile::default() };
        let mut config = file.resolve(CaseStudy::A).unwrap();
        config.traffic.alpha = alpha;
        for &seed in &C3_SEEDS {
            config.rng_seed = derive_seed(42, 16, seed);
            let state = NetworkState::for_step(&config, 0).unwrap();
            let profiles = config.network_profiles();
            let solver = haps_enhanced_cs(&state, &profiles, false).unwrap();
            let es = exhaustive_search(&state, &profiles, false, 16).unwrap();
            let gap = (solver.objective_w - es.objective_w).abs();
            worst = worst.max(gap);
            cells += 1;
            if gap >= C3_POWER_TOL_W {
                failures.push(format!(
                    "alpha 0.{i} seed {seed}: |{} - {}| = {gap:.3e} W",
                    solver.objective_w, es.objective_w
                ));
            }
        }
    }
    report(
        3,
        "noqos solver equals exhaustive search, 16 cells",
        &failures,
        &format!("{cells} cells, worst gap {worst:.3e} W < {C3_POWER_TOL_W:.0e} W"),
    );
}

#[test]
fn criterion_04_qos_solver_preserves_all_on_traffic() {
    let sweep = case_a();
    let mut failures = Vec::new();
    let mut cells = 0usize;
    let axes = [
        (Family::Alpha, sweep.spec.alphas.len()),
        (Family::PMin, sweep.spec.p_mins_dbm.len()),
    ];
    for (family, len) in axes {
        for axis in 0..len {
            for seed in 0..sweep.spec.num_seeds {
                let solver = sweep.record(family, axis, StrategyId::HapsCs, seed);
                let all_on = sweep.record(family, axis, StrategyId::AllOn, seed);
                cells += 1;
                if solver.served_traffic_qos.to_bits() != all_on.served_traffic_qos.to_bits() {
                    failures.push(format!(
                        "{family:?} axis {axis} seed {seed}: {} != {}",
                        solver.served_traffic_qos, all_on.served_traffic_qos
                    ));
                }
            }
        }
    }
    report(
        4,
        "haps-cs served traffic equals all-on, bitwise",
        &failures,
        &format!("{cells} cells equal across every alpha and threshold"),
    );
}

#[test]
fn criterion_05_power_monotone_in_qos_threshold() {
    let sweep = case_a();
    let mut failures = Vec::new();
    let pmins = &sweep.spec.p_mins_dbm;
    assert_eq!(pmins.first(), Some(&-85.0));
    // Non-decreasing power along the tightening threshold, per seed.
    for seed in 0..sweep.spec.num_seeds {
        for axis in 1..pmins.len() {
            let looser = sweep.record(Family::PMin, axis - 1, StrategyId::HapsCs, seed);
            let tighter = sweep.record(Family::PMin, axis, StrategyId::HapsCs, seed);
            if tighter.total_power_w < looser.total_power_w {
                failures.push(format!(
                    "seed {seed}: power drops {} -> {} between {} and {} dBm",
                    looser.total_power_w, tighter.total_power_w, pmins[axis - 1], pmins[axis]
                ));
            }
        }
    }
    // At loose thresholds the constraint is inert: seed-mean power within
    // 1% of the unconstrained solver.
    let mut gaps = Vec::new();
    for (axis, &pmin) in pmins.iter().enumerate().filter(|(_, &p)| p <= -80.0) {
        let qos = sweep.seed_mean_power(Family::PMin, axis, StrategyId::HapsCs);
        let noqos = sweep.seed_mean_power(Family::PMin, axis, StrategyId::HapsCsNoQos);
        let rel = (qos - noqos).abs() / noqos;
        gaps.push(format!("{pmin} dBm: {:.3}%", 100.0 * rel));
        if rel > C5_LOW_PMIN_REL_TOL {
            failures.push(format!(
                "{pmin} dBm: qos {qos} vs noqos {noqos} differs by {:.2}% > 1%",
                100.0 * rel
            ));
        }
    }
    report(
        5,
        "haps-cs power monotone in the threshold",
        &failures,
        &format!(
            "non-decreasing on {} seeds x {} thresholds; loose-threshold gaps {}",
            sweep.spec.num_seeds,
            pmins.len(),
            gaps.join(", ")
        ),
    );
}

#[test]
fn criterion_06_strategy_power_ordering_on_every_cell() {
    let sweep = case_a();
    let mut failures = Vec::new();
    let mut cells = 0usize;
    let axes = [
        (Family::Alpha, sweep.spec.alphas.len()),
        (Family::PMin, sweep.spec.p_mins_dbm.len()),
        (Family::SbsCount, sweep.spec.sbs_counts.len()),
    ];
    for (family, len) in axes {
        for axis in 0..len {
            for seed in 0..sweep.spec.num_seeds {
                let noqos = sweep.record(family, axis, StrategyId::HapsCsNoQos, seed).total_power_w;
                let qos = sweep.record(family, axis, StrategyId::HapsCs, seed).total_power_w;
                let terr = sweep.record(family, axis, StrategyId::Terrestrial, seed).total_power_w;
                let all_on = sweep.record(family, axis, StrategyId::AllOn, seed).total_power_w;
                cells += 1;
                for (label, lo, hi) in [
                    ("noqos <= qos", noqos, qos),
                    ("qos <= all-on", qos, all_on),
                    ("noqos <= terrestrial", noqos, terr),
                    ("terrestrial <= all-on", terr, all_on),
                ] {
                    if lo > hi {
                        failures.push(format!(
                            "{family:?} axis {axis} seed {seed}: {label} violated ({lo} > {hi})"
                        ));
                    }
                }
            }
        }
    }
    report(
        6,
        "power ordering noqos <= qos/terrestrial <= all-on",
        &failures,
        &format!("4 orderings exact on {cells} cells"),
    );
}

/// Deterministic uniform in [0, 1) from the seed-derivation hash.
fn unit(master: u64, a: u64, b: u64) -> f64 {
    (derive_seed(master, a, b) >> 11) as f64 / (1u64 << 53) as f64
}

/// Random small instance: loads, received powers, capacity ratios, and
/// hardware draws all vary; 2..=12 SBSs.
fn random_instance(trial: u64) -> (NetworkState, NetworkProfiles, bool) {
    let n = 2 + (derive_seed(trial, 0, 0) % 11) as usize;
    let mut sbs_profiles = Vec::with_capacity(n);
    for j in 0..n {
        let mut p = BsProfile::reference(BsClass::Micro);
        p.eta = 1.0 + 7.0 * unit(trial, 9, j as u64);
        p.p_transmit_w = 0.05 + 10.0 * unit(trial, 10, j as u64);
        p.p_operational_w = 4.0 + 80.0 * unit(trial, 11, j as u64);
        p.p_sleep_w = 0.6 * p.p_operational_w * unit(trial, 12, j as u64);
        sbs_profiles.push(p);
    }
    let profiles = NetworkProfiles {
        mbs: BsProfile::reference(BsClass::Macro),
        haps: BsProfile::reference(BsClass::Haps),
        sbs: sbs_profiles,
    };
    let state = NetworkState {
        step: 0,
        sbs_loads: (0..n).map(|j| unit(trial, 1, j as u64)).collect(),
        p_r_mbs_mw: (0..n)
            .map(|j| 10f64.powf(-11.0 + 5.0 * unit(trial, 5, j as u64)))
            .collect(),
        p_r_haps_mw: (0..n)
            .map(|j| 10f64.powf(-9.0 + 4.0 * unit(trial, 6, j as u64)))
            .collect(),
        phi_m: (0..n).map(|j| 0.02 + 0.38 * unit(trial, 2, j as u64)).collect(),
        phi_h: (0..n).map(|j| 0.01 + 0.19 * unit(trial, 3, j as u64)).collect(),
        lambda_m0: 0.5 * unit(trial, 7, 0),
        lambda_h0: 0.5 * unit(trial, 8, 0),
        p_min_mw: 10f64.powf(-10.0 + 3.0 * unit(trial, 4, 0)),
        clamped_sbs: Vec::new(),
    };
    (state, profiles, trial.is_multiple_of(2))
}

/// Every length-`n` association vector, in base-3 counting order.
fn all_choice_vectors(n: usize) -> impl Iterator<Item = Vec<Association>> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let digit = code % 3;
                code /= 3;
                match digit {
                    0 => Association::StaysOn,
                    1 => Association::ToMbs,
                    _ => Association::ToHaps,
                }
            })
            .collect()
    })
}

#[test]
fn criterion_07_solver_matches_brute_force_on_random_instances() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for trial in 0..C7_INSTANCES as u64 {
        let (state, profiles, enforce_qos) = random_instance(trial);
        let instance = build_mip(&state, &profiles, enforce_qos);
        let mut brute: Option<f64> = None;
        for choices in all_choice_vectors(state.num_sbs()) {
            if instance.feasible_choices(&choices) {
                let obj = instance.objective_of(&choices);
                brute = Some(brute.map_or(obj, |b: f64| b.min(obj)));
            }
        }
        let solved = haps_enhanced_cs(&state, &profiles, enforce_qos);
        match (brute, solved) {
            (Some(best), Ok(sol)) => {
                let gap = (sol.objective_w - best).abs();
                worst = worst.max(gap);
                if gap > C7_OBJ_TOL_W {
                    failures.push(format!("trial {trial}: gap {gap:.3e} W"));
                }
                if !instance.feasible_choices(&sol.assoc) {
                    failures.push(format!("trial {trial}: solver solution infeasible"));
                }
            }
            (None, Err(_)) => {}
            (Some(_), Err(e)) => {
                failures.push(format!("trial {trial}: solver infeasible, brute feasible ({e})"))
            }
            (None, Ok(_)) => {
                failures.push(format!("trial {trial}: solver feasible, brute infeasible"))
            }
        }
    }
    report(
        7,
        "branch-and-bound equals full enumeration",
        &failures,
        &format!(
            "{C7_INSTANCES} instances up to 12 cells, worst gap {worst:.3e} W <= {C7_OBJ_TOL_W:.0e} W, feasibility agreed"
        ),
    );
}

#[test]
fn criterion_08_linking_constraints_encode_the_product() {
    let (state, profiles, _) = random_instance(1);
    let instance = build_mip(&state, &profiles, true);
    let mut failures = Vec::new();
    for code in 0..8u8 {
        let delta = code & 1 == 1;
        let s = code >> 1 & 1 == 1;
        let z = code >> 2 & 1 == 1;
        let admitted = instance.linking_satisfied(delta, s, z);
        let expected = z == (delta && s);
        if admitted != expected {
            failures.push(format!(
                "(delta={delta}, s={s}, z={z}): admitted={admitted}, want {expected}"
            ));
        }
    }
    report(
        8,
        "linking rows admit z iff z = delta*s",
        &failures,
        "all 8 binary points checked",
    );
}

#[test]
fn criterion_09_full_grid_solve_time() {
    let sweep = case_a();
    let mut times: Vec<f64> = Vec::new();
    for axis in 0..sweep.spec.alphas.len() {
        for seed in 0..sweep.spec.num_seeds {
            times.push(sweep.record(Family::Alpha, axis, StrategyId::HapsCs, seed).solve_time_s);
        }
    }
    times.sort_by(f64::total_cmp);
    let median = times[times.len() / 2];
    let worst = *times.last().unwrap();
    let failures = if median < C9_MEDIAN_BUDGET_S {
        Vec::new()
    } else {
        vec![format!("median {median:.3} s >= {C9_MEDIAN_BUDGET_S} s")]
    };
    report(
        9,
        "49-cell solve time",
        &failures,
        &format!(
            "median {:.2} ms over {} solves (worst {:.2} ms) < {C9_MEDIAN_BUDGET_S} s",
            1e3 * median,
            times.len(),
            1e3 * worst
        ),
    );
}

/// Case B ordinal comparison data: seed-mean power and efficiency per
/// strategy per load point.
struct CaseBCurves {
    alphas: Vec<f64>,
    power: BTreeMap<(usize, usize), f64>,
    ee: BTreeMap<(usize, usize), f64>,
}

const CASE_B_STRATEGIES: [StrategyId; 5] = [
    StrategyId::AllOn,
    StrategyId::Sorting,
    StrategyId::Terrestrial,
    StrategyId::HapsCs,
    StrategyId::HapsCsNoQos,
];
const CASE_B_SEEDS: u64 = 10;

static CASE_B: OnceLock<CaseBCurves> = OnceLock::new();

fn case_b() -> &'static CaseBCurves {
    CASE_B.get_or_init(|| {
        let alphas = vec![0.1, 0.3, 0.5, 0.7, 0.9];
        let mut power = BTreeMap::new();
        let mut ee = BTreeMap::new();
        for (ai, &alpha) in alphas.iter().enumerate() {
            for (si, &strategy) in CASE_B_STRATEGIES.iter().enumerate() {
                let mut powers = Vec::new();
                let mut effs = Vec::new();
                for seed in 0..CASE_B_SEEDS {
                    let mut config = ConfigFile::default().resolve(CaseStudy::B).unwrap();
                    config.traffic.alpha = alpha;
                    config.rng_seed = derive_seed(42, 49, seed);
                    let record = run_step(&config, 0, strategy).unwrap();
                    powers.push(record.total_power_w);
                    effs.push(record.energy_efficiency);
                }
                power.insert((ai, si), exact_sum(&powers) / powers.len() as f64);
                ee.insert((ai, si), exact_sum(&effs) / effs.len() as f64);
            }
        }
        CaseBCurves { alphas, power, ee }
    })
}

#[test]
fn criterion_10_channel_goldens_and_case_b_ordinals() {
    let mut failures = Vec::new();

    // Channel golden values.
    let breakpoint = channel::breakpoint_distance_m(25.0, 1.5, 1.0, 2.5).unwrap();
    if (breakpoint - C10_BREAKPOINT_M).abs() > C10_BREAKPOINT_TOL_M {
        failures.push(format!("breakpoint {breakpoint} m != {C10_BREAKPOINT_M} m"));
    }
    let fspl = channel::free_space_pathloss_db(2.5, 20_000.0);
    if (fspl - C10_FSPL_DB).abs() > C10_FSPL_TOL_DB {
        failures.push(format!("free-space loss {fspl} dB != {C10_FSPL_DB} dB"));
    }
    let slant = channel::slant_distance_m(90.0, 6_371_000.0, 20_000.0);
    if slant != 20_000.0 {
        failures.push(format!("slant at 90 degrees is {slant} m, want exactly 20000"));
    }
    if channel::los_probability_terrestrial(18.0) != 1.0 {
        failures.push("LoS probability at 18 m is not exactly 1".into());
    }

    // Case B ordinals on seed-mean curves.
    let curves = case_b();
    let idx = |s: StrategyId| CASE_B_STRATEGIES.iter().position(|&x| x == s).unwrap();
    let haps = idx(StrategyId::HapsCs);
    for (ai, &alpha) in curves.alphas.iter().enumerate() {
        for other in [StrategyId::AllOn, StrategyId::Sorting, StrategyId::Terrestrial] {
            let oi = idx(other);
            if curves.ee[&(ai, haps)] <= curves.ee[&(ai, oi)] {
                failures.push(format!(
                    "alpha {alpha}: haps-cs efficiency {} not above {} ({})",
                    curves.ee[&(ai, haps)],
                    curves.ee[&(ai, oi)],
                    other.as_str()
                ));
            }
        }
        // The two solver variants stay within 1% of each other here.
        let noqos = curves.ee[&(ai, idx(StrategyId::HapsCsNoQos))];
        if curves.ee[&(ai, haps)] < noqos * 0.99 {
            failures.push(format!(
                "alpha {alpha}: haps-cs efficiency {} more than 1% below noqos {noqos}",
                curves.ee[&(ai, haps)]
            ));
        }
    }
    // Sorting and the exact terrestrial solver must separate in case B.
    let max_power_gap = curves
        .alphas
        .iter()
        .enumerate()
        .map(|(ai, _)| {
            (curves.power[&(ai, idx(StrategyId::Sorting))]
                - curves.power[&(ai, idx(StrategyId::Terrestrial))])
                .abs()
        })
        .fold(0.0f64, f64::max);
    if max_power_gap <= 1.0 {
        failures.push(format!(
            "sorting and terrestrial power curves never separate (max gap {max_power_gap} W)"
        ));
    }

    report(
        10,
        "channel goldens and case B ordinals",
        &failures,
        &format!(
            "breakpoint {breakpoint:.2} m, free-space {fspl:.2} dB, slant/LoS exact; \
             haps-cs has the top efficiency at every load, sorting vs terrestrial max gap {max_power_gap:.0} W"
        ),
    );
}

// Keep the solver's tie-break preference observable: equal-power optima
// resolve toward more active cells deterministically (exercised widely in
// the unit suites; this guards the public contract the criteria rely on).
#[test]
fn solution_reports_optimality_flag() {
    let (state, profiles, _) = random_instance(3);
    let solution: Solution = haps_enhanced_cs(&state, &profiles, true).unwrap();
    assert!(solution.optimal);
    assert_eq!(solution.assoc.len(), state.num_sbs());
}
