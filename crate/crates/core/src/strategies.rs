//! Switching strategies compared by the simulator.
//!
//! Every strategy returns a [`Solution`] evaluated through the same
//! canonical objective, so cross-strategy power comparisons are exact.

use alloc::vec::Vec;

use crate::error::Error;
use crate::optimizer::{build_mip, Association, NetworkState, Solution};
pub use crate::optimizer::haps_enhanced_cs;
use crate::scenario::NetworkProfiles;
use crate::solver::{solve_reduced, ReducedProblem};

/// Default cap on the SBS count accepted by [`exhaustive_search`].
pub const DEFAULT_ES_CAP: usize = 20;

/// Identifier for each implemented strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyId {
    /// Baseline: every SBS stays on.
    AllOn,
    /// Load-sorted greedy offload to the MBS, capacity-checked only.
    Sorting,
    /// Load-sorted greedy offload to the MBS with a QoS screen.
    SortingQos,
    /// Exact switching restricted to terrestrial offloading (no HAPS).
    Terrestrial,
    /// Exact HAPS-enhanced switching with QoS rows.
    HapsCs,
    /// Exact HAPS-enhanced switching without QoS rows.
    HapsCsNoQos,
    /// Exhaustive enumeration over on/off configurations.
    ExhaustiveSearch,
}

impl StrategyId {
    pub const ALL: [StrategyId; 7] = [
        StrategyId::AllOn,
        StrategyId::Sorting,
        StrategyId::SortingQos,
        StrategyId::Terrestrial,
        StrategyId::HapsCs,
        StrategyId::HapsCsNoQos,
        StrategyId::ExhaustiveSearch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyId::AllOn => "all-on",
            StrategyId::Sorting => "sorting",
            StrategyId::SortingQos => "sorting-qos",
            StrategyId::Terrestrial => "terrestrial",
            StrategyId::HapsCs => "haps-cs",
            StrategyId::HapsCsNoQos => "haps-cs-noqos",
            StrategyId::ExhaustiveSearch => "es",
        }
    }

    pub fn parse(token: &str) -> Result<StrategyId, Error> {
        StrategyId::ALL
            .iter()
            .copied()
            .find(|s| s.as_str() == token)
            .ok_or_else(|| {
                Error::invalid("strategy", alloc::format!("unknown strategy '{token}'"))
            })
    }
}

impl core::fmt::Display for StrategyId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Runs one strategy on one state. Exhaustive search uses
/// [`DEFAULT_ES_CAP`].
pub fn run(
    id: StrategyId,
    state: &NetworkState,
    profiles: &NetworkProfiles,
) -> Result<Solution, Error> {
    match id {
        StrategyId::AllOn => Ok(all_on(state, profiles)),
        StrategyId::Sorting => Ok(sorting(state, profiles, false)),
        StrategyId::SortingQos => Ok(sorting(state, profiles, true)),
        StrategyId::Terrestrial => terrestrial_cs(state, profiles),
        StrategyId::HapsCs => haps_enhanced_cs(state, profiles, true),
        StrategyId::HapsCsNoQos => haps_enhanced_cs(state, profiles, false),
        StrategyId::ExhaustiveSearch => {
            exhaustive_search(state, profiles, true, DEFAULT_ES_CAP)
        }
    }
}

/// Baseline with every SBS active and no offloading.
pub fn all_on(state: &NetworkState, profiles: &NetworkProfiles) -> Solution {
    let instance = build_mip(state, profiles, false);
    let choices = alloc::vec![Association::StaysOn; state.num_sbs()];
    Solution::evaluate(&choices, &instance)
}

/// Load-sorted greedy: visits SBSs by ascending load (ties by index) and
/// offloads each to the MBS while the running MBS load stays within
/// capacity. With `qos_aware`, an SBS is only offloaded when the MBS
/// per-user received power at its group meets the threshold.
pub fn sorting(state: &NetworkState, profiles: &NetworkProfiles, qos_aware: bool) -> Solution {
    let n = state.num_sbs();
    let instance = build_mip(state, profiles, false);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        state.sbs_loads[a]
            .total_cmp(&state.sbs_loads[b])
            .then_with(|| a.cmp(&b))
    });
    let mut choices = alloc::vec![Association::StaysOn; n];
    let mut lambda_m = state.lambda_m0;
    for &j in &order {
        let w = state.sbs_loads[j] * state.phi_m[j];
        if lambda_m + w > 1.0 {
            continue;
        }
        if qos_aware && state.p_r_mbs_mw[j] < state.p_min_mw {
            continue;
        }
        choices[j] = Association::ToMbs;
        lambda_m += w;
    }
    Solution::evaluate(&choices, &instance)
}

/// Exact switching with offloading restricted to the MBS: the HAPS
/// option is removed from every SBS and the rest of the problem is
/// solved exactly. QoS rows are not posed, matching the capacity-only
/// greedy it is compared against.
pub fn terrestrial_cs(
    state: &NetworkState,
    profiles: &NetworkProfiles,
) -> Result<Solution, Error> {
    let instance = build_mip(state, profiles, false);
    let mut reduced = ReducedProblem::from_instance(&instance);
    for it in &mut reduced.items {
        it.allow_haps = false;
    }
    let choices = solve_reduced(&reduced, &instance)?;
    let mut solution = Solution::evaluate(&choices, &instance);
    solution.optimal = true;
    Ok(solution)
}

/// Exhaustive reference: enumerates every on/off configuration, assigns
/// offload targets optimally within each, and returns the exact minimum.
/// Small target subproblems are enumerated directly; larger ones fall
/// back to the exact restricted solver. Errors with
/// [`Error::SearchSpaceTooLarge`] when `num_sbs > cap` (the search is
/// exponential) and [`Error::Infeasible`] when no configuration passes.
pub fn exhaustive_search(
    state: &NetworkState,
    profiles: &NetworkProfiles,
    enforce_qos: bool,
    cap: usize,
) -> Result<Solution, Error> {
    let n = state.num_sbs();
    if n > cap {
        return Err(Error::SearchSpaceTooLarge { num_sbs: n, cap });
    }
    let instance = build_mip(state, profiles, enforce_qos);
    let reduced = ReducedProblem::from_instance(&instance);
    // Free-target subproblems up to this size are enumerated by bitmask.
    const BRUTE_FREE_LIMIT: usize = 12;
    const SLACK: f64 = 1e-9;

    let mut best: Option<(Vec<Association>, f64)> = None;
    let mut best_rel = f64::INFINITY;
    let consider = |choices: Vec<Association>,
                    rel: f64,
                        best: &mut Option<(Vec<Association>, f64)>,
                        best_rel: &mut f64| {
        if rel > *best_rel + SLACK || !instance.feasible_choices(&choices) {
            return;
        }
        let obj = instance.objective_of(&choices);
        let better = match best {
            None => true,
            Some((inc, inc_obj)) => {
                obj < *inc_obj || (obj == *inc_obj && Solution::prefer(&choices, inc))
            }
        };
        if better {
            *best_rel = obj - instance.obj_const_w;
            *best = Some((choices, obj));
        }
    };

    let mut off = Vec::with_capacity(n);
    let mut free = Vec::with_capacity(n);
    'masks: for mask in 0u64..(1u64 << n) {
        // Bit j set: SBS j stays on.
        off.clear();
        free.clear();
        let mut choices = alloc::vec![Association::StaysOn; n];
        let mut rel = 0.0;
        let mut used_m = 0.0;
        let mut used_h = 0.0;
        for (j, it) in reduced.items.iter().enumerate() {
            if mask >> j & 1 == 1 {
                rel += it.cost_on;
                continue;
            }
            off.push(j);
            match (it.allow_mbs, it.allow_haps) {
                (false, false) => continue 'masks,
                (true, false) => {
                    choices[j] = Association::ToMbs;
                    rel += it.cost_mbs;
                    used_m += it.w_m;
                }
                (false, true) => {
                    choices[j] = Association::ToHaps;
                    used_h += it.w_h;
                }
                (true, true) => free.push(j),
            }
        }
        if used_m > reduced.budget_m + SLACK || used_h > reduced.budget_h + SLACK {
            continue;
        }
        if free.len() <= BRUTE_FREE_LIMIT {
            for assign in 0u64..(1u64 << free.len()) {
                let mut c = choices.clone();
                let mut r = rel;
                let mut um = used_m;
                let mut uh = used_h;
                let mut fits = true;
                for (i, &j) in free.iter().enumerate() {
                    let it = &reduced.items[j];
                    if assign >> i & 1 == 1 {
                        c[j] = Association::ToMbs;
                        r += it.cost_mbs;
                        um += it.w_m;
                    } else {
                        c[j] = Association::ToHaps;
                        uh += it.w_h;
                    }
                    if um > reduced.budget_m + SLACK || uh > reduced.budget_h + SLACK {
                        fits = false;
                        break;
                    }
                }
                if fits {
                    consider(c, r, &mut best, &mut best_rel);
                }
            }
        } else {
            // Too many free targets to enumerate: exact restricted solve
            // with the on/off pattern pinned.
            let mut restricted = reduced.clone();
            for j in 0..n {
                let it = &mut restricted.items[j];
                if mask >> j & 1 == 1 {
                    it.allow_mbs = false;
                    it.allow_haps = false;
                } else {
                    it.allow_on = false;
                }
            }
            match solve_reduced(&restricted, &instance) {
                Ok(c) => {
                    let r = instance.objective_of(&c) - instance.obj_const_w;
                    consider(c, r, &mut best, &mut best_rel);
                }
                Err(Error::Infeasible) => {}
                Err(e) => return Err(e),
            }
        }
    }

    match best {
        Some((choices, _)) => {
            let mut solution = Solution::evaluate(&choices, &instance);
            solution.optimal = true;
            Ok(solution)
        }
        None => Err(Error::Infeasible),
    }
}
