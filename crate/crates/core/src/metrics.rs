//! Served traffic, power, and energy-efficiency reporting for one
//! solved step.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::optimizer::{Association, NetworkState, Solution};
use crate::power::{network_power, PowerBreakdown};
use crate::scenario::NetworkProfiles;
use crate::strategies::StrategyId;

/// Traffic actually served while meeting the QoS threshold, in the same
/// units as the base-station capacities.
///
/// Baseline MBS and HAPS carried traffic always counts. An SBS's group
/// counts when the SBS stays on, or when it is offloaded and the target's
/// per-user received power meets the threshold; offloaded groups that
/// miss the threshold are in outage and count zero.
pub fn served_traffic_with_qos(
    solution: &Solution,
    state: &NetworkState,
    profiles: &NetworkProfiles,
) -> f64 {
    let mut terms = Vec::with_capacity(state.num_sbs() + 2);
    terms.push(profiles.mbs.capacity * state.lambda_m0);
    terms.push(profiles.haps.capacity * state.lambda_h0);
    for (j, &assoc) in solution.assoc.iter().enumerate() {
        let served = match assoc {
            Association::StaysOn => true,
            Association::ToMbs => state.p_r_mbs_mw[j] >= state.p_min_mw,
            Association::ToHaps => state.p_r_haps_mw[j] >= state.p_min_mw,
        };
        if served {
            terms.push(profiles.sbs[j].capacity * state.sbs_loads[j]);
        }
    }
    math::exact_sum(&terms)
}

/// Energy efficiency: served traffic per watt.
pub fn energy_efficiency(traffic: f64, power_w: f64) -> Result<f64, Error> {
    if power_w <= 0.0 {
        return Err(Error::domain("energy efficiency needs positive power"));
    }
    Ok(traffic / power_w)
}

/// Flat record of everything measured for one (strategy, step) solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub strategy: StrategyId,
    pub seed: u64,
    pub step: usize,
    pub alpha: f64,
    pub p_min_dbm: f64,
    pub num_sbs: usize,
    pub num_on: usize,
    pub num_off: usize,
    pub lambda_m: f64,
    pub lambda_h: f64,
    pub total_power_w: f64,
    pub grid_power_w: f64,
    pub served_traffic_qos: f64,
    pub energy_efficiency: f64,
    pub grid_energy_efficiency: f64,
    pub solve_time_s: f64,
    pub optimal: bool,
}

impl MetricsRecord {
    /// Evaluates one solution. Power comes from the power model applied
    /// to the solution (the same value the optimizer's objective
    /// reproduces); traffic is measured against the scenario threshold.
    pub fn compute(
        strategy: StrategyId,
        solution: &Solution,
        state: &NetworkState,
        profiles: &NetworkProfiles,
        alpha: f64,
        p_min_dbm: f64,
        seed: u64,
    ) -> Result<MetricsRecord, Error> {
        let breakdown: PowerBreakdown = network_power(solution, state, profiles)?;
        let traffic = served_traffic_with_qos(solution, state, profiles);
        Ok(MetricsRecord {
            strategy,
            seed,
            step: state.step,
            alpha,
            p_min_dbm,
            num_sbs: state.num_sbs(),
            num_on: solution.num_on(),
            num_off: solution.num_off(),
            lambda_m: solution.lambda_m,
            lambda_h: solution.lambda_h,
            total_power_w: breakdown.total_w,
            grid_power_w: breakdown.grid_w,
            served_traffic_qos: traffic,
            energy_efficiency: energy_efficiency(traffic, breakdown.total_w)?,
            grid_energy_efficiency: energy_efficiency(traffic, breakdown.grid_w)?,
            solve_time_s: solution.solve_time_s,
            optimal: solution.optimal,
        })
    }
}
