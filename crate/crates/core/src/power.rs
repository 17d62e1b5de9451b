//! EARTH-style base-station power model and network totals.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::optimizer::{Association, NetworkState, Solution};
use crate::scenario::{BsProfile, NetworkProfiles};

/// Power draw of one base station, watts.
///
/// Active stations consume `p_operational + eta * load * p_transmit`;
/// switched-off stations consume `p_sleep` regardless of load.
pub fn bs_power_w(profile: &BsProfile, load: f64, is_active: bool) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&load) {
        return Err(Error::domain(format!(
            "load {load} outside [0, 1] for {} power evaluation",
            profile.class.as_str()
        )));
    }
    if is_active {
        Ok(profile.p_operational_w + profile.eta * load * profile.p_transmit_w)
    } else {
        Ok(profile.p_sleep_w)
    }
}

/// Network power split by role, watts.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerBreakdown {
    pub total_w: f64,
    pub mbs_w: f64,
    pub haps_w: f64,
    /// Per-SBS power in site order.
    pub sbs_w: Vec<f64>,
    /// Grid draw: everything except the (solar-powered) HAPS.
    pub grid_w: f64,
}

/// Total network power for a switching solution.
///
/// MBS and HAPS loads are recomputed from the solution's associations and
/// the state's loads/capacity ratios; MBS and HAPS are always active.
pub fn network_power(
    solution: &Solution,
    state: &NetworkState,
    profiles: &NetworkProfiles,
) -> Result<PowerBreakdown, Error> {
    let n = state.num_sbs();
    if solution.delta.len() != n || profiles.sbs.len() != n {
        return Err(Error::domain("solution/profile dimensions do not match the state"));
    }
    let mut lambda_m = state.lambda_m0;
    let mut lambda_h = state.lambda_h0;
    let mut sbs_w = Vec::with_capacity(n);
    let mut sbs_total = 0.0;
    for j in 0..n {
        match solution.assoc[j] {
            Association::StaysOn => {}
            Association::ToMbs => lambda_m += state.sbs_loads[j] * state.phi_m[j],
            Association::ToHaps => lambda_h += state.sbs_loads[j] * state.phi_h[j],
        }
        let p = bs_power_w(&profiles.sbs[j], state.sbs_loads[j], solution.delta[j])?;
        sbs_w.push(p);
        sbs_total += p;
    }
    let mbs_w = bs_power_w(&profiles.mbs, lambda_m, true)?;
    let haps_w = bs_power_w(&profiles.haps, lambda_h, true)?;
    let total_w = mbs_w + haps_w + sbs_total;
    Ok(PowerBreakdown { total_w, mbs_w, haps_w, sbs_w, grid_w: total_w - haps_w })
}
