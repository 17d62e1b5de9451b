//! Link-budget models.
//!
//! Terrestrial links follow the 3GPP TR 38.901 urban-macro distance
//! breakpoint formulation; the HAPS link uses the TR 38.811 elevation-angle
//! LoS probability and free-space loss over the spherical-Earth slant
//! range. LoS and NLoS losses are blended in the dB domain, weighted by
//! the LoS probability.
//!
//! All functions are pure; shadow-fading draws are passed in explicitly.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use alloc::format;

use crate::error::Error;
use crate::math;
use crate::scenario::ScenarioConfig;
use crate::units::{self, SPEED_OF_LIGHT_M_S};

/// Receive antenna gain of user terminals, dBi.
pub const RX_GAIN_DBI: f64 = 0.0;

/// Validity bounds of the terrestrial pathloss fit, meters of 2D distance.
pub const TERRESTRIAL_D2D_MIN_M: f64 = 10.0;
pub const TERRESTRIAL_D2D_MAX_M: f64 = 5_000.0;

/// LoS probability of a terrestrial urban-macro link at 2D distance
/// `d2d_m`. Equals 1 up to 18 m and decays smoothly beyond.
pub fn los_probability_terrestrial(d2d_m: f64) -> f64 {
    if d2d_m <= 18.0 {
        1.0
    } else {
        let near = 18.0 / d2d_m;
        near + math::exp(-d2d_m / 63.0) * (1.0 - near)
    }
}

/// Breakpoint distance of the two-slope urban-macro model, meters.
///
/// Uses effective antenna/user heights (actual height minus the effective
/// environment height `h_e_m`).
pub fn breakpoint_distance_m(
    h_b_m: f64,
    h_u_m: f64,
    h_e_m: f64,
    fc_ghz: f64,
) -> Result<f64, Error> {
    let hb_eff = h_b_m - h_e_m;
    let hu_eff = h_u_m - h_e_m;
    if !(hb_eff > 0.0) || !(hu_eff > 0.0) {
        return Err(Error::domain(format!(
            "effective heights must be positive (base {hb_eff} m, user {hu_eff} m after \
             subtracting environment height {h_e_m} m)"
        )));
    }
    if !(fc_ghz > 0.0) {
        return Err(Error::domain("carrier frequency must be positive"));
    }
    Ok(4.0 * hb_eff * hu_eff * (fc_ghz * 1e9) / SPEED_OF_LIGHT_M_S)
}

/// Terrestrial urban-macro pathloss, dB, blended over LoS/NLoS.
///
/// `shadow_los_db` / `shadow_nlos_db` are the shadow-fading realizations
/// added to the LoS and NLoS branch losses. `d2d_m` must lie within the
/// model's 10 m .. 5 km validity range; callers with closer geometry clamp
/// before calling (see [`offload_received_powers`]).
pub fn pathloss_terrestrial(
    d2d_m: f64,
    h_b_m: f64,
    h_u_m: f64,
    h_e_m: f64,
    fc_ghz: f64,
    shadow_los_db: f64,
    shadow_nlos_db: f64,
) -> Result<f64, Error> {
    if !(TERRESTRIAL_D2D_MIN_M..=TERRESTRIAL_D2D_MAX_M).contains(&d2d_m) {
        return Err(Error::domain(format!(
            "2D distance {d2d_m} m outside the terrestrial model validity range \
             [{TERRESTRIAL_D2D_MIN_M} m, {TERRESTRIAL_D2D_MAX_M} m]"
        )));
    }
    let dh = h_b_m - h_u_m;
    let d3d_m = math::sqrt(d2d_m * d2d_m + dh * dh);
    let d_b = breakpoint_distance_m(h_b_m, h_u_m, h_e_m, fc_ghz)?;

    // LoS branch: two-slope fit around the breakpoint.
    let l_los = if d2d_m <= d_b {
        28.0 + 22.0 * math::log10(d3d_m) + 20.0 * math::log10(fc_ghz) + shadow_los_db
    } else {
        28.0 + 40.0 * math::log10(d3d_m) + 20.0 * math::log10(fc_ghz)
            - 9.0 * math::log10(d_b * d_b + dh * dh)
            + shadow_los_db
    };

    // NLoS branch: fitted loss, floored at the LoS loss.
    let l_nlos_hat = 13.54 + 39.08 * math::log10(d3d_m) + 20.0 * math::log10(fc_ghz)
        - 0.6 * (h_u_m - 1.5)
        + shadow_nlos_db;
    let l_nlos = if l_los > l_nlos_hat { l_los } else { l_nlos_hat };

    let rho_los = los_probability_terrestrial(d2d_m);
    Ok(rho_los * l_los + (1.0 - rho_los) * l_nlos)
}

/// Elevation angle from a ground point to a platform at `altitude_m`
/// directly above a point `ground_distance_m` away, degrees. 90 degrees
/// when directly overhead.
pub fn elevation_angle_deg(ground_distance_m: f64, altitude_m: f64) -> f64 {
    if ground_distance_m <= 0.0 {
        return 90.0;
    }
    math::atan(altitude_m / ground_distance_m) * 180.0 / core::f64::consts::PI
}

/// LoS probability of the HAPS link as a function of elevation angle,
/// clamped to [0, 1]. Reaches 1 near zenith.
pub fn los_probability_haps(theta_deg: f64) -> f64 {
    let raw = (9.668 * math::powf(theta_deg, 0.547) - 10.58) / 100.0;
    raw.clamp(0.0, 1.0)
}

/// Slant range from a ground user to the HAPS, meters, over a spherical
/// Earth of radius `earth_radius_m` with platform altitude `altitude_m`.
pub fn slant_distance_m(theta_deg: f64, earth_radius_m: f64, altitude_m: f64) -> f64 {
    let theta = theta_deg * core::f64::consts::PI / 180.0;
    let re = earth_radius_m;
    let hz = altitude_m;
    let s = re * math::sin(theta);
    math::sqrt(s * s + hz * hz + 2.0 * hz * re) - s
}

/// Free-space pathloss, dB, for frequency in GHz and distance in meters.
/// The fit constant expects MHz and km internally.
pub fn free_space_pathloss_db(fc_ghz: f64, distance_m: f64) -> f64 {
    32.5 + 20.0 * math::log10(fc_ghz * 1e3) + 20.0 * math::log10(distance_m / 1e3)
}

/// HAPS link pathloss, dB: free-space loss plus per-branch shadowing,
/// blended by the elevation-dependent LoS probability.
pub fn pathloss_haps(
    theta_deg: f64,
    fc_ghz: f64,
    earth_radius_m: f64,
    altitude_m: f64,
    shadow_los_db: f64,
    shadow_nlos_db: f64,
) -> f64 {
    let d3d_m = slant_distance_m(theta_deg, earth_radius_m, altitude_m);
    let l_f = free_space_pathloss_db(fc_ghz, d3d_m);
    let rho_los = los_probability_haps(theta_deg);
    rho_los * (l_f + shadow_los_db) + (1.0 - rho_los) * (l_f + shadow_nlos_db)
}

/// Received power at full transmit power, dBm.
pub fn received_power_dbm(p_t_dbm: f64, g_t_dbi: f64, g_r_dbi: f64, pathloss_db: f64) -> f64 {
    p_t_dbm + g_t_dbi + g_r_dbi - pathloss_db
}

/// Link budget of one candidate offload target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudgetResult {
    /// Blended pathloss, dB.
    pub pathloss_db: f64,
    /// LoS probability used for the blend.
    pub los_probability: f64,
    /// Received power at full transmit power (no user split), dBm.
    pub received_power_dbm: f64,
    /// Per-user received power share, mW (transmit power divided across
    /// the target's maximum user count, then attenuated).
    pub received_power_share_mw: f64,
}

/// Shadow-fading realizations for one (SBS, step) pair. One draw per
/// target and propagation condition.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShadowDraws {
    pub mbs_los_db: f64,
    pub mbs_nlos_db: f64,
    pub haps_los_db: f64,
    pub haps_nlos_db: f64,
}

/// Draws the four shadowing values in a pinned order (MBS-LoS, MBS-NLoS,
/// HAPS-LoS, HAPS-NLoS) so streams are reproducible.
pub fn draw_shadowing<R: Rng + ?Sized>(
    rng: &mut R,
    sigma_los_db: f64,
    sigma_nlos_db: f64,
) -> ShadowDraws {
    let mut normal = || -> f64 { StandardNormal.sample(rng) };
    ShadowDraws {
        mbs_los_db: sigma_los_db * normal(),
        mbs_nlos_db: sigma_nlos_db * normal(),
        haps_los_db: sigma_los_db * normal(),
        haps_nlos_db: sigma_nlos_db * normal(),
    }
}

/// Link budgets for offloading one SBS's user group to the MBS and HAPS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffloadPowers {
    pub mbs: LinkBudgetResult,
    pub haps: LinkBudgetResult,
    /// True when the SBS-MBS ground distance fell below the terrestrial
    /// model's 10 m bound and was clamped up to it.
    pub d2d_clamped: bool,
}

/// Computes both offload link budgets for SBS `sbs_index`.
///
/// The user group is represented at the SBS position. Ground distances
/// below the terrestrial validity minimum are clamped to 10 m (flagged in
/// the result); distances beyond 5 km are a hard error.
pub fn offload_received_powers(
    config: &ScenarioConfig,
    sbs_index: usize,
    draws: &ShadowDraws,
) -> Result<OffloadPowers, Error> {
    let layout = &config.layout;
    let site = &layout.sbs[sbs_index];
    let mbs = config.mbs_profile();
    let haps = config.haps_profile();

    let d2d_raw = site.position.distance_m(&layout.mbs_position);
    let d2d_clamped = d2d_raw < TERRESTRIAL_D2D_MIN_M;
    let d2d = if d2d_clamped { TERRESTRIAL_D2D_MIN_M } else { d2d_raw };
    let l_mbs = pathloss_terrestrial(
        d2d,
        mbs.height_m,
        layout.ue_height_m,
        layout.env_height_m,
        layout.carrier_freq_ghz,
        draws.mbs_los_db,
        draws.mbs_nlos_db,
    )?;

    let ground = site.position.distance_m(&layout.haps_ground_position);
    let theta_deg = elevation_angle_deg(ground, layout.haps_altitude_m);
    let l_haps = pathloss_haps(
        theta_deg,
        layout.carrier_freq_ghz,
        layout.earth_radius_m,
        layout.haps_altitude_m,
        draws.haps_los_db,
        draws.haps_nlos_db,
    );

    Ok(OffloadPowers {
        mbs: link_budget(mbs.p_transmit_w, mbs.antenna_gain_dbi, l_mbs,
                         los_probability_terrestrial(d2d), config.u_max_mbs),
        haps: link_budget(haps.p_transmit_w, haps.antenna_gain_dbi, l_haps,
                          los_probability_haps(theta_deg), config.u_max_haps),
        d2d_clamped,
    })
}

fn link_budget(
    p_transmit_w: f64,
    g_t_dbi: f64,
    pathloss_db: f64,
    los_probability: f64,
    u_max: u32,
) -> LinkBudgetResult {
    let p_t_dbm = units::watts_to_dbm(p_transmit_w);
    let rp_dbm = received_power_dbm(p_t_dbm, g_t_dbi, RX_GAIN_DBI, pathloss_db);
    // Per-user share: transmit power in mW split across u_max users, then
    // attenuated by the effective loss (pathloss net of antenna gains).
    let l_eff_db = pathloss_db - g_t_dbi - RX_GAIN_DBI;
    let share_mw = (p_transmit_w * 1e3) / (u_max as f64 * units::db_to_linear(l_eff_db));
    LinkBudgetResult {
        pathloss_db,
        los_probability,
        received_power_dbm: rp_dbm,
        received_power_share_mw: share_mw,
    }
}
