//! Switching problem: per-step state, linearized MIP construction, and the
//! exact solver entry points.
//!
//! For each SBS `j` the binary variables are `delta_j` (stays on), `s_j`
//! (offload target selector: 1 = MBS, 0 = HAPS) and the linearization
//! product `z_j = delta_j * s_j`. The canonical encodings of the three
//! real decisions are `(1,0,0)` stay on, `(0,1,0)` off to MBS and
//! `(0,0,0)` off to HAPS (`s` is meaningless while on and canonically 0).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};

use crate::channel::{draw_shadowing, offload_received_powers};
use crate::error::Error;
use crate::math;
use crate::scenario::{generate_loads, NetworkProfiles, ScenarioConfig};
use crate::solver;
use crate::units;

/// Where one SBS's user group is served.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Association {
    /// SBS stays active and serves its own users.
    StaysOn,
    /// SBS switched off; users offloaded to the MBS.
    ToMbs,
    /// SBS switched off; users offloaded to the HAPS.
    ToHaps,
}

impl Association {
    /// Canonical `(delta, s, z)` encoding.
    pub fn encode(self) -> (bool, bool, bool) {
        match self {
            Association::StaysOn => (true, false, false),
            Association::ToMbs => (false, true, false),
            Association::ToHaps => (false, false, false),
        }
    }

    /// Preference code used for deterministic tie-breaking (lower wins).
    fn code(self) -> u8 {
        match self {
            Association::StaysOn => 0,
            Association::ToMbs => 1,
            Association::ToHaps => 2,
        }
    }
}

/// One switching decision with its recomputed loads and canonical
/// objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// `delta[j]`: true when SBS `j` stays on.
    pub delta: Vec<bool>,
    pub assoc: Vec<Association>,
    /// MBS load after offloading.
    pub lambda_m: f64,
    /// HAPS load after offloading.
    pub lambda_h: f64,
    /// Network power, watts, evaluated canonically on the instance.
    pub objective_w: f64,
    /// True when produced by an exact solve of the posed problem.
    pub optimal: bool,
    /// Wall-clock solve time stamped by the runner; 0.0 from the core.
    pub solve_time_s: f64,
}

impl Solution {
    pub fn num_on(&self) -> usize {
        self.delta.iter().filter(|&&d| d).count()
    }

    pub fn num_off(&self) -> usize {
        self.delta.len() - self.num_on()
    }

    /// Builds a solution from per-SBS choices, evaluating loads and the
    /// objective against `instance`. This is the single evaluation path
    /// used by every strategy, so objective values are comparable
    /// bit-for-bit across strategies.
    pub fn evaluate(choices: &[Association], instance: &MipInstance) -> Solution {
        let n = instance.num_sbs;
        debug_assert_eq!(choices.len(), n);
        let mut delta = Vec::with_capacity(n);
        let mut lambda_m = instance.lambda_m0;
        let mut lambda_h = instance.lambda_h0;
        for (j, &c) in choices.iter().enumerate() {
            delta.push(c == Association::StaysOn);
            match c {
                Association::StaysOn => {}
                Association::ToMbs => lambda_m += instance.mbs_capacity.s_coef[j],
                Association::ToHaps => lambda_h += -instance.haps_capacity.delta_coef[j],
            }
        }
        let objective_w = instance.objective_of(choices);
        Solution {
            delta,
            assoc: choices.to_vec(),
            lambda_m,
            lambda_h,
            objective_w,
            optimal: false,
            solve_time_s: 0.0,
        }
    }

    /// Deterministic preference between equal-objective solutions: more
    /// SBSs kept on wins, then lexicographically smaller choice codes
    /// (on < MBS < HAPS).
    pub(crate) fn prefer(cand: &[Association], incumbent: &[Association]) -> bool {
        let on = |v: &[Association]| v.iter().filter(|&&c| c == Association::StaysOn).count();
        let (c_on, i_on) = (on(cand), on(incumbent));
        if c_on != i_on {
            return c_on > i_on;
        }
        for (c, i) in cand.iter().zip(incumbent.iter()) {
            if c.code() != i.code() {
                return c.code() < i.code();
            }
        }
        false
    }
}

/// Everything the optimizer needs about one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub step: usize,
    /// Per-SBS normalized loads, in [0, 1].
    pub sbs_loads: Vec<f64>,
    /// Per-user received power from the MBS at each SBS's user group, mW.
    pub p_r_mbs_mw: Vec<f64>,
    /// Per-user received power from the HAPS, mW.
    pub p_r_haps_mw: Vec<f64>,
    /// Capacity ratio C_j / C_M per SBS.
    pub phi_m: Vec<f64>,
    /// Capacity ratio C_j / C_H per SBS.
    pub phi_h: Vec<f64>,
    pub lambda_m0: f64,
    pub lambda_h0: f64,
    /// QoS threshold, mW.
    pub p_min_mw: f64,
    /// SBS indices whose MBS ground distance was clamped up to the
    /// terrestrial model's validity minimum.
    pub clamped_sbs: Vec<usize>,
}

impl NetworkState {
    pub fn num_sbs(&self) -> usize {
        self.sbs_loads.len()
    }

    /// Builds the state for `step`: loads from the traffic model, link
    /// budgets with fresh shadowing draws (SBS index order, MBS before
    /// HAPS, LoS before NLoS).
    pub fn from_scenario<R: Rng + ?Sized>(
        config: &ScenarioConfig,
        step: usize,
        rng: &mut R,
    ) -> Result<NetworkState, Error> {
        let sbs_loads = generate_loads(config, step)?;
        let n = config.num_sbs();
        let c_m = config.mbs_profile().capacity;
        let c_h = config.haps_profile().capacity;
        let mut p_r_mbs_mw = Vec::with_capacity(n);
        let mut p_r_haps_mw = Vec::with_capacity(n);
        let mut phi_m = Vec::with_capacity(n);
        let mut phi_h = Vec::with_capacity(n);
        let mut clamped_sbs = Vec::new();
        for j in 0..n {
            let draws = draw_shadowing(rng, config.sigma_los_db, config.sigma_nlos_db);
            let op = offload_received_powers(config, j, &draws)?;
            if op.d2d_clamped {
                clamped_sbs.push(j);
            }
            p_r_mbs_mw.push(op.mbs.received_power_share_mw);
            p_r_haps_mw.push(op.haps.received_power_share_mw);
            let c_j = config.sbs_profile(j).capacity;
            phi_m.push(c_j / c_m);
            phi_h.push(c_j / c_h);
        }
        Ok(NetworkState {
            step,
            sbs_loads,
            p_r_mbs_mw,
            p_r_haps_mw,
            phi_m,
            phi_h,
            lambda_m0: config.lambda_m0,
            lambda_h0: config.lambda_h0,
            p_min_mw: units::dbm_to_mw(config.p_min_dbm),
            clamped_sbs,
        })
    }

    /// [`NetworkState::from_scenario`] with the canonical per-step RNG:
    /// a ChaCha12 stream seeded from `(config.rng_seed, step)`. Shadowing
    /// therefore depends only on the scenario seed and the step, never on
    /// the strategy or the QoS threshold.
    pub fn for_step(config: &ScenarioConfig, step: usize) -> Result<NetworkState, Error> {
        let seed = math::derive_seed(config.rng_seed, step as u64, 0);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        NetworkState::from_scenario(config, step, &mut rng)
    }
}

/// One linear inequality `sum_j coefs . (delta_j, s_j, z_j) <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub delta_coef: Vec<f64>,
    pub s_coef: Vec<f64>,
    pub z_coef: Vec<f64>,
    pub rhs: f64,
}

impl CapacityRow {
    /// Left-hand side at a binary point, summed in index order.
    pub fn lhs(&self, delta: &[bool], s: &[bool], z: &[bool]) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.delta_coef.len() {
            if delta[j] {
                acc += self.delta_coef[j];
            }
            if s[j] {
                acc += self.s_coef[j];
            }
            if z[j] {
                acc += self.z_coef[j];
            }
        }
        acc
    }

    pub fn satisfied(&self, delta: &[bool], s: &[bool], z: &[bool]) -> bool {
        self.lhs(delta, s, z) <= self.rhs
    }
}

/// Per-SBS QoS inequality in `>= 0` form:
/// `delta_coef * delta + s_coef * s + z_coef * z + constant >= 0`.
///
/// At the canonical binary points this reduces to: satisfied outright when
/// the SBS stays on; `P_r(MBS) >= P_min` when off to the MBS; and
/// `P_r(HAPS) >= P_min` when off to the HAPS. Powers are compared in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosRow {
    pub delta_coef: f64,
    pub s_coef: f64,
    pub z_coef: f64,
    pub constant: f64,
}

impl QosRow {
    pub fn value(&self, delta: bool, s: bool, z: bool) -> f64 {
        let mut acc = self.constant;
        if delta {
            acc += self.delta_coef;
        }
        if s {
            acc += self.s_coef;
        }
        if z {
            acc += self.z_coef;
        }
        acc
    }

    pub fn satisfied(&self, delta: bool, s: bool, z: bool) -> bool {
        self.value(delta, s, z) >= 0.0
    }
}

/// The linearized switching MIP over `(delta, s, z)` binaries.
///
/// Objective (watts): `obj_const_w + sum_j obj_delta[j] delta_j +
/// obj_s[j] s_j + obj_z[j] z_j`, equal to total network power at every
/// binary point that satisfies the linking rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MipInstance {
    pub num_sbs: usize,
    pub obj_delta: Vec<f64>,
    pub obj_s: Vec<f64>,
    pub obj_z: Vec<f64>,
    /// Objective at the all-zero point (every SBS off to HAPS).
    pub obj_const_w: f64,
    /// MBS load row: `sum (s_j - z_j) load_j phi_m_j <= 1 - lambda_m0`.
    pub mbs_capacity: CapacityRow,
    /// HAPS load row, offset so the all-zero point carries every group:
    /// `sum -(delta_j + s_j - z_j) load_j phi_h_j <= 1 - lambda_h0 - sum load_j phi_h_j`.
    pub haps_capacity: CapacityRow,
    /// One row per SBS when QoS is enforced; empty otherwise.
    pub qos_rows: Vec<QosRow>,
    pub lambda_m0: f64,
    pub lambda_h0: f64,
}

impl MipInstance {
    /// Canonical objective at a binary point: exact (correctly rounded)
    /// sum of the constant and the active coefficients.
    pub fn objective_at(&self, delta: &[bool], s: &[bool], z: &[bool]) -> f64 {
        let mut terms = Vec::with_capacity(1 + 3 * self.num_sbs);
        terms.push(self.obj_const_w);
        for j in 0..self.num_sbs {
            if delta[j] {
                terms.push(self.obj_delta[j]);
            }
            if s[j] {
                terms.push(self.obj_s[j]);
            }
            if z[j] {
                terms.push(self.obj_z[j]);
            }
        }
        math::exact_sum(&terms)
    }

    /// Objective at the canonical encoding of per-SBS choices.
    pub fn objective_of(&self, choices: &[Association]) -> f64 {
        let mut terms = Vec::with_capacity(1 + self.num_sbs);
        terms.push(self.obj_const_w);
        for (j, &c) in choices.iter().enumerate() {
            match c {
                Association::StaysOn => terms.push(self.obj_delta[j]),
                Association::ToMbs => terms.push(self.obj_s[j]),
                Association::ToHaps => {}
            }
        }
        math::exact_sum(&terms)
    }

    /// Linking rows `z <= s`, `z <= delta`, `z >= s + delta - 1` for SBS `j`.
    pub fn linking_satisfied(&self, delta: bool, s: bool, z: bool) -> bool {
        let (d, s, z) = (delta as i8, s as i8, z as i8);
        z <= s && z <= d && z >= s + d - 1
    }

    /// Whether the QoS row for SBS `j` holds at a binary point. Vacuously
    /// true when QoS is not enforced.
    pub fn qos_satisfied(&self, j: usize, delta: bool, s: bool, z: bool) -> bool {
        self.qos_rows.is_empty() || self.qos_rows[j].satisfied(delta, s, z)
    }

    /// Full feasibility check at a binary point: linking, capacity, and
    /// QoS rows. This is the canonical arbiter used by the solver when
    /// accepting incumbents.
    pub fn feasible_at(&self, delta: &[bool], s: &[bool], z: &[bool]) -> bool {
        for j in 0..self.num_sbs {
            if !self.linking_satisfied(delta[j], s[j], z[j]) {
                return false;
            }
            if !self.qos_satisfied(j, delta[j], s[j], z[j]) {
                return false;
            }
        }
        self.mbs_capacity.satisfied(delta, s, z) && self.haps_capacity.satisfied(delta, s, z)
    }

    /// Feasibility of canonical per-SBS choices.
    pub fn feasible_choices(&self, choices: &[Association]) -> bool {
        let (delta, s, z) = encode(choices);
        self.feasible_at(&delta, &s, &z)
    }

    /// Human-readable LP-style dump for debugging.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        out.push_str("min ");
        out.push_str(&format!("{:.6}", self.obj_const_w));
        for j in 0..self.num_sbs {
            out.push_str(&format!(
                " + {:.6} d{j} + {:.6} s{j} + {:.6} z{j}",
                self.obj_delta[j], self.obj_s[j], self.obj_z[j]
            ));
        }
        out.push_str("\nsubject to\n  mbs_load:");
        for j in 0..self.num_sbs {
            out.push_str(&format!(
                " + {:.6} s{j} + {:.6} z{j}",
                self.mbs_capacity.s_coef[j], self.mbs_capacity.z_coef[j]
            ));
        }
        out.push_str(&format!(" <= {:.6}\n  haps_load:", self.mbs_capacity.rhs));
        for j in 0..self.num_sbs {
            out.push_str(&format!(
                " + {:.6} d{j} + {:.6} s{j} + {:.6} z{j}",
                self.haps_capacity.delta_coef[j],
                self.haps_capacity.s_coef[j],
                self.haps_capacity.z_coef[j]
            ));
        }
        out.push_str(&format!(" <= {:.6}\n", self.haps_capacity.rhs));
        for (j, row) in self.qos_rows.iter().enumerate() {
            out.push_str(&format!(
                "  qos{j}: {:.6e} d{j} + {:.6e} s{j} + {:.6e} z{j} + {:.6e} >= 0\n",
                row.delta_coef, row.s_coef, row.z_coef, row.constant
            ));
        }
        for j in 0..self.num_sbs {
            out.push_str(&format!("  link{j}: z{j} <= s{j}; z{j} <= d{j}; z{j} >= s{j} + d{j} - 1\n"));
        }
        out.push_str("binaries d*, s*, z*\n");
        out
    }
}

/// Canonical `(delta, s, z)` encode of a choice vector.
pub fn encode(choices: &[Association]) -> (Vec<bool>, Vec<bool>, Vec<bool>) {
    let n = choices.len();
    let mut delta = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for &c in choices {
        let (d, sv, zv) = c.encode();
        delta.push(d);
        s.push(sv);
        z.push(zv);
    }
    (delta, s, z)
}

/// Builds the linearized MIP for one state.
///
/// The objective encodes total network power (MBS + HAPS + SBS terms)
/// under the EARTH model; capacity rows keep both offload targets within
/// unit load; QoS rows (when enforced) require the assigned target's
/// per-user received power to reach `p_min`.
pub fn build_mip(
    state: &NetworkState,
    profiles: &NetworkProfiles,
    enforce_qos: bool,
) -> MipInstance {
    let n = state.num_sbs();
    let eta_m_pt = profiles.mbs.eta * profiles.mbs.p_transmit_w;
    let eta_h_pt = profiles.haps.eta * profiles.haps.p_transmit_w;

    let mut obj_delta = Vec::with_capacity(n);
    let mut obj_s = Vec::with_capacity(n);
    let mut obj_z = Vec::with_capacity(n);
    let mut mbs_s = Vec::with_capacity(n);
    let mut mbs_z = Vec::with_capacity(n);
    let mut haps_d = Vec::with_capacity(n);
    let mut haps_s = Vec::with_capacity(n);
    let mut haps_z = Vec::with_capacity(n);
    let mut wh_sum = 0.0;
    let mut obj_const_w =
        profiles.mbs.p_operational_w + eta_m_pt * state.lambda_m0
        + profiles.haps.p_operational_w + eta_h_pt * state.lambda_h0;

    for j in 0..n {
        let p = &profiles.sbs[j];
        let lam = state.sbs_loads[j];
        let wm = lam * state.phi_m[j];
        let wh = lam * state.phi_h[j];
        let mbs_marginal = eta_m_pt * wm;
        let haps_marginal = eta_h_pt * wh;

        obj_delta.push(p.p_operational_w + p.eta * lam * p.p_transmit_w - p.p_sleep_w
            - haps_marginal);
        obj_s.push(mbs_marginal - haps_marginal);
        obj_z.push(haps_marginal - mbs_marginal);
        obj_const_w += p.p_sleep_w + haps_marginal;

        mbs_s.push(wm);
        mbs_z.push(-wm);
        haps_d.push(-wh);
        haps_s.push(-wh);
        haps_z.push(wh);
        wh_sum += wh;
    }

    let qos_rows = if enforce_qos {
        (0..n)
            .map(|j| {
                let pm = state.p_r_mbs_mw[j];
                let ph = state.p_r_haps_mw[j];
                QosRow {
                    delta_coef: 1.0 + state.p_min_mw - ph,
                    s_coef: pm - ph,
                    z_coef: ph - pm,
                    constant: ph - state.p_min_mw,
                }
            })
            .collect()
    } else {
        Vec::new()
    };

    MipInstance {
        num_sbs: n,
        obj_delta,
        obj_s,
        obj_z,
        obj_const_w,
        mbs_capacity: CapacityRow {
            delta_coef: alloc::vec![0.0; n],
            s_coef: mbs_s,
            z_coef: mbs_z,
            rhs: 1.0 - state.lambda_m0,
        },
        haps_capacity: CapacityRow {
            delta_coef: haps_d,
            s_coef: haps_s,
            z_coef: haps_z,
            rhs: 1.0 - state.lambda_h0 - wh_sum,
        },
        qos_rows,
        lambda_m0: state.lambda_m0,
        lambda_h0: state.lambda_h0,
    }
}

/// Solves the instance exactly. The returned solution carries the
/// canonical objective and `optimal = true`.
///
/// Always feasible for instances built by [`build_mip`] (keeping every
/// SBS on satisfies all rows); restricted variants may report
/// [`Error::Infeasible`].
pub fn solve_exact(instance: &MipInstance) -> Result<Solution, Error> {
    let reduced = solver::ReducedProblem::from_instance(instance);
    let choices = solver::solve_reduced(&reduced, instance)?;
    let mut solution = Solution::evaluate(&choices, instance);
    solution.optimal = true;
    Ok(solution)
}

/// The HAPS-enhanced cell-switching decision for one step: builds the MIP
/// (with or without QoS rows) and solves it exactly.
pub fn haps_enhanced_cs(
    state: &NetworkState,
    profiles: &NetworkProfiles,
    enforce_qos: bool,
) -> Result<Solution, Error> {
    let instance = build_mip(state, profiles, enforce_qos);
    solve_exact(&instance)
}
