//! Scenario construction: base-station profiles, grid layout, and spatial
//! traffic models.
//!
//! A scenario is a square service area with a centered macro base station
//! (MBS), a HAPS platform overhead, and a regular grid of small base
//! stations (SBS). Per-SBS loads come from a spatial traffic density
//! normalized so the cell at the density peak carries exactly `alpha`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;

/// A 2D ground position in meters, origin at the area center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x_m: f64,
    pub y_m: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x_m: 0.0, y_m: 0.0 };

    pub fn new(x_m: f64, y_m: f64) -> Self {
        Point { x_m, y_m }
    }

    /// Euclidean ground distance to `other`, meters.
    pub fn distance_m(&self, other: &Point) -> f64 {
        let dx = self.x_m - other.x_m;
        let dy = self.y_m - other.y_m;
        math::sqrt(dx * dx + dy * dy)
    }
}

/// Base-station hardware class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BsClass {
    Haps,
    Macro,
    Rrh,
    Micro,
    Pico,
    Femto,
}

impl BsClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BsClass::Haps => "haps",
            BsClass::Macro => "macro",
            BsClass::Rrh => "rrh",
            BsClass::Micro => "micro",
            BsClass::Pico => "pico",
            BsClass::Femto => "femto",
        }
    }

    pub fn parse(s: &str) -> Option<BsClass> {
        Some(match s {
            "haps" => BsClass::Haps,
            "macro" => BsClass::Macro,
            "rrh" => BsClass::Rrh,
            "micro" => BsClass::Micro,
            "pico" => BsClass::Pico,
            "femto" => BsClass::Femto,
            _ => return None,
        })
    }
}

/// Hardware power/capacity profile of one base station.
///
/// Power figures follow the EARTH linear model: consumption is
/// `p_operational_w + eta * load * p_transmit_w` while active and
/// `p_sleep_w` while switched off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsProfile {
    pub class: BsClass,
    /// Slope of load-dependent power, dimensionless.
    pub eta: f64,
    /// Maximum transmit power, watts.
    pub p_transmit_w: f64,
    /// Load-independent operational power, watts.
    pub p_operational_w: f64,
    /// Sleep-mode power, watts.
    pub p_sleep_w: f64,
    /// Normalized traffic capacity (units of served demand at full load).
    pub capacity: f64,
    /// Transmit antenna gain, dBi.
    pub antenna_gain_dbi: f64,
    /// Antenna height above ground, meters (flight altitude for HAPS).
    pub height_m: f64,
}

impl BsProfile {
    /// Reference profile per class: EARTH power parameters, default
    /// capacities, antenna gains, and heights used by the case studies.
    pub fn reference(class: BsClass) -> BsProfile {
        match class {
            BsClass::Haps => BsProfile {
                class,
                eta: 4.7,
                p_transmit_w: 20.0,
                p_operational_w: 130.0,
                p_sleep_w: 75.0,
                capacity: 40.0,
                antenna_gain_dbi: 43.2,
                height_m: 20_000.0,
            },
            BsClass::Macro => BsProfile {
                class,
                eta: 4.7,
                p_transmit_w: 20.0,
                p_operational_w: 130.0,
                p_sleep_w: 75.0,
                capacity: 20.0,
                antenna_gain_dbi: 8.0,
                height_m: 25.0,
            },
            BsClass::Rrh => BsProfile {
                class,
                eta: 2.8,
                p_transmit_w: 20.0,
                p_operational_w: 84.0,
                p_sleep_w: 56.0,
                capacity: 5.0,
                antenna_gain_dbi: 0.0,
                height_m: 10.0,
            },
            BsClass::Micro => BsProfile {
                class,
                eta: 2.6,
                p_transmit_w: 6.3,
                p_operational_w: 56.0,
                p_sleep_w: 39.0,
                capacity: 5.0,
                antenna_gain_dbi: 0.0,
                height_m: 10.0,
            },
            BsClass::Pico => BsProfile {
                class,
                eta: 4.0,
                p_transmit_w: 0.13,
                p_operational_w: 6.8,
                p_sleep_w: 4.3,
                capacity: 5.0,
                antenna_gain_dbi: 0.0,
                height_m: 6.0,
            },
            BsClass::Femto => BsProfile {
                class,
                eta: 8.0,
                p_transmit_w: 0.05,
                p_operational_w: 4.8,
                p_sleep_w: 2.9,
                capacity: 5.0,
                antenna_gain_dbi: 0.0,
                height_m: 3.0,
            },
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::invalid("profiles.eta", "must be positive"));
        }
        if !(self.p_transmit_w > 0.0) {
            return Err(Error::invalid("profiles.p_transmit_w", "must be positive"));
        }
        if self.p_operational_w < 0.0 || self.p_sleep_w < 0.0 {
            return Err(Error::invalid("profiles", "power figures must be nonnegative"));
        }
        if !(self.capacity > 0.0) {
            return Err(Error::invalid("profiles.capacity", "must be positive"));
        }
        if !(self.height_m > 0.0) {
            return Err(Error::invalid("profiles.height_m", "must be positive"));
        }
        Ok(())
    }
}

/// One SBS site: position, profile palette index, and cell radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbsSite {
    pub position: Point,
    /// Index into `ScenarioConfig::profiles`.
    pub profile: usize,
    pub cell_radius_m: f64,
}

/// Physical deployment geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    /// Service area (width, height), meters, centered at the origin.
    pub area_m: (f64, f64),
    pub sbs: Vec<SbsSite>,
    pub mbs_position: Point,
    /// Ground projection of the HAPS platform.
    pub haps_ground_position: Point,
    /// HAPS flight altitude, meters.
    pub haps_altitude_m: f64,
    /// Earth radius used by the slant-range geometry, meters.
    pub earth_radius_m: f64,
    pub carrier_freq_ghz: f64,
    /// User terminal height, meters.
    pub ue_height_m: f64,
    /// Effective environment height for the breakpoint distance, meters.
    pub env_height_m: f64,
}

/// Spatial traffic density family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficKind {
    /// Single isotropic Gaussian blob.
    Gaussian,
    /// Two-component Gaussian mixture.
    GaussianMixture,
    /// Spatially flat demand.
    Uniform,
}

impl TrafficKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrafficKind::Gaussian => "gaussian",
            TrafficKind::GaussianMixture => "gmm2",
            TrafficKind::Uniform => "uniform",
        }
    }

    pub fn parse(s: &str) -> Option<TrafficKind> {
        Some(match s {
            "gaussian" => TrafficKind::Gaussian,
            "gmm2" => TrafficKind::GaussianMixture,
            "uniform" => TrafficKind::Uniform,
            _ => return None,
        })
    }
}

/// One Gaussian component of the traffic density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficComponent {
    pub mean: Point,
    pub stddev_m: f64,
    /// Mixture weight; weights sum to 1.
    pub weight: f64,
}

/// Per-step override of the single-Gaussian blob (models a moving hotspot).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub mean: Point,
    pub stddev_m: f64,
}

/// Spatial traffic model with peak load intensity `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficModel {
    pub kind: TrafficKind,
    /// One component for `Gaussian`, two for `GaussianMixture`, unused for
    /// `Uniform`.
    pub components: Vec<TrafficComponent>,
    /// Peak cell load, in [0, 1].
    pub alpha: f64,
    /// Optional per-step blob trajectory (single Gaussian only). Empty
    /// means the density is static.
    pub time_trace: Vec<TraceEntry>,
}

impl TrafficModel {
    pub fn gaussian(mean: Point, stddev_m: f64, alpha: f64) -> Self {
        TrafficModel {
            kind: TrafficKind::Gaussian,
            components: alloc::vec![TrafficComponent { mean, stddev_m, weight: 1.0 }],
            alpha,
            time_trace: Vec::new(),
        }
    }

    /// Unnormalized mixture density at `p` (components weighted by their
    /// peak-normalized contribution).
    fn density(&self, p: Point) -> f64 {
        let mut d = 0.0;
        for c in &self.components {
            let r2 = {
                let dx = p.x_m - c.mean.x_m;
                let dy = p.y_m - c.mean.y_m;
                dx * dx + dy * dy
            };
            let s2 = c.stddev_m * c.stddev_m;
            d += c.weight / s2 * math::exp(-r2 / (2.0 * s2));
        }
        d
    }

    /// Location of the global density mode, found by mean-shift iteration
    /// started from every component mean. Deterministic.
    fn mode(&self) -> Point {
        let mut best = self.components[0].mean;
        let mut best_density = self.density(best);
        for c in &self.components {
            let mut x = c.mean;
            for _ in 0..100 {
                let mut wsum = 0.0;
                let mut num = (0.0, 0.0);
                for ci in &self.components {
                    let dx = x.x_m - ci.mean.x_m;
                    let dy = x.y_m - ci.mean.y_m;
                    let s2 = ci.stddev_m * ci.stddev_m;
                    let w = ci.weight / (s2 * s2) * math::exp(-(dx * dx + dy * dy) / (2.0 * s2));
                    wsum += w;
                    num.0 += w * ci.mean.x_m;
                    num.1 += w * ci.mean.y_m;
                }
                if wsum <= 0.0 {
                    break;
                }
                let next = Point::new(num.0 / wsum, num.1 / wsum);
                let step = x.distance_m(&next);
                x = next;
                if step < 1e-9 {
                    break;
                }
            }
            let d = self.density(x);
            if d > best_density {
                best_density = d;
                best = x;
            }
        }
        best
    }

    pub fn validate(&self, num_steps: usize) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(
                "traffic.alpha",
                alloc::format!("alpha out of range: {} (expected [0, 1])", self.alpha),
            ));
        }
        let expected = match self.kind {
            TrafficKind::Gaussian => Some(1),
            TrafficKind::GaussianMixture => Some(2),
            TrafficKind::Uniform => None,
        };
        if let Some(n) = expected {
            if self.components.len() != n {
                return Err(Error::invalid(
                    "traffic.components",
                    alloc::format!(
                        "{} requires exactly {n} component(s), got {}",
                        self.kind.as_str(),
                        self.components.len()
                    ),
                ));
            }
            let mut wsum = 0.0;
            for c in &self.components {
                if !(c.stddev_m > 0.0) {
                    return Err(Error::invalid("traffic.stddev_m", "must be positive"));
                }
                wsum += c.weight;
            }
            if math::abs(wsum - 1.0) > 1e-9 {
                return Err(Error::invalid(
                    "traffic.components",
                    alloc::format!("weights must sum to 1, got {wsum}"),
                ));
            }
        }
        if !self.time_trace.is_empty() {
            if self.kind != TrafficKind::Gaussian {
                return Err(Error::invalid(
                    "traffic.time_trace",
                    "only supported for the single-gaussian kind",
                ));
            }
            if self.time_trace.len() != num_steps {
                return Err(Error::invalid(
                    "traffic.time_trace",
                    alloc::format!(
                        "length {} does not match num_steps {num_steps}",
                        self.time_trace.len()
                    ),
                ));
            }
            for t in &self.time_trace {
                if !(t.stddev_m > 0.0) {
                    return Err(Error::invalid("traffic.time_trace", "stddev must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// Named parameter presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseStudy {
    /// Homogeneous deployment: 49 micro SBSs with zero sleep power.
    A,
    /// Heterogeneous deployment: micro/RRH/pico/femto cycle with reference
    /// sleep powers.
    B,
}

impl CaseStudy {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseStudy::A => "A",
            CaseStudy::B => "B",
        }
    }

    pub fn parse(s: &str) -> Option<CaseStudy> {
        Some(match s {
            "A" | "a" => CaseStudy::A,
            "B" | "b" => CaseStudy::B,
            _ => return None,
        })
    }
}

/// Resolved per-role profiles for one scenario instance.
#[derive(Debug, Clone)]
pub struct NetworkProfiles {
    pub mbs: BsProfile,
    pub haps: BsProfile,
    /// One entry per SBS, in site order.
    pub sbs: Vec<BsProfile>,
}

/// Complete simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub case_study: CaseStudy,
    pub layout: NetworkLayout,
    /// Profile palette referenced by `layout.sbs[*].profile` and the
    /// MBS/HAPS indices below.
    pub profiles: Vec<BsProfile>,
    pub mbs_profile: usize,
    pub haps_profile: usize,
    pub traffic: TrafficModel,
    /// QoS threshold on per-user received power, dBm.
    pub p_min_dbm: f64,
    /// Shadow-fading standard deviation under LoS, dB.
    pub sigma_los_db: f64,
    /// Shadow-fading standard deviation under NLoS, dB.
    pub sigma_nlos_db: f64,
    /// Users sharing the MBS transmit power.
    pub u_max_mbs: u32,
    /// Users sharing the HAPS transmit power.
    pub u_max_haps: u32,
    /// Load on the MBS before any offloading.
    pub lambda_m0: f64,
    /// Load on the HAPS before any offloading.
    pub lambda_h0: f64,
    pub num_steps: usize,
    pub rng_seed: u64,
}

/// Returns the centers of a k-by-k grid tiling of `area`, row-major from
/// the (-x, -y) corner. `n` must be a perfect square.
pub fn grid_positions(n: usize, area_m: (f64, f64)) -> Result<Vec<Point>, Error> {
    let mut k = 0usize;
    while k * k < n {
        k += 1;
    }
    if k * k != n || n == 0 {
        return Err(Error::invalid(
            "num_sbs",
            alloc::format!("{n} is not a positive perfect square (grid layout)"),
        ));
    }
    let (w, h) = area_m;
    let pitch_x = w / k as f64;
    let pitch_y = h / k as f64;
    let mut out = Vec::with_capacity(n);
    for row in 0..k {
        for col in 0..k {
            out.push(Point::new(
                -w / 2.0 + (col as f64 + 0.5) * pitch_x,
                -h / 2.0 + (row as f64 + 0.5) * pitch_y,
            ));
        }
    }
    Ok(out)
}

/// Builds the reference scenario for a case study: 2000 m x 2000 m area,
/// 49-cell grid, 2.5 GHz carrier, HAPS at 20 km, single Gaussian hotspot
/// at the center (stddev 400 m, alpha 0.5).
pub fn case_study_preset(case: CaseStudy) -> ScenarioConfig {
    build_preset(case, 49).expect("reference preset is valid")
}

/// `case_study_preset` with a custom SBS count (perfect square).
pub fn build_preset(case: CaseStudy, num_sbs: usize) -> Result<ScenarioConfig, Error> {
    let area = (2000.0, 2000.0);
    let positions = grid_positions(num_sbs, area)?;

    let mut profiles = alloc::vec![
        BsProfile::reference(BsClass::Haps),
        BsProfile::reference(BsClass::Macro),
    ];
    let site_profile = |i: usize| -> usize {
        match case {
            CaseStudy::A => 2,
            CaseStudy::B => 2 + (i % 4),
        }
    };
    match case {
        CaseStudy::A => {
            let mut micro = BsProfile::reference(BsClass::Micro);
            // Case A models SBS sleep as free.
            micro.p_sleep_w = 0.0;
            profiles.push(micro);
        }
        CaseStudy::B => {
            profiles.push(BsProfile::reference(BsClass::Micro));
            profiles.push(BsProfile::reference(BsClass::Rrh));
            profiles.push(BsProfile::reference(BsClass::Pico));
            profiles.push(BsProfile::reference(BsClass::Femto));
        }
    }

    let sbs = positions
        .iter()
        .enumerate()
        .map(|(i, &position)| SbsSite { position, profile: site_profile(i), cell_radius_m: 50.0 })
        .collect();

    let config = ScenarioConfig {
        case_study: case,
        layout: NetworkLayout {
            area_m: area,
            sbs,
            mbs_position: Point::ORIGIN,
            haps_ground_position: Point::ORIGIN,
            haps_altitude_m: 20_000.0,
            earth_radius_m: 6_371_000.0,
            carrier_freq_ghz: 2.5,
            ue_height_m: 1.5,
            env_height_m: 1.0,
        },
        profiles,
        mbs_profile: 1,
        haps_profile: 0,
        traffic: TrafficModel::gaussian(Point::ORIGIN, 400.0, 0.5),
        p_min_dbm: -70.0,
        sigma_los_db: 4.0,
        sigma_nlos_db: 6.0,
        u_max_mbs: 20,
        u_max_haps: 40,
        lambda_m0: 0.0,
        lambda_h0: 0.0,
        num_steps: 1,
        rng_seed: 42,
    };
    config.validate()?;
    Ok(config)
}

impl ScenarioConfig {
    pub fn num_sbs(&self) -> usize {
        self.layout.sbs.len()
    }

    pub fn mbs_profile(&self) -> &BsProfile {
        &self.profiles[self.mbs_profile]
    }

    pub fn haps_profile(&self) -> &BsProfile {
        &self.profiles[self.haps_profile]
    }

    pub fn sbs_profile(&self, j: usize) -> &BsProfile {
        &self.profiles[self.layout.sbs[j].profile]
    }

    /// Resolves the palette into per-role profile copies.
    pub fn network_profiles(&self) -> NetworkProfiles {
        NetworkProfiles {
            mbs: *self.mbs_profile(),
            haps: *self.haps_profile(),
            sbs: self.layout.sbs.iter().map(|s| self.profiles[s.profile]).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let (w, h) = self.layout.area_m;
        if !(w > 0.0 && h > 0.0) {
            return Err(Error::invalid("area_m", "must be positive"));
        }
        if self.layout.sbs.is_empty() {
            return Err(Error::invalid("num_sbs", "at least one SBS is required"));
        }
        for p in &self.profiles {
            p.validate()?;
        }
        let bad_index = |field: &'static str, i: usize| {
            Err(Error::invalid(field, alloc::format!("profile index {i} out of range")))
        };
        if self.mbs_profile >= self.profiles.len() {
            return bad_index("mbs_profile", self.mbs_profile);
        }
        if self.haps_profile >= self.profiles.len() {
            return bad_index("haps_profile", self.haps_profile);
        }
        for (j, site) in self.layout.sbs.iter().enumerate() {
            if site.profile >= self.profiles.len() {
                return bad_index("sbs.profile", site.profile);
            }
            if !(site.cell_radius_m > 0.0) {
                return Err(Error::invalid("cell_radius_m", "must be positive"));
            }
            let inside = math::abs(site.position.x_m) <= w / 2.0 + 1e-9
                && math::abs(site.position.y_m) <= h / 2.0 + 1e-9;
            if !inside {
                return Err(Error::invalid(
                    "sbs.position",
                    alloc::format!("SBS {j} lies outside the service area"),
                ));
            }
        }
        if !(self.layout.haps_altitude_m > 0.0) {
            return Err(Error::invalid("haps_altitude_m", "must be positive"));
        }
        if !(self.layout.earth_radius_m > 0.0) {
            return Err(Error::invalid("earth_radius_m", "must be positive"));
        }
        if !(self.layout.carrier_freq_ghz > 0.0) {
            return Err(Error::invalid("carrier_freq_ghz", "must be positive"));
        }
        let h_e = self.layout.env_height_m;
        if !(self.layout.ue_height_m > h_e) {
            return Err(Error::invalid(
                "ue_height_m",
                "user height must exceed the effective environment height",
            ));
        }
        if !(self.mbs_profile().height_m > h_e) {
            return Err(Error::invalid(
                "profiles.height_m",
                "MBS height must exceed the effective environment height",
            ));
        }
        self.traffic.validate(self.num_steps)?;
        if !(self.sigma_los_db >= 0.0 && self.sigma_nlos_db >= 0.0) {
            return Err(Error::invalid("sigma_los_db", "shadowing stddev must be nonnegative"));
        }
        if self.u_max_mbs == 0 || self.u_max_haps == 0 {
            return Err(Error::invalid("u_max_mbs", "user counts must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.lambda_m0) {
            return Err(Error::invalid("lambda_m0", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.lambda_h0) {
            return Err(Error::invalid("lambda_h0", "must lie in [0, 1]"));
        }
        if self.num_steps == 0 {
            return Err(Error::invalid("num_steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-SBS loads at `step`: the traffic density sampled at each SBS
/// position, normalized so the density mode maps to exactly `alpha`.
///
/// Deterministic: the density is an analytic function of the scenario, so
/// no randomness is involved.
pub fn generate_loads(config: &ScenarioConfig, step: usize) -> Result<Vec<f64>, Error> {
    if step >= config.num_steps {
        return Err(Error::domain(alloc::format!(
            "step {step} out of range (num_steps {})",
            config.num_steps
        )));
    }
    let traffic = &config.traffic;
    let alpha = traffic.alpha;
    let n = config.num_sbs();
    match traffic.kind {
        TrafficKind::Uniform => Ok(alloc::vec![alpha; n]),
        TrafficKind::Gaussian => {
            let (mean, stddev) = if traffic.time_trace.is_empty() {
                (traffic.components[0].mean, traffic.components[0].stddev_m)
            } else {
                let t = traffic.time_trace[step];
                (t.mean, t.stddev_m)
            };
            let s2 = 2.0 * stddev * stddev;
            Ok(config
                .layout
                .sbs
                .iter()
                .map(|site| {
                    let d = site.position.distance_m(&mean);
                    clamp_unit(alpha * math::exp(-d * d / s2))
                })
                .collect())
        }
        TrafficKind::GaussianMixture => {
            let mode_density = traffic.density(traffic.mode());
            Ok(config
                .layout
                .sbs
                .iter()
                .map(|site| clamp_unit(alpha * traffic.density(site.position) / mode_density))
                .collect())
        }
    }
}

#[inline]
fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Human-readable config summary used by error paths in consumers.
pub fn describe(config: &ScenarioConfig) -> String {
    alloc::format!(
        "case {} | {} SBSs | alpha {} | p_min {} dBm | traffic {}",
        config.case_study.as_str(),
        config.num_sbs(),
        config.traffic.alpha,
        config.p_min_dbm,
        config.traffic.kind.as_str()
    )
}
