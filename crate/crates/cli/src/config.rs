//! Scenario file format: JSON overrides applied on top of a case-study
//! preset. Every key is optional; unknown keys are rejected so typos
//! fail loudly instead of silently running the default.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use vhetnet_cs_core::scenario::{
    build_preset, BsClass, BsProfile, CaseStudy, Point, ScenarioConfig, TraceEntry,
    TrafficComponent, TrafficKind, TrafficModel,
};

/// On-disk scenario overrides.
#[derive(Debug, Clone, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// "A" or "B".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_study: Option<String>,
    /// Number of SBSs; must be a perfect square for the grid layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_sbs: Option<usize>,
    /// Service area, meters, `[width, height]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_m: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_radius_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_freq_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haps_altitude_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_min_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traffic: Option<TrafficSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_los_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_nlos_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_max_mbs: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_max_haps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_m0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_h0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    /// Per-class hardware overrides, applied to every profile of the
    /// matching class.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profiles: Vec<ProfileOverride>,
}

/// Traffic model overrides.
#[derive(Debug, Clone, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrafficSection {
    /// "gaussian", "gmm2", or "uniform".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Hotspot center `[x, y]` in meters (single-Gaussian kinds).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stddev_m: Option<f64>,
    /// Peak load intensity in [0, 1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Mixture components (used by "gmm2").
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSection>,
    /// Per-step hotspot movement; length must cover num_steps when set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub time_trace: Vec<TraceSection>,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComponentSection {
    pub mean: [f64; 2],
    pub stddev_m: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TraceSection {
    pub mean: [f64; 2],
    pub stddev_m: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProfileOverride {
    /// "haps", "macro", "micro", "rrh", "pico", or "femto".
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_transmit_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_operational_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_sleep_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antenna_gain_dbi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_m: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading scenario file {}", path.display()))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing scenario file {}", path.display()))?;
        Ok(file)
    }

    /// Case study named by the file, if any.
    pub fn case(&self) -> Result<Option<CaseStudy>> {
        match &self.case_study {
            None => Ok(None),
            Some(s) => match CaseStudy::parse(s) {
                Some(c) => Ok(Some(c)),
                None => bail!("case_study: expected \"A\" or \"B\", got \"{s}\""),
            },
        }
    }

    /// Builds the preset for `case` and applies every override. The
    /// result is fully validated.
    pub fn resolve(&self, case: CaseStudy) -> Result<ScenarioConfig> {
        let num_sbs = self.num_sbs.unwrap_or(49);
        let mut config = build_preset(case, num_sbs)?;

        if let Some(area) = self.area_m {
            // The grid is derived from the area: rebuild positions.
            config.layout.area_m = (area[0], area[1]);
            let positions =
                vhetnet_cs_core::scenario::grid_positions(num_sbs, config.layout.area_m)?;
            for (site, pos) in config.layout.sbs.iter_mut().zip(positions) {
                site.position = pos;
            }
        }
        if let Some(r) = self.cell_radius_m {
            for site in &mut config.layout.sbs {
                site.cell_radius_m = r;
            }
        }
        if let Some(f) = self.carrier_freq_ghz {
            config.layout.carrier_freq_ghz = f;
        }
        if let Some(h) = self.haps_altitude_m {
            config.layout.haps_altitude_m = h;
        }
        if let Some(p) = self.p_min_dbm {
            config.p_min_dbm = p;
        }
        if let Some(s) = self.sigma_los_db {
            config.sigma_los_db = s;
        }
        if let Some(s) = self.sigma_nlos_db {
            config.sigma_nlos_db = s;
        }
        if let Some(u) = self.u_max_mbs {
            config.u_max_mbs = u;
        }
        if let Some(u) = self.u_max_haps {
            config.u_max_haps = u;
        }
        if let Some(l) = self.lambda_m0 {
            config.lambda_m0 = l;
        }
        if let Some(l) = self.lambda_h0 {
            config.lambda_h0 = l;
        }
        if let Some(n) = self.num_steps {
            config.num_steps = n;
        }
        if let Some(seed) = self.rng_seed {
            config.rng_seed = seed;
        }
        if let Some(traffic) = &self.traffic {
            apply_traffic(&mut config.traffic, traffic)?;
        }
        for over in &self.profiles {
            apply_profile(&mut config.profiles, over)?;
        }

        config.validate()?;
        Ok(config)
    }
}

fn apply_traffic(model: &mut TrafficModel, section: &TrafficSection) -> Result<()> {
    if let Some(kind) = &section.kind {
        model.kind = TrafficKind::parse(kind)
            .ok_or_else(|| anyhow::anyhow!("traffic.kind: unknown kind \"{kind}\""))?;
    }
    if let Some(mean) = section.mean {
        for c in &mut model.components {
            c.mean = Point::new(mean[0], mean[1]);
        }
    }
    if let Some(sd) = section.stddev_m {
        for c in &mut model.components {
            c.stddev_m = sd;
        }
    }
    if let Some(alpha) = section.alpha {
        model.alpha = alpha;
    }
    if !section.components.is_empty() {
        model.components = section
            .components
            .iter()
            .map(|c| TrafficComponent {
                mean: Point::new(c.mean[0], c.mean[1]),
                stddev_m: c.stddev_m,
                weight: c.weight,
            })
            .collect();
    }
    if !section.time_trace.is_empty() {
        model.time_trace = section
            .time_trace
            .iter()
            .map(|t| TraceEntry {
                mean: Point::new(t.mean[0], t.mean[1]),
                stddev_m: t.stddev_m,
            })
            .collect();
    }
    Ok(())
}

fn apply_profile(profiles: &mut [BsProfile], over: &ProfileOverride) -> Result<()> {
    let class = BsClass::parse(&over.class)
        .ok_or_else(|| anyhow::anyhow!("profiles.class: unknown class \"{}\"", over.class))?;
    let mut touched = false;
    for p in profiles.iter_mut().filter(|p| p.class == class) {
        touched = true;
        if let Some(v) = over.eta {
            p.eta = v;
        }
        if let Some(v) = over.p_transmit_w {
            p.p_transmit_w = v;
        }
        if let Some(v) = over.p_operational_w {
            p.p_operational_w = v;
        }
        if let Some(v) = over.p_sleep_w {
            p.p_sleep_w = v;
        }
        if let Some(v) = over.capacity {
            p.capacity = v;
        }
        if let Some(v) = over.antenna_gain_dbi {
            p.antenna_gain_dbi = v;
        }
        if let Some(v) = over.height_m {
            p.height_m = v;
        }
    }
    if !touched {
        bail!(
            "profiles.class: \"{}\" does not appear in this case study",
            over.class
        );
    }
    Ok(())
}
