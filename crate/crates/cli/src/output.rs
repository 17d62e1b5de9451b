//! Plot-ready artifacts: per-figure-family CSV files, snapshot and
//! link-budget tables, and the reproducibility manifest.
//!
//! Rows aggregate the step-level records of one sweep cell over seeds and
//! steps (mean plus sample standard deviation). Means use exact
//! summation, groups iterate in axis order, and floats print in shortest
//! round-trip form, so identical sweeps produce byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use vhetnet_cs_core::math::exact_sum;
use vhetnet_cs_core::metrics::MetricsRecord;
use vhetnet_cs_core::scenario::ScenarioConfig;

use crate::runner::{Family, LinkBudgetRow, SnapshotRow, SweepResults, SweepSpec};

/// The eight figure-family files written by every sweep.
pub const SWEEP_FILES: [&str; 8] = [
    "power-vs-alpha.csv",
    "traffic-vs-alpha.csv",
    "ee-vs-alpha.csv",
    "power-vs-pmin.csv",
    "traffic-vs-pmin.csv",
    "ee-vs-pmin.csv",
    "runtime-vs-s.csv",
    "power-vs-s.csv",
];

/// Mean and sample standard deviation of one metric over a record group.
fn stats(records: &[&MetricsRecord], metric: impl Fn(&MetricsRecord) -> f64) -> (f64, f64) {
    let values: Vec<f64> = records.iter().map(|r| metric(r)).collect();
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = exact_sum(&values) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    // Corrected two-pass variance: subtracting the squared residual-sum
    // cancels the rounding of `mean`, so identical samples give exactly 0.
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let sq: Vec<f64> = dev.iter().map(|d| d * d).collect();
    let residual = exact_sum(&dev);
    let var = (exact_sum(&sq) - residual * residual / n as f64) / (n - 1) as f64;
    (mean, var.max(0.0).sqrt())
}

fn median(records: &[&MetricsRecord], metric: impl Fn(&MetricsRecord) -> f64) -> f64 {
    let mut values: Vec<f64> = records.iter().map(|r| metric(r)).collect();
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// One aggregated sweep cell: axis coordinates plus its records.
struct Group<'a> {
    kind: &'static str,
    alpha: f64,
    p_min_dbm: f64,
    num_sbs: usize,
    strategy: &'static str,
    records: Vec<&'a MetricsRecord>,
}

/// Groups step-level records by cell coordinates, in axis order.
fn group<'a>(results: &'a SweepResults, family: Family) -> Vec<Group<'a>> {
    let mut map: BTreeMap<(usize, usize, usize), Group<'a>> = BTreeMap::new();
    for (job, records) in results.jobs.iter().zip(&results.records) {
        if job.family != family || records.is_empty() {
            continue;
        }
        let key = (job.kind_idx, job.axis_idx, job.strategy_idx);
        let entry = map.entry(key).or_insert_with(|| Group {
            kind: job.kind.as_str(),
            alpha: job.alpha,
            p_min_dbm: job.p_min_dbm,
            num_sbs: job.num_sbs,
            strategy: job.strategy.as_str(),
            records: Vec::new(),
        });
        entry.records.extend(records.iter());
    }
    map.into_values().collect()
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Power columns: grid power always, total power unless the sweep is
/// grid-only.
fn power_columns(grid_only: bool) -> Vec<&'static str> {
    let mut cols = Vec::new();
    if !grid_only {
        cols.extend(["total_power_w_mean", "total_power_w_std"]);
    }
    cols.extend([
        "grid_power_w_mean",
        "grid_power_w_std",
        "num_off_mean",
        "num_off_std",
        "lambda_m_mean",
        "lambda_h_mean",
    ]);
    cols
}

fn power_values(g: &Group<'_>, grid_only: bool) -> Vec<String> {
    let mut out = Vec::new();
    if !grid_only {
        let (m, s) = stats(&g.records, |r| r.total_power_w);
        out.extend([fmt(m), fmt(s)]);
    }
    let (m, s) = stats(&g.records, |r| r.grid_power_w);
    out.extend([fmt(m), fmt(s)]);
    let (m, s) = stats(&g.records, |r| r.num_off as f64);
    out.extend([fmt(m), fmt(s)]);
    let (lm, _) = stats(&g.records, |r| r.lambda_m);
    let (lh, _) = stats(&g.records, |r| r.lambda_h);
    out.extend([fmt(lm), fmt(lh)]);
    out
}

fn ee_columns(grid_only: bool) -> Vec<&'static str> {
    let mut cols = Vec::new();
    if !grid_only {
        cols.extend(["energy_efficiency_mean", "energy_efficiency_std"]);
    }
    cols.extend(["grid_energy_efficiency_mean", "grid_energy_efficiency_std"]);
    cols
}

fn ee_values(g: &Group<'_>, grid_only: bool) -> Vec<String> {
    let mut out = Vec::new();
    if !grid_only {
        let (m, s) = stats(&g.records, |r| r.energy_efficiency);
        out.extend([fmt(m), fmt(s)]);
    }
    let (m, s) = stats(&g.records, |r| r.grid_energy_efficiency);
    out.extend([fmt(m), fmt(s)]);
    out
}

/// Writes the eight figure-family CSVs into `out_dir` and returns their
/// file names.
pub fn write_sweep_csvs(
    spec: &SweepSpec,
    results: &SweepResults,
    out_dir: &Path,
) -> Result<Vec<String>> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let grid_only = spec.grid_only;
    let alpha_groups = group(results, Family::Alpha);
    let pmin_groups = group(results, Family::PMin);
    let s_groups = group(results, Family::SbsCount);

    let alpha_key = |g: &Group<'_>| vec![g.kind.to_string(), fmt(g.alpha), g.strategy.to_string()];
    let pmin_key = |g: &Group<'_>| vec![fmt(g.p_min_dbm), g.strategy.to_string()];
    let s_key = |g: &Group<'_>| vec![g.num_sbs.to_string(), g.strategy.to_string()];
    let n_of = |g: &Group<'_>| g.records.len().to_string();

    // power-vs-alpha
    let mut header = vec!["traffic", "alpha", "strategy", "n"];
    header.extend(power_columns(grid_only));
    write_csv(
        &out_dir.join(SWEEP_FILES[0]),
        &header,
        alpha_groups
            .iter()
            .map(|g| {
                let mut row = alpha_key(g);
                row.push(n_of(g));
                row.extend(power_values(g, grid_only));
                row
            })
            .collect(),
    )?;

    // traffic-vs-alpha
    write_csv(
        &out_dir.join(SWEEP_FILES[1]),
        &["traffic", "alpha", "strategy", "n", "served_traffic_qos_mean", "served_traffic_qos_std"],
        alpha_groups
            .iter()
            .map(|g| {
                let mut row = alpha_key(g);
                row.push(n_of(g));
                let (m, s) = stats(&g.records, |r| r.served_traffic_qos);
                row.extend([fmt(m), fmt(s)]);
                row
            })
            .collect(),
    )?;

    // ee-vs-alpha
    let mut header = vec!["traffic", "alpha", "strategy", "n"];
    header.extend(ee_columns(grid_only));
    write_csv(
        &out_dir.join(SWEEP_FILES[2]),
        &header,
        alpha_groups
            .iter()
            .map(|g| {
                let mut row = alpha_key(g);
                row.push(n_of(g));
                row.extend(ee_values(g, grid_only));
                row
            })
            .collect(),
    )?;

    // power-vs-pmin
    let mut header = vec!["p_min_dbm", "strategy", "n"];
    header.extend(power_columns(grid_only));
    write_csv(
        &out_dir.join(SWEEP_FILES[3]),
        &header,
        pmin_groups
            .iter()
            .map(|g| {
                let mut row = pmin_key(g);
                row.push(n_of(g));
                row.extend(power_values(g, grid_only));
                row
            })
            .collect(),
    )?;

    // traffic-vs-pmin
    write_csv(
        &out_dir.join(SWEEP_FILES[4]),
        &["p_min_dbm", "strategy", "n", "served_traffic_qos_mean", "served_traffic_qos_std"],
        pmin_groups
            .iter()
            .map(|g| {
                let mut row = pmin_key(g);
                row.push(n_of(g));
                let (m, s) = stats(&g.records, |r| r.served_traffic_qos);
                row.extend([fmt(m), fmt(s)]);
                row
            })
            .collect(),
    )?;

    // ee-vs-pmin
    let mut header = vec!["p_min_dbm", "strategy", "n"];
    header.extend(ee_columns(grid_only));
    write_csv(
        &out_dir.join(SWEEP_FILES[5]),
        &header,
        pmin_groups
            .iter()
            .map(|g| {
                let mut row = pmin_key(g);
                row.push(n_of(g));
                row.extend(ee_values(g, grid_only));
                row
            })
            .collect(),
    )?;

    // runtime-vs-s
    write_csv(
        &out_dir.join(SWEEP_FILES[6]),
        &[
            "num_sbs",
            "strategy",
            "n",
            "solve_time_s_mean",
            "solve_time_s_std",
            "solve_time_s_median",
        ],
        s_groups
            .iter()
            .map(|g| {
                let mut row = s_key(g);
                row.push(n_of(g));
                let (m, s) = stats(&g.records, |r| r.solve_time_s);
                row.extend([fmt(m), fmt(s), fmt(median(&g.records, |r| r.solve_time_s))]);
                row
            })
            .collect(),
    )?;

    // power-vs-s
    let mut header = vec!["num_sbs", "strategy", "n"];
    header.extend(power_columns(grid_only));
    write_csv(
        &out_dir.join(SWEEP_FILES[7]),
        &header,
        s_groups
            .iter()
            .map(|g| {
                let mut row = s_key(g);
                row.push(n_of(g));
                row.extend(power_values(g, grid_only));
                row
            })
            .collect(),
    )?;

    Ok(SWEEP_FILES.iter().map(|s| s.to_string()).collect())
}

/// Canonical JSON value covering every scenario field; the manifest hash
/// is the SHA-256 of its serialization (keys sort deterministically).
pub fn config_value(config: &ScenarioConfig) -> Value {
    let point = |p: &vhetnet_cs_core::scenario::Point| json!([p.x_m, p.y_m]);
    let layout = &config.layout;
    json!({
        "case_study": match config.case_study {
            vhetnet_cs_core::scenario::CaseStudy::A => "A",
            vhetnet_cs_core::scenario::CaseStudy::B => "B",
        },
        "layout": {
            "area_m": [layout.area_m.0, layout.area_m.1],
            "sbs": layout.sbs.iter().map(|s| json!({
                "position": point(&s.position),
                "profile": s.profile,
                "cell_radius_m": s.cell_radius_m,
            })).collect::<Vec<_>>(),
            "mbs_position": point(&layout.mbs_position),
            "haps_ground_position": point(&layout.haps_ground_position),
            "haps_altitude_m": layout.haps_altitude_m,
            "earth_radius_m": layout.earth_radius_m,
            "carrier_freq_ghz": layout.carrier_freq_ghz,
            "ue_height_m": layout.ue_height_m,
            "env_height_m": layout.env_height_m,
        },
        "profiles": config.profiles.iter().map(|p| json!({
            "class": p.class.as_str(),
            "eta": p.eta,
            "p_transmit_w": p.p_transmit_w,
            "p_operational_w": p.p_operational_w,
            "p_sleep_w": p.p_sleep_w,
            "capacity": p.capacity,
            "antenna_gain_dbi": p.antenna_gain_dbi,
            "height_m": p.height_m,
        })).collect::<Vec<_>>(),
        "mbs_profile": config.mbs_profile,
        "haps_profile": config.haps_profile,
        "traffic": {
            "kind": config.traffic.kind.as_str(),
            "components": config.traffic.components.iter().map(|c| json!({
                "mean": point(&c.mean),
                "stddev_m": c.stddev_m,
                "weight": c.weight,
            })).collect::<Vec<_>>(),
            "alpha": config.traffic.alpha,
            "time_trace": config.traffic.time_trace.iter().map(|t| json!({
                "mean": point(&t.mean),
                "stddev_m": t.stddev_m,
            })).collect::<Vec<_>>(),
        },
        "p_min_dbm": config.p_min_dbm,
        "sigma_los_db": config.sigma_los_db,
        "sigma_nlos_db": config.sigma_nlos_db,
        "u_max_mbs": config.u_max_mbs,
        "u_max_haps": config.u_max_haps,
        "lambda_m0": config.lambda_m0,
        "lambda_h0": config.lambda_h0,
        "num_steps": config.num_steps,
        "rng_seed": config.rng_seed,
    })
}

pub fn config_sha256(config: &ScenarioConfig) -> String {
    let text = config_value(config).to_string();
    let digest = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Writes `manifest.json` next to the CSVs and returns its path.
pub fn write_manifest(
    spec: &SweepSpec,
    results: &SweepResults,
    base_config: &ScenarioConfig,
    outputs: &[String],
    out_dir: &Path,
) -> Result<PathBuf> {
    let records: usize = results.records.iter().map(Vec::len).sum();
    let manifest = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "case_study": match spec.case_study {
            vhetnet_cs_core::scenario::CaseStudy::A => "A",
            vhetnet_cs_core::scenario::CaseStudy::B => "B",
        },
        "config_sha256": config_sha256(base_config),
        "master_seed": spec.master_seed,
        "seed_indices": (0..spec.num_seeds).collect::<Vec<u64>>(),
        "num_steps": base_config.num_steps,
        "axes": {
            "alphas": spec.alphas,
            "p_mins_dbm": spec.p_mins_dbm,
            "sbs_counts": spec.sbs_counts,
            "strategies": spec.strategies.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            "traffic_kinds": spec.traffic_kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
        },
        "grid_only": spec.grid_only,
        "outputs": outputs,
        "records": records,
        "skipped_es_cells": results.skipped_es_cells,
        "failures": results.failures,
    });
    let path = out_dir.join("manifest.json");
    let mut file = fs::File::create(&path)
        .with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut file, &manifest)?;
    file.write_all(b"\n")?;
    Ok(path)
}

pub fn write_snapshot_csv(rows: &[SnapshotRow], mut out: impl std::io::Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record([
        "sbs_index",
        "x_m",
        "y_m",
        "class",
        "load",
        "status",
        "rx_mbs_dbm",
        "rx_haps_dbm",
        "d2d_clamped",
    ])?;
    for r in rows {
        writer.write_record([
            r.sbs_index.to_string(),
            fmt(r.x_m),
            fmt(r.y_m),
            r.class.to_string(),
            fmt(r.load),
            r.status.to_string(),
            fmt(r.rx_mbs_dbm),
            fmt(r.rx_haps_dbm),
            r.d2d_clamped.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_linkbudget_csv(rows: &[LinkBudgetRow], mut out: impl std::io::Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record([
        "sbs_index",
        "x_m",
        "y_m",
        "d2d_mbs_m",
        "elevation_deg",
        "slant_m",
        "los_prob_mbs",
        "los_prob_haps",
        "pathloss_mbs_db",
        "pathloss_haps_db",
        "rx_mbs_dbm",
        "rx_haps_dbm",
        "d2d_clamped",
    ])?;
    for r in rows {
        writer.write_record([
            r.sbs_index.to_string(),
            fmt(r.x_m),
            fmt(r.y_m),
            fmt(r.d2d_mbs_m),
            fmt(r.elevation_deg),
            fmt(r.slant_m),
            fmt(r.los_prob_mbs),
            fmt(r.los_prob_haps),
            fmt(r.pathloss_mbs_db),
            fmt(r.pathloss_haps_db),
            fmt(r.rx_mbs_dbm),
            fmt(r.rx_haps_dbm),
            r.d2d_clamped.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigFile;
    use vhetnet_cs_core::scenario::CaseStudy;

    #[test]
    fn stats_handles_singletons_and_spread() {
        let mk = |v: f64| {
            let mut r = blank_record();
            r.total_power_w = v;
            r
        };
        let a = mk(2.0);
        let b = mk(4.0);
        let one = vec![&a];
        assert_eq!(stats(&one, |r| r.total_power_w), (2.0, 0.0));
        let two = vec![&a, &b];
        let (mean, std) = stats(&two, |r| r.total_power_w);
        assert_eq!(mean, 3.0);
        assert!((std - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn median_of_even_sets_averages_the_middle() {
        let vals: Vec<MetricsRecord> = [1.0, 9.0, 3.0, 5.0]
            .iter()
            .map(|&v| {
                let mut r = blank_record();
                r.solve_time_s = v;
                r
            })
            .collect();
        let refs: Vec<&MetricsRecord> = vals.iter().collect();
        assert_eq!(median(&refs, |r| r.solve_time_s), 4.0);
    }

    fn blank_record() -> MetricsRecord {
        MetricsRecord {
            strategy: vhetnet_cs_core::strategies::StrategyId::AllOn,
            seed: 0,
            step: 0,
            alpha: 0.5,
            p_min_dbm: -70.0,
            num_sbs: 1,
            num_on: 1,
            num_off: 0,
            lambda_m: 0.0,
            lambda_h: 0.0,
            total_power_w: 0.0,
            grid_power_w: 0.0,
            served_traffic_qos: 0.0,
            energy_efficiency: 0.0,
            grid_energy_efficiency: 0.0,
            solve_time_s: 0.0,
            optimal: true,
        }
    }

    #[test]
    fn config_hash_tracks_field_changes() {
        let base = ConfigFile::default().resolve(CaseStudy::A).unwrap();
        let same = ConfigFile::default().resolve(CaseStudy::A).unwrap();
        assert_eq!(config_sha256(&base), config_sha256(&same));
        let mut tweaked = base.clone();
        tweaked.p_min_dbm = -69.0;
        assert_ne!(config_sha256(&base), config_sha256(&tweaked));
        let mut seeded = base.clone();
        seeded.rng_seed = 43;
        assert_ne!(config_sha256(&base), config_sha256(&seeded));
    }

    #[test]
    fn config_value_covers_every_top_level_field() {
        let config = ConfigFile::default().resolve(CaseStudy::A).unwrap();
        let value = config_value(&config);
        let obj = value.as_object().unwrap();
        for key in [
            "case_study",
            "layout",
            "profiles",
            "mbs_profile",
            "haps_profile",
            "traffic",
            "p_min_dbm",
            "sigma_los_db",
            "sigma_nlos_db",
            "u_max_mbs",
            "u_max_haps",
            "lambda_m0",
            "lambda_h0",
            "num_steps",
            "rng_seed",
        ] {
            assert!(obj.contains_key(key), "missing {key}");
        }
    }
}
