//! Deterministic models for HAPS-assisted cell switching in vertical
//! heterogeneous networks.
//!
//! The crate covers the full decision pipeline: scenario construction
//! (base-station profiles, grid layout, spatial traffic), 3GPP-style
//! terrestrial and HAPS channel models, the EARTH base-station power model,
//! an exact branch-and-bound optimizer for the linearized switching MIP,
//! benchmark strategies, and served-traffic/energy-efficiency metrics.
//!
//! Everything here is pure computation: RNG state is passed in explicitly,
//! results are deterministic for a given seed, and no IO is performed.
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature simply switches float intrinsics and enables `std` in the RNG
//! dependencies.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// Validation uses `!(x > 0.0)` on purpose: unlike `x <= 0.0` it also
// rejects NaN, which fails every comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod channel;
pub mod error;
pub mod math;
pub mod metrics;
pub mod optimizer;
pub mod power;
pub mod scenario;
mod solver;
pub mod strategies;
pub mod units;

pub use error::Error;
pub use metrics::MetricsRecord;
pub use optimizer::{Association, MipInstance, NetworkState, Solution};
pub use scenario::{BsClass, BsProfile, CaseStudy, NetworkLayout, ScenarioConfig, TrafficModel};
pub use strategies::StrategyId;
