//! Stochastic demand generation and fleet optimization for a two-vertiport
//! air-taxi link between an airport and a city center.
//!
//! The crate covers the full pipeline: airline schedules drive an
//! autoregressive passenger-arrival process ([`demand`]); a deterministic
//! dispatch rule turns arrivals into per-step flight demand ([`dispatch`]);
//! integer programs size the fleet and minimize spilled passengers over a
//! time-space-SoC network ([`milp`]); rule-based simulators bracket the
//! optimum ([`heuristics`]); and [`harness`] orchestrates batch experiments
//! with CSV and SVG reporting.

pub mod demand;
pub mod dispatch;
pub mod error;
pub mod harness;
pub mod heuristics;
pub mod milp;
pub mod network;
pub mod rng;
pub mod schedule;

pub use error::{Error, Result};
