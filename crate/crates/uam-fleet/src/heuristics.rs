//! Rule-based operating policies that bracket the optimal spill.
//!
//! The upper bound runs a plausible but myopic policy on the real two-vertiport
//! network; the lower bound runs the same policy with both vertiports pooled
//! into one location, which removes every positioning constraint. Both are
//! deterministic.

use std::fmt::Write as _;

use crate::dispatch::DemandTimeSeries;
use crate::error::{Error, Result};
use crate::network::NetworkConfig;

/// One simulated aircraft. While busy (flying or charging) the post-activity
/// location and SoC are already recorded; `busy_until` gates availability.
#[derive(Debug, Clone, Copy)]
struct SimAircraft {
    location: usize,
    soc_level: usize,
    busy_until: usize,
}

/// Outcome of one simulated day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub fleet_size: u32,
    pub daily_spill: u32,
    /// Spilled passengers per dispatch step.
    pub spill_by_step: Vec<u32>,
    /// Revenue flights flown.
    pub flights_flown: u32,
    pub repositioning_flights: u32,
    /// Spill per (from, to, step); zero cells omitted.
    pub spill_cells: Vec<(usize, usize, usize, u32)>,
}

impl SimResult {
    /// Serialize spill to the `from,to,step,spill` CSV schema.
    pub fn spill_csv(&self) -> String {
        let mut out = String::from("from,to,step,spill\n");
        for &(i, j, s, v) in &self.spill_cells {
            let _ = writeln!(out, "{i},{j},{s},{v}");
        }
        out
    }
}

/// How many idle aircraft at one vertiport trigger repositioning.
const IDLE_SURPLUS_THRESHOLD: usize = 5;

fn check_inputs(config: &NetworkConfig, demand: &DemandTimeSeries) -> Result<()> {
    config.validate()?;
    if demand.num_vertiports != config.num_vertiports() {
        return Err(Error::Validation(format!(
            "demand has {} vertiports, config has {}",
            demand.num_vertiports,
            config.num_vertiports()
        )));
    }
    if config.num_vertiports() != 2 {
        return Err(Error::Validation(
            "bound simulations assume exactly 2 vertiports".into(),
        ));
    }
    Ok(())
}

/// Lowest SoC that can depart from `from` at step `s`.
fn required_soc(config: &NetworkConfig, from: usize, s: usize) -> usize {
    config.kappa_at(from, 1 - from, s).max(1)
}

/// Simulate the two-vertiport policy: charge only when stranded at the
/// reserve, serve the fullest demanded flights first, reposition surpluses.
pub fn simulate_upper_bound(
    config: &NetworkConfig,
    demand: &DemandTimeSeries,
    fleet_size: u32,
) -> Result<SimResult> {
    simulate(config, demand, fleet_size, false)
}

/// Simulate the pooled relaxation: one location, no repositioning, and no
/// energy constraint — any non-busy aircraft may serve any flight. With the
/// position and charging couplings relaxed, only flight time ties the steps
/// together; at tau = 1 the fullest-first greedy is exactly the optimum of
/// the relaxed system, which keeps the result a genuine lower bound on the
/// optimizer's spill.
pub fn simulate_lower_bound(
    config: &NetworkConfig,
    demand: &DemandTimeSeries,
    fleet_size: u32,
) -> Result<SimResult> {
    simulate(config, demand, fleet_size, true)
}

fn simulate(
    config: &NetworkConfig,
    demand: &DemandTimeSeries,
    fleet_size: u32,
    pooled: bool,
) -> Result<SimResult> {
    check_inputs(config, demand)?;
    let k_full = config.soc_levels;
    let mut fleet: Vec<SimAircraft> = (0..fleet_size as usize)
        .map(|idx| SimAircraft {
            // full SoC, split evenly; pooling makes the location moot
            location: if pooled { 0 } else { idx % 2 },
            soc_level: k_full,
            busy_until: 0,
        })
        .collect();
    let mut result = SimResult {
        fleet_size,
        daily_spill: 0,
        spill_by_step: vec![0; demand.steps],
        flights_flown: 0,
        repositioning_flights: 0,
        spill_cells: Vec::new(),
    };
    for s in 0..demand.steps {
        // (a) upper bound: aircraft stranded below the departure SoC commit
        // to a full charge, per the reserve rule
        if !pooled {
            for ac in &mut fleet {
                if ac.busy_until > s || ac.soc_level == k_full {
                    continue;
                }
                if ac.soc_level < required_soc(config, ac.location, s) {
                    let duration = config
                        .charging_duration(ac.soc_level, k_full)
                        .expect("soc < K");
                    ac.soc_level = k_full;
                    ac.busy_until = s + duration;
                }
            }
        }
        // (b) serve demanded flights, fullest first
        let mut requests: Vec<(u32, usize, usize)> = Vec::new();
        for (i, j) in demand.pairs() {
            for occ in demand.occupancy_split(i, j, s, config.seat_capacity) {
                requests.push((occ, i, j));
            }
        }
        requests.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for (occ, i, j) in requests {
            let needed = required_soc(config, i, s);
            let ready = fleet
                .iter()
                .enumerate()
                .filter(|(_, ac)| {
                    // pooled: any non-busy aircraft; energy is relaxed
                    ac.busy_until <= s
                        && (pooled || (ac.soc_level >= needed && ac.location == i))
                })
                .max_by_key(|(idx, ac)| (ac.soc_level, std::cmp::Reverse(*idx)))
                .map(|(idx, _)| idx);
            match ready {
                Some(idx) => {
                    let ac = &mut fleet[idx];
                    if !pooled {
                        ac.soc_level -= config.kappa_at(i, j, s);
                    }
                    ac.location = j;
                    ac.busy_until = s + config.tau_at(i, j, s);
                    result.flights_flown += 1;
                }
                None => {
                    result.spill_by_step[s] += occ;
                    result.daily_spill += occ;
                    match result.spill_cells.last_mut() {
                        Some(cell) if (cell.0, cell.1, cell.2) == (i, j, s) => cell.3 += occ,
                        _ => result.spill_cells.push((i, j, s, occ)),
                    }
                }
            }
        }
        // (c) reposition surpluses of high-SoC idle aircraft
        if !pooled {
            for loc in 0..2 {
                loop {
                    let idle_high: Vec<usize> = fleet
                        .iter()
                        .enumerate()
                        .filter(|(_, ac)| {
                            ac.busy_until <= s
                                && ac.location == loc
                                && 2 * ac.soc_level >= k_full
                        })
                        .map(|(idx, _)| idx)
                        .collect();
                    if idle_high.len() <= IDLE_SURPLUS_THRESHOLD {
                        break;
                    }
                    let needed = required_soc(config, loc, s);
                    let Some(&idx) = idle_high
                        .iter()
                        .filter(|&&idx| fleet[idx].soc_level >= needed)
                        .max_by_key(|&&idx| (fleet[idx].soc_level, std::cmp::Reverse(idx)))
                    else {
                        break;
                    };
                    let ac = &mut fleet[idx];
                    ac.soc_level -= config.kappa_at(loc, 1 - loc, s);
                    ac.location = 1 - loc;
                    ac.busy_until = s + config.tau_at(loc, 1 - loc, s);
                    result.repositioning_flights += 1;
                }
            }
        }
    }
    Ok(result)
}
