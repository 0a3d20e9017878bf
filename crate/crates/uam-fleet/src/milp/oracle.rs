//! Exhaustive reference solver for micro instances.
//!
//! Enumerates every joint aircraft trajectory directly — initial placements
//! (idle at some SoC, or mid-charge from midnight), then per-step action
//! combinations (stay, fly, start charging) — and keeps the lexicographic
//! minimum of (spill, flights flown). It shares nothing with the model
//! builder or any LP machinery, so agreement between the two is meaningful.

use std::collections::HashMap;

use crate::dispatch::DemandTimeSeries;
use crate::error::{Error, Result};
use crate::milp::demand_model_time;
use crate::network::NetworkConfig;

const MAX_HORIZON: usize = 16;
const MAX_SOC_LEVELS: usize = 4;
const MAX_FLEET: u32 = 5;

/// Optimum found by exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub fleet_size: u32,
    pub spill: u32,
    pub total_flights: u32,
    /// Objective under the same weighting the optimizer uses.
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Ac {
    /// On the ground and available.
    Idle { loc: usize, soc: usize },
    /// In flight or charging; becomes idle at `free_at`.
    Busy { loc: usize, soc: usize, free_at: usize },
}

impl Ac {
    /// Pack into 10 bits: busy flag, location, SoC (3 bits), free_at (5 bits).
    fn encode(self) -> u16 {
        match self {
            Ac::Idle { loc, soc } => ((loc as u16) << 8) | soc as u16,
            Ac::Busy { loc, soc, free_at } => {
                0x200 | ((loc as u16) << 8) | ((free_at as u16) << 3) | soc as u16
            }
        }
    }
}

/// Memo key: sorted packed aircraft states plus the time index.
fn state_key(t: usize, state: &[Ac]) -> u128 {
    let mut key = t as u128;
    for ac in state {
        key = (key << 10) | u128::from(ac.encode())
    }
    key
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Stay,
    Fly { to: usize },
    Charge { to_level: usize },
}

/// Initial placement of one aircraft at t = 0.
#[derive(Debug, Clone, Copy)]
enum Start {
    Idle { loc: usize, soc: usize },
    /// Mid-charge across midnight, from level x to level y.
    Charge { loc: usize, x: usize, y: usize },
}

fn guard(config: &NetworkConfig, fleet_size: u32) -> Result<()> {
    config.validate()?;
    if config.num_vertiports() != 2 {
        return Err(Error::InstanceTooLarge(format!(
            "{} vertiports, oracle handles 2",
            config.num_vertiports()
        )));
    }
    if config.horizon() > MAX_HORIZON {
        return Err(Error::InstanceTooLarge(format!(
            "horizon {} > {MAX_HORIZON}",
            config.horizon()
        )));
    }
    if config.soc_levels > MAX_SOC_LEVELS {
        return Err(Error::InstanceTooLarge(format!(
            "{} SoC levels > {MAX_SOC_LEVELS}",
            config.soc_levels
        )));
    }
    if fleet_size > MAX_FLEET {
        return Err(Error::InstanceTooLarge(format!(
            "fleet {fleet_size} > {MAX_FLEET}"
        )));
    }
    Ok(())
}

struct Search<'a> {
    config: &'a NetworkConfig,
    horizon: usize,
    /// demand[t] = (from, to, flights, passengers) cells at model time t.
    demand: Vec<Vec<(usize, usize, u32, u32)>>,
    /// Fleet sizing serves every demanded flight; spill mode may decline.
    must_serve: bool,
    /// Required idle multiset at t = horizon, sorted.
    target: Vec<(usize, usize)>,
    /// demand_from[t]: any demand at time >= t.
    demand_from: Vec<bool>,
    /// (t, released state) -> best (spill, flights) completion, if any.
    memo: HashMap<u128, Option<(u64, u64)>>,
}

impl Search<'_> {
    fn best(&mut self, t: usize, mut state: Vec<Ac>) -> Option<(u64, u64)> {
        for ac in &mut state {
            if let Ac::Busy { loc, soc, free_at } = *ac {
                if free_at <= t {
                    *ac = Ac::Idle { loc, soc };
                }
            }
        }
        state.sort_unstable();
        if t > self.horizon {
            unreachable!("search past horizon");
        }
        let all_idle_matching_target = || {
            state.len() == self.target.len()
                && state
                    .iter()
                    .zip(&self.target)
                    .all(|(ac, &(loc, soc))| *ac == Ac::Idle { loc, soc })
        };
        if t == self.horizon {
            return all_idle_matching_target().then_some((0, 0));
        }
        // quiescence: nothing left to serve and the cyclic end state already
        // holds, so staying put to the horizon is optimal
        if !self.demand_from[t] && all_idle_matching_target() {
            return Some((0, 0));
        }
        let key = state_key(t, &state);
        if let Some(&cached) = self.memo.get(&key) {
            return cached;
        }
        let idle_indices: Vec<usize> = (0..state.len())
            .filter(|&i| matches!(state[i], Ac::Idle { .. }))
            .collect();
        let mut actions = vec![Action::Stay; idle_indices.len()];
        let mut choice_indices = vec![0usize; idle_indices.len()];
        let mut best = None;
        self.branch(
            t,
            &state,
            &idle_indices,
            0,
            &mut actions,
            &mut choice_indices,
            &mut best,
        );
        self.memo.insert(key, best);
        best
    }

    fn options(&self, t: usize, loc: usize, soc: usize) -> Vec<Action> {
        let mut out = vec![Action::Stay];
        let to = 1 - loc;
        let tau = self.config.tau_at(loc, to, t);
        let kappa = self.config.kappa_at(loc, to, t);
        if t + tau <= self.horizon && soc >= kappa.max(1) {
            out.push(Action::Fly { to });
        }
        for y in (soc + 1)..=self.config.soc_levels {
            let duration = self.config.charging_duration(soc, y).expect("soc < y");
            if t + duration <= self.horizon {
                out.push(Action::Charge { to_level: y });
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &mut self,
        t: usize,
        state: &[Ac],
        idle: &[usize],
        depth: usize,
        actions: &mut Vec<Action>,
        choice_indices: &mut Vec<usize>,
        best: &mut Option<(u64, u64)>,
    ) {
        if depth == idle.len() {
            self.evaluate(t, state, idle, actions, best);
            return;
        }
        let Ac::Idle { loc, soc } = state[idle[depth]] else {
            unreachable!("idle index");
        };
        let options = self.options(t, loc, soc);
        // identical aircraft are interchangeable: force non-decreasing option
        // indices across a run of equal (loc, soc) states
        let min_choice = if depth > 0 && state[idle[depth]] == state[idle[depth - 1]] {
            choice_indices[depth - 1]
        } else {
            0
        };
        for (choice, &action) in options.iter().enumerate().skip(min_choice) {
            actions[depth] = action;
            choice_indices[depth] = choice;
            self.branch(t, state, idle, depth + 1, actions, choice_indices, best);
        }
    }

    fn evaluate(
        &mut self,
        t: usize,
        state: &[Ac],
        idle: &[usize],
        actions: &[Action],
        best: &mut Option<(u64, u64)>,
    ) {
        let mut flown = [[0u32; 2]; 2];
        let mut flights_here = 0u64;
        let mut next = state.to_vec();
        for (&idx, &action) in idle.iter().zip(actions) {
            let Ac::Idle { loc, soc } = state[idx] else {
                unreachable!("idle index");
            };
            match action {
                Action::Stay => {}
                Action::Fly { to } => {
                    let tau = self.config.tau_at(loc, to, t);
                    let kappa = self.config.kappa_at(loc, to, t);
                    flown[loc][to] += 1;
                    flights_here += 1;
                    next[idx] = Ac::Busy {
                        loc: to,
                        soc: soc - kappa,
                        free_at: t + tau,
                    };
                }
                Action::Charge { to_level } => {
                    let duration = self.config.charging_duration(soc, to_level).expect("soc < y");
                    next[idx] = Ac::Busy {
                        loc,
                        soc: to_level,
                        free_at: t + duration,
                    };
                }
            }
        }
        let mut spill_here = 0u64;
        for &(i, j, f, p) in &self.demand[t] {
            if self.must_serve {
                if flown[i][j] < f {
                    return;
                }
            } else {
                let seated = u64::from(self.config.seat_capacity) * u64::from(flown[i][j]);
                spill_here += u64::from(p).saturating_sub(seated);
            }
        }
        let Some((tail_spill, tail_flights)) = self.best(t + 1, next) else {
            return;
        };
        let candidate = (spill_here + tail_spill, flights_here + tail_flights);
        if best.map_or(true, |b| candidate < b) {
            *best = Some(candidate);
        }
    }
}

fn demand_by_time(config: &NetworkConfig, flights: &DemandTimeSeries) -> Vec<Vec<(usize, usize, u32, u32)>> {
    let mut demand = vec![Vec::new(); config.horizon() + 1];
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            let f = flights.flights_at(i, j, s);
            let p = flights.passengers_at(i, j, s);
            if f > 0 || p > 0 {
                demand[demand_model_time(s)].push((i, j, f, p));
            }
        }
    }
    demand
}

fn start_options(config: &NetworkConfig) -> Vec<Start> {
    let horizon = config.horizon();
    let mut out = Vec::new();
    for loc in 0..2 {
        for soc in 0..=config.soc_levels {
            out.push(Start::Idle { loc, soc });
        }
        for x in 0..config.soc_levels {
            for y in (x + 1)..=config.soc_levels {
                if config.charging_duration(x, y).expect("x < y") <= horizon {
                    out.push(Start::Charge { loc, x, y });
                }
            }
        }
    }
    out
}

/// Run one search over every start multiset of size `fleet_size`; returns the
/// best (spill, flights) over all placements, or None if none completes.
fn solve_for_fleet(
    config: &NetworkConfig,
    demand: &[Vec<(usize, usize, u32, u32)>],
    fleet_size: u32,
    must_serve: bool,
) -> Option<(u64, u64)> {
    let options = start_options(config);
    let mut picks = vec![0usize; fleet_size as usize];
    let mut best = None;
    enumerate_starts(config, demand, &options, &mut picks, 0, 0, must_serve, &mut best);
    best
}

#[allow(clippy::too_many_arguments)]
fn enumerate_starts(
    config: &NetworkConfig,
    demand: &[Vec<(usize, usize, u32, u32)>],
    options: &[Start],
    picks: &mut Vec<usize>,
    depth: usize,
    min_option: usize,
    must_serve: bool,
    best: &mut Option<(u64, u64)>,
) {
    if depth == picks.len() {
        let mut state = Vec::with_capacity(picks.len());
        let mut target = Vec::with_capacity(picks.len());
        for &pick in picks.iter() {
            match options[pick] {
                Start::Idle { loc, soc } => {
                    state.push(Ac::Idle { loc, soc });
                    target.push((loc, soc));
                }
                Start::Charge { loc, x, y } => {
                    let duration = config.charging_duration(x, y).expect("x < y");
                    state.push(Ac::Busy {
                        loc,
                        soc: y,
                        free_at: duration,
                    });
                    // the cyclic mirror needs this aircraft idle at (loc, x)
                    // at the end of the horizon, ready to re-enter the charge
                    target.push((loc, x));
                }
            }
        }
        target.sort_unstable();
        let mut demand_from = vec![false; demand.len() + 1];
        for t in (0..demand.len()).rev() {
            demand_from[t] = demand_from[t + 1] || !demand[t].is_empty();
        }
        let mut search = Search {
            config,
            horizon: config.horizon(),
            demand: demand.to_vec(),
            must_serve,
            target,
            demand_from,
            memo: HashMap::new(),
        };
        if let Some(result) = search.best(1, state) {
            if best.map_or(true, |b| result < b) {
                *best = Some(result);
            }
        }
        return;
    }
    for option in min_option..options.len() {
        picks[depth] = option;
        enumerate_starts(config, demand, options, picks, depth + 1, option, must_serve, best);
    }
}

/// Exhaustively find the minimum fleet serving every demanded flight, with
/// the fewest flights at that fleet size.
pub fn brute_force_fleet_sizing(
    config: &NetworkConfig,
    flights: &DemandTimeSeries,
    flight_weight: f64,
) -> Result<OracleResult> {
    guard(config, 0)?;
    let demand = demand_by_time(config, flights);
    for fleet in 0..=MAX_FLEET {
        if let Some((spill, total_flights)) = solve_for_fleet(config, &demand, fleet, true) {
            debug_assert_eq!(spill, 0);
            return Ok(OracleResult {
                fleet_size: fleet,
                spill: 0,
                total_flights: total_flights as u32,
                objective: f64::from(fleet) + flight_weight * total_flights as f64,
            });
        }
    }
    Err(Error::InstanceTooLarge(format!(
        "no feasible fleet within {MAX_FLEET} aircraft"
    )))
}

/// Exhaustively find the minimum spill at a fixed fleet size, with the fewest
/// flights at that spill.
pub fn brute_force_spill(
    config: &NetworkConfig,
    flights: &DemandTimeSeries,
    fleet_size: u32,
    flight_weight: f64,
) -> Result<OracleResult> {
    guard(config, fleet_size)?;
    let demand = demand_by_time(config, flights);
    // the all-stay trajectory is always cyclic, so a solution exists
    let (spill, total_flights) = solve_for_fleet(config, &demand, fleet_size, false)
        .expect("all-stay trajectory is feasible");
    Ok(OracleResult {
        fleet_size,
        spill: spill as u32,
        total_flights: total_flights as u32,
        objective: spill as f64 + flight_weight * total_flights as f64,
    })
}
