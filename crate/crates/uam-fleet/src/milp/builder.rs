//! Construction of the fleet-sizing and spill integer programs.
//!
//! Timeline convention: model times run 0..=T with t=0 holding the initial
//! state; demand at dispatch step s is served at model time s+1. Flights and
//! charges that would run past T are not represented (they cannot contribute
//! to any arrival term), except the charge mirror at t=T required by the
//! cyclic condition. Aircraft may only depart with enough SoC to land at or
//! above the reserve.

use crate::dispatch::DemandTimeSeries;
use crate::error::{Error, Result};
use crate::milp::demand_model_time;
use crate::milp::model::{ConstraintTag, MilpModel, ModelKind, Sense, VarKind};
use crate::network::{arrival_sets, NetworkConfig};

/// Objective weight on the flight count; small enough that the weighted total
/// never reaches 1 on day-scale instances.
pub const DEFAULT_FLIGHT_WEIGHT: f64 = 0.00001;

fn check_inputs(config: &NetworkConfig, flights: &DemandTimeSeries) -> Result<()> {
    config.validate()?;
    if flights.num_vertiports != config.num_vertiports() {
        return Err(Error::Validation(format!(
            "demand series has {} vertiports, config has {}",
            flights.num_vertiports,
            config.num_vertiports()
        )));
    }
    if flights.step_minutes != config.step_minutes {
        return Err(Error::Validation(format!(
            "demand step_minutes {} != config step_minutes {}",
            flights.step_minutes, config.step_minutes
        )));
    }
    // demand beyond the dispatch day would fall outside the horizon's slack
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            if flights.flights_at(i, j, s) > 0 && s >= config.steps_per_day {
                return Err(Error::Validation(format!(
                    "demand at step {s} is beyond the operating day ({} steps)",
                    config.steps_per_day
                )));
            }
        }
    }
    Ok(())
}

/// Lowest SoC level that may depart on (i, j, t): enough to land at or above
/// the reserve, and never the reserve itself.
fn min_departure_soc(config: &NetworkConfig, i: usize, j: usize, t: usize) -> usize {
    config.kappa_at(i, j, t).max(1)
}

fn create_variables(model: &mut MilpModel, config: &NetworkConfig) {
    let nv = config.num_vertiports();
    let horizon = config.horizon();
    let k_levels = config.soc_levels;
    for i in 0..nv {
        for k in 0..=k_levels {
            for t in 0..=horizon {
                model.add_variable(VarKind::Idle { i, k, t }, None);
            }
        }
    }
    for i in 0..nv {
        for j in 0..nv {
            if i == j {
                continue;
            }
            for k in 0..=k_levels {
                for t in 1..=horizon {
                    if t + config.tau_at(i, j, t) > horizon {
                        continue;
                    }
                    // k=0 exists but is pinned to zero by the reserve rule;
                    // levels that would land below the reserve are not created
                    if k != 0 && k < min_departure_soc(config, i, j, t) {
                        continue;
                    }
                    model.add_variable(VarKind::Flight { i, j, k, t }, None);
                }
            }
        }
    }
    for i in 0..nv {
        for x in 0..k_levels {
            for y in (x + 1)..=k_levels {
                let duration = config
                    .charging_duration(x, y)
                    .expect("x < y <= K by construction");
                if duration > horizon {
                    continue;
                }
                for t in 0..=horizon {
                    // interior starts must complete within the horizon; t=0 and
                    // its cyclic mirror t=T represent a charge spanning midnight
                    if t >= 1 && t < horizon && t + duration > horizon {
                        continue;
                    }
                    model.add_variable(VarKind::Charge { i, x, y, t }, None);
                }
            }
        }
    }
}

fn add_shared_constraints(model: &mut MilpModel, config: &NetworkConfig) {
    let nv = config.num_vertiports();
    let horizon = config.horizon();
    let k_levels = config.soc_levels;
    let arrivals = arrival_sets(config);

    // (2) dynamics: n evolves with arrivals, departures, charge completions
    // and charge commitments; out-of-range indices contribute nothing
    for i in 0..nv {
        for k in 0..=k_levels {
            for t in 1..=horizon {
                let mut terms = vec![
                    (model.var(VarKind::Idle { i, k, t }).expect("n exists"), 1.0),
                    (
                        model.var(VarKind::Idle { i, k, t: t - 1 }).expect("n exists"),
                        -1.0,
                    ),
                ];
                for j in 0..nv {
                    if i == j {
                        continue;
                    }
                    // (B) arrivals at i with SoC k from departures at j
                    for &dep in arrivals.lookup(j, i, t) {
                        let k_dep = k + config.kappa_at(j, i, dep);
                        if let Some(v) = model.var(VarKind::Flight { i: j, j: i, k: k_dep, t: dep })
                        {
                            terms.push((v, -1.0));
                        }
                    }
                    // (C) departures from i with SoC k
                    if let Some(v) = model.var(VarKind::Flight { i, j, k, t }) {
                        terms.push((v, 1.0));
                    }
                }
                // (D) charge completions reaching level k at t
                for x in 0..k {
                    let duration = config.charging_duration(x, k).expect("x < k");
                    if duration <= t {
                        if let Some(v) =
                            model.var(VarKind::Charge { i, x, y: k, t: t - duration })
                        {
                            terms.push((v, -1.0));
                        }
                    }
                }
                // (E) charge commitments leaving level k at t
                for y in (k + 1)..=k_levels {
                    if let Some(v) = model.var(VarKind::Charge { i, x: k, y, t }) {
                        terms.push((v, 1.0));
                    }
                }
                model.add_constraint(
                    format!("dyn_{i}_{k}_{t}"),
                    ConstraintTag::Dynamics,
                    terms,
                    Sense::Eq,
                    0.0,
                );
            }
        }
    }

    // (4) no flying at the reserve level
    for i in 0..nv {
        for j in 0..nv {
            if i == j {
                continue;
            }
            for t in 1..=horizon {
                if let Some(v) = model.var(VarKind::Flight { i, j, k: 0, t }) {
                    model.add_constraint(
                        format!("soc0_{i}_{j}_{t}"),
                        ConstraintTag::Energy,
                        vec![(v, 1.0)],
                        Sense::Eq,
                        0.0,
                    );
                }
            }
        }
    }

    // (5) cyclic state: t=0 equals t=T for idle counts and charge starts;
    // flights at 0 and T do not exist, so their equality is vacuous
    for i in 0..nv {
        for k in 0..=k_levels {
            let first = model.var(VarKind::Idle { i, k, t: 0 }).expect("n exists");
            let last = model.var(VarKind::Idle { i, k, t: horizon }).expect("n exists");
            model.add_constraint(
                format!("cyc_n_{i}_{k}"),
                ConstraintTag::Cyclic,
                vec![(first, 1.0), (last, -1.0)],
                Sense::Eq,
                0.0,
            );
        }
        for x in 0..k_levels {
            for y in (x + 1)..=k_levels {
                let (Some(first), Some(last)) = (
                    model.var(VarKind::Charge { i, x, y, t: 0 }),
                    model.var(VarKind::Charge { i, x, y, t: horizon }),
                ) else {
                    continue;
                };
                model.add_constraint(
                    format!("cyc_C_{i}_{x}_{y}"),
                    ConstraintTag::Cyclic,
                    vec![(first, 1.0), (last, -1.0)],
                    Sense::Eq,
                    0.0,
                );
            }
        }
    }
}

fn flight_weight_objective(model: &mut MilpModel, flight_weight: f64) {
    for idx in 0..model.num_variables() {
        if matches!(model.variables[idx].kind, VarKind::Flight { .. }) {
            model.set_objective(idx, flight_weight);
        }
    }
}

/// Build the zero-spill fleet-sizing program: minimize the fleet at t=0 (plus
/// a small flight-count penalty) subject to serving every demanded flight.
pub fn build_fleet_sizing(
    config: &NetworkConfig,
    flights: &DemandTimeSeries,
    flight_weight: f64,
) -> Result<MilpModel> {
    check_inputs(config, flights)?;
    let mut model = MilpModel::new("fleet_sizing", ModelKind::FleetSizing);
    create_variables(&mut model, config);
    add_shared_constraints(&mut model, config);
    add_demand_constraints(&mut model, config, flights)?;
    for idx in 0..model.num_variables() {
        match model.variables[idx].kind {
            VarKind::Idle { t: 0, .. } | VarKind::Charge { t: 0, .. } => {
                model.set_objective(idx, 1.0)
            }
            _ => {}
        }
    }
    flight_weight_objective(&mut model, flight_weight);

    // HiGHS handles unbounded integer columns badly here (root-node reduced
    // cost fixing and cut propagation can spin for the better part of an
    // hour without polling the time limit). Cap every count far above any
    // conceivable optimal fleet: one aircraft per demanded flight plus one
    // compensating helper each, plus slack for charge cycling. No optimal
    // solution is cut as long as the cap exceeds F*, which `fleet_size`
    // re-checks after solving.
    let cap = 2.0 * flights.total_flights() as f64 + 2.0 * config.soc_levels as f64 + 8.0;
    for var in &mut model.variables {
        var.upper = Some(cap);
    }
    Ok(model)
}

// (3) enough departures on every demanded (pair, step)
fn add_demand_constraints(
    model: &mut MilpModel,
    config: &NetworkConfig,
    flights: &DemandTimeSeries,
) -> Result<()> {
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            let f = flights.flights_at(i, j, s);
            if f == 0 {
                continue;
            }
            let t = demand_model_time(s);
            let terms: Vec<(usize, f64)> = (1..=config.soc_levels)
                .filter_map(|k| model.var(VarKind::Flight { i, j, k, t }).map(|v| (v, 1.0)))
                .collect();
            if terms.is_empty() {
                return Err(Error::Validation(format!(
                    "no feasible departure can serve demand at ({i},{j}) step {s}"
                )));
            }
            model.add_constraint(
                format!("dem_{i}_{j}_{t}"),
                ConstraintTag::Demand,
                terms,
                Sense::Ge,
                f64::from(f),
            );
        }
    }
    Ok(())
}

/// Build the spill-minimization program at a fixed fleet size. Demanded
/// flights may be declined; spill counts the passengers left behind.
pub fn build_spill(
    config: &NetworkConfig,
    flights: &DemandTimeSeries,
    fleet_size: u32,
    flight_weight: f64,
) -> Result<MilpModel> {
    check_inputs(config, flights)?;
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            let p = flights.passengers_at(i, j, s);
            let f = flights.flights_at(i, j, s);
            if p > config.seat_capacity * f {
                return Err(Error::Validation(format!(
                    "passenger demand {p} exceeds seat capacity of {f} flights at ({i},{j},{s})"
                )));
            }
        }
    }
    let mut model = MilpModel::new("spill", ModelKind::Spill);
    create_variables(&mut model, config);

    // spill variables where passenger demand exists
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            if flights.passengers_at(i, j, s) > 0 {
                let t = demand_model_time(s);
                model.add_variable(VarKind::Spill { i, j, t }, None);
            }
        }
    }

    add_shared_constraints(&mut model, config);

    // (7) spill covers the demand not seated on operated flights
    for (i, j) in flights.pairs() {
        for s in 0..flights.steps {
            let p = flights.passengers_at(i, j, s);
            if p == 0 {
                continue;
            }
            let t = demand_model_time(s);
            let spill = model.var(VarKind::Spill { i, j, t }).expect("just created");
            let mut terms = vec![(spill, 1.0)];
            for k in 1..=config.soc_levels {
                if let Some(v) = model.var(VarKind::Flight { i, j, k, t }) {
                    terms.push((v, f64::from(config.seat_capacity)));
                }
            }
            model.add_constraint(
                format!("spill_{i}_{j}_{t}"),
                ConstraintTag::SpillDef,
                terms,
                Sense::Ge,
                f64::from(p),
            );
        }
    }

    // With the fleet fixed, no aircraft count can exceed it; the explicit
    // bounds tighten the relaxation dramatically (order-of-magnitude faster
    // branch and bound) without cutting any integer solution.
    for var in &mut model.variables {
        if !matches!(var.kind, VarKind::Spill { .. }) {
            var.upper = Some(f64::from(fleet_size));
        }
    }

    // (8) fleet size is fixed
    let terms: Vec<(usize, f64)> = (0..model.num_variables())
        .filter(|&idx| {
            matches!(
                model.variables[idx].kind,
                VarKind::Idle { t: 0, .. } | VarKind::Charge { t: 0, .. }
            )
        })
        .map(|idx| (idx, 1.0))
        .collect();
    model.add_constraint(
        "fleet",
        ConstraintTag::FleetFix,
        terms,
        Sense::Eq,
        f64::from(fleet_size),
    );

    for idx in 0..model.num_variables() {
        if matches!(model.variables[idx].kind, VarKind::Spill { .. }) {
            model.set_objective(idx, 1.0);
        }
    }
    flight_weight_objective(&mut model, flight_weight);
    Ok(model)
}
