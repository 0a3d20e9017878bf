//! Integer programs for fleet sizing and spill minimization.
//!
//! The fleet-sizing program finds the minimum fleet that satisfies every
//! demanded flight; the spill program fixes the fleet size and minimizes the
//! passengers denied service. Both share the time-space-SoC dynamics, the
//! reserve rule, and the cyclic start/end condition.

mod builder;
mod lp;
mod model;
mod oracle;
mod solver;
mod validate;

pub use builder::{build_fleet_sizing, build_spill, DEFAULT_FLIGHT_WEIGHT};
pub use lp::write_lp;
pub use model::{
    Constraint, ConstraintTag, MilpModel, ModelKind, Sense, SolveStatus, Solution, SolverAdapter,
    SolverLimits, VarKind, Variable,
};
pub use oracle::{brute_force_fleet_sizing, brute_force_spill, OracleResult};
pub use solver::HighsSolver;
pub use validate::{conservation_violations, validate_solution, Violation};

/// Dispatch emits demand on steps 0..steps_per_day; the optimization timeline
/// runs on 1..=T with t=0 reserved for the initial state. Demand at step s is
/// therefore served at model time s+1.
pub(crate) fn demand_model_time(step: usize) -> usize {
    step + 1
}

/// Fleet size of a solved model: aircraft idle or beginning to charge at t=0.
pub fn fleet_size(model: &MilpModel, solution: &Solution) -> u32 {
    let mut total = 0i64;
    for (idx, var) in model.variables.iter().enumerate() {
        match var.kind {
            VarKind::Idle { t: 0, .. } | VarKind::Charge { t: 0, .. } => {
                total += solution.values[idx];
            }
            _ => {}
        }
    }
    if model.kind == ModelKind::FleetSizing {
        // the sizing builder caps every column for solver performance; the
        // cap is only valid while it strictly exceeds the optimum
        if let Some(cap) = model.variables.first().and_then(|v| v.upper) {
            assert!(
                (total as f64) < cap,
                "fleet size {total} reached the artificial variable cap {cap}; \
                 the cap in build_fleet_sizing must be raised"
            );
        }
    }
    total as u32
}

/// Total passengers spilled in a solved spill model.
pub fn total_spill(model: &MilpModel, solution: &Solution) -> u32 {
    model
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| matches!(v.kind, VarKind::Spill { .. }))
        .map(|(idx, _)| solution.values[idx])
        .sum::<i64>() as u32
}

/// Total flights flown (all SoC levels and times).
pub fn total_flights(model: &MilpModel, solution: &Solution) -> u32 {
    model
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| matches!(v.kind, VarKind::Flight { .. }))
        .map(|(idx, _)| solution.values[idx])
        .sum::<i64>() as u32
}

/// Spill per (from, to, model time) in a solved spill model; zero rows omitted.
pub fn spill_by_cell(model: &MilpModel, solution: &Solution) -> Vec<(usize, usize, usize, u32)> {
    let mut out = Vec::new();
    for (idx, var) in model.variables.iter().enumerate() {
        if let VarKind::Spill { i, j, t } = var.kind {
            let v = solution.values[idx];
            if v > 0 {
                out.push((i, j, t, v as u32));
            }
        }
    }
    out
}
