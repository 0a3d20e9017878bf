//! Independent feasibility checks of a solved model.
//!
//! These checks re-evaluate every constraint row from the raw integral values
//! and, given the network configuration, verify that the implied number of
//! aircraft (idle, in flight, or mid-charge) is constant over time. They share
//! no code with the builder's row construction beyond the variable index.

use crate::milp::model::{MilpModel, Sense, Solution, VarKind};
use crate::network::NetworkConfig;

const FEAS_TOL: f64 = 1e-6;

/// One failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Constraint label, variable name, or check name.
    pub label: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.label, self.detail)
    }
}

/// Check bounds, integrality domains, and every constraint row. Returns all
/// violations found (empty means feasible).
pub fn validate_solution(model: &MilpModel, solution: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();
    if solution.values.len() != model.num_variables() {
        out.push(Violation {
            label: "shape".into(),
            detail: format!(
                "{} values for {} variables",
                solution.values.len(),
                model.num_variables()
            ),
        });
        return out;
    }
    for (idx, var) in model.variables.iter().enumerate() {
        let v = solution.values[idx];
        if (v as f64) < var.lower {
            out.push(Violation {
                label: var.kind.name(),
                detail: format!("value {v} below lower bound {}", var.lower),
            });
        }
        if let Some(ub) = var.upper {
            if v as f64 > ub {
                out.push(Violation {
                    label: var.kind.name(),
                    detail: format!("value {v} above upper bound {ub}"),
                });
            }
        }
    }
    for c in &model.constraints {
        let lhs: f64 = c
            .terms
            .iter()
            .map(|&(v, coeff)| solution.values[v] as f64 * coeff)
            .sum();
        let ok = match c.sense {
            Sense::Le => lhs <= c.rhs + FEAS_TOL,
            Sense::Ge => lhs >= c.rhs - FEAS_TOL,
            Sense::Eq => (lhs - c.rhs).abs() <= FEAS_TOL,
        };
        if !ok {
            out.push(Violation {
                label: c.label.clone(),
                detail: format!("lhs {lhs} {} rhs {}", c.sense.symbol(), c.rhs),
            });
        }
    }
    out
}

/// Check that the total aircraft count is constant over the horizon. At each
/// time an aircraft is idle, in flight (departed at t' < t + tau), or
/// mid-charge (started at t0, completing at t0 + duration); the charge mirror
/// at t = T counts as busy at T only.
pub fn conservation_violations(
    config: &NetworkConfig,
    model: &MilpModel,
    solution: &Solution,
) -> Vec<Violation> {
    let horizon = config.horizon();
    let mut totals = vec![0i64; horizon + 1];
    for (idx, var) in model.variables.iter().enumerate() {
        let v = solution.values[idx];
        if v == 0 {
            continue;
        }
        match var.kind {
            VarKind::Idle { t, .. } => totals[t] += v,
            VarKind::Flight { i, j, t, .. } => {
                let tau = config.tau_at(i, j, t);
                for slot in t..(t + tau).min(horizon + 1) {
                    totals[slot] += v;
                }
            }
            VarKind::Charge { i: _, x, y, t } => {
                let duration = config.charging_duration(x, y).expect("x < y");
                for slot in t..(t + duration).min(horizon + 1) {
                    totals[slot] += v;
                }
            }
            VarKind::Spill { .. } => {}
        }
    }
    let mut out = Vec::new();
    for t in 1..=horizon {
        if totals[t] != totals[0] {
            out.push(Violation {
                label: format!("conservation_{t}"),
                detail: format!("{} aircraft at t={t}, {} at t=0", totals[t], totals[0]),
            });
        }
    }
    out
}
