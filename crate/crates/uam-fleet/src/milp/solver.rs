//! HiGHS-backed solver adapter.

use highs::{ColProblem, HighsModelStatus, HighsSolutionStatus, Sense as HighsSense};

use crate::error::{Error, Result};
use crate::milp::model::{
    MilpModel, Sense, SolveStatus, Solution, SolverAdapter, SolverLimits,
};

const INTEGRALITY_TOL: f64 = 1e-6;

/// In-process HiGHS backend.
#[derive(Debug, Default, Clone, Copy)]
pub struct HighsSolver;

impl SolverAdapter for HighsSolver {
    fn name(&self) -> &str {
        "highs"
    }

    fn solve(&self, model: &MilpModel, limits: &SolverLimits) -> Result<Solution> {
        if model.num_variables() == 0 {
            return Ok(Solution {
                status: SolveStatus::Optimal,
                objective: 0.0,
                values: Vec::new(),
            });
        }
        let mut problem = ColProblem::new();
        let mut rows = Vec::with_capacity(model.constraints.len());
        // per-variable (row, coeff) factors, from the constraint-major terms
        let mut factors: Vec<Vec<(highs::Row, f64)>> = vec![Vec::new(); model.num_variables()];
        for c in &model.constraints {
            let row = match c.sense {
                Sense::Eq => problem.add_row(c.rhs..=c.rhs),
                Sense::Ge => problem.add_row(c.rhs..),
                Sense::Le => problem.add_row(..=c.rhs),
            };
            for &(var, coeff) in &c.terms {
                factors[var].push((row, coeff));
            }
            rows.push(row);
        }
        for (idx, var) in model.variables.iter().enumerate() {
            let cost = model.objective[idx];
            let factor = std::mem::take(&mut factors[idx]);
            match var.upper {
                Some(ub) => problem.add_integer_column(cost, var.lower..=ub, factor),
                None => problem.add_integer_column(cost, var.lower.., factor),
            };
        }
        let mut highs_model = problem.optimise(HighsSense::Minimise);
        highs_model.make_quiet();
        highs_model.set_option("time_limit", limits.time_limit_s);
        highs_model.set_option("mip_rel_gap", limits.rel_gap);
        let solved = highs_model.solve();
        let status = solved.status();
        match status {
            HighsModelStatus::Optimal | HighsModelStatus::ReachedTimeLimit => {
                if solved.primal_solution_status() != HighsSolutionStatus::Feasible {
                    return Ok(Solution {
                        status: SolveStatus::TimedOut,
                        objective: f64::NAN,
                        values: Vec::new(),
                    });
                }
                let gap = solved.mip_gap();
                let raw = solved.get_solution();
                let mut values = Vec::with_capacity(model.num_variables());
                for (idx, &v) in raw.columns().iter().enumerate() {
                    let rounded = v.round();
                    if (v - rounded).abs() > INTEGRALITY_TOL {
                        return Err(Error::Solver(format!(
                            "non-integral value {v} for {}",
                            model.variables[idx].kind.name()
                        )));
                    }
                    values.push(rounded as i64);
                }
                // objective recomputed from the rounded integers
                let objective: f64 = values
                    .iter()
                    .zip(&model.objective)
                    .map(|(&v, &c)| v as f64 * c)
                    .sum();
                let status = if status == HighsModelStatus::Optimal && gap.abs() <= 1e-9 {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::Feasible {
                        rel_gap: Some(gap.max(0.0)),
                    }
                };
                Ok(Solution {
                    status,
                    objective,
                    values,
                })
            }
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
                Ok(Solution {
                    status: SolveStatus::Infeasible,
                    objective: f64::NAN,
                    values: Vec::new(),
                })
            }
            other => Err(Error::Solver(format!(
                "highs returned unexpected status {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{ConstraintTag, MilpModel, ModelKind, VarKind};

    #[test]
    fn trivial_min_x_ge_3() {
        let mut model = MilpModel::new("trivial", ModelKind::FleetSizing);
        let x = model.add_variable(VarKind::Idle { i: 0, k: 0, t: 0 }, None);
        model.set_objective(x, 1.0);
        model.add_constraint("c0", ConstraintTag::Demand, vec![(x, 1.0)], Sense::Ge, 3.0);
        let sol = HighsSolver.solve(&model, &SolverLimits::exact()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.values, vec![3]);
        assert!((sol.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_model() {
        let mut model = MilpModel::new("infeasible", ModelKind::FleetSizing);
        let x = model.add_variable(VarKind::Idle { i: 0, k: 0, t: 0 }, Some(1.0));
        model.add_constraint("c0", ConstraintTag::Demand, vec![(x, 1.0)], Sense::Ge, 2.0);
        let sol = HighsSolver.solve(&model, &SolverLimits::exact()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn empty_model_is_optimal_zero() {
        let model = MilpModel::new("empty", ModelKind::FleetSizing);
        let sol = HighsSolver.solve(&model, &SolverLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, 0.0);
    }
}
