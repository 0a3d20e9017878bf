//! In-memory linear model representation and the solver adapter contract.

use std::collections::HashMap;

use crate::error::Result;

/// Decision-variable identity within a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// n_i^k(t): idle aircraft at vertiport i with SoC k at time t.
    Idle { i: usize, k: usize, t: usize },
    /// u_ij^k(t): aircraft departing i for j at time t with SoC k.
    Flight { i: usize, j: usize, k: usize, t: usize },
    /// C_i^xy(t): aircraft at i beginning to charge from x to y at time t.
    Charge { i: usize, x: usize, y: usize, t: usize },
    /// s_ij(t): passengers spilled on pair (i, j) at time t.
    Spill { i: usize, j: usize, t: usize },
}

impl VarKind {
    pub fn name(&self) -> String {
        match *self {
            VarKind::Idle { i, k, t } => format!("n_{i}_{k}_{t}"),
            VarKind::Flight { i, j, k, t } => format!("u_{i}_{j}_{k}_{t}"),
            VarKind::Charge { i, x, y, t } => format!("C_{i}_{x}_{y}_{t}"),
            VarKind::Spill { i, j, t } => format!("s_{i}_{j}_{t}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub kind: VarKind,
    /// Lower bound; always 0 in these models.
    pub lower: f64,
    /// Finite upper bound, if any.
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(&self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Which model constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintTag {
    /// Aircraft-state dynamics.
    Dynamics,
    /// Flight demand coverage.
    Demand,
    /// No flying at the reserve SoC level.
    Energy,
    /// Equal state at the start and end of the horizon.
    Cyclic,
    /// Spill nonnegativity.
    SpillPos,
    /// Spill definition against offered seats.
    SpillDef,
    /// Fleet size fixing.
    FleetFix,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub label: String,
    pub tag: ConstraintTag,
    /// (variable index, coefficient) pairs.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    FleetSizing,
    Spill,
}

/// An explicit integer linear model, all variables >= 0 and integral.
#[derive(Debug, Clone)]
pub struct MilpModel {
    pub name: String,
    pub kind: ModelKind,
    pub variables: Vec<Variable>,
    /// Objective coefficient per variable (minimization).
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    index: HashMap<VarKind, usize>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>, kind: ModelKind) -> MilpModel {
        MilpModel {
            name: name.into(),
            kind,
            variables: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn add_variable(&mut self, kind: VarKind, upper: Option<f64>) -> usize {
        debug_assert!(!self.index.contains_key(&kind), "duplicate {kind:?}");
        let idx = self.variables.len();
        self.variables.push(Variable {
            kind,
            lower: 0.0,
            upper,
        });
        self.objective.push(0.0);
        self.index.insert(kind, idx);
        idx
    }

    pub fn var(&self, kind: VarKind) -> Option<usize> {
        self.index.get(&kind).copied()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(
        &mut self,
        label: impl Into<String>,
        tag: ConstraintTag,
        terms: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) {
        debug_assert!(terms.iter().all(|&(v, _)| v < self.variables.len()));
        self.constraints.push(Constraint {
            label: label.into(),
            tag,
            terms,
            sense,
            rhs,
        });
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SolverLimits {
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
    #[serde(default = "default_rel_gap")]
    pub rel_gap: f64,
}

fn default_time_limit() -> f64 {
    600.0
}

fn default_rel_gap() -> f64 {
    0.005
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            time_limit_s: 600.0,
            rel_gap: 0.005,
        }
    }
}

impl SolverLimits {
    /// Limits for exact comparisons against the enumeration oracle.
    pub fn exact() -> SolverLimits {
        SolverLimits {
            time_limit_s: 600.0,
            rel_gap: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveStatus {
    Optimal,
    /// Integral feasible solution with a possibly positive optimality gap;
    /// `rel_gap` is the configured tolerance when known.
    Feasible { rel_gap: Option<f64> },
    Infeasible,
    TimedOut,
}

impl SolveStatus {
    pub fn has_solution(&self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    pub objective: f64,
    /// Integral value per model variable; empty unless `status.has_solution()`.
    pub values: Vec<i64>,
}

/// A pluggable MILP backend. Implementations must report status faithfully:
/// `Optimal` only when the relative gap tolerance is effectively zero.
pub trait SolverAdapter {
    fn name(&self) -> &str;
    fn solve(&self, model: &MilpModel, limits: &SolverLimits) -> Result<Solution>;
}
