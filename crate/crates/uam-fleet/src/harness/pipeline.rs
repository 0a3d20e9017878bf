//! Batch execution of the full pipeline: profiles, dispatch, optimization,
//! bound simulation, aggregation.

use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::demand::{generate_profiles, ArrivalProfile};
use crate::dispatch::dispatch;
use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, Scenario, ScheduleSource};
use crate::heuristics::{simulate_lower_bound, simulate_upper_bound};
use crate::milp::{
    build_fleet_sizing, build_spill, conservation_violations, fleet_size, total_spill,
    validate_solution, HighsSolver, SolveStatus, SolverAdapter, DEFAULT_FLIGHT_WEIGHT,
};
use crate::rng::mix_seed;
use crate::schedule::{generate_synthetic_schedule, parse_schedule, AirlineSchedule};

/// Seed-stream labels; every stage derives its seed from base_seed and these.
const STREAM_SCHEDULE: u64 = 1;
const STREAM_DEMAND: u64 = 2;

/// Spill results at one swept fleet size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub fleet: u32,
    pub spill: u32,
    pub lower_bound: u32,
    pub upper_bound: u32,
    pub status: SolveStatus,
    pub rel_gap: Option<f64>,
}

/// One (scenario, day) result.
#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub day: NaiveDate,
    pub add: f64,
    pub ar_coeff: f64,
    pub realized_passengers: u64,
    pub zero_spill_fleet: Option<u32>,
    pub sweep: Vec<SweepPoint>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AggregateReport {
    pub rows: Vec<ProfileRow>,
}

fn status_token(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Feasible { .. } => "feasible",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::TimedOut => "timed_out",
    }
}

impl AggregateReport {
    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    /// Long-format CSV: one line per (profile, swept fleet size); profiles
    /// that failed before the sweep emit a single line with an error message.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "day,add,ar_coeff,realized_passengers,zero_spill_fleet,fleet,spill,lower_bound,upper_bound,status,gap,error\n",
        );
        for row in &self.rows {
            let prefix = format!(
                "{},{},{},{},{}",
                row.day.format("%Y-%m-%d"),
                row.add,
                row.ar_coeff,
                row.realized_passengers,
                row.zero_spill_fleet.map_or(String::new(), |f| f.to_string()),
            );
            let error = row.error.as_deref().unwrap_or("").replace(',', ";");
            if row.sweep.is_empty() {
                let _ = writeln!(out, "{prefix},,,,,,{error}");
                continue;
            }
            for point in &row.sweep {
                let _ = writeln!(
                    out,
                    "{prefix},{},{},{},{},{},{},{error}",
                    point.fleet,
                    point.spill,
                    point.lower_bound,
                    point.upper_bound,
                    status_token(point.status),
                    point.rel_gap.map_or(String::new(), |g| format!("{g:.6}")),
                );
            }
        }
        out
    }

    /// Parse the long-format CSV produced by [`AggregateReport::to_csv`].
    pub fn parse_csv(text: &str) -> Result<AggregateReport> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        if header.trim()
            != "day,add,ar_coeff,realized_passengers,zero_spill_fleet,fleet,spill,lower_bound,upper_bound,status,gap,error"
        {
            return Err(Error::Parse { line: 1, msg: format!("bad header {header:?}") });
        }
        let mut report = AggregateReport::default();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 12 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 12 fields, got {}", fields.len()),
                });
            }
            let bad = |what: &str| Error::Parse { line: lineno, msg: format!("bad {what}") };
            let day = NaiveDate::parse_from_str(fields[0], "%Y-%m-%d")
                .map_err(|_| bad("day"))?;
            let add: f64 = fields[1].parse().map_err(|_| bad("add"))?;
            let ar_coeff: f64 = fields[2].parse().map_err(|_| bad("ar_coeff"))?;
            let realized: u64 = fields[3].parse().map_err(|_| bad("realized_passengers"))?;
            let zero_spill_fleet = if fields[4].is_empty() {
                None
            } else {
                Some(fields[4].parse().map_err(|_| bad("zero_spill_fleet"))?)
            };
            let error = if fields[11].is_empty() { None } else { Some(fields[11].to_string()) };
            let matches_last = report.rows.last().is_some_and(|r: &ProfileRow| {
                r.day == day && r.add == add && r.ar_coeff == ar_coeff
            });
            if !matches_last {
                report.rows.push(ProfileRow {
                    day,
                    add,
                    ar_coeff,
                    realized_passengers: realized,
                    zero_spill_fleet,
                    sweep: Vec::new(),
                    error,
                });
            }
            if fields[5].is_empty() {
                continue;
            }
            let status = match fields[9] {
                "optimal" => SolveStatus::Optimal,
                "feasible" => SolveStatus::Feasible {
                    rel_gap: if fields[10].is_empty() {
                        None
                    } else {
                        Some(fields[10].parse().map_err(|_| bad("gap"))?)
                    },
                },
                "infeasible" => SolveStatus::Infeasible,
                "timed_out" => SolveStatus::TimedOut,
                other => return Err(Error::Parse { line: lineno, msg: format!("bad status {other:?}") }),
            };
            let rel_gap = match status {
                SolveStatus::Feasible { rel_gap } => rel_gap,
                _ => None,
            };
            let row = report.rows.last_mut().expect("row pushed above");
            row.sweep.push(SweepPoint {
                fleet: fields[5].parse().map_err(|_| bad("fleet"))?,
                spill: fields[6].parse().map_err(|_| bad("spill"))?,
                lower_bound: fields[7].parse().map_err(|_| bad("lower_bound"))?,
                upper_bound: fields[8].parse().map_err(|_| bad("upper_bound"))?,
                status,
                rel_gap,
            });
        }
        Ok(report)
    }

    /// Scenario parameter pairs in first-seen order.
    pub fn scenarios(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for row in &self.rows {
            if !out.contains(&(row.add, row.ar_coeff)) {
                out.push((row.add, row.ar_coeff));
            }
        }
        out
    }

    pub fn rows_for(&self, add: f64, ar_coeff: f64) -> Vec<&ProfileRow> {
        self.rows
            .iter()
            .filter(|r| r.add == add && r.ar_coeff == ar_coeff)
            .collect()
    }
}

fn load_schedule(config: &ExperimentConfig) -> Result<AirlineSchedule> {
    match &config.schedule {
        ScheduleSource::Csv { path } => parse_schedule(&std::fs::read_to_string(path)?),
        ScheduleSource::Synthetic(params) => {
            // the pipeline owns all seeding: the schedule substream overrides
            // whatever seed the inline params carry
            let mut params = params.clone();
            params.seed = mix_seed(config.base_seed, &[STREAM_SCHEDULE]);
            generate_synthetic_schedule(&params)
        }
    }
}

fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<()> {
    std::fs::write(dir.join(name), content)?;
    Ok(())
}

/// Run one (scenario, profile) task end to end.
fn run_profile(
    config: &ExperimentConfig,
    scenario: &Scenario,
    profile: &ArrivalProfile,
) -> ProfileRow {
    let mut row = ProfileRow {
        day: profile.day,
        add: scenario.add,
        ar_coeff: scenario.ar_coeff,
        realized_passengers: profile.total_passengers() as u64,
        zero_spill_fleet: None,
        sweep: Vec::new(),
        error: None,
    };
    match run_profile_inner(config, scenario, profile, &mut row) {
        Ok(()) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn solve_checked(
    config: &ExperimentConfig,
    model: &crate::milp::MilpModel,
) -> Result<crate::milp::Solution> {
    let solution = HighsSolver.solve(model, &config.solver)?;
    if solution.status == SolveStatus::Infeasible {
        return Err(Error::Solver(format!("{} model infeasible", model.name)));
    }
    if !solution.status.has_solution() {
        return Err(Error::Solver(format!(
            "{} model hit the time limit without a solution",
            model.name
        )));
    }
    let mut violations = validate_solution(model, &solution);
    violations.extend(conservation_violations(&config.network, model, &solution));
    if let Some(v) = violations.first() {
        return Err(Error::Solver(format!("solution failed validation: {v}")));
    }
    Ok(solution)
}

fn run_profile_inner(
    config: &ExperimentConfig,
    scenario: &Scenario,
    profile: &ArrivalProfile,
    row: &mut ProfileRow,
) -> Result<()> {
    let label = scenario.label();
    let day = profile.day.format("%Y-%m-%d");
    write_artifact(
        &config.output_dir,
        &format!("arrivals_{label}_{day}.csv"),
        &profile.to_csv(),
    )?;
    let demand = dispatch(
        profile,
        config.network.seat_capacity,
        config.max_wait_minutes,
        config.network.step_minutes,
    )?;
    write_artifact(
        &config.output_dir,
        &format!("demand_{label}_{day}.csv"),
        &demand.to_csv(),
    )?;

    let sizing = build_fleet_sizing(&config.network, &demand, DEFAULT_FLIGHT_WEIGHT)?;
    let sizing_solution = solve_checked(config, &sizing)?;
    let f_star = fleet_size(&sizing, &sizing_solution);
    row.zero_spill_fleet = Some(f_star);

    for fleet in config.sweep.fleet_sizes(f_star) {
        let spill_model = build_spill(&config.network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT)?;
        let spill_solution = solve_checked(config, &spill_model)?;
        let (rel_gap, status) = match spill_solution.status {
            SolveStatus::Feasible { rel_gap } => (rel_gap, spill_solution.status),
            other => (None, other),
        };
        let lower = simulate_lower_bound(&config.network, &demand, fleet)?;
        let upper = simulate_upper_bound(&config.network, &demand, fleet)?;
        row.sweep.push(SweepPoint {
            fleet,
            spill: total_spill(&spill_model, &spill_solution),
            lower_bound: lower.daily_spill,
            upper_bound: upper.daily_spill,
            status,
            rel_gap,
        });
    }
    Ok(())
}

/// Execute every scenario x day task and write all artifacts plus
/// `report.csv` into the configured output directory.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<AggregateReport> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir)?;
    let schedule = load_schedule(config)?;
    let mut report = AggregateReport::default();
    for (scenario_idx, scenario) in config.scenarios.iter().enumerate() {
        let params = scenario.demand_params()?;
        let demand_seed = mix_seed(config.base_seed, &[STREAM_DEMAND, scenario_idx as u64]);
        let profiles = generate_profiles(&schedule, &params, demand_seed)?;
        let mut rows: Vec<ProfileRow> = profiles
            .par_iter()
            .map(|profile| run_profile(config, scenario, profile))
            .collect();
        report.rows.append(&mut rows);
    }
    write_artifact(&config.output_dir, "report.csv", &report.to_csv())?;
    Ok(report)
}
