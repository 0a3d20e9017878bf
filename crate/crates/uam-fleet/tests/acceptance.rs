//! Acceptance gate: nine end-to-end criteria with pinned tolerances.
//!
//! Each criterion prints one `criterion N (<name>): PASS|FAIL` line; the
//! single test fails if any criterion fails. Criteria 4-7 feed every solver
//! solution through the independent validator for criterion 8.

use std::time::Instant;

use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uam_fleet::demand::{
    generate_day, generate_profiles, flight_rates, sample_skew_normal, DemandParams,
    SkewNormalParams,
};
use uam_fleet::dispatch::{dispatch, DemandTimeSeries};
use uam_fleet::heuristics::{simulate_lower_bound, simulate_upper_bound};
use uam_fleet::milp::{
    brute_force_fleet_sizing, brute_force_spill, build_fleet_sizing, build_spill,
    conservation_violations, fleet_size, spill_by_cell, total_spill, validate_solution,
    HighsSolver, MilpModel, Solution, SolverAdapter, SolverLimits,
    DEFAULT_FLIGHT_WEIGHT,
};
use uam_fleet::network::{default_charging_curve, NetworkConfig, TimeTable};
use uam_fleet::schedule::{
    generate_synthetic_schedule, AirlineSchedule, Direction, FlightRecord,
    SyntheticScheduleParams,
};

/// Violation log shared by criteria 4-7 and judged as criterion 8.
#[derive(Default)]
struct ValidationLog {
    solutions_checked: usize,
    violations: Vec<String>,
}

impl ValidationLog {
    fn check(&mut self, config: &NetworkConfig, model: &MilpModel, solution: &Solution) {
        self.solutions_checked += 1;
        for v in validate_solution(model, solution) {
            self.violations.push(format!("{}: {v}", model.name));
        }
        for v in conservation_violations(config, model, solution) {
            self.violations.push(format!("{}: {v}", model.name));
        }
    }
}

struct Outcome {
    number: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn report(outcomes: &mut Vec<Outcome>, number: u32, name: &'static str, result: (bool, String)) {
    let (passed, detail) = result;
    println!(
        "criterion {number} ({name}): {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    outcomes.push(Outcome { number, name, passed, detail });
}

fn within_runtime(start: Instant, limit_s: f64) -> (bool, f64) {
    let elapsed = start.elapsed().as_secs_f64();
    (elapsed <= limit_s, elapsed)
}

fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

/// 365 identical days, one 150-seat flight per hour 6..22 in each direction.
/// Identical days give every qualifying hour the same Poisson rate, so the
/// pooled dispersion statistic is exactly the Poisson index of dispersion.
fn replicated_schedule(days: u32) -> AirlineSchedule {
    let start = date("2019-01-01");
    let mut records = Vec::new();
    for d in 0..days {
        let day = start + chrono::Days::new(u64::from(d));
        for direction in Direction::ALL {
            for hour in 6..22u32 {
                records.push(FlightRecord {
                    day,
                    direction,
                    event_minute: hour * 60 + 30,
                    seats: 150,
                });
            }
        }
    }
    AirlineSchedule::from_records(records)
}

// 1. Demand statistics: mean daily directional passengers within 3% of
// ADD=1500; hourly-count dispersion in [0.9, 1.1] for hours with rate >= 20.
fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let schedule = replicated_schedule(365);
    let params = DemandParams::new(1500.0, 0.0).unwrap();
    let profiles = generate_profiles(&schedule, &params, 20240101).unwrap();
    assert_eq!(profiles.len(), 365);

    let mut ok = true;
    let mut detail = String::new();
    for v in 0..2 {
        let mean_daily: f64 = profiles
            .iter()
            .map(|p| p.hourly_counts[v][..].iter().sum::<u64>() as f64)
            .sum::<f64>()
            / profiles.len() as f64;
        let rel = (mean_daily - 1500.0).abs() / 1500.0;
        if rel > 0.03 {
            ok = false;
        }
        // pooled over the qualifying hours (all share the same rate here)
        let mut counts = Vec::new();
        for p in &profiles {
            for h in 0..24 {
                if p.hourly_rates[v][h] >= 20.0 {
                    counts.push(p.hourly_counts[v][h] as f64);
                }
            }
        }
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let dispersion = var / mean;
        if !(0.9..=1.1).contains(&dispersion) {
            ok = false;
        }
        detail.push_str(&format!(
            "dir{v}: mean/day {mean_daily:.1} (tol 3%), dispersion {dispersion:.3} (band [0.9,1.1]); "
        ));
    }
    let (in_time, elapsed) = within_runtime(start, 60.0);
    detail.push_str(&format!("{elapsed:.1}s (limit 60s)"));
    (ok && in_time, detail)
}

// 2. Lead-time median: 10^6 skew-normal(93, 40, 3) samples, median 120 +- 2.
fn criterion_2() -> (bool, String) {
    let start = Instant::now();
    let params = SkewNormalParams::new(93.0, 40.0, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 1_000_000;
    let mut draws: Vec<f64> = (0..n).map(|_| sample_skew_normal(&params, &mut rng)).collect();
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = (draws[n / 2 - 1] + draws[n / 2]) / 2.0;
    let ok = (118.0..=122.0).contains(&median);
    let (in_time, elapsed) = within_runtime(start, 10.0);
    (
        ok && in_time,
        format!("median {median:.2} min (pinned 120 +- 2); {elapsed:.1}s (limit 10s)"),
    )
}

// 3. Autoregression widens spread: variance of daily realized passengers at
// ar=0.7 exceeds ar=0 by factor > 1.1 over 200 paired replications.
fn criterion_3() -> (bool, String) {
    let start = Instant::now();
    let schedule = replicated_schedule(1);
    let day = date("2019-01-01");
    let params0 = DemandParams::new(1500.0, 0.0).unwrap();
    let params7 = DemandParams::new(1500.0, 0.7).unwrap();
    let rates = flight_rates(&schedule, 1500.0).unwrap();
    let mut totals0 = Vec::new();
    let mut totals7 = Vec::new();
    for replication in 0..200u64 {
        // paired: both arms share the replication's random number stream
        let mut rng0 = ChaCha8Rng::seed_from_u64(3_000 + replication);
        let mut rng7 = ChaCha8Rng::seed_from_u64(3_000 + replication);
        let p0 = generate_day(&schedule, &rates, day, &params0, &mut rng0).unwrap();
        let p7 = generate_day(&schedule, &rates, day, &params7, &mut rng7).unwrap();
        totals0.push(p0.total_passengers() as f64);
        totals7.push(p7.total_passengers() as f64);
    }
    let var = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
    };
    let (v0, v7) = (var(&totals0), var(&totals7));
    let ratio = v7 / v0;
    let ok = ratio > 1.1;
    let (in_time, elapsed) = within_runtime(start, 120.0);
    (
        ok && in_time,
        format!("variance ratio {ratio:.2} (must exceed 1.1); {elapsed:.1}s (limit 120s)"),
    )
}

fn micro_network() -> NetworkConfig {
    NetworkConfig {
        vertiports: vec!["APT".into(), "CBD".into()],
        steps_per_day: 8,
        step_minutes: 180,
        soc_levels: 3,
        reserve_fraction: 0.20,
        soc_increment: 1.0 / 3.0,
        gamma: default_charging_curve(3),
        tau: TimeTable::Constant(1),
        kappa: TimeTable::Constant(1),
        seat_capacity: 4,
    }
}

// 4. Oracle equivalence: 20 randomized micro instances (|V|=2, T <= 10,
// K <= 4); solver-adapter optima equal brute-force optima exactly, both IPs.
fn criterion_4(log: &mut ValidationLog) -> (bool, String) {
    let start = Instant::now();
    let network = micro_network();
    assert!(network.horizon() <= 10 && network.soc_levels <= 4);
    let limits = SolverLimits::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = Vec::new();
    for instance in 0..20 {
        let mut demand =
            DemandTimeSeries::new(2, network.steps_per_day, network.step_minutes);
        for _ in 0..rng.random_range(1..=3usize) {
            let from = rng.random_range(0..2usize);
            let step = rng.random_range(0..network.steps_per_day - 1);
            let occupancy = rng.random_range(1..=network.seat_capacity);
            demand.add_flight(from, 1 - from, step, occupancy);
        }

        let sizing = build_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let sized = HighsSolver.solve(&sizing, &limits).unwrap();
        log.check(&network, &sizing, &sized);
        let oracle = brute_force_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let f_star = fleet_size(&sizing, &sized);
        if f_star != oracle.fleet_size || (sized.objective - oracle.objective).abs() > 1e-9 {
            mismatches.push(format!(
                "instance {instance} sizing: solver F*={f_star} obj={:.6}, oracle F*={} obj={:.6}",
                sized.objective, oracle.fleet_size, oracle.objective
            ));
        }

        let fleet = rng.random_range(0..=f_star.max(1).min(3));
        let spill_model = build_spill(&network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let solved = HighsSolver.solve(&spill_model, &limits).unwrap();
        log.check(&network, &spill_model, &solved);
        let oracle = brute_force_spill(&network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let spill = total_spill(&spill_model, &solved);
        if spill != oracle.spill || (solved.objective - oracle.objective).abs() > 1e-9 {
            mismatches.push(format!(
                "instance {instance} spill@{fleet}: solver {spill} obj={:.6}, oracle {} obj={:.6}",
                solved.objective, oracle.spill, oracle.objective
            ));
        }
    }
    let (in_time, elapsed) = within_runtime(start, 120.0);
    let detail = if mismatches.is_empty() {
        format!("20/20 instances match exactly (both IPs); {elapsed:.1}s (limit 120s)")
    } else {
        mismatches.join("; ")
    };
    (mismatches.is_empty() && in_time, detail)
}

/// Reduced-scale demand days shared by criteria 5-7 and 9.
fn reduced_profiles(
    days: u32,
    add: f64,
    seed: u64,
    params: &SyntheticScheduleParams,
) -> Vec<DemandTimeSeries> {
    let network = NetworkConfig::reduced();
    let mut params = params.clone();
    params.days = days;
    let schedule = generate_synthetic_schedule(&params).unwrap();
    let demand_params = DemandParams::new(add, 0.0).unwrap();
    generate_profiles(&schedule, &demand_params, seed)
        .unwrap()
        .iter()
        .map(|p| dispatch(p, network.seat_capacity, 5.0, network.step_minutes).unwrap())
        .collect()
}

fn default_synthetic() -> SyntheticScheduleParams {
    SyntheticScheduleParams {
        days: 0,
        daily_flights_mean: 150.0,
        peak_hours: vec![7, 8, 17, 18],
        seat_mix: vec![(150, 1.0)],
        seed: 0,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: date("2019-01-01"),
    }
}

fn solve_f_star(
    network: &NetworkConfig,
    demand: &DemandTimeSeries,
    limits: &SolverLimits,
    log: &mut ValidationLog,
) -> u32 {
    let model = build_fleet_sizing(network, demand, DEFAULT_FLIGHT_WEIGHT).unwrap();
    let solution = HighsSolver.solve(&model, limits).unwrap();
    assert!(solution.status.has_solution(), "fleet sizing unsolved");
    log.check(network, &model, &solution);
    fleet_size(&model, &solution)
}

// 5. Zero-spill consistency: 30 profiles at ADD=500 (96 steps, K=8); the
// spill IP at F = F* returns spill 0.
fn criterion_5(log: &mut ValidationLog) -> (bool, String) {
    let start = Instant::now();
    let network = NetworkConfig::reduced();
    let limits = SolverLimits::default();
    let mut failures = Vec::new();
    for (day, demand) in reduced_profiles(30, 500.0, 5_000, &default_synthetic())
        .iter()
        .enumerate()
    {
        let f_star = solve_f_star(&network, demand, &limits, log);
        let model = build_spill(&network, demand, f_star, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let solution = HighsSolver.solve(&model, &limits).unwrap();
        log.check(&network, &model, &solution);
        let spill = total_spill(&model, &solution);
        if spill != 0 {
            failures.push(format!("day {day}: spill {spill} at F*={f_star}"));
        }
    }
    let (in_time, elapsed) = within_runtime(start, 1_800.0);
    let detail = if failures.is_empty() {
        format!("30/30 profiles spill 0 at F*; {elapsed:.1}s (limit 1800s)")
    } else {
        failures.join("; ")
    };
    (failures.is_empty() && in_time, detail)
}

// 6. Monotonicity and sandwich: on 10 profiles, spill(F) nonincreasing over
// F in {F*-3..F*} and sim_lower <= spill_IP <= sim_upper at every F.
fn criterion_6(log: &mut ValidationLog) -> (bool, String) {
    let start = Instant::now();
    let network = NetworkConfig::reduced();
    let limits = SolverLimits::default();
    let mut failures = Vec::new();
    let mut points = 0;
    for (day, demand) in reduced_profiles(10, 500.0, 6_000, &default_synthetic())
        .iter()
        .enumerate()
    {
        let f_star = solve_f_star(&network, demand, &limits, log);
        let mut prev_spill = None;
        for fleet in f_star.saturating_sub(3)..=f_star {
            let model = build_spill(&network, demand, fleet, DEFAULT_FLIGHT_WEIGHT).unwrap();
            // 0.5% relative gap: exact for the integral spill totals seen here
            let solution = HighsSolver.solve(&model, &limits).unwrap();
            log.check(&network, &model, &solution);
            let spill = total_spill(&model, &solution);
            let lower = simulate_lower_bound(&network, demand, fleet).unwrap().daily_spill;
            let upper = simulate_upper_bound(&network, demand, fleet).unwrap().daily_spill;
            // "within reported gap": the solve may overshoot the optimum by
            // rel_gap, so allow that much slack above the upper heuristic
            let slack = limits.rel_gap * f64::from(spill);
            if lower > spill || f64::from(spill) > f64::from(upper) + slack {
                failures.push(format!(
                    "day {day} F={fleet}: sandwich {lower} <= {spill} <= {upper} broken"
                ));
            }
            if let Some(prev) = prev_spill {
                if spill > prev {
                    failures.push(format!(
                        "day {day}: spill rose {prev} -> {spill} at F={fleet}"
                    ));
                }
            }
            prev_spill = Some(spill);
            points += 1;
        }
    }
    let (in_time, elapsed) = within_runtime(start, 3_600.0);
    let detail = if failures.is_empty() {
        format!("{points} sweep points monotone and sandwiched; {elapsed:.1}s (limit 3600s)")
    } else {
        failures.join("; ")
    };
    (failures.is_empty() && in_time, detail)
}

// 7. Trend reproduction: median F* strictly increases over ADD in
// {500, 1500, 2500} at reduced scale.
fn criterion_7(log: &mut ValidationLog) -> (bool, String) {
    let start = Instant::now();
    let network = NetworkConfig::reduced();
    let limits = SolverLimits::default();
    let mut medians = Vec::new();
    for &add in &[500.0, 1500.0, 2500.0] {
        let mut f_stars: Vec<u32> = reduced_profiles(5, add, 7_000, &default_synthetic())
            .iter()
            .map(|demand| solve_f_star(&network, demand, &limits, log))
            .collect();
        f_stars.sort_unstable();
        medians.push(f_stars[f_stars.len() / 2]);
    }
    let ok = medians.windows(2).all(|w| w[0] < w[1]);
    let (in_time, elapsed) = within_runtime(start, 7_200.0);
    (
        ok && in_time,
        format!(
            "median F* = {medians:?} for ADD 500/1500/2500 (strictly increasing); {elapsed:.1}s (limit 7200s)"
        ),
    )
}

// 8. Validator clean: zero violations for every solver solution of 4-7,
// conservation law included.
fn criterion_8(log: &ValidationLog) -> (bool, String) {
    if log.violations.is_empty() {
        (
            true,
            format!("{} solver solutions validated, 0 violations", log.solutions_checked),
        )
    } else {
        (false, log.violations.join("; "))
    }
}

// 9. Early-morning spill concentration: on an imbalance-heavy schedule,
// >= 60% of passengers spilled at F*-1 fall in top-quartile imbalance hours.
fn criterion_9() -> (bool, String) {
    let network = NetworkConfig::reduced();
    let limits = SolverLimits::default();
    // arrivals slam hours 5-8, departures spread over the day
    let mut arrival_shape = [0.05f64; 24];
    for h in 5..9 {
        arrival_shape[h] = 5.0;
    }
    let mut departure_shape = [0.05f64; 24];
    for h in 6..22 {
        departure_shape[h] = 1.0;
    }
    let params = SyntheticScheduleParams {
        arrival_shape: Some(arrival_shape),
        departure_shape: Some(departure_shape),
        ..default_synthetic()
    };
    let mut log = ValidationLog::default();
    let mut top_quartile_spill = 0u64;
    let mut total = 0u64;
    for demand in &reduced_profiles(3, 500.0, 9_000, &params) {
        // hourly directional imbalance of the passenger demand
        let steps_per_hour = 60 / network.step_minutes as usize;
        let mut imbalance = [0i64; 24];
        for s in 0..demand.steps {
            let h = s / steps_per_hour;
            imbalance[h] += i64::from(demand.passengers_at(0, 1, s));
            imbalance[h] -= i64::from(demand.passengers_at(1, 0, s));
        }
        let mut order: Vec<usize> = (0..24).collect();
        order.sort_by_key(|&h| std::cmp::Reverse(imbalance[h].abs()));
        let top_hours = &order[..6];

        let f_star = solve_f_star(&network, demand, &limits, &mut log);
        if f_star == 0 {
            continue;
        }
        let model = build_spill(&network, demand, f_star - 1, DEFAULT_FLIGHT_WEIGHT).unwrap();
        let solution = HighsSolver.solve(&model, &limits).unwrap();
        for (_, _, t, spilled) in spill_by_cell(&model, &solution) {
            let hour = (t - 1) / steps_per_hour; // model time t serves step t-1
            total += u64::from(spilled);
            if top_hours.contains(&hour) {
                top_quartile_spill += u64::from(spilled);
            }
        }
    }
    if total == 0 {
        return (false, "no spill observed at F*-1; criterion unverifiable".into());
    }
    let share = top_quartile_spill as f64 / total as f64;
    (
        share >= 0.60,
        format!(
            "{top_quartile_spill}/{total} spilled passengers ({:.0}%) in top-quartile imbalance hours (need >= 60%)",
            share * 100.0
        ),
    )
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    let mut log = ValidationLog::default();
    report(&mut outcomes, 1, "demand statistics", criterion_1());
    report(&mut outcomes, 2, "lead-time median", criterion_2());
    report(&mut outcomes, 3, "autoregression widens spread", criterion_3());
    report(&mut outcomes, 4, "oracle equivalence", criterion_4(&mut log));
    report(&mut outcomes, 5, "zero-spill consistency", criterion_5(&mut log));
    report(&mut outcomes, 6, "monotonicity and sandwich", criterion_6(&mut log));
    report(&mut outcomes, 7, "trend reproduction", criterion_7(&mut log));
    report(&mut outcomes, 8, "validator clean", criterion_8(&log));
    report(&mut outcomes, 9, "early-morning spill concentration", criterion_9());

    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("criterion {} ({}): {}", o.number, o.name, o.detail))
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
