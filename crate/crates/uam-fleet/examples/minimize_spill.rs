//! Minimize passenger spill at fleet sizes below the zero-spill minimum.
//!
//! Run with: cargo run --example minimize_spill

use chrono::NaiveDate;
use uam_fleet::demand::{generate_profiles, DemandParams};
use uam_fleet::dispatch::dispatch;
use uam_fleet::milp::{
    build_fleet_sizing, build_spill, fleet_size, total_spill, HighsSolver, SolverAdapter,
    SolverLimits, DEFAULT_FLIGHT_WEIGHT,
};
use uam_fleet::network::NetworkConfig;
use uam_fleet::schedule::{generate_synthetic_schedule, SyntheticScheduleParams};

fn main() {
    let network = NetworkConfig::reduced();
    let schedule = generate_synthetic_schedule(&SyntheticScheduleParams {
        days: 1,
        daily_flights_mean: 100.0,
        peak_hours: vec![8, 17],
        seat_mix: vec![(150, 1.0)],
        seed: 11,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
    })
    .expect("valid schedule params");
    let params = DemandParams::new(200.0, 0.0).expect("valid demand params");
    let profile = &generate_profiles(&schedule, &params, 2024).expect("generation succeeds")[0];
    let demand = dispatch(profile, network.seat_capacity, 5.0, network.step_minutes)
        .expect("dispatch succeeds");

    let limits = SolverLimits::default();
    let sizing = build_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT)
        .expect("model builds");
    let sized = HighsSolver.solve(&sizing, &limits).expect("solve succeeds");
    let f_star = fleet_size(&sizing, &sized);
    println!("zero-spill fleet F* = {f_star}");

    println!("\nfleet  spilled passengers");
    for fleet in f_star.saturating_sub(3)..=f_star {
        let model = build_spill(&network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT)
            .expect("model builds");
        let solution = HighsSolver.solve(&model, &limits).expect("solve succeeds");
        println!(
            "{fleet:>5}  {:>6}  ({:?})",
            total_spill(&model, &solution),
            solution.status
        );
    }
}
