//! Solve the zero-spill fleet-sizing integer program for one demand day.
//!
//! Run with: cargo run --example size_fleet

use chrono::NaiveDate;
use uam_fleet::demand::{generate_profiles, DemandParams};
use uam_fleet::dispatch::dispatch;
use uam_fleet::milp::{
    build_fleet_sizing, fleet_size, total_flights, HighsSolver, SolverAdapter, SolverLimits,
    DEFAULT_FLIGHT_WEIGHT,
};
use uam_fleet::network::NetworkConfig;
use uam_fleet::schedule::{generate_synthetic_schedule, SyntheticScheduleParams};

fn main() {
    // Reduced scale: 15-minute steps, 8 SoC levels above the reserve.
    let network = NetworkConfig::reduced();

    let schedule = generate_synthetic_schedule(&SyntheticScheduleParams {
        days: 1,
        daily_flights_mean: 150.0,
        peak_hours: vec![8, 17],
        seat_mix: vec![(150, 1.0)],
        seed: 11,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
    })
    .expect("valid schedule params");
    let params = DemandParams::new(500.0, 0.0).expect("valid demand params");
    let profile = &generate_profiles(&schedule, &params, 2024).expect("generation succeeds")[0];
    let demand = dispatch(
        profile,
        network.seat_capacity,
        5.0,
        network.step_minutes,
    )
    .expect("dispatch succeeds");
    println!(
        "{} demanded flights, {} passengers",
        demand.total_flights(),
        demand.total_passengers()
    );

    let model = build_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT)
        .expect("model builds");
    println!(
        "model: {} variables, {} constraints",
        model.num_variables(),
        model.constraints.len()
    );

    let solution = HighsSolver
        .solve(&model, &SolverLimits::default())
        .expect("solve succeeds");
    println!("status {:?}, objective {:.5}", solution.status, solution.objective);
    println!(
        "minimum zero-spill fleet F* = {} aircraft flying {} flights",
        fleet_size(&model, &solution),
        total_flights(&model, &solution)
    );
}
