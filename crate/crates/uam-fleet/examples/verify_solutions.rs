//! Cross-check the integer programs on a micro instance: solve with HiGHS,
//! validate every constraint independently, verify the aircraft conservation
//! law, and compare the optima against exhaustive enumeration.
//!
//! Run with: cargo run --example verify_solutions

use uam_fleet::dispatch::DemandTimeSeries;
use uam_fleet::milp::{
    brute_force_fleet_sizing, brute_force_spill, build_fleet_sizing, build_spill,
    conservation_violations, fleet_size, total_spill, validate_solution, HighsSolver,
    SolverAdapter, SolverLimits, DEFAULT_FLIGHT_WEIGHT,
};
use uam_fleet::network::{default_charging_curve, NetworkConfig, TimeTable};

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

fn main() {
    let network = micro_network();
    let mut demand = DemandTimeSeries::new(2, network.steps_per_day, network.step_minutes);
    demand.add_flight(0, 1, 1, 4);
    demand.add_flight(0, 1, 2, 3);
    demand.add_flight(1, 0, 4, 4);

    let limits = SolverLimits::exact();

    // Fleet sizing: solver vs exhaustive enumeration.
    let sizing = build_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT)
        .expect("model builds");
    let sized = HighsSolver.solve(&sizing, &limits).expect("solve succeeds");
    let oracle = brute_force_fleet_sizing(&network, &demand, DEFAULT_FLIGHT_WEIGHT)
        .expect("instance fits the oracle guard");
    let f_star = fleet_size(&sizing, &sized);
    println!("fleet sizing: solver F* = {f_star}, oracle F* = {}", oracle.fleet_size);
    assert_eq!(f_star, oracle.fleet_size);

    let violations = validate_solution(&sizing, &sized);
    let conservation = conservation_violations(&network, &sizing, &sized);
    println!(
        "validator: {} constraint violations, {} conservation violations",
        violations.len(),
        conservation.len()
    );
    assert!(violations.is_empty() && conservation.is_empty());

    // Spill below F*: solver vs enumeration again.
    for fleet in 0..=f_star {
        let model = build_spill(&network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT)
            .expect("model builds");
        let solution = HighsSolver.solve(&model, &limits).expect("solve succeeds");
        let spill = total_spill(&model, &solution);
        let oracle = brute_force_spill(&network, &demand, fleet, DEFAULT_FLIGHT_WEIGHT)
            .expect("instance fits the oracle guard");
        println!("spill at fleet {fleet}: solver {spill}, oracle {}", oracle.spill);
        assert_eq!(spill, oracle.spill);
        assert!(validate_solution(&model, &solution).is_empty());
        assert!(conservation_violations(&network, &model, &solution).is_empty());
    }
    println!("all checks passed");
}
