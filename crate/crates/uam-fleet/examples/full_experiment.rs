//! Run the whole pipeline — schedule, demand, dispatch, fleet sizing, spill
//! sweep, simulation bounds — for two scenarios and render the report plots.
//!
//! Run with: cargo run --example full_experiment

use uam_fleet::harness::{
    emit_plots, run_pipeline, ExperimentConfig, Scenario, ScheduleSource, SweepSpec,
};
use uam_fleet::milp::SolverLimits;
use uam_fleet::network::NetworkConfig;

fn main() {
    let output_dir = std::env::temp_dir().join("uam-fleet-full-experiment");
    let config_json = serde_json::json!({
        "schedule": {
            "kind": "synthetic",
            "days": 2,
            "daily_flights_mean": 100.0,
            "peak_hours": [8, 17],
            "seat_mix": [[150, 1.0]],
            "seed": 0
        },
        "scenarios": [
            {"add": 150.0, "ar_coeff": 0.0},
            {"add": 150.0, "ar_coeff": 0.7}
        ],
        "sweep": {"mode": "relative", "depth": 2},
        "base_seed": 7,
        "output_dir": output_dir
    });
    let mut config =
        ExperimentConfig::from_json(&config_json.to_string()).expect("valid config");
    config.network = NetworkConfig::reduced();
    config.solver = SolverLimits::default();
    assert!(matches!(config.schedule, ScheduleSource::Synthetic(_)));
    assert!(matches!(config.sweep, SweepSpec::Relative { depth: 2 }));

    let report = run_pipeline(&config).expect("pipeline succeeds");
    println!("pipeline wrote {}", output_dir.join("report.csv").display());
    for (add, ar) in report.scenarios() {
        let scenario = Scenario { add, ar_coeff: ar };
        println!("\nscenario {}:", scenario.label());
        for row in report.rows_for(add, ar) {
            println!(
                "  day {}: {} passengers, F* = {:?}, sweep {:?}",
                row.day,
                row.realized_passengers,
                row.zero_spill_fleet,
                row.sweep
                    .iter()
                    .map(|p| (p.fleet, p.spill))
                    .collect::<Vec<_>>()
            );
        }
    }

    let plots = emit_plots(&report, &output_dir).expect("plots render");
    println!("\nplots:");
    for p in plots {
        println!("  {}", p.display());
    }
}
