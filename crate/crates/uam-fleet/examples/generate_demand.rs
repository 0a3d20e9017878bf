//! Generate stochastic passenger arrival profiles from an airline schedule.
//!
//! Run with: cargo run --example generate_demand

use chrono::NaiveDate;
use uam_fleet::demand::{generate_profiles, DemandParams, Origin};
use uam_fleet::schedule::{generate_synthetic_schedule, SyntheticScheduleParams};

fn main() {
    let schedule = generate_synthetic_schedule(&SyntheticScheduleParams {
        days: 5,
        daily_flights_mean: 200.0,
        peak_hours: vec![7, 8, 17, 18],
        seat_mix: vec![(76, 0.3), (150, 0.5), (180, 0.2)],
        seed: 7,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
    })
    .expect("valid schedule params");

    // ADD = 800 passengers/day/direction, moderate hour-to-hour persistence.
    let params = DemandParams::new(800.0, 0.7).expect("valid demand params");
    let profiles = generate_profiles(&schedule, &params, 12345).expect("generation succeeds");

    println!("day          total  APT->CBD  CBD->APT");
    for p in &profiles {
        println!(
            "{}  {:>6}  {:>8}  {:>8}",
            p.day,
            p.total_passengers(),
            p.passengers_from(Origin::Apt),
            p.passengers_from(Origin::Cbd),
        );
    }

    // Hourly texture of the first day: realized counts vs autoregressed rates.
    let first = &profiles[0];
    println!("\nday {} APT->CBD by hour (count / rate / base rate):", first.day);
    for hour in 6..22 {
        let v = 0; // direction index of airline arrivals
        println!(
            "  h{hour:02}: {:>4}  {:>7.2}  {:>7.2}",
            first.hourly_counts[v][hour], first.hourly_rates[v][hour], first.hourly_rates0[v][hour]
        );
    }

    println!("\nCSV preview:");
    for line in first.to_csv().lines().take(4) {
        println!("  {line}");
    }
}
