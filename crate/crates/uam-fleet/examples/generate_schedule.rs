//! Generate a synthetic airline schedule and inspect its hourly seat ECDF.
//!
//! Run with: cargo run --example generate_schedule

use chrono::NaiveDate;
use uam_fleet::schedule::{generate_synthetic_schedule, Direction, SyntheticScheduleParams};

fn main() {
    let params = SyntheticScheduleParams {
        days: 7,
        daily_flights_mean: 120.0,
        peak_hours: vec![7, 8, 17, 18],
        seat_mix: vec![(76, 0.3), (150, 0.5), (180, 0.2)],
        seed: 42,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
    };
    let schedule = generate_synthetic_schedule(&params).expect("valid params");
    println!(
        "{} flights over {} days, {} arrival seats / {} departure seats",
        schedule.records().len(),
        schedule.num_days(),
        schedule.total_capacity(Direction::ArrivalAtApt),
        schedule.total_capacity(Direction::DepartureFromApt),
    );

    let day = schedule.days().next().expect("at least one day");
    for hour in [7u8, 12] {
        match schedule.hourly_capacity_ecdf(day, hour, Direction::ArrivalAtApt) {
            Ok(ecdf) => {
                let masses = ecdf.masses();
                println!("hour {hour}: {} flights share the arrivals", masses.len());
                for (record, mass) in masses.iter().take(3) {
                    let r = schedule.records()[*record];
                    println!("  minute {} ({} seats): mass {mass:.3}", r.event_minute, r.seats);
                }
            }
            Err(_) => println!("hour {hour}: no arrivals scheduled"),
        }
    }

    let csv = schedule.to_csv();
    println!("CSV preview:");
    for line in csv.lines().take(4) {
        println!("  {line}");
    }
}
