//! Convert passenger arrivals to per-step flight demand with the dispatch rule.
//!
//! Run with: cargo run --example dispatch_demand

use chrono::NaiveDate;
use uam_fleet::demand::{generate_profiles, DemandParams};
use uam_fleet::dispatch::dispatch;
use uam_fleet::schedule::{generate_synthetic_schedule, SyntheticScheduleParams};

fn main() {
    let schedule = generate_synthetic_schedule(&SyntheticScheduleParams {
        days: 1,
        daily_flights_mean: 150.0,
        peak_hours: vec![8, 17],
        seat_mix: vec![(150, 1.0)],
        seed: 3,
        arrival_share: 0.5,
        arrival_shape: None,
        departure_shape: None,
        start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
    })
    .expect("valid schedule params");

    let params = DemandParams::new(600.0, 0.0).expect("valid demand params");
    let profile = &generate_profiles(&schedule, &params, 42).expect("generation succeeds")[0];
    println!("{} passengers arrived at the vertiports", profile.total_passengers());

    // 4-seat aircraft, 5-minute max wait, 15-minute dispatch steps.
    let series = dispatch(profile, 4, 5.0, 15).expect("dispatch succeeds");
    println!(
        "dispatched {} flights carrying {} passengers over {} steps",
        series.total_flights(),
        series.total_passengers(),
        series.steps
    );

    let mean_occupancy = series.total_passengers() as f64 / series.total_flights() as f64;
    println!("mean occupancy {mean_occupancy:.2} of 4 seats");

    // Busiest cells and their canonical per-flight occupancy split.
    let mut cells: Vec<(usize, usize, usize, u32, u32)> = Vec::new();
    for (i, j) in series.pairs() {
        for s in 0..series.steps {
            let f = series.flights_at(i, j, s);
            if f > 0 {
                cells.push((i, j, s, f, series.passengers_at(i, j, s)));
            }
        }
    }
    cells.sort_by_key(|&(_, _, _, f, p)| std::cmp::Reverse((f, p)));
    println!("\nbusiest cells (from,to,step): flights, passengers, occupancy split");
    for &(i, j, s, f, p) in cells.iter().take(5) {
        let split = series.occupancy_split(i, j, s, 4);
        println!("  ({i},{j},{s:>2}): {f} flights, {p:>2} pax, split {split:?}");
    }
}
