//! Airline schedule ingestion and synthesis.
//!
//! A schedule is a flat list of per-day flight events (gate-in for arrivals,
//! scheduled departure for departures) with seat capacities, grouped by
//! (day, hour, direction). Each group exposes a seat-capacity ECDF used to
//! assign generated passengers to flights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::mix_seed;

pub const MINUTES_PER_DAY: u32 = 1440;

/// Direction of an airline flight event at the airport.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// Airline arrival at APT; creates UAM demand APT -> CBD.
    ArrivalAtApt = 0,
    /// Airline departure from APT; creates UAM demand CBD -> APT.
    DepartureFromApt = 1,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::ArrivalAtApt, Direction::DepartureFromApt];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            Direction::ArrivalAtApt => "ARR",
            Direction::DepartureFromApt => "DEP",
        }
    }

    pub fn from_token(s: &str) -> Option<Direction> {
        match s {
            "ARR" => Some(Direction::ArrivalAtApt),
            "DEP" => Some(Direction::DepartureFromApt),
            _ => None,
        }
    }
}

/// One airline flight event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlightRecord {
    pub day: NaiveDate,
    pub direction: Direction,
    /// Minutes after midnight in [0, 1440).
    pub event_minute: u32,
    /// Seat capacity, >= 1.
    pub seats: u32,
}

impl FlightRecord {
    pub fn hour(&self) -> u8 {
        (self.event_minute / 60) as u8
    }

    fn validate(&self, line: usize) -> Result<()> {
        if self.seats == 0 {
            return Err(Error::Validation(format!(
                "line {line}: seats must be >= 1"
            )));
        }
        if self.event_minute >= MINUTES_PER_DAY {
            return Err(Error::Validation(format!(
                "line {line}: minute {} out of [0,1440)",
                self.event_minute
            )));
        }
        Ok(())
    }
}

/// Key of one (day, hour, direction) flight group.
pub type CellKey = (NaiveDate, u8, Direction);

/// A set of airline schedules over one or more days, grouped by
/// (day, hour, direction).
#[derive(Debug, Clone, Default)]
pub struct AirlineSchedule {
    records: Vec<FlightRecord>,
    /// record indices per (day, hour, direction) cell; a partition of 0..len.
    cells: BTreeMap<CellKey, Vec<usize>>,
    days: BTreeSet<NaiveDate>,
}

impl AirlineSchedule {
    pub fn from_records(records: Vec<FlightRecord>) -> Self {
        let mut cells: BTreeMap<CellKey, Vec<usize>> = BTreeMap::new();
        let mut days = BTreeSet::new();
        for (idx, r) in records.iter().enumerate() {
            cells
                .entry((r.day, r.hour(), r.direction))
                .or_default()
                .push(idx);
            days.insert(r.day);
        }
        AirlineSchedule {
            records,
            cells,
            days,
        }
    }

    pub fn records(&self) -> &[FlightRecord] {
        &self.records
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.days.iter().copied()
    }

    pub fn num_days(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record indices of the cell f_{d,h,v}; empty slice for empty cells.
    pub fn cell(&self, day: NaiveDate, hour: u8, direction: Direction) -> &[usize] {
        self.cells
            .get(&(day, hour, direction))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn cell_keys(&self) -> impl Iterator<Item = &CellKey> {
        self.cells.keys()
    }

    /// Total seat capacity over all days for one direction (beta_v).
    pub fn total_capacity(&self, direction: Direction) -> u64 {
        self.records
            .iter()
            .filter(|r| r.direction == direction)
            .map(|r| u64::from(r.seats))
            .sum()
    }

    /// Seat-capacity ECDF of the cell f_{d,h,v}.
    ///
    /// Errors on empty cells: callers must not sample from them.
    pub fn hourly_capacity_ecdf(
        &self,
        day: NaiveDate,
        hour: u8,
        direction: Direction,
    ) -> Result<CapacityEcdf> {
        let indices = self.cell(day, hour, direction);
        if indices.is_empty() {
            return Err(Error::Validation(format!(
                "empty flight cell ({day}, h={hour}, {})",
                direction.token()
            )));
        }
        CapacityEcdf::new(indices, &self.records)
    }

    /// Serialize to the `date,direction,minute,seats` CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,direction,minute,seats\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.day.format("%Y-%m-%d"),
                r.direction.token(),
                r.event_minute,
                r.seats
            );
        }
        out
    }
}

/// Parse the `date,direction,minute,seats` CSV schema.
pub fn parse_schedule(csv_text: &str) -> Result<AirlineSchedule> {
    let mut lines = csv_text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input, expected header".into(),
    })?;
    if header.trim() != "date,direction,minute,seats" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad header {header:?}, expected date,direction,minute,seats"),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let day = NaiveDate::parse_from_str(fields[0].trim(), "%Y-%m-%d").map_err(|e| {
            Error::Parse {
                line: lineno,
                msg: format!("bad date {:?}: {e}", fields[0]),
            }
        })?;
        let direction = Direction::from_token(fields[1].trim()).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("bad direction {:?}, expected ARR or DEP", fields[1]),
        })?;
        let event_minute: u32 = fields[2].trim().parse().map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("bad minute {:?}: {e}", fields[2]),
        })?;
        let seats: i64 = fields[3].trim().parse().map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("bad seats {:?}: {e}", fields[3]),
        })?;
        if seats <= 0 {
            return Err(Error::Validation(format!(
                "line {lineno}: seats must be positive, got {seats}"
            )));
        }
        let record = FlightRecord {
            day,
            direction,
            event_minute,
            seats: seats as u32,
        };
        record.validate(lineno)?;
        records.push(record);
    }
    Ok(AirlineSchedule::from_records(records))
}

/// Inverse-samplable seat-capacity distribution of one flight cell.
///
/// Each flight carries probability mass c_i / sum(c_j) over its cell.
#[derive(Debug, Clone)]
pub struct CapacityEcdf {
    /// (cumulative weight, record index), cumulative strictly increasing to 1.
    cumulative: Vec<(f64, usize)>,
}

impl CapacityEcdf {
    fn new(indices: &[usize], records: &[FlightRecord]) -> Result<CapacityEcdf> {
        let total: u64 = indices.iter().map(|&i| u64::from(records[i].seats)).sum();
        if total == 0 {
            return Err(Error::Validation("cell has zero total capacity".into()));
        }
        let mut cumulative = Vec::with_capacity(indices.len());
        let mut acc = 0u64;
        for &i in indices {
            acc += u64::from(records[i].seats);
            cumulative.push((acc as f64 / total as f64, i));
        }
        // force exact 1.0 at the top against rounding
        cumulative.last_mut().expect("nonempty").0 = 1.0;
        Ok(CapacityEcdf { cumulative })
    }

    /// Inverse lookup F^-1(u) for u in (0, 1]; returns the record index.
    pub fn inverse(&self, u: f64) -> usize {
        debug_assert!(u > 0.0 && u <= 1.0);
        match self
            .cumulative
            .binary_search_by(|(c, _)| c.partial_cmp(&u).expect("no NaN"))
        {
            Ok(pos) => self.cumulative[pos].1,
            Err(pos) => self.cumulative[pos.min(self.cumulative.len() - 1)].1,
        }
    }

    /// Sample a flight record index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        // u in (0,1]: flip the half-open range of random()
        let u = 1.0 - rng.random::<f64>();
        self.inverse(u)
    }

    pub fn masses(&self) -> Vec<(usize, f64)> {
        let mut prev = 0.0;
        self.cumulative
            .iter()
            .map(|&(c, i)| {
                let m = c - prev;
                prev = c;
                (i, m)
            })
            .collect()
    }
}

/// Parameters of the synthetic schedule generator.
///
/// Stands in for real airport schedule data: per day and direction, flight
/// counts are Poisson around `daily_flights_mean * direction share`, hours are
/// drawn from a 24-entry shape table, and seats from a weighted mix.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SyntheticScheduleParams {
    pub days: u32,
    /// Expected total flights per day across both directions.
    pub daily_flights_mean: f64,
    /// Hours that receive extra weight in both directions' shape tables.
    #[serde(default)]
    pub peak_hours: Vec<u8>,
    /// (seats, weight) pairs; weights must sum to 1.
    pub seat_mix: Vec<(u32, f64)>,
    pub seed: u64,
    /// Share of flights that are arrivals at APT; the rest are departures.
    #[serde(default = "default_arrival_share")]
    pub arrival_share: f64,
    /// Explicit per-direction hourly shape tables; override `peak_hours`.
    #[serde(default)]
    pub arrival_shape: Option<[f64; 24]>,
    #[serde(default)]
    pub departure_shape: Option<[f64; 24]>,
    #[serde(default = "default_start_date")]
    pub start_date: NaiveDate,
}

fn default_arrival_share() -> f64 {
    0.5
}

fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date")
}

impl SyntheticScheduleParams {
    fn shape(&self, direction: Direction) -> [f64; 24] {
        let explicit = match direction {
            Direction::ArrivalAtApt => self.arrival_shape,
            Direction::DepartureFromApt => self.departure_shape,
        };
        if let Some(s) = explicit {
            return s;
        }
        // Quiet overnight hours, flat daytime base, boosted peaks.
        let mut shape = [1.0; 24];
        for h in 0..5 {
            shape[h] = 0.1;
        }
        for &h in &self.peak_hours {
            if (h as usize) < 24 {
                shape[h as usize] += 3.0;
            }
        }
        shape
    }

    fn validate(&self) -> Result<()> {
        if self.seat_mix.is_empty() {
            return Err(Error::Config("seat_mix must not be empty".into()));
        }
        let wsum: f64 = self.seat_mix.iter().map(|&(_, w)| w).sum();
        if (wsum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "seat_mix weights must sum to 1, got {wsum}"
            )));
        }
        if self.daily_flights_mean < 0.0 {
            return Err(Error::Config("daily_flights_mean must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.arrival_share) {
            return Err(Error::Config("arrival_share must be in [0,1]".into()));
        }
        Ok(())
    }
}

/// Generate a deterministic synthetic schedule.
pub fn generate_synthetic_schedule(params: &SyntheticScheduleParams) -> Result<AirlineSchedule> {
    params.validate()?;
    let mut records = Vec::new();
    for day_offset in 0..params.days {
        let day = params.start_date + chrono::Days::new(u64::from(day_offset));
        for direction in Direction::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
                params.seed,
                &[u64::from(day_offset), direction.index() as u64],
            ));
            let share = match direction {
                Direction::ArrivalAtApt => params.arrival_share,
                Direction::DepartureFromApt => 1.0 - params.arrival_share,
            };
            let mean = params.daily_flights_mean * share;
            let count = crate::demand::sample_poisson(mean, &mut rng);
            let shape = params.shape(direction);
            let shape_total: f64 = shape.iter().sum();
            for _ in 0..count {
                let hour = sample_weighted(&mut rng, shape.iter().copied(), shape_total);
                let minute_in_hour = rng.random_range(0..60u32);
                let seat_total: f64 = params.seat_mix.iter().map(|&(_, w)| w).sum();
                let mix_idx = sample_weighted(
                    &mut rng,
                    params.seat_mix.iter().map(|&(_, w)| w),
                    seat_total,
                );
                records.push(FlightRecord {
                    day,
                    direction,
                    event_minute: hour as u32 * 60 + minute_in_hour,
                    seats: params.seat_mix[mix_idx].0,
                });
            }
        }
    }
    // stable order regardless of generation loop
    records.sort_by_key(|r| (r.day, r.direction, r.event_minute, r.seats));
    Ok(AirlineSchedule::from_records(records))
}

fn sample_weighted<R: Rng + ?Sized>(
    rng: &mut R,
    weights: impl Iterator<Item = f64>,
    total: f64,
) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        acc += w;
        last = i;
        if target < acc {
            return i;
        }
    }
    last
}
