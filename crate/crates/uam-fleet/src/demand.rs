//! Stochastic passenger arrival generation.
//!
//! Turns an airline schedule into per-day UAM passenger arrival profiles:
//! per-flight expected rates scaled by daily directional demand, autoregressive
//! hourly Poisson counts, inverse-ECDF assignment of passengers to flights, and
//! skew-normal lead/lag shifts from the flight event time to the vertiport
//! arrival time.

use std::fmt::Write as _;

use chrono::{Datelike, NaiveDate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::mix_seed;
use crate::schedule::{AirlineSchedule, Direction, MINUTES_PER_DAY};

/// Location/scale/shape parameterization of a skew-normal distribution.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SkewNormalParams {
    /// Location, in minutes.
    pub location: f64,
    /// Scale, in minutes; > 0.
    pub scale: f64,
    /// Shape (skewness).
    pub shape: f64,
}

impl SkewNormalParams {
    pub fn new(location: f64, scale: f64, shape: f64) -> Result<SkewNormalParams> {
        if scale <= 0.0 {
            return Err(Error::Config(format!("skew-normal scale must be > 0, got {scale}")));
        }
        Ok(SkewNormalParams { location, scale, shape })
    }

    /// Lead time of passengers ahead of an airline departure.
    pub fn default_lead() -> SkewNormalParams {
        SkewNormalParams { location: 93.0, scale: 40.0, shape: 3.0 }
    }

    /// Lag time behind an airline gate-in, curb-to-vertiport transfer included.
    pub fn default_lag() -> SkewNormalParams {
        SkewNormalParams { location: 31.0, scale: 2.12, shape: 3.0 }
    }
}

/// Parameters of the arrival-process generator.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DemandParams {
    /// Expected average daily directional demand, passengers/day/direction.
    pub add: f64,
    /// Autoregressive coefficient in [0, 1].
    pub ar_coeff: f64,
    pub lead_dist: SkewNormalParams,
    pub lag_dist: SkewNormalParams,
    /// Extra curb transfer minutes for sensitivity studies; the default lag
    /// distribution already folds in the nominal 10-minute transfer.
    pub transfer_minutes: f64,
}

impl DemandParams {
    pub fn new(add: f64, ar_coeff: f64) -> Result<DemandParams> {
        if add < 0.0 {
            return Err(Error::Config(format!("add must be >= 0, got {add}")));
        }
        if !(0.0..=1.0).contains(&ar_coeff) {
            return Err(Error::Config(format!("ar_coeff must be in [0,1], got {ar_coeff}")));
        }
        Ok(DemandParams {
            add,
            ar_coeff,
            lead_dist: SkewNormalParams::default_lead(),
            lag_dist: SkewNormalParams::default_lag(),
            transfer_minutes: 0.0,
        })
    }
}

/// Passenger origin vertiport.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Airport vertiport; fed by airline arrivals (direction 0).
    Apt,
    /// City-center vertiport; fed by airline departures (direction 1).
    Cbd,
}

impl Origin {
    pub fn from_direction(v: Direction) -> Origin {
        match v {
            Direction::ArrivalAtApt => Origin::Apt,
            Direction::DepartureFromApt => Origin::Cbd,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Origin::Apt => "APT",
            Origin::Cbd => "CBD",
        }
    }

    pub fn from_token(s: &str) -> Option<Origin> {
        match s {
            "APT" => Some(Origin::Apt),
            "CBD" => Some(Origin::Cbd),
            _ => None,
        }
    }

    /// Vertiport index used by the network/optimizer layers (APT = 0).
    pub fn vertiport(self) -> usize {
        match self {
            Origin::Apt => 0,
            Origin::Cbd => 1,
        }
    }
}

/// One day's realized passenger arrivals at both vertiports.
#[derive(Debug, Clone)]
pub struct ArrivalProfile {
    pub day: NaiveDate,
    /// (vertiport arrival minute, origin vertiport), generation order.
    pub arrivals: Vec<(f64, Origin)>,
    /// Realized hourly counts x_{d,h,v}, indexed [direction][hour].
    pub hourly_counts: [[u64; 24]; 2],
    /// Autoregressed hourly rates, indexed [direction][hour].
    pub hourly_rates: [[f64; 24]; 2],
    /// Expected hourly rates before autoregression, indexed [direction][hour].
    pub hourly_rates0: [[f64; 24]; 2],
}

impl ArrivalProfile {
    pub fn total_passengers(&self) -> usize {
        self.arrivals.len()
    }

    pub fn passengers_from(&self, origin: Origin) -> usize {
        self.arrivals.iter().filter(|&&(_, o)| o == origin).count()
    }

    /// Serialize to the `day,origin,minute` CSV schema (minute to 4 places).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("day,origin,minute\n");
        for &(minute, origin) in &self.arrivals {
            let _ = writeln!(
                out,
                "{},{},{minute:.4}",
                self.day.format("%Y-%m-%d"),
                origin.token()
            );
        }
        out
    }

    /// Parse the `day,origin,minute` CSV schema. Hourly counts and rates are
    /// reconstructed as zero: they are generation metadata, not inputs.
    pub fn parse_csv(text: &str) -> Result<ArrivalProfile> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        if header.trim() != "day,origin,minute" {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}, expected day,origin,minute"),
            });
        }
        let mut day = None;
        let mut arrivals = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let d = NaiveDate::parse_from_str(fields[0].trim(), "%Y-%m-%d")
                .map_err(|e| Error::Parse { line: lineno, msg: format!("bad day: {e}") })?;
            if *day.get_or_insert(d) != d {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "profile spans multiple days".into(),
                });
            }
            let origin = Origin::from_token(fields[1].trim()).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("bad origin {:?}, expected APT or CBD", fields[1]),
            })?;
            let minute: f64 = fields[2].trim().parse().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad minute: {e}"),
            })?;
            arrivals.push((minute, origin));
        }
        Ok(ArrivalProfile {
            day: day.unwrap_or_else(|| NaiveDate::from_ymd_opt(1970, 1, 1).expect("epoch")),
            arrivals,
            hourly_counts: [[0; 24]; 2],
            hourly_rates: [[0.0; 24]; 2],
            hourly_rates0: [[0.0; 24]; 2],
        })
    }
}

/// Per-flight expected UAM passenger rates lambda_i, aligned with the
/// schedule's record indices.
#[derive(Debug, Clone)]
pub struct FlightRates {
    rates: Vec<f64>,
}

impl FlightRates {
    pub fn rate(&self, record_index: usize) -> f64 {
        self.rates[record_index]
    }
}

/// lambda_i = (c_i / beta_v) * ADD * |D| for every flight.
pub fn flight_rates(schedule: &AirlineSchedule, add: f64) -> Result<FlightRates> {
    let num_days = schedule.num_days() as f64;
    let beta = [
        schedule.total_capacity(Direction::ArrivalAtApt) as f64,
        schedule.total_capacity(Direction::DepartureFromApt) as f64,
    ];
    if add > 0.0 {
        for v in Direction::ALL {
            if beta[v.index()] == 0.0 && !schedule.is_empty() {
                return Err(Error::Validation(format!(
                    "direction {} has zero total seat capacity but add = {add}",
                    v.token()
                )));
            }
        }
    }
    let rates = schedule
        .records()
        .iter()
        .map(|r| {
            let b = beta[r.direction.index()];
            if b == 0.0 {
                0.0
            } else {
                f64::from(r.seats) / b * add * num_days
            }
        })
        .collect();
    Ok(FlightRates { rates })
}

/// Lambda0_{d,h,v}: expected arrivals in one (day, hour, direction) cell.
pub fn expected_hourly_rate(
    rates: &FlightRates,
    schedule: &AirlineSchedule,
    day: NaiveDate,
    hour: u8,
    direction: Direction,
) -> f64 {
    schedule
        .cell(day, hour, direction)
        .iter()
        .map(|&i| rates.rate(i))
        .sum()
}

/// One autoregression step:
/// Lambda = Lambda0_cur + (x_prev - Lambda0_prev) * Lambda0_cur / Lambda0_prev * ar_coeff,
/// clamped at 0. Falls back to Lambda0_cur when there is no previous hour to
/// regress on (pass `lambda0_prev <= 0`).
pub fn autoregressive_rate(
    lambda0_prev: f64,
    x_prev: u64,
    lambda0_cur: f64,
    ar_coeff: f64,
) -> f64 {
    if lambda0_prev <= 0.0 {
        return lambda0_cur;
    }
    let adjusted =
        lambda0_cur + (x_prev as f64 - lambda0_prev) * lambda0_cur / lambda0_prev * ar_coeff;
    adjusted.max(0.0)
}

/// Draw a Poisson count; rate 0 always yields 0.
pub fn sample_poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(rate).expect("positive finite rate");
    dist.sample(rng) as u64
}

/// Draw from skew-normal(location, scale, shape) via
/// location + scale * (delta * |Z0| + sqrt(1 - delta^2) * Z1) with
/// delta = shape / sqrt(1 + shape^2).
pub fn sample_skew_normal<R: Rng + ?Sized>(params: &SkewNormalParams, rng: &mut R) -> f64 {
    let delta = params.shape / (1.0 + params.shape * params.shape).sqrt();
    let z0: f64 = StandardNormal.sample(rng);
    let z1: f64 = StandardNormal.sample(rng);
    params.location + params.scale * (delta * z0.abs() + (1.0 - delta * delta).sqrt() * z1)
}

/// Generate one day's arrival profile (Algorithm 1, inner loops).
///
/// `rates` must come from [`flight_rates`] over the full schedule so the
/// day-to-day scaling uses the all-days seat total.
pub fn generate_day<R: Rng + ?Sized>(
    schedule: &AirlineSchedule,
    rates: &FlightRates,
    day: NaiveDate,
    params: &DemandParams,
    rng: &mut R,
) -> Result<ArrivalProfile> {
    let mut profile = ArrivalProfile {
        day,
        arrivals: Vec::new(),
        hourly_counts: [[0; 24]; 2],
        hourly_rates: [[0.0; 24]; 2],
        hourly_rates0: [[0.0; 24]; 2],
    };
    for direction in Direction::ALL {
        let v = direction.index();
        for hour in 0..24u8 {
            let lambda0 = expected_hourly_rate(rates, schedule, day, hour, direction);
            // no cross-day carry: the first hour uses Lambda = Lambda0
            let lambda = if hour == 0 {
                lambda0
            } else {
                autoregressive_rate(
                    profile.hourly_rates0[v][hour as usize - 1],
                    profile.hourly_counts[v][hour as usize - 1],
                    lambda0,
                    params.ar_coeff,
                )
            };
            let count = sample_poisson(lambda, rng);
            profile.hourly_rates0[v][hour as usize] = lambda0;
            profile.hourly_rates[v][hour as usize] = lambda;
            profile.hourly_counts[v][hour as usize] = count;
            if count == 0 {
                continue;
            }
            let ecdf = schedule.hourly_capacity_ecdf(day, hour, direction)?;
            for _ in 0..count {
                let record = &schedule.records()[ecdf.sample(rng)];
                let flight_minute = f64::from(record.event_minute);
                let minute = match direction {
                    // departures: passengers show up lead minutes ahead at CBD
                    Direction::DepartureFromApt => {
                        flight_minute - sample_skew_normal(&params.lead_dist, rng)
                    }
                    // arrivals: gate-in plus lag (and optional extra transfer)
                    Direction::ArrivalAtApt => {
                        flight_minute
                            + sample_skew_normal(&params.lag_dist, rng)
                            + params.transfer_minutes
                    }
                };
                let minute = minute.clamp(0.0, f64::from(MINUTES_PER_DAY - 1));
                profile
                    .arrivals
                    .push((minute, Origin::from_direction(direction)));
            }
        }
    }
    Ok(profile)
}

/// Generate one profile per schedule day with independent per-day RNG streams.
pub fn generate_profiles(
    schedule: &AirlineSchedule,
    params: &DemandParams,
    base_seed: u64,
) -> Result<Vec<ArrivalProfile>> {
    if schedule.is_empty() {
        return Ok(Vec::new());
    }
    let rates = flight_rates(schedule, params.add)?;
    schedule
        .days()
        .map(|day| {
            let mut rng = day_rng(base_seed, day);
            generate_day(schedule, &rates, day, params, &mut rng)
        })
        .collect()
}

/// RNG stream for one day, independent of generation order.
pub fn day_rng(base_seed: u64, day: NaiveDate) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(base_seed, &[day.num_days_from_ce() as u64]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::parse_schedule;

    fn date(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    #[test]
    fn flight_rates_single_flight() {
        let s = parse_schedule(
            "date,direction,minute,seats\n2019-01-01,ARR,480,150\n2019-01-01,DEP,600,90\n",
        )
        .unwrap();
        let r = flight_rates(&s, 500.0).unwrap();
        // the lone arrival carries the full directional demand
        assert!((r.rate(0) - 500.0).abs() < 1e-9);
    }

    #[test]
    fn flight_rates_split_by_seats() {
        let s = parse_schedule(concat!(
            "date,direction,minute,seats\n",
            "2019-01-01,ARR,480,100\n",
            "2019-01-01,ARR,490,300\n",
            "2019-01-01,DEP,600,90\n",
        ))
        .unwrap();
        let r = flight_rates(&s, 500.0).unwrap();
        assert!((r.rate(0) - 125.0).abs() < 1e-9);
        assert!((r.rate(1) - 375.0).abs() < 1e-9);
    }

    #[test]
    fn flight_rates_zero_add() {
        let s = parse_schedule("date,direction,minute,seats\n2019-01-01,ARR,480,150\n").unwrap();
        let r = flight_rates(&s, 0.0).unwrap();
        assert_eq!(r.rate(0), 0.0);
    }

    #[test]
    fn flight_rates_conserve_add_times_days() {
        let s = parse_schedule(concat!(
            "date,direction,minute,seats\n",
            "2019-01-01,ARR,480,100\n",
            "2019-01-01,ARR,700,250\n",
            "2019-01-02,ARR,480,180\n",
            "2019-01-01,DEP,500,90\n",
            "2019-01-02,DEP,520,120\n",
        ))
        .unwrap();
        let add = 730.0;
        let r = flight_rates(&s, add).unwrap();
        for v in Direction::ALL {
            let total: f64 = s
                .records()
                .iter()
                .enumerate()
                .filter(|(_, rec)| rec.direction == v)
                .map(|(i, _)| r.rate(i))
                .sum();
            let expected = add * s.num_days() as f64;
            assert!(
                (total - expected).abs() / expected < 1e-9,
                "{v:?}: {total} vs {expected}"
            );
        }
    }

    #[test]
    fn flight_rates_zero_beta_errors() {
        // schedule with only arrivals: departures have beta = 0
        let s = parse_schedule("date,direction,minute,seats\n2019-01-01,ARR,480,150\n").unwrap();
        assert!(matches!(flight_rates(&s, 1.0), Err(Error::Validation(_))));
    }

    #[test]
    fn expected_hourly_rate_cases() {
        let s = parse_schedule(
            "date,direction,minute,seats\n2019-01-01,ARR,480,100\n2019-01-01,ARR,490,300\n",
        )
        .unwrap();
        let r = FlightRates { rates: vec![2.5, 1.5] };
        let d = date("2019-01-01");
        assert_eq!(
            expected_hourly_rate(&r, &s, d, 9, Direction::ArrivalAtApt),
            0.0
        );
        assert!(
            (expected_hourly_rate(&r, &s, d, 8, Direction::ArrivalAtApt) - 4.0).abs() < 1e-12
        );
    }

    #[test]
    fn autoregressive_rate_hand_example() {
        // 20 + (14 - 10) * 20/10 * 0.7 = 25.6
        assert!((autoregressive_rate(10.0, 14, 20.0, 0.7) - 25.6).abs() < 1e-12);
    }

    #[test]
    fn autoregressive_rate_zero_coeff() {
        assert_eq!(autoregressive_rate(10.0, 99, 20.0, 0.0), 20.0);
    }

    #[test]
    fn autoregressive_rate_clamps_at_zero() {
        assert_eq!(autoregressive_rate(10.0, 0, 5.0, 1.0), 0.0);
    }

    #[test]
    fn autoregressive_rate_zero_prev_falls_back() {
        assert_eq!(autoregressive_rate(0.0, 0, 7.5, 0.9), 7.5);
    }

    #[test]
    fn poisson_zero_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_poisson(0.0, &mut rng), 0);
        }
    }

    #[test]
    fn poisson_mean_and_dispersion() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_poisson(100.0, &mut rng) as f64).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        assert!((99.0..=101.0).contains(&mean), "mean {mean}");
        let ratio = var / mean;
        assert!((0.95..=1.05).contains(&ratio), "dispersion {ratio}");
    }

    #[test]
    fn skew_normal_zero_shape_is_symmetric() {
        let params = SkewNormalParams { location: 10.0, scale: 3.0, shape: 0.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_skew_normal(&params, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let m2 = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let m3 = draws.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n as f64;
        let skewness = m3 / m2.powf(1.5);
        assert!(skewness.abs() < 0.02, "skewness {skewness}");
        assert!((mean - 10.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn skew_normal_lag_mean() {
        // mean = location + scale * delta * sqrt(2/pi)
        let params = SkewNormalParams::default_lag();
        let delta = 3.0f64 / 10.0f64.sqrt();
        let expected = 31.0 + 2.12 * delta * (2.0 / std::f64::consts::PI).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_skew_normal(&params, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - expected).abs() < 0.1, "mean {mean} vs {expected}");
    }

    fn two_day_schedule() -> AirlineSchedule {
        parse_schedule(concat!(
            "date,direction,minute,seats\n",
            "2019-01-01,ARR,480,100\n",
            "2019-01-01,ARR,490,300\n",
            "2019-01-01,DEP,600,150\n",
            "2019-01-01,DEP,1020,150\n",
            "2019-01-02,ARR,480,200\n",
            "2019-01-02,DEP,610,180\n",
        ))
        .unwrap()
    }

    #[test]
    fn generate_day_zero_add_is_empty() {
        let s = two_day_schedule();
        let params = DemandParams::new(0.0, 0.7).unwrap();
        let rates = flight_rates(&s, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = generate_day(&s, &rates, date("2019-01-01"), &params, &mut rng).unwrap();
        assert!(p.arrivals.is_empty());
    }

    #[test]
    fn generate_day_zero_ar_rates_equal_lambda0() {
        let s = two_day_schedule();
        let params = DemandParams::new(400.0, 0.0).unwrap();
        let rates = flight_rates(&s, params.add).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = generate_day(&s, &rates, date("2019-01-01"), &params, &mut rng).unwrap();
        for v in 0..2 {
            for h in 0..24 {
                assert_eq!(p.hourly_rates[v][h], p.hourly_rates0[v][h]);
            }
        }
    }

    #[test]
    fn generate_day_counts_match_sum() {
        let s = two_day_schedule();
        let params = DemandParams::new(300.0, 0.5).unwrap();
        let rates = flight_rates(&s, params.add).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = generate_day(&s, &rates, date("2019-01-01"), &params, &mut rng).unwrap();
        let total: u64 = p.hourly_counts.iter().flatten().sum();
        assert_eq!(total as usize, p.arrivals.len());
        // origins match directions
        for &(_, origin) in &p.arrivals {
            assert!(matches!(origin, Origin::Apt | Origin::Cbd));
        }
        let apt = p.passengers_from(Origin::Apt) as u64;
        let arr_counts: u64 = p.hourly_counts[Direction::ArrivalAtApt.index()].iter().sum();
        assert_eq!(apt, arr_counts);
    }

    #[test]
    fn generate_day_single_flight_degenerate() {
        let s = parse_schedule("date,direction,minute,seats\n2019-01-01,DEP,600,150\n").unwrap();
        let mut params = DemandParams::new(0.0, 0.0).unwrap();
        params.add = 200.0;
        // pretend beta check passed by constructing rates directly
        let rates = FlightRates { rates: vec![200.0] };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = generate_day(&s, &rates, date("2019-01-01"), &params, &mut rng).unwrap();
        assert!(!p.arrivals.is_empty());
        // all CBD arrivals, shifted by lead (median ~120) ahead of minute 600
        for &(minute, origin) in &p.arrivals {
            assert_eq!(origin, Origin::Cbd);
            assert!(minute < 600.0);
        }
        let median = {
            let mut m: Vec<f64> = p.arrivals.iter().map(|a| 600.0 - a.0).collect();
            m.sort_by(|a, b| a.partial_cmp(b).unwrap());
            m[m.len() / 2]
        };
        assert!((100.0..140.0).contains(&median), "lead median {median}");
    }

    #[test]
    fn generate_profiles_deterministic_and_per_day() {
        let s = two_day_schedule();
        let params = DemandParams::new(250.0, 0.7).unwrap();
        let a = generate_profiles(&s, &params, 99).unwrap();
        let b = generate_profiles(&s, &params, 99).unwrap();
        assert_eq!(a.len(), 2);
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(pa.to_csv(), pb.to_csv());
        }
    }

    #[test]
    fn profile_csv_roundtrip() {
        let s = two_day_schedule();
        let params = DemandParams::new(100.0, 0.3).unwrap();
        let profiles = generate_profiles(&s, &params, 5).unwrap();
        let csv = profiles[0].to_csv();
        let parsed = ArrivalProfile::parse_csv(&csv).unwrap();
        assert_eq!(parsed.to_csv(), csv);
    }
}
