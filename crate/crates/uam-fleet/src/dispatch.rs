//! Deterministic conversion from passenger arrivals to per-step flight demand.
//!
//! Each origin vertiport runs an independent queue: a flight demand is created
//! as soon as a full aircraft's worth of passengers has accumulated, or when
//! the head of the queue has waited out the maximum wait. Waits of exactly
//! `max_wait_minutes` dispatch.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::demand::{ArrivalProfile, Origin};
use crate::error::{Error, Result};

/// Per-time-step flight demand f_ij^t and passenger demand p_ij^t for every
/// ordered vertiport pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandTimeSeries {
    pub num_vertiports: usize,
    pub steps: usize,
    pub step_minutes: u32,
    /// flights[pair][step], pairs in lexicographic (from, to) order, from != to.
    flights: Vec<Vec<u32>>,
    passengers: Vec<Vec<u32>>,
}

impl DemandTimeSeries {
    pub fn new(num_vertiports: usize, steps: usize, step_minutes: u32) -> DemandTimeSeries {
        let pairs = num_vertiports * (num_vertiports - 1);
        DemandTimeSeries {
            num_vertiports,
            steps,
            step_minutes,
            flights: vec![vec![0; steps]; pairs],
            passengers: vec![vec![0; steps]; pairs],
        }
    }

    /// Ordered vertiport pairs in storage order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.num_vertiports {
            for j in 0..self.num_vertiports {
                if i != j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn pair_index(&self, from: usize, to: usize) -> usize {
        debug_assert!(from != to);
        from * (self.num_vertiports - 1) + if to > from { to - 1 } else { to }
    }

    pub fn add_flight(&mut self, from: usize, to: usize, step: usize, occupancy: u32) {
        let p = self.pair_index(from, to);
        self.flights[p][step] += 1;
        self.passengers[p][step] += occupancy;
    }

    pub fn flights_at(&self, from: usize, to: usize, step: usize) -> u32 {
        self.flights[self.pair_index(from, to)][step]
    }

    pub fn passengers_at(&self, from: usize, to: usize, step: usize) -> u32 {
        self.passengers[self.pair_index(from, to)][step]
    }

    pub fn total_passengers(&self) -> u64 {
        self.passengers.iter().flatten().map(|&p| u64::from(p)).sum()
    }

    pub fn total_flights(&self) -> u64 {
        self.flights.iter().flatten().map(|&f| u64::from(f)).sum()
    }

    /// Canonical per-flight occupancy split of one (pair, step) cell: fill
    /// flights to capacity in descending order while keeping every flight
    /// nonempty. Reconstructs flight-level detail lost in aggregation.
    pub fn occupancy_split(&self, from: usize, to: usize, step: usize, seat_capacity: u32) -> Vec<u32> {
        let f = self.flights_at(from, to, step);
        let mut p = self.passengers_at(from, to, step);
        let mut out = Vec::with_capacity(f as usize);
        for remaining in (0..f).rev() {
            let occ = p.saturating_sub(remaining).min(seat_capacity).max(1);
            out.push(occ);
            p -= occ;
        }
        out
    }

    /// Serialize to the `from,to,step,flights,passengers` CSV schema.
    /// Zero cells are omitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("from,to,step,flights,passengers\n");
        for (idx, (i, j)) in self.pairs().into_iter().enumerate() {
            for t in 0..self.steps {
                if self.flights[idx][t] > 0 {
                    let _ = writeln!(
                        out,
                        "{i},{j},{t},{},{}",
                        self.flights[idx][t], self.passengers[idx][t]
                    );
                }
            }
        }
        out
    }

    pub fn parse_csv(
        text: &str,
        num_vertiports: usize,
        steps: usize,
        step_minutes: u32,
    ) -> Result<DemandTimeSeries> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        if header.trim() != "from,to,step,flights,passengers" {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            });
        }
        let mut series = DemandTimeSeries::new(num_vertiports, steps, step_minutes);
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 5 fields, got {}", fields.len()),
                });
            }
            let parse_usize = |s: &str, what: &str| -> Result<usize> {
                s.trim().parse().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("bad {what}: {e}"),
                })
            };
            let from = parse_usize(fields[0], "from")?;
            let to = parse_usize(fields[1], "to")?;
            let step = parse_usize(fields[2], "step")?;
            let f = parse_usize(fields[3], "flights")? as u32;
            let p = parse_usize(fields[4], "passengers")? as u32;
            if from >= num_vertiports || to >= num_vertiports || from == to {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("bad pair ({from},{to})"),
                });
            }
            if step >= steps {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("step {step} out of range 0..{steps}"),
                });
            }
            let pi = series.pair_index(from, to);
            series.flights[pi][step] += f;
            series.passengers[pi][step] += p;
        }
        Ok(series)
    }
}

/// Simulate the dispatch rule over one arrival profile.
pub fn dispatch(
    profile: &ArrivalProfile,
    seat_capacity: u32,
    max_wait_minutes: f64,
    step_minutes: u32,
) -> Result<DemandTimeSeries> {
    if seat_capacity == 0 {
        return Err(Error::Config("seat capacity must be >= 1".into()));
    }
    if step_minutes == 0 || 1440 % step_minutes != 0 {
        return Err(Error::Config(format!(
            "step_minutes must divide 1440, got {step_minutes}"
        )));
    }
    let steps = (1440 / step_minutes) as usize;
    let mut series = DemandTimeSeries::new(2, steps, step_minutes);
    for origin in [Origin::Apt, Origin::Cbd] {
        let mut minutes: Vec<f64> = profile
            .arrivals
            .iter()
            .filter(|&&(_, o)| o == origin)
            .map(|&(m, _)| m)
            .collect();
        minutes.sort_by(|a, b| a.partial_cmp(b).expect("no NaN minutes"));
        run_queue(
            &mut series,
            origin.vertiport(),
            1 - origin.vertiport(),
            &minutes,
            seat_capacity,
            max_wait_minutes,
        );
    }
    Ok(series)
}

fn run_queue(
    series: &mut DemandTimeSeries,
    from: usize,
    to: usize,
    arrivals: &[f64],
    seat_capacity: u32,
    max_wait: f64,
) {
    let cap = seat_capacity as usize;
    let (step_minutes, last_step) = (series.step_minutes, series.steps - 1);
    let step_of = move |minute: f64| -> usize {
        ((minute / f64::from(step_minutes)).floor() as usize).min(last_step)
    };
    let mut queue: VecDeque<f64> = VecDeque::new();
    let mut next = 0usize;
    loop {
        let deadline = queue.front().map(|&head| head + max_wait);
        let arrival = arrivals.get(next).copied();
        match (deadline, arrival) {
            // wait trigger fires first; ties at the deadline dispatch
            (Some(d), a) if a.map_or(true, |m| d <= m) => {
                let now = d;
                while let Some(&head) = queue.front() {
                    // same float expression as the deadline: `now - head`
                    // can round below max_wait and would loop forever
                    if head + max_wait > now {
                        break;
                    }
                    let occ = queue.len().min(cap);
                    for _ in 0..occ {
                        queue.pop_front();
                    }
                    series.add_flight(from, to, step_of(now), occ as u32);
                }
            }
            (_, Some(m)) => {
                queue.push_back(m);
                next += 1;
                if queue.len() == cap {
                    queue.clear();
                    series.add_flight(from, to, step_of(m), seat_capacity);
                }
            }
            (None, None) => break,
            (Some(_), None) => unreachable!("guarded arm covers a pending deadline"),
        }
    }
}
