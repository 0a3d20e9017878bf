//! Physical and temporal configuration of the vertiport network.
//!
//! Time is discretized into steps, battery into K SoC levels above the reserve
//! floor (level 0 is the reserve; flying at level 0 is forbidden). The
//! nonlinear charging curve gamma_k gives the steps needed to climb from level
//! k-1 to k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flight time or energy-use table per ordered pair, optionally time-varying.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeTable {
    Constant(u32),
    Varying {
        default: u32,
        /// ((from, to, step), value) overrides.
        overrides: Vec<((usize, usize, usize), u32)>,
    },
}

impl TimeTable {
    pub fn get(&self, from: usize, to: usize, t: usize) -> u32 {
        match self {
            TimeTable::Constant(v) => *v,
            TimeTable::Varying { default, overrides } => overrides
                .iter()
                .find(|&&(key, _)| key == (from, to, t))
                .map(|&(_, v)| v)
                .unwrap_or(*default),
        }
    }

    pub fn max_value(&self) -> u32 {
        match self {
            TimeTable::Constant(v) => *v,
            TimeTable::Varying { default, overrides } => overrides
                .iter()
                .map(|&(_, v)| v)
                .chain(std::iter::once(*default))
                .max()
                .unwrap_or(*default),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Vertiport names; index order is the optimizer's vertiport index.
    pub vertiports: Vec<String>,
    pub steps_per_day: usize,
    pub step_minutes: u32,
    /// Number of SoC levels above the reserve (level 0).
    pub soc_levels: usize,
    pub reserve_fraction: f64,
    /// SoC fraction per level, for reporting only.
    pub soc_increment: f64,
    /// gamma[k-1] = steps to charge from level k-1 to level k.
    pub gamma: Vec<u32>,
    /// Flight time in steps.
    pub tau: TimeTable,
    /// SoC levels consumed per flight.
    pub kappa: TimeTable,
    pub seat_capacity: u32,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        let soc_levels = 32;
        NetworkConfig {
            vertiports: vec!["APT".into(), "CBD".into()],
            steps_per_day: 288,
            step_minutes: 5,
            soc_levels,
            reserve_fraction: 0.20,
            soc_increment: 0.025,
            gamma: default_charging_curve(soc_levels),
            tau: TimeTable::Constant(2),
            kappa: TimeTable::Constant(4),
            seat_capacity: 4,
        }
    }
}

impl NetworkConfig {
    /// Reduced-scale configuration: 15-minute steps, 8 SoC levels. Same
    /// structure as the default, tractable for batch optimization runs.
    pub fn reduced() -> NetworkConfig {
        let soc_levels = 8;
        NetworkConfig {
            vertiports: vec!["APT".into(), "CBD".into()],
            steps_per_day: 96,
            step_minutes: 15,
            soc_levels,
            reserve_fraction: 0.20,
            soc_increment: 0.10,
            gamma: default_charging_curve(soc_levels),
            tau: TimeTable::Constant(1),
            kappa: TimeTable::Constant(2),
            seat_capacity: 4,
        }
    }

    pub fn num_vertiports(&self) -> usize {
        self.vertiports.len()
    }

    /// Planning horizon T = steps per day + max flight time + 1.
    pub fn horizon(&self) -> usize {
        self.steps_per_day + self.tau.max_value() as usize + 1
    }

    pub fn tau_at(&self, from: usize, to: usize, t: usize) -> usize {
        self.tau.get(from, to, t) as usize
    }

    pub fn kappa_at(&self, from: usize, to: usize, t: usize) -> usize {
        self.kappa.get(from, to, t) as usize
    }

    /// Steps to charge from level `x` up to level `y`.
    pub fn charging_duration(&self, x: usize, y: usize) -> Result<usize> {
        charging_duration(x, y, &self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vertiports() < 2 {
            return Err(Error::Config("need at least 2 vertiports".into()));
        }
        if self.steps_per_day == 0 || self.step_minutes == 0 {
            return Err(Error::Config("time discretization must be positive".into()));
        }
        if self.soc_levels == 0 {
            return Err(Error::Config("need at least 1 SoC level".into()));
        }
        if self.gamma.len() != self.soc_levels {
            return Err(Error::Config(format!(
                "gamma has {} entries, expected {}",
                self.gamma.len(),
                self.soc_levels
            )));
        }
        if self.gamma.iter().any(|&g| g == 0) {
            return Err(Error::Config("every gamma_k must be >= 1".into()));
        }
        if self.seat_capacity == 0 {
            return Err(Error::Config("seat capacity must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.reserve_fraction) {
            return Err(Error::Config("reserve_fraction must be in [0,1)".into()));
        }
        let horizon = self.horizon();
        for i in 0..self.num_vertiports() {
            for j in 0..self.num_vertiports() {
                if i == j {
                    continue;
                }
                for t in 0..=horizon {
                    if self.tau_at(i, j, t) < 1 {
                        return Err(Error::Config(format!("tau({i},{j},{t}) must be >= 1")));
                    }
                    if self.kappa_at(i, j, t) > self.soc_levels {
                        return Err(Error::Config(format!(
                            "kappa({i},{j},{t}) exceeds soc_levels {}",
                            self.soc_levels
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sum of gamma over levels x+1..=y.
pub fn charging_duration(x: usize, y: usize, gamma: &[u32]) -> Result<usize> {
    if x >= y {
        return Err(Error::Validation(format!(
            "charging_duration requires x < y, got x={x}, y={y}"
        )));
    }
    if y > gamma.len() {
        return Err(Error::Validation(format!(
            "target level {y} exceeds K={}",
            gamma.len()
        )));
    }
    Ok(gamma[x..y].iter().map(|&g| g as usize).sum())
}

/// Default monotone charging curve with a CC-CV-like taper: one step per level
/// up to ~80% of K, then one extra step every two levels.
pub fn default_charging_curve(soc_levels: usize) -> Vec<u32> {
    let knee = (0.8 * soc_levels as f64).round() as usize;
    (1..=soc_levels)
        .map(|k| {
            if k <= knee {
                1
            } else {
                1 + ((k - knee) as u32).div_ceil(2)
            }
        })
        .collect()
}

/// A_ij^t = { t' in 1..=T : t' + tau_ij(t') = t } for every pair and t.
#[derive(Debug, Clone)]
pub struct ArrivalIndexSet {
    horizon: usize,
    num_vertiports: usize,
    /// sets[pair][t] = departure steps landing at t.
    sets: Vec<Vec<Vec<usize>>>,
}

impl ArrivalIndexSet {
    pub fn lookup(&self, from: usize, to: usize, t: usize) -> &[usize] {
        debug_assert!(from != to && t <= self.horizon);
        let pair = from * (self.num_vertiports - 1) + if to > from { to - 1 } else { to };
        &self.sets[pair][t]
    }
}

/// Precompute the arrival index sets of a configuration.
pub fn arrival_sets(config: &NetworkConfig) -> ArrivalIndexSet {
    let horizon = config.horizon();
    let nv = config.num_vertiports();
    let mut sets = vec![vec![Vec::new(); horizon + 1]; nv * (nv - 1)];
    let mut pair = 0;
    for i in 0..nv {
        for j in 0..nv {
            if i == j {
                continue;
            }
            for dep in 1..=horizon {
                let arrive = dep + config.tau_at(i, j, dep);
                if arrive <= horizon {
                    sets[pair][arrive].push(dep);
                }
            }
            pair += 1;
        }
    }
    ArrivalIndexSet {
        horizon,
        num_vertiports: nv,
        sets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charging_duration_hand_sum() {
        let gamma = vec![1, 1, 2, 3];
        assert_eq!(charging_duration(1, 3, &gamma).unwrap(), 3);
        assert_eq!(charging_duration(2, 3, &gamma).unwrap(), 2);
        assert_eq!(charging_duration(0, 4, &vec![1; 4]).unwrap(), 4);
        assert!(charging_duration(3, 3, &gamma).is_err());
        assert!(charging_duration(3, 2, &gamma).is_err());
    }

    #[test]
    fn charging_duration_additive() {
        let gamma = default_charging_curve(32);
        for x in 0..30 {
            for y in (x + 1)..31 {
                for z in (y + 1)..=32 {
                    assert_eq!(
                        charging_duration(x, z, &gamma).unwrap(),
                        charging_duration(x, y, &gamma).unwrap()
                            + charging_duration(y, z, &gamma).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn default_curve_examples() {
        assert_eq!(default_charging_curve(4), vec![1, 1, 1, 2]);
        assert_eq!(default_charging_curve(1), vec![1]);
        let c32 = default_charging_curve(32);
        assert_eq!(c32[31], 4);
        assert_eq!(c32.iter().sum::<u32>(), 44);
        // monotone nondecreasing
        assert!(c32.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn horizon_definition() {
        let config = NetworkConfig::default();
        assert_eq!(config.horizon(), 288 + 2 + 1);
        assert!(config.validate().is_ok());
        assert!(NetworkConfig::reduced().validate().is_ok());
    }

    #[test]
    fn arrival_sets_constant_tau() {
        let config = NetworkConfig::default();
        let sets = arrival_sets(&config);
        assert_eq!(sets.lookup(0, 1, 5), &[3]);
        assert_eq!(sets.lookup(0, 1, 1), &[] as &[usize]);
        assert_eq!(sets.lookup(0, 1, 2), &[] as &[usize]);
    }

    #[test]
    fn arrival_sets_time_varying() {
        let mut config = NetworkConfig::reduced();
        config.tau = TimeTable::Varying {
            default: 2,
            overrides: vec![((0, 1, 2), 1)],
        };
        let sets = arrival_sets(&config);
        // tau(1)=2 and tau(2)=1 both land at t=3
        assert_eq!(sets.lookup(0, 1, 3), &[1, 2]);
    }

    #[test]
    fn arrival_sets_partition_departures() {
        let config = NetworkConfig::reduced();
        let sets = arrival_sets(&config);
        let horizon = config.horizon();
        let mut seen = vec![0u32; horizon + 1];
        for t in 0..=horizon {
            for &dep in sets.lookup(0, 1, t) {
                seen[dep] += 1;
            }
        }
        for dep in 1..=horizon {
            let lands_in_range = dep + config.tau_at(0, 1, dep) <= horizon;
            assert_eq!(seen[dep], u32::from(lands_in_range), "dep {dep}");
        }
    }
}
