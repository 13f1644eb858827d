//! Delay schedules and their derived reveal sets.

use crate::error::{HedgeError, Result};

/// Integer delays `D_t` for rounds `1..=T`, clamped so that `t + D_t <= T`.
///
/// The raw (pre-clamp) values are kept for diagnostics; all derived
/// quantities use the clamped values.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySchedule {
    delays: Vec<usize>,
    raw: Vec<usize>,
    clamped_rounds: usize,
}

impl DelaySchedule {
    /// Builds a schedule from raw delays, clamping each to `min(D_t, T - t)`.
    pub fn new(raw: Vec<usize>) -> Self {
        let horizon = raw.len();
        let mut clamped_rounds = 0;
        let delays: Vec<usize> = raw
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let t = i + 1;
                let max = horizon - t;
                if d > max {
                    clamped_rounds += 1;
                    max
                } else {
                    d
                }
            })
            .collect();
        DelaySchedule {
            delays,
            raw,
            clamped_rounds,
        }
    }

    pub fn zero(horizon: usize) -> Self {
        DelaySchedule::new(vec![0; horizon])
    }

    pub fn fixed(delay: usize, horizon: usize) -> Self {
        DelaySchedule::new(vec![delay; horizon])
    }

    pub fn horizon(&self) -> usize {
        self.delays.len()
    }

    /// Clamped delay of round `t` (1-based).
    pub fn delay(&self, t: usize) -> usize {
        self.delays[t - 1]
    }

    /// Raw delay of round `t` before clamping.
    pub fn raw_delay(&self, t: usize) -> usize {
        self.raw[t - 1]
    }

    pub fn delays(&self) -> &[usize] {
        &self.delays
    }

    /// Number of rounds whose delay was reduced by the clamp.
    pub fn clamped_rounds(&self) -> usize {
        self.clamped_rounds
    }

    pub fn sum_delays(&self) -> u64 {
        self.delays.iter().map(|&d| d as u64).sum()
    }

    /// Mean of the raw (pre-clamp) delays.
    pub fn raw_mean(&self) -> f64 {
        if self.raw.is_empty() {
            return 0.0;
        }
        self.raw.iter().map(|&d| d as f64).sum::<f64>() / self.raw.len() as f64
    }

    /// The reveal set `D_t = {tau : tau + D_tau <= t}`, in ascending order.
    pub fn revealed_by(&self, t: usize) -> Vec<usize> {
        (1..=self.horizon().min(t))
            .filter(|&tau| tau + self.delay(tau) <= t)
            .collect()
    }

    /// New arrivals of round `t`: `dD_t = {tau : tau + D_tau = t}`, ascending.
    pub fn revealed_at(&self, t: usize) -> Vec<usize> {
        (1..=t.min(self.horizon()))
            .filter(|&tau| tau + self.delay(tau) == t)
            .collect()
    }

    /// Validates schedule-vs-loss consistency for a game of horizon `t_losses`.
    pub fn check_horizon(&self, t_losses: usize) -> Result<()> {
        if self.horizon() != t_losses {
            return Err(HedgeError::Protocol(format!(
                "delay schedule covers {} rounds but {} loss rounds were supplied",
                self.horizon(),
                t_losses
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_rule() {
        // fixed(D=3), T=10: 3 for t <= 7, then 2, 1, 0
        let s = DelaySchedule::fixed(3, 10);
        assert_eq!(s.delays(), &[3, 3, 3, 3, 3, 3, 3, 2, 1, 0]);
        assert_eq!(s.clamped_rounds(), 3);
        assert_eq!(s.raw_delay(9), 3);
    }

    #[test]
    fn last_round_has_zero_delay() {
        let s = DelaySchedule::new(vec![5, 5, 5]);
        assert_eq!(s.delay(3), 0);
    }

    #[test]
    fn reveal_sets_are_monotone_and_complete() {
        let s = DelaySchedule::new(vec![2, 1, 0, 0]);
        let mut prev: Vec<usize> = vec![];
        for t in 1..=4 {
            let d = s.revealed_by(t);
            assert!(prev.iter().all(|x| d.contains(x)));
            prev = d;
        }
        assert_eq!(prev, vec![1, 2, 3, 4]);
        assert_eq!(s.revealed_at(3), vec![1, 2, 3]);
        assert_eq!(s.revealed_at(2), Vec::<usize>::new());
    }
}
