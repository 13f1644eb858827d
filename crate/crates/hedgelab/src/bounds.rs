//! Evaluators for the theoretical bounds and the appendix lemmas. These are
//! pure functions used by property tests and reported alongside empirical
//! regrets.

use serde::Serialize;

use crate::delay::DelaySchedule;
use crate::error::{HedgeError, Result};
use crate::game::GameTrace;
use crate::simplex::{log_sum_exp, LossVector, SimplexWeights};

/// An empirical value paired with its theoretical bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub empirical: f64,
    pub bound: f64,
    pub eta: f64,
    pub h_bound: f64,
    pub horizon: usize,
    pub num_experts: usize,
    pub switches: Option<usize>,
    pub sum_delays: u64,
}

impl BoundReport {
    pub fn slack(&self) -> f64 {
        self.bound - self.empirical
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

/// Mixloss `m_t = -(1/eta) ln sum_n w_t^n exp(-eta l_t^n)`.
pub fn mixloss(weights: &SimplexWeights, loss: &LossVector, eta: f64) -> f64 {
    let log_terms: Vec<f64> = weights
        .iter()
        .zip(loss.as_slice())
        .map(|(&w, &l)| w.ln() - eta * l)
        .collect();
    -log_sum_exp(&log_terms) / eta
}

/// Right-hand side of the Delayed Hedge regret bound with uniform prior:
/// `ln N / eta + eta H^2 T / 8 + eta H^2 sum(D_t) / 4`.
pub fn hedge_regret_bound(
    eta: f64,
    h_bound: f64,
    horizon: usize,
    sum_delays: u64,
    num_experts: usize,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
    }
    let h2 = h_bound * h_bound;
    Ok((num_experts as f64).ln() / eta
        + eta * h2 * horizon as f64 / 8.0
        + eta * h2 * sum_delays as f64 / 4.0)
}

/// Right-hand side of the Delayed Fixed Share tracking bound:
/// `(K+1)(ln N + ln T)/eta + eta H^2 T / 8 + eta H^2 sum(D_t) / 4`.
pub fn fs_regret_bound(
    eta: f64,
    h_bound: f64,
    horizon: usize,
    sum_delays: u64,
    num_experts: usize,
    switches: usize,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
    }
    let h2 = h_bound * h_bound;
    Ok(
        (switches as f64 + 1.0) * ((num_experts as f64).ln() + (horizon as f64).ln()) / eta
            + eta * h2 * horizon as f64 / 8.0
            + eta * h2 * sum_delays as f64 / 4.0,
    )
}

/// Log-probability of an expert sequence under the Fixed Share chain with
/// uniform prior and `alpha_t = 1/t`:
/// `ln(1/N) + sum_{switch} ln(alpha_t / N) + sum_{stay} ln(1 - alpha_t + alpha_t / N)`.
///
/// Experts are 0-based; the sequence must be nonempty.
pub fn fs_sequence_log_prob(sequence: &[usize], num_experts: usize) -> f64 {
    assert!(!sequence.is_empty(), "empty sequence");
    let n = num_experts as f64;
    let mut lp = -(n.ln());
    for (i, w) in sequence.windows(2).enumerate() {
        let t = (i + 2) as f64;
        let alpha = 1.0 / t;
        lp += if w[1] != w[0] {
            (alpha / n).ln()
        } else {
            (1.0 - alpha + alpha / n).ln()
        };
    }
    lp
}

/// The lemma bound on the Fixed Share sequence probability:
/// `-ln p(N_T) <= (K+1)(ln N + ln T)`.
pub fn fs_sequence_prob_bound(sequence: &[usize], num_experts: usize) -> BoundReport {
    let switches = sequence.windows(2).filter(|w| w[0] != w[1]).count();
    let horizon = sequence.len();
    let empirical = -fs_sequence_log_prob(sequence, num_experts);
    let bound = (switches as f64 + 1.0) * ((num_experts as f64).ln() + (horizon as f64).ln());
    BoundReport {
        empirical,
        bound,
        eta: f64::NAN,
        h_bound: f64::NAN,
        horizon,
        num_experts,
        switches: Some(switches),
        sum_delays: 0,
    }
}

/// Exact integer identity `sum_{t<T} |D_t| + sum_{t<T} D_t = T(T-1)/2` for any
/// valid (clamped) delay schedule.
pub fn check_delay_sum_identity(delays: &DelaySchedule) -> bool {
    let horizon = delays.horizon() as u64;
    if horizon == 0 {
        return true;
    }
    let mut reveal_sizes: u64 = 0;
    for t in 1..horizon {
        reveal_sizes += delays.revealed_by(t as usize).len() as u64;
    }
    let delay_sum: u64 = (1..horizon).map(|t| delays.delay(t as usize) as u64).sum();
    reveal_sizes + delay_sum == horizon * (horizon - 1) / 2
}

/// Outcome of the change-bound lemma check.
#[derive(Debug, Clone, Copy)]
pub struct ChangeBound {
    /// One-sided total variation `sum_{x: p >= q} (p - q)` with `q ~ p * a`.
    pub tv_distance: f64,
    /// `eta * C / 4`.
    pub bound: f64,
}

impl ChangeBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.tv_distance <= self.bound + tol
    }
}

/// Verifies the change-bound lemma: for `q ~ p * a` with
/// `-(1/eta) ln a(x) in [0, C]`, the one-sided TV distance is at most
/// `eta C / 4`.
pub fn check_change_bound(p: &SimplexWeights, a: &[f64], eta: f64, c: f64) -> Result<ChangeBound> {
    if a.len() != p.len() {
        return Err(HedgeError::parameter("a", "length mismatch with p"));
    }
    if !(eta > 0.0) || !(c >= 0.0) {
        return Err(HedgeError::parameter("eta/C", "expected eta > 0, C >= 0"));
    }
    let lo = (-eta * c).exp();
    for (i, &ai) in a.iter().enumerate() {
        // tolerance for values computed as exp(-eta * l) with l at the edges
        if ai < lo * (1.0 - 1e-12) || ai > 1.0 + 1e-12 {
            return Err(HedgeError::parameter(
                "a",
                format!("entry {i} is {ai}, expected in [e^(-eta C), 1] = [{lo}, 1]"),
            ));
        }
    }
    let mass: Vec<f64> = p.iter().zip(a).map(|(&pi, &ai)| pi * ai).collect();
    let q = SimplexWeights::from_unnormalized(&mass);
    let tv_distance: f64 = p
        .iter()
        .zip(q.iter())
        .filter(|(p, q)| p >= q)
        .map(|(p, q)| p - q)
        .sum();
    Ok(ChangeBound {
        tv_distance,
        bound: eta * c / 4.0,
    })
}

/// Verifies `h_t <= m_t + eta H^2 / 8` at every round of a (non-delayed) run.
pub fn check_per_step_hoeffding(
    trace: &GameTrace,
    losses: &[LossVector],
    eta: f64,
    h_bound: f64,
    tol: f64,
) -> bool {
    let slack = eta * h_bound * h_bound / 8.0;
    (1..=trace.horizon()).all(|t| {
        let m = mixloss(trace.weights(t), &losses[t - 1], eta);
        trace.round_loss(t) <= m + slack + tol
    })
}
