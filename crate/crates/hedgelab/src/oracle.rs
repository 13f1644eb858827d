//! Brute-force and dynamic-programming reference implementations. These are
//! ground truth for the incremental algorithms and for regret comparators;
//! they are deliberately simple and only feasible at small scale.

use crate::delay::DelaySchedule;
use crate::error::{HedgeError, Result};
use crate::game::AlphaSchedule;
use crate::simplex::{log_add_exp, LossVector, SimplexWeights};

/// Hard cap on the number of enumerated sequences.
pub const ENUMERATION_GUARD: u128 = 10_000_000;

/// Prior over hidden expert sequences.
#[derive(Debug, Clone)]
pub enum ChainPrior {
    /// The active expert never changes: `p(N_T) = p_0(n_1) * I[n_1 = ... = n_T]`.
    HedgeChain { prior: SimplexWeights },
    /// Markov chain that resets to the prior with probability `alpha_t`.
    FixedShareChain {
        prior: SimplexWeights,
        alpha: AlphaSchedule,
    },
}

impl ChainPrior {
    fn prior(&self) -> &SimplexWeights {
        match self {
            ChainPrior::HedgeChain { prior } => prior,
            ChainPrior::FixedShareChain { prior, .. } => prior,
        }
    }
}

/// Precomputed per-round log transition terms for fast sequence scoring.
struct ChainScorer {
    log_prior: Vec<f64>,
    /// `stay[t-2][n] = ln p(n_t = n | n_{t-1} = n)` for `t >= 2`.
    stay: Vec<Vec<f64>>,
    /// `switch_to[t-2][n] = ln p(n_t = n | n_{t-1} != n)` for `t >= 2`.
    switch_to: Vec<Vec<f64>>,
    hedge_chain: bool,
}

impl ChainScorer {
    fn new(chain: &ChainPrior, horizon: usize) -> Self {
        let p0 = chain.prior();
        let log_prior: Vec<f64> = p0.iter().map(|p| p.ln()).collect();
        match chain {
            ChainPrior::HedgeChain { .. } => ChainScorer {
                log_prior,
                stay: vec![],
                switch_to: vec![],
                hedge_chain: true,
            },
            ChainPrior::FixedShareChain { alpha, .. } => {
                let mut stay = Vec::with_capacity(horizon.saturating_sub(1));
                let mut switch_to = Vec::with_capacity(horizon.saturating_sub(1));
                for t in 2..=horizon {
                    let a = alpha.value(t);
                    stay.push(p0.iter().map(|&p| (a * p + (1.0 - a)).ln()).collect());
                    switch_to.push(p0.iter().map(|&p| (a * p).ln()).collect());
                }
                ChainScorer {
                    log_prior,
                    stay,
                    switch_to,
                    hedge_chain: false,
                }
            }
        }
    }

    fn log_prob(&self, seq: &[usize]) -> f64 {
        let mut lp = self.log_prior[seq[0]];
        if self.hedge_chain {
            if seq.windows(2).any(|w| w[0] != w[1]) {
                return f64::NEG_INFINITY;
            }
            return lp;
        }
        for (i, w) in seq.windows(2).enumerate() {
            lp += if w[1] == w[0] {
                self.stay[i][w[1]]
            } else {
                self.switch_to[i][w[1]]
            };
        }
        lp
    }
}

/// Exact posterior marginal `p(n_target | losses of the given revealed rounds)`
/// by summing over every sequence in `N^T`.
///
/// `revealed` lists 1-based rounds whose losses are conditioned on; `target`
/// is the 1-based coordinate to marginalize onto.
pub fn enumerate_posterior_at(
    chain: &ChainPrior,
    losses: &[LossVector],
    eta: f64,
    revealed: &[usize],
    target: usize,
) -> Result<SimplexWeights> {
    let horizon = losses.len();
    let n = chain.prior().len();
    if target == 0 || target > horizon {
        return Err(HedgeError::parameter(
            "target",
            format!("{target}, expected in 1..={horizon}"),
        ));
    }
    let size = (n as u128).checked_pow(horizon as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_GUARD {
        return Err(HedgeError::Capacity {
            size,
            guard: ENUMERATION_GUARD,
        });
    }

    let scorer = ChainScorer::new(chain, horizon);
    // scaled[tau][n] = -eta * l_tau^n for revealed rounds, 0 otherwise
    let mut scaled = vec![vec![0.0; n]; horizon];
    for &tau in revealed {
        for (slot, &l) in scaled[tau - 1].iter_mut().zip(losses[tau - 1].as_slice()) {
            *slot = -eta * l;
        }
    }

    let mut buckets = vec![f64::NEG_INFINITY; n];
    let mut seq = vec![0usize; horizon];
    loop {
        let lp = scorer.log_prob(&seq);
        if lp > f64::NEG_INFINITY {
            let mut log_w = lp;
            for (tau, &expert) in seq.iter().enumerate() {
                log_w += scaled[tau][expert];
            }
            let b = &mut buckets[seq[target - 1]];
            *b = log_add_exp(*b, log_w);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == horizon {
                return Ok(SimplexWeights::from_log_weights(&buckets));
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// The prediction-time posterior `w_t = p(n_t | L_{D_{t-1}})`.
pub fn enumerate_posterior(
    chain: &ChainPrior,
    losses: &[LossVector],
    delays: &DelaySchedule,
    eta: f64,
    t: usize,
) -> Result<SimplexWeights> {
    let revealed = if t > 1 {
        delays.revealed_by(t - 1)
    } else {
        vec![]
    };
    enumerate_posterior_at(chain, losses, eta, &revealed, t)
}

/// One step of classical (non-delayed) Fixed Share:
/// `w = (1 - alpha) u_prev + alpha p_0`, then `u ~ w * exp(-eta l)`.
pub fn classical_fixed_share_step(
    u_prev: &SimplexWeights,
    alpha: f64,
    prior: &SimplexWeights,
    loss: &LossVector,
    eta: f64,
) -> Result<(SimplexWeights, SimplexWeights)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(HedgeError::parameter(
            "alpha",
            format!("{alpha}, expected in [0, 1]"),
        ));
    }
    if !(eta > 0.0) {
        return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
    }
    let w = u_prev.mix(prior, alpha);
    let mass: Vec<f64> = w
        .iter()
        .zip(loss.as_slice())
        .map(|(&wn, &l)| wn * (-eta * l).exp())
        .collect();
    let u = SimplexWeights::from_unnormalized(&mass);
    Ok((w, u))
}

/// Minimum-loss expert sequence with at most `max_switches` switches, found by
/// dynamic programming over (round, expert, switches used).
///
/// Returns the 0-based expert sequence and its total loss. Ties prefer the
/// lower expert index and the earlier switch.
#[allow(clippy::needless_range_loop)] // expert indexes several tables at once
pub fn best_switching_sequence(losses: &[LossVector], max_switches: usize) -> (Vec<usize>, f64) {
    assert!(!losses.is_empty(), "empty game");
    let horizon = losses.len();
    let n = losses[0].len();
    let k_max = max_switches.min(horizon - 1);

    // cost[n][k]: best loss ending at expert n using at most k switches.
    let mut cost = vec![vec![f64::INFINITY; k_max + 1]; n];
    // from[t][n][k]: predecessor expert at round t (same expert = stayed)
    let mut from = vec![vec![vec![0usize; k_max + 1]; n]; horizon];
    for expert in 0..n {
        for k in 0..=k_max {
            cost[expert][k] = losses[0].get(expert);
            from[0][expert][k] = expert;
        }
    }

    for t in 1..horizon {
        let mut next = vec![vec![f64::INFINITY; k_max + 1]; n];
        // running minimum over experts for each switch budget
        let mut best_prev = vec![(f64::INFINITY, 0usize); k_max + 1];
        for k in 0..=k_max {
            for expert in 0..n {
                if cost[expert][k] < best_prev[k].0 {
                    best_prev[k] = (cost[expert][k], expert);
                }
            }
        }
        for expert in 0..n {
            for k in 0..=k_max {
                let stay = cost[expert][k];
                let mut val = stay;
                let mut pred = expert;
                if k > 0 {
                    let (m, m_arg) = best_prev[k - 1];
                    // best_prev may be this expert itself; that is still a
                    // valid "stay" path with a smaller budget, same value
                    if m <= val {
                        val = m;
                        if m_arg != expert {
                            pred = m_arg;
                        }
                    }
                }
                next[expert][k] = val + losses[t].get(expert);
                from[t][expert][k] = pred;
            }
        }
        cost = next;
    }

    let mut best = (f64::INFINITY, 0usize);
    for expert in 0..n {
        if cost[expert][k_max] < best.0 {
            best = (cost[expert][k_max], expert);
        }
    }
    let total = best.0;

    // reconstruct
    let mut seq = vec![0usize; horizon];
    let mut expert = best.1;
    let mut k = k_max;
    for t in (0..horizon).rev() {
        seq[t] = expert;
        let pred = from[t][expert][k];
        if pred != expert && k > 0 {
            k -= 1;
        }
        expert = pred;
    }
    (seq, total)
}
