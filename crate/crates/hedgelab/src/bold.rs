//! BOLD: the replicating baseline. Runs independent non-delayed copies of a
//! base algorithm on disjoint time subsequences that respect the delay gap
//! `t_s + D_{t_s} < t_{s+1}`.

use crate::delay::DelaySchedule;
use crate::error::Result;
use crate::fixed_share::FixedShareState;
use crate::game::GameConfig;
use crate::hedge::HedgeState;
use crate::rates;
use crate::simplex::{LossVector, SimplexWeights};

/// Base algorithm replicated by BOLD.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoldBase {
    Hedge,
    FixedShare,
}

/// Greedy first-available-copy partition of `{1, ..., T}`.
///
/// Round `t` goes to the lowest-index copy whose last assigned round `t'`
/// satisfies `t' + D_{t'} < t`; if none qualifies a new copy is spawned.
/// Delays are assumed known in advance.
pub fn bold_partition(delays: &DelaySchedule) -> Vec<Vec<usize>> {
    let mut copies: Vec<Vec<usize>> = Vec::new();
    for t in 1..=delays.horizon() {
        let slot = copies.iter().position(|c| {
            let last = *c.last().expect("copies are never empty");
            last + delays.delay(last) < t
        });
        match slot {
            Some(i) => copies[i].push(t),
            None => copies.push(vec![t]),
        }
    }
    copies
}

/// Runs one non-delayed copy of the base algorithm per subsequence, each with
/// learning rate `optimal_eta(H, N, S)` for its own length `S`, and interleaves
/// the copies' decisions onto the global timeline.
///
/// Returns the per-round weights and the per-copy learning rates.
pub(crate) fn bold_run(
    base: BoldBase,
    losses: &[LossVector],
    delays: &DelaySchedule,
    prior: &SimplexWeights,
    config: &GameConfig,
) -> Result<(Vec<SimplexWeights>, Vec<f64>)> {
    let n = prior.len();
    let t_max = losses.len();
    let partition = bold_partition(delays);
    let mut weights: Vec<Option<SimplexWeights>> = vec![None; t_max];
    let mut etas = Vec::with_capacity(partition.len());

    for sub in &partition {
        let eta = rates::optimal_eta(config.h_bound, n, sub.len())?;
        etas.push(eta);
        match base {
            BoldBase::Hedge => {
                let mut state = HedgeState::new(prior, eta, config.h_bound)?;
                for &t in sub {
                    weights[t - 1] = Some(state.predict());
                    // Within a copy the loss of round t arrives before the
                    // copy's next round, so it can be consumed immediately.
                    state.reveal(&losses[t - 1])?;
                }
            }
            BoldBase::FixedShare => {
                let mut state =
                    FixedShareState::with_pruning(prior, eta, config.h_bound, config.prune)?;
                for (s, &t) in sub.iter().enumerate() {
                    // The switch schedule follows the global clock: the best
                    // expert changes in real time, not copy-local time.
                    let alpha = config.alpha.value(t);
                    weights[t - 1] = Some(state.predict(alpha)?);
                    state.reveal_sweep(&[(s + 1, losses[t - 1].clone())])?;
                }
            }
        }
    }

    Ok((
        weights
            .into_iter()
            .map(|w| w.expect("partition covers every round"))
            .collect(),
        etas,
    ))
}
