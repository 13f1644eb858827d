//! Delayed Fixed Share: tracking the best switching expert under delays.
//!
//! The state keeps the list of posterior vectors `u_0, u_1, ..., u_t`. Every
//! round the prediction mixes the previous posterior with the prior using the
//! switch probability `alpha_t`, and each batch of revealed losses triggers a
//! single ascending sweep that recomputes the posteriors from the earliest
//! newly revealed round onward.

use crate::error::{HedgeError, Result};
use crate::simplex::{LossVector, SimplexWeights};

#[derive(Debug, Clone)]
pub struct FixedShareState {
    /// `posteriors[i]` is `u_{base + i}`; `u_0` is the prior.
    posteriors: Vec<SimplexWeights>,
    /// `alphas[i]` is the switch probability used at round `base + i` (entry for
    /// index 0 is a placeholder).
    alphas: Vec<f64>,
    /// `pending[i]` is the revealed loss of round `base + i`, if any.
    pending: Vec<Option<LossVector>>,
    /// Global index of `posteriors[0]`. Stays 0 unless pruning is enabled.
    base: usize,
    /// Which rounds have been revealed, indexed by round (entry 0 unused).
    revealed: Vec<bool>,
    /// Smallest round not yet revealed (`t + 1` when everything is in).
    min_unrevealed: usize,
    prior: SimplexWeights,
    eta: f64,
    h_bound: f64,
    prune: bool,
    t: usize,
}

impl FixedShareState {
    pub fn new(prior: &SimplexWeights, eta: f64, h_bound: f64) -> Result<Self> {
        Self::with_pruning(prior, eta, h_bound, false)
    }

    /// `prune = true` enables dropping posterior/loss/alpha entries that can
    /// never be touched again (all earlier rounds fully revealed). Pruned and
    /// unpruned runs emit identical weights.
    pub fn with_pruning(
        prior: &SimplexWeights,
        eta: f64,
        h_bound: f64,
        prune: bool,
    ) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
        }
        if !(h_bound > 0.0) || !h_bound.is_finite() {
            return Err(HedgeError::parameter(
                "h_bound",
                format!("{h_bound}, expected > 0"),
            ));
        }
        Ok(FixedShareState {
            posteriors: vec![prior.clone()],
            alphas: vec![1.0],
            pending: vec![None],
            base: 0,
            revealed: vec![false],
            min_unrevealed: 1,
            prior: prior.clone(),
            eta,
            h_bound,
            prune,
            t: 0,
        })
    }

    pub fn num_experts(&self) -> usize {
        self.prior.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rounds_predicted(&self) -> usize {
        self.t
    }

    /// Posterior `u_tau`, or `None` if `tau` is in the future or was pruned.
    pub fn posterior(&self, tau: usize) -> Option<&SimplexWeights> {
        if tau > self.t || tau < self.base {
            return None;
        }
        Some(&self.posteriors[tau - self.base])
    }

    /// Number of posterior entries currently held (shrinks under pruning).
    pub fn stored_entries(&self) -> usize {
        self.posteriors.len()
    }

    /// Emits `w_t = (1 - alpha_t) * u_{t-1} + alpha_t * p_0` and appends it as
    /// the provisional `u_t`.
    pub fn predict(&mut self, alpha_t: f64) -> Result<SimplexWeights> {
        if !(0.0..=1.0).contains(&alpha_t) || !alpha_t.is_finite() {
            return Err(HedgeError::parameter(
                "alpha",
                format!("{alpha_t}, expected in [0, 1]"),
            ));
        }
        let u_prev = &self.posteriors[self.t - self.base];
        let w = u_prev.mix(&self.prior, alpha_t);
        self.t += 1;
        self.alphas.push(alpha_t);
        self.posteriors.push(w.clone());
        self.pending.push(None);
        self.revealed.push(false);
        Ok(w)
    }

    /// Registers the losses revealed at the end of the current round, then
    /// sweeps `tau = tau_min ..= t` in ascending order recomputing
    /// `v = (1 - alpha_tau) u_{tau-1} + alpha_tau p_0` and
    /// `u_tau = normalize(v * exp(-eta l_tau))` where the loss is known.
    ///
    /// With no reveals the state is left untouched.
    pub fn reveal_sweep(&mut self, revealed: &[(usize, LossVector)]) -> Result<()> {
        if revealed.is_empty() {
            return Ok(());
        }
        let mut tau_min = usize::MAX;
        for (tau, loss) in revealed {
            let tau = *tau;
            if tau == 0 || tau > self.t {
                return Err(HedgeError::Protocol(format!(
                    "reveal of round {tau} outside the played range 1..={}",
                    self.t
                )));
            }
            if self.revealed[tau] {
                return Err(HedgeError::Protocol(format!(
                    "round {tau} revealed more than once"
                )));
            }
            if loss.len() != self.num_experts() {
                return Err(HedgeError::Protocol(format!(
                    "loss vector has {} entries for a pool of {} experts",
                    loss.len(),
                    self.num_experts()
                )));
            }
            for (expert, &l) in loss.as_slice().iter().enumerate() {
                if !l.is_finite() || l < 0.0 || l > self.h_bound {
                    return Err(HedgeError::LossOutOfBounds {
                        round: tau,
                        expert,
                        value: l,
                        h_bound: self.h_bound,
                    });
                }
            }
            self.revealed[tau] = true;
            self.pending[tau - self.base] = Some(loss.clone());
            tau_min = tau_min.min(tau);
        }

        let mut mass = vec![0.0; self.num_experts()];
        for tau in tau_min..=self.t {
            let i = tau - self.base;
            let v = self.posteriors[i - 1].mix(&self.prior, self.alphas[i]);
            self.posteriors[i] = match &self.pending[i] {
                Some(loss) => {
                    for ((m, &vn), &l) in mass.iter_mut().zip(v.as_slice()).zip(loss.as_slice()) {
                        *m = vn * (-self.eta * l).exp();
                    }
                    SimplexWeights::from_unnormalized(&mass)
                }
                None => v,
            };
        }

        while self.min_unrevealed <= self.t && self.revealed[self.min_unrevealed] {
            self.min_unrevealed += 1;
        }
        if self.prune {
            // Entries below min_unrevealed - 1 are never read again: future
            // sweeps start at or after min_unrevealed and read u_{tau - 1}.
            let keep_from = self.min_unrevealed.saturating_sub(1);
            if keep_from > self.base {
                let drop = keep_from - self.base;
                self.posteriors.drain(..drop);
                self.alphas.drain(..drop);
                self.pending.drain(..drop);
                self.base = keep_from;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probs(v: &[f64]) -> SimplexWeights {
        SimplexWeights::from_probs(v.to_vec()).unwrap()
    }

    #[test]
    fn full_switch_returns_prior() {
        let prior = probs(&[0.5, 0.5]);
        let mut s = FixedShareState::new(&prior, 1.0, 1.0).unwrap();
        let w = s.predict(1.0).unwrap();
        assert_eq!(w.as_slice(), prior.as_slice());
    }

    #[test]
    fn no_switch_returns_previous_posterior() {
        let prior = probs(&[0.5, 0.5]);
        let mut s = FixedShareState::new(&prior, 2.0f64.ln(), 1.0).unwrap();
        s.predict(1.0).unwrap();
        s.reveal_sweep(&[(1, LossVector::new(1, vec![1.0, 0.0], 1.0).unwrap())])
            .unwrap();
        let u1 = s.posterior(1).unwrap().clone();
        let w2 = s.predict(0.0).unwrap();
        assert_eq!(w2.as_slice(), u1.as_slice());
    }

    #[test]
    fn mixture_matches_hand_evaluation() {
        // u = [0.9, 0.1], prior = [0.5, 0.5], alpha = 0.5 -> [0.7, 0.3]
        let u = probs(&[0.9, 0.1]);
        let w = u.mix(&probs(&[0.5, 0.5]), 0.5);
        assert!((w.get(0) - 0.7).abs() < 1e-12);
        assert!((w.get(1) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn sweep_update_matches_hand_evaluation() {
        // v = [0.7, 0.3], eta = ln 2, l = [1, 0] -> u = [7/13, 6/13]
        let prior = probs(&[0.5, 0.5]);
        let mut s = FixedShareState::new(&probs(&[0.9, 0.1]), 2.0f64.ln(), 1.0).unwrap();
        // alpha = 0.5 against uniform prior gives v = w_1 = [0.7, 0.3]
        s.prior = prior;
        let w = s.predict(0.5).unwrap();
        assert!((w.get(0) - 0.7).abs() < 1e-12);
        s.reveal_sweep(&[(1, LossVector::new(1, vec![1.0, 0.0], 1.0).unwrap())])
            .unwrap();
        let u = s.posterior(1).unwrap();
        assert!((u.get(0) - 7.0 / 13.0).abs() < 1e-12);
        assert!((u.get(1) - 6.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn empty_reveal_is_a_noop() {
        let mut s = FixedShareState::new(&SimplexWeights::uniform(3), 1.0, 1.0).unwrap();
        s.predict(1.0).unwrap();
        let before = s.posterior(1).unwrap().clone();
        s.reveal_sweep(&[]).unwrap();
        assert_eq!(s.posterior(1).unwrap().as_slice(), before.as_slice());
    }

    #[test]
    fn duplicate_and_future_reveals_are_rejected() {
        let mut s = FixedShareState::new(&SimplexWeights::uniform(2), 1.0, 1.0).unwrap();
        s.predict(1.0).unwrap();
        let l = LossVector::new(1, vec![0.0, 1.0], 1.0).unwrap();
        s.reveal_sweep(&[(1, l.clone())]).unwrap();
        assert!(matches!(
            s.reveal_sweep(&[(1, l.clone())]),
            Err(HedgeError::Protocol(_))
        ));
        assert!(matches!(
            s.reveal_sweep(&[(2, l)]),
            Err(HedgeError::Protocol(_))
        ));
    }

    #[test]
    fn alpha_out_of_range() {
        let mut s = FixedShareState::new(&SimplexWeights::uniform(2), 1.0, 1.0).unwrap();
        assert!(s.predict(1.5).is_err());
        assert!(s.predict(-0.1).is_err());
    }

    #[test]
    fn pruned_run_emits_identical_weights() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 3;
        let t_max = 40;
        let delays: Vec<usize> = (0..t_max).map(|_| rng.gen_range(0..5)).collect();
        let sched = crate::delay::DelaySchedule::new(delays);
        let losses: Vec<LossVector> = (1..=t_max)
            .map(|t| LossVector::new(t, (0..n).map(|_| rng.gen::<f64>()).collect(), 1.0).unwrap())
            .collect();
        let prior = SimplexWeights::uniform(n);
        let mut plain = FixedShareState::new(&prior, 0.8, 1.0).unwrap();
        let mut pruned = FixedShareState::with_pruning(&prior, 0.8, 1.0, true).unwrap();
        for t in 1..=t_max {
            let alpha = if t == 1 { 1.0 } else { 1.0 / t as f64 };
            let w_a = plain.predict(alpha).unwrap();
            let w_b = pruned.predict(alpha).unwrap();
            assert_eq!(w_a.as_slice(), w_b.as_slice());
            let batch: Vec<(usize, LossVector)> = sched
                .revealed_at(t)
                .into_iter()
                .map(|tau| (tau, losses[tau - 1].clone()))
                .collect();
            plain.reveal_sweep(&batch).unwrap();
            pruned.reveal_sweep(&batch).unwrap();
        }
        assert!(pruned.stored_entries() < plain.stored_entries());
    }
}
