//! Delayed Hedge: exponential reweighing by revealed cumulative losses.

use crate::error::{HedgeError, Result};
use crate::simplex::{LossVector, SimplexWeights};

/// State of Delayed Hedge over a finite expert pool.
///
/// Weights are never stored directly: the state keeps the cumulative revealed
/// losses and the log-prior, and `predict` normalizes
/// `prior * exp(-eta * L)` in log space.
#[derive(Debug, Clone)]
pub struct HedgeState {
    cumulative_losses: Vec<f64>,
    log_prior: Vec<f64>,
    eta: f64,
    h_bound: f64,
}

impl HedgeState {
    pub fn new(prior: &SimplexWeights, eta: f64, h_bound: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
        }
        if !(h_bound > 0.0) || !h_bound.is_finite() {
            return Err(HedgeError::parameter(
                "h_bound",
                format!("{h_bound}, expected > 0"),
            ));
        }
        Ok(HedgeState {
            cumulative_losses: vec![0.0; prior.len()],
            log_prior: prior.iter().map(|p| p.ln()).collect(),
            eta,
            h_bound,
        })
    }

    pub fn num_experts(&self) -> usize {
        self.log_prior.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn h_bound(&self) -> f64 {
        self.h_bound
    }

    /// Cumulative revealed losses per expert.
    pub fn cumulative_losses(&self) -> &[f64] {
        &self.cumulative_losses
    }

    /// `normalize(prior * exp(-eta * L))` via log-sum-exp.
    pub fn predict(&self) -> SimplexWeights {
        let log_w: Vec<f64> = self
            .log_prior
            .iter()
            .zip(&self.cumulative_losses)
            .map(|(lp, l)| lp - self.eta * l)
            .collect();
        SimplexWeights::from_log_weights(&log_w)
    }

    /// Folds one revealed loss vector into the cumulative losses.
    pub fn reveal(&mut self, loss: &LossVector) -> Result<()> {
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
                    round: loss.round(),
                    expert,
                    value: l,
                    h_bound: self.h_bound,
                });
            }
        }
        for (acc, l) in self.cumulative_losses.iter_mut().zip(loss.as_slice()) {
            *acc += l;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state2(eta: f64) -> HedgeState {
        HedgeState::new(&SimplexWeights::uniform(2), eta, 10.0).unwrap()
    }

    #[test]
    fn empty_history_returns_prior() {
        assert_eq!(state2(1.0).predict().as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn closed_form_two_experts() {
        // uniform prior, eta = 1, cumulative losses [ln 2, 0] -> [1/3, 2/3]
        let mut s = state2(1.0);
        s.reveal(&LossVector::new(1, vec![2.0f64.ln(), 0.0], 10.0).unwrap())
            .unwrap();
        let w = s.predict();
        assert!((w.get(0) - 1.0 / 3.0).abs() < 1e-12);
        assert!((w.get(1) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_shift_cancels() {
        let mut a = state2(0.7);
        let mut b = state2(0.7);
        a.reveal(&LossVector::new(1, vec![0.3, 1.1], 10.0).unwrap())
            .unwrap();
        b.reveal(&LossVector::new(1, vec![0.3 + 2.5, 1.1 + 2.5], 10.0).unwrap())
            .unwrap();
        assert!(a.predict().max_abs_diff(&b.predict()) < 1e-12);
    }

    #[test]
    fn zero_loss_is_a_noop() {
        let mut s = state2(1.0);
        let before = s.predict();
        s.reveal(&LossVector::new(1, vec![0.0, 0.0], 10.0).unwrap())
            .unwrap();
        assert_eq!(s.predict(), before);
    }

    #[test]
    fn reveal_order_commutes() {
        let l1 = LossVector::new(1, vec![0.25, 1.0], 10.0).unwrap();
        let l2 = LossVector::new(2, vec![0.5, 0.125], 10.0).unwrap();
        let mut a = state2(1.0);
        let mut b = state2(1.0);
        a.reveal(&l1).unwrap();
        a.reveal(&l2).unwrap();
        b.reveal(&l2).unwrap();
        b.reveal(&l1).unwrap();
        assert_eq!(a.cumulative_losses(), b.cumulative_losses());
    }

    #[test]
    fn rejects_out_of_bound_losses() {
        let mut s = HedgeState::new(&SimplexWeights::uniform(2), 1.0, 1.0).unwrap();
        let err = s
            .reveal(&LossVector::new(1, vec![0.5, 1.5], 10.0).unwrap())
            .unwrap_err();
        assert!(matches!(err, HedgeError::LossOutOfBounds { .. }));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HedgeState::new(&SimplexWeights::uniform(2), 0.0, 1.0).is_err());
        assert!(HedgeState::new(&SimplexWeights::uniform(2), 1.0, -1.0).is_err());
    }
}
