//! Probability vectors over the expert pool and per-round loss vectors.

use serde::Serialize;

use crate::error::{HedgeError, Result};

/// Tolerance for accepting an externally supplied probability vector.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A probability vector over `N` experts. Always normalized on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    /// Uniform distribution over `n` experts.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty expert pool");
        SimplexWeights(vec![1.0 / n as f64; n])
    }

    /// Validates nonnegativity and unit sum (within [`SIMPLEX_TOL`]), then renormalizes exactly.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(HedgeError::parameter("weights", "empty vector"));
        }
        let mut sum = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(HedgeError::parameter(
                    "weights",
                    format!("entry {i} is {p}, expected a nonnegative real"),
                ));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(HedgeError::parameter(
                "weights",
                format!("entries sum to {sum}, expected 1"),
            ));
        }
        let mut probs = probs;
        for p in &mut probs {
            *p /= sum;
        }
        Ok(SimplexWeights(probs))
    }

    /// Normalizes a vector of (unnormalized) log-weights via log-sum-exp.
    ///
    /// This is the only route through which the incremental algorithms build
    /// their weights, so large `eta * L` products never underflow to a zero
    /// total mass.
    pub fn from_log_weights(log_w: &[f64]) -> Self {
        assert!(!log_w.is_empty(), "empty expert pool");
        let lse = log_sum_exp(log_w);
        SimplexWeights(log_w.iter().map(|&x| (x - lse).exp()).collect())
    }

    /// Normalizes a vector of nonnegative masses.
    pub fn from_unnormalized(mass: &[f64]) -> Self {
        let sum: f64 = mass.iter().sum();
        assert!(sum > 0.0 && sum.is_finite(), "degenerate mass vector");
        SimplexWeights(mass.iter().map(|&m| m / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, expert: usize) -> f64 {
        self.0[expert]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// `<w, l>`: the expected loss of this weight allocation.
    pub fn dot(&self, loss: &LossVector) -> f64 {
        assert_eq!(self.len(), loss.len(), "dimension mismatch");
        self.0.iter().zip(loss.as_slice()).map(|(w, l)| w * l).sum()
    }

    /// `(1 - alpha) * self + alpha * other`, elementwise.
    pub fn mix(&self, other: &SimplexWeights, alpha: f64) -> SimplexWeights {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        SimplexWeights(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - alpha) * a + alpha * b)
                .collect(),
        )
    }

    /// Largest absolute elementwise difference to another vector.
    pub fn max_abs_diff(&self, other: &SimplexWeights) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Per-expert losses for one round `t >= 1`, each entry in `[0, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector {
    losses: Vec<f64>,
    round: usize,
}

impl LossVector {
    pub fn new(round: usize, losses: Vec<f64>, h_bound: f64) -> Result<Self> {
        if round == 0 {
            return Err(HedgeError::parameter("round", "rounds are 1-based"));
        }
        for (expert, &l) in losses.iter().enumerate() {
            if !l.is_finite() || l < 0.0 || l > h_bound {
                return Err(HedgeError::LossOutOfBounds {
                    round,
                    expert,
                    value: l,
                    h_bound,
                });
            }
        }
        Ok(LossVector { losses, round })
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.losses
    }

    pub fn get(&self, expert: usize) -> f64 {
        self.losses[expert]
    }
}

/// `ln(sum_i exp(x_i))`, shifted by the maximum for stability.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `ln(e^a + e^b)` without materializing either exponential.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_sums_to_one() {
        let w = SimplexWeights::uniform(4);
        assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
        assert_eq!(w.get(0), 0.25);
    }

    #[test]
    fn from_probs_rejects_bad_vectors() {
        assert!(SimplexWeights::from_probs(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::from_probs(vec![-0.1, 1.1]).is_err());
        assert!(SimplexWeights::from_probs(vec![]).is_err());
        assert!(SimplexWeights::from_probs(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn log_weights_survive_extreme_scale() {
        let w = SimplexWeights::from_log_weights(&[-5000.0, -5001.0]);
        let z = 1.0 + (-1.0f64).exp();
        assert!((w.get(0) - 1.0 / z).abs() < 1e-12);
        assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loss_vector_bounds() {
        assert!(LossVector::new(1, vec![0.0, 1.0], 1.0).is_ok());
        assert!(matches!(
            LossVector::new(1, vec![0.0, 1.5], 1.0),
            Err(HedgeError::LossOutOfBounds { expert: 1, .. })
        ));
        assert!(LossVector::new(0, vec![0.0], 1.0).is_err());
    }

    #[test]
    fn log_sum_exp_matches_naive() {
        let xs = [0.3, -1.2, 2.0];
        let naive: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-12);
        assert!((log_add_exp(0.3, -1.2) - (0.3f64.exp() + (-1.2f64).exp()).ln()).abs() < 1e-12);
    }
}
