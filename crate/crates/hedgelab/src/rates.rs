//! Learning-rate schedules.

use crate::error::{HedgeError, Result};

fn check_common(h_bound: f64, num_experts: usize) -> Result<()> {
    if !(h_bound > 0.0) || !h_bound.is_finite() {
        return Err(HedgeError::parameter(
            "h_bound",
            format!("{h_bound}, expected > 0"),
        ));
    }
    if num_experts < 2 {
        return Err(HedgeError::parameter(
            "num_experts",
            format!("{num_experts}, expected >= 2"),
        ));
    }
    Ok(())
}

/// The rate minimizing `ln N / eta + eta H^2 S / 8` over a game of `S` rounds:
/// `(2 / H) * sqrt(2 ln N / S)`.
pub fn optimal_eta(h_bound: f64, num_experts: usize, rounds: usize) -> Result<f64> {
    check_common(h_bound, num_experts)?;
    if rounds < 1 {
        return Err(HedgeError::parameter("rounds", "expected >= 1"));
    }
    Ok(2.0 / h_bound * (2.0 * (num_experts as f64).ln() / rounds as f64).sqrt())
}

/// Delay-discounted rate `(2 / H) * sqrt(2 ln N / (T (1 + E[D])))`, i.e. the
/// non-delayed rate scaled by `1 / sqrt(1 + E[D])`.
pub fn eta_delayed(
    h_bound: f64,
    num_experts: usize,
    rounds: usize,
    expected_delay: f64,
) -> Result<f64> {
    if !(expected_delay >= 0.0) || !expected_delay.is_finite() {
        return Err(HedgeError::parameter(
            "expected_delay",
            format!("{expected_delay}, expected >= 0"),
        ));
    }
    Ok(optimal_eta(h_bound, num_experts, rounds)? / (1.0 + expected_delay).sqrt())
}

/// Theory-optimal Fixed Share rate including the `ln T` tracking term:
/// `(2 / H) * sqrt(2 (ln N + ln T) / (T (1 + E[D])))`. The experiment harness
/// defaults to [`optimal_eta`] / [`eta_delayed`] instead; this variant is
/// exposed for callers who want the tracking-aware schedule.
pub fn optimal_eta_fs(
    h_bound: f64,
    num_experts: usize,
    rounds: usize,
    expected_delay: f64,
) -> Result<f64> {
    check_common(h_bound, num_experts)?;
    if rounds < 2 {
        return Err(HedgeError::parameter("rounds", "expected >= 2"));
    }
    if !(expected_delay >= 0.0) || !expected_delay.is_finite() {
        return Err(HedgeError::parameter(
            "expected_delay",
            format!("{expected_delay}, expected >= 0"),
        ));
    }
    let t = rounds as f64;
    let ln_term = (num_experts as f64).ln() + t.ln();
    Ok(2.0 / h_bound * (2.0 * ln_term / (t * (1.0 + expected_delay))).sqrt())
}
