//! Loss and delay generators plus CSV ingestion for adversarial inputs.
//!
//! All randomness flows through `ChaCha8Rng` seeded from a caller-supplied
//! 64-bit seed, so every generated dataset is reproducible across platforms.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::delay::DelaySchedule;
use crate::error::{HedgeError, Result};
use crate::simplex::LossVector;

/// Stochastic loss process.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LossModel {
    IidBernoulli { q: Vec<f64> },
    SwitchingBernoulli { q: Vec<f64>, switches: usize },
    FromFile { path: String },
}

/// Delay process.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DelayModel {
    Zero,
    Fixed { delay: usize },
    Poisson { lambda: f64 },
    FromFile { path: String },
}

impl DelayModel {
    /// Expected delay implied by the model (used by the `auto14` rate policy).
    pub fn expected_delay(&self) -> Option<f64> {
        match self {
            DelayModel::Zero => Some(0.0),
            DelayModel::Fixed { delay } => Some(*delay as f64),
            DelayModel::Poisson { lambda } => Some(*lambda),
            DelayModel::FromFile { .. } => None,
        }
    }
}

fn check_q(q: &[f64]) -> Result<()> {
    if q.is_empty() {
        return Err(HedgeError::parameter("q", "empty Bernoulli mean vector"));
    }
    for (i, &qi) in q.iter().enumerate() {
        if !(0.0..=1.0).contains(&qi) {
            return Err(HedgeError::parameter(
                "q",
                format!("entry {i} is {qi}, expected in [0, 1]"),
            ));
        }
    }
    Ok(())
}

/// I.i.d. Bernoulli losses: `l_t^n ~ Bernoulli(q^n)`, values in `{0, 1}`.
pub fn gen_iid_losses(q: &[f64], horizon: usize, seed: u64) -> Result<Vec<LossVector>> {
    check_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((1..=horizon)
        .map(|t| {
            let row: Vec<f64> = q
                .iter()
                .map(|&qi| if rng.gen::<f64>() < qi { 1.0 } else { 0.0 })
                .collect();
            LossVector::new(t, row, 1.0).expect("Bernoulli losses are in [0, 1]")
        })
        .collect())
}

/// Output of the switching-Bernoulli generator, including the plant used for
/// comparator cross-checks.
#[derive(Debug, Clone)]
pub struct SwitchingData {
    pub losses: Vec<LossVector>,
    /// Strictly increasing segment boundaries in `[2, T]`; segment `k` covers
    /// `(t_k, t_{k+1}]` with `t_0 = 0` and `t_{K+1} = T`.
    pub switch_rounds: Vec<usize>,
    /// Per-segment permutation: on segment `k`, expert `n` draws from
    /// `Bernoulli(q[permutations[k][n]])`.
    pub permutations: Vec<Vec<usize>>,
}

impl SwitchingData {
    /// The planted comparator: per round, the expert whose assigned mean is
    /// lowest in the active segment (ties to the lowest index).
    pub fn planted_sequence(&self, q: &[f64]) -> Vec<usize> {
        let horizon = self.losses.len();
        let mut seq = Vec::with_capacity(horizon);
        let mut seg = 0;
        for t in 1..=horizon {
            while seg < self.switch_rounds.len() && t >= self.switch_rounds[seg] {
                seg += 1;
            }
            let perm = &self.permutations[seg];
            let best = (0..q.len())
                .min_by(|&a, &b| q[perm[a]].partial_cmp(&q[perm[b]]).unwrap())
                .unwrap();
            seq.push(best);
        }
        seq
    }

    /// Total loss of a given expert sequence on this data.
    pub fn sequence_loss(&self, seq: &[usize]) -> f64 {
        seq.iter().zip(&self.losses).map(|(&n, l)| l.get(n)).sum()
    }
}

/// Bernoulli losses whose best expert switches at `switches` planted rounds.
///
/// Switch rounds are drawn uniformly without replacement from `{2, ..., T}`;
/// each segment gets an independent uniform permutation of `q` (consecutive
/// equal permutations are allowed, so the realized number of best-expert
/// switches may be lower).
pub fn gen_switching_losses(
    q: &[f64],
    switches: usize,
    horizon: usize,
    seed: u64,
) -> Result<SwitchingData> {
    check_q(q)?;
    if switches >= horizon {
        return Err(HedgeError::parameter(
            "switches",
            format!("{switches}, expected < horizon {horizon}"),
        ));
    }
    let n = q.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut candidates: Vec<usize> = (2..=horizon).collect();
    candidates.shuffle(&mut rng);
    let mut switch_rounds: Vec<usize> = candidates.into_iter().take(switches).collect();
    switch_rounds.sort_unstable();

    let permutations: Vec<Vec<usize>> = (0..=switches)
        .map(|_| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();

    let mut losses = Vec::with_capacity(horizon);
    let mut seg = 0;
    for t in 1..=horizon {
        while seg < switch_rounds.len() && t >= switch_rounds[seg] {
            seg += 1;
        }
        let perm = &permutations[seg];
        let row: Vec<f64> = (0..n)
            .map(|expert| {
                if rng.gen::<f64>() < q[perm[expert]] {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        losses.push(LossVector::new(t, row, 1.0).expect("Bernoulli losses are in [0, 1]"));
    }

    Ok(SwitchingData {
        losses,
        switch_rounds,
        permutations,
    })
}

/// Draws a delay schedule; generated values are clamped to `t + D_t <= T` at
/// schedule construction.
pub fn gen_delays(model: &DelayModel, horizon: usize, seed: u64) -> Result<DelaySchedule> {
    match model {
        DelayModel::Zero => Ok(DelaySchedule::zero(horizon)),
        DelayModel::Fixed { delay } => Ok(DelaySchedule::fixed(*delay, horizon)),
        DelayModel::Poisson { lambda } => {
            if !(*lambda >= 0.0) || !lambda.is_finite() {
                return Err(HedgeError::parameter(
                    "lambda",
                    format!("{lambda}, expected >= 0"),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<usize> = (0..horizon)
                .map(|_| sample_poisson(&mut rng, *lambda))
                .collect();
            Ok(DelaySchedule::new(raw))
        }
        DelayModel::FromFile { path } => load_delays(path),
    }
}

/// Poisson sampler: Knuth inversion for small means, PTRS rejection above.
/// Both paths consume only uniform draws from the supplied RNG, keeping the
/// output reproducible for a fixed seed.
pub fn sample_poisson<R: Rng>(rng: &mut R, lambda: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    if lambda <= 30.0 {
        // inversion by multiplication
        let limit = (-lambda).exp();
        let mut k = 0usize;
        let mut prod: f64 = rng.gen();
        while prod > limit {
            k += 1;
            prod *= rng.gen::<f64>();
        }
        k
    } else {
        // PTRS transformed rejection (Hormann)
        let b = 0.931 + 2.53 * lambda.sqrt();
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let v_r = 0.9277 - 3.6224 / (b - 2.0);
        let log_lambda = lambda.ln();
        loop {
            let u: f64 = rng.gen::<f64>() - 0.5;
            let v: f64 = rng.gen();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
            if us >= 0.07 && v <= v_r {
                return k as usize;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = (v * inv_alpha / (a / (us * us) + b)).ln();
            if lhs <= k * log_lambda - lambda - ln_factorial(k) {
                return k as usize;
            }
        }
    }
}

/// `ln(k!)` via Stirling's series (exact table for small `k`).
fn ln_factorial(k: f64) -> f64 {
    if k < 10.0 {
        let mut acc = 0.0;
        let mut i = 2.0;
        while i <= k {
            acc += i.ln();
            i += 1.0;
        }
        return acc;
    }
    let k1 = k + 1.0;
    0.5 * (2.0 * std::f64::consts::PI / k1).ln() + k1 * (k1.ln() - 1.0) + 1.0 / (12.0 * k1)
        - 1.0 / (360.0 * k1.powi(3))
        + 1.0 / (1260.0 * k1.powi(5))
}

/// Loads losses from CSV: header `t,l1,...,lN`, rounds `1..=T` contiguous.
pub fn load_losses(path: impl AsRef<Path>) -> Result<Vec<LossVector>> {
    load_losses_from(std::fs::File::open(path)?)
}

/// Loads losses from any reader; entries are validated against `[0, 1]`
/// at the file boundary (H = 1 for file data unless re-validated by the game).
pub fn load_losses_from(reader: impl Read) -> Result<Vec<LossVector>> {
    let reader = BufReader::new(reader);
    let mut losses: Vec<LossVector> = Vec::new();
    let mut width: Option<usize> = None;
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if !line.starts_with("t,") {
                return Err(HedgeError::Parse {
                    line: line_no,
                    reason: format!("expected header `t,l1,...,lN`, found `{line}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.split(',');
        let t: usize = fields
            .next()
            .unwrap()
            .trim()
            .parse()
            .map_err(|e| HedgeError::Parse {
                line: line_no,
                reason: format!("bad round index: {e}"),
            })?;
        if t != losses.len() + 1 {
            return Err(HedgeError::Parse {
                line: line_no,
                reason: format!("round {t} out of order, expected {}", losses.len() + 1),
            });
        }
        let row: Vec<f64> = fields
            .map(|f| {
                f.trim().parse::<f64>().map_err(|e| HedgeError::Parse {
                    line: line_no,
                    reason: format!("bad loss value `{}`: {e}", f.trim()),
                })
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(HedgeError::Parse {
                    line: line_no,
                    reason: format!("row has {} experts, expected {w}", row.len()),
                })
            }
            _ => {}
        }
        let lv = LossVector::new(t, row, 1.0).map_err(|e| HedgeError::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        losses.push(lv);
    }
    if losses.is_empty() {
        return Err(HedgeError::Parse {
            line: 0,
            reason: "horizon zero: no loss rows found".into(),
        });
    }
    Ok(losses)
}

/// Loads a delay schedule from CSV: header `t,D`. Values violating
/// `t + D_t <= T` are clamped (the schedule records how many).
pub fn load_delays(path: impl AsRef<Path>) -> Result<DelaySchedule> {
    load_delays_from(std::fs::File::open(path)?)
}

pub fn load_delays_from(reader: impl Read) -> Result<DelaySchedule> {
    let reader = BufReader::new(reader);
    let mut raw: Vec<usize> = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if !line.starts_with("t,") {
                return Err(HedgeError::Parse {
                    line: line_no,
                    reason: format!("expected header `t,D`, found `{line}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.split(',');
        let t: usize = fields
            .next()
            .unwrap()
            .trim()
            .parse()
            .map_err(|e| HedgeError::Parse {
                line: line_no,
                reason: format!("bad round index: {e}"),
            })?;
        if t != raw.len() + 1 {
            return Err(HedgeError::Parse {
                line: line_no,
                reason: format!("round {t} out of order, expected {}", raw.len() + 1),
            });
        }
        let d: usize = fields
            .next()
            .ok_or_else(|| HedgeError::Parse {
                line: line_no,
                reason: "missing delay column".into(),
            })?
            .trim()
            .parse()
            .map_err(|e| HedgeError::Parse {
                line: line_no,
                reason: format!("bad delay value: {e}"),
            })?;
        raw.push(d);
    }
    if raw.is_empty() {
        return Err(HedgeError::Parse {
            line: 0,
            reason: "horizon zero: no delay rows found".into(),
        });
    }
    Ok(DelaySchedule::new(raw))
}

/// Writes losses in the `t,l1,...,lN` schema.
pub fn save_losses(losses: &[LossVector], mut writer: impl Write) -> Result<()> {
    let n = losses.first().map_or(0, |l| l.len());
    let header: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    writeln!(writer, "t,{}", header.join(","))?;
    for l in losses {
        let row: Vec<String> = l.as_slice().iter().map(|v| v.to_string()).collect();
        writeln!(writer, "{},{}", l.round(), row.join(","))?;
    }
    Ok(())
}

/// Writes a delay schedule in the `t,D` schema (clamped values).
pub fn save_delays(delays: &DelaySchedule, mut writer: impl Write) -> Result<()> {
    writeln!(writer, "t,D")?;
    for t in 1..=delays.horizon() {
        writeln!(writer, "{},{}", t, delays.delay(t))?;
    }
    Ok(())
}

/// Built-in Bernoulli mean presets: similar experts and diverse experts.
pub const Q1: [f64; 4] = [0.35, 0.4, 0.45, 0.5];
pub const Q2: [f64; 4] = [0.2, 0.4, 0.5, 0.7];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_means() {
        let zeros = gen_iid_losses(&[0.0, 0.0], 50, 1).unwrap();
        assert!(zeros.iter().all(|l| l.as_slice().iter().all(|&v| v == 0.0)));
        let ones = gen_iid_losses(&[1.0, 1.0], 50, 1).unwrap();
        assert!(ones.iter().all(|l| l.as_slice().iter().all(|&v| v == 1.0)));
    }

    #[test]
    fn iid_empirical_means_near_q1() {
        let t_max = 10_000;
        let losses = gen_iid_losses(&Q1, t_max, 2024).unwrap();
        for (n, &q) in Q1.iter().enumerate() {
            let mean: f64 = losses.iter().map(|l| l.get(n)).sum::<f64>() / t_max as f64;
            let tol = 3.0 * (q * (1.0 - q) / t_max as f64).sqrt();
            assert!(
                (mean - q).abs() <= tol,
                "expert {n}: mean {mean} vs q {q} (tol {tol})"
            );
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_iid_losses(&Q2, 200, 7).unwrap();
        let b = gen_iid_losses(&Q2, 200, 7).unwrap();
        assert_eq!(a, b);
        let c = gen_iid_losses(&Q2, 200, 8).unwrap();
        assert_ne!(a, c);
        let d1 = gen_delays(&DelayModel::Poisson { lambda: 5.0 }, 300, 3).unwrap();
        let d2 = gen_delays(&DelayModel::Poisson { lambda: 5.0 }, 300, 3).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn switching_plant_shape() {
        let data = gen_switching_losses(&Q2, 10, 500, 99).unwrap();
        assert_eq!(data.switch_rounds.len(), 10);
        assert!(data.switch_rounds.windows(2).all(|w| w[0] < w[1]));
        assert!(data.switch_rounds.iter().all(|&t| (2..=500).contains(&t)));
        assert_eq!(data.permutations.len(), 11);
        assert!(gen_switching_losses(&Q2, 500, 500, 0).is_err());
    }

    #[test]
    fn dp_beats_or_matches_planted_sequence() {
        let data = gen_switching_losses(&Q2, 10, 2000, 5).unwrap();
        let planted = data.planted_sequence(&Q2);
        let planted_loss = data.sequence_loss(&planted);
        let (_, dp_loss) = crate::oracle::best_switching_sequence(&data.losses, 10);
        assert!(dp_loss <= planted_loss + 1e-12);
    }

    #[test]
    fn poisson_zero_is_degenerate() {
        let d = gen_delays(&DelayModel::Poisson { lambda: 0.0 }, 20, 1).unwrap();
        assert!(d.delays().iter().all(|&x| x == 0));
    }

    #[test]
    fn poisson_sample_mean_small_and_large_lambda() {
        use rand::SeedableRng;
        for &lambda in &[3.0, 40.0, 120.0] {
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            let n = 10_000;
            let mean: f64 = (0..n)
                .map(|_| sample_poisson(&mut rng, lambda) as f64)
                .sum::<f64>()
                / n as f64;
            let tol = 4.0 * (lambda / n as f64).sqrt();
            assert!(
                (mean - lambda).abs() <= tol,
                "lambda {lambda}: mean {mean} (tol {tol})"
            );
        }
    }

    #[test]
    fn poisson_delay_raw_mean_near_lambda() {
        let t_max = 10_000;
        let d = gen_delays(&DelayModel::Poisson { lambda: 40.0 }, t_max, 11).unwrap();
        let tol = 3.0 * (40.0f64 / t_max as f64).sqrt();
        assert!((d.raw_mean() - 40.0).abs() <= tol);
        // clamped constraint holds everywhere
        for t in 1..=t_max {
            assert!(t + d.delay(t) <= t_max);
        }
    }

    #[test]
    fn csv_round_trip() {
        let losses = gen_iid_losses(&Q1, 50, 3).unwrap();
        let mut buf = Vec::new();
        save_losses(&losses, &mut buf).unwrap();
        let reloaded = load_losses_from(&buf[..]).unwrap();
        assert_eq!(losses, reloaded);

        let delays = gen_delays(&DelayModel::Poisson { lambda: 4.0 }, 50, 3).unwrap();
        let mut buf = Vec::new();
        save_delays(&delays, &mut buf).unwrap();
        let reloaded = load_delays_from(&buf[..]).unwrap();
        assert_eq!(delays.delays(), reloaded.delays());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = load_losses_from("t,l1,l2\n1,0,0\n2,1.5,0\n".as_bytes()).unwrap_err();
        match err {
            HedgeError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
        let err = load_losses_from("t,l1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("horizon zero"));
        let err = load_losses_from("".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("horizon zero"));
    }
}
