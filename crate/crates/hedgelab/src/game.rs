//! The full game loop: emit weights, process delayed reveals, record a trace.

use serde::Serialize;

use crate::bold;
use crate::delay::DelaySchedule;
use crate::error::{HedgeError, Result};
use crate::fixed_share::FixedShareState;
use crate::hedge::HedgeState;
use crate::rates;
use crate::simplex::{LossVector, SimplexWeights};

/// The four algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Hedge,
    FixedShare,
    BoldHedge,
    BoldFixedShare,
}

impl AlgorithmKind {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmKind::Hedge => "hedge",
            AlgorithmKind::FixedShare => "fs",
            AlgorithmKind::BoldHedge => "bold-hedge",
            AlgorithmKind::BoldFixedShare => "bold-fs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hedge" => Ok(AlgorithmKind::Hedge),
            "fs" | "fixed-share" => Ok(AlgorithmKind::FixedShare),
            "bold-hedge" => Ok(AlgorithmKind::BoldHedge),
            "bold-fs" | "bold-fixed-share" => Ok(AlgorithmKind::BoldFixedShare),
            other => Err(HedgeError::parameter(
                "algorithm",
                format!("unknown id `{other}`"),
            )),
        }
    }
}

/// How the learning rate is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EtaPolicy {
    /// `optimal_eta(H, N, T)` — the non-delayed tuning.
    Auto13,
    /// `eta_delayed(H, N, T, E[D])` — the delay-discounted tuning.
    Auto14 {
        expected_delay: f64,
    },
    /// `optimal_eta_fs(H, N, T, E[D])` — the tracking-aware tuning with the
    /// extra `ln T` term.
    Auto14Fs {
        expected_delay: f64,
    },
    Explicit(f64),
}

impl EtaPolicy {
    pub fn resolve(&self, h_bound: f64, num_experts: usize, rounds: usize) -> Result<f64> {
        match *self {
            EtaPolicy::Auto13 => rates::optimal_eta(h_bound, num_experts, rounds),
            EtaPolicy::Auto14 { expected_delay } => {
                rates::eta_delayed(h_bound, num_experts, rounds, expected_delay)
            }
            EtaPolicy::Auto14Fs { expected_delay } => {
                rates::optimal_eta_fs(h_bound, num_experts, rounds, expected_delay)
            }
            EtaPolicy::Explicit(eta) => {
                if !(eta > 0.0) || !eta.is_finite() {
                    return Err(HedgeError::parameter("eta", format!("{eta}, expected > 0")));
                }
                Ok(eta)
            }
        }
    }
}

/// Switch-probability schedule for Fixed Share.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AlphaSchedule {
    /// `alpha_t = 1/t` (so `alpha_1 = 1` and `w_1 = p_0`).
    InverseT,
    Constant(f64),
    /// 1-based values; must cover the horizon.
    Custom(Vec<f64>),
}

impl AlphaSchedule {
    pub fn value(&self, t: usize) -> f64 {
        match self {
            AlphaSchedule::InverseT => 1.0 / t as f64,
            AlphaSchedule::Constant(c) => *c,
            AlphaSchedule::Custom(v) => v[t - 1],
        }
    }

    pub fn check_horizon(&self, rounds: usize) -> Result<()> {
        if let AlphaSchedule::Custom(v) = self {
            if v.len() < rounds {
                return Err(HedgeError::parameter(
                    "alpha",
                    format!(
                        "custom schedule has {} entries for {} rounds",
                        v.len(),
                        rounds
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Per-run configuration.
#[derive(Debug, Clone)]
pub struct GameConfig {
    pub eta: EtaPolicy,
    /// `None` means uniform.
    pub prior: Option<SimplexWeights>,
    pub alpha: AlphaSchedule,
    pub h_bound: f64,
    /// Enable the Fixed Share memory-pruning trick. Off by default.
    pub prune: bool,
    /// Echoed into the trace for reproducibility bookkeeping.
    pub seed: Option<u64>,
}

impl GameConfig {
    pub fn new(h_bound: f64) -> Self {
        GameConfig {
            eta: EtaPolicy::Auto13,
            prior: None,
            alpha: AlphaSchedule::InverseT,
            h_bound,
            prune: false,
            seed: None,
        }
    }

    pub fn with_eta(mut self, eta: EtaPolicy) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_prior(mut self, prior: SimplexWeights) -> Self {
        self.prior = Some(prior);
        self
    }

    pub fn with_alpha(mut self, alpha: AlphaSchedule) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Learning rate(s) actually used, echoed in the trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EtaEcho {
    Single(f64),
    PerCopy(Vec<f64>),
}

/// Config echo serialized into output files.
#[derive(Debug, Clone, Serialize)]
pub struct TraceConfig {
    pub algorithm: &'static str,
    pub num_experts: usize,
    pub horizon: usize,
    pub eta: EtaEcho,
    pub h_bound: f64,
    pub prior: Vec<f64>,
    pub alpha: AlphaSchedule,
    pub seed: Option<u64>,
    pub clamped_delay_rounds: usize,
}

/// Full record of one game.
#[derive(Debug, Clone)]
pub struct GameTrace {
    weights: Vec<SimplexWeights>,
    round_losses: Vec<f64>,
    cumulative_loss: f64,
    expert_losses: Vec<f64>,
    delays: DelaySchedule,
    config: TraceConfig,
}

impl GameTrace {
    pub(crate) fn assemble(
        weights: Vec<SimplexWeights>,
        losses: &[LossVector],
        delays: DelaySchedule,
        config: TraceConfig,
    ) -> Self {
        let round_losses: Vec<f64> = weights.iter().zip(losses).map(|(w, l)| w.dot(l)).collect();
        let cumulative_loss = round_losses.iter().sum();
        let n = weights[0].len();
        let mut expert_losses = vec![0.0; n];
        for l in losses {
            for (acc, &v) in expert_losses.iter_mut().zip(l.as_slice()) {
                *acc += v;
            }
        }
        GameTrace {
            weights,
            round_losses,
            cumulative_loss,
            expert_losses,
            delays,
            config,
        }
    }

    pub fn horizon(&self) -> usize {
        self.weights.len()
    }

    pub fn num_experts(&self) -> usize {
        self.weights[0].len()
    }

    /// `w_t` (1-based).
    pub fn weights(&self, t: usize) -> &SimplexWeights {
        &self.weights[t - 1]
    }

    pub fn all_weights(&self) -> &[SimplexWeights] {
        &self.weights
    }

    /// `h_t = <w_t, l_t>` (1-based).
    pub fn round_loss(&self, t: usize) -> f64 {
        self.round_losses[t - 1]
    }

    pub fn round_losses(&self) -> &[f64] {
        &self.round_losses
    }

    /// `H_T`.
    pub fn cumulative_loss(&self) -> f64 {
        self.cumulative_loss
    }

    /// `L_T^n` per expert.
    pub fn expert_losses(&self) -> &[f64] {
        &self.expert_losses
    }

    pub fn delays(&self) -> &DelaySchedule {
        &self.delays
    }

    pub fn config(&self) -> &TraceConfig {
        &self.config
    }

    pub fn regret_vs_expert(&self, expert: usize) -> f64 {
        self.cumulative_loss - self.expert_losses[expert]
    }

    /// Regret against the best fixed expert; ties go to the lowest index.
    pub fn regret_vs_best_expert(&self) -> f64 {
        let best = self
            .expert_losses
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        self.cumulative_loss - best
    }

    /// Regret against an arbitrary comparator loss (e.g. the best K-switch
    /// sequence).
    pub fn regret_vs_loss(&self, comparator_loss: f64) -> f64 {
        self.cumulative_loss - comparator_loss
    }
}

fn validate_inputs(losses: &[LossVector], delays: &DelaySchedule, h_bound: f64) -> Result<usize> {
    if losses.is_empty() {
        return Err(HedgeError::Protocol("horizon zero".into()));
    }
    delays.check_horizon(losses.len())?;
    let n = losses[0].len();
    for (i, l) in losses.iter().enumerate() {
        if l.round() != i + 1 {
            return Err(HedgeError::Protocol(format!(
                "loss at position {i} carries round index {}, expected {}",
                l.round(),
                i + 1
            )));
        }
        if l.len() != n {
            return Err(HedgeError::Protocol(format!(
                "round {} has {} experts, expected {n}",
                l.round(),
                l.len()
            )));
        }
        for (expert, &v) in l.as_slice().iter().enumerate() {
            if v > h_bound {
                return Err(HedgeError::LossOutOfBounds {
                    round: l.round(),
                    expert,
                    value: v,
                    h_bound,
                });
            }
        }
    }
    Ok(n)
}

/// Runs one full game under the delayed-feedback protocol: at every round the
/// weight vector is emitted before any of that round's reveals are processed.
pub fn run_game(
    kind: AlgorithmKind,
    losses: &[LossVector],
    delays: &DelaySchedule,
    config: &GameConfig,
) -> Result<GameTrace> {
    let n = validate_inputs(losses, delays, config.h_bound)?;
    let t_max = losses.len();
    let prior = config
        .prior
        .clone()
        .unwrap_or_else(|| SimplexWeights::uniform(n));
    if prior.len() != n {
        return Err(HedgeError::parameter(
            "prior",
            format!("has {} entries for {} experts", prior.len(), n),
        ));
    }
    config.alpha.check_horizon(t_max)?;

    let (weights, eta_echo) = match kind {
        AlgorithmKind::Hedge => {
            let eta = config.eta.resolve(config.h_bound, n, t_max)?;
            let mut state = HedgeState::new(&prior, eta, config.h_bound)?;
            let mut weights = Vec::with_capacity(t_max);
            for t in 1..=t_max {
                weights.push(state.predict());
                for tau in delays.revealed_at(t) {
                    state.reveal(&losses[tau - 1])?;
                }
            }
            (weights, EtaEcho::Single(eta))
        }
        AlgorithmKind::FixedShare => {
            let eta = config.eta.resolve(config.h_bound, n, t_max)?;
            let mut state =
                FixedShareState::with_pruning(&prior, eta, config.h_bound, config.prune)?;
            let mut weights = Vec::with_capacity(t_max);
            for t in 1..=t_max {
                weights.push(state.predict(config.alpha.value(t))?);
                let batch: Vec<(usize, LossVector)> = delays
                    .revealed_at(t)
                    .into_iter()
                    .map(|tau| (tau, losses[tau - 1].clone()))
                    .collect();
                state.reveal_sweep(&batch)?;
            }
            (weights, EtaEcho::Single(eta))
        }
        AlgorithmKind::BoldHedge => {
            let (w, etas) = bold::bold_run(bold::BoldBase::Hedge, losses, delays, &prior, config)?;
            (w, EtaEcho::PerCopy(etas))
        }
        AlgorithmKind::BoldFixedShare => {
            let (w, etas) =
                bold::bold_run(bold::BoldBase::FixedShare, losses, delays, &prior, config)?;
            (w, EtaEcho::PerCopy(etas))
        }
    };

    let config_echo = TraceConfig {
        algorithm: kind.id(),
        num_experts: n,
        horizon: t_max,
        eta: eta_echo,
        h_bound: config.h_bound,
        prior: prior.as_slice().to_vec(),
        alpha: config.alpha.clone(),
        seed: config.seed,
        clamped_delay_rounds: delays.clamped_rounds(),
    };
    Ok(GameTrace::assemble(
        weights,
        losses,
        delays.clone(),
        config_echo,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern_losses(t_max: usize, n: usize, seed: u64) -> Vec<LossVector> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (1..=t_max)
            .map(|t| {
                LossVector::new(
                    t,
                    (0..n)
                        .map(|_| if rng.gen::<f64>() < 0.4 { 1.0 } else { 0.0 })
                        .collect(),
                    1.0,
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn single_expert_gets_all_weight() {
        let losses: Vec<LossVector> = (1..=5)
            .map(|t| LossVector::new(t, vec![0.5], 1.0).unwrap())
            .collect();
        let cfg = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(1.0));
        let trace = run_game(AlgorithmKind::Hedge, &losses, &DelaySchedule::zero(5), &cfg).unwrap();
        for t in 1..=5 {
            assert_eq!(trace.weights(t).as_slice(), &[1.0]);
        }
        assert!((trace.cumulative_loss() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn non_delayed_hedge_is_classical() {
        // w_t^n proportional to exp(-eta L_{t-1}^n)
        let losses = bern_losses(30, 3, 1);
        let eta = 0.5;
        let cfg = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(eta));
        let trace = run_game(
            AlgorithmKind::Hedge,
            &losses,
            &DelaySchedule::zero(30),
            &cfg,
        )
        .unwrap();
        let mut cum = [0.0; 3];
        for t in 1..=30 {
            let expect =
                SimplexWeights::from_log_weights(&cum.iter().map(|l| -eta * l).collect::<Vec<_>>());
            assert!(trace.weights(t).max_abs_diff(&expect) < 1e-12);
            for (c, &l) in cum.iter_mut().zip(losses[t - 1].as_slice()) {
                *c += l;
            }
        }
    }

    #[test]
    fn fs_with_zero_alpha_equals_hedge() {
        let losses = bern_losses(60, 4, 2);
        let delays = DelaySchedule::new((0..60).map(|i| (i * 7 % 5) as usize).collect::<Vec<_>>());
        let cfg_h = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(0.3));
        let cfg_f = cfg_h.clone().with_alpha(AlphaSchedule::Constant(0.0));
        let h = run_game(AlgorithmKind::Hedge, &losses, &delays, &cfg_h).unwrap();
        let f = run_game(AlgorithmKind::FixedShare, &losses, &delays, &cfg_f).unwrap();
        for t in 1..=60 {
            assert!(h.weights(t).max_abs_diff(f.weights(t)) < 1e-12);
        }
    }

    #[test]
    fn cumulative_loss_is_sum_of_round_losses() {
        let losses = bern_losses(40, 4, 3);
        let delays = DelaySchedule::fixed(3, 40);
        let cfg = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(0.2));
        let trace = run_game(AlgorithmKind::FixedShare, &losses, &delays, &cfg).unwrap();
        let sum: f64 = trace.round_losses().iter().sum();
        assert!((trace.cumulative_loss() - sum).abs() < 1e-9);
        for t in 1..=40 {
            let h = trace.round_loss(t);
            assert!((0.0..=1.0 + 1e-12).contains(&h));
        }
    }

    #[test]
    fn empty_game_is_rejected() {
        let cfg = GameConfig::new(1.0);
        let err = run_game(AlgorithmKind::Hedge, &[], &DelaySchedule::zero(0), &cfg).unwrap_err();
        assert!(err.to_string().contains("horizon zero"));
    }
}
