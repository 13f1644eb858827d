//! Evaluate the bound machinery: mixloss telescoping, per-step inequality,
//! delay-sum identity, and the sequence-probability lemma.

use hedgelab::bounds;
use hedgelab::env::{self, DelayModel};
use hedgelab::game::{run_game, AlgorithmKind, EtaPolicy, GameConfig};
use hedgelab::simplex::SimplexWeights;

fn main() -> hedgelab::Result<()> {
    let horizon = 2_000;
    let eta = 0.1;
    let losses = env::gen_iid_losses(&env::Q1, horizon, 5)?;
    let delays = env::gen_delays(&DelayModel::Fixed { delay: 5 }, horizon, 0)?;

    let cfg = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(eta));
    let trace = run_game(AlgorithmKind::Hedge, &losses, &delays, &cfg)?;

    let regret = trace.regret_vs_best_expert();
    let bound = bounds::hedge_regret_bound(eta, 1.0, horizon, delays.sum_delays(), 4)?;
    println!(
        "regret {regret:.2}  bound {bound:.2}  slack {:.2}",
        bound - regret
    );

    // per-step: h_t <= m_t + eta H^2 / 8 on the non-delayed run
    let nd = hedgelab::DelaySchedule::zero(horizon);
    let trace_nd = run_game(AlgorithmKind::Hedge, &losses, &nd, &cfg)?;
    let ok = bounds::check_per_step_hoeffding(&trace_nd, &losses, eta, 1.0, 1e-12);
    println!("per-step inequality holds on {horizon} rounds: {ok}");

    // exact combinatorial identity on reveal-set sizes vs delays
    println!(
        "delay-sum identity: {}",
        bounds::check_delay_sum_identity(&delays)
    );

    // one-sided total variation after a multiplicative decay
    let p = SimplexWeights::from_probs(vec![0.5, 0.3, 0.2])?;
    let c = 2.0;
    let a = [1.0, (-eta * c).exp(), (-eta).exp()];
    let cb = bounds::check_change_bound(&p, &a, eta, c)?;
    println!(
        "change bound: tv {:.4} <= {:.4} -> {}",
        cb.tv_distance,
        cb.bound,
        cb.holds(0.0)
    );

    // sequence probability vs (K+1)(ln N + ln T)
    let seq = [0, 0, 0, 2, 2, 1, 1, 1, 1, 1];
    let report = bounds::fs_sequence_prob_bound(&seq, 4);
    println!(
        "sequence -ln p {:.4} <= {:.4} (switches {})",
        report.empirical,
        report.bound,
        report.switches.unwrap()
    );
    Ok(())
}
