//! Cross-check the incremental delayed algorithms against the brute-force
//! super-expert enumeration on a tiny instance.

use hedgelab::delay::DelaySchedule;
use hedgelab::game::{run_game, AlgorithmKind, AlphaSchedule, EtaPolicy, GameConfig};
use hedgelab::oracle::{enumerate_posterior, ChainPrior};
use hedgelab::simplex::{LossVector, SimplexWeights};

fn main() -> hedgelab::Result<()> {
    let eta = 1.0;
    let losses = vec![
        LossVector::new(1, vec![0.0, 1.0, 0.5], 1.0)?,
        LossVector::new(2, vec![1.0, 0.0, 0.5], 1.0)?,
        LossVector::new(3, vec![1.0, 0.0, 0.0], 1.0)?,
        LossVector::new(4, vec![0.5, 0.5, 1.0], 1.0)?,
        LossVector::new(5, vec![0.0, 1.0, 0.0], 1.0)?,
    ];
    let delays = DelaySchedule::new(vec![2, 0, 2, 1, 0]);
    let prior = SimplexWeights::uniform(3);

    let cfg = GameConfig::new(1.0).with_eta(EtaPolicy::Explicit(eta));
    let trace = run_game(AlgorithmKind::FixedShare, &losses, &delays, &cfg)?;
    let chain = ChainPrior::FixedShareChain {
        prior,
        alpha: AlphaSchedule::InverseT,
    };

    println!("round  incremental weights              enumeration            max|diff|");
    for t in 1..=losses.len() {
        let exact = enumerate_posterior(&chain, &losses, &delays, eta, t)?;
        let diff = trace.weights(t).max_abs_diff(&exact);
        println!(
            "{t:>5}  {:<32} {:<22} {diff:.2e}",
            format!("{:.4?}", trace.weights(t).as_slice()),
            format!("{:.4?}", exact.as_slice()),
        );
    }
    Ok(())
}
