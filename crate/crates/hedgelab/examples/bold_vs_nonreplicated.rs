//! Mini sweep over delay intensities: the non-replicated delayed learner
//! versus the replicating BOLD baseline, paired on shared realizations.

use hedgelab::bench::{run_sweep, EtaSpec, ExperimentConfig, SweepPoint};
use hedgelab::bold;
use hedgelab::delay::DelaySchedule;
use hedgelab::env::{self, DelayModel, LossModel};
use hedgelab::game::AlgorithmKind;

fn main() -> hedgelab::Result<()> {
    // partition structure for a fixed delay: D + 1 interleaved copies
    let partition = bold::bold_partition(&DelaySchedule::fixed(3, 12));
    println!("partition of 12 rounds with D=3:");
    for (i, sub) in partition.iter().enumerate() {
        println!("  copy {i}: {sub:?}");
    }

    let mut config = ExperimentConfig::new(
        LossModel::IidBernoulli {
            q: env::Q2.to_vec(),
        },
        [5.0, 20.0, 60.0]
            .iter()
            .map(|&lambda| SweepPoint::new(DelayModel::Poisson { lambda }))
            .collect(),
    );
    config.algos = vec![AlgorithmKind::Hedge, AlgorithmKind::BoldHedge];
    config.horizon = 2_000;
    config.reps = 30;
    config.seed = 3;
    config.eta = EtaSpec::Auto14;

    let result = run_sweep(&config)?;
    println!("\nmean regret vs best expert ({} reps):", config.reps);
    println!("{:>8} {:>12} {:>12}", "lambda", "hedge", "bold-hedge");
    for point in &config.points {
        let mean = |algo: &str| {
            result
                .summary
                .iter()
                .find(|s| s.lambda == point.label && s.algo == algo)
                .unwrap()
                .mean_regret_best
        };
        println!(
            "{:>8} {:>12.2} {:>12.2}",
            point.label,
            mean("hedge"),
            mean("bold-hedge")
        );
    }
    Ok(())
}
