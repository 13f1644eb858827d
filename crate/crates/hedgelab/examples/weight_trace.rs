//! Dump the weight evolution of the delayed tracker and its replicated
//! counterpart over the same window; the replicated weights are visibly
//! noisier because consecutive rounds belong to different copies.

use hedgelab::bench::write_weight_trace;
use hedgelab::env::{self, DelayModel};
use hedgelab::game::{run_game, AlgorithmKind, EtaPolicy, GameConfig};

fn main() -> hedgelab::Result<()> {
    let horizon = 5_000;
    let lambda = 40.0;
    let window = (2_100, 2_150);

    let data = env::gen_switching_losses(&env::Q2, 10, horizon, 11)?;
    let delays = env::gen_delays(&DelayModel::Poisson { lambda }, horizon, 12)?;
    let cfg = GameConfig::new(1.0)
        .with_eta(EtaPolicy::Auto14Fs {
            expected_delay: lambda,
        })
        .with_seed(11);

    for algo in [AlgorithmKind::FixedShare, AlgorithmKind::BoldFixedShare] {
        let trace = run_game(algo, &data.losses, &delays, &cfg)?;
        let path = std::env::temp_dir().join(format!("weights_{}.csv", algo.id()));
        let file = std::fs::File::create(&path)?;
        write_weight_trace(&trace, window, std::io::BufWriter::new(file))?;

        // largest round-to-round move inside the window, as a noise proxy
        let mut max_jump: f64 = 0.0;
        for t in window.0 + 1..=window.1 {
            max_jump = max_jump.max(trace.weights(t).max_abs_diff(trace.weights(t - 1)));
        }
        println!(
            "{:<10} wrote {}; max weight jump {max_jump:.4}",
            algo.id(),
            path.display()
        );
    }
    Ok(())
}
