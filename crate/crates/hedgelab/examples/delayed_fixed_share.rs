//! Track a switching best expert with Delayed Fixed Share, comparing against
//! the exact best 10-switch comparator found by dynamic programming.

use hedgelab::env::{self, DelayModel};
use hedgelab::game::{run_game, AlgorithmKind, EtaPolicy, GameConfig};
use hedgelab::oracle;
use hedgelab::rates;

fn main() -> hedgelab::Result<()> {
    let horizon = 5_000;
    let switches = 10;
    let lambda = 40.0;

    let data = env::gen_switching_losses(&env::Q2, switches, horizon, 7)?;
    let delays = env::gen_delays(&DelayModel::Poisson { lambda }, horizon, 8)?;

    let eta = rates::optimal_eta_fs(1.0, 4, horizon, lambda)?;
    let cfg = GameConfig::new(1.0)
        .with_eta(EtaPolicy::Explicit(eta))
        .with_seed(7);
    let trace = run_game(AlgorithmKind::FixedShare, &data.losses, &delays, &cfg)?;

    let (best_seq, best_loss) = oracle::best_switching_sequence(&data.losses, switches);
    let realized_switches = best_seq.windows(2).filter(|w| w[0] != w[1]).count();

    println!("planted switch rounds  {:?}", data.switch_rounds);
    println!("dp comparator switches {realized_switches}");
    println!("dp comparator loss     {best_loss:.2}");
    println!("cumulative loss        {:.2}", trace.cumulative_loss());
    println!(
        "tracking regret        {:.2}",
        trace.regret_vs_loss(best_loss)
    );
    println!(
        "regret (fixed expert)  {:.2}",
        trace.regret_vs_best_expert()
    );
    Ok(())
}
