//! Run Delayed Hedge on iid Bernoulli losses with Poisson delays and compare
//! the realized regret with the theoretical bound.

use hedgelab::bounds;
use hedgelab::env::{self, DelayModel};
use hedgelab::game::{run_game, AlgorithmKind, EtaPolicy, GameConfig};

fn main() -> hedgelab::Result<()> {
    let horizon = 5_000;
    let lambda = 25.0;

    let losses = env::gen_iid_losses(&env::Q2, horizon, 1)?;
    let delays = env::gen_delays(&DelayModel::Poisson { lambda }, horizon, 2)?;

    let cfg = GameConfig::new(1.0)
        .with_eta(EtaPolicy::Auto14 {
            expected_delay: lambda,
        })
        .with_seed(1);
    let trace = run_game(AlgorithmKind::Hedge, &losses, &delays, &cfg)?;

    let regret = trace.regret_vs_best_expert();
    let eta = match trace.config().eta {
        hedgelab::game::EtaEcho::Single(e) => e,
        _ => unreachable!(),
    };
    let bound = bounds::hedge_regret_bound(eta, 1.0, horizon, delays.sum_delays(), 4)?;

    println!("horizon            {horizon}");
    println!("expected delay     {lambda}");
    println!("learning rate      {eta:.5}");
    println!("cumulative loss    {:.2}", trace.cumulative_loss());
    println!("expert losses      {:?}", trace.expert_losses());
    println!("regret (best)      {regret:.2}");
    println!("regret bound       {bound:.2}");
    Ok(())
}
