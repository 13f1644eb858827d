//! Randomized invariants over the core update rules.

use proptest::prelude::*;

use hedgelab::bounds;
use hedgelab::delay::DelaySchedule;
use hedgelab::fixed_share::FixedShareState;
use hedgelab::game::{run_game, AlgorithmKind, EtaPolicy, GameConfig};
use hedgelab::hedge::HedgeState;
use hedgelab::simplex::{LossVector, SimplexWeights};

fn losses_strategy(n: usize, t_max: usize) -> impl Strategy<Value = Vec<LossVector>> {
    proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, n), t_max).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, row)| LossVector::new(i + 1, row, 1.0).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // adding a constant to every expert's loss leaves the weights unchanged
    #[test]
    fn shift_invariance(
        base in proptest::collection::vec(0.0f64..=0.5, 4),
        shift in 0.0f64..=0.5,
        eta in 0.05f64..3.0,
    ) {
        let prior = SimplexWeights::uniform(4);
        let mut a = HedgeState::new(&prior, eta, 1.0).unwrap();
        let mut b = HedgeState::new(&prior, eta, 1.0).unwrap();
        a.reveal(&LossVector::new(1, base.clone(), 1.0).unwrap()).unwrap();
        b.reveal(
            &LossVector::new(1, base.iter().map(|l| l + shift).collect(), 1.0).unwrap(),
        )
        .unwrap();
        prop_assert!(a.predict().max_abs_diff(&b.predict()) < 1e-12);
    }

    // every emitted weight vector is a valid simplex point
    #[test]
    fn weights_stay_on_simplex(
        seed in 0u64..10_000,
        eta in 0.05f64..3.0,
        alpha_num in 0u32..=10,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t_max = 40;
        let losses: Vec<LossVector> = (1..=t_max)
            .map(|t| LossVector::new(t, (0..3).map(|_| rng.gen()).collect(), 1.0).unwrap())
            .collect();
        let delays = DelaySchedule::new((0..t_max).map(|_| rng.gen_range(0..10)).collect());
        let cfg = GameConfig::new(1.0)
            .with_eta(EtaPolicy::Explicit(eta))
            .with_alpha(hedgelab::game::AlphaSchedule::Constant(alpha_num as f64 / 10.0));
        for kind in [
            AlgorithmKind::Hedge,
            AlgorithmKind::FixedShare,
            AlgorithmKind::BoldHedge,
            AlgorithmKind::BoldFixedShare,
        ] {
            let trace = run_game(kind, &losses, &delays, &cfg).unwrap();
            for t in 1..=t_max {
                let w = trace.weights(t);
                let sum: f64 = w.iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-9);
                prop_assert!(w.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
            }
        }
    }

    // the posterior after a batch of reveals is independent of their order
    #[test]
    fn reveal_order_is_irrelevant(
        losses in losses_strategy(3, 8),
        perm_seed in 0u64..1_000,
        eta in 0.05f64..3.0,
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let prior = SimplexWeights::uniform(3);

        let mut fwd = FixedShareState::new(&prior, eta, 1.0).unwrap();
        let mut shuf = FixedShareState::new(&prior, eta, 1.0).unwrap();
        for t in 1..=8 {
            fwd.predict(1.0 / t as f64).unwrap();
            shuf.predict(1.0 / t as f64).unwrap();
        }
        let batch: Vec<(usize, LossVector)> = losses
            .iter()
            .enumerate()
            .map(|(i, l)| (i + 1, l.clone()))
            .collect();
        let mut shuffled = batch.clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        shuffled.shuffle(&mut rng);

        fwd.reveal_sweep(&batch).unwrap();
        shuf.reveal_sweep(&shuffled).unwrap();
        for tau in 1..=8 {
            let a = fwd.posterior(tau).unwrap();
            let b = shuf.posterior(tau).unwrap();
            // the sweep canonicalizes the order, so this is exact
            prop_assert!(a.max_abs_diff(b) == 0.0);
        }
    }

    // mixloss never exceeds the expected loss
    #[test]
    fn mixloss_dominated_by_expected_loss(
        raw in proptest::collection::vec(1e-3f64..1.0, 2..6),
        eta in 0.05f64..3.0,
    ) {
        let w = SimplexWeights::from_unnormalized(&raw);
        let l = LossVector::new(
            1,
            raw.iter().map(|x| (x * 7.13).fract()).collect(),
            1.0,
        )
        .unwrap();
        let m = bounds::mixloss(&w, &l, eta);
        prop_assert!(m <= w.dot(&l) + 1e-12);
    }
}
