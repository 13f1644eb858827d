//! Exponential-weights forecasting under delayed feedback.
//!
//! The library implements Hedge and Fixed Share variants that tolerate
//! arbitrarily delayed loss reveals, a replicating baseline (BOLD) that runs
//! independent non-delayed copies on gap-respecting subsequences, exact
//! brute-force posterior oracles for cross-checking, evaluators for the
//! regret bounds, and a seeded benchmark harness with CSV output.
//!
//! Start with [`game::run_game`] for single runs or [`bench::run_sweep`] for
//! experiments; the `examples/` directory has one runnable program per major
//! capability.

// `!(x > 0.0)` deliberately rejects NaN together with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod bold;
pub mod bounds;
pub mod delay;
pub mod env;
pub mod error;
pub mod fixed_share;
pub mod game;
pub mod hedge;
pub mod oracle;
pub mod rates;
pub mod simplex;

pub use delay::DelaySchedule;
pub use error::{HedgeError, Result};
pub use game::{run_game, AlgorithmKind, AlphaSchedule, EtaPolicy, GameConfig, GameTrace};
pub use simplex::{LossVector, SimplexWeights};
