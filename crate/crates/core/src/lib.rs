//! Egalitarian bargaining in two-player repeated games with unknown
//! stochastic rewards: exact solvers for the maximin and egalitarian
//! bargaining solutions, an optimistic epoch-based learner, and an
//! experiment harness.

pub mod error;
pub mod game;
pub mod harness;
pub mod learner;
pub mod maximin;
pub mod opponents;
pub mod solution;
pub mod stats;

pub use error::{Error, Result};
pub use game::{GameSpec, JointAction, PlayerId, RewardDist, Table};
pub use solution::{ebs_solve, solve_game, CorrelatedPolicy, EbsSolution, ValuePair};
