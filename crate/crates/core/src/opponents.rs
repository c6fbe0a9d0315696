//! Non-learning opponents for safety experiments.

use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{player_view, GameSpec, PlayerId};
use crate::learner::sample_index;
use crate::maximin::{best_response_value, MixedStrategy};

#[derive(Clone, Debug, PartialEq)]
pub enum OpponentKind {
    FixedStationary(MixedStrategy),
    UniformRandom,
    /// Knows the true means and the agent's current mixed strategy, but not
    /// the agent's sampled action; minimizes the agent's expected reward.
    OmniscientAdversary,
}

impl OpponentKind {
    /// Tag used in summaries and on the command line.
    pub fn name(&self) -> String {
        match self {
            OpponentKind::FixedStationary(s) => {
                let probs: Vec<String> = s.probs.iter().map(f64::to_string).collect();
                format!("fixed:{}", probs.join(","))
            }
            OpponentKind::UniformRandom => "uniform".into(),
            OpponentKind::OmniscientAdversary => "adversary".into(),
        }
    }
}

impl FromStr for OpponentKind {
    type Err = Error;

    /// `uniform`, `adversary`, or `fixed:p0,p1,...` over the opponent's
    /// actions. The owner of a fixed strategy is set when play starts.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(OpponentKind::UniformRandom),
            "adversary" => Ok(OpponentKind::OmniscientAdversary),
            _ => {
                let list = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown opponent {s:?}")))?;
                let probs = list
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<f64>().map_err(|e| {
                            Error::InvalidConfig(format!("opponent probability {p:?}: {e}"))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(OpponentKind::FixedStationary(MixedStrategy::new(
                    PlayerId::P2,
                    probs,
                )?))
            }
        }
    }
}

/// Action of the opponent of `agent_policy.owner`.
pub fn opponent_act<R: Rng + ?Sized>(
    kind: &OpponentKind,
    game: &GameSpec,
    agent_policy: &MixedStrategy,
    rng: &mut R,
) -> usize {
    let agent = agent_policy.owner;
    let n_opp = match agent.other() {
        PlayerId::P1 => game.n1(),
        PlayerId::P2 => game.n2(),
    };
    match kind {
        OpponentKind::FixedStationary(s) => {
            debug_assert_eq!(s.len(), n_opp);
            sample_index(&s.probs, rng)
        }
        OpponentKind::UniformRandom => rng.random_range(0..n_opp),
        OpponentKind::OmniscientAdversary => {
            best_response_value(&player_view(game.mean(agent), agent), agent_policy).0
        }
    }
}
