//! Optimistic learning agent.
//!
//! Play proceeds in epochs. At the start of each epoch the agent freezes its
//! statistics, builds upper and lower reward tables and picks a policy for the
//! whole epoch; the epoch ends once the action just played has doubled its
//! count from the epoch start.
//!
//! In self-play both agents see the same history and run the same
//! deterministic computation, so they agree on the correlated policy and on
//! every scheduled joint action without communicating. In safety mode the
//! agent plays the maximin strategy of its upper reward table.

use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::game::{player_view, JointAction, PlayerId, RewardSample, Table};
use crate::maximin::{optimistic_maximin, solve_matrix_maximin, MixedStrategy};
use crate::solution::{advantage_means, ebs_solve, CorrelatedPolicy, ValuePair};
use crate::stats::{policy_radius, product_radius, BoundedGame, PlayStats};

/// Which rule produced an epoch's policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    EgalitarianPolicy,
    IdealOverride(PlayerId),
    EbsErrorAction,
    MaximinErrorAction(PlayerId),
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::EgalitarianPolicy => "egalitarian",
            Branch::IdealOverride(PlayerId::P1) => "ideal_p1",
            Branch::IdealOverride(PlayerId::P2) => "ideal_p2",
            Branch::EbsErrorAction => "ebs_error",
            Branch::MaximinErrorAction(PlayerId::P1) => "maximin_error_p1",
            Branch::MaximinErrorAction(PlayerId::P2) => "maximin_error_p2",
        }
    }

    /// True for the two branches that play an action because its
    /// confidence radius is too wide.
    pub fn is_error_branch(&self) -> bool {
        matches!(self, Branch::EbsErrorAction | Branch::MaximinErrorAction(_))
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Pessimistic maximin estimates used as the disagreement point.
    pub sv_check: ValuePair,
    /// Advantage of the optimistic EBS policy in the optimistic game.
    pub ebs_advantage: ValuePair,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyDecision {
    pub policy: CorrelatedPolicy,
    pub branch: Branch,
    pub diagnostics: Diagnostics,
}

/// Everything the policy computation reads from the statistics.
#[derive(Clone, Debug)]
pub struct EpochView {
    pub bounds: BoundedGame,
    pub radii: Table,
    pub epsilon: f64,
}

impl EpochView {
    pub fn from_stats(stats: &PlayStats) -> Self {
        EpochView {
            bounds: stats.bounded_game(),
            radii: stats.radius_table(),
            epsilon: stats.epsilon(),
        }
    }
}

pub fn compute_epoch_policy(stats: &PlayStats) -> Result<PolicyDecision> {
    decide(&EpochView::from_stats(stats))
}

/// Largest weight among actions whose radius exceeds `epsilon`, falling back
/// to a radius above `epsilon / 2`. Ties go to the smallest joint action.
fn responsible_action(
    weights: impl Iterator<Item = (JointAction, f64)>,
    radii: &Table,
    epsilon: f64,
) -> Option<JointAction> {
    let weights: Vec<(JointAction, f64)> = weights.filter(|&(_, w)| w > 0.0).collect();
    let argmax = |threshold: f64| {
        let mut best: Option<(JointAction, f64)> = None;
        for &(a, w) in weights.iter().filter(|&&(a, _)| radii[a] > threshold) {
            let replace = match best {
                None => true,
                Some((ba, bw)) => w > bw || (w == bw && a < ba),
            };
            if replace {
                best = Some((a, w));
            }
        }
        best.map(|(a, _)| a)
    };
    argmax(epsilon).or_else(|| argmax(epsilon / 2.0))
}

/// Optimistic EBS policy with its three overrides, applied in order so that
/// later ones take precedence.
pub fn decide(view: &EpochView) -> Result<PolicyDecision> {
    let BoundedGame { upper, lower } = &view.bounds;
    let eps = view.epsilon;

    let maximin = [
        optimistic_maximin(
            &player_view(&upper[0], PlayerId::P1),
            &player_view(&lower[0], PlayerId::P1),
            PlayerId::P1,
        )?,
        optimistic_maximin(
            &player_view(&upper[1], PlayerId::P2),
            &player_view(&lower[1], PlayerId::P2),
            PlayerId::P2,
        )?,
    ];
    let sv_check = ValuePair::new(maximin[0].sv_check, maximin[1].sv_check);

    // Optimistic game, advantage taken over the pessimistic maximin.
    let ebs = ebs_solve(upper, sv_check);
    let adv = advantage_means(upper, sv_check);
    let v_plus = ebs.egalitarian_advantage;

    let mut policy = ebs.policy.clone();
    let mut branch = Branch::EgalitarianPolicy;

    // Actions keeping player i within epsilon of its EBS advantage.
    let near_ebs = |i: PlayerId| -> Vec<JointAction> {
        adv[i.index()]
            .iter()
            .filter(|&(_, r)| r + eps >= v_plus.get(i) && r >= 0.0)
            .map(|(a, _)| a)
            .collect()
    };
    let near = [near_ebs(PlayerId::P1), near_ebs(PlayerId::P2)];
    // Player i's ideal action among those acceptable to the other player.
    let ideal = |i: PlayerId| -> Option<(JointAction, f64)> {
        let mut best: Option<(JointAction, f64)> = None;
        for &a in &near[i.other().index()] {
            let r = adv[i.index()][a];
            if best.is_none_or(|(_, br)| r > br) {
                best = Some((a, r));
            }
        }
        best
    };
    let mut chosen: Option<(PlayerId, JointAction, f64)> = None;
    for i in PlayerId::BOTH {
        if let Some((a, r)) = ideal(i) {
            if r > v_plus.get(i) && chosen.is_none_or(|(_, _, br)| r > br) {
                chosen = Some((i, a, r));
            }
        }
    }
    if let Some((i, a, _)) = chosen {
        policy = CorrelatedPolicy::point(a);
        branch = Branch::IdealOverride(i);
    }

    if 2.0 * policy_radius(&view.radii, &ebs.policy) > eps {
        if let Some(a) = responsible_action(ebs.policy.support(), &view.radii, eps) {
            policy = CorrelatedPolicy::point(a);
            branch = Branch::EbsErrorAction;
        }
    }

    for (i, om) in PlayerId::BOTH.into_iter().zip(&maximin) {
        if 2.0 * product_radius(&view.radii, &om.strategy, om.response) > eps {
            if let Some(a) = responsible_action(om.joint_weights(), &view.radii, eps) {
                policy = CorrelatedPolicy::point(a);
                branch = Branch::MaximinErrorAction(i);
            }
        }
    }

    Ok(PolicyDecision {
        policy,
        branch,
        diagnostics: Diagnostics {
            sv_check,
            ebs_advantage: v_plus,
            epsilon: eps,
        },
    })
}

/// Deficit-greedy scheduler: the supported action whose target probability
/// most exceeds its in-epoch frequency. Ties go to the smallest joint action.
pub fn next_action(
    policy: &CorrelatedPolicy,
    epoch_count: impl Fn(JointAction) -> u64,
    epoch_len: u64,
) -> JointAction {
    let denom = epoch_len.max(1) as f64;
    let mut best: Option<(JointAction, f64)> = None;
    for (a, p) in policy.support() {
        let deficit = p - epoch_count(a) as f64 / denom;
        if best.is_none_or(|(_, d)| deficit > d) {
            best = Some((a, deficit));
        }
    }
    best.expect("policies have nonempty support").0
}

/// Maximin strategy of `p`'s upper reward table.
pub fn safety_policy(stats: &PlayStats, p: PlayerId) -> Result<MixedStrategy> {
    let upper = &stats.bounded_game().upper[p.index()];
    Ok(solve_matrix_maximin(&player_view(upper, p), p)?.strategy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerMode {
    SelfPlayEbs,
    SafetyMaximin,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EpochPolicy {
    Correlated(PolicyDecision),
    Safety(MixedStrategy),
}

#[derive(Clone, Debug)]
pub struct Agent {
    mode: LearnerMode,
    player: PlayerId,
    stats: PlayStats,
    policy: EpochPolicy,
}

impl Agent {
    pub fn new(mode: LearnerMode, player: PlayerId, stats: PlayStats) -> Result<Self> {
        let policy = Self::plan(mode, player, &stats)?;
        Ok(Agent {
            mode,
            player,
            stats,
            policy,
        })
    }

    fn plan(mode: LearnerMode, player: PlayerId, stats: &PlayStats) -> Result<EpochPolicy> {
        Ok(match mode {
            LearnerMode::SelfPlayEbs => EpochPolicy::Correlated(compute_epoch_policy(stats)?),
            LearnerMode::SafetyMaximin => EpochPolicy::Safety(safety_policy(stats, player)?),
        })
    }

    pub fn mode(&self) -> LearnerMode {
        self.mode
    }

    pub fn player(&self) -> PlayerId {
        self.player
    }

    pub fn stats(&self) -> &PlayStats {
        &self.stats
    }

    pub fn policy(&self) -> &EpochPolicy {
        &self.policy
    }

    pub fn decision(&self) -> Option<&PolicyDecision> {
        match &self.policy {
            EpochPolicy::Correlated(d) => Some(d),
            EpochPolicy::Safety(_) => None,
        }
    }

    /// The mixed strategy an outside observer may know (safety mode only).
    pub fn public_strategy(&self) -> Option<&MixedStrategy> {
        match &self.policy {
            EpochPolicy::Safety(s) => Some(s),
            EpochPolicy::Correlated(_) => None,
        }
    }

    pub fn branch_tag(&self) -> &'static str {
        match &self.policy {
            EpochPolicy::Correlated(d) => d.branch.tag(),
            EpochPolicy::Safety(_) => "safety",
        }
    }

    /// Scheduled joint action for the coming round (self-play).
    pub fn scheduled(&self) -> Option<JointAction> {
        self.decision().map(|d| {
            next_action(
                &d.policy,
                |a| self.stats.epoch_count(a),
                self.stats.epoch_len(),
            )
        })
    }

    /// This agent's own action for the coming round. Self-play agents take
    /// their component of the scheduled joint action; safety agents sample
    /// from their strategy with their private random source.
    pub fn act<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.policy {
            EpochPolicy::Correlated(d) => next_action(
                &d.policy,
                |a| self.stats.epoch_count(a),
                self.stats.epoch_len(),
            )
            .of(self.player),
            EpochPolicy::Safety(s) => sample_index(&s.probs, rng),
        }
    }

    /// Records the round's joint action and rewards (unit scale). Returns
    /// true when this round closed the epoch and a new policy was computed.
    pub fn observe(&mut self, a: JointAction, sample: RewardSample) -> Result<bool> {
        self.stats.update(a, sample)?;
        if !self.stats.epoch_complete(a) {
            return Ok(false);
        }
        self.stats.start_epoch();
        self.policy = Self::plan(self.mode, self.player, &self.stats)?;
        Ok(true)
    }
}

/// Inverse-CDF draw; falls back to the last supported index on rounding.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}
