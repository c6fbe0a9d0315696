//! Maximin-relative bargaining: the advantage game and the egalitarian
//! bargaining solution (EBS) of a game with known mean rewards.
//!
//! An EBS policy never needs more than two joint actions, so the exact solver
//! enumerates ordered pairs `(a, a')` and, for each, the mixing weight that
//! equalizes the two players' advantages when that is possible. Pairs are
//! ranked with the lexicographic maximin order: larger minimum advantage
//! first, then larger maximum advantage.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use serde::Serialize;

use crate::error::Result;
use crate::game::{player_view, JointAction, Payoffs, PlayerId, Table};
use crate::maximin::solve_matrix_maximin;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize)]
pub struct ValuePair {
    pub v1: f64,
    pub v2: f64,
}

impl ValuePair {
    pub fn new(v1: f64, v2: f64) -> Self {
        ValuePair { v1, v2 }
    }

    pub fn splat(v: f64) -> Self {
        ValuePair { v1: v, v2: v }
    }

    pub fn get(&self, p: PlayerId) -> f64 {
        match p {
            PlayerId::P1 => self.v1,
            PlayerId::P2 => self.v2,
        }
    }

    pub fn min(&self) -> f64 {
        self.v1.min(self.v2)
    }

    pub fn max(&self) -> f64 {
        self.v1.max(self.v2)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ValuePair {
        ValuePair::new(f(self.v1), f(self.v2))
    }
}

impl Add for ValuePair {
    type Output = ValuePair;

    fn add(self, rhs: ValuePair) -> ValuePair {
        ValuePair::new(self.v1 + rhs.v1, self.v2 + rhs.v2)
    }
}

impl Sub for ValuePair {
    type Output = ValuePair;

    fn sub(self, rhs: ValuePair) -> ValuePair {
        ValuePair::new(self.v1 - rhs.v1, self.v2 - rhs.v2)
    }
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Lexicographic maximin order: compare the smaller coordinates, then the
/// larger ones. Pairs that are permutations of each other compare equal.
pub fn lex_compare(x: ValuePair, y: ValuePair) -> Ordering {
    cmp_f64(x.min(), y.min()).then_with(|| cmp_f64(x.max(), y.max()))
}

/// A probability distribution over joint actions shared by both players.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatedPolicy {
    probs: BTreeMap<JointAction, f64>,
}

impl CorrelatedPolicy {
    pub fn point(a: JointAction) -> Self {
        CorrelatedPolicy {
            probs: BTreeMap::from([(a, 1.0)]),
        }
    }

    /// `w` on `a`, `1 - w` on `b`. Zero-probability entries are dropped.
    pub fn mixture(a: JointAction, b: JointAction, w: f64) -> Self {
        if a == b || w >= 1.0 {
            return Self::point(a);
        }
        if w <= 0.0 {
            return Self::point(b);
        }
        CorrelatedPolicy {
            probs: BTreeMap::from([(a, w), (b, 1.0 - w)]),
        }
    }

    /// Builds a policy from explicit probabilities; returns `None` unless they
    /// are nonnegative and sum to one within `1e-12`.
    pub fn from_probs(probs: impl IntoIterator<Item = (JointAction, f64)>) -> Option<Self> {
        let mut map = BTreeMap::new();
        for (a, p) in probs {
            if !(p.is_finite() && p >= 0.0) {
                return None;
            }
            if p > 0.0 {
                *map.entry(a).or_insert(0.0) += p;
            }
        }
        let total: f64 = map.values().sum();
        ((total - 1.0).abs() <= 1e-12).then_some(CorrelatedPolicy { probs: map })
    }

    pub fn prob(&self, a: JointAction) -> f64 {
        self.probs.get(&a).copied().unwrap_or(0.0)
    }

    /// Support in lexicographic joint-action order.
    pub fn support(&self) -> impl Iterator<Item = (JointAction, f64)> + '_ {
        self.probs.iter().map(|(&a, &p)| (a, p))
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn expected(&self, table: &Table) -> f64 {
        self.support().map(|(a, p)| p * table[a]).sum()
    }

    pub fn value(&self, payoffs: &Payoffs) -> ValuePair {
        ValuePair::new(self.expected(&payoffs[0]), self.expected(&payoffs[1]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EbsSolution {
    pub maximin: ValuePair,
    pub ebs_value: ValuePair,
    pub egalitarian_advantage: ValuePair,
    /// The two mixed joint actions; equal when the policy is pure.
    pub support: (JointAction, JointAction),
    /// Probability of `support.0`.
    pub weight: f64,
    pub policy: CorrelatedPolicy,
}

impl EbsSolution {
    fn from_mixture(
        adv: &Payoffs,
        maximin: ValuePair,
        a: JointAction,
        b: JointAction,
        w: f64,
    ) -> Self {
        let (a, b, w) = if a == b || w >= 1.0 {
            (a, a, 1.0)
        } else if w <= 0.0 {
            (b, b, 1.0)
        } else {
            (a, b, w)
        };
        let mixed = mix(adv, a, b, w);
        EbsSolution {
            maximin,
            ebs_value: maximin + mixed,
            egalitarian_advantage: mixed,
            support: (a, b),
            weight: w,
            policy: CorrelatedPolicy::mixture(a, b, w),
        }
    }
}

/// Subtracts each player's maximin value from that player's table.
pub fn advantage_means(means: &Payoffs, maximin: ValuePair) -> Payoffs {
    [
        means[0].map(|r| r - maximin.v1),
        means[1].map(|r| r - maximin.v2),
    ]
}

fn mix(adv: &Payoffs, a: JointAction, b: JointAction, w: f64) -> ValuePair {
    ValuePair::new(
        w * adv[0][a] + (1.0 - w) * adv[0][b],
        w * adv[1][a] + (1.0 - w) * adv[1][b],
    )
}

/// Weight on `a` when mixing `a` and `b` in the advantage game.
///
/// If both actions weakly favor player 2 the weight is 0, if both weakly favor
/// player 1 it is 1; the cases are checked in that order. Otherwise the weight
/// equalizes the two players' mixed advantages.
pub fn pair_weight(adv: &Payoffs, a: JointAction, b: JointAction) -> f64 {
    let (x1, x2) = (adv[0][a], adv[1][a]);
    let (y1, y2) = (adv[0][b], adv[1][b]);
    if x1 <= x2 && y1 <= y2 {
        return 0.0;
    }
    if x1 >= x2 && y1 >= y2 {
        return 1.0;
    }
    let denom = (x1 - y1) + (y2 - x2);
    if denom == 0.0 {
        return 0.0;
    }
    ((y2 - y1) / denom).clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairScore {
    pub weight: f64,
    /// Smaller of the two mixed advantages.
    pub min_score: f64,
    /// Larger of the two mixed advantages.
    pub tiebreak_max: f64,
}

pub fn pair_score(adv: &Payoffs, a: JointAction, b: JointAction) -> PairScore {
    let weight = pair_weight(adv, a, b);
    let mixed = mix(adv, a, b, weight);
    PairScore {
        weight,
        min_score: mixed.min(),
        tiebreak_max: mixed.max(),
    }
}

/// Exact EBS of the game `means` relative to the disagreement point `maximin`.
///
/// Scores within a relative `1e-12` count as ties so that mirrored pairs
/// `(a, b, w)` and `(b, a, 1 - w)` resolve to the first in enumeration order.
pub fn ebs_solve(means: &Payoffs, maximin: ValuePair) -> EbsSolution {
    let adv = advantage_means(means, maximin);
    let spread = adv
        .iter()
        .flat_map(|t| t.values().iter())
        .fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-12 * spread;

    let actions: Vec<JointAction> = adv[0].actions().collect();
    let mut best: Option<(JointAction, JointAction, PairScore)> = None;
    for &a in &actions {
        for &b in &actions {
            let score = pair_score(&adv, a, b);
            let better = match &best {
                None => true,
                Some((_, _, top)) => {
                    score.min_score > top.min_score + tol
                        || ((score.min_score - top.min_score).abs() <= tol
                            && score.tiebreak_max > top.tiebreak_max + tol)
                }
            };
            if better {
                best = Some((a, b, score));
            }
        }
    }
    let (a, b, score) = best.expect("a game has at least one joint action");
    EbsSolution::from_mixture(&adv, maximin, a, b, score.weight)
}

/// Brute-force EBS over every pair of joint actions and every weight on a grid
/// of step at most `w_step`. Independent of [`pair_weight`]; used to check
/// [`ebs_solve`].
pub fn ebs_oracle_grid(means: &Payoffs, maximin: ValuePair, w_step: f64) -> EbsSolution {
    assert!(w_step > 0.0 && w_step <= 1.0, "w_step must lie in (0, 1]");
    let adv = advantage_means(means, maximin);
    let steps = (1.0 / w_step).ceil() as u64;
    let actions: Vec<JointAction> = adv[0].actions().collect();

    let mut best: Option<(JointAction, JointAction, f64, ValuePair)> = None;
    for (i, &a) in actions.iter().enumerate() {
        for &b in &actions[i..] {
            for k in 0..=steps {
                let w = k as f64 / steps as f64;
                let mixed = mix(&adv, a, b, w);
                if best
                    .as_ref()
                    .is_none_or(|&(_, _, _, top)| lex_compare(mixed, top) == Ordering::Greater)
                {
                    best = Some((a, b, w, mixed));
                }
            }
        }
    }
    let (a, b, w, _) = best.expect("a game has at least one joint action");
    EbsSolution::from_mixture(&adv, maximin, a, b, w)
}

/// Maximin values of both players, each computed on that player's own view.
pub fn maximin_pair(means: &Payoffs) -> Result<ValuePair> {
    let v1 = solve_matrix_maximin(&player_view(&means[0], PlayerId::P1), PlayerId::P1)?.value;
    let v2 = solve_matrix_maximin(&player_view(&means[1], PlayerId::P2), PlayerId::P2)?.value;
    Ok(ValuePair::new(v1, v2))
}

/// Maximin pair followed by the exact EBS relative to it.
pub fn solve_game(means: &Payoffs) -> Result<EbsSolution> {
    Ok(ebs_solve(means, maximin_pair(means)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::table1_game;

    const CC: JointAction = JointAction { a1: 0, a2: 0 };
    const CD: JointAction = JointAction { a1: 0, a2: 1 };
    const DC: JointAction = JointAction { a1: 1, a2: 0 };

    fn table1_adv() -> Payoffs {
        advantage_means(table1_game().means(), ValuePair::splat(0.3))
    }

    fn table_pair(m1: Vec<Vec<f64>>, m2: Vec<Vec<f64>>) -> Payoffs {
        [Table::from_rows(m1).unwrap(), Table::from_rows(m2).unwrap()]
    }

    #[test]
    fn lex_compare_examples() {
        let p = ValuePair::new;
        assert_eq!(lex_compare(p(0.5, 0.5), p(0.3, 0.9)), Ordering::Greater);
        assert_eq!(lex_compare(p(0.3, 0.9), p(0.9, 0.3)), Ordering::Equal);
        assert_eq!(lex_compare(p(0.3, 0.9), p(0.3, 0.8)), Ordering::Greater);
        assert_eq!(lex_compare(p(0.3, 0.8), p(0.3, 0.9)), Ordering::Less);
    }

    #[test]
    fn advantage_of_table1() {
        let adv = table1_adv();
        let at = |a| (adv[0][a], adv[1][a]);
        let close =
            |x: (f64, f64), y: (f64, f64)| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12;
        assert!(close(at(CD), (-0.2, 1.5)));
        assert!(close(at(DC), (1.5, -0.3)));
        let same = advantage_means(table1_game().means(), ValuePair::default());
        assert_eq!(&same, table1_game().means());
    }

    #[test]
    fn table1_pair_weight_and_score() {
        let adv = table1_adv();
        let w = pair_weight(&adv, DC, CD);
        assert!((w - 17.0 / 35.0).abs() < 1e-12, "{w}");
        let s = pair_score(&adv, DC, CD);
        assert!((s.min_score - 21.9 / 35.0).abs() < 1e-12);
        // The ratio case equalizes both players.
        assert!((s.tiebreak_max - s.min_score).abs() < 1e-12);
        let cc = pair_score(&adv, CC, CC);
        assert!((cc.min_score - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pair_weight_same_side_cases() {
        let adv = table_pair(vec![vec![0.1, 0.2]], vec![vec![0.4, 0.9]]);
        let (a, b) = (JointAction::new(0, 0), JointAction::new(0, 1));
        assert_eq!(pair_weight(&adv, a, b), 0.0);
        let adv = table_pair(vec![vec![0.5, 0.9]], vec![vec![0.4, 0.2]]);
        assert_eq!(pair_weight(&adv, a, b), 1.0);
        // Equal coordinates satisfy both conditions; the first case wins.
        let adv = table_pair(vec![vec![0.3, 0.6]], vec![vec![0.3, 0.6]]);
        assert_eq!(pair_weight(&adv, a, b), 0.0);
    }

    #[test]
    fn pair_score_of_a_point_is_its_min() {
        let adv = table1_adv();
        for a in adv[0].actions() {
            let s = pair_score(&adv, a, a);
            assert_eq!(s.min_score, adv[0][a].min(adv[1][a]));
        }
    }

    #[test]
    fn ebs_of_table1() {
        let sol = ebs_solve(table1_game().means(), ValuePair::splat(0.3));
        assert!((sol.policy.prob(DC) - 17.0 / 35.0).abs() < 1e-12);
        assert!((sol.policy.prob(CD) - 18.0 / 35.0).abs() < 1e-12);
        assert_eq!(sol.policy.support_len(), 2);
        assert!((sol.ebs_value.v1 - 162.0 / 175.0).abs() < 1e-12);
        assert!((sol.ebs_value.v2 - 162.0 / 175.0).abs() < 1e-12);
        let direct = sol.policy.value(table1_game().means());
        assert!((direct.v1 - sol.ebs_value.v1).abs() < 1e-12);
    }

    #[test]
    fn ebs_of_single_cell() {
        let means = table_pair(vec![vec![0.4]], vec![vec![0.7]]);
        let sol = ebs_solve(&means, ValuePair::new(0.4, 0.7));
        assert_eq!(sol.ebs_value, ValuePair::new(0.4, 0.7));
        assert_eq!(sol.weight, 1.0);
        assert_eq!(sol.support, (CC, CC));
    }

    #[test]
    fn ebs_prefers_larger_max_on_equal_min() {
        let means = table_pair(vec![vec![0.5, 0.5]], vec![vec![0.5, 0.9]]);
        let sol = ebs_solve(&means, ValuePair::default());
        assert_eq!(sol.policy, CorrelatedPolicy::point(JointAction::new(0, 1)));
        assert_eq!(sol.ebs_value, ValuePair::new(0.5, 0.9));
    }

    #[test]
    fn oracle_matches_table1() {
        let means = table1_game().means().clone();
        let oracle = ebs_oracle_grid(&means, ValuePair::splat(0.3), 1e-5);
        assert!((oracle.egalitarian_advantage.min() - 21.9 / 35.0).abs() <= 2e-5);
    }

    #[test]
    fn oracle_on_constant_game() {
        let means = [Table::filled(2, 3, 0.4), Table::filled(2, 3, 0.4)];
        let oracle = ebs_oracle_grid(&means, ValuePair::splat(0.4), 0.01);
        assert_eq!(oracle.egalitarian_advantage, ValuePair::default());
        let exact = ebs_solve(&means, ValuePair::splat(0.4));
        assert_eq!(exact.egalitarian_advantage, ValuePair::default());
    }

    #[test]
    fn mixture_normalizes_degenerate_weights() {
        assert_eq!(
            CorrelatedPolicy::mixture(CC, CD, 0.0),
            CorrelatedPolicy::point(CD)
        );
        assert_eq!(
            CorrelatedPolicy::mixture(CC, CD, 1.0),
            CorrelatedPolicy::point(CC)
        );
        assert_eq!(
            CorrelatedPolicy::mixture(CC, CC, 0.3),
            CorrelatedPolicy::point(CC)
        );
        assert!(CorrelatedPolicy::from_probs([(CC, 0.5), (CD, 0.4)]).is_none());
        assert!(CorrelatedPolicy::from_probs([(CC, -0.5), (CD, 1.5)]).is_none());
        assert!(CorrelatedPolicy::from_probs([(CC, 0.5), (CD, 0.5)]).is_some());
    }
}
