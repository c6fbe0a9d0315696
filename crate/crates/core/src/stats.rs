//! Running reward statistics, confidence radii and epoch bookkeeping.
//!
//! Radii and bounds are always computed from the counts and means frozen at
//! the start of the current epoch, so they stay constant within an epoch.

use crate::error::{Error, Result};
use crate::game::{JointAction, Payoffs, RewardSample, Table};
use crate::maximin::MixedStrategy;
use crate::solution::CorrelatedPolicy;

/// Constant in front of the exploration threshold schedule.
pub const EPSILON_CONSTANT: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RadiusMode {
    /// `sqrt(2 ln(1/delta_k) / N)` with `delta_k = delta / (k * t_k)`.
    #[default]
    Hoeffding,
    /// Zero radius for every visited action. For exact-mean test runs.
    Zero,
}

/// `sqrt(2 ln(k t_k / delta) / n)`, or infinity when `n = 0`.
pub fn hoeffding_radius(delta: f64, epoch: u64, epoch_start: u64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let delta_k = delta / (epoch as f64 * epoch_start as f64);
    (2.0 * (1.0 / delta_k).ln() / n as f64).sqrt()
}

/// `2 (A ln t_k / t_k)^(1/3)` with the logarithm floored at `ln 2`.
pub fn epsilon_schedule(epoch_start: u64, num_joint_actions: usize) -> f64 {
    let t = epoch_start.max(1) as f64;
    let log_t = t.max(2.0).ln();
    EPSILON_CONSTANT * (num_joint_actions as f64 * log_t / t).cbrt()
}

/// `sum_a pi(a) C(a)`; infinite if any supported action has infinite radius.
pub fn policy_radius(radii: &Table, policy: &CorrelatedPolicy) -> f64 {
    policy.support().map(|(a, p)| p * radii[a]).sum()
}

/// `sum_a pi(own) 1[opponent = response] C(a)` for `strategy`'s owner.
pub fn product_radius(radii: &Table, strategy: &MixedStrategy, response: usize) -> f64 {
    strategy
        .probs
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p > 0.0)
        .map(|(own, &p)| p * radii[JointAction::from_view(strategy.owner, own, response)])
        .sum()
}

/// Upper and lower reward tables, clamped to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedGame {
    pub upper: Payoffs,
    pub lower: Payoffs,
}

#[derive(Clone, Debug)]
pub struct PlayStats {
    n1: usize,
    n2: usize,
    delta: f64,
    mode: RadiusMode,
    counts: Vec<u64>,
    means: [Vec<f64>; 2],
    start_counts: Vec<u64>,
    start_means: [Vec<f64>; 2],
    epoch_counts: Vec<u64>,
    epoch_len: u64,
    t: u64,
    k: u64,
    t_k: u64,
}

impl PlayStats {
    pub fn new(n1: usize, n2: usize, delta: f64) -> Result<Self> {
        Self::with_mode(n1, n2, delta, RadiusMode::Hoeffding)
    }

    pub fn with_mode(n1: usize, n2: usize, delta: f64, mode: RadiusMode) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidConfig(
                "statistics need at least one action per player".into(),
            ));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        let n = n1 * n2;
        Ok(PlayStats {
            n1,
            n2,
            delta,
            mode,
            counts: vec![0; n],
            means: [vec![0.0; n], vec![0.0; n]],
            start_counts: vec![0; n],
            start_means: [vec![0.0; n], vec![0.0; n]],
            epoch_counts: vec![0; n],
            epoch_len: 0,
            t: 1,
            k: 1,
            t_k: 1,
        })
    }

    fn idx(&self, a: JointAction) -> usize {
        debug_assert!(a.a1 < self.n1 && a.a2 < self.n2);
        a.a1 * self.n2 + a.a2
    }

    fn action_at(&self, i: usize) -> JointAction {
        JointAction::new(i / self.n2, i % self.n2)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn num_joint_actions(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Index of the next round (starts at 1).
    pub fn round(&self) -> u64 {
        self.t
    }

    /// Current epoch index (starts at 1).
    pub fn epoch(&self) -> u64 {
        self.k
    }

    /// Round at which the current epoch started.
    pub fn epoch_start(&self) -> u64 {
        self.t_k
    }

    pub fn epoch_len(&self) -> u64 {
        self.epoch_len
    }

    pub fn count(&self, a: JointAction) -> u64 {
        self.counts[self.idx(a)]
    }

    pub fn start_count(&self, a: JointAction) -> u64 {
        self.start_counts[self.idx(a)]
    }

    pub fn epoch_count(&self, a: JointAction) -> u64 {
        self.epoch_counts[self.idx(a)]
    }

    pub fn epoch_counts(&self) -> &[u64] {
        &self.epoch_counts
    }

    /// Running empirical mean of player `p` (0 or 1) at `a`.
    pub fn mean(&self, p: usize, a: JointAction) -> f64 {
        self.means[p][self.idx(a)]
    }

    pub fn update(&mut self, a: JointAction, sample: RewardSample) -> Result<()> {
        if a.a1 >= self.n1 || a.a2 >= self.n2 {
            return Err(Error::ActionOutOfBounds {
                action: a,
                rows: self.n1,
                cols: self.n2,
            });
        }
        for r in [sample.r1, sample.r2] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::SampleOutOfRange(r));
            }
        }
        let i = self.idx(a);
        self.counts[i] += 1;
        let n = self.counts[i] as f64;
        for (p, r) in [sample.r1, sample.r2].into_iter().enumerate() {
            let m = &mut self.means[p][i];
            *m += (r - *m) / n;
        }
        self.epoch_counts[i] += 1;
        self.epoch_len += 1;
        self.t += 1;
        Ok(())
    }

    /// Doubling condition: the in-epoch count of `a` exceeds
    /// `max(1, count of a at epoch start)`.
    pub fn epoch_complete(&self, a: JointAction) -> bool {
        let i = self.idx(a);
        self.epoch_counts[i] > self.start_counts[i].max(1)
    }

    /// Closes the current epoch and freezes counts and means for the next one.
    pub fn start_epoch(&mut self) {
        self.k += 1;
        self.t_k = self.t;
        self.start_counts.clone_from(&self.counts);
        self.start_means.clone_from(&self.means);
        self.epoch_counts.iter_mut().for_each(|c| *c = 0);
        self.epoch_len = 0;
    }

    pub fn conf_radius(&self, a: JointAction) -> f64 {
        let n = self.start_counts[self.idx(a)];
        match (self.mode, n) {
            (_, 0) => f64::INFINITY,
            (RadiusMode::Zero, _) => 0.0,
            (RadiusMode::Hoeffding, n) => hoeffding_radius(self.delta, self.k, self.t_k, n),
        }
    }

    pub fn radius_table(&self) -> Table {
        Table::from_fn(self.n1, self.n2, |a| self.conf_radius(a))
    }

    pub fn bounded_game(&self) -> BoundedGame {
        let bound = |p: usize, sign: f64| {
            Table::from_fn(self.n1, self.n2, |a| {
                let i = self.idx(a);
                if self.start_counts[i] == 0 {
                    return if sign > 0.0 { 1.0 } else { 0.0 };
                }
                (self.start_means[p][i] + sign * self.conf_radius(a)).clamp(0.0, 1.0)
            })
        };
        BoundedGame {
            upper: [bound(0, 1.0), bound(1, 1.0)],
            lower: [bound(0, -1.0), bound(1, -1.0)],
        }
    }

    pub fn epsilon(&self) -> f64 {
        epsilon_schedule(self.t_k, self.num_joint_actions())
    }

    pub fn policy_radius(&self, policy: &CorrelatedPolicy) -> f64 {
        policy_radius(&self.radius_table(), policy)
    }

    pub fn product_radius(&self, strategy: &MixedStrategy, response: usize) -> f64 {
        product_radius(&self.radius_table(), strategy, response)
    }

    /// Joint actions whose frozen count is zero.
    pub fn unvisited(&self) -> impl Iterator<Item = JointAction> + '_ {
        (0..self.start_counts.len())
            .filter(|&i| self.start_counts[i] == 0)
            .map(|i| self.action_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerId;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const A: JointAction = JointAction { a1: 0, a2: 0 };
    const B: JointAction = JointAction { a1: 0, a2: 1 };

    fn sample(r1: f64, r2: f64) -> RewardSample {
        RewardSample { r1, r2 }
    }

    #[test]
    fn incremental_means() {
        let mut s = PlayStats::new(1, 2, 0.1).unwrap();
        s.update(A, sample(0.7, 0.2)).unwrap();
        assert_eq!((s.mean(0, A), s.count(A)), (0.7, 1));
        s.update(B, sample(0.0, 1.0)).unwrap();
        s.update(B, sample(1.0, 0.0)).unwrap();
        assert_eq!((s.mean(0, B), s.mean(1, B), s.count(B)), (0.5, 0.5, 2));
        assert_eq!(s.round(), 4);
        assert_eq!(s.epoch_len(), 3);
    }

    #[test]
    fn bernoulli_mean_concentrates() {
        let mut s = PlayStats::new(1, 1, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let r = if rng.random::<f64>() < 0.3 { 1.0 } else { 0.0 };
            s.update(A, sample(r, 1.0 - r)).unwrap();
        }
        assert!((s.mean(0, A) - 0.3).abs() < 0.02);
    }

    #[test]
    fn rejects_out_of_range_samples() {
        let mut s = PlayStats::new(1, 1, 0.1).unwrap();
        assert!(matches!(
            s.update(A, sample(1.2, 0.0)),
            Err(Error::SampleOutOfRange(_))
        ));
        assert!(s.update(JointAction::new(1, 0), sample(0.1, 0.0)).is_err());
        assert_eq!(s.count(A), 0);
        assert!(PlayStats::new(1, 1, 1.0).is_err());
        assert!(PlayStats::new(0, 1, 0.1).is_err());
    }

    #[test]
    fn radius_formula() {
        assert_eq!(hoeffding_radius(0.1, 1, 1, 0), f64::INFINITY);
        let expected = (2.0 * 2000.0_f64.ln() / 8.0).sqrt();
        assert!((hoeffding_radius(0.1, 2, 100, 8) - expected).abs() < 1e-15);
        assert!((hoeffding_radius(0.1, 2, 100, 8) - 1.37845).abs() < 1e-4);
        let halved = hoeffding_radius(0.1, 2, 100, 16);
        assert!((hoeffding_radius(0.1, 2, 100, 8) / halved - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radius_is_frozen_within_an_epoch() {
        let mut s = PlayStats::new(1, 2, 0.1).unwrap();
        assert_eq!(s.conf_radius(A), f64::INFINITY);
        s.update(A, sample(0.5, 0.5)).unwrap();
        assert_eq!(s.conf_radius(A), f64::INFINITY);
        s.start_epoch();
        let r = s.conf_radius(A);
        assert!((r - hoeffding_radius(0.1, 2, 2, 1)).abs() < 1e-15);
        s.update(A, sample(0.5, 0.5)).unwrap();
        assert_eq!(s.conf_radius(A), r);
    }

    #[test]
    fn bounds_are_clamped() {
        let s = PlayStats::new(1, 2, 0.1).unwrap();
        let g = s.bounded_game();
        assert_eq!((g.upper[0][A], g.lower[0][A]), (1.0, 0.0));

        let mut s = PlayStats::with_mode(1, 2, 0.1, RadiusMode::Zero).unwrap();
        s.update(A, sample(0.9, 0.25)).unwrap();
        s.start_epoch();
        let g = s.bounded_game();
        assert_eq!((g.upper[0][A], g.lower[0][A]), (0.9, 0.9));
        assert_eq!((g.upper[1][A], g.lower[1][A]), (0.25, 0.25));
        assert_eq!((g.upper[0][B], g.lower[0][B]), (1.0, 0.0));
    }

    #[test]
    fn clamp_example() {
        // mean 0.9 with radius 0.3: N such that the radius is exactly 0.3 is
        // not an integer, so check the clamp rule on the radius we get.
        let mut s = PlayStats::new(1, 1, 0.1).unwrap();
        for _ in 0..200 {
            s.update(A, sample(0.9, 0.1)).unwrap();
        }
        s.start_epoch();
        let c = s.conf_radius(A);
        let g = s.bounded_game();
        assert!(c > 0.1 && c < 0.9);
        assert_eq!(g.upper[0][A], 1.0);
        assert!((g.lower[0][A] - (0.9 - c)).abs() < 1e-12);
        assert_eq!(g.lower[1][A], 0.0);
    }

    #[test]
    fn epsilon_values() {
        let e = epsilon_schedule(1000, 4);
        assert!((e - 2.0 * (4.0 * 1000f64.ln() / 1000.0).cbrt()).abs() < 1e-15);
        assert!((e - 0.60466).abs() < 1e-4);
        assert!((epsilon_schedule(1_000_000, 4) - 0.0762).abs() < 1e-4);
        assert!(epsilon_schedule(1, 4) > 0.0);
        let mut prev = epsilon_schedule(3, 4);
        for t in 4..5000 {
            let e = epsilon_schedule(t, 4);
            assert!(e < prev);
            prev = e;
        }
    }

    #[test]
    fn weighted_radii() {
        let mut radii = Table::from_rows(vec![vec![0.2, 0.4], vec![0.0, 0.1]]).unwrap();
        radii.set(JointAction::new(1, 0), f64::INFINITY);
        assert_eq!(policy_radius(&radii, &CorrelatedPolicy::point(A)), 0.2);
        let half = CorrelatedPolicy::mixture(A, B, 0.5);
        assert!((policy_radius(&radii, &half) - 0.3).abs() < 1e-15);
        let touch = CorrelatedPolicy::mixture(A, JointAction::new(1, 0), 0.9);
        assert_eq!(policy_radius(&radii, &touch), f64::INFINITY);

        let s = MixedStrategy::new(PlayerId::P1, vec![0.5, 0.5]).unwrap();
        assert!((product_radius(&radii, &s, 1) - 0.25).abs() < 1e-15);
        assert_eq!(product_radius(&radii, &s, 0), f64::INFINITY);
        let pure = MixedStrategy::pure(PlayerId::P1, 0, 2);
        assert_eq!(product_radius(&radii, &pure, 0), 0.2);
        let p2 = MixedStrategy::new(PlayerId::P2, vec![0.0, 1.0]).unwrap();
        assert_eq!(product_radius(&radii, &p2, 1), 0.1);
    }

    #[test]
    fn doubling_condition() {
        let mut s = PlayStats::new(1, 2, 0.1).unwrap();
        s.update(A, sample(0.5, 0.5)).unwrap();
        assert!(!s.epoch_complete(A));
        s.update(A, sample(0.5, 0.5)).unwrap();
        assert!(s.epoch_complete(A));
        s.start_epoch();
        for _ in 0..6 {
            s.update(A, sample(0.5, 0.5)).unwrap();
        }
        assert_eq!(s.start_count(A), 2);
        assert!(s.epoch_complete(A));

        // An action with 8 frozen plays may be replayed 8 times.
        let mut s = PlayStats::new(1, 1, 0.1).unwrap();
        for _ in 0..8 {
            s.update(A, sample(0.5, 0.5)).unwrap();
        }
        s.start_epoch();
        for _ in 0..8 {
            s.update(A, sample(0.5, 0.5)).unwrap();
            assert!(!s.epoch_complete(A));
        }
        s.update(A, sample(0.5, 0.5)).unwrap();
        assert!(s.epoch_complete(A));
    }
}
