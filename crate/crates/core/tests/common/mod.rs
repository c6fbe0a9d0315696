#![allow(dead_code)]

use ebs_core::game::{GameSpec, JointAction, Payoffs, RewardDist, Table};
use ebs_core::ValuePair;
use proptest::prelude::*;
use rand::Rng;

/// Brute-force egalitarian solution: every unordered pair of joint actions,
/// every weight on a uniform grid, ranked by (min advantage, max advantage).
/// Returns the best advantage pair found.
pub fn grid_ebs_advantage(means: &Payoffs, maximin: ValuePair, w_step: f64) -> ValuePair {
    let steps = (1.0 / w_step).ceil() as usize;
    let cells: Vec<(f64, f64)> = means[0]
        .actions()
        .map(|a| (means[0][a] - maximin.v1, means[1][a] - maximin.v2))
        .collect();
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY, ValuePair::default());
    for i in 0..cells.len() {
        for j in i..cells.len() {
            for k in 0..=steps {
                let w = k as f64 / steps as f64;
                let u1 = w * cells[i].0 + (1.0 - w) * cells[j].0;
                let u2 = w * cells[i].1 + (1.0 - w) * cells[j].1;
                let key = (u1.min(u2), u1.max(u2));
                if key.0 > best.0 || (key.0 == best.0 && key.1 > best.1) {
                    best = (key.0, key.1, ValuePair::new(u1, u2));
                }
            }
        }
    }
    best.2
}

/// Guaranteed value of the row player's mixed strategy `x` in `m`.
pub fn guaranteed(m: &Table, x: &[f64]) -> f64 {
    (0..m.cols())
        .map(|c| {
            x.iter()
                .enumerate()
                .map(|(r, p)| p * m[JointAction::new(r, c)])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Largest payoff the row player can get against the column mixture `y`.
pub fn best_row_against(m: &Table, y: &[f64]) -> f64 {
    (0..m.rows())
        .map(|r| {
            y.iter()
                .enumerate()
                .map(|(c, p)| p * m[JointAction::new(r, c)])
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn random_table<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Table {
    Table::from_fn(rows, cols, |_| rng.random::<f64>())
}

pub fn table_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Table> {
    prop::collection::vec(0.0..=1.0f64, rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        Table::from_fn(rows, cols, |_| it.next().unwrap())
    })
}

/// Pair of mean tables with 2 to 4 actions per player, entries in [0, 1].
pub fn payoffs_strategy() -> impl Strategy<Value = Payoffs> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| {
        (table_strategy(r, c), table_strategy(r, c)).prop_map(|(a, b)| [a, b])
    })
}

pub fn unit_game(means: Payoffs, dist: RewardDist) -> GameSpec {
    let [m1, m2] = means;
    GameSpec::new(m1, m2, 0.0, 1.0, dist).unwrap()
}
