//! Maximin strategies of one player's reward matrix.
//!
//! Matrices passed here are in the owner's view: rows are the owner's actions,
//! columns the opponent's (see [`crate::game::player_view`]). The maximin
//! strategy comes from the dual of a packing LP solved with a dense simplex
//! that uses Bland's rule, so degenerate problems resolve the same way on
//! every run.
//!
//! [`optimistic_maximin`] pairs the maximin strategy of the upper game with
//! the opponent's best response in the lower game. The resulting value is a
//! pessimistic estimate of the true maximin whenever the true means lie
//! between the two games.

use crate::error::{Error, Result};
use crate::game::{JointAction, PlayerId, Table};

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct MixedStrategy {
    pub owner: PlayerId,
    pub probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn pure(owner: PlayerId, action: usize, n: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[action] = 1.0;
        MixedStrategy { owner, probs }
    }

    pub fn uniform(owner: PlayerId, n: usize) -> Self {
        MixedStrategy {
            owner,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Validates nonnegativity and a unit sum within `1e-12`.
    pub fn new(owner: PlayerId, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "invalid mixed strategy {probs:?}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "mixed strategy sums to {total}"
            )));
        }
        Ok(MixedStrategy { owner, probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Index of the largest probability; ties go to the smallest index.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximinResult {
    pub strategy: MixedStrategy,
    pub value: f64,
    /// Opponent pure action attaining `value` against `strategy`.
    pub certificate_br: usize,
}

/// Solution of `max c.y` s.t. `A y <= b`, `y >= 0`.
#[derive(Clone, Debug)]
struct LpSolution {
    primal: Vec<f64>,
    dual: Vec<f64>,
    objective: f64,
}

/// Dense tableau simplex for packing LPs (`b >= 0`, so the origin is
/// feasible). Entering column: first with negative reduced cost. Leaving row:
/// minimum ratio, ties to the smallest basic variable.
fn simplex_packing(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;

    let mut tab = vec![vec![0.0; width]; m];
    for (r, row) in tab.iter_mut().enumerate() {
        row[..n].copy_from_slice(&a[r]);
        row[n + r] = 1.0;
        row[rhs] = b[r];
    }
    let mut obj = vec![0.0; width];
    for j in 0..n {
        obj[j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..n + m).find(|&j| obj[j] < -PIVOT_EPS) else {
            let mut primal = vec![0.0; n];
            for (r, &var) in basis.iter().enumerate() {
                if var < n {
                    primal[var] = tab[r][rhs];
                }
            }
            return Ok(LpSolution {
                primal,
                dual: obj[n..n + m].to_vec(),
                objective: obj[rhs],
            });
        };

        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let coef = tab[r][enter];
            if coef <= PIVOT_EPS {
                continue;
            }
            let ratio = tab[r][rhs] / coef;
            leave = match leave {
                None => Some((r, ratio)),
                Some((lr, lratio)) => {
                    if ratio < lratio - PIVOT_EPS
                        || ((ratio - lratio).abs() <= PIVOT_EPS && basis[r] < basis[lr])
                    {
                        Some((r, ratio))
                    } else {
                        Some((lr, lratio))
                    }
                }
            };
        }
        let Some((pivot_row, _)) = leave else {
            return Err(Error::Solver(format!("unbounded in column {enter}")));
        };

        let pivot = tab[pivot_row][enter];
        for v in tab[pivot_row].iter_mut() {
            *v /= pivot;
        }
        let pivot_vals = tab[pivot_row].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == pivot_row {
                continue;
            }
            let factor = row[enter];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_vals) {
                    *v -= factor * p;
                }
            }
        }
        let factor = obj[enter];
        for (v, p) in obj.iter_mut().zip(&pivot_vals) {
            *v -= factor * p;
        }
        basis[pivot_row] = enter;
    }
    Err(Error::Solver(format!(
        "no convergence after {MAX_PIVOTS} pivots on a {m}x{n} problem"
    )))
}

/// Maximin mixed strategy of the row player of `matrix` (owner's view).
pub fn solve_matrix_maximin(matrix: &Table, owner: PlayerId) -> Result<MaximinResult> {
    if matrix.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("non-finite payoff".into()));
    }
    let rows = matrix.rows();
    let cols = matrix.cols();
    // Shift so every payoff is at least 1; the game value then is positive and
    // the opponent's problem becomes a bounded packing LP.
    let shift = 1.0 - matrix.min();
    let a: Vec<Vec<f64>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| matrix[JointAction::new(r, c)] + shift)
                .collect()
        })
        .collect();
    let lp = simplex_packing(&a, &vec![1.0; rows], &vec![1.0; cols])?;
    if lp.objective.is_nan() || lp.objective <= 0.0 {
        return Err(Error::Solver(format!(
            "non-positive objective {} (primal {:?})",
            lp.objective, lp.primal
        )));
    }

    let mut probs: Vec<f64> = lp.dual.iter().map(|x| x.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Solver(format!("degenerate dual {:?}", lp.dual)));
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    let strategy = MixedStrategy { owner, probs };
    let (certificate_br, value) = best_response_value(matrix, &strategy);
    Ok(MaximinResult {
        strategy,
        value,
        certificate_br,
    })
}

/// The opponent's pure action minimizing the owner's expected reward under
/// `fixed`, and that reward. Ties go to the smallest action index.
pub fn best_response_value(matrix: &Table, fixed: &MixedStrategy) -> (usize, f64) {
    debug_assert_eq!(matrix.rows(), fixed.len());
    let mut best = (0, f64::INFINITY);
    for c in 0..matrix.cols() {
        let v: f64 = fixed
            .probs
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p > 0.0)
            .map(|(r, &p)| p * matrix[JointAction::new(r, c)])
            .sum();
        if v < best.1 {
            best = (c, v);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimisticMaximin {
    /// Maximin strategy of the upper game.
    pub strategy: MixedStrategy,
    /// Opponent's pure best response to `strategy` in the lower game.
    pub response: usize,
    /// Value of `strategy` against `response` in the lower game.
    pub sv_check: f64,
}

impl OptimisticMaximin {
    /// Joint-action weights `strategy(own) * 1[opponent = response]`.
    pub fn joint_weights(&self) -> impl Iterator<Item = (JointAction, f64)> + '_ {
        let owner = self.strategy.owner;
        self.strategy
            .probs
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p > 0.0)
            .map(move |(own, &p)| (JointAction::from_view(owner, own, self.response), p))
    }
}

/// Both tables are in `owner`'s view and must satisfy `lower <= upper`.
pub fn optimistic_maximin(
    upper: &Table,
    lower: &Table,
    owner: PlayerId,
) -> Result<OptimisticMaximin> {
    let strategy = solve_matrix_maximin(upper, owner)?.strategy;
    let (response, sv_check) = best_response_value(lower, &strategy);
    Ok(OptimisticMaximin {
        strategy,
        response,
        sv_check,
    })
}
