//! Two-player repeated games with bounded stochastic rewards.
//!
//! A [`GameSpec`] holds one mean-reward table per player, indexed by joint
//! action (row = player 1's action, column = player 2's action), together with
//! the reward support and the distribution used to draw realized rewards.

use std::fmt;
use std::fs;
use std::ops::Index;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlayerId {
    P1,
    P2,
}

impl PlayerId {
    pub const BOTH: [PlayerId; 2] = [PlayerId::P1, PlayerId::P2];

    pub fn other(self) -> PlayerId {
        match self {
            PlayerId::P1 => PlayerId::P2,
            PlayerId::P2 => PlayerId::P1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            PlayerId::P1 => 0,
            PlayerId::P2 => 1,
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlayerId::P1 => write!(f, "p1"),
            PlayerId::P2 => write!(f, "p2"),
        }
    }
}

/// One action per player. Ordering is lexicographic on `(a1, a2)`, which is
/// also the row-major index order of a [`Table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JointAction {
    pub a1: usize,
    pub a2: usize,
}

impl JointAction {
    pub fn new(a1: usize, a2: usize) -> Self {
        JointAction { a1, a2 }
    }

    /// The component played by `p`.
    pub fn of(self, p: PlayerId) -> usize {
        match p {
            PlayerId::P1 => self.a1,
            PlayerId::P2 => self.a2,
        }
    }

    /// Builds a joint action from `p`'s own action and its opponent's action.
    pub fn from_view(p: PlayerId, own: usize, opponent: usize) -> Self {
        match p {
            PlayerId::P1 => JointAction::new(own, opponent),
            PlayerId::P2 => JointAction::new(opponent, own),
        }
    }
}

impl fmt::Display for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Dense row-major `rows x cols` table of reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Table {
    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Table {
            rows,
            cols,
            values: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidGame(
                "table must have at least one row and column".into(),
            ));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidGame("ragged table".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGame("non-finite table entry".into()));
        }
        Ok(Table {
            rows: n_rows,
            cols: n_cols,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(JointAction) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for a1 in 0..rows {
            for a2 in 0..cols {
                values.push(f(JointAction::new(a1, a2)));
            }
        }
        Table { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, a: JointAction) -> bool {
        a.a1 < self.rows && a.a2 < self.cols
    }

    pub fn index_of(&self, a: JointAction) -> usize {
        a.a1 * self.cols + a.a2
    }

    pub fn action_at(&self, index: usize) -> JointAction {
        JointAction::new(index / self.cols, index % self.cols)
    }

    pub fn get(&self, a: JointAction) -> Option<f64> {
        self.contains(a).then(|| self.values[self.index_of(a)])
    }

    pub fn set(&mut self, a: JointAction, value: f64) {
        let i = self.index_of(a);
        self.values[i] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn actions(&self) -> impl Iterator<Item = JointAction> + '_ {
        (0..self.values.len()).map(|i| self.action_at(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (JointAction, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.action_at(i), v))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Table {
        Table {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn transpose(&self) -> Table {
        Table::from_fn(self.cols, self.rows, |a| self[JointAction::new(a.a2, a.a1)])
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
}

impl Index<JointAction> for Table {
    type Output = f64;

    fn index(&self, a: JointAction) -> &f64 {
        assert!(
            self.contains(a),
            "{a} outside {}x{} table",
            self.rows,
            self.cols
        );
        &self.values[self.index_of(a)]
    }
}

/// Per-player tables sharing one shape, indexed by [`PlayerId::index`].
pub type Payoffs = [Table; 2];

/// Reorients `p`'s table so that rows are `p`'s own actions and columns are
/// the opponent's.
pub fn player_view(table: &Table, p: PlayerId) -> Table {
    match p {
        PlayerId::P1 => table.clone(),
        PlayerId::P2 => table.transpose(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RewardDist {
    /// Rewards in {0, 1}; needs unit support.
    Bernoulli,
    /// The mean itself, every round.
    Deterministic,
    /// Uniform on `[mean - half_width, mean + half_width]`.
    Uniform { half_width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardSample {
    pub r1: f64,
    pub r2: f64,
}

impl RewardSample {
    pub fn get(&self, p: PlayerId) -> f64 {
        match p {
            PlayerId::P1 => self.r1,
            PlayerId::P2 => self.r2,
        }
    }
}

/// `r -> (r - offset) / scale` maps the original support onto `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub offset: f64,
    pub scale: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        offset: 0.0,
        scale: 1.0,
    };

    pub fn to_unit(&self, r: f64) -> f64 {
        (r - self.offset) / self.scale
    }

    pub fn from_unit(&self, u: f64) -> f64 {
        self.offset + u * self.scale
    }

    /// Converts a reward difference (e.g. regret) back to original units.
    pub fn diff_from_unit(&self, d: f64) -> f64 {
        d * self.scale
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    means: Payoffs,
    lo: f64,
    hi: f64,
    dist: RewardDist,
}

impl GameSpec {
    pub fn new(mean1: Table, mean2: Table, lo: f64, hi: f64, dist: RewardDist) -> Result<Self> {
        if mean1.rows() == 0 || mean1.cols() == 0 {
            return Err(Error::InvalidGame(
                "each player needs at least one action".into(),
            ));
        }
        if mean1.rows() != mean2.rows() || mean1.cols() != mean2.cols() {
            return Err(Error::InvalidGame(format!(
                "mean1 is {}x{} but mean2 is {}x{}",
                mean1.rows(),
                mean1.cols(),
                mean2.rows(),
                mean2.cols()
            )));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidGame(format!("bad reward range [{lo}, {hi}]")));
        }
        for (p, table) in [&mean1, &mean2].into_iter().enumerate() {
            if let Some((a, v)) = table.iter().find(|&(_, v)| !(lo..=hi).contains(&v)) {
                return Err(Error::InvalidGame(format!(
                    "mean{} at {a} is {v}, outside [{lo}, {hi}]",
                    p + 1
                )));
            }
        }
        match dist {
            RewardDist::Bernoulli if lo != 0.0 || hi != 1.0 => {
                return Err(Error::InvalidGame(
                    "bernoulli rewards need lo = 0 and hi = 1".into(),
                ));
            }
            RewardDist::Uniform { half_width } => {
                if !(half_width.is_finite() && half_width >= 0.0) {
                    return Err(Error::InvalidGame(format!("bad half_width {half_width}")));
                }
                let widened = [&mean1, &mean2]
                    .into_iter()
                    .flat_map(|t| t.values().iter())
                    .any(|&m| m - half_width < lo || m + half_width > hi);
                if widened {
                    return Err(Error::InvalidGame(format!(
                        "half_width {half_width} pushes a mean outside [{lo}, {hi}]"
                    )));
                }
            }
            _ => {}
        }
        Ok(GameSpec {
            means: [mean1, mean2],
            lo,
            hi,
            dist,
        })
    }

    pub fn n1(&self) -> usize {
        self.means[0].rows()
    }

    pub fn n2(&self) -> usize {
        self.means[0].cols()
    }

    pub fn num_joint_actions(&self) -> usize {
        self.means[0].len()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn dist(&self) -> RewardDist {
        self.dist
    }

    pub fn means(&self) -> &Payoffs {
        &self.means
    }

    pub fn mean(&self, p: PlayerId) -> &Table {
        &self.means[p.index()]
    }

    pub fn mean_at(&self, a: JointAction) -> (f64, f64) {
        (self.means[0][a], self.means[1][a])
    }

    pub fn joint_actions(&self) -> impl Iterator<Item = JointAction> + '_ {
        self.means[0].actions()
    }

    fn check_action(&self, a: JointAction) -> Result<()> {
        if self.means[0].contains(a) {
            Ok(())
        } else {
            Err(Error::ActionOutOfBounds {
                action: a,
                rows: self.n1(),
                cols: self.n2(),
            })
        }
    }

    /// Draws one realized reward pair for `a`. Each player's reward is drawn
    /// independently from the game's distribution around its mean.
    pub fn sample_rewards<R: Rng + ?Sized>(
        &self,
        a: JointAction,
        rng: &mut R,
    ) -> Result<RewardSample> {
        self.check_action(a)?;
        let (m1, m2) = self.mean_at(a);
        let mut draw = |m: f64| match self.dist {
            RewardDist::Deterministic => m,
            RewardDist::Bernoulli => {
                if rng.random::<f64>() < m {
                    1.0
                } else {
                    0.0
                }
            }
            RewardDist::Uniform { half_width } => {
                let u: f64 = rng.random();
                (m - half_width + 2.0 * half_width * u).clamp(self.lo, self.hi)
            }
        };
        let r1 = draw(m1);
        let r2 = draw(m2);
        Ok(RewardSample { r1, r2 })
    }

    /// Rescales the game onto unit support with the same map for both players.
    pub fn normalize_to_unit(&self) -> Result<(GameSpec, AffineMap)> {
        if self.hi <= self.lo {
            return Err(Error::DegenerateRange {
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.lo == 0.0 && self.hi == 1.0 {
            return Ok((self.clone(), AffineMap::IDENTITY));
        }
        let map = AffineMap {
            offset: self.lo,
            scale: self.hi - self.lo,
        };
        let to_unit = |v: f64| map.to_unit(v).clamp(0.0, 1.0);
        let dist = match self.dist {
            RewardDist::Uniform { half_width } => RewardDist::Uniform {
                half_width: half_width / map.scale,
            },
            d => d,
        };
        let game = GameSpec {
            means: [self.means[0].map(to_unit), self.means[1].map(to_unit)],
            lo: 0.0,
            hi: 1.0,
            dist,
        };
        Ok((game, map))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GameFile = serde_json::from_str(text)?;
        file.into_game()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(&GameFile::from(self))?;
        text.push('\n');
        Ok(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DistTag {
    Bernoulli,
    Deterministic,
    Uniform,
}

/// On-disk JSON layout of a game.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    n1: usize,
    n2: usize,
    mean1: Vec<Vec<f64>>,
    mean2: Vec<Vec<f64>>,
    lo: f64,
    hi: f64,
    dist: DistTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    half_width: Option<f64>,
}

impl GameFile {
    fn into_game(self) -> Result<GameSpec> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidGame(format!(
                "empty action set (n1 = {}, n2 = {})",
                self.n1, self.n2
            )));
        }
        for (name, rows) in [("mean1", &self.mean1), ("mean2", &self.mean2)] {
            if rows.len() != self.n1 || rows.iter().any(|r| r.len() != self.n2) {
                return Err(Error::InvalidGame(format!(
                    "{name} does not have shape {}x{}",
                    self.n1, self.n2
                )));
            }
        }
        let dist = match (self.dist, self.half_width) {
            (DistTag::Bernoulli, None) => RewardDist::Bernoulli,
            (DistTag::Deterministic, None) => RewardDist::Deterministic,
            (DistTag::Uniform, Some(half_width)) => RewardDist::Uniform { half_width },
            (DistTag::Uniform, None) => {
                return Err(Error::InvalidGame("uniform rewards need half_width".into()));
            }
            (_, Some(_)) => {
                return Err(Error::InvalidGame(
                    "half_width is only valid with uniform rewards".into(),
                ));
            }
        };
        GameSpec::new(
            Table::from_rows(self.mean1)?,
            Table::from_rows(self.mean2)?,
            self.lo,
            self.hi,
            dist,
        )
    }
}

impl From<&GameSpec> for GameFile {
    fn from(game: &GameSpec) -> Self {
        let (dist, half_width) = match game.dist {
            RewardDist::Bernoulli => (DistTag::Bernoulli, None),
            RewardDist::Deterministic => (DistTag::Deterministic, None),
            RewardDist::Uniform { half_width } => (DistTag::Uniform, Some(half_width)),
        };
        GameFile {
            n1: game.n1(),
            n2: game.n2(),
            mean1: game.means[0].to_rows(),
            mean2: game.means[1].to_rows(),
            lo: game.lo,
            hi: game.hi,
            dist,
            half_width,
        }
    }
}

/// The 2x2 game used as the running example: actions are C (0) and D (1).
/// Rewards reach 9/5, so the support is `[0, 9/5]`.
pub fn table1_game() -> GameSpec {
    let mean1 = Table::from_rows(vec![vec![0.8, 0.1], vec![1.8, 0.3]]).expect("static table");
    let mean2 = Table::from_rows(vec![vec![0.8, 1.8], vec![0.0, 0.3]]).expect("static table");
    GameSpec::new(mean1, mean2, 0.0, 1.8, RewardDist::Deterministic).expect("static game")
}

/// [`table1_game`] mapped onto `[0, 1]` with Bernoulli rewards.
pub fn table1_bernoulli() -> GameSpec {
    let (unit, _) = table1_game()
        .normalize_to_unit()
        .expect("non-degenerate range");
    GameSpec::new(
        unit.mean(PlayerId::P1).clone(),
        unit.mean(PlayerId::P2).clone(),
        0.0,
        1.0,
        RewardDist::Bernoulli,
    )
    .expect("unit means")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bernoulli_game(m1: f64, m2: f64) -> GameSpec {
        GameSpec::new(
            Table::filled(1, 1, m1),
            Table::filled(1, 1, m2),
            0.0,
            1.0,
            RewardDist::Bernoulli,
        )
        .unwrap()
    }

    #[test]
    fn player_other_is_an_involution() {
        for p in PlayerId::BOTH {
            assert_ne!(p.other(), p);
            assert_eq!(p.other().other(), p);
        }
    }

    #[test]
    fn deterministic_sample_is_the_mean() {
        let game = table1_game();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let s = game
                .sample_rewards(JointAction::new(0, 0), &mut rng)
                .unwrap();
            assert_eq!(s, RewardSample { r1: 0.8, r2: 0.8 });
        }
    }

    #[test]
    fn bernoulli_mean_zero_always_zero() {
        let game = bernoulli_game(0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let s = game
                .sample_rewards(JointAction::new(0, 0), &mut rng)
                .unwrap();
            assert_eq!((s.r1, s.r2), (0.0, 1.0));
        }
    }

    #[test]
    fn bernoulli_empirical_mean_matches() {
        // 3 sigma of the mean of 1e6 Bernoulli(0.4) draws is about 0.0015.
        let game = bernoulli_game(0.4, 0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let s = game
                .sample_rewards(JointAction::new(0, 0), &mut rng)
                .unwrap();
            s1 += s.r1;
            s2 += s.r2;
        }
        assert!((s1 / n as f64 - 0.4).abs() <= 0.002, "{}", s1 / n as f64);
        assert!((s2 / n as f64 - 0.7).abs() <= 0.002, "{}", s2 / n as f64);
    }

    #[test]
    fn every_distribution_matches_its_mean() {
        let n = 100_000;
        let tol = 4.0 / (n as f64).sqrt();
        let games = [
            bernoulli_game(0.3, 0.9),
            GameSpec::new(
                Table::filled(1, 1, 0.3),
                Table::filled(1, 1, 0.9),
                0.0,
                1.0,
                RewardDist::Deterministic,
            )
            .unwrap(),
            GameSpec::new(
                Table::filled(1, 1, 0.3),
                Table::filled(1, 1, 0.9),
                0.0,
                1.0,
                RewardDist::Uniform { half_width: 0.1 },
            )
            .unwrap(),
        ];
        for game in games {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let s = game
                    .sample_rewards(JointAction::new(0, 0), &mut rng)
                    .unwrap();
                assert!((0.0..=1.0).contains(&s.r1) && (0.0..=1.0).contains(&s.r2));
                s1 += s.r1;
                s2 += s.r2;
            }
            assert!((s1 / n as f64 - 0.3).abs() <= tol, "{:?}", game.dist());
            assert!((s2 / n as f64 - 0.9).abs() <= tol, "{:?}", game.dist());
        }
    }

    #[test]
    fn sampling_is_reproducible_from_the_seed() {
        let game = table1_bernoulli();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let actions: Vec<JointAction> = game.joint_actions().collect();
            actions
                .iter()
                .copied()
                .cycle()
                .take(200)
                .map(|a| game.sample_rewards(a, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn out_of_bounds_action_is_rejected() {
        let game = table1_game();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = game
            .sample_rewards(JointAction::new(2, 0), &mut rng)
            .unwrap_err();
        assert!(matches!(err, Error::ActionOutOfBounds { .. }));
    }

    #[test]
    fn construction_checks() {
        let t = || Table::filled(2, 2, 0.5);
        assert!(GameSpec::new(
            t(),
            Table::filled(2, 2, 1.5),
            0.0,
            1.0,
            RewardDist::Deterministic
        )
        .is_err());
        assert!(GameSpec::new(
            t(),
            Table::filled(2, 3, 0.5),
            0.0,
            1.0,
            RewardDist::Deterministic
        )
        .is_err());
        assert!(GameSpec::new(t(), t(), 0.0, 2.0, RewardDist::Bernoulli).is_err());
        assert!(
            GameSpec::new(t(), t(), 0.0, 1.0, RewardDist::Uniform { half_width: 0.6 }).is_err()
        );
        assert!(GameSpec::new(t(), t(), 0.0, 1.0, RewardDist::Uniform { half_width: 0.5 }).is_ok());
        assert!(Table::from_rows(vec![]).is_err());
        assert!(Table::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn normalize_table1() {
        let (unit, map) = table1_game().normalize_to_unit().unwrap();
        assert_eq!(unit.mean_at(JointAction::new(1, 0)), (1.0, 0.0));
        assert_eq!((unit.lo(), unit.hi()), (0.0, 1.0));
        assert!((unit.mean(PlayerId::P1)[JointAction::new(0, 0)] - 0.8 / 1.8).abs() < 1e-15);
        assert!((map.from_unit(0.5) - 0.9).abs() < 1e-15);
        assert!((map.to_unit(0.9) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalize_unit_game_is_identity() {
        let game = table1_bernoulli();
        let (unit, map) = game.normalize_to_unit().unwrap();
        assert_eq!(unit, game);
        assert_eq!(map, AffineMap::IDENTITY);
    }

    #[test]
    fn normalize_degenerate_range() {
        let game = GameSpec::new(
            Table::filled(1, 1, 0.5),
            Table::filled(1, 1, 0.5),
            0.5,
            0.5,
            RewardDist::Deterministic,
        )
        .unwrap();
        assert!(matches!(
            game.normalize_to_unit(),
            Err(Error::DegenerateRange { .. })
        ));
    }

    #[test]
    fn table1_file_loads() {
        let text = r#"{"n1":2,"n2":2,"mean1":[[0.8,0.1],[1.8,0.3]],"mean2":[[0.8,1.8],[0,0.3]],
            "lo":0,"hi":1.8,"dist":"deterministic"}"#;
        let game = GameSpec::from_json(text).unwrap();
        assert_eq!(game, table1_game());
    }

    #[test]
    fn malformed_files_are_rejected() {
        let bad = [
            r#"{"n1":0,"n2":2,"mean1":[],"mean2":[],"lo":0,"hi":1,"dist":"bernoulli"}"#,
            r#"{"n1":1,"n2":2,"mean1":[[0.1]],"mean2":[[0.1,0.2]],"lo":0,"hi":1,"dist":"bernoulli"}"#,
            r#"{"n1":1,"n2":1,"mean1":[[1.1]],"mean2":[[0.1]],"lo":0,"hi":1,"dist":"deterministic"}"#,
            r#"{"n1":1,"n2":1,"mean1":[[0.5]],"mean2":[[0.1]],"lo":0,"hi":1,"dist":"uniform"}"#,
            r#"{"n1":1,"n2":1,"mean1":[[0.5]],"mean2":[[0.1]],"lo":0,"hi":1,"dist":"gauss"}"#,
            r#"{"n1":1,"n2":1,"mean1":[[0.5]]"#,
        ];
        for text in bad {
            assert!(GameSpec::from_json(text).is_err(), "{text}");
        }
    }
}
