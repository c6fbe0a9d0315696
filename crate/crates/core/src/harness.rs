//! Experiment runs: self-play against a copy of the learner, safety play
//! against fixed or adversarial opponents, and the hard instance family used
//! for lower-bound experiments.
//!
//! Every run works on the unit-normalized game. Trace rows report rewards and
//! regrets in the game's original units; summaries carry both.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    table1_bernoulli, table1_game, AffineMap, GameSpec, JointAction, PlayerId, RewardDist, Table,
};
use crate::learner::{Agent, EpochPolicy, LearnerMode};
use crate::maximin::MixedStrategy;
use crate::opponents::{opponent_act, OpponentKind};
use crate::solution::{maximin_pair, solve_game, ValuePair};
use crate::stats::{PlayStats, RadiusMode};

pub const TRACE_HEADER: &str =
    "t,epoch,branch,a1,a2,r1,r2,regret_p1,regret_p2,regret_max,pseudo_regret_max";

const STREAM_ENV: u64 = 0;
const STREAM_AGENT: u64 = 1;
const STREAM_OPPONENT: u64 = 2;
const STREAM_GAME: u64 = 3;

fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `T^(2/3) (ln T)^(1/3)`, the self-play regret scale.
pub fn selfplay_rate(horizon: u64) -> f64 {
    let t = horizon.max(2) as f64;
    t.powf(2.0 / 3.0) * t.ln().cbrt()
}

/// `sqrt(T ln T)`, the safety regret scale.
pub fn safety_rate(horizon: u64) -> f64 {
    let t = horizon.max(2) as f64;
    (t * t.ln()).sqrt()
}

/// Upper bound on the number of epochs after `horizon` rounds.
pub fn epoch_bound(horizon: u64, num_joint_actions: usize) -> f64 {
    let a = num_joint_actions as f64;
    a * (8.0 * horizon as f64 / a).log2()
}

/// Bound on the number of rounds spent in the two radius-error branches.
pub fn error_branch_bound(horizon: u64, num_joint_actions: usize) -> f64 {
    let c_e = crate::stats::EPSILON_CONSTANT;
    16.0 * (num_joint_actions as f64).cbrt() * selfplay_rate(horizon) / (c_e * c_e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub horizon: u64,
    pub delta: f64,
    /// Keep trace rows at `t = 1, 1 + stride, ...` plus the last round.
    pub stride: u64,
    pub radius_mode: RadiusMode,
    /// Rounds at which cumulative regret is recorded in the summary.
    pub checkpoints: Vec<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: 10_000,
            delta: 0.1,
            stride: 1,
            radius_mode: RadiusMode::Hoeffding,
            checkpoints: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    pub epoch: u64,
    pub branch: String,
    pub a1: usize,
    pub a2: usize,
    pub r1: f64,
    pub r2: f64,
    pub regret_p1: f64,
    pub regret_p2: f64,
    pub regret_max: f64,
    pub pseudo_regret_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub t: u64,
    pub regret_max: f64,
    pub pseudo_regret_max: f64,
    pub pseudo_regret: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundInfo {
    pub z: JointAction,
    pub z_is_star: bool,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub mode: String,
    pub horizon: u64,
    /// Benchmark value per round: EBS value in self-play, maximin otherwise.
    pub oracle: ValuePair,
    pub oracle_raw: ValuePair,
    pub regret: [f64; 2],
    pub pseudo_regret: [f64; 2],
    pub regret_max: f64,
    pub pseudo_regret_max: f64,
    pub pseudo_regret_max_raw: f64,
    /// Agent's pseudo-regret over the mode's regret scale.
    pub normalized_regret: f64,
    pub avg_reward: [f64; 2],
    pub epochs: u64,
    pub branch_rounds: BTreeMap<String, u64>,
    pub error_branch_rounds: u64,
    /// Largest `N_k * |N_k(a) / N_k - pi(a)|` seen over supported actions.
    pub scheduler_excess: f64,
    pub checkpoints: Vec<Checkpoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowerbound: Option<LowerBoundInfo>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trace: Vec<TraceRow>,
    pub summary: Summary,
}

/// Accumulates per-round regret and builds the trace and summary.
struct Recorder {
    cfg: RunConfig,
    map: AffineMap,
    oracle: ValuePair,
    regret: [f64; 2],
    pseudo: [f64; 2],
    reward_sum: [f64; 2],
    branch_rounds: BTreeMap<String, u64>,
    error_branch_rounds: u64,
    last_epoch: u64,
    scheduler_excess: f64,
    trace: Vec<TraceRow>,
    checkpoints: Vec<Checkpoint>,
}

impl Recorder {
    fn new(cfg: &RunConfig, map: AffineMap, oracle: ValuePair) -> Self {
        Recorder {
            cfg: cfg.clone(),
            map,
            oracle,
            regret: [0.0; 2],
            pseudo: [0.0; 2],
            reward_sum: [0.0; 2],
            branch_rounds: BTreeMap::new(),
            error_branch_rounds: 0,
            last_epoch: 0,
            scheduler_excess: 0.0,
            trace: Vec::new(),
            checkpoints: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        t: u64,
        epoch: u64,
        branch: &str,
        error_branch: bool,
        a: JointAction,
        r: [f64; 2],
        mean: [f64; 2],
    ) {
        let oracle = [self.oracle.v1, self.oracle.v2];
        for p in 0..2 {
            self.regret[p] += oracle[p] - r[p];
            self.pseudo[p] += oracle[p] - mean[p];
            self.reward_sum[p] += r[p];
        }
        *self.branch_rounds.entry(branch.to_string()).or_insert(0) += 1;
        if error_branch {
            self.error_branch_rounds += 1;
        }
        self.last_epoch = epoch;

        let regret_max = self.regret[0].max(self.regret[1]);
        let pseudo_max = self.pseudo[0].max(self.pseudo[1]);
        if (t - 1).is_multiple_of(self.cfg.stride) || t == self.cfg.horizon {
            let m = self.map;
            self.trace.push(TraceRow {
                t,
                epoch,
                branch: branch.to_string(),
                a1: a.a1,
                a2: a.a2,
                r1: m.from_unit(r[0]),
                r2: m.from_unit(r[1]),
                regret_p1: m.diff_from_unit(self.regret[0]),
                regret_p2: m.diff_from_unit(self.regret[1]),
                regret_max: m.diff_from_unit(regret_max),
                pseudo_regret_max: m.diff_from_unit(pseudo_max),
            });
        }
        if self.cfg.checkpoints.contains(&t) {
            self.checkpoints.push(Checkpoint {
                t,
                regret_max,
                pseudo_regret_max: pseudo_max,
                pseudo_regret: self.pseudo,
            });
        }
    }

    fn finish(self, seed: u64, mode: String, agent_pseudo: f64, rate: f64) -> RunOutput {
        let horizon = self.cfg.horizon as f64;
        let pseudo_max = self.pseudo[0].max(self.pseudo[1]);
        let summary = Summary {
            seed,
            mode,
            horizon: self.cfg.horizon,
            oracle: self.oracle,
            oracle_raw: self.oracle.map(|v| self.map.from_unit(v)),
            regret: self.regret,
            pseudo_regret: self.pseudo,
            regret_max: self.regret[0].max(self.regret[1]),
            pseudo_regret_max: pseudo_max,
            pseudo_regret_max_raw: self.map.diff_from_unit(pseudo_max),
            normalized_regret: agent_pseudo / rate,
            avg_reward: [self.reward_sum[0] / horizon, self.reward_sum[1] / horizon],
            epochs: self.last_epoch,
            branch_rounds: self.branch_rounds,
            error_branch_rounds: self.error_branch_rounds,
            scheduler_excess: self.scheduler_excess,
            checkpoints: self.checkpoints,
            lowerbound: None,
        };
        RunOutput {
            trace: self.trace,
            summary,
        }
    }
}

/// Two copies of the learner sharing every observation. Each computes its
/// own policy; the run fails if they ever disagree.
pub fn run_selfplay(game: &GameSpec, cfg: &RunConfig, seed: u64) -> Result<RunOutput> {
    cfg.validate()?;
    let (unit, map) = game.normalize_to_unit()?;
    let oracle = solve_game(unit.means())?.ebs_value;
    let stats = PlayStats::with_mode(unit.n1(), unit.n2(), cfg.delta, cfg.radius_mode)?;
    let mut agents = [
        Agent::new(LearnerMode::SelfPlayEbs, PlayerId::P1, stats.clone())?,
        Agent::new(LearnerMode::SelfPlayEbs, PlayerId::P2, stats)?,
    ];
    let mut env = seeded(seed, STREAM_ENV);
    let mut rec = Recorder::new(cfg, map, oracle);

    for t in 1..=cfg.horizon {
        let [first, second] = &agents;
        if first.decision() != second.decision() {
            return Err(Error::Solver(format!(
                "self-play agents disagree on the policy at round {t}"
            )));
        }
        let a = JointAction::new(first.act(&mut env), second.act(&mut env));
        if first.scheduled() != Some(a) || second.scheduled() != Some(a) {
            return Err(Error::Solver(format!(
                "self-play agents disagree on the action at round {t}"
            )));
        }
        let decision = first
            .decision()
            .expect("self-play agents hold a correlated policy");
        let stats = first.stats();
        let len = stats.epoch_len() + 1;
        let excess = decision
            .policy
            .support()
            .map(|(b, p)| {
                let n = stats.epoch_count(b) + u64::from(b == a);
                (n as f64 - p * len as f64).abs()
            })
            .fold(0.0, f64::max);
        rec.scheduler_excess = rec.scheduler_excess.max(excess);

        let sample = unit.sample_rewards(a, &mut env)?;
        let (m1, m2) = unit.mean_at(a);
        rec.record(
            t,
            stats.epoch(),
            decision.branch.tag(),
            decision.branch.is_error_branch(),
            a,
            [sample.r1, sample.r2],
            [m1, m2],
        );
        for agent in agents.iter_mut() {
            agent.observe(a, sample)?;
        }
    }
    let agent_pseudo = rec.pseudo[0].max(rec.pseudo[1]);
    Ok(rec.finish(
        seed,
        "selfplay".into(),
        agent_pseudo,
        selfplay_rate(cfg.horizon),
    ))
}

/// Learner as player 1 in safety mode against `opponent` as player 2.
pub fn run_safety(
    game: &GameSpec,
    opponent: &OpponentKind,
    cfg: &RunConfig,
    seed: u64,
) -> Result<RunOutput> {
    cfg.validate()?;
    let (unit, map) = game.normalize_to_unit()?;
    let opponent = match opponent {
        OpponentKind::FixedStationary(s) => {
            if s.len() != unit.n2() {
                return Err(Error::InvalidConfig(format!(
                    "fixed opponent has {} probabilities but player 2 has {} actions",
                    s.len(),
                    unit.n2()
                )));
            }
            OpponentKind::FixedStationary(MixedStrategy {
                owner: PlayerId::P2,
                probs: s.probs.clone(),
            })
        }
        other => other.clone(),
    };
    let oracle = maximin_pair(unit.means())?;
    let stats = PlayStats::with_mode(unit.n1(), unit.n2(), cfg.delta, cfg.radius_mode)?;
    let mut agent = Agent::new(LearnerMode::SafetyMaximin, PlayerId::P1, stats)?;
    let mut env = seeded(seed, STREAM_ENV);
    let mut agent_rng = seeded(seed, STREAM_AGENT);
    let mut opp_rng = seeded(seed, STREAM_OPPONENT);
    let mut rec = Recorder::new(cfg, map, oracle);

    for t in 1..=cfg.horizon {
        let EpochPolicy::Safety(strategy) = agent.policy() else {
            unreachable!("safety agents hold a mixed strategy");
        };
        let a1 = agent.act(&mut agent_rng);
        let a2 = opponent_act(&opponent, &unit, strategy, &mut opp_rng);
        let a = JointAction::new(a1, a2);
        let sample = unit.sample_rewards(a, &mut env)?;
        let (m1, m2) = unit.mean_at(a);
        rec.record(
            t,
            agent.stats().epoch(),
            "safety",
            false,
            a,
            [sample.r1, sample.r2],
            [m1, m2],
        );
        agent.observe(a, sample)?;
    }
    let agent_pseudo = rec.pseudo[0];
    Ok(rec.finish(
        seed,
        format!("safety:{}", opponent.name()),
        agent_pseudo,
        safety_rate(cfg.horizon),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundGame {
    pub game: GameSpec,
    pub info: LowerBoundInfo,
}

/// `min(A^(1/3) T^(-1/3), sqrt(0.43) / 2)` for `A` joint actions.
pub fn lowerbound_epsilon(num_joint_actions: usize, horizon: u64) -> f64 {
    let a = num_joint_actions as f64;
    let t = horizon.max(1) as f64;
    (a.cbrt() / t.cbrt()).min(0.43f64.sqrt() / 2.0)
}

/// The hard instance with the perturbed cell at `z`. Every joint action pays
/// (0.5, 0.5) in expectation except `a* = (0, 0)`, which pays (0.5, 1), and
/// `z != a*`, which pays (0.5 + eps, 0.5 + eps). Bernoulli rewards.
pub fn lowerbound_game(
    n1: usize,
    n2: usize,
    horizon: u64,
    z: JointAction,
) -> Result<LowerBoundGame> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidConfig(format!(
            "the lower-bound family needs at least 2 actions per player, got {n1}x{n2}"
        )));
    }
    if z.a1 >= n1 || z.a2 >= n2 {
        return Err(Error::ActionOutOfBounds {
            action: z,
            rows: n1,
            cols: n2,
        });
    }
    let star = JointAction::new(0, 0);
    let epsilon = lowerbound_epsilon(n1 * n2, horizon);
    let mut mean1 = Table::filled(n1, n2, 0.5);
    let mut mean2 = Table::filled(n1, n2, 0.5);
    mean2.set(star, 1.0);
    if z != star {
        mean1.set(z, 0.5 + epsilon);
        mean2.set(z, 0.5 + epsilon);
    }
    let game = GameSpec::new(mean1, mean2, 0.0, 1.0, RewardDist::Bernoulli)?;
    Ok(LowerBoundGame {
        game,
        info: LowerBoundInfo {
            z,
            z_is_star: z == star,
            epsilon,
        },
    })
}

/// With probability 1/2 `z = a*`; otherwise `z` is uniform over the other
/// joint actions.
pub fn gen_lowerbound_game<R: Rng + ?Sized>(
    n1: usize,
    n2: usize,
    horizon: u64,
    rng: &mut R,
) -> Result<LowerBoundGame> {
    if n1 < 2 || n2 < 2 {
        return lowerbound_game(n1, n2, horizon, JointAction::new(0, 0));
    }
    let z = if rng.random_bool(0.5) {
        0
    } else {
        1 + rng.random_range(0..n1 * n2 - 1)
    };
    lowerbound_game(n1, n2, horizon, JointAction::new(z / n2, z % n2))
}

/// Self-play on a lower-bound game drawn from `seed`.
pub fn run_lowerbound(n1: usize, n2: usize, cfg: &RunConfig, seed: u64) -> Result<RunOutput> {
    let lb = gen_lowerbound_game(n1, n2, cfg.horizon, &mut seeded(seed, STREAM_GAME))?;
    let mut out = run_selfplay(&lb.game, cfg, seed)?;
    out.summary.mode = "lowerbound".into();
    out.summary.lowerbound = Some(lb.info);
    Ok(out)
}

pub fn write_trace(rows: &[TraceRow], path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    write_trace_to(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_trace_to<W: Write>(rows: &[TraceRow], w: &mut W) -> Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.epoch,
            r.branch,
            r.a1,
            r.a2,
            r.r1,
            r.r2,
            r.regret_p1,
            r.regret_p2,
            r.regret_max,
            r.pseudo_regret_max
        )?;
    }
    Ok(())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRow>> {
    parse_trace(&fs::read_to_string(path)?)
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(TRACE_HEADER) => {}
        other => return Err(Error::Trace(format!("unexpected header {other:?}"))),
    }
    let bad = |n: usize, what: &str| Error::Trace(format!("line {}: {what}", n + 2));
    lines
        .enumerate()
        .map(|(n, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(bad(n, "expected 11 fields"));
            }
            let int = |i: usize| f[i].parse::<u64>().map_err(|_| bad(n, "bad integer"));
            let real = |i: usize| f[i].parse::<f64>().map_err(|_| bad(n, "bad number"));
            Ok(TraceRow {
                t: int(0)?,
                epoch: int(1)?,
                branch: f[2].to_string(),
                a1: int(3)? as usize,
                a2: int(4)? as usize,
                r1: real(5)?,
                r2: real(6)?,
                regret_p1: real(7)?,
                regret_p2: real(8)?,
                regret_max: real(9)?,
                pseudo_regret_max: real(10)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Running example, unit-normalized, Bernoulli rewards.
    Table1,
    /// Running example in original units with deterministic rewards.
    Table1Raw,
    /// Lower-bound instance drawn from the run seed.
    LowerBound,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GameSource {
    File(PathBuf),
    Builtin(Builtin),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    SelfPlay,
    Safety(OpponentKind),
    LowerBound { n1: usize, n2: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub game: GameSource,
    pub mode: Mode,
    pub seeds: Vec<u64>,
    pub run: RunConfig,
    pub out: Option<PathBuf>,
}

/// Resolves a game source; the lower-bound builtin is drawn from `seed`.
pub fn load_source(source: &GameSource, horizon: u64, seed: u64) -> Result<GameSpec> {
    match source {
        GameSource::File(path) => GameSpec::load(path),
        GameSource::Builtin(Builtin::Table1) => Ok(table1_bernoulli()),
        GameSource::Builtin(Builtin::Table1Raw) => Ok(table1_game()),
        GameSource::Builtin(Builtin::LowerBound) => {
            Ok(gen_lowerbound_game(2, 2, horizon, &mut seeded(seed, STREAM_GAME))?.game)
        }
    }
}

fn run_one(cfg: &ExperimentConfig, seed: u64) -> Result<RunOutput> {
    match &cfg.mode {
        Mode::LowerBound { n1, n2 } => run_lowerbound(*n1, *n2, &cfg.run, seed),
        Mode::SelfPlay => run_selfplay(
            &load_source(&cfg.game, cfg.run.horizon, seed)?,
            &cfg.run,
            seed,
        ),
        Mode::Safety(kind) => run_safety(
            &load_source(&cfg.game, cfg.run.horizon, seed)?,
            kind,
            &cfg.run,
            seed,
        ),
    }
}

/// Runs every seed in parallel. Outputs come back in seed-list order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunOutput>> {
    cfg.run.validate()?;
    if cfg.seeds.is_empty() {
        return Err(Error::InvalidConfig("no seeds given".into()));
    }
    cfg.seeds
        .par_iter()
        .map(|&seed| run_one(cfg, seed))
        .collect()
}

/// Trace path for `seed`: `out` itself for single-seed runs, otherwise
/// `<stem>-seed<seed>.<ext>` next to it.
pub fn trace_path(out: &Path, seed: u64, multi: bool) -> PathBuf {
    if !multi {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let name = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-seed{seed}.{ext}"),
        None => format!("{stem}-seed{seed}"),
    };
    out.with_file_name(name)
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
