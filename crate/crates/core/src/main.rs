use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ebs_core::harness::{
    load_source, run_experiment, trace_path, write_trace, Builtin, ExperimentConfig, GameSource,
    Mode, RunConfig,
};
use ebs_core::opponents::OpponentKind;
use ebs_core::solution::{ebs_oracle_grid, maximin_pair, EbsSolution};
use ebs_core::{ebs_solve, Error, Result};

#[derive(Parser)]
#[command(
    name = "ebs",
    version,
    about = "Egalitarian bargaining solver and repeated-game learner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact maximin values and egalitarian bargaining solution.
    Solve(SolveArgs),
    /// Compare the exact solver with a brute-force weight grid.
    Oracle {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 1e-4)]
        w_step: f64,
    },
    /// Two learners in self-play.
    Selfplay(RunArgs),
    /// Safety-mode learner (player 1) against a fixed opponent policy.
    Safety {
        #[command(flatten)]
        run: RunArgs,
        /// uniform, adversary, or fixed:p0,p1,...
        #[arg(long, default_value = "adversary")]
        opponent: String,
    },
    /// Self-play on lower-bound instances drawn per seed.
    Lowerbound {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        n1: usize,
        #[arg(long, default_value_t = 2)]
        n2: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinArg {
    Table1,
    Table1Raw,
    Lowerbound,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct GameArgs {
    #[arg(long)]
    game: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<BuiltinArg>,
}

impl GameArgs {
    fn source(&self) -> GameSource {
        match (&self.game, self.builtin) {
            (Some(path), _) => GameSource::File(path.clone()),
            (None, Some(BuiltinArg::Table1Raw)) => GameSource::Builtin(Builtin::Table1Raw),
            (None, Some(BuiltinArg::Lowerbound)) => GameSource::Builtin(Builtin::LowerBound),
            (None, Some(BuiltinArg::Table1) | None) => GameSource::Builtin(Builtin::Table1),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Seed for drawing the lower-bound builtin.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Horizon used to size the lower-bound builtin.
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    /// Run seeds 0..N.
    #[arg(long, conflicts_with = "seed_list")]
    seeds: Option<u64>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    seed_list: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Trace CSV path; multi-seed runs write one file per seed.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    stride: u64,
}

impl RunArgs {
    fn config(&self, mode: Mode) -> ExperimentConfig {
        let seeds = match (&self.seed_list, self.seeds) {
            (Some(list), _) => list.clone(),
            (None, Some(n)) => (0..n).collect(),
            (None, None) => vec![0],
        };
        ExperimentConfig {
            game: self.game.source(),
            mode,
            seeds,
            run: RunConfig {
                horizon: self.horizon,
                delta: self.delta,
                stride: self.stride,
                ..RunConfig::default()
            },
            out: self.out.clone(),
        }
    }
}

fn solution_json(sol: &EbsSolution) -> serde_json::Value {
    json!({
        "maximin": sol.maximin,
        "ebs_value": sol.ebs_value,
        "egalitarian_advantage": sol.egalitarian_advantage,
        "policy": sol.policy.support().map(|(a, p)| json!({"a1": a.a1, "a2": a.a2, "prob": p})).collect::<Vec<_>>(),
    })
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn run_and_report(cfg: ExperimentConfig) -> Result<()> {
    let outputs = run_experiment(&cfg)?;
    if let Some(out) = &cfg.out {
        let multi = outputs.len() > 1;
        for o in &outputs {
            write_trace(&o.trace, trace_path(out, o.summary.seed, multi))?;
        }
    }
    let summaries: Vec<_> = outputs.iter().map(|o| &o.summary).collect();
    print_json(&serde_json::to_value(summaries)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let game = load_source(&args.game.source(), args.horizon, args.seed)?;
            print_json(&solution_json(&ebs_solve(
                game.means(),
                maximin_pair(game.means())?,
            )))
        }
        Command::Oracle {
            solve: args,
            w_step,
        } => {
            if !(w_step > 0.0 && w_step <= 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "w-step must lie in (0, 1], got {w_step}"
                )));
            }
            let game = load_source(&args.game.source(), args.horizon, args.seed)?;
            let maximin = maximin_pair(game.means())?;
            let exact = ebs_solve(game.means(), maximin);
            let grid = ebs_oracle_grid(game.means(), maximin, w_step);
            let gap = (exact.egalitarian_advantage.min() - grid.egalitarian_advantage.min()).abs();
            print_json(&json!({
                "exact": solution_json(&exact),
                "grid": solution_json(&grid),
                "min_advantage_gap": gap,
            }))
        }
        Command::Selfplay(run) => run_and_report(run.config(Mode::SelfPlay)),
        Command::Safety { run, opponent } => {
            let kind: OpponentKind = opponent.parse()?;
            run_and_report(run.config(Mode::Safety(kind)))
        }
        Command::Lowerbound { run, n1, n2 } => {
            run_and_report(run.config(Mode::LowerBound { n1, n2 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
