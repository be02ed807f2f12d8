//! The `knockout` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid input or parameters, 3 runtime
//! degeneracy (singular round chain, step cap reached, I/O failure).

mod plot;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

pub use plot::render_win_by_position;

use crate::analysis::{
    detect_trends, fmt_real, read_long_csv, run_sweep, write_long_csv, write_summary_csv, Grid,
    SweepRecord, SweepRow, SweepSpec,
};
use crate::error::{KnockoutError, Result};
use crate::model::{
    elimination_distribution, expected_steps_game, expected_steps_round_closed_form,
    round_expected_steps, round_for, win_distribution, MatrixMode, ShotParams,
};
use crate::sim::{empirical_summary, simulate_many, SimConfig, DEFAULT_STEP_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "knockout",
    version,
    about = "Win probabilities for the basketball game Knockout"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact win and first-round elimination probabilities by position.
    Solve(SolveArgs),
    /// Expected number of steps until the game ends.
    Expected(ExpectedArgs),
    /// Monte Carlo estimate from shot-by-shot play.
    Simulate(SimulateArgs),
    /// Grid sweep over (n, p, q); writes CSV files and prints trends.
    Sweep(SweepArgs),
    /// Render a long-form CSV as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Corrected,
    Paper,
}

impl From<ModeArg> for MatrixMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Corrected => MatrixMode::Corrected,
            ModeArg::Paper => MatrixMode::PaperFaithful,
        }
    }
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Number of players in line.
    #[arg(long)]
    players: usize,
    /// Long-shot make probability.
    #[arg(long)]
    p: f64,
    /// Short-shot make probability.
    #[arg(long)]
    q: f64,
}

impl GameArgs {
    fn params(&self) -> Result<ShotParams> {
        if self.players < 2 {
            return Err(KnockoutError::InvalidPlayerCount {
                n: self.players,
                min: 2,
            });
        }
        ShotParams::new(self.p, self.q)
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, default_value = "corrected")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct ExpectedArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 100_000)]
    games: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
    step_cap: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Player counts as `n`, `start:stop` or `start:stop:step`.
    #[arg(long, default_value = "2:12")]
    n_range: String,
    /// Long-shot grid as `p` or `start:stop:step`.
    #[arg(long, default_value = "0:0.95:0.05")]
    p_range: String,
    /// Short-shot grid as `q` or `start:stop:step`.
    #[arg(long, default_value = "0.05:1:0.05")]
    q_range: String,
    /// Use the full grid (n < 60, step 0.01); overrides the range flags.
    #[arg(long)]
    full_grid: bool,
    #[arg(long, value_enum, default_value = "corrected")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for win_probs.csv and summary.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureKind {
    WinByPosition,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Long-form CSV (`n,p,q,mode,pos,win_prob`).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "win-by-position")]
    kind: FigureKind,
    #[arg(long)]
    out: PathBuf,
}

fn parse_real_range(s: &str) -> Result<Grid> {
    let bad = || KnockoutError::InvalidConfig(format!("malformed range {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [x] => Ok(Grid::single(x)),
        [a, b, step] => Grid::new(a, b, step),
        _ => Err(bad()),
    }
}

fn parse_count_range(s: &str) -> Result<Vec<usize>> {
    let bad = || KnockoutError::InvalidConfig(format!("malformed player range {s:?}"));
    let parts: Vec<usize> = s
        .split(':')
        .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let values: Vec<usize> = match parts[..] {
        [n] => vec![n],
        [a, b] => (a..=b).collect(),
        [a, b, step] if step > 0 => (a..=b).step_by(step).collect(),
        _ => return Err(bad()),
    };
    if values.is_empty() {
        return Err(KnockoutError::InvalidConfig(format!(
            "player range {s:?} is empty"
        )));
    }
    Ok(values)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let params = args.game.params()?;
    let n = args.game.players;
    let mode = MatrixMode::from(args.mode);
    let wins = win_distribution(n, params, mode)?;
    let round = round_for(n, params, mode)?;
    let elim = elimination_distribution(&round)?;
    let round_numeric = round_expected_steps(&round)?;
    let game_numeric = (2..=n)
        .map(|m| round_expected_steps(&round_for(m, params, mode)?))
        .sum::<Result<f64>>()?;
    let round_closed = expected_steps_round_closed_form(params);
    let game_closed = expected_steps_game(n, params)?;

    Ok(match args.format {
        OutputFormat::Json => to_json(&json!({
            "command": "solve",
            "n": n,
            "p": params.p(),
            "q": params.q(),
            "mode": mode,
            "win_probabilities": wins.probs,
            "round1_elimination": elim.probs,
            "expected_steps": {
                "round_numeric": round_numeric,
                "round_closed_form": round_closed,
                "game_numeric": game_numeric,
                "game_closed_form": game_closed,
            },
        })),
        OutputFormat::Csv => {
            let record = SweepRecord::from_win_probs(n, params, mode, wins.probs)?;
            let mut buf = Vec::new();
            write_long_csv(&mut buf, &[record])?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        OutputFormat::Human => {
            let mut s = format!(
                "Knockout, n={n}, p={}, q={}, mode={mode}\n\n position  win prob        round-1 elim\n",
                params.p(),
                params.q()
            );
            for (k, (w, e)) in wins.probs.iter().zip(&elim.probs).enumerate() {
                s += &format!(" {:>8}  {:<14}  {}\n", k + 1, fmt_real(*w), fmt_real(*e));
            }
            s += &format!(
                "\nexpected steps per round: {} (closed form {})\nexpected steps per game:  {} (closed form {})\n",
                fmt_real(round_numeric),
                fmt_real(round_closed),
                fmt_real(game_numeric),
                fmt_real(game_closed)
            );
            s
        }
    })
}

fn cmd_expected(args: &ExpectedArgs) -> Result<String> {
    let params = args.game.params()?;
    let n = args.game.players;
    let round = expected_steps_round_closed_form(params);
    let game = expected_steps_game(n, params)?;
    Ok(match args.format {
        OutputFormat::Json => to_json(&json!({
            "command": "expected",
            "n": n,
            "p": params.p(),
            "q": params.q(),
            "expected_steps_round": round,
            "expected_steps_game": game,
        })),
        OutputFormat::Csv => format!(
            "n,p,q,expected_steps_round,expected_steps_game\n{n},{},{},{},{}\n",
            fmt_real(params.p()),
            fmt_real(params.q()),
            fmt_real(round),
            fmt_real(game)
        ),
        OutputFormat::Human => format!(
            "expected steps: {} ({} rounds of {} steps)\n",
            fmt_real(game),
            n - 1,
            fmt_real(round)
        ),
    })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let params = args.game.params()?;
    let n = args.game.players;
    let mut config = SimConfig::new(n, params, args.games, args.seed);
    config.step_cap = args.step_cap;
    let result = simulate_many(&config, args.jobs)?;
    let summary = empirical_summary(&result)?;

    Ok(match args.format {
        OutputFormat::Json => to_json(&json!({
            "command": "simulate",
            "config": config,
            "result": result,
            "summary": summary,
        })),
        OutputFormat::Csv => {
            let mut s =
                String::from("n,p,q,games,seed,pos,win_prob,win_se,round1_elim,round1_elim_se\n");
            for k in 0..n {
                s += &format!(
                    "{n},{},{},{},{},{},{},{},{},{}\n",
                    fmt_real(params.p()),
                    fmt_real(params.q()),
                    args.games,
                    args.seed,
                    k + 1,
                    fmt_real(summary.win_probs[k]),
                    fmt_real(summary.win_std_errors[k]),
                    fmt_real(summary.round1_elim_probs[k]),
                    fmt_real(summary.round1_elim_std_errors[k]),
                );
            }
            s
        }
        OutputFormat::Human => {
            let mut s = format!(
                "Simulated {} games, n={n}, p={}, q={}, seed={}\n\n position  win freq        std err\n",
                args.games,
                params.p(),
                params.q(),
                args.seed
            );
            for k in 0..n {
                s += &format!(
                    " {:>8}  {:<14}  {}\n",
                    k + 1,
                    fmt_real(summary.win_probs[k]),
                    fmt_real(summary.win_std_errors[k])
                );
            }
            s += &format!(
                "\nmean steps: {} ± {}\nP1 early elimination: {} ± {}\n",
                fmt_real(summary.mean_steps),
                fmt_real(summary.mean_steps_std_error),
                fmt_real(summary.early_elim_rate),
                fmt_real(summary.early_elim_std_error)
            );
            s
        }
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let mode = MatrixMode::from(args.mode);
    let spec = if args.full_grid {
        SweepSpec::full_scale(mode)
    } else {
        SweepSpec {
            n_values: parse_count_range(&args.n_range)?,
            p_grid: parse_real_range(&args.p_range)?,
            q_grid: parse_real_range(&args.q_range)?,
            mode,
            exclusions: SweepSpec::default_exclusions(),
        }
    };
    let rows = run_sweep(&spec, args.jobs)?;
    let records: Vec<SweepRecord> = rows.iter().filter_map(SweepRow::record).cloned().collect();
    let excluded: Vec<&SweepRow> = rows.iter().filter(|r| r.record().is_none()).collect();

    fs::create_dir_all(&args.out)?;
    let long_path = args.out.join("win_probs.csv");
    let summary_path = args.out.join("summary.csv");
    write_long_csv(BufWriter::new(File::create(&long_path)?), &records)?;
    write_summary_csv(BufWriter::new(File::create(&summary_path)?), &records)?;

    let trends = detect_trends(&records);
    Ok(to_json(&json!({
        "command": "sweep",
        "mode": mode,
        "records": records.len(),
        "excluded": excluded,
        "files": {
            "long": long_path.file_name().and_then(|s| s.to_str()),
            "summary": summary_path.file_name().and_then(|s| s.to_str()),
        },
        "trends": trends,
    })))
}

fn cmd_plot(args: &PlotArgs) -> Result<String> {
    let series = read_long_csv(File::open(&args.input)?)?;
    let svg = match args.kind {
        FigureKind::WinByPosition => render_win_by_position(&series),
    };
    fs::write(&args.out, svg)?;
    Ok(String::new())
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Expected(a) => cmd_expected(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
