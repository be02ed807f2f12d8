//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any hard criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use knockout_core::analysis::{detect_trends, run_sweep, SweepRow, SweepSpec};
use knockout_core::markov::{absorption_by_power_series, power_series_truncation};
use knockout_core::model::{
    build_round_chain, build_two_player_chain, elimination_distribution, expected_steps_game,
    expected_steps_round_closed_form, p1_early_elimination, round_expected_steps, round_for,
    three_player_elim_closed_form, two_player_win_closed_form, win_distribution, MatrixMode,
    RoundChain, ShotParams,
};
use knockout_core::sim::{empirical_summary, simulate_many, ShotRng, SimConfig};

const TABLE_1: [f64; 7] = [
    0.11402, 0.14597, 0.13370, 0.14727, 0.14634, 0.15462, 0.15807,
];
const TABLE_1_TOL: f64 = 5e-6;
const TABLE_2: [(f64, [f64; 10]); 3] = [
    (
        0.2,
        [
            0.0830, 0.1037, 0.0908, 0.1027, 0.0964, 0.1037, 0.1009, 0.1057, 0.1049, 0.1084,
        ],
    ),
    (
        0.5,
        [
            0.0806, 0.0981, 0.0926, 0.0982, 0.0986, 0.1017, 0.1036, 0.1063, 0.1088, 0.1116,
        ],
    ),
    (
        0.8,
        [
            0.0902, 0.0954, 0.0961, 0.0977, 0.0992, 0.1008, 0.1025, 0.1042, 0.1060, 0.1079,
        ],
    ),
];
const TABLE_2_TOL: f64 = 5e-5;
const TWO_PLAYER_TOL: f64 = 1e-10;
const Q_INDEPENDENCE_TOL: f64 = 1e-9;
const ROUND_STEPS_TOL: f64 = 1e-9;
const LONG_GAME_RANGE: (f64, f64) = (3050.8, 3051.8);
const EXAMPLE_TOL: f64 = 1e-10;
const MC_GAMES: u64 = 1_000_000;
const MC_SIGMAS: f64 = 4.0;
const MC_SEED: u64 = 20_240_601;
const ROW_SUM_TOL: f64 = 1e-12;
const DIST_SUM_TOL: f64 = 1e-9;
const POWER_SERIES_TOL: f64 = 1e-8;

enum Verdict {
    Pass,
    Fail,
    /// A criterion whose failure the contract asks to be reported, not hidden.
    Evidence,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        Self { verdict, detail }
    }
}

fn sp(p: f64, q: f64) -> ShotParams {
    ShotParams::new(p, q).expect("valid parameters")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs())
}

/// Modes whose n=7 solution reproduces the reference table.
fn table_one_modes() -> Vec<(MatrixMode, f64)> {
    MatrixMode::ALL
        .iter()
        .map(|&mode| {
            let w = win_distribution(7, sp(0.4, 0.9), mode).unwrap();
            (mode, max_abs_diff(&w.probs, &TABLE_1))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let diffs = table_one_modes();
    let elapsed = start.elapsed();
    let matching: Vec<String> = diffs
        .iter()
        .filter(|(_, d)| *d <= TABLE_1_TOL)
        .map(|(m, _)| m.to_string())
        .collect();
    let per_mode: Vec<String> = diffs
        .iter()
        .map(|(m, d)| format!("{m} max|Δ|={d:.2e}"))
        .collect();
    Outcome::check(
        !matching.is_empty() && elapsed < Duration::from_secs(1),
        format!(
            "matching mode(s): [{}]; {}; {}",
            matching.join(", "),
            per_mode.join(", "),
            within(elapsed, Duration::from_secs(1))
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let modes: Vec<MatrixMode> = table_one_modes()
        .into_iter()
        .filter(|(_, d)| *d <= TABLE_1_TOL)
        .map(|(m, _)| m)
        .collect();
    let mut detail = Vec::new();
    let mut ok = !modes.is_empty();
    for &mode in &modes {
        let worst = TABLE_2
            .iter()
            .map(|(p, row)| {
                max_abs_diff(&win_distribution(10, sp(*p, 0.9), mode).unwrap().probs, row)
            })
            .fold(0.0, f64::max);
        ok &= worst <= TABLE_2_TOL;
        detail.push(format!("{mode} max|Δ|={worst:.2e}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    Outcome::check(
        ok,
        format!(
            "{}; {}",
            detail.join(", "),
            within(elapsed, Duration::from_secs(1))
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_spread = 0.0f64;
    for i in 0..100 {
        let p = i as f64 / 100.0;
        let exact = two_player_win_closed_form(p).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for j in 1..=100 {
            let Ok(params) = ShotParams::new(p, j as f64 / 100.0) else {
                continue;
            };
            let w = win_distribution(2, params, MatrixMode::Corrected)
                .unwrap()
                .position(1);
            worst = worst.max((w - exact).abs());
            lo = lo.min(w);
            hi = hi.max(w);
        }
        worst_spread = worst_spread.max(hi - lo);
    }
    let elapsed = start.elapsed();
    Outcome::check(
        worst <= TWO_PLAYER_TOL
            && worst_spread <= Q_INDEPENDENCE_TOL
            && elapsed < Duration::from_secs(30),
        format!(
            "max|w1 − 1/(3−p)|={worst:.2e}, max spread over q={worst_spread:.2e}; {}",
            within(elapsed, Duration::from_secs(30))
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ShotRng::for_block(4, 0);
    let mut points = Vec::new();
    while points.len() < 20 {
        let p = 0.99 * rng.next_unit();
        let q = 0.01 + 0.99 * rng.next_unit();
        if let Ok(params) = ShotParams::new(p, q) {
            points.push(params);
        }
    }
    let mut worst = 0.0f64;
    for &params in &points {
        let closed = expected_steps_round_closed_form(params);
        for n in 2..=10 {
            for mode in MatrixMode::ALL {
                let numeric = round_expected_steps(&round_for(n, params, mode).unwrap()).unwrap();
                worst = worst.max((numeric - closed).abs());
            }
        }
    }
    let long = expected_steps_game(701, sp(0.4, 0.9)).unwrap();
    Outcome::check(
        worst <= ROUND_STEPS_TOL && (LONG_GAME_RANGE.0..=LONG_GAME_RANGE.1).contains(&long),
        format!("max|numeric − closed form|={worst:.2e} over n=2..10 × 20 points; E[steps](701, 0.4, 0.9)={long:.4}"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst = [0.0f64; 2];
    for i in 0..10 {
        for j in 0..10 {
            let params = sp(0.05 + 0.1 * i as f64, 0.1 + 0.1 * j as f64);
            let closed = three_player_elim_closed_form(params).unwrap();
            for (slot, mode) in MatrixMode::ALL.iter().enumerate() {
                let round = build_round_chain(3, params, *mode).unwrap();
                let e = elimination_distribution(&round).unwrap().position(1);
                worst[slot] = worst[slot].max((e - closed).abs());
            }
        }
    }
    let [corrected, paper] = worst;
    let detail = format!(
        "paper max|Δ|={paper:.2e}, corrected max|Δ|={corrected:.2e} (tolerance {EXAMPLE_TOL:e}, 10×10 grid)"
    );
    if paper <= EXAMPLE_TOL {
        Outcome::check(true, detail)
    } else if corrected <= EXAMPLE_TOL {
        Outcome {
            verdict: Verdict::Evidence,
            detail: format!(
                "{detail}; the closed form follows the corrected Block-4 column (eliminations routed to the at-risk player), not the verbatim matrix"
            ),
        }
    } else {
        Outcome::check(false, detail)
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let configs = [(2, 0.4, 0.9), (3, 0.4, 0.9), (7, 0.4, 0.9), (10, 0.5, 0.9)];
    let mut agrees_everywhere = [true; 2];
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, p, q) in configs {
        let params = sp(p, q);
        let result = simulate_many(&SimConfig::new(n, params, MC_GAMES, MC_SEED), jobs).unwrap();
        let s = empirical_summary(&result).unwrap();
        let mut z = Vec::new();
        for (slot, mode) in MatrixMode::ALL.iter().enumerate() {
            let exact = win_distribution(n, params, *mode).unwrap();
            let worst_z = exact
                .probs
                .iter()
                .zip(&s.win_probs)
                .zip(&s.win_std_errors)
                .map(|((e, m), se)| (e - m).abs() / se)
                .fold(0.0, f64::max);
            agrees_everywhere[slot] &= worst_z <= MC_SIGMAS;
            let elim = elimination_distribution(&round_for(n, params, *mode).unwrap()).unwrap();
            let elim_z = elim
                .probs
                .iter()
                .zip(&s.round1_elim_probs)
                .zip(&s.round1_elim_std_errors)
                .map(|((e, m), se)| (e - m).abs() / se)
                .fold(0.0, f64::max);
            z.push(format!("{mode} {worst_z:.1}σ (round 1 {elim_z:.1}σ)"));
        }
        let steps_z =
            (s.mean_steps - expected_steps_game(n, params).unwrap()).abs() / s.mean_steps_std_error;
        ok &= steps_z <= MC_SIGMAS;
        let mut line = format!("({n},{p},{q}) wins {}; steps {steps_z:.1}σ", z.join("/"));
        if n == 3 {
            let early_z =
                (s.early_elim_rate - p1_early_elimination(params)).abs() / s.early_elim_std_error;
            ok &= early_z <= MC_SIGMAS;
            line += &format!("; early elimination {early_z:.1}σ");
        }
        detail.push(line);
    }
    let elapsed = start.elapsed();
    let matching: Vec<&str> = MatrixMode::ALL
        .iter()
        .zip(agrees_everywhere)
        .filter(|(_, a)| *a)
        .map(|(m, _)| m.as_str())
        .collect();
    ok &= matching.len() == 1 && elapsed < Duration::from_secs(300);
    Outcome::check(
        ok,
        format!(
            "agreeing mode(s) across all configurations: [{}]; {}; {}",
            matching.join(", "),
            detail.join(" | "),
            within(elapsed, Duration::from_secs(300))
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rows = run_sweep(&SweepSpec::desk_scale(MatrixMode::Corrected), jobs).unwrap();
    let records: Vec<_> = rows.iter().filter_map(SweepRow::record).cloned().collect();
    let trends = detect_trends(&records);
    let exceptions_ok = trends
        .last_best_exceptions
        .iter()
        .all(|e| e.n % 2 == 1 && e.argmax == e.n - 1);
    let spread_at = |p: f64| {
        records
            .iter()
            .find(|r| r.n == 7 && (r.p - p).abs() < 1e-9 && (r.q - 0.9).abs() < 1e-9)
            .map(|r| r.spread)
            .expect("grid point present")
    };
    let (s1, s5, s9) = (spread_at(0.1), spread_at(0.5), spread_at(0.9));
    let elapsed = start.elapsed();
    Outcome::check(
        trends.first_worst_violations.is_empty()
            && exceptions_ok
            && s5 > s1
            && s5 > s9
            && elapsed < Duration::from_secs(120),
        format!(
            "{} records; first-worst violations {}; last-best fraction {:.4} ({} exceptions, all odd n with argmax n−1: {exceptions_ok}); spread n=7 q=0.9: p=0.1 {s1:.4}, p=0.5 {s5:.4}, p=0.9 {s9:.4}; {}",
            trends.record_count,
            trends.first_worst_violations.len(),
            trends.last_best_fraction,
            trends.last_best_exceptions.len(),
            within(elapsed, Duration::from_secs(120))
        ),
    )
}

fn power_series_gap(round: &RoundChain) -> f64 {
    let chain = round.chain();
    let exact = elimination_distribution(round).unwrap();
    let terms = power_series_truncation(chain, 1e-14).expect("series converges");
    let series = absorption_by_power_series(chain, round.start(), terms).unwrap();
    let mut by_player = vec![0.0; round.players()];
    for (col, v) in series.probabilities.iter().enumerate() {
        by_player[round.eliminated_player(col) - 1] += v;
    }
    max_abs_diff(&by_player, &exact.probs)
}

fn criterion_8() -> Outcome {
    let grid: Vec<ShotParams> = (0..10)
        .flat_map(|i| (1..=10).map(move |j| (i as f64 / 10.0, j as f64 / 10.0)))
        .filter_map(|(p, q)| ShotParams::new(p, q).ok())
        .collect();
    let mut ok = true;

    let counts_ok = (3..=20).all(|n| {
        build_round_chain(n, sp(0.4, 0.9), MatrixMode::Corrected)
            .unwrap()
            .chain()
            .state_count()
            == 6 * n
    });
    let reach_ok = MatrixMode::ALL.iter().all(|&mode| {
        let c = build_round_chain(2, sp(0.4, 0.9), mode).unwrap();
        c.chain().reachable_count(c.start()) == 7
    }) && build_two_player_chain(sp(0.4, 0.9)).chain().state_count() == 7;
    ok &= counts_ok && reach_ok;

    let (mut worst_row, mut worst_sum, mut worst_series) = (0.0f64, 0.0f64, 0.0f64);
    for &params in &grid {
        for mode in MatrixMode::ALL {
            for n in 2..=12 {
                let round = build_round_chain(n, params, mode).unwrap();
                let t = round.chain().transition_matrix();
                for i in 0..t.rows() {
                    worst_row = worst_row.max((t.row(i).iter().sum::<f64>() - 1.0).abs());
                }
                let e = elimination_distribution(&round_for(n, params, mode).unwrap()).unwrap();
                let w = win_distribution(n, params, mode).unwrap();
                worst_sum = worst_sum
                    .max((e.total() - 1.0).abs())
                    .max((w.total() - 1.0).abs());
                if n <= 4 {
                    worst_series = worst_series.max(power_series_gap(&round));
                }
            }
        }
        worst_series = worst_series.max(power_series_gap(&build_two_player_chain(params)));
    }
    ok &= worst_row <= ROW_SUM_TOL && worst_sum <= DIST_SUM_TOL && worst_series <= POWER_SERIES_TOL;
    Outcome::check(
        ok,
        format!(
            "6n states n=3..20: {counts_ok}; 7 reachable at n=2: {reach_ok}; max row-sum defect {worst_row:.1e}; max distribution-sum defect {worst_sum:.1e}; max power-series gap (n ≤ 4) {worst_series:.1e}"
        ),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_knockout"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "knockout {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn criterion_9() -> Outcome {
    let sim = |jobs: &str| {
        run_cli(&[
            "simulate",
            "--players",
            "7",
            "--p",
            "0.4",
            "--q",
            "0.9",
            "--games",
            "50000",
            "--seed",
            "7",
            "--jobs",
            jobs,
        ])
    };
    let dir = tempfile::tempdir().unwrap();
    let sweep = |jobs: &str, tag: &str| {
        let out = dir.path().join(tag);
        let stdout = run_cli(&[
            "sweep",
            "--n-range",
            "2:8",
            "--p-range",
            "0.1:0.9:0.2",
            "--q-range",
            "0.2:1:0.2",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        let long = std::fs::read(out.join("win_probs.csv")).unwrap();
        let summary = std::fs::read(out.join("summary.csv")).unwrap();
        (stdout, long, summary)
    };
    let sim_same = sim("1") == sim("1");
    let sim_jobs = sim("1") == sim("3") && sim("1") == sim("8");
    let sweep_same = sweep("2", "a") == sweep("2", "b");
    let sweep_jobs = sweep("1", "c") == sweep("5", "d");
    Outcome::check(
        sim_same && sim_jobs && sweep_same && sweep_jobs,
        format!(
            "simulate repeat {sim_same}, across --jobs {sim_jobs}; sweep repeat {sweep_same}, across --jobs {sweep_jobs}"
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failures = 0;
    for (id, run) in criteria {
        let outcome = run();
        let tag = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                failures += 1;
                "FAIL"
            }
            Verdict::Evidence => "FAIL (reported as evidence)",
        };
        println!("criterion {id}: {tag}: {}", outcome.detail);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
