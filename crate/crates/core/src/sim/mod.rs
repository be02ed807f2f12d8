//! Shot-by-shot simulation of Knockout under the playground rules.
//!
//! Nothing here touches the Markov chains. Players stand in a queue; the
//! front two take the balls and both open with a long shot. Balls alternate
//! strictly, first ball then second. A miss means the next attempt with
//! that ball is a short shot. When the player at risk (the one further
//! ahead) scores first, they go to the back of the line and hand the ball
//! to the next player in the queue, who opens with a long shot. When the
//! trailing player scores first, the player ahead is eliminated, the
//! eliminator goes to the back of the line, and the next round starts with
//! the two players now at the front.
//!
//! A step starts with every first-ball shot, matching one transition of
//! the round chain.

mod rng;

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

pub use rng::{derive_key, ShotRng, ShotSource, GAMES_PER_BLOCK};

use crate::error::{KnockoutError, Result};
use crate::model::ShotParams;

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub params: ShotParams,
    pub games: u64,
    pub seed: u64,
    pub step_cap: u64,
}

impl SimConfig {
    pub fn new(n: usize, params: ShotParams, games: u64, seed: u64) -> Self {
        Self {
            n,
            params,
            games,
            seed,
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(KnockoutError::InvalidPlayerCount { n: self.n, min: 2 });
        }
        if self.games == 0 {
            return Err(KnockoutError::InvalidConfig(
                "games must be at least 1".into(),
            ));
        }
        if self.step_cap == 0 {
            return Err(KnockoutError::InvalidConfig(
                "step cap must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One played game. Positions are starting positions, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameTrace {
    pub winner_start_position: usize,
    pub steps: u64,
    pub elimination_order: Vec<usize>,
    /// Player 1 was eliminated in the first round without making a basket.
    pub p1_eliminated_early: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimResult {
    pub n: usize,
    pub win_counts: Vec<u64>,
    pub round1_elim_counts: Vec<u64>,
    pub total_steps: u64,
    pub total_steps_sq: u128,
    pub early_elim_count: u64,
    pub games_played: u64,
}

impl SimResult {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            win_counts: vec![0; n],
            round1_elim_counts: vec![0; n],
            total_steps: 0,
            total_steps_sq: 0,
            early_elim_count: 0,
            games_played: 0,
        }
    }

    pub fn record(&mut self, trace: &GameTrace) {
        self.win_counts[trace.winner_start_position - 1] += 1;
        self.round1_elim_counts[trace.elimination_order[0] - 1] += 1;
        self.total_steps += trace.steps;
        self.total_steps_sq += u128::from(trace.steps) * u128::from(trace.steps);
        self.early_elim_count += u64::from(trace.p1_eliminated_early);
        self.games_played += 1;
    }

    /// Adds another result for the same player count.
    pub fn merge(mut self, other: &SimResult) -> Self {
        assert_eq!(
            self.n, other.n,
            "merging results for different player counts"
        );
        for (a, b) in self.win_counts.iter_mut().zip(&other.win_counts) {
            *a += b;
        }
        for (a, b) in self
            .round1_elim_counts
            .iter_mut()
            .zip(&other.round1_elim_counts)
        {
            *a += b;
        }
        self.total_steps += other.total_steps;
        self.total_steps_sq += other.total_steps_sq;
        self.early_elim_count += other.early_elim_count;
        self.games_played += other.games_played;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Attempt {
    Long,
    Short,
}

#[derive(Debug, Clone, Copy)]
struct Ball {
    holder: usize,
    next: Attempt,
}

/// Plays one full game. A step-cap breach is reported as game 0; callers
/// that know the game index rewrite it.
pub fn simulate_game<S: ShotSource>(
    n: usize,
    params: ShotParams,
    source: &mut S,
    step_cap: u64,
) -> Result<GameTrace> {
    if n < 2 {
        return Err(KnockoutError::InvalidPlayerCount { n, min: 2 });
    }
    let mut line: VecDeque<usize> = (1..=n).collect();
    let mut elimination_order = Vec::with_capacity(n - 1);
    let mut steps = 0u64;
    let mut p1_eliminated_early = false;

    while line.len() > 1 {
        let first_round = elimination_order.is_empty();
        let mut p1_scored = false;
        let mut at_risk = line.pop_front().expect("two or more players");
        let mut trailing = line.pop_front().expect("two or more players");
        let mut balls = [
            Ball {
                holder: at_risk,
                next: Attempt::Long,
            },
            Ball {
                holder: trailing,
                next: Attempt::Long,
            },
        ];

        let eliminated = 'round: loop {
            steps += 1;
            if steps > step_cap {
                return Err(KnockoutError::StepCapExceeded {
                    game: 0,
                    cap: step_cap,
                });
            }
            for ball in &mut balls {
                let prob = match ball.next {
                    Attempt::Long => params.p(),
                    Attempt::Short => params.q(),
                };
                if !source.makes(prob) {
                    ball.next = Attempt::Short;
                    continue;
                }
                if ball.holder == 1 {
                    p1_scored = true;
                }
                if ball.holder == trailing {
                    break 'round at_risk;
                }
                // The player at risk scored first and is safe.
                line.push_back(at_risk);
                let receiver = line.pop_front().expect("line holds the scorer");
                ball.holder = receiver;
                ball.next = Attempt::Long;
                at_risk = trailing;
                trailing = receiver;
            }
        };

        line.push_back(trailing);
        if first_round && eliminated == 1 && !p1_scored {
            p1_eliminated_early = true;
        }
        elimination_order.push(eliminated);
    }

    Ok(GameTrace {
        winner_start_position: line[0],
        steps,
        elimination_order,
        p1_eliminated_early,
    })
}

fn simulate_block(config: &SimConfig, block: u64) -> Result<SimResult> {
    let first = block * GAMES_PER_BLOCK;
    let last = (first + GAMES_PER_BLOCK).min(config.games);
    let mut rng = ShotRng::for_block(config.seed, block);
    let mut out = SimResult::empty(config.n);
    for game in first..last {
        let trace = simulate_game(config.n, config.params, &mut rng, config.step_cap).map_err(
            |e| match e {
                KnockoutError::StepCapExceeded { cap, .. } => {
                    KnockoutError::StepCapExceeded { game, cap }
                }
                other => other,
            },
        )?;
        out.record(&trace);
    }
    Ok(out)
}

/// Plays `config.games` independent games on `jobs` threads. The result
/// depends only on `config`, never on `jobs`.
pub fn simulate_many(config: &SimConfig, jobs: usize) -> Result<SimResult> {
    config.validate()?;
    let blocks = config.games.div_ceil(GAMES_PER_BLOCK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| KnockoutError::InvalidConfig(e.to_string()))?;
    let partials: Vec<Result<SimResult>> = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| simulate_block(config, b))
            .collect()
    });
    let mut total = SimResult::empty(config.n);
    for part in partials {
        total = total.merge(&part?);
    }
    Ok(total)
}

/// Frequencies with binomial standard errors `√(f(1−f)/games)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSummary {
    pub games: u64,
    pub win_probs: Vec<f64>,
    pub win_std_errors: Vec<f64>,
    pub round1_elim_probs: Vec<f64>,
    pub round1_elim_std_errors: Vec<f64>,
    pub mean_steps: f64,
    pub mean_steps_std_error: f64,
    pub early_elim_rate: f64,
    pub early_elim_std_error: f64,
}

fn binomial(count: u64, games: u64) -> (f64, f64) {
    let f = count as f64 / games as f64;
    (f, (f * (1.0 - f) / games as f64).sqrt())
}

pub fn empirical_summary(result: &SimResult) -> Result<EmpiricalSummary> {
    let games = result.games_played;
    if games == 0 {
        return Err(KnockoutError::InvalidConfig("no games played".into()));
    }
    let split = |counts: &[u64]| -> (Vec<f64>, Vec<f64>) {
        counts.iter().map(|&c| binomial(c, games)).unzip()
    };
    let (win_probs, win_std_errors) = split(&result.win_counts);
    let (round1_elim_probs, round1_elim_std_errors) = split(&result.round1_elim_counts);
    let (early_elim_rate, early_elim_std_error) = binomial(result.early_elim_count, games);

    let g = games as f64;
    let mean_steps = result.total_steps as f64 / g;
    let variance = if games > 1 {
        ((result.total_steps_sq as f64 - g * mean_steps * mean_steps) / (g - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(EmpiricalSummary {
        games,
        win_probs,
        win_std_errors,
        round1_elim_probs,
        round1_elim_std_errors,
        mean_steps,
        mean_steps_std_error: (variance / g).sqrt(),
        early_elim_rate,
        early_elim_std_error,
    })
}
