use serde::Serialize;

use crate::error::{KnockoutError, Result};
use crate::model::round::{build_round_chain, build_two_player_chain, RoundChain};
use crate::model::{MatrixMode, ShotParams};

/// Probability, by position in the round, of being the player eliminated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationDistribution {
    pub probs: Vec<f64>,
}

/// Probability, by starting position, of winning the whole game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinDistribution {
    pub probs: Vec<f64>,
}

macro_rules! positional {
    ($t:ty) => {
        impl $t {
            pub fn len(&self) -> usize {
                self.probs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.probs.is_empty()
            }

            /// Entry for a 1-based position.
            pub fn position(&self, k: usize) -> f64 {
                self.probs[k - 1]
            }

            pub fn total(&self) -> f64 {
                self.probs.iter().sum()
            }
        }
    };
}

positional!(EliminationDistribution);
positional!(WinDistribution);

pub fn elimination_distribution(round: &RoundChain) -> Result<EliminationDistribution> {
    let solver = round
        .chain()
        .solver()
        .map_err(|e| round.map_markov_error(e))?;
    let absorbed = solver
        .absorption_probabilities(round.start())
        .map_err(|e| round.map_markov_error(e))?;
    let mut probs = vec![0.0; round.players()];
    for (col, pr) in absorbed.probabilities.into_iter().enumerate() {
        probs[round.eliminated_player(col) - 1] += pr;
    }
    Ok(EliminationDistribution { probs })
}

/// Expected steps from the opening state until someone is eliminated.
pub fn round_expected_steps(round: &RoundChain) -> Result<f64> {
    round
        .chain()
        .solver()
        .and_then(|s| s.expected_steps(round.start()))
        .map_err(|e| round.map_markov_error(e))
}

/// Position of round-`m` player `k` in the next round after player `i`
/// is eliminated. All positions are 1-based.
///
/// The eliminator `P_{i+1}` goes to the back of the line and the next
/// round opens with `P_{i+2}`, so survivors line up as
/// `P_{i+2}, …, P_{i-1}, P_{i+1}`.
pub fn new_position(k: usize, i: usize, m: usize) -> Result<usize> {
    if m < 2 {
        return Err(KnockoutError::InvalidPlayerCount { n: m, min: 2 });
    }
    for pos in [k, i] {
        if pos == 0 || pos > m {
            return Err(KnockoutError::InvalidPosition {
                position: pos,
                size: m,
            });
        }
    }
    if k == i {
        return Err(KnockoutError::EliminatedHasNoPosition { k });
    }
    let offset = (k + m - i) % m;
    Ok(if offset == 1 { m - 1 } else { offset - 1 })
}

/// Round chain used for an `m`-player round. Two-player rounds always use
/// the dedicated seven-state chain; the mode only affects `m ≥ 3`.
pub fn round_for(m: usize, params: ShotParams, mode: MatrixMode) -> Result<RoundChain> {
    if m == 2 {
        Ok(build_two_player_chain(params))
    } else {
        build_round_chain(m, params, mode)
    }
}

/// Win distributions for every game size `1..=n_max`; entry `m - 1` is the
/// `m`-player game.
pub fn win_distributions_up_to(
    n_max: usize,
    params: ShotParams,
    mode: MatrixMode,
) -> Result<Vec<WinDistribution>> {
    if n_max < 1 {
        return Err(KnockoutError::InvalidPlayerCount { n: n_max, min: 1 });
    }
    let mut out = vec![WinDistribution { probs: vec![1.0] }];
    for m in 2..=n_max {
        let elim = elimination_distribution(&round_for(m, params, mode)?)?;
        let prev = &out[m - 2].probs;
        let mut probs = vec![0.0; m];
        for (k0, slot) in probs.iter_mut().enumerate() {
            let k = k0 + 1;
            *slot = (1..=m)
                .filter(|&i| i != k)
                .map(|i| {
                    let pos = new_position(k, i, m).expect("k != i, both in range");
                    elim.position(i) * prev[pos - 1]
                })
                .sum();
        }
        out.push(WinDistribution { probs });
    }
    Ok(out)
}

pub fn win_distribution(n: usize, params: ShotParams, mode: MatrixMode) -> Result<WinDistribution> {
    Ok(win_distributions_up_to(n, params, mode)?
        .pop()
        .expect("n >= 1"))
}
