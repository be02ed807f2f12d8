//! Closed-form expressions for special cases.

use crate::error::{KnockoutError, Result};
use crate::model::ShotParams;

/// Probability that the first player wins a two-player game: `1 / (3 - p)`.
pub fn two_player_win_closed_form(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(KnockoutError::InvalidParams {
            p,
            q: f64::NAN,
            reason: "p must lie in [0, 1)",
        });
    }
    Ok(1.0 / (3.0 - p))
}

/// Expected number of steps in one round, for any number of players.
pub fn expected_steps_round_closed_form(params: ShotParams) -> f64 {
    let (p, q) = (params.p(), params.q());
    -(p + q - 3.0) * (p * p - p * q - 2.0 * p + 2.0 * q + 1.0)
        / (q * (p - 3.0) * (p - 1.0) * (p - q + 1.0))
}

/// Expected steps in an `n`-player game: `n - 1` independent rounds.
pub fn expected_steps_game(n: usize, params: ShotParams) -> Result<f64> {
    if n < 2 {
        return Err(KnockoutError::InvalidPlayerCount { n, min: 2 });
    }
    Ok((n - 1) as f64 * expected_steps_round_closed_form(params))
}

/// Probability that `P1` is eliminated before making a basket in the
/// first round (before the ball reaches `P3`).
pub fn p1_early_elimination(params: ShotParams) -> f64 {
    let (p, q) = (params.p(), params.q());
    let mq = 1.0 - q;
    (1.0 - p) * p + (1.0 - p).powi(2) * mq * q * (1.0 / (1.0 - mq * mq))
}

/// Probability that the first of three players is eliminated in the
/// opening round, as a rational function of `p` and `q`.
///
/// The reference form leaves a common factor uncancelled; both
/// denominator factors are checked.
pub fn three_player_elim_closed_form(params: ShotParams) -> Result<f64> {
    let (p, q) = (params.p(), params.q());
    let (p2, p3, p4, q2) = (p * p, p * p * p, p * p * p * p, q * q);

    let num_a = p3 - 2.0 * p2 * q + p * q2 + p * q - 2.0 * q2 - p + 5.0 * q - 4.0;
    let shared = p4 - 2.0 * p3 * q + p2 * q2 - p3 + p2 * q + 4.0 * p2 - 3.0 * p * q - 3.0 * p + 3.0;
    let den_a = p4 - 2.0 * p3 * q + p2 * q2 - 3.0 * p3 + 5.0 * p2 * q - 2.0 * p * q2 + 4.0 * p2
        - 7.0 * p * q
        + 4.0 * q2
        + 3.0 * p
        - 8.0 * q
        + 7.0;

    if den_a.abs() < 1e-15 || shared.abs() < 1e-15 {
        return Err(KnockoutError::DenominatorZero { p, q });
    }
    Ok(-(num_a * shared) / (den_a * shared))
}
