//! C ABI for the Knockout solver.
//!
//! Every function returns a [`KnockoutStatus`] and writes results through
//! out-pointers. Distributions are written into caller-owned buffers of
//! length at least `n`. Round chains are exposed as an opaque
//! [`KnockoutRound`] handle that must be released with
//! [`knockout_round_free`].

#![allow(clippy::missing_safety_doc)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knockout_core::model::{
    elimination_distribution, expected_steps_game, p1_early_elimination, round_expected_steps,
    round_for, three_player_elim_closed_form, two_player_win_closed_form, win_distribution,
    MatrixMode, RoundChain, ShotParams,
};
use knockout_core::sim::{simulate_many, SimConfig};
use knockout_core::KnockoutError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnockoutStatus {
    Ok = 0,
    InvalidParams = 1,
    InvalidPlayerCount = 2,
    NullPointer = 3,
    BufferTooSmall = 4,
    NonAbsorbingChain = 5,
    StepCapExceeded = 6,
    InvalidArgument = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnockoutMode {
    Corrected = 0,
    PaperFaithful = 1,
}

impl From<KnockoutMode> for MatrixMode {
    fn from(m: KnockoutMode) -> Self {
        match m {
            KnockoutMode::Corrected => MatrixMode::Corrected,
            KnockoutMode::PaperFaithful => MatrixMode::PaperFaithful,
        }
    }
}

/// Opaque round chain for a fixed `(n, p, q, mode)`.
pub struct KnockoutRound {
    round: RoundChain,
}

fn status_of(e: &KnockoutError) -> KnockoutStatus {
    match e {
        KnockoutError::InvalidParams { .. } | KnockoutError::DenominatorZero { .. } => {
            KnockoutStatus::InvalidParams
        }
        KnockoutError::InvalidPlayerCount { .. } => KnockoutStatus::InvalidPlayerCount,
        KnockoutError::NonAbsorbingChain { .. } | KnockoutError::Markov(_) => {
            KnockoutStatus::NonAbsorbingChain
        }
        KnockoutError::StepCapExceeded { .. } => KnockoutStatus::StepCapExceeded,
        KnockoutError::EliminatedHasNoPosition { .. }
        | KnockoutError::InvalidPosition { .. }
        | KnockoutError::InvalidConfig(_) => KnockoutStatus::InvalidArgument,
        KnockoutError::Schema(_) | KnockoutError::Io(_) => KnockoutStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), KnockoutStatus>) -> KnockoutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KnockoutStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => KnockoutStatus::Internal,
    }
}

fn params(p: f64, q: f64) -> Result<ShotParams, KnockoutStatus> {
    ShotParams::new(p, q).map_err(|e| status_of(&e))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), KnockoutStatus> {
    if out.is_null() {
        return Err(KnockoutStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn write_slice<T: Copy>(
    out: *mut T,
    len: usize,
    values: &[T],
) -> Result<(), KnockoutStatus> {
    if out.is_null() {
        return Err(KnockoutStatus::NullPointer);
    }
    if len < values.len() {
        return Err(KnockoutStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn knockout_status_message(status: KnockoutStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        KnockoutStatus::Ok => b"ok\0",
        KnockoutStatus::InvalidParams => b"invalid shot parameters\0",
        KnockoutStatus::InvalidPlayerCount => b"invalid player count\0",
        KnockoutStatus::NullPointer => b"null pointer argument\0",
        KnockoutStatus::BufferTooSmall => b"output buffer too small\0",
        KnockoutStatus::NonAbsorbingChain => b"round chain is not absorbing\0",
        KnockoutStatus::StepCapExceeded => b"simulation step cap exceeded\0",
        KnockoutStatus::InvalidArgument => b"invalid argument\0",
        KnockoutStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Builds the round chain for `n` players. On success `*out` owns a new
/// handle.
#[no_mangle]
pub unsafe extern "C" fn knockout_round_new(
    n: usize,
    p: f64,
    q: f64,
    mode: KnockoutMode,
    out: *mut *mut KnockoutRound,
) -> KnockoutStatus {
    guard(|| {
        if out.is_null() {
            return Err(KnockoutStatus::NullPointer);
        }
        let round = round_for(n, params(p, q)?, mode.into()).map_err(|e| status_of(&e))?;
        write(out, Box::into_raw(Box::new(KnockoutRound { round })))
    })
}

/// Releases a handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn knockout_round_free(round: *mut KnockoutRound) {
    if !round.is_null() {
        drop(Box::from_raw(round));
    }
}

#[no_mangle]
pub unsafe extern "C" fn knockout_round_players(
    round: *const KnockoutRound,
    out: *mut usize,
) -> KnockoutStatus {
    guard(|| {
        let round = round.as_ref().ok_or(KnockoutStatus::NullPointer)?;
        write(out, round.round.players())
    })
}

/// Probability that each round position is eliminated, written to `out[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn knockout_round_elimination(
    round: *const KnockoutRound,
    out: *mut f64,
    len: usize,
) -> KnockoutStatus {
    guard(|| {
        let round = round.as_ref().ok_or(KnockoutStatus::NullPointer)?;
        let dist = elimination_distribution(&round.round).map_err(|e| status_of(&e))?;
        write_slice(out, len, &dist.probs)
    })
}

#[no_mangle]
pub unsafe extern "C" fn knockout_round_expected_steps(
    round: *const KnockoutRound,
    out: *mut f64,
) -> KnockoutStatus {
    guard(|| {
        let round = round.as_ref().ok_or(KnockoutStatus::NullPointer)?;
        write(
            out,
            round_expected_steps(&round.round).map_err(|e| status_of(&e))?,
        )
    })
}

/// Win probability of each starting position, written to `out[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn knockout_win_distribution(
    n: usize,
    p: f64,
    q: f64,
    mode: KnockoutMode,
    out: *mut f64,
    len: usize,
) -> KnockoutStatus {
    guard(|| {
        let w = win_distribution(n, params(p, q)?, mode.into()).map_err(|e| status_of(&e))?;
        write_slice(out, len, &w.probs)
    })
}

#[no_mangle]
pub unsafe extern "C" fn knockout_expected_steps_game(
    n: usize,
    p: f64,
    q: f64,
    out: *mut f64,
) -> KnockoutStatus {
    guard(|| {
        write(
            out,
            expected_steps_game(n, params(p, q)?).map_err(|e| status_of(&e))?,
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn knockout_two_player_win(p: f64, out: *mut f64) -> KnockoutStatus {
    guard(|| {
        write(
            out,
            two_player_win_closed_form(p).map_err(|e| status_of(&e))?,
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn knockout_three_player_elimination(
    p: f64,
    q: f64,
    out: *mut f64,
) -> KnockoutStatus {
    guard(|| {
        write(
            out,
            three_player_elim_closed_form(params(p, q)?).map_err(|e| status_of(&e))?,
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn knockout_p1_early_elimination(
    p: f64,
    q: f64,
    out: *mut f64,
) -> KnockoutStatus {
    guard(|| write(out, p1_early_elimination(params(p, q)?)))
}

/// Plays `games` simulated games. Win counts by starting position go to
/// `win_counts[0..n]` and the mean game length to `*mean_steps`. The
/// result does not depend on `jobs`.
#[no_mangle]
pub unsafe extern "C" fn knockout_simulate(
    n: usize,
    p: f64,
    q: f64,
    games: u64,
    seed: u64,
    jobs: usize,
    step_cap: u64,
    win_counts: *mut u64,
    len: usize,
    mean_steps: *mut f64,
) -> KnockoutStatus {
    guard(|| {
        if win_counts.is_null() || mean_steps.is_null() {
            return Err(KnockoutStatus::NullPointer);
        }
        if len < n {
            return Err(KnockoutStatus::BufferTooSmall);
        }
        let mut config = SimConfig::new(n, params(p, q)?, games, seed);
        config.step_cap = step_cap;
        let result = simulate_many(&config, jobs).map_err(|e| status_of(&e))?;
        write_slice(win_counts, len, &result.win_counts)?;
        let mean = if result.games_played == 0 {
            0.0
        } else {
            result.total_steps as f64 / result.games_played as f64
        };
        write(mean_steps, mean)
    })
}
