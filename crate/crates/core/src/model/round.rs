//! Transition matrices for a single round of Knockout.
//!
//! A round with `n` players has five transient blocks of `n` states each,
//! followed by `n` absorbing "P_j eliminated" states. Within a block,
//! state `j` (1-based) involves the adjacent pair `P_j`, `P_{j+1}`
//! (indices mod `n`):
//!
//! | block | first shot      | second shot     | at risk  |
//! |-------|-----------------|-----------------|----------|
//! | 1     | `P_j` long      | `P_{j+1}` long  | `P_j`    |
//! | 2     | `P_j` short     | `P_{j+1}` short | `P_j`    |
//! | 3     | `P_{j+1}` short | `P_j` short     | `P_j`    |
//! | 4     | `P_j` short     | `P_{j+1}` long  | `P_j`    |
//! | 5     | `P_{j+1}` long  | `P_j` short     | `P_j`    |
//!
//! The first shot of every state is taken with the same ball, so one
//! transition is one "step" of one or two shots.

use std::fmt;

use serde::Serialize;

use crate::error::{KnockoutError, Result};
use crate::markov::{AbsorbingChain, DenseMatrix};
use crate::model::{MatrixMode, ShotParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shot {
    Long,
    Short,
}

impl Shot {
    fn abbrev(self) -> &'static str {
        match self {
            Shot::Long => "LS",
            Shot::Short => "SS",
        }
    }
}

/// Description of one game-state. Player numbers are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GameStateLabel {
    Shooting {
        first_shooter: usize,
        first_shot: Shot,
        second_shooter: usize,
        second_shot: Shot,
        at_risk: usize,
    },
    Eliminated {
        player: usize,
    },
}

impl fmt::Display for GameStateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GameStateLabel::Shooting {
                first_shooter,
                first_shot,
                second_shooter,
                second_shot,
                at_risk,
            } => write!(
                f,
                "P{first_shooter} takes {}, then P{second_shooter} takes {} (P{at_risk} at risk)",
                first_shot.abbrev(),
                second_shot.abbrev()
            ),
            GameStateLabel::Eliminated { player } => write!(f, "P{player} is eliminated"),
        }
    }
}

/// An `n × n` permutation matrix sending row `j` to column `j + shift` (mod `n`).
pub fn cyclic_shift(n: usize, shift: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, (j + shift) % n)] = 1.0;
    }
    m
}

/// A single round as an absorbing chain, with player bookkeeping.
#[derive(Debug, Clone)]
pub struct RoundChain {
    n: usize,
    params: ShotParams,
    mode: MatrixMode,
    chain: AbsorbingChain,
    states: Vec<GameStateLabel>,
    /// 1-based player eliminated by each absorbing column.
    eliminated: Vec<usize>,
}

impl RoundChain {
    pub fn players(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> ShotParams {
        self.params
    }

    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    pub fn chain(&self) -> &AbsorbingChain {
        &self.chain
    }

    /// Index of the opening state: `P_1` long, then `P_2` long.
    pub fn start(&self) -> usize {
        0
    }

    pub fn states(&self) -> &[GameStateLabel] {
        &self.states
    }

    /// Player removed when the chain is absorbed in column `j`.
    pub fn eliminated_player(&self, column: usize) -> usize {
        self.eliminated[column]
    }

    pub(crate) fn map_markov_error(&self, e: crate::markov::MarkovError) -> KnockoutError {
        use crate::markov::MarkovError;
        match e {
            MarkovError::NonAbsorbingChain { .. } | MarkovError::SingularMatrix { .. } => {
                KnockoutError::NonAbsorbingChain {
                    n: self.n,
                    p: self.params.p(),
                    q: self.params.q(),
                    source: e,
                }
            }
            other => KnockoutError::Markov(other),
        }
    }
}

/// The seven-state chain of a two-player round, states G1–G7:
///
/// * G1 `P1` LS, `P2` LS, `P1` at risk
/// * G2 `P1` SS, `P2` SS, `P1` at risk
/// * G3 `P1` SS, `P2` LS, `P1` at risk
/// * G4 `P1` LS, `P2` SS, `P2` at risk
/// * G5 `P1` SS, `P2` SS, `P2` at risk
/// * G6 `P2` eliminated
/// * G7 `P1` eliminated
pub fn build_two_player_chain(params: ShotParams) -> RoundChain {
    let (p, q) = (params.p(), params.q());
    let (mp, mq) = (1.0 - p, 1.0 - q);
    let transient = DenseMatrix::from_rows(&[
        vec![p * p, mp * mp, 0.0, p * mp, 0.0],
        vec![q * q, mq * mq, 0.0, q * mq, 0.0],
        vec![q * p, mq * mp, 0.0, q * mp, 0.0],
        vec![0.0, 0.0, mp * q, 0.0, mp * mq],
        vec![0.0, 0.0, mq * q, 0.0, mq * mq],
    ])
    .expect("static shape");
    let absorbing = DenseMatrix::from_rows(&[
        vec![0.0, mp * p],
        vec![0.0, mq * q],
        vec![0.0, mq * p],
        vec![p, 0.0],
        vec![q, 0.0],
    ])
    .expect("static shape");

    use Shot::{Long, Short};
    let shooting = |s1, s2, at_risk| GameStateLabel::Shooting {
        first_shooter: 1,
        first_shot: s1,
        second_shooter: 2,
        second_shot: s2,
        at_risk,
    };
    let states = vec![
        shooting(Long, Long, 1),
        shooting(Short, Short, 1),
        shooting(Short, Long, 1),
        shooting(Long, Short, 2),
        shooting(Short, Short, 2),
        GameStateLabel::Eliminated { player: 2 },
        GameStateLabel::Eliminated { player: 1 },
    ];
    let labels = states
        .iter()
        .enumerate()
        .map(|(i, s)| format!("G{}: {s}", i + 1))
        .collect();
    let chain = AbsorbingChain::new(transient, absorbing, labels)
        .expect("valid parameters give a stochastic matrix");
    RoundChain {
        n: 2,
        params,
        mode: MatrixMode::Corrected,
        chain,
        states,
        eliminated: vec![2, 1],
    }
}

/// Raw `(Q, R)` blocks of the `n`-player round for any `p, q ∈ [0, 1]`,
/// without the parameter-domain check. Useful for diagnosing the
/// degenerate corners; use [`build_round_chain`] for anything else.
pub fn build_round_matrices(
    n: usize,
    p: f64,
    q: f64,
    mode: MatrixMode,
) -> Result<(DenseMatrix, DenseMatrix)> {
    if n < 2 {
        return Err(KnockoutError::InvalidPlayerCount { n, min: 2 });
    }
    let (mp, mq) = (1.0 - p, 1.0 - q);
    let mut tr = DenseMatrix::zeros(5 * n, 5 * n);
    let mut ab = DenseMatrix::zeros(5 * n, n);
    let next = |k: usize| (k + 1) % n;
    let skip = |k: usize| (k + 2) % n;
    let (b1, b2, b3, b4, b5) = (0, n, 2 * n, 3 * n, 4 * n);

    for k in 0..n {
        tr[(b1 + k, b1 + skip(k))] += p * p;
        tr[(b1 + k, b2 + k)] += mp * mp;
        tr[(b1 + k, b5 + next(k))] += p * mp;
        ab[(b1 + k, k)] += mp * p;

        tr[(b2 + k, b1 + skip(k))] += q * q;
        tr[(b2 + k, b2 + k)] += mq * mq;
        tr[(b2 + k, b5 + next(k))] += q * mq;
        ab[(b2 + k, k)] += mq * q;

        tr[(b3 + k, b3 + k)] += mq * mq;
        tr[(b3 + k, b4 + next(k))] += mq * q;
        ab[(b3 + k, k)] += q;

        tr[(b4 + k, b1 + skip(k))] += q * p;
        tr[(b4 + k, b2 + k)] += mq * mp;
        tr[(b4 + k, b5 + next(k))] += q * mp;
        let victim = match mode {
            MatrixMode::Corrected => k,
            MatrixMode::PaperFaithful => next(k),
        };
        ab[(b4 + k, victim)] += mq * p;

        tr[(b5 + k, b3 + k)] += mp * mq;
        tr[(b5 + k, b4 + next(k))] += mp * q;
        ab[(b5 + k, k)] += p;
    }
    Ok((tr, ab))
}

fn round_state_labels(n: usize) -> Vec<GameStateLabel> {
    use Shot::{Long, Short};
    let mut out = Vec::with_capacity(6 * n);
    let blocks: [(bool, Shot, Shot); 5] = [
        (false, Long, Long),
        (false, Short, Short),
        (true, Short, Short),
        (false, Short, Long),
        (true, Long, Short),
    ];
    for (reversed, s1, s2) in blocks {
        for k in 0..n {
            let (lead, trail) = (k + 1, (k + 1) % n + 1);
            let (first, second) = if reversed {
                (trail, lead)
            } else {
                (lead, trail)
            };
            out.push(GameStateLabel::Shooting {
                first_shooter: first,
                first_shot: s1,
                second_shooter: second,
                second_shot: s2,
                at_risk: lead,
            });
        }
    }
    out.extend((1..=n).map(|player| GameStateLabel::Eliminated { player }));
    out
}

/// The general `6n`-state round chain. Accepts `n = 2`, in which case five
/// of the ten transient states are unreachable from the start.
pub fn build_round_chain(n: usize, params: ShotParams, mode: MatrixMode) -> Result<RoundChain> {
    let (tr, ab) = build_round_matrices(n, params.p(), params.q(), mode)?;
    let states = round_state_labels(n);
    let labels = states
        .iter()
        .enumerate()
        .map(|(i, s)| format!("({}) {s}", i + 1))
        .collect();
    let chain = AbsorbingChain::new(tr, ab, labels)?;
    Ok(RoundChain {
        n,
        params,
        mode,
        chain,
        states,
        eliminated: (1..=n).collect(),
    })
}
