use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{KnockoutError, Result};

/// Long-shot and short-shot make probabilities shared by every player.
///
/// The constructor rejects the three parameter corners in which a round
/// can never end: `p = 1`, `q = 0`, and `(p, q) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotParams {
    p: f64,
    q: f64,
}

impl ShotParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let reason = if !p.is_finite() || !q.is_finite() {
            Some("probabilities must be finite")
        } else if !(0.0..=1.0).contains(&p) {
            Some("p must lie in [0, 1)")
        } else if !(0.0..=1.0).contains(&q) {
            Some("q must lie in (0, 1]")
        } else if p == 1.0 {
            Some("p=1 yields a game that never ends (every long shot is made)")
        } else if q == 0.0 {
            Some("q=0 yields a game that never ends (short shots are never made)")
        } else if p == 0.0 && q == 1.0 {
            Some("p=0, q=1 yields a game that never ends (every miss is followed by a make)")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(KnockoutError::InvalidParams { p, q, reason }),
            None => Ok(Self { p, q }),
        }
    }

    /// Long-shot make probability.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Short-shot make probability.
    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Which absorbing column Block 4 ("P_j short, then P_{j+1} long") uses.
///
/// `Corrected` sends a make by `P_{j+1}` to "P_j eliminated", as the game
/// rules and the seven-state two-player chain require. `PaperFaithful`
/// keeps the reference block matrix verbatim, which sends it to
/// "P_{j+1} eliminated". Every other entry is identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixMode {
    #[default]
    Corrected,
    #[serde(rename = "paper")]
    PaperFaithful,
}

impl MatrixMode {
    pub const ALL: [MatrixMode; 2] = [MatrixMode::Corrected, MatrixMode::PaperFaithful];

    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixMode::Corrected => "corrected",
            MatrixMode::PaperFaithful => "paper",
        }
    }
}

impl fmt::Display for MatrixMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixMode {
    type Err = KnockoutError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(MatrixMode::Corrected),
            "paper" => Ok(MatrixMode::PaperFaithful),
            other => Err(KnockoutError::Schema(format!(
                "unknown mode {other:?} (expected \"corrected\" or \"paper\")"
            ))),
        }
    }
}
