//! Exact win probabilities for the basketball game Knockout, computed from
//! absorbing Markov chains, with a Monte Carlo simulator to check them.
//!
//! ```
//! use knockout_core::model::{win_distribution, MatrixMode, ShotParams};
//!
//! let params = ShotParams::new(0.4, 0.9).unwrap();
//! let wins = win_distribution(7, params, MatrixMode::Corrected).unwrap();
//! assert!((wins.total() - 1.0).abs() < 1e-12);
//! assert!((wins.position(1) - 0.11402).abs() < 5e-6);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod markov;
pub mod model;
pub mod sim;

pub use error::{KnockoutError, Result};
pub use model::{win_distribution, MatrixMode, ShotParams};
