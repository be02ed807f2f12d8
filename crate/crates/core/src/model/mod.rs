//! The Knockout round chains, per-round elimination probabilities, and
//! whole-game win probabilities.

mod closed_form;
mod distribution;
mod params;
mod round;

pub use closed_form::{
    expected_steps_game, expected_steps_round_closed_form, p1_early_elimination,
    three_player_elim_closed_form, two_player_win_closed_form,
};
pub use distribution::{
    elimination_distribution, new_position, round_expected_steps, round_for, win_distribution,
    win_distributions_up_to, EliminationDistribution, WinDistribution,
};
pub use params::{MatrixMode, ShotParams};
pub use round::{
    build_round_chain, build_round_matrices, build_two_player_chain, cyclic_shift, GameStateLabel,
    RoundChain, Shot,
};
