//! Two-by-two matrix games with rewards on the 0..=4 scale.
//!
//! Both players move simultaneously; each receives a reward from its own
//! matrix indexed by the joint move. Losses are rewards flipped around the
//! scale midpoint (`loss = 4 - reward`), so minimizing loss and maximizing
//! reward coincide.

use std::fmt;
use thiserror::Error;

/// Largest reward a matrix entry may hold; losses live on the same scale.
pub const MAX_REWARD: u8 = 4;

/// Identifiers accepted by [`MatrixGame::builtin`].
pub const BUILTIN_GAMES: [&str; 5] = [
    "prisoners_dilemma",
    "stag_hunt",
    "chicken",
    "battle_of_sexes",
    "matching_pennies",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("unknown game `{0}`; valid names: prisoners_dilemma, stag_hunt, chicken, battle_of_sexes, matching_pennies")]
    UnknownGame(String),
    #[error("reward {0} outside 0..={MAX_REWARD}")]
    RewardOutOfRange(u8),
}

/// One of the two moves in a 2x2 game.
///
/// The numeric convention follows the dilemma games: 0 defects, 1
/// cooperates. Coordination games (battle of sexes, matching pennies)
/// reuse the same two values with game-specific meaning; metrics that
/// speak of "cooperation" count plays of value 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Action {
    Defect,
    Cooperate,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Defect, Action::Cooperate];

    /// 0 for defect, 1 for cooperate; doubles as a table index.
    pub fn index(self) -> usize {
        match self {
            Action::Defect => 0,
            Action::Cooperate => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Action::Cooperate
        } else {
            Action::Defect
        }
    }

    pub fn other(self) -> Self {
        match self {
            Action::Defect => Action::Cooperate,
            Action::Cooperate => Action::Defect,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Simultaneous move of both seats.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct JointAction {
    pub row: Action,
    pub col: Action,
}

/// Loss on the 0..=4 scale for a reward on the same scale.
pub fn loss_of(reward: u8) -> Result<u8, GameError> {
    if reward > MAX_REWARD {
        return Err(GameError::RewardOutOfRange(reward));
    }
    Ok(MAX_REWARD - reward)
}

/// A named 2x2 game: one reward matrix per seat, indexed `[row][col]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixGame {
    name: String,
    row_rewards: [[u8; 2]; 2],
    col_rewards: [[u8; 2]; 2],
}

impl MatrixGame {
    /// Builds one of the five stock games by identifier.
    pub fn builtin(name: &str) -> Result<Self, GameError> {
        let (r1, r2): ([[u8; 2]; 2], [[u8; 2]; 2]) = match name {
            "prisoners_dilemma" => {
                let r1 = [[1, 4], [0, 3]];
                (r1, transpose(r1))
            }
            "stag_hunt" => {
                let r1 = [[2, 3], [0, 4]];
                (r1, transpose(r1))
            }
            "chicken" => {
                let r1 = [[0, 4], [1, 2]];
                (r1, transpose(r1))
            }
            "battle_of_sexes" => ([[2, 0], [0, 4]], [[4, 0], [0, 2]]),
            "matching_pennies" => ([[4, 0], [0, 4]], [[0, 4], [4, 0]]),
            other => return Err(GameError::UnknownGame(other.to_string())),
        };
        Self::custom(name, r1, r2)
    }

    /// Builds a game from explicit matrices, validating the reward range.
    pub fn custom(
        name: &str,
        row_rewards: [[u8; 2]; 2],
        col_rewards: [[u8; 2]; 2],
    ) -> Result<Self, GameError> {
        for m in [&row_rewards, &col_rewards] {
            for r in m {
                for &v in r {
                    if v > MAX_REWARD {
                        return Err(GameError::RewardOutOfRange(v));
                    }
                }
            }
        }
        Ok(MatrixGame {
            name: name.to_string(),
            row_rewards,
            col_rewards,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row_rewards(&self) -> [[u8; 2]; 2] {
        self.row_rewards
    }

    pub fn col_rewards(&self) -> [[u8; 2]; 2] {
        self.col_rewards
    }

    /// Rewards for (row seat, col seat) under a joint move.
    pub fn payoff(&self, joint: JointAction) -> (u8, u8) {
        let (i, j) = (joint.row.index(), joint.col.index());
        (self.row_rewards[i][j], self.col_rewards[i][j])
    }
}

fn transpose(m: [[u8; 2]; 2]) -> [[u8; 2]; 2] {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn joint(row: usize, col: usize) -> JointAction {
        JointAction {
            row: Action::ALL[row],
            col: Action::ALL[col],
        }
    }

    #[test]
    fn prisoners_dilemma_payoffs() {
        let g = MatrixGame::builtin("prisoners_dilemma").unwrap();
        assert_eq!(g.payoff(joint(0, 0)), (1, 1));
        assert_eq!(g.payoff(joint(1, 1)), (3, 3));
        assert_eq!(g.payoff(joint(0, 1)), (4, 0));
        assert_eq!(g.payoff(joint(1, 0)), (0, 4));
    }

    #[test]
    fn stag_hunt_payoffs() {
        let g = MatrixGame::builtin("stag_hunt").unwrap();
        assert_eq!(g.payoff(joint(1, 1)), (4, 4));
        assert_eq!(g.payoff(joint(0, 0)), (2, 2));
        assert_eq!(g.payoff(joint(0, 1)), (3, 0));
    }

    #[test]
    fn chicken_payoffs() {
        let g = MatrixGame::builtin("chicken").unwrap();
        assert_eq!(g.payoff(joint(1, 0)), (1, 4));
        assert_eq!(g.payoff(joint(0, 0)), (0, 0));
        assert_eq!(g.payoff(joint(1, 1)), (2, 2));
    }

    #[test]
    fn transposed_games_are_seat_symmetric() {
        for name in ["prisoners_dilemma", "stag_hunt", "chicken"] {
            let g = MatrixGame::builtin(name).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(
                        g.row_rewards()[i][j],
                        g.col_rewards()[j][i],
                        "{name} not transpose-symmetric at ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn battle_of_sexes_mirror_symmetry() {
        let g = MatrixGame::builtin("battle_of_sexes").unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.col_rewards()[i][j], g.row_rewards()[1 - i][1 - j]);
            }
        }
    }

    #[test]
    fn matching_pennies_zero_sum_on_scale() {
        let g = MatrixGame::builtin("matching_pennies").unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.row_rewards()[i][j] + g.col_rewards()[i][j], 4);
            }
        }
    }

    #[test]
    fn all_builtin_rewards_in_range() {
        for name in BUILTIN_GAMES {
            let g = MatrixGame::builtin(name).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let (a, b) = g.payoff(joint(i, j));
                    assert!(a <= MAX_REWARD && b <= MAX_REWARD);
                }
            }
        }
    }

    #[test]
    fn unknown_game_is_rejected() {
        let err = MatrixGame::builtin("poker").unwrap_err();
        assert_eq!(err, GameError::UnknownGame("poker".into()));
    }

    #[test]
    fn custom_game_validates_range() {
        let err = MatrixGame::custom("bad", [[0, 5], [0, 0]], [[0; 2]; 2]).unwrap_err();
        assert_eq!(err, GameError::RewardOutOfRange(5));
    }

    #[test]
    fn loss_flips_the_scale() {
        assert_eq!(loss_of(4), Ok(0));
        assert_eq!(loss_of(0), Ok(4));
        assert_eq!(loss_of(3), Ok(1));
        assert_eq!(loss_of(5), Err(GameError::RewardOutOfRange(5)));
    }
}
