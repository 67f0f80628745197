use thiserror::Error;

use crate::coalition::{Coalition, PlayerId};
use crate::game::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coalition {coalition} is not a subset of the universe {universe}")]
    OutsideUniverse {
        coalition: Coalition,
        universe: Coalition,
    },
    #[error("player {player} is not a member of {coalition}")]
    NotAMember {
        player: PlayerId,
        coalition: Coalition,
    },
    #[error("{what}: {size} exceeds the supported maximum of {max}")]
    Capacity {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("cost function is not 0-1 valued")]
    NotZeroOne,
    #[error("invalid cost function: {0}")]
    Invalid(ValidationReport),
    #[error("player {0} has already arrived")]
    AlreadyPresent(PlayerId),
    #[error("ordering has no marginal player")]
    NoMarginal,
    #[error("ordering repeats player {0}")]
    DuplicatePlayer(PlayerId),
    #[error("ordering {0} is not in the image of the shuffle rule")]
    NotInImage(String),
    #[error("coalition list must not contain the empty coalition")]
    EmptyCoalition,
    #[error("table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
