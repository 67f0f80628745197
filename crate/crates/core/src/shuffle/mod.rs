//! Shuffle rules: online insertion of each newcomer into the image ordering,
//! and reconstruction of the arrival order from an image.

mod engine;
mod invert;
mod rule;

pub use engine::{
    find_marginal, find_related_and_la, shuffle, shuffle_trace, ImageOrdering, Insertion,
    LateArriving, ShuffleState,
};
pub use invert::{invert, reconstruct, Reconstruction};
pub use rule::{arrange, search_arrival_order, CoordinateKind, CoordinateRule, ParseRuleError};
