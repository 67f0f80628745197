//! Online cost sharing with incentives for early arrival.
//!
//! Players arrive one at a time and the cost of the coalition present so far
//! is split among them immediately. The mechanisms here shuffle the arrival
//! order by an online bijection and charge each player her marginal cost in
//! the shuffled order. Averaged over uniformly random arrival orders, the
//! shares are the Shapley values.
//!
//! * [`game`]: cost functions (explicit tables and minimal-coalition 0-1 form)
//! * [`shuffle`]: the shuffle rules and their inverse
//! * [`mechanism`]: per-arrival allocation traces
//! * [`decompose`]: level-set decomposition of general functions into 0-1 parts
//! * [`verify`]: exhaustive and randomized property checking

pub mod coalition;
pub mod decompose;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod gamefile;
pub mod mechanism;
pub mod order;
pub mod report;
pub mod scalar;
pub mod shapley;
pub mod shuffle;
pub mod verify;

pub use coalition::{Coalition, PlayerId, Players, MAX_PLAYERS};
pub use error::{Error, Result};
pub use game::{CostFunction, Table, ValidationReport, ZeroOne};
pub use order::ArrivalOrder;
pub use scalar::Scalar;

/// Exact rational, the default value type.
pub type Rational = num_rational::Ratio<i64>;

pub type RationalCost = CostFunction<Rational>;
pub type F64Cost = CostFunction<f64>;
pub type F32Cost = CostFunction<f32>;
pub type RationalTrace = mechanism::AllocationTrace<Rational>;
pub type F64Trace = mechanism::AllocationTrace<f64>;
pub type RationalDecomposition = decompose::Decomposition<Rational>;
