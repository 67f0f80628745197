//! Exhaustive and randomized property checking.
//!
//! Every check is a predicate over one instance (a game plus one or two
//! orders). Sweeps run the predicates over every instance a [`GameSource`]
//! yields and aggregate them into [`PropertyReport`]s; failures keep a
//! [`Witness`] that [`replay`] can re-run standalone.

pub mod examples;
mod mechanism_checks;
mod report;
mod rule_checks;
mod shuffle_checks;
mod source;
mod suite;

pub use mechanism_checks::{check_decomposition, check_mechanism_properties};
pub use report::{Property, PropertyReport, Witness, MAX_WITNESSES};
pub use rule_checks::check_coordinate_rule;
pub use shuffle_checks::check_shuffle_properties;
pub use source::{random_monotone_table, GameSource, SourceGame};
pub use suite::{replay, run_suite, SuiteError, SuiteOptions, SuiteReport, SUITES};

/// Knobs shared by all sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Spread games over the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { parallel: true }
    }
}

fn map_games<T, F>(games: Vec<SourceGame>, options: CheckOptions, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&SourceGame) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if options.parallel {
        games.par_iter().map(f).collect()
    } else {
        games.iter().map(f).collect()
    }
}
