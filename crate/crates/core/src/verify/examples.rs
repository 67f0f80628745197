//! The worked example games, with their stated arrival orders.

use crate::coalition::{Coalition, PlayerId, Players};
use crate::game::{CostFunction, ZeroOne};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub name: &'static str,
    pub players: Players,
    pub cost: CostFunction<Rational>,
    pub arrival: Vec<PlayerId>,
}

fn letters(names: &str) -> Vec<PlayerId> {
    names.bytes().map(|b| PlayerId(b - b'A')).collect()
}

fn sets(list: &[&str]) -> Vec<Coalition> {
    list.iter()
        .map(|s| Coalition::from_players(letters(s)))
        .collect()
}

fn zero_one(name: &'static str, n: usize, minimal: &[&str]) -> Example {
    let game = ZeroOne::new(n, sets(minimal)).expect("example game is valid");
    Example {
        name,
        players: Players::lettered(n),
        cost: game.into(),
        arrival: (0..n as u8).map(PlayerId).collect(),
    }
}

/// `c(S) = 1` iff `A ∈ S` or `{B, C} ⊆ S`.
pub fn g1() -> Example {
    zero_one("g1", 3, &["A", "BC"])
}

/// `c(S) = 1` iff `{A, B} ⊆ S`.
pub fn g2() -> Example {
    zero_one("g2", 3, &["AB"])
}

/// Seven players; minimal winning coalitions AC, BC, BDE, EF.
pub fn g3() -> Example {
    zero_one("g3", 7, &["AC", "BC", "BDE", "EF"])
}

/// Five players; minimal winning coalitions A, BD, CE.
pub fn g4() -> Example {
    zero_one("g4", 5, &["A", "BD", "CE"])
}

/// Two players with `c(A) = 1`, `c(B) = 2`, `c(AB) = 3`.
pub fn g5() -> Example {
    Example {
        name: "g5",
        players: Players::lettered(2),
        cost: CostFunction::table(2, [0, 1, 2, 3].map(Rational::from).to_vec())
            .expect("example table is valid"),
        arrival: letters("AB"),
    }
}

pub fn all() -> Vec<Example> {
    vec![g1(), g2(), g3(), g4(), g5()]
}

pub fn by_name(name: &str) -> Option<Example> {
    all().into_iter().find(|e| e.name == name)
}

/// Player ids for a string of single-letter names.
pub fn ids(names: &str) -> Vec<PlayerId> {
    letters(names)
}
