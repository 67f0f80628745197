//! The JSON game file: players, a cost function and an optional arrival order.
//!
//! ```json
//! {
//!   "players": ["A", "B", "C"],
//!   "cost": { "kind": "minimal_coalitions", "sets": [["A"], ["B", "C"]] },
//!   "arrival": ["A", "B", "C"]
//! }
//! ```
//!
//! Table costs list `{"coalition": [...], "cost": "3/2"}` entries. A coalition
//! left out of the table costs the maximum over the listed coalitions it
//! contains, or 0 if it contains none.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalition::{Coalition, PlayerId, Players};
use crate::game::{CostFunction, Table, ValidationReport, ZeroOne};
use crate::order::ArrivalOrder;
use crate::scalar::max_of;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub players: Vec<String>,
    pub cost: CostSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSpec {
    MinimalCoalitions { sets: Vec<Vec<String>> },
    Table { entries: Vec<TableEntry> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub coalition: Vec<String>,
    pub cost: CostValue,
}

/// `"3/2"`, `"1.25"`, `"4"` or a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostValue {
    Integer(i64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("invalid cost function: {0}")]
    Invalid(ValidationReport),
}

/// A parsed and validated game.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGame {
    pub players: Players,
    pub cost: CostFunction<Rational>,
    pub arrival: Option<ArrivalOrder>,
}

fn field(path: impl Into<String>, message: impl Into<String>) -> GameFileError {
    GameFileError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// Exact parse of an integer, fraction or decimal string.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| format!("'{text}' is not a number"))
    };
    if let Some((num, den)) = t.split_once('/') {
        let den = int(den)?;
        if den == 0 {
            return Err(format!("'{text}' has a zero denominator"));
        }
        return Ok(Rational::new(int(num)?, den));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(format!("'{text}' is not a decimal"));
        }
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.trim().is_empty() || whole.trim() == "-" {
            0
        } else {
            int(whole)?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac = Rational::new(int(frac)?, scale);
        let whole = Rational::from(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    Ok(Rational::from(int(t)?))
}

impl CostValue {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            CostValue::Integer(v) => Ok(Rational::from(*v)),
            CostValue::Text(s) => parse_rational(s),
        }
    }
}

impl GameSpec {
    pub fn parse(text: &str) -> Result<Self, GameFileError> {
        serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            GameFileError::Syntax {
                line: e.line(),
                column: e.column(),
                message: message
                    .strip_suffix(&suffix)
                    .unwrap_or(&message)
                    .to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game spec serializes")
    }

    /// Parses and validates.
    pub fn load(text: &str) -> Result<LoadedGame, GameFileError> {
        Self::parse(text)?.build()
    }

    pub fn build(&self) -> Result<LoadedGame, GameFileError> {
        let players = self.build_players()?;
        let n = players.len();
        let coalition = |names: &[String], path: &str| -> Result<Coalition, GameFileError> {
            let mut set = Coalition::EMPTY;
            for (k, name) in names.iter().enumerate() {
                let id = players.id(name).ok_or_else(|| {
                    field(format!("{path}[{k}]"), format!("unknown player '{name}'"))
                })?;
                if set.contains(id) {
                    return Err(field(
                        format!("{path}[{k}]"),
                        format!("player '{name}' listed twice"),
                    ));
                }
                set = set.with(id);
            }
            Ok(set)
        };
        let cost = match &self.cost {
            CostSpec::MinimalCoalitions { sets } => {
                let mut generators = Vec::with_capacity(sets.len());
                for (k, names) in sets.iter().enumerate() {
                    let set = coalition(names, &format!("cost.sets[{k}]"))?;
                    if set.is_empty() {
                        return Err(GameFileError::Invalid(ValidationReport {
                            normalization: Some("1".to_string()),
                            empty_generator: true,
                            ..ValidationReport::default()
                        }));
                    }
                    generators.push(set);
                }
                CostFunction::ZeroOne(
                    ZeroOne::new(n, generators).map_err(|e| field("cost.sets", e.to_string()))?,
                )
            }
            CostSpec::Table { entries } => {
                let mut given: HashMap<Coalition, Rational> = HashMap::new();
                for (k, entry) in entries.iter().enumerate() {
                    let path = format!("cost.entries[{k}]");
                    let set = coalition(&entry.coalition, &format!("{path}.coalition"))?;
                    let value = entry
                        .cost
                        .to_rational()
                        .map_err(|m| field(format!("{path}.cost"), m))?;
                    if given.insert(set, value).is_some() {
                        return Err(field(
                            path,
                            format!("coalition {} listed twice", players.format_coalition(set)),
                        ));
                    }
                }
                let values = (0..1u32 << n)
                    .map(|bits| {
                        let s = Coalition::from_bits(bits);
                        given.get(&s).copied().unwrap_or_else(|| {
                            given
                                .iter()
                                .filter(|(t, _)| t.is_subset_of(s))
                                .fold(Rational::from(0), |acc, (_, &v)| max_of(acc, v))
                        })
                    })
                    .collect();
                CostFunction::Table(
                    Table::new(n, values).map_err(|e| field("cost", e.to_string()))?,
                )
            }
        };
        let report = cost.validate();
        if !report.is_valid() {
            return Err(GameFileError::Invalid(report));
        }
        let arrival = match &self.arrival {
            None => None,
            Some(names) => Some(parse_order(&players, names, "arrival")?),
        };
        Ok(LoadedGame {
            players,
            cost,
            arrival,
        })
    }

    fn build_players(&self) -> Result<Players, GameFileError> {
        for (k, name) in self.players.iter().enumerate() {
            if name.is_empty() || name.contains(',') {
                return Err(field(
                    format!("players[{k}]"),
                    "names must be nonempty and contain no commas",
                ));
            }
            if self.players[..k].contains(name) {
                return Err(field(
                    format!("players[{k}]"),
                    format!("duplicate player '{name}'"),
                ));
            }
        }
        Players::new(self.players.clone()).map_err(|e| field("players", e.to_string()))
    }

    /// The file form of a game; tables list every coalition of the universe.
    pub fn from_game(
        players: &Players,
        cost: &CostFunction<Rational>,
        arrival: Option<&[PlayerId]>,
    ) -> Self {
        let names = |set: Coalition| {
            set.players()
                .map(|p| players.name(p).to_string())
                .collect::<Vec<_>>()
        };
        let cost = match cost {
            CostFunction::ZeroOne(z) => CostSpec::MinimalCoalitions {
                sets: z.minimal_sets().iter().map(|&s| names(s)).collect(),
            },
            CostFunction::Table(_) => CostSpec::Table {
                entries: cost
                    .universe()
                    .subsets()
                    .filter(|s| !s.is_empty())
                    .map(|s| TableEntry {
                        coalition: names(s),
                        cost: CostValue::Text(cost.value(s).to_string()),
                    })
                    .collect(),
            },
        };
        GameSpec {
            players: players.names().to_vec(),
            cost,
            arrival: arrival.map(|seq| seq.iter().map(|&p| players.name(p).to_string()).collect()),
        }
    }
}

/// Resolves player names into an arrival order.
pub fn parse_order<S: AsRef<str>>(
    players: &Players,
    names: &[S],
    path: &str,
) -> Result<ArrivalOrder, GameFileError> {
    let mut ids = Vec::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        let name = name.as_ref().trim();
        let id = players
            .id(name)
            .ok_or_else(|| field(format!("{path}[{k}]"), format!("unknown player '{name}'")))?;
        if ids.contains(&id) {
            return Err(field(
                format!("{path}[{k}]"),
                format!("player '{name}' listed twice"),
            ));
        }
        ids.push(id);
    }
    Ok(ArrivalOrder::new(ids).expect("duplicates checked"))
}
