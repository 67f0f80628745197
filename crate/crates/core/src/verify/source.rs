use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::enumerate::enumerate_monotone_01;
use crate::error::{Error, Result};
use crate::game::{CostFunction, Table};
use crate::Rational;

/// Where a sweep gets its games from.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSource {
    /// Every monotone 0-1 game on exactly `n` players.
    Exhaustive { n: usize },
    /// Seeded random monotone integer tables; each game draws its player
    /// count uniformly from `min_players..=max_players`.
    Random {
        min_players: usize,
        max_players: usize,
        count: usize,
        seed: u64,
        max_value: u32,
    },
    /// A fixed list of games.
    Explicit(Vec<SourceGame>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceGame {
    pub key: String,
    pub cost: CostFunction<Rational>,
}

impl GameSource {
    pub fn key(&self) -> String {
        match self {
            GameSource::Exhaustive { n } => format!("exhaustive/n={n}"),
            GameSource::Random {
                min_players,
                max_players,
                count,
                seed,
                max_value,
            } => format!(
                "random/n={min_players}..{max_players}/count={count}/seed={seed}/max={max_value}"
            ),
            GameSource::Explicit(games) => format!("explicit/count={}", games.len()),
        }
    }

    pub fn games(&self) -> Result<Vec<SourceGame>> {
        match *self {
            GameSource::Explicit(ref games) => Ok(games.clone()),
            GameSource::Exhaustive { n } => {
                if n > 4 {
                    return Err(Error::Capacity {
                        what: "player count for exhaustive sweeps",
                        size: n,
                        max: 4,
                    });
                }
                Ok(enumerate_monotone_01(n)?
                    .enumerate()
                    .map(|(k, z)| SourceGame {
                        key: format!("exhaustive/n={n}/game={k}"),
                        cost: z.into(),
                    })
                    .collect())
            }
            GameSource::Random {
                min_players,
                max_players,
                count,
                seed,
                max_value,
            } => {
                if max_players > MAX_PLAYERS || min_players > max_players {
                    return Err(Error::Capacity {
                        what: "random player range",
                        size: max_players,
                        max: MAX_PLAYERS,
                    });
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count)
                    .map(|k| {
                        let n = rng.gen_range(min_players..=max_players);
                        SourceGame {
                            key: format!("{}/game={k}", self.key()),
                            cost: random_monotone_table(&mut rng, n, max_value),
                        }
                    })
                    .collect())
            }
        }
    }
}

/// Draws an integer in `0..=max_value` per nonempty coalition and lifts each
/// value to the maximum over its subsets.
pub fn random_monotone_table<R: Rng>(
    rng: &mut R,
    n: usize,
    max_value: u32,
) -> CostFunction<Rational> {
    let size = 1usize << n;
    let mut values = vec![0i64; size];
    for s in 1..size {
        let drawn = rng.gen_range(0..=max_value) as i64;
        let set = Coalition::from_bits(s as u32);
        let below = set
            .players()
            .map(|p| values[set.without(p).index()])
            .max()
            .unwrap_or(0);
        values[s] = drawn.max(below);
    }
    let table =
        Table::new(n, values.into_iter().map(Rational::from).collect()).expect("table size");
    CostFunction::Table(table)
}
