//! Players and coalitions as bit-sets over at most [`MAX_PLAYERS`] players.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PLAYERS: usize = 16;

/// Index of a player inside a game, `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlayerId(pub u8);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of players.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        debug_assert!(bits >> MAX_PLAYERS == 0);
        Coalition(bits)
    }

    /// The coalition `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PLAYERS);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(player: PlayerId) -> Self {
        Coalition(1 << player.0)
    }

    pub fn from_players<I: IntoIterator<Item = PlayerId>>(players: I) -> Self {
        players.into_iter().fold(Coalition::EMPTY, |s, p| s.with(p))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, player: PlayerId) -> bool {
        self.0 & (1 << player.0) != 0
    }

    #[must_use]
    pub fn with(self, player: PlayerId) -> Self {
        Coalition(self.0 | (1 << player.0))
    }

    #[must_use]
    pub fn without(self, player: PlayerId) -> Self {
        Coalition(self.0 & !(1 << player.0))
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Coalition) -> bool {
        self != other && self.is_subset_of(other)
    }

    #[must_use]
    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Coalition) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn players(self) -> impl Iterator<Item = PlayerId> {
        let bits = self.0;
        (0..MAX_PLAYERS as u8)
            .filter(move |i| bits & (1 << i) != 0)
            .map(PlayerId)
    }

    /// All subsets of `self`, in increasing bit order (so every subset comes
    /// after its own subsets).
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p.0)?;
        }
        f.write_str("}")
    }
}

impl FromIterator<PlayerId> for Coalition {
    fn from_iter<I: IntoIterator<Item = PlayerId>>(iter: I) -> Self {
        Coalition::from_players(iter)
    }
}

/// Subset iterator using the carry-rippler trick.
#[derive(Debug, Clone)]
pub struct Subsets {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(Coalition(cur))
    }
}

/// Display names for the players of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Players {
    names: Vec<String>,
}

impl Players {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_PLAYERS {
            return Err(Error::Capacity {
                what: "player count",
                size: names.len(),
                max: MAX_PLAYERS,
            });
        }
        Ok(Players { names })
    }

    /// `A, B, C, ...`
    pub fn lettered(n: usize) -> Self {
        assert!(n <= MAX_PLAYERS);
        Players {
            names: (0..n)
                .map(|i| ((b'A' + i as u8) as char).to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, player: PlayerId) -> &str {
        &self.names[player.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<PlayerId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| PlayerId(i as u8))
    }

    pub fn all(&self) -> Coalition {
        Coalition::full(self.names.len())
    }

    pub fn format_coalition(&self, set: Coalition) -> String {
        let names: Vec<&str> = set.players().map(|p| self.name(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_sequence(&self, seq: &[PlayerId]) -> String {
        seq.iter()
            .map(|&p| self.name(p))
            .collect::<Vec<_>>()
            .join(",")
    }
}
