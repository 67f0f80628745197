//! Arrival orders and the orderings derived from them.

use itertools::Itertools;

use crate::coalition::{Coalition, PlayerId};
use crate::error::{Error, Result};

/// A permutation of a set of players, earliest arrival first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrivalOrder(Vec<PlayerId>);

impl ArrivalOrder {
    pub fn new(players: Vec<PlayerId>) -> Result<Self> {
        let mut seen = Coalition::EMPTY;
        for &p in &players {
            if seen.contains(p) {
                return Err(Error::DuplicatePlayer(p));
            }
            seen = seen.with(p);
        }
        Ok(ArrivalOrder(players))
    }

    pub fn as_slice(&self) -> &[PlayerId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<PlayerId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn players(&self) -> Coalition {
        Coalition::from_players(self.0.iter().copied())
    }

    /// The first `k` arrivals.
    pub fn prefix(&self, k: usize) -> ArrivalOrder {
        ArrivalOrder(self.0[..k].to_vec())
    }

    /// `p(i, π)`: the players arriving no later than `player`.
    pub fn predecessors_and_self(&self, player: PlayerId) -> Result<Coalition> {
        predecessors_and_self(&self.0, player)
    }

    /// Same relative order, members of `set` only.
    pub fn restrict(&self, set: Coalition) -> Result<ArrivalOrder> {
        if !set.is_subset_of(self.players()) {
            return Err(Error::OutsideUniverse {
                coalition: set,
                universe: self.players(),
            });
        }
        Ok(ArrivalOrder(restrict_sequence(&self.0, set)))
    }

    pub fn position(&self, player: PlayerId) -> Option<usize> {
        self.0.iter().position(|&p| p == player)
    }
}

impl From<ArrivalOrder> for Vec<PlayerId> {
    fn from(order: ArrivalOrder) -> Self {
        order.0
    }
}

pub(crate) fn predecessors_and_self(seq: &[PlayerId], player: PlayerId) -> Result<Coalition> {
    let pos = seq
        .iter()
        .position(|&p| p == player)
        .ok_or(Error::NotAMember {
            player,
            coalition: Coalition::from_players(seq.iter().copied()),
        })?;
    Ok(Coalition::from_players(seq[..=pos].iter().copied()))
}

pub(crate) fn restrict_sequence(seq: &[PlayerId], set: Coalition) -> Vec<PlayerId> {
    seq.iter().copied().filter(|&p| set.contains(p)).collect()
}

/// Every ordering of `set`, in lexicographic order of player indices.
pub fn orderings(set: Coalition) -> impl Iterator<Item = ArrivalOrder> {
    let members: Vec<PlayerId> = set.players().collect();
    let k = members.len();
    members.into_iter().permutations(k).map(ArrivalOrder)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u8]) -> Vec<PlayerId> {
        v.iter().copied().map(PlayerId).collect()
    }

    #[test]
    fn restrict_preserves_relative_order() {
        // [A,B,C,D] restricted to {B,D} is [B,D]
        let order = ArrivalOrder::new(ids(&[0, 1, 2, 3])).unwrap();
        let set = Coalition::from_players(ids(&[1, 3]));
        assert_eq!(
            order.restrict(set).unwrap().as_slice(),
            ids(&[1, 3]).as_slice()
        );
        let shuffled = ArrivalOrder::new(ids(&[3, 0, 1])).unwrap();
        assert_eq!(
            shuffled.restrict(set).unwrap().as_slice(),
            ids(&[3, 1]).as_slice()
        );
    }

    #[test]
    fn restrict_outside_players_is_an_error() {
        let order = ArrivalOrder::new(ids(&[0, 1])).unwrap();
        assert!(order.restrict(Coalition::from_players(ids(&[2]))).is_err());
    }

    #[test]
    fn duplicates_rejected() {
        assert_eq!(
            ArrivalOrder::new(ids(&[0, 1, 0])),
            Err(Error::DuplicatePlayer(PlayerId(0)))
        );
    }

    #[test]
    fn predecessor_sets() {
        let order = ArrivalOrder::new(ids(&[2, 0, 1])).unwrap();
        assert_eq!(
            order.predecessors_and_self(PlayerId(0)).unwrap(),
            Coalition::from_players(ids(&[0, 2]))
        );
        assert_eq!(order.prefix(1).as_slice(), ids(&[2]).as_slice());
    }

    #[test]
    fn orderings_count() {
        assert_eq!(orderings(Coalition::full(4)).count(), 24);
        assert_eq!(orderings(Coalition::EMPTY).count(), 1);
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(7), 5040);
    }
}
