//! Exhaustive enumeration of normalized monotone 0-1 functions.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::ZeroOne;

pub const MAX_ENUMERATION_PLAYERS: usize = 5;

/// Every normalized monotone 0-1 function on `n` players, each exactly once,
/// as an antichain of nonempty minimal coalitions. The empty antichain (the
/// constant-0 function) comes first.
pub fn enumerate_monotone_01(n: usize) -> Result<impl Iterator<Item = ZeroOne>> {
    if n > MAX_ENUMERATION_PLAYERS {
        return Err(Error::Capacity {
            what: "player count for game enumeration",
            size: n,
            max: MAX_ENUMERATION_PLAYERS,
        });
    }
    let candidates: Vec<Coalition> = (1u32..1 << n).map(Coalition::from_bits).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&candidates, &mut chosen, &mut out);
    let universe = Coalition::full(n);
    Ok(out.into_iter().map(move |sets| {
        ZeroOne::from_minimal_sets(n, universe, sets).expect("antichain over universe")
    }))
}

fn antichains(rest: &[Coalition], chosen: &mut Vec<Coalition>, out: &mut Vec<Vec<Coalition>>) {
    let Some((&head, tail)) = rest.split_first() else {
        out.push(chosen.clone());
        return;
    };
    antichains(tail, chosen, out);
    if chosen
        .iter()
        .all(|&c| !c.is_subset_of(head) && !head.is_subset_of(c))
    {
        chosen.push(head);
        antichains(tail, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CostFunction;
    use crate::Rational;
    use std::collections::HashSet;

    #[test]
    fn counts_match_dedekind_numbers_minus_one() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| enumerate_monotone_01(n).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 19, 167, 7580]);
    }

    #[test]
    fn distinct_and_valid() {
        let games: Vec<ZeroOne> = enumerate_monotone_01(4).unwrap().collect();
        let keys: HashSet<Vec<u32>> = games
            .iter()
            .map(|g| g.minimal_sets().iter().map(|s| s.bits()).collect())
            .collect();
        assert_eq!(keys.len(), games.len());
        for g in games {
            assert!(CostFunction::<Rational>::from(g).validate().is_valid());
        }
        assert!(enumerate_monotone_01(4)
            .unwrap()
            .next()
            .unwrap()
            .minimal_sets()
            .is_empty());
    }

    #[test]
    fn capacity() {
        assert!(enumerate_monotone_01(6).is_err());
    }
}
