use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalition::PlayerId;

/// Arranges the players that cannot become marginal, block by block.
///
/// A rule is a bijection on orderings of every player set that commutes with
/// prefix restriction. Because existing relative order can never change, such
/// a rule is fully described by where each newcomer enters the current block.
/// `anchor` is the marginal player owning the block, or `None` before any
/// marginal player exists.
pub trait CoordinateRule: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    /// Offset in `0..=block.len()` at which `newcomer` enters `block`.
    fn insert_offset(
        &self,
        block: &[PlayerId],
        newcomer: PlayerId,
        anchor: Option<PlayerId>,
    ) -> usize;

    /// The arrival order whose arrangement is `block`, if there is one.
    fn arrival_order(&self, block: &[PlayerId], anchor: Option<PlayerId>) -> Option<Vec<PlayerId>> {
        search_arrival_order(self, block, anchor)
    }
}

/// Inverts any rule by peeling off the last arrival: the member that, removed
/// from the block, the rule would re-insert at its own position.
pub fn search_arrival_order<R: CoordinateRule + ?Sized>(
    rule: &R,
    block: &[PlayerId],
    anchor: Option<PlayerId>,
) -> Option<Vec<PlayerId>> {
    if block.is_empty() {
        return Some(Vec::new());
    }
    for (idx, &last) in block.iter().enumerate() {
        let mut rest = block.to_vec();
        rest.remove(idx);
        if rule.insert_offset(&rest, last, anchor) == idx {
            if let Some(mut order) = search_arrival_order(rule, &rest, anchor) {
                order.push(last);
                return Some(order);
            }
        }
    }
    None
}

/// Applies `rule` to an arrival sequence.
pub fn arrange<R: CoordinateRule + ?Sized>(
    rule: &R,
    arrivals: &[PlayerId],
    anchor: Option<PlayerId>,
) -> Vec<PlayerId> {
    let mut block = Vec::with_capacity(arrivals.len());
    for &p in arrivals {
        let at = rule.insert_offset(&block, p, anchor).min(block.len());
        block.insert(at, p);
    }
    block
}

/// The built-in rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordinateKind {
    /// Newcomers enter at the block front: the block is the reversed arrival
    /// order. This is the Shapley-fair shuffle.
    Reverse,
    /// Newcomers enter at the block end: the block keeps arrival order.
    Arrival,
    /// Deliberately not a bijection: the smallest index so far goes to the
    /// front, anyone else to the back. Exists to exercise failure reporting.
    MinFront,
}

impl CoordinateKind {
    pub const VALID: [CoordinateKind; 2] = [CoordinateKind::Reverse, CoordinateKind::Arrival];

    pub fn as_str(self) -> &'static str {
        match self {
            CoordinateKind::Reverse => "reverse",
            CoordinateKind::Arrival => "arrival",
            CoordinateKind::MinFront => "min-front",
        }
    }
}

impl fmt::Display for CoordinateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown coordinate rule '{0}' (expected reverse, arrival or min-front)")]
pub struct ParseRuleError(pub String);

impl FromStr for CoordinateKind {
    type Err = ParseRuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reverse" => Ok(CoordinateKind::Reverse),
            "arrival" => Ok(CoordinateKind::Arrival),
            "min-front" => Ok(CoordinateKind::MinFront),
            other => Err(ParseRuleError(other.to_string())),
        }
    }
}

impl CoordinateRule for CoordinateKind {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn insert_offset(
        &self,
        block: &[PlayerId],
        newcomer: PlayerId,
        _anchor: Option<PlayerId>,
    ) -> usize {
        match self {
            CoordinateKind::Reverse => 0,
            CoordinateKind::Arrival => block.len(),
            CoordinateKind::MinFront => {
                if block.iter().all(|&p| newcomer < p) {
                    0
                } else {
                    block.len()
                }
            }
        }
    }

    fn arrival_order(&self, block: &[PlayerId], anchor: Option<PlayerId>) -> Option<Vec<PlayerId>> {
        match self {
            CoordinateKind::Reverse => Some(block.iter().rev().copied().collect()),
            CoordinateKind::Arrival => Some(block.to_vec()),
            CoordinateKind::MinFront => search_arrival_order(self, block, anchor),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u8]) -> Vec<PlayerId> {
        v.iter().copied().map(PlayerId).collect()
    }

    #[test]
    fn builtin_arrangements() {
        let arrivals = ids(&[2, 0, 3]);
        assert_eq!(
            arrange(&CoordinateKind::Reverse, &arrivals, None),
            ids(&[3, 0, 2])
        );
        assert_eq!(
            arrange(&CoordinateKind::Arrival, &arrivals, None),
            ids(&[2, 0, 3])
        );
        assert_eq!(
            arrange(&CoordinateKind::MinFront, &arrivals, None),
            ids(&[0, 2, 3])
        );
    }

    #[test]
    fn arrival_order_inverts_builtin_rules() {
        let arrivals = ids(&[2, 0, 3, 1]);
        for rule in CoordinateKind::VALID {
            let block = arrange(&rule, &arrivals, None);
            assert_eq!(rule.arrival_order(&block, None), Some(arrivals.clone()));
        }
    }

    #[derive(Debug)]
    struct Alternating;

    impl CoordinateRule for Alternating {
        fn name(&self) -> &str {
            "alternating"
        }
        fn insert_offset(&self, block: &[PlayerId], _: PlayerId, _: Option<PlayerId>) -> usize {
            if block.len().is_multiple_of(2) {
                0
            } else {
                block.len()
            }
        }
    }

    #[test]
    fn default_inverse_handles_custom_rule() {
        let arrivals = ids(&[4, 1, 3, 0, 2]);
        let block = arrange(&Alternating, &arrivals, None);
        assert_eq!(Alternating.arrival_order(&block, None), Some(arrivals));
    }

    #[test]
    fn parse_names() {
        for k in [
            CoordinateKind::Reverse,
            CoordinateKind::Arrival,
            CoordinateKind::MinFront,
        ] {
            assert_eq!(k.as_str().parse::<CoordinateKind>().unwrap(), k);
        }
        assert!("sideways".parse::<CoordinateKind>().is_err());
    }
}
