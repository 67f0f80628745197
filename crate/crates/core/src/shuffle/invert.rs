use crate::coalition::{Coalition, PlayerId};
use crate::error::{Error, Result};
use crate::game::ZeroOne;
use crate::order::ArrivalOrder;

use super::engine::find_related_and_la;
use super::rule::CoordinateRule;

/// The arrival order recovered from an image, plus the players in the order
/// they were identified as the latest remaining arrival.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub order: ArrivalOrder,
    pub last_arrivals: Vec<PlayerId>,
}

/// The unique arrival order whose shuffle is `image`.
pub fn invert<R: CoordinateRule + ?Sized>(
    image: &[PlayerId],
    game: &ZeroOne,
    rule: &R,
) -> Result<ArrivalOrder> {
    reconstruct(image, game, rule).map(|r| r.order)
}

/// Peels arrivals off the end of the order. While the remaining players cost
/// 1, the late-arriving block of the marginal player holds the latest
/// arrivals (or, when empty, the marginal player herself is the latest).
/// Once they cost 0 the rest is the rule's arrangement of the earliest ones.
pub fn reconstruct<R: CoordinateRule + ?Sized>(
    image: &[PlayerId],
    game: &ZeroOne,
    rule: &R,
) -> Result<Reconstruction> {
    let players = ArrivalOrder::new(image.to_vec())?.players();
    if !players.is_subset_of(game.universe()) {
        return Err(Error::OutsideUniverse {
            coalition: players,
            universe: game.universe(),
        });
    }
    let not_in_image = || Error::NotInImage(format!("{image:?} under {}", rule.name()));

    let mut rest = image.to_vec();
    // latest arrival first
    let mut last_arrivals: Vec<PlayerId> = Vec::with_capacity(image.len());
    while !rest.is_empty() {
        let remaining = Coalition::from_players(rest.iter().copied());
        if !game.is_one(remaining) {
            let earliest = rule.arrival_order(&rest, None).ok_or_else(not_in_image)?;
            last_arrivals.extend(earliest.into_iter().rev());
            break;
        }
        let found = find_related_and_la(&rest, game)?;
        if found.late_arrivals.is_empty() {
            last_arrivals.push(found.marginal);
            rest.remove(found.marginal_position);
        } else {
            let block = rule
                .arrival_order(&found.late_arrivals, Some(found.marginal))
                .ok_or_else(not_in_image)?;
            last_arrivals.extend(block.into_iter().rev());
            rest.drain(found.la_block);
        }
    }
    let order = ArrivalOrder::new(last_arrivals.iter().rev().copied().collect())?;
    Ok(Reconstruction {
        order,
        last_arrivals,
    })
}
