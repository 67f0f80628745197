use std::ops::Range;

use crate::coalition::{Coalition, PlayerId};
use crate::error::{Error, Result};
use crate::game::ZeroOne;
use crate::order::ArrivalOrder;

use super::rule::CoordinateRule;

/// The shuffled ordering of the players that have arrived so far.
///
/// `la_block` is the contiguous run of positions holding the late-arriving
/// players of the current marginal player; it ends right before the marginal
/// player. With no marginal player the block is the whole sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageOrdering {
    sequence: Vec<PlayerId>,
    marginal: Option<PlayerId>,
    related: Option<PlayerId>,
    la_block: Range<usize>,
}

impl ImageOrdering {
    fn empty() -> Self {
        ImageOrdering {
            sequence: Vec::new(),
            marginal: None,
            related: None,
            la_block: 0..0,
        }
    }

    pub fn sequence(&self) -> &[PlayerId] {
        &self.sequence
    }

    pub fn into_sequence(self) -> Vec<PlayerId> {
        self.sequence
    }

    pub fn marginal(&self) -> Option<PlayerId> {
        self.marginal
    }

    pub fn marginal_position(&self) -> Option<usize> {
        self.marginal.map(|_| self.la_block.end)
    }

    pub fn related(&self) -> Option<PlayerId> {
        self.related
    }

    pub fn la_block(&self) -> Range<usize> {
        self.la_block.clone()
    }

    /// Players of the late-arriving block, in image order.
    pub fn late_arriving(&self) -> &[PlayerId] {
        &self.sequence[self.la_block.clone()]
    }

    pub fn players(&self) -> Coalition {
        Coalition::from_players(self.sequence.iter().copied())
    }
}

/// How a newcomer was placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// At the earliest position making her the marginal player.
    Marginal { position: usize },
    /// Inside the current late-arriving block, as the coordinate rule says.
    LateArriving { position: usize },
}

impl Insertion {
    pub fn position(self) -> usize {
        match self {
            Insertion::Marginal { position } | Insertion::LateArriving { position } => position,
        }
    }
}

/// Incremental shuffle of an arrival sequence under a 0-1 cost function.
///
/// After `k` arrivals the image equals the shuffle of the `k`-prefix.
#[derive(Debug, Clone)]
pub struct ShuffleState<'g> {
    game: &'g ZeroOne,
    arrivals: Vec<PlayerId>,
    arrived: Coalition,
    image: ImageOrdering,
}

impl<'g> ShuffleState<'g> {
    pub fn new(game: &'g ZeroOne) -> Self {
        ShuffleState {
            game,
            arrivals: Vec::new(),
            arrived: Coalition::EMPTY,
            image: ImageOrdering::empty(),
        }
    }

    pub fn game(&self) -> &'g ZeroOne {
        self.game
    }

    pub fn arrivals(&self) -> &[PlayerId] {
        &self.arrivals
    }

    pub fn image(&self) -> &ImageOrdering {
        &self.image
    }

    pub fn into_image(self) -> ImageOrdering {
        self.image
    }

    fn check_newcomer(&self, player: PlayerId) -> Result<()> {
        if self.arrived.contains(player) {
            return Err(Error::AlreadyPresent(player));
        }
        let universe = self.game.universe();
        if !universe.contains(player) {
            return Err(Error::OutsideUniverse {
                coalition: Coalition::singleton(player),
                universe,
            });
        }
        Ok(())
    }

    /// The smallest `k` such that the first `k` image players cost 0 and cost
    /// 1 together with `player`.
    pub fn try_marginal_insert(&self, player: PlayerId) -> Result<Option<usize>> {
        self.check_newcomer(player)?;
        Ok(earliest_marginal_slot(
            self.game,
            &self.image.sequence,
            player,
        ))
    }

    /// Inserts the next arrival.
    pub fn insert_next<R: CoordinateRule + ?Sized>(
        &mut self,
        player: PlayerId,
        rule: &R,
    ) -> Result<Insertion> {
        self.check_newcomer(player)?;
        let image = &mut self.image;
        let insertion = match earliest_marginal_slot(self.game, &image.sequence, player) {
            Some(k) => {
                image.sequence.insert(k, player);
                image.marginal = Some(player);
                image.related = if k == 0 {
                    None
                } else {
                    Some(image.sequence[k - 1])
                };
                image.la_block = k..k;
                Insertion::Marginal { position: k }
            }
            None => {
                let block = image.la_block.clone();
                let offset = rule
                    .insert_offset(&image.sequence[block.clone()], player, image.marginal)
                    .min(block.len());
                let k = block.start + offset;
                image.sequence.insert(k, player);
                image.la_block = block.start..block.end + 1;
                Insertion::LateArriving { position: k }
            }
        };
        self.arrivals.push(player);
        self.arrived = self.arrived.with(player);
        #[cfg(debug_assertions)]
        self.cross_check();
        Ok(insertion)
    }

    #[cfg(debug_assertions)]
    fn cross_check(&self) {
        let image = &self.image;
        match find_related_and_la(&image.sequence, self.game) {
            Ok(found) => {
                assert_eq!(
                    Some(found.marginal),
                    image.marginal,
                    "marginal drift in {:?}",
                    image
                );
                assert_eq!(found.related, image.related, "related drift in {:?}", image);
                assert_eq!(found.la_block, image.la_block, "block drift in {:?}", image);
            }
            Err(_) => {
                assert_eq!(image.marginal, None);
                assert_eq!(image.la_block, 0..image.sequence.len());
            }
        }
    }
}

fn earliest_marginal_slot(
    game: &ZeroOne,
    sequence: &[PlayerId],
    player: PlayerId,
) -> Option<usize> {
    let mut prefix = Coalition::EMPTY;
    for k in 0..=sequence.len() {
        if game.is_one(prefix) {
            return None;
        }
        if game.is_one(prefix.with(player)) {
            return Some(k);
        }
        if let Some(&next) = sequence.get(k) {
            prefix = prefix.with(next);
        }
    }
    None
}

/// Folds [`ShuffleState::insert_next`] over `order`.
pub fn shuffle<R: CoordinateRule + ?Sized>(
    order: &ArrivalOrder,
    game: &ZeroOne,
    rule: &R,
) -> Result<ImageOrdering> {
    let mut state = ShuffleState::new(game);
    for &p in order.as_slice() {
        state.insert_next(p, rule)?;
    }
    Ok(state.into_image())
}

/// The image after each arrival.
pub fn shuffle_trace<R: CoordinateRule + ?Sized>(
    order: &ArrivalOrder,
    game: &ZeroOne,
    rule: &R,
) -> Result<Vec<ImageOrdering>> {
    let mut state = ShuffleState::new(game);
    let mut out = Vec::with_capacity(order.len());
    for &p in order.as_slice() {
        state.insert_next(p, rule)?;
        out.push(state.image().clone());
    }
    Ok(out)
}

/// The player whose prefix jumps the cost from 0 to 1, with her position.
pub fn find_marginal(sequence: &[PlayerId], game: &ZeroOne) -> Option<(PlayerId, usize)> {
    let mut prefix = Coalition::EMPTY;
    for (k, &p) in sequence.iter().enumerate() {
        prefix = prefix.with(p);
        if game.is_one(prefix) {
            return Some((p, k));
        }
    }
    None
}

/// Marginal player, related player and late-arriving block of an image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LateArriving {
    pub marginal: PlayerId,
    pub marginal_position: usize,
    pub related: Option<PlayerId>,
    pub la_block: Range<usize>,
    pub late_arrivals: Vec<PlayerId>,
}

/// Recovers the related player and late-arriving block from an image alone.
///
/// With `c({m}) = 1` the block is everything before the marginal player `m`.
/// Otherwise the related player is the earliest `j` with
/// `c(p(j) ∪ {m}) = 1` and the block lies strictly between `j` and `m`.
pub fn find_related_and_la(sequence: &[PlayerId], game: &ZeroOne) -> Result<LateArriving> {
    let (marginal, marginal_position) = find_marginal(sequence, game).ok_or(Error::NoMarginal)?;
    let (related, start) = if game.is_one(Coalition::singleton(marginal)) {
        (None, 0)
    } else {
        let mut prefix = Coalition::singleton(marginal);
        let mut found = None;
        for (k, &p) in sequence[..marginal_position].iter().enumerate() {
            prefix = prefix.with(p);
            if game.is_one(prefix) {
                found = Some((p, k + 1));
                break;
            }
        }
        let (p, start) = found.expect("a marginal player completes a winning prefix");
        (Some(p), start)
    };
    Ok(LateArriving {
        marginal,
        marginal_position,
        related,
        la_block: start..marginal_position,
        late_arrivals: sequence[start..marginal_position].to_vec(),
    })
}
