use std::collections::HashMap;

use crate::coalition::{Coalition, PlayerId};
use crate::decompose::decompose;
use crate::error::Result;
use crate::game::{CostFunction, ZeroOne};
use crate::order::{orderings, restrict_sequence, ArrivalOrder};
use crate::shuffle::{invert, shuffle, CoordinateKind, CoordinateRule, ImageOrdering};
use crate::Rational;

use super::report::{
    merge, seq as show, set as show_set, who, Failure, Property, PropertyReport, Tally,
    WitnessContext,
};
use super::source::{GameSource, SourceGame};
use super::{map_games, CheckOptions};

/// Memoized shuffles of one game under one rule.
pub(crate) struct ShuffleHarness<'a, R: ?Sized> {
    game: &'a ZeroOne,
    rule: &'a R,
    memo: HashMap<Vec<PlayerId>, ImageOrdering>,
}

impl<'a, R: CoordinateRule + ?Sized> ShuffleHarness<'a, R> {
    pub fn new(game: &'a ZeroOne, rule: &'a R) -> Self {
        ShuffleHarness {
            game,
            rule,
            memo: HashMap::new(),
        }
    }

    pub fn image(&mut self, order: &[PlayerId]) -> Result<ImageOrdering> {
        if let Some(image) = self.memo.get(order) {
            return Ok(image.clone());
        }
        let image = shuffle(&ArrivalOrder::new(order.to_vec())?, self.game, self.rule)?;
        self.memo.insert(order.to_vec(), image.clone());
        Ok(image)
    }

    fn marginal(&mut self, order: &[PlayerId]) -> Result<Option<PlayerId>> {
        Ok(self.image(order)?.marginal())
    }
}

fn swapped(order: &[PlayerId], t: usize) -> Vec<PlayerId> {
    let mut out = order.to_vec();
    out.swap(t, t + 1);
    out
}

/// Distinct orders of `set` must have distinct images, each a permutation of `set`.
pub(crate) fn bijectivity<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    set: Coalition,
) -> Result<Option<Failure>> {
    let mut seen: HashMap<Vec<PlayerId>, Vec<PlayerId>> = HashMap::new();
    for order in orderings(set) {
        let image = h.image(order.as_slice())?;
        let seq = image.sequence().to_vec();
        if seq.len() != order.len() || Coalition::from_players(seq.iter().copied()) != set {
            return Ok(Some(Failure::new(
                vec![order.into_vec()],
                None,
                not_a_permutation(&seq, set),
            )));
        }
        if let Some(previous) = seen.insert(seq.clone(), order.as_slice().to_vec()) {
            return Ok(Some(Failure::new(
                vec![previous, order.into_vec()],
                None,
                format!("both orders shuffle to {}", show(&seq)),
            )));
        }
    }
    Ok(None)
}

fn not_a_permutation(image: &[PlayerId], set: Coalition) -> String {
    format!(
        "image {} is not a permutation of {}",
        show(image),
        show_set(set)
    )
}

/// Two specific orders must not collide.
pub(crate) fn bijectivity_pair<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    a: &[PlayerId],
    b: &[PlayerId],
) -> Result<Option<Failure>> {
    for o in [a, b] {
        let image = h.image(o)?;
        let set = Coalition::from_players(o.iter().copied());
        if image.sequence().len() != o.len() || image.players() != set {
            return Ok(Some(Failure::new(
                vec![o.to_vec()],
                None,
                not_a_permutation(image.sequence(), set),
            )));
        }
    }
    let (ia, ib) = (h.image(a)?, h.image(b)?);
    if a != b && ia.sequence() == ib.sequence() {
        return Ok(Some(Failure::new(
            vec![a.to_vec(), b.to_vec()],
            None,
            format!("both orders shuffle to {}", show(ia.sequence())),
        )));
    }
    Ok(None)
}

pub(crate) fn prefix_commutation<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let full = h.image(order)?;
    for k in 1..order.len() {
        let prefix = &order[..k];
        let expected = restrict_sequence(
            full.sequence(),
            Coalition::from_players(prefix.iter().copied()),
        );
        let actual = h.image(prefix)?;
        if actual.sequence() != expected.as_slice() {
            return Ok(Some(Failure::new(
                vec![order.to_vec()],
                None,
                format!(
                    "prefix of length {k} shuffles to {}, restriction of the full image is {}",
                    show(actual.sequence()),
                    show(&expected)
                ),
            )));
        }
    }
    Ok(None)
}

pub(crate) fn round_trip<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let image = h.image(order)?;
    let detail = match invert(image.sequence(), h.game, h.rule) {
        Ok(back) if back.as_slice() == order => return Ok(None),
        Ok(back) => format!(
            "image {} inverts to {}",
            show(image.sequence()),
            show(back.as_slice())
        ),
        Err(e) => format!("image {} does not invert: {e}", show(image.sequence())),
    };
    Ok(Some(Failure::new(vec![order.to_vec()], None, detail)))
}

/// The final marginal player is marginal at every prefix that contains her.
pub(crate) fn group_size_monotone<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let Some(m) = h.marginal(order)? else {
        return Ok(None);
    };
    let start = order
        .iter()
        .position(|&p| p == m)
        .expect("marginal player arrived");
    for k in start + 1..order.len() {
        let at = h.marginal(&order[..k])?;
        if at != Some(m) {
            return Ok(Some(Failure::new(
                vec![order.to_vec()],
                Some(m),
                format!(
                    "marginal in the full image but the prefix of length {k} has marginal {}",
                    who(at)
                ),
            )));
        }
    }
    Ok(None)
}

/// `later` has `i` one position later than `earlier`. Marginal when
/// arriving earlier implies marginal when arriving later.
pub(crate) fn flip_monotone<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    later: &[PlayerId],
    earlier: &[PlayerId],
    i: PlayerId,
) -> Result<Option<Failure>> {
    if h.marginal(earlier)? == Some(i) && h.marginal(later)? != Some(i) {
        return Ok(Some(Failure::new(
            vec![later.to_vec(), earlier.to_vec()],
            Some(i),
            "marginal when arriving earlier but not when arriving later",
        )));
    }
    Ok(None)
}

/// A player marginal on arrival ends up behind everyone who arrives after her.
pub(crate) fn late_arrivals_precede<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let full = h.image(order)?;
    let position = |p: PlayerId| {
        full.sequence()
            .iter()
            .position(|&q| q == p)
            .expect("image permutes order")
    };
    for t in 0..order.len() {
        let i = order[t];
        if h.marginal(&order[..=t])? != Some(i) {
            continue;
        }
        if let Some(&j) = order[t + 1..].iter().find(|&&j| position(j) > position(i)) {
            return Ok(Some(Failure::new(
                vec![order.to_vec()],
                Some(i),
                format!(
                    "marginal on arrival, yet later arrival {} sits after her in {}",
                    who(Some(j)),
                    show(full.sequence())
                ),
            )));
        }
    }
    Ok(None)
}

fn related_prefix(image: &ImageOrdering) -> Coalition {
    match image.related() {
        None => Coalition::EMPTY,
        Some(r) => {
            let k = image
                .sequence()
                .iter()
                .position(|&p| p == r)
                .expect("related player in image");
            Coalition::from_players(image.sequence()[..=k].iter().copied())
        }
    }
}

/// `first` ends `[.., j, i]` and `second` ends `[.., i, j]`. When `i` is
/// marginal in both images, the prefix through her related player in the
/// first, minus `j`, lies inside the one in the second.
pub(crate) fn related_prefix_nesting<R: CoordinateRule + ?Sized>(
    h: &mut ShuffleHarness<'_, R>,
    first: &[PlayerId],
    second: &[PlayerId],
) -> Result<Option<Failure>> {
    let n = first.len();
    let (i, j) = (first[n - 1], first[n - 2]);
    let (a, b) = (h.image(first)?, h.image(second)?);
    if a.marginal() != Some(i) || b.marginal() != Some(i) {
        return Ok(None);
    }
    let (pa, pb) = (related_prefix(&a), related_prefix(&b));
    if !pa.without(j).is_subset_of(pb) {
        return Ok(Some(Failure::new(
            vec![first.to_vec(), second.to_vec()],
            Some(i),
            format!(
                "related prefixes {} and {} do not nest",
                show_set(pa),
                show_set(pb)
            ),
        )));
    }
    Ok(None)
}

/// Runs every shuffle check over a single 0-1 game.
pub(crate) fn check_game<R: CoordinateRule + ?Sized>(
    game: &ZeroOne,
    rule: &R,
    ctx: &WitnessContext<'_>,
    tally: &mut Tally,
) -> Result<()> {
    let mut h = ShuffleHarness::new(game, rule);
    for p in [
        Property::Bijectivity,
        Property::PrefixCommutation,
        Property::RoundTrip,
        Property::GroupSizeMonotone,
        Property::FlipMonotone,
        Property::LateArrivalsPrecede,
        Property::RelatedPrefixNesting,
    ] {
        tally.touch(p);
    }
    for set in game.universe().subsets().filter(|s| !s.is_empty()) {
        tally.record(Property::Bijectivity, bijectivity(&mut h, set)?, ctx);
        for order in orderings(set) {
            let order = order.as_slice();
            tally.record(
                Property::PrefixCommutation,
                prefix_commutation(&mut h, order)?,
                ctx,
            );
            tally.record(Property::RoundTrip, round_trip(&mut h, order)?, ctx);
            tally.record(
                Property::GroupSizeMonotone,
                group_size_monotone(&mut h, order)?,
                ctx,
            );
            tally.record(
                Property::LateArrivalsPrecede,
                late_arrivals_precede(&mut h, order)?,
                ctx,
            );
            for t in 0..order.len().saturating_sub(1) {
                let earlier = swapped(order, t);
                let outcome = flip_monotone(&mut h, order, &earlier, order[t + 1])?;
                tally.record(Property::FlipMonotone, outcome, ctx);
            }
            if order.len() >= 2 {
                let flipped = swapped(order, order.len() - 2);
                tally.record(
                    Property::RelatedPrefixNesting,
                    related_prefix_nesting(&mut h, order, &flipped)?,
                    ctx,
                );
            }
        }
    }
    Ok(())
}

/// The 0-1 games a source game contributes: itself, or its decomposition.
fn zero_one_parts(cost: &CostFunction<Rational>) -> Result<Vec<ZeroOne>> {
    if cost.is_zero_one() {
        return Ok(vec![cost.to_zero_one()?]);
    }
    Ok(decompose(cost)?
        .components()
        .iter()
        .map(|c| c.game.clone())
        .collect())
}

/// Structural shuffle properties over every game of `source`. Non-0-1 games
/// are checked through the components of their decomposition.
pub fn check_shuffle_properties<R: CoordinateRule + ?Sized>(
    source: &GameSource,
    rule: &R,
    options: CheckOptions,
) -> Result<Vec<PropertyReport>> {
    let instance = format!("{}/shuffle/cd={}", source.key(), rule.name());
    let cd = rule.name().parse::<CoordinateKind>().ok();
    let games = source.games()?;
    let per_game = map_games(
        games,
        options,
        |g: &SourceGame| -> Result<Vec<PropertyReport>> {
            let mut tally = Tally::new(instance.clone());
            for (k, part) in zero_one_parts(&g.cost)?.into_iter().enumerate() {
                let cost: CostFunction<Rational> = part.clone().into();
                let key = if g.cost.is_zero_one() {
                    g.key.clone()
                } else {
                    format!("{}/component={k}", g.key)
                };
                let ctx = WitnessContext {
                    game_key: &key,
                    cost: &cost,
                    cd,
                    mechanism: None,
                };
                check_game(&part, rule, &ctx, &mut tally)?;
            }
            Ok(tally.into_reports())
        },
    );
    Ok(merge(
        &instance,
        per_game.into_iter().collect::<Result<Vec<_>>>()?,
    ))
}
