use std::collections::HashMap;

use crate::coalition::{Coalition, PlayerId};
use crate::error::{Error, Result};
use crate::game::{CostFunction, ZeroOne};
use crate::order::{orderings, restrict_sequence};
use crate::shuffle::{arrange, CoordinateKind, CoordinateRule};
use crate::Rational;

use super::report::{seq as show, Failure, Property, PropertyReport, Tally, WitnessContext};

pub(crate) fn rule_bijection<R: CoordinateRule + ?Sized>(
    rule: &R,
    a: &[PlayerId],
    b: &[PlayerId],
    anchor: Option<PlayerId>,
) -> Option<Failure> {
    let (x, y) = (arrange(rule, a, anchor), arrange(rule, b, anchor));
    let permutes = |o: &[PlayerId], s: &[PlayerId]| {
        o.len() == s.len()
            && Coalition::from_players(o.iter().copied())
                == Coalition::from_players(s.iter().copied())
    };
    if !permutes(a, &x) || !permutes(b, &y) || (a != b && x == y) {
        return Some(Failure::new(
            vec![a.to_vec(), b.to_vec()],
            anchor,
            format!("arrangements {} and {}", show(&x), show(&y)),
        ));
    }
    None
}

pub(crate) fn rule_prefix_commutation<R: CoordinateRule + ?Sized>(
    rule: &R,
    arrivals: &[PlayerId],
    anchor: Option<PlayerId>,
) -> Option<Failure> {
    let full = arrange(rule, arrivals, anchor);
    for k in 1..arrivals.len() {
        let expected = restrict_sequence(
            &full,
            Coalition::from_players(arrivals[..k].iter().copied()),
        );
        let actual = arrange(rule, &arrivals[..k], anchor);
        if actual != expected {
            return Some(Failure::new(
                vec![arrivals.to_vec()],
                anchor,
                format!(
                    "prefix of length {k} arranges to {}, restriction of the full arrangement is {}",
                    show(&actual),
                    show(&expected)
                ),
            ));
        }
    }
    None
}

pub(crate) fn rule_inverse<R: CoordinateRule + ?Sized>(
    rule: &R,
    arrivals: &[PlayerId],
    anchor: Option<PlayerId>,
) -> Option<Failure> {
    let block = arrange(rule, arrivals, anchor);
    match rule.arrival_order(&block, anchor) {
        Some(back) if back == arrivals => None,
        other => Some(Failure::new(
            vec![arrivals.to_vec()],
            anchor,
            format!(
                "arrangement {} recovers {}",
                show(&block),
                other.as_deref().map_or_else(|| "nothing".to_string(), show)
            ),
        )),
    }
}

/// Bijection, prefix commutation and exact inverse of a coordinate rule on
/// every block over `n` players, for every anchor (including none).
pub fn check_coordinate_rule<R: CoordinateRule + ?Sized>(
    rule: &R,
    n: usize,
) -> Result<Vec<PropertyReport>> {
    if n > 6 {
        return Err(Error::Capacity {
            what: "players for coordinate rule checks",
            size: n,
            max: 6,
        });
    }
    let instance = format!("coordinate-rule/n={n}/cd={}", rule.name());
    let cost: CostFunction<Rational> = ZeroOne::zero(n, Coalition::full(n)).into();
    let key = instance.clone();
    let ctx = WitnessContext {
        game_key: &key,
        cost: &cost,
        cd: rule.name().parse::<CoordinateKind>().ok(),
        mechanism: None,
    };
    let mut tally = Tally::new(instance);
    for p in [
        Property::RuleBijection,
        Property::RulePrefixCommutation,
        Property::RuleInverse,
    ] {
        tally.touch(p);
    }
    let all = Coalition::full(n);
    let anchors = std::iter::once(None).chain(all.players().map(Some));
    for anchor in anchors {
        let pool = anchor.map_or(all, |a| all.without(a));
        for set in pool.subsets().filter(|s| !s.is_empty()) {
            let mut seen: HashMap<Vec<PlayerId>, Vec<PlayerId>> = HashMap::new();
            let mut collision = None;
            for order in orderings(set) {
                let arrivals = order.as_slice();
                let block = arrange(rule, arrivals, anchor);
                if collision.is_none() {
                    if let Some(prev) = seen.insert(block, arrivals.to_vec()) {
                        collision = rule_bijection(rule, &prev, arrivals, anchor);
                    }
                }
                tally.record(
                    Property::RulePrefixCommutation,
                    rule_prefix_commutation(rule, arrivals, anchor),
                    &ctx,
                );
                tally.record(
                    Property::RuleInverse,
                    rule_inverse(rule, arrivals, anchor),
                    &ctx,
                );
            }
            let shape = orderings(set)
                .next()
                .map(|o| o.into_vec())
                .unwrap_or_default();
            let outcome = collision.or_else(|| rule_bijection(rule, &shape, &shape, anchor));
            tally.record(Property::RuleBijection, outcome, &ctx);
        }
    }
    Ok(tally.into_reports())
}
