use std::collections::HashMap;

use num_traits::Zero;

use crate::coalition::{Coalition, PlayerId};
use crate::decompose::{decompose, verify_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::game::{CostFunction, ZeroOne};
use crate::mechanism::{
    allocate_general_stream, allocate_zero_one, AllocationTrace, MechanismConfig,
};
use crate::order::{orderings, ArrivalOrder};
use crate::shapley::marginal_cost_totals;
use crate::Rational;

use super::report::{
    merge, set as show_set, Failure, Property, PropertyReport, Tally, WitnessContext,
};
use super::source::{GameSource, SourceGame};
use super::{map_games, CheckOptions};

/// Largest universe the mechanism sweep accepts; fairness sums over all orders.
pub const MAX_MECHANISM_PLAYERS: usize = 7;

/// Memoized allocation traces of one game under one mechanism.
pub(crate) struct MechanismHarness<'a> {
    cost: &'a CostFunction<Rational>,
    zero_one: Option<ZeroOne>,
    config: MechanismConfig,
    memo: HashMap<Vec<PlayerId>, AllocationTrace<Rational>>,
}

impl<'a> MechanismHarness<'a> {
    pub fn new(cost: &'a CostFunction<Rational>, config: MechanismConfig) -> Result<Self> {
        let zero_one = match config {
            MechanismConfig::Sfs | MechanismConfig::Gsfs(_) => Some(cost.to_zero_one()?),
            MechanismConfig::Egsfs(_) => None,
        };
        Ok(MechanismHarness {
            cost,
            zero_one,
            config,
            memo: HashMap::new(),
        })
    }

    pub fn trace(&mut self, order: &[PlayerId]) -> Result<&AllocationTrace<Rational>> {
        if !self.memo.contains_key(order) {
            let arrival = ArrivalOrder::new(order.to_vec())?;
            let rule = self.config.rule();
            let trace = match &self.zero_one {
                Some(game) => allocate_zero_one(game, &arrival, &rule)?,
                None => allocate_general_stream(self.cost, &arrival, &rule)?,
            };
            self.memo.insert(order.to_vec(), trace);
        }
        Ok(&self.memo[order])
    }

    fn final_share(&mut self, order: &[PlayerId], player: PlayerId) -> Result<Rational> {
        Ok(self.trace(order)?.final_share(player))
    }
}

/// Every intermediate allocation charges exactly the cost of the prefix.
pub(crate) fn budget_balance(
    h: &mut MechanismHarness<'_>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let cost = h.cost;
    for (k, step) in h.trace(order)?.steps().iter().enumerate() {
        let prefix = Coalition::from_players(order[..=k].iter().copied());
        let expected = cost.evaluate(prefix)?;
        if step.total() != expected || step.arrived() != prefix {
            return Ok(Some(Failure::new(
                vec![order.to_vec()],
                None,
                format!(
                    "after {} arrivals shares sum to {}, cost is {expected}",
                    k + 1,
                    step.total()
                ),
            )));
        }
    }
    Ok(None)
}

pub(crate) fn non_negative(
    h: &mut MechanismHarness<'_>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    for (k, step) in h.trace(order)?.steps().iter().enumerate() {
        if let Some((p, v)) = step.iter().find(|(_, v)| **v < Rational::zero()) {
            return Ok(Some(Failure::new(
                vec![order.to_vec()],
                Some(p),
                format!("share {v} after {} arrivals", k + 1),
            )));
        }
    }
    Ok(None)
}

/// No share ever grows as more players arrive.
pub(crate) fn online_rationality(
    h: &mut MechanismHarness<'_>,
    order: &[PlayerId],
) -> Result<Option<Failure>> {
    let steps = h.trace(order)?.steps();
    for k in 1..steps.len() {
        for (p, before) in steps[k - 1].iter() {
            let after = steps[k].share(p).cloned().unwrap_or_else(Rational::zero);
            if after > *before {
                return Ok(Some(Failure::new(
                    vec![order.to_vec()],
                    Some(p),
                    format!("share rises from {before} to {after} at arrival {}", k + 1),
                )));
            }
        }
    }
    Ok(None)
}

/// Final shares summed over every order of the universe equal the marginal
/// cost totals of the brute-force oracle.
pub(crate) fn shapley_fair(
    h: &mut MechanismHarness<'_>,
    totals: &[Rational],
) -> Result<Vec<Option<Failure>>> {
    let universe = h.cost.universe();
    let mut sums = vec![Rational::zero(); h.cost.n()];
    for order in orderings(universe) {
        for (p, v) in h
            .trace(order.as_slice())?
            .final_shares()
            .into_iter()
            .flat_map(|s| s.iter())
        {
            sums[p.index()] += *v;
        }
    }
    Ok(universe
        .players()
        .map(|p| {
            (sums[p.index()] != totals[p.index()]).then(|| {
                Failure::new(
                    Vec::new(),
                    Some(p),
                    format!(
                        "shares over all orders sum to {}, oracle total is {}",
                        sums[p.index()],
                        totals[p.index()]
                    ),
                )
            })
        })
        .collect())
}

/// `i` at position `from` in `order`, moved to `to > from`.
fn delayed(order: &[PlayerId], from: usize, to: usize) -> Vec<PlayerId> {
    let mut out = order.to_vec();
    let i = out.remove(from);
    out.insert(to, i);
    out
}

/// Arriving later never lowers `i`'s final share.
pub(crate) fn early_arrival(
    h: &mut MechanismHarness<'_>,
    earlier: &[PlayerId],
    later: &[PlayerId],
    i: PlayerId,
) -> Result<Option<Failure>> {
    let (a, b) = (h.final_share(earlier, i)?, h.final_share(later, i)?);
    if a > b {
        return Ok(Some(Failure::new(
            vec![earlier.to_vec(), later.to_vec()],
            Some(i),
            format!("pays {a} arriving earlier but {b} arriving later"),
        )));
    }
    Ok(None)
}

pub(crate) fn check_game(
    cost: &CostFunction<Rational>,
    config: MechanismConfig,
    ctx: &WitnessContext<'_>,
    tally: &mut Tally,
) -> Result<()> {
    let universe = cost.universe();
    if universe.len() > MAX_MECHANISM_PLAYERS {
        return Err(Error::Capacity {
            what: "universe size for mechanism checks",
            size: universe.len(),
            max: MAX_MECHANISM_PLAYERS,
        });
    }
    let mut h = MechanismHarness::new(cost, config)?;
    for p in [
        Property::BudgetBalance,
        Property::NonNegative,
        Property::OnlineIndividualRationality,
        Property::ShapleyFair,
        Property::EarlyArrivalAdjacent,
        Property::EarlyArrivalGeneral,
        Property::EarlyArrivalFormsAgree,
    ] {
        tally.touch(p);
    }
    let (adjacent_before, general_before) = (
        tally.failures(Property::EarlyArrivalAdjacent),
        tally.failures(Property::EarlyArrivalGeneral),
    );
    for order in orderings(universe) {
        let order = order.as_slice();
        tally.record(Property::BudgetBalance, budget_balance(&mut h, order)?, ctx);
        tally.record(Property::NonNegative, non_negative(&mut h, order)?, ctx);
        tally.record(
            Property::OnlineIndividualRationality,
            online_rationality(&mut h, order)?,
            ctx,
        );
        for t in 0..order.len() {
            for to in t + 1..order.len() {
                let later = delayed(order, t, to);
                let outcome = early_arrival(&mut h, order, &later, order[t])?;
                if to == t + 1 {
                    tally.record(Property::EarlyArrivalAdjacent, outcome.clone(), ctx);
                }
                tally.record(Property::EarlyArrivalGeneral, outcome, ctx);
            }
        }
    }
    let totals = marginal_cost_totals(cost)?;
    for outcome in shapley_fair(&mut h, &totals)? {
        tally.record(Property::ShapleyFair, outcome, ctx);
    }
    let adjacent_ok = tally.failures(Property::EarlyArrivalAdjacent) == adjacent_before;
    let general_ok = tally.failures(Property::EarlyArrivalGeneral) == general_before;
    let agree = (adjacent_ok != general_ok).then(|| {
        Failure::new(
            Vec::new(),
            None,
            format!("adjacent form holds: {adjacent_ok}, general form holds: {general_ok}"),
        )
    });
    tally.record(Property::EarlyArrivalFormsAgree, agree, ctx);
    Ok(())
}

/// Mechanism guarantees over every game of `source`.
pub fn check_mechanism_properties(
    source: &GameSource,
    config: MechanismConfig,
    options: CheckOptions,
) -> Result<Vec<PropertyReport>> {
    let instance = format!("{}/mechanism={config}", source.key());
    let games = source.games()?;
    let per_game = map_games(
        games,
        options,
        |g: &SourceGame| -> Result<Vec<PropertyReport>> {
            let mut tally = Tally::new(instance.clone());
            let ctx = WitnessContext {
                game_key: &g.key,
                cost: &g.cost,
                cd: Some(config.rule()),
                mechanism: Some(config.to_string()),
            };
            check_game(&g.cost, config, &ctx, &mut tally)?;
            Ok(tally.into_reports())
        },
    );
    Ok(merge(
        &instance,
        per_game.into_iter().collect::<Result<Vec<_>>>()?,
    ))
}

pub(crate) fn decomposition_exact(cost: &CostFunction<Rational>) -> Result<Option<Failure>> {
    let d = decompose(cost)?;
    let report = verify_decomposition(cost, &d);
    if !report.passed() {
        return Ok(Some(Failure::new(
            Vec::new(),
            None,
            format!("{:?}", report.violations),
        )));
    }
    let distinct = cost.distinct_nonzero_values().len();
    if d.len() > distinct {
        return Ok(Some(Failure::new(
            Vec::new(),
            None,
            format!(
                "{} components for {distinct} distinct nonzero values",
                d.len()
            ),
        )));
    }
    Ok(None)
}

fn grouped(d: &Decomposition<Rational>, set: Coalition) -> Result<Vec<(ZeroOne, Rational)>> {
    let mut out: Vec<(ZeroOne, Rational)> = Vec::new();
    for comp in d.components() {
        let g = comp.game.restrict(set)?;
        if g.minimal_sets().is_empty() {
            continue;
        }
        match out.iter_mut().find(|(h, _)| *h == g) {
            Some((_, w)) => *w += comp.weight,
            None => out.push((g, comp.weight)),
        }
    }
    Ok(out)
}

/// The decomposition of a restriction is the restriction of the
/// decomposition, with coinciding components merged.
pub(crate) fn decomposition_prefix_consistency(
    cost: &CostFunction<Rational>,
    set: Coalition,
) -> Result<Option<Failure>> {
    let expected = grouped(&decompose(cost)?, set)?;
    let actual = grouped(&decompose(&cost.restrict(set)?)?, set)?;
    let same = expected.len() == actual.len() && expected.iter().all(|e| actual.contains(e));
    if !same {
        let show = |v: &[(ZeroOne, Rational)]| {
            v.iter()
                .map(|(g, w)| {
                    let sets: Vec<String> = g.minimal_sets().iter().map(|&s| show_set(s)).collect();
                    format!("{w}*[{}]", sets.join(","))
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        return Ok(Some(Failure::new(
            Vec::new(),
            None,
            format!(
                "on {}: restricted {} vs direct {}",
                show_set(set),
                show(&expected),
                show(&actual)
            ),
        )));
    }
    Ok(None)
}

/// Exactness and prefix consistency of the decomposition over every game.
pub fn check_decomposition(
    source: &GameSource,
    options: CheckOptions,
) -> Result<Vec<PropertyReport>> {
    let instance = format!("{}/decompose", source.key());
    let games = source.games()?;
    let per_game = map_games(
        games,
        options,
        |g: &SourceGame| -> Result<Vec<PropertyReport>> {
            let mut tally = Tally::new(instance.clone());
            let ctx = WitnessContext {
                game_key: &g.key,
                cost: &g.cost,
                cd: None,
                mechanism: None,
            };
            tally.record(
                Property::DecompositionExact,
                decomposition_exact(&g.cost)?,
                &ctx,
            );
            tally.touch(Property::DecompositionPrefixConsistency);
            for set in g.cost.universe().subsets() {
                let outcome = decomposition_prefix_consistency(&g.cost, set)?;
                tally.record(Property::DecompositionPrefixConsistency, outcome, &ctx);
            }
            Ok(tally.into_reports())
        },
    );
    Ok(merge(
        &instance,
        per_game.into_iter().collect::<Result<Vec<_>>>()?,
    ))
}
