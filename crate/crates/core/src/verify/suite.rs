use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coalition::{Coalition, PlayerId};
use crate::decompose::decompose;
use crate::error::Error;
use crate::game::{CostFunction, ZeroOne};
use crate::gamefile::{parse_order, GameFileError, GameSpec};
use crate::mechanism::{allocate, MechanismConfig};
use crate::order::{orderings, ArrivalOrder};
use crate::report::{Record, RecordBody, Verdict};
use crate::shapley::marginal_cost_totals;
use crate::shuffle::{reconstruct, shuffle, shuffle_trace, CoordinateKind};
use crate::Rational;

use super::examples::{self, ids, Example};
use super::mechanism_checks::{self, MechanismHarness};
use super::report::{Failure, Property, PropertyReport, Tally, Witness, WitnessContext};
use super::rule_checks;
use super::shuffle_checks::{self, ShuffleHarness};
use super::source::GameSource;
use super::{
    check_coordinate_rule, check_decomposition, check_mechanism_properties,
    check_shuffle_properties, CheckOptions,
};

pub const SUITES: [&str; 8] = [
    "empty",
    "golden",
    "exhaustive",
    "exhaustive-n4",
    "random-egsfs",
    "decompose-random",
    "coordinate-rules",
    "all",
];

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite '{0}' (known: {known})", known = SUITES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("witness game: {0}")]
    Game(#[from] GameFileError),
    #[error("incomplete witness: {0}")]
    Witness(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Player bound; each suite has its own default.
    pub n: Option<usize>,
    pub seed: Option<u64>,
    /// Sweep only this coordinate rule instead of every valid one.
    pub cd: Option<CoordinateKind>,
    pub parallel: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n: None,
            seed: None,
            cd: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub reports: Vec<PropertyReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(PropertyReport::passed)
    }

    pub fn checked(&self) -> u64 {
        self.reports.iter().map(|r| r.checked).sum()
    }

    pub fn failures(&self) -> u64 {
        self.reports.iter().map(|r| r.failures).sum()
    }

    /// Report file records. Wall time is left out so reruns diff clean.
    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for r in &self.reports {
            out.push(Record::new(RecordBody::Property {
                instance: r.instance.clone(),
                property: r.property.to_string(),
                verdict: Verdict::from_passed(r.passed()),
                checked: r.checked,
                failures: r.failures,
            }));
            for (key, w) in &r.witnesses {
                out.push(Record::new(RecordBody::Witness {
                    instance: key.clone(),
                    property: r.property.to_string(),
                    verdict: Verdict::Fail,
                    witness: Box::new(w.clone()),
                }));
            }
        }
        out.push(Record::new(RecordBody::Summary {
            suite: self.suite.clone(),
            verdict: Verdict::from_passed(self.passed()),
            properties: self.reports.len(),
            checked: self.checked(),
            failures: self.failures(),
        }));
        out
    }
}

/// Runs a named bundle of checks.
pub fn run_suite(name: &str, options: SuiteOptions) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let check = CheckOptions {
        parallel: options.parallel,
    };
    let seed = options.seed.unwrap_or(DEFAULT_SEED);
    let valid = CoordinateKind::VALID.to_vec();
    let rules = options.cd.map_or(valid, |cd| vec![cd]);
    let reports = match name {
        "empty" => Vec::new(),
        "golden" => golden_reports()?,
        "exhaustive" => exhaustive(options.n.unwrap_or(4), &rules, check)?,
        "exhaustive-n4" => exhaustive(4, &rules, check)?,
        "random-egsfs" => random_egsfs(options.n.unwrap_or(5), seed, &rules, check)?,
        "decompose-random" => decompose_random(options.n.unwrap_or(6), seed, check)?,
        "coordinate-rules" => coordinate_rules(options.n.unwrap_or(4), &rules)?,
        "all" => {
            let mut all = golden_reports()?;
            all.extend(coordinate_rules(4, &rules)?);
            all.extend(exhaustive(4, &rules, check)?);
            all.extend(random_egsfs(5, seed, &rules, check)?);
            all.extend(decompose_random(6, seed, check)?);
            all
        }
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        reports,
        elapsed: start.elapsed(),
    })
}

fn exhaustive(
    max_n: usize,
    rules: &[CoordinateKind],
    check: CheckOptions,
) -> Result<Vec<PropertyReport>, SuiteError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let source = GameSource::Exhaustive { n };
        for &cd in rules {
            out.extend(check_shuffle_properties(&source, &cd, check)?);
            let config = match cd {
                CoordinateKind::Reverse => MechanismConfig::Sfs,
                other => MechanismConfig::Gsfs(other),
            };
            out.extend(check_mechanism_properties(&source, config, check)?);
        }
    }
    Ok(out)
}

fn random_egsfs(
    max_n: usize,
    seed: u64,
    rules: &[CoordinateKind],
    check: CheckOptions,
) -> Result<Vec<PropertyReport>, SuiteError> {
    let source = GameSource::Random {
        min_players: 1,
        max_players: max_n,
        count: 200,
        seed,
        max_value: 8,
    };
    let mut out = Vec::new();
    for &cd in rules {
        out.extend(check_mechanism_properties(
            &source,
            MechanismConfig::Egsfs(cd),
            check,
        )?);
    }
    Ok(out)
}

fn decompose_random(
    max_n: usize,
    seed: u64,
    check: CheckOptions,
) -> Result<Vec<PropertyReport>, SuiteError> {
    let source = GameSource::Random {
        min_players: 1,
        max_players: max_n,
        count: 500,
        seed,
        max_value: 8,
    };
    Ok(check_decomposition(&source, check)?)
}

fn coordinate_rules(n: usize, rules: &[CoordinateKind]) -> Result<Vec<PropertyReport>, SuiteError> {
    let mut out = Vec::new();
    for cd in rules {
        out.extend(check_coordinate_rule(cd, n)?);
    }
    Ok(out)
}

/// Golden checks on the worked examples, by name.
pub const GOLDEN: [&str; 8] = [
    "g3-shuffle-trace",
    "g3-inversion",
    "g1-shuffle",
    "g1-payers",
    "g2-forced-image",
    "g4-divergence",
    "g5-general-trace",
    "zero-game-inversion",
];

fn seqs(v: &[&str]) -> Vec<Vec<PlayerId>> {
    v.iter().map(|s| ids(s)).collect()
}

fn fail(detail: impl Into<String>) -> Option<Failure> {
    Some(Failure::new(Vec::new(), None, detail))
}

fn zero_one_of(e: &Example) -> Result<ZeroOne, Error> {
    e.cost.to_zero_one()
}

fn names(e: &Example, seq: &[PlayerId]) -> String {
    e.players.format_sequence(seq)
}

fn final_payers(e: &Example, config: MechanismConfig) -> Result<Vec<(PlayerId, Rational)>, Error> {
    let trace = allocate(&e.cost, &ArrivalOrder::new(e.arrival.clone())?, config)?;
    Ok(trace
        .final_shares()
        .map(|s| s.iter().map(|(p, v)| (p, *v)).collect())
        .unwrap_or_default())
}

fn only_payer(shares: &[(PlayerId, Rational)], payer: PlayerId) -> bool {
    shares.iter().all(|&(p, v)| {
        v == if p == payer {
            Rational::from(1)
        } else {
            Rational::from(0)
        }
    })
}

/// Runs every shuffle and mechanism check on one example game under `cd`.
fn example_property_failures(e: &Example, cd: CoordinateKind) -> Result<u64, Error> {
    let game = zero_one_of(e)?;
    let ctx = WitnessContext {
        game_key: e.name,
        cost: &e.cost,
        cd: Some(cd),
        mechanism: None,
    };
    let mut tally = Tally::new(e.name);
    shuffle_checks::check_game(&game, &cd, &ctx, &mut tally)?;
    mechanism_checks::check_game(&e.cost, MechanismConfig::Gsfs(cd), &ctx, &mut tally)?;
    Ok(tally.into_reports().iter().map(|r| r.failures).sum())
}

fn golden(name: &str) -> Result<(Example, Option<Failure>), SuiteError> {
    let [a, b, c, d, e_] = [0u8, 1, 2, 3, 4].map(PlayerId);
    let rev = CoordinateKind::Reverse;
    Ok(match name {
        "g3-shuffle-trace" => {
            let e = examples::g3();
            let game = zero_one_of(&e)?;
            let trace = shuffle_trace(&ArrivalOrder::new(e.arrival.clone())?, &game, &rev)?;
            let got: Vec<Vec<PlayerId>> = trace.iter().map(|i| i.sequence().to_vec()).collect();
            let want = seqs(&["A", "BA", "BCA", "BDCA", "BDECA", "BDFECA", "BDGFECA"]);
            let outcome = if got != want {
                fail(format!("images {got:?}"))
            } else if !only_payer(&final_payers(&e, MechanismConfig::Sfs)?, e_) {
                fail("E is not the only payer")
            } else {
                None
            };
            (e, outcome)
        }
        "g3-inversion" => {
            let e = examples::g3();
            let r = reconstruct(&ids("BDGFECA"), &zero_one_of(&e)?, &rev)?;
            let outcome = if r.order.as_slice() != e.arrival.as_slice()
                || r.last_arrivals != ids("GFEDCBA")
            {
                fail(format!(
                    "reconstructed {}, last arrivals {}",
                    names(&e, r.order.as_slice()),
                    names(&e, &r.last_arrivals)
                ))
            } else {
                None
            };
            (e, outcome)
        }
        "g1-shuffle" => {
            let e = examples::g1();
            let image = shuffle(
                &ArrivalOrder::new(e.arrival.clone())?,
                &zero_one_of(&e)?,
                &rev,
            )?;
            let outcome =
                if image.sequence() != ids("BCA").as_slice() || image.marginal() != Some(c) {
                    fail(format!(
                        "image {} with marginal {:?}",
                        names(&e, image.sequence()),
                        image.marginal()
                    ))
                } else if !only_payer(&final_payers(&e, MechanismConfig::Sfs)?, c) {
                    fail("C is not the only payer")
                } else {
                    None
                };
            (e, outcome)
        }
        "g1-payers" => {
            let e = examples::g1();
            let game = zero_one_of(&e)?;
            let mut counts = [0u32; 3];
            for order in orderings(Coalition::full(3)) {
                if let Some(m) = shuffle(&order, &game, &rev)?.marginal() {
                    counts[m.index()] += 1;
                }
            }
            let totals = marginal_cost_totals(&e.cost)?;
            let outcome = if counts != [4, 1, 1] || totals != [4, 1, 1].map(Rational::from) {
                fail(format!("payer counts {counts:?}, oracle totals {totals:?}"))
            } else {
                None
            };
            (e, outcome)
        }
        "g2-forced-image" => {
            let e = examples::g2();
            let image = shuffle(
                &ArrivalOrder::new(e.arrival.clone())?,
                &zero_one_of(&e)?,
                &rev,
            )?;
            let seq = image.sequence();
            let outcome = if seq != ids("ACB").as_slice()
                || seq == ids("CAB").as_slice()
                || seq == ids("ABC").as_slice()
            {
                fail(format!("image {}", names(&e, seq)))
            } else {
                None
            };
            (e, outcome)
        }
        "g4-divergence" => {
            let e = examples::g4();
            let game = zero_one_of(&e)?;
            let arrival = ArrivalOrder::new(e.arrival.clone())?;
            let arrival_trace = shuffle_trace(&arrival, &game, &CoordinateKind::Arrival)?;
            let e_marginal_on_arrival = arrival_trace[4].marginal() == Some(e_);
            let reverse_pays = final_payers(&e, MechanismConfig::Sfs)?;
            let arrival_pays = final_payers(&e, MechanismConfig::Gsfs(CoordinateKind::Arrival))?;
            let failures = example_property_failures(&e, rev)?
                + example_property_failures(&e, CoordinateKind::Arrival)?;
            let outcome = if !only_payer(&reverse_pays, e_) {
                fail("under reverse E is not the only payer")
            } else if e_marginal_on_arrival {
                fail("under arrival E is marginal on arrival")
            } else if !only_payer(&arrival_pays, d) {
                fail("under arrival D is not the only payer")
            } else if failures > 0 {
                fail(format!("{failures} property failures"))
            } else {
                None
            };
            (e, outcome)
        }
        "g5-general-trace" => {
            let e = examples::g5();
            let trace = allocate(
                &e.cost,
                &ArrivalOrder::new(e.arrival.clone())?,
                MechanismConfig::Egsfs(rev),
            )?;
            let got: Vec<Vec<(PlayerId, Rational)>> = trace
                .steps()
                .iter()
                .map(|s| s.iter().map(|(p, v)| (p, *v)).collect())
                .collect();
            let want = vec![
                vec![(a, Rational::from(1))],
                vec![(a, Rational::from(0)), (b, Rational::from(3))],
            ];
            let levels = decompose(&e.cost)?.len();
            let outcome = if got != want || levels != 3 {
                fail(format!("trace {got:?}, {levels} components"))
            } else {
                None
            };
            (e, outcome)
        }
        "zero-game-inversion" => {
            let mut e = examples::g1();
            e.name = "zero";
            e.cost = ZeroOne::zero(3, Coalition::full(3)).into();
            let back = reconstruct(&ids("CBA"), &zero_one_of(&e)?, &rev)?;
            let outcome = (back.order.as_slice() != ids("ABC").as_slice()).then(|| {
                Failure::new(
                    Vec::new(),
                    None,
                    format!("inverted to {}", names(&e, back.order.as_slice())),
                )
            });
            (e, outcome)
        }
        other => {
            return Err(SuiteError::Witness(format!(
                "unknown example check '{other}'"
            )))
        }
    })
}

fn golden_reports() -> Result<Vec<PropertyReport>, SuiteError> {
    let mut report = PropertyReport::new(Property::Golden, "golden");
    for name in GOLDEN {
        let (e, outcome) = golden(name)?;
        report.checked += 1;
        if let Some(failure) = outcome {
            report.failures += 1;
            let ctx = WitnessContext {
                game_key: e.name,
                cost: &e.cost,
                cd: None,
                mechanism: None,
            };
            let (key, mut witness) = ctx.witness(failure);
            witness.example = Some(name.to_string());
            witness.game.arrival = Some(
                e.arrival
                    .iter()
                    .map(|&p| e.players.name(p).to_string())
                    .collect(),
            );
            report.witnesses.push((key, witness));
        }
    }
    Ok(vec![report])
}

struct Replayed {
    cost: CostFunction<Rational>,
    orders: Vec<Vec<PlayerId>>,
    player: Option<PlayerId>,
}

fn load_witness(w: &Witness) -> Result<Replayed, SuiteError> {
    let loaded = GameSpec::build(&w.game)?;
    let orders = w
        .orders
        .iter()
        .enumerate()
        .map(|(k, o)| {
            parse_order(&loaded.players, o, &format!("orders[{k}]")).map(ArrivalOrder::into_vec)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let player = match &w.player {
        None => None,
        Some(name) => Some(
            loaded
                .players
                .id(name)
                .ok_or_else(|| SuiteError::Witness(format!("unknown player '{name}'")))?,
        ),
    };
    Ok(Replayed {
        cost: loaded.cost,
        orders,
        player,
    })
}

impl Replayed {
    fn order(&self, k: usize) -> Result<&[PlayerId], SuiteError> {
        self.orders
            .get(k)
            .map(Vec::as_slice)
            .ok_or_else(|| SuiteError::Witness(format!("missing order {k}")))
    }

    fn player(&self) -> Result<PlayerId, SuiteError> {
        self.player
            .ok_or_else(|| SuiteError::Witness("missing player".into()))
    }
}

/// Re-runs the instance a witness describes. `Some(detail)` means the
/// failure reproduced.
pub fn replay(property: Property, witness: &Witness) -> Result<Option<String>, SuiteError> {
    use Property::*;
    if property == Golden {
        let name = witness
            .example
            .as_deref()
            .ok_or_else(|| SuiteError::Witness("missing example name".into()))?;
        return Ok(golden(name)?.1.map(|f| f.detail));
    }
    let r = load_witness(witness)?;
    let cd = witness.cd.unwrap_or(CoordinateKind::Reverse);
    let outcome = match property {
        Bijectivity | PrefixCommutation | RoundTrip | GroupSizeMonotone | FlipMonotone
        | LateArrivalsPrecede | RelatedPrefixNesting => {
            let game = r.cost.to_zero_one()?;
            let mut h = ShuffleHarness::new(&game, &cd);
            match property {
                Bijectivity if r.orders.len() >= 2 => {
                    shuffle_checks::bijectivity_pair(&mut h, r.order(0)?, r.order(1)?)?
                }
                Bijectivity => {
                    let set = Coalition::from_players(r.order(0)?.iter().copied());
                    shuffle_checks::bijectivity(&mut h, set)?
                }
                PrefixCommutation => shuffle_checks::prefix_commutation(&mut h, r.order(0)?)?,
                RoundTrip => shuffle_checks::round_trip(&mut h, r.order(0)?)?,
                GroupSizeMonotone => shuffle_checks::group_size_monotone(&mut h, r.order(0)?)?,
                LateArrivalsPrecede => shuffle_checks::late_arrivals_precede(&mut h, r.order(0)?)?,
                FlipMonotone => {
                    shuffle_checks::flip_monotone(&mut h, r.order(0)?, r.order(1)?, r.player()?)?
                }
                _ => shuffle_checks::related_prefix_nesting(&mut h, r.order(0)?, r.order(1)?)?,
            }
        }
        BudgetBalance
        | NonNegative
        | OnlineIndividualRationality
        | ShapleyFair
        | EarlyArrivalAdjacent
        | EarlyArrivalGeneral
        | EarlyArrivalFormsAgree => {
            let config: MechanismConfig = witness
                .mechanism
                .as_deref()
                .ok_or_else(|| SuiteError::Witness("missing mechanism".into()))?
                .parse()
                .map_err(SuiteError::Witness)?;
            let mut h = MechanismHarness::new(&r.cost, config)?;
            match property {
                BudgetBalance => mechanism_checks::budget_balance(&mut h, r.order(0)?)?,
                NonNegative => mechanism_checks::non_negative(&mut h, r.order(0)?)?,
                OnlineIndividualRationality => {
                    mechanism_checks::online_rationality(&mut h, r.order(0)?)?
                }
                ShapleyFair => {
                    let player = r.player()?;
                    let totals = marginal_cost_totals(&r.cost)?;
                    let universe = r.cost.universe();
                    mechanism_checks::shapley_fair(&mut h, &totals)?
                        .into_iter()
                        .zip(universe.players())
                        .find(|(_, p)| *p == player)
                        .and_then(|(f, _)| f)
                }
                EarlyArrivalAdjacent | EarlyArrivalGeneral => {
                    mechanism_checks::early_arrival(&mut h, r.order(0)?, r.order(1)?, r.player()?)?
                }
                _ => {
                    let ctx = WitnessContext {
                        game_key: "replay",
                        cost: &r.cost,
                        cd: Some(config.rule()),
                        mechanism: Some(config.to_string()),
                    };
                    let mut tally = Tally::new("replay");
                    mechanism_checks::check_game(&r.cost, config, &ctx, &mut tally)?;
                    tally
                        .into_reports()
                        .into_iter()
                        .find(|rep| rep.property == EarlyArrivalFormsAgree && !rep.passed())
                        .map(|rep| {
                            Failure::new(Vec::new(), None, rep.witnesses[0].1.detail.clone())
                        })
                }
            }
        }
        DecompositionExact => mechanism_checks::decomposition_exact(&r.cost)?,
        DecompositionPrefixConsistency => {
            let mut found = None;
            for set in r.cost.universe().subsets() {
                if let Some(f) = mechanism_checks::decomposition_prefix_consistency(&r.cost, set)? {
                    found = Some(f);
                    break;
                }
            }
            found
        }
        RuleBijection => rule_checks::rule_bijection(&cd, r.order(0)?, r.order(1)?, r.player),
        RulePrefixCommutation => rule_checks::rule_prefix_commutation(&cd, r.order(0)?, r.player),
        RuleInverse => rule_checks::rule_inverse(&cd, r.order(0)?, r.player),
        Golden => unreachable!("handled above"),
    };
    Ok(outcome.map(|f| f.detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_examples_pass() {
        for name in GOLDEN {
            let (_, outcome) = golden(name).unwrap();
            assert!(outcome.is_none(), "{name}: {outcome:?}");
        }
    }

    #[test]
    fn empty_suite_passes() {
        let report = run_suite("empty", SuiteOptions::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.records().len(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let serial = SuiteOptions {
            n: Some(3),
            parallel: false,
            ..SuiteOptions::default()
        };
        for name in ["exhaustive", "random-egsfs", "decompose-random"] {
            let a = run_suite(
                name,
                SuiteOptions {
                    n: Some(3),
                    ..SuiteOptions::default()
                },
            )
            .unwrap();
            let b = run_suite(name, serial).unwrap();
            assert_eq!(a.records(), b.records(), "{name}");
        }
    }

    #[test]
    fn fault_injected_sweep_fails_and_witnesses_replay() {
        let options = SuiteOptions {
            n: Some(3),
            cd: Some(CoordinateKind::MinFront),
            ..SuiteOptions::default()
        };
        let report = run_suite("exhaustive", options).unwrap();
        assert!(!report.passed());
        for r in report.reports.iter().filter(|r| !r.passed()) {
            assert!(!r.witnesses.is_empty());
            for (_, w) in &r.witnesses {
                assert!(replay(r.property, w).unwrap().is_some());
            }
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", SuiteOptions::default()),
            Err(SuiteError::UnknownSuite(_))
        ));
    }

    #[test]
    fn witnesses_replay() {
        let shuffle = check_shuffle_properties(
            &GameSource::Exhaustive { n: 3 },
            &CoordinateKind::MinFront,
            CheckOptions::default(),
        )
        .unwrap();
        let mechanism = check_mechanism_properties(
            &GameSource::Exhaustive { n: 3 },
            MechanismConfig::Gsfs(CoordinateKind::MinFront),
            CheckOptions::default(),
        )
        .unwrap();
        let rules = check_coordinate_rule(&CoordinateKind::MinFront, 3).unwrap();
        let mut replayed = 0;
        for r in shuffle.iter().chain(&mechanism).chain(&rules) {
            for (key, w) in &r.witnesses {
                let outcome = replay(r.property, w).unwrap();
                assert_eq!(
                    outcome.as_deref(),
                    Some(w.detail.as_str()),
                    "{} {key}",
                    r.property
                );
                replayed += 1;
            }
        }
        assert!(replayed > 0);
    }
}
