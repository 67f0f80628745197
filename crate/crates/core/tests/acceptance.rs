//! Acceptance criteria, one line each. Runs as its own test binary.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use costshare::enumerate::enumerate_monotone_01;
use costshare::mechanism::{allocate, MechanismConfig};
use costshare::order::orderings;
use costshare::shuffle::{reconstruct, shuffle, shuffle_trace, CoordinateKind};
use costshare::verify::examples::{self, ids, Example};
use costshare::verify::{
    check_decomposition, check_mechanism_properties, check_shuffle_properties, CheckOptions,
    GameSource, Property, PropertyReport, SourceGame,
};
use costshare::{ArrivalOrder, Coalition, PlayerId, Rational};

/// All comparisons are exact rationals; there is no numeric tolerance.
const GOLDEN_TRACE_BUDGET: Duration = Duration::from_millis(1);
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(60);
const RANDOM_GENERAL_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_SEED: u64 = 20_240_601;
const GOLDEN_TIMING_RUNS: u32 = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn arrival(e: &Example) -> ArrivalOrder {
    ArrivalOrder::new(e.arrival.clone()).unwrap()
}

fn show(e: &Example, seq: &[PlayerId]) -> String {
    format!("[{}]", e.players.format_sequence(seq))
}

fn final_shares(e: &Example, config: MechanismConfig) -> Vec<Rational> {
    let trace = allocate(&e.cost, &arrival(e), config).unwrap();
    e.players
        .all()
        .players()
        .map(|p| trace.final_share(p))
        .collect()
}

fn unit(n: usize, payer: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| Rational::from((k == payer) as i64))
        .collect()
}

fn all_pass(reports: &[PropertyReport]) -> Result<u64, String> {
    let mut checked = 0;
    for r in reports {
        ensure(r.passed(), || {
            format!("{r}: {:?}", r.witnesses.first().map(|w| &w.1.detail))
        })?;
        checked += r.checked;
    }
    Ok(checked)
}

fn golden_trace() -> Outcome {
    let e = examples::g3();
    let game = e.cost.to_zero_one().unwrap();
    let order = arrival(&e);
    let want: Vec<Vec<PlayerId>> = ["A", "BA", "BCA", "BDCA", "BDECA", "BDFECA", "BDGFECA"]
        .iter()
        .map(|s| ids(s))
        .collect();
    let got: Vec<Vec<PlayerId>> = shuffle_trace(&order, &game, &CoordinateKind::Reverse)
        .unwrap()
        .into_iter()
        .map(|i| i.into_sequence())
        .collect();
    ensure(got == want, || {
        format!(
            "images {:?}",
            got.iter().map(|s| show(&e, s)).collect::<Vec<_>>()
        )
    })?;
    let shares = final_shares(&e, MechanismConfig::Sfs);
    ensure(shares == unit(7, 4), || format!("final shares {shares:?}"))?;
    let start = Instant::now();
    for _ in 0..GOLDEN_TIMING_RUNS {
        std::hint::black_box(shuffle_trace(&order, &game, &CoordinateKind::Reverse).unwrap());
    }
    let per_run = start.elapsed() / GOLDEN_TIMING_RUNS;
    ensure(per_run < GOLDEN_TRACE_BUDGET, || {
        format!("{per_run:?} per trace")
    })?;
    Ok(format!(
        "seven images match, E pays 1, {per_run:?} per trace"
    ))
}

fn golden_inversion() -> Outcome {
    let e = examples::g3();
    let r = reconstruct(
        &ids("BDGFECA"),
        &e.cost.to_zero_one().unwrap(),
        &CoordinateKind::Reverse,
    )
    .unwrap();
    ensure(r.order.as_slice() == ids("ABCDEFG").as_slice(), || {
        format!("order {}", show(&e, r.order.as_slice()))
    })?;
    ensure(r.last_arrivals == ids("GFEDCBA"), || {
        format!("last arrivals {}", show(&e, &r.last_arrivals))
    })?;
    Ok(format!(
        "order {}, last arrivals {}",
        show(&e, r.order.as_slice()),
        show(&e, &r.last_arrivals)
    ))
}

fn three_player_game() -> Outcome {
    let e = examples::g1();
    let game = e.cost.to_zero_one().unwrap();
    let image = shuffle(&arrival(&e), &game, &CoordinateKind::Reverse).unwrap();
    ensure(image.sequence() == ids("BCA").as_slice(), || {
        format!("image {}", show(&e, image.sequence()))
    })?;
    ensure(final_shares(&e, MechanismConfig::Sfs) == unit(3, 2), || {
        "C is not the only payer".into()
    })?;
    let mut paid = vec![Rational::from(0); 3];
    let mut oracle = vec![Rational::from(0); 3];
    for order in orderings(Coalition::full(3)) {
        let trace = allocate(&e.cost, &order, MechanismConfig::Sfs).unwrap();
        let mut before = Rational::from(0);
        let mut prefix = Coalition::EMPTY;
        for &p in order.as_slice() {
            prefix = prefix.with(p);
            let after = e.cost.evaluate(prefix).unwrap();
            oracle[p.index()] += after - before;
            before = after;
        }
        for p in Coalition::full(3).players() {
            paid[p.index()] += trace.final_share(p);
        }
    }
    let want = [4, 1, 1].map(Rational::from).to_vec();
    ensure(paid == want && oracle == want, || {
        format!("paid {paid:?}, oracle {oracle:?}")
    })?;
    Ok("image [B,C,A], C pays; totals over 6 orders (4, 1, 1) match the oracle".into())
}

fn example_one_game() -> Outcome {
    let e = examples::g2();
    let image = shuffle(
        &arrival(&e),
        &e.cost.to_zero_one().unwrap(),
        &CoordinateKind::Reverse,
    )
    .unwrap();
    let seq = image.sequence();
    ensure(seq == ids("ACB").as_slice(), || {
        format!("image {}", show(&e, seq))
    })?;
    ensure(
        seq != ids("CAB").as_slice() && seq != ids("ABC").as_slice(),
        || "forbidden image".into(),
    )?;
    Ok("image [A,C,B]; [C,A,B] and [A,B,C] do not occur".into())
}

fn exhaustive_sweep() -> Outcome {
    let counts: Vec<usize> = (1..=4)
        .map(|n| enumerate_monotone_01(n).unwrap().count())
        .collect();
    ensure(counts == [2, 5, 19, 167], || {
        format!("game counts {counts:?}")
    })?;
    let serial = CheckOptions { parallel: false };
    let start = Instant::now();
    let mut checked = 0;
    let mut properties = Vec::new();
    for n in 1..=4 {
        let source = GameSource::Exhaustive { n };
        for cd in CoordinateKind::VALID {
            let shuffle_reports = check_shuffle_properties(&source, &cd, serial).unwrap();
            let mechanism_reports =
                check_mechanism_properties(&source, MechanismConfig::Gsfs(cd), serial).unwrap();
            checked += all_pass(&shuffle_reports)? + all_pass(&mechanism_reports)?;
            properties.extend(
                shuffle_reports
                    .iter()
                    .chain(&mechanism_reports)
                    .filter(|r| r.checked > 0)
                    .map(|r| r.property),
            );
        }
    }
    let elapsed = start.elapsed();
    for required in [
        Property::Bijectivity,
        Property::PrefixCommutation,
        Property::RoundTrip,
        Property::GroupSizeMonotone,
        Property::FlipMonotone,
        Property::ShapleyFair,
        Property::OnlineIndividualRationality,
        Property::EarlyArrivalAdjacent,
        Property::EarlyArrivalGeneral,
        Property::BudgetBalance,
    ] {
        ensure(properties.contains(&required), || {
            format!("{required} never ran")
        })?;
    }
    ensure(elapsed < EXHAUSTIVE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{checked} checks, 0 violations, {elapsed:.2?} single-threaded"
    ))
}

fn gsfs_divergence() -> Outcome {
    let e = examples::g4();
    let game = e.cost.to_zero_one().unwrap();
    let reverse = final_shares(&e, MechanismConfig::Sfs);
    ensure(reverse == unit(5, 4), || {
        format!("reverse shares {reverse:?}")
    })?;
    let trace = shuffle_trace(&arrival(&e), &game, &CoordinateKind::Arrival).unwrap();
    ensure(trace[4].marginal() != Some(PlayerId(4)), || {
        "E marginal on arrival under arrival".into()
    })?;
    let arrival_shares = final_shares(&e, MechanismConfig::Gsfs(CoordinateKind::Arrival));
    ensure(arrival_shares == unit(5, 3), || {
        format!("arrival shares {arrival_shares:?}")
    })?;
    let source = GameSource::Explicit(vec![SourceGame {
        key: "g4".into(),
        cost: e.cost.clone(),
    }]);
    let mut checked = 0;
    for cd in CoordinateKind::VALID {
        checked +=
            all_pass(&check_shuffle_properties(&source, &cd, CheckOptions::default()).unwrap())?;
        checked += all_pass(
            &check_mechanism_properties(
                &source,
                MechanismConfig::Gsfs(cd),
                CheckOptions::default(),
            )
            .unwrap(),
        )?;
    }
    Ok(format!(
        "reverse: E pays 1; arrival: E never marginal on arrival, D pays 1; {checked} checks pass"
    ))
}

fn random_general() -> Outcome {
    let source = GameSource::Random {
        min_players: 1,
        max_players: 5,
        count: 200,
        seed: RANDOM_SEED,
        max_value: 8,
    };
    let games = source.games().unwrap();
    ensure(games.iter().any(|g| g.cost.universe().len() == 5), || {
        "no five-player game drawn".into()
    })?;
    ensure(games.iter().any(|g| !g.cost.is_zero_one()), || {
        "no general game drawn".into()
    })?;
    let start = Instant::now();
    let mut checked = 0;
    for cd in CoordinateKind::VALID {
        checked += all_pass(
            &check_mechanism_properties(
                &source,
                MechanismConfig::Egsfs(cd),
                CheckOptions::default(),
            )
            .unwrap(),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < RANDOM_GENERAL_BUDGET, || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "200 games (seed {RANDOM_SEED}), {checked} checks, 0 violations, {elapsed:.2?}"
    ))
}

fn decomposition_round_trip() -> Outcome {
    let source = GameSource::Random {
        min_players: 1,
        max_players: 6,
        count: 500,
        seed: RANDOM_SEED,
        max_value: 8,
    };
    let checked = all_pass(&check_decomposition(&source, CheckOptions::default()).unwrap())?;
    Ok(format!(
        "500 games (seed {RANDOM_SEED}), {checked} checks, 0 violations"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 golden shuffle trace", golden_trace),
        ("2 golden inversion", golden_inversion),
        ("3 three-player game with payer A or BC", three_player_game),
        ("4 forced image when AB is needed", example_one_game),
        ("5 exhaustive sweep n <= 4", exhaustive_sweep),
        ("6 coordinate rule divergence", gsfs_divergence),
        ("7 general games, random n <= 5", random_general),
        ("8 decomposition round trip", decomposition_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(Ok(note)) => println!("PASS criterion {name}: {note}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL criterion {name}: panicked");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
