use costshare::decompose::{decompose, verify_decomposition};
use costshare::mechanism::{allocate, MechanismConfig};
use costshare::shapley::shapley_oracle;
use costshare::shuffle::{invert, shuffle, CoordinateKind};
use costshare::verify::random_monotone_table;
use costshare::{ArrivalOrder, Coalition, PlayerId, Rational, RationalCost, ZeroOne};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table(seed: u64, n: usize, max_value: u32) -> RationalCost {
    random_monotone_table(&mut ChaCha8Rng::seed_from_u64(seed), n, max_value)
}

fn players(n: usize) -> Vec<PlayerId> {
    (0..n as u8).map(PlayerId).collect()
}

fn zero_one(n: usize, masks: Vec<u32>) -> ZeroOne {
    let full = (1u32 << n) - 1;
    let sets = masks
        .into_iter()
        .map(|m| Coalition::from_bits(m & full))
        .filter(|s| !s.is_empty())
        .collect();
    ZeroOne::new(n, sets).unwrap()
}

fn rule() -> impl Strategy<Value = CoordinateKind> {
    prop::sample::select(CoordinateKind::VALID.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shapley_values_sum_to_grand_cost(seed in any::<u64>(), n in 1usize..=6) {
        let c = table(seed, n, 9);
        let total: Rational = shapley_oracle(&c).unwrap().into_iter().sum();
        prop_assert_eq!(total, c.evaluate(Coalition::full(n)).unwrap());
    }

    #[test]
    fn restriction_agrees_inside_and_vanishes_outside(seed in any::<u64>(), n in 1usize..=6, mask in any::<u32>()) {
        let c = table(seed, n, 9);
        let s = Coalition::from_bits(mask & ((1 << n) - 1));
        let r = c.restrict(s).unwrap();
        prop_assert_eq!(r.universe(), s);
        for t in s.subsets() {
            prop_assert_eq!(r.evaluate(t).unwrap(), c.evaluate(t).unwrap());
        }
        prop_assert!(r.evaluate(Coalition::full(n)).is_err() || s == Coalition::full(n));
    }

    #[test]
    fn decomposition_is_exact_and_prefix_consistent(seed in any::<u64>(), n in 1usize..=6, mask in any::<u32>()) {
        let c = table(seed, n, 12);
        let d = decompose(&c).unwrap();
        prop_assert!(verify_decomposition(&c, &d).passed());
        let s = Coalition::from_bits(mask & ((1 << n) - 1));
        let direct = decompose(&c.restrict(s).unwrap()).unwrap();
        for t in s.subsets() {
            let via_restriction: Rational = d
                .components()
                .iter()
                .filter(|k| k.game.is_one(t))
                .map(|k| k.weight)
                .sum();
            prop_assert_eq!(direct.value(t), via_restriction);
        }
    }

    #[test]
    fn shuffle_inverts(n in 1usize..=8, masks in prop::collection::vec(any::<u32>(), 0..5), cd in rule(), perm in any::<u64>()) {
        let game = zero_one(n, masks);
        let mut order = players(n);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(perm));
        let order = ArrivalOrder::new(order).unwrap();
        let image = shuffle(&order, &game, &cd).unwrap();
        prop_assert_eq!(invert(image.sequence(), &game, &cd).unwrap(), order);
    }

    #[test]
    fn general_mechanism_balances_budget(seed in any::<u64>(), n in 1usize..=6, cd in rule(), perm in any::<u64>()) {
        let c = table(seed, n, 8);
        let mut order = players(n);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(perm));
        let order = ArrivalOrder::new(order).unwrap();
        let trace = allocate(&c, &order, MechanismConfig::Egsfs(cd)).unwrap();
        for (k, step) in trace.steps().iter().enumerate() {
            let prefix = order.prefix(k + 1).players();
            prop_assert_eq!(step.total(), c.evaluate(prefix).unwrap());
            prop_assert!(step.iter().all(|(_, v)| *v >= Rational::zero()));
        }
        for k in 1..trace.steps().len() {
            for (p, before) in trace.steps()[k - 1].iter() {
                prop_assert!(trace.steps()[k].share(p).unwrap() <= before);
            }
        }
    }
}

#[test]
fn floating_point_costs_run_through_the_general_mechanism() {
    let c = costshare::F64Cost::table(2, vec![0.0, 1.5, 2.0, 3.0]).unwrap();
    let order = ArrivalOrder::new(players(2)).unwrap();
    let trace = allocate(&c, &order, MechanismConfig::Egsfs(CoordinateKind::Reverse)).unwrap();
    let last = trace.final_shares().unwrap();
    assert!((last.total() - 3.0).abs() < 1e-12);
}
