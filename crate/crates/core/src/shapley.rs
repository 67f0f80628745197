//! Brute-force Shapley values, the ground truth for fairness checks.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::CostFunction;
use crate::order::{factorial, orderings};
use crate::scalar::Scalar;

/// Largest universe the factorial enumeration accepts.
pub const MAX_ORACLE_PLAYERS: usize = 10;

/// Sum over all arrival orders of each player's marginal cost at arrival,
/// indexed by player index over the full index space. Entries for players
/// outside the universe are zero.
pub fn marginal_cost_totals<T: Scalar>(c: &CostFunction<T>) -> Result<Vec<T>> {
    let universe = c.universe();
    if universe.len() > MAX_ORACLE_PLAYERS {
        return Err(Error::Capacity {
            what: "universe size for the Shapley oracle",
            size: universe.len(),
            max: MAX_ORACLE_PLAYERS,
        });
    }
    let mut totals = vec![T::zero(); c.n()];
    for order in orderings(universe) {
        let mut before = Coalition::EMPTY;
        let mut before_value = T::zero();
        for &p in order.as_slice() {
            let after = before.with(p);
            let after_value = c.value(after);
            totals[p.index()] = totals[p.index()].clone() + after_value.clone() - before_value;
            before = after;
            before_value = after_value;
        }
    }
    Ok(totals)
}

/// `SV_i = (1/n!) Σ_π MC(i, c, p(i, π))` for every player, by enumeration.
pub fn shapley_oracle<T: Scalar>(c: &CostFunction<T>) -> Result<Vec<T>> {
    let count = T::from_count(factorial(c.universe().len()));
    Ok(marginal_cost_totals(c)?
        .into_iter()
        .map(|t| t / count.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::PlayerId;
    use crate::Rational;

    fn set(players: &[u8]) -> Coalition {
        players.iter().map(|&p| PlayerId(p)).collect()
    }

    #[test]
    fn three_player_zero_one_game() {
        let g1 = CostFunction::<Rational>::zero_one(3, vec![set(&[0]), set(&[1, 2])]).unwrap();
        let sv = shapley_oracle(&g1).unwrap();
        assert_eq!(
            sv,
            vec![
                Rational::new(2, 3),
                Rational::new(1, 6),
                Rational::new(1, 6)
            ]
        );
        let totals = marginal_cost_totals(&g1).unwrap();
        assert_eq!(
            totals,
            vec![Rational::from(4), Rational::from(1), Rational::from(1)]
        );
    }

    #[test]
    fn constant_zero() {
        let zero = CostFunction::<Rational>::zero_one(4, vec![]).unwrap();
        assert!(shapley_oracle(&zero)
            .unwrap()
            .iter()
            .all(|v| *v == Rational::from(0)));
    }

    #[test]
    fn two_player_table() {
        let g5 = CostFunction::table(2, [0, 1, 2, 3].map(Rational::from).to_vec()).unwrap();
        assert_eq!(
            shapley_oracle(&g5).unwrap(),
            vec![Rational::from(1), Rational::from(2)]
        );
        let f = CostFunction::table(2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(shapley_oracle(&f).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn restricted_universe_only_counts_members() {
        let g1 = CostFunction::<Rational>::zero_one(3, vec![set(&[0]), set(&[1, 2])]).unwrap();
        let sv = shapley_oracle(&g1.restrict(set(&[1, 2])).unwrap()).unwrap();
        assert_eq!(
            sv,
            vec![Rational::from(0), Rational::new(1, 2), Rational::new(1, 2)]
        );
    }

    #[test]
    fn capacity() {
        let big = CostFunction::<Rational>::zero_one(11, vec![]).unwrap();
        assert!(matches!(shapley_oracle(&big), Err(Error::Capacity { .. })));
    }
}
