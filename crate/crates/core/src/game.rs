//! Normalized monotone cost functions over a bit-set universe.
//!
//! Two representations share one interface: an explicit [`Table`] over all
//! subsets, and [`ZeroOne`], a 0-1 function given by its antichain of minimal
//! cost-1 coalitions. Player indices are never renumbered; restricting a
//! function shrinks its universe mask instead.

use std::fmt;

use crate::coalition::{Coalition, PlayerId, Players, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A 0-1 valued monotone function, canonically stored as the antichain of its
/// minimal winning coalitions.
#[derive(Debug, Clone)]
pub struct ZeroOne {
    n: usize,
    universe: Coalition,
    minimal: Vec<Coalition>,
    winning: Vec<u64>,
}

impl PartialEq for ZeroOne {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.universe == other.universe && self.minimal == other.minimal
    }
}

impl Eq for ZeroOne {}

fn check_player_count(n: usize) -> Result<()> {
    if n > MAX_PLAYERS {
        return Err(Error::Capacity {
            what: "player count",
            size: n,
            max: MAX_PLAYERS,
        });
    }
    Ok(())
}

fn check_subset(set: Coalition, universe: Coalition) -> Result<()> {
    if set.is_subset_of(universe) {
        Ok(())
    } else {
        Err(Error::OutsideUniverse {
            coalition: set,
            universe,
        })
    }
}

/// Drops duplicates and supersets; the result is sorted by bit pattern.
fn minimize(mut sets: Vec<Coalition>) -> Vec<Coalition> {
    sets.sort_by_key(|s| (s.len(), s.bits()));
    sets.dedup();
    let mut kept: Vec<Coalition> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset_of(s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl ZeroOne {
    /// Builds the function whose cost-1 coalitions are the supersets of any
    /// of `sets`. Comparable or repeated generators are canonicalized away.
    pub fn from_minimal_sets(n: usize, universe: Coalition, sets: Vec<Coalition>) -> Result<Self> {
        check_player_count(n)?;
        check_subset(universe, Coalition::full(n))?;
        for &s in &sets {
            check_subset(s, universe)?;
            if s.is_empty() {
                return Err(Error::EmptyCoalition);
            }
        }
        Ok(Self::from_canonical(n, universe, minimize(sets)))
    }

    /// On the full universe `{0..n-1}`.
    pub fn new(n: usize, sets: Vec<Coalition>) -> Result<Self> {
        check_player_count(n)?;
        Self::from_minimal_sets(n, Coalition::full(n), sets)
    }

    /// The constant-0 function.
    pub fn zero(n: usize, universe: Coalition) -> Self {
        Self::from_canonical(n, universe, Vec::new())
    }

    /// Builds from a monotone indicator on subsets of `universe`; the
    /// indicator must be false on the empty set.
    pub(crate) fn from_indicator(
        n: usize,
        universe: Coalition,
        f: impl Fn(Coalition) -> bool,
    ) -> Self {
        let minimal = universe
            .subsets()
            .filter(|&s| f(s) && s.players().all(|p| !f(s.without(p))))
            .collect::<Vec<_>>();
        debug_assert!(!minimal.contains(&Coalition::EMPTY));
        Self::from_canonical(n, universe, minimize(minimal))
    }

    fn from_canonical(n: usize, universe: Coalition, minimal: Vec<Coalition>) -> Self {
        let size = 1usize << n;
        let mut winning = vec![0u64; size.div_ceil(64)];
        let get = |w: &[u64], s: usize| w[s >> 6] >> (s & 63) & 1 == 1;
        let mut is_min = vec![0u64; winning.len()];
        for m in &minimal {
            is_min[m.index() >> 6] |= 1 << (m.index() & 63);
        }
        // superset closure in increasing bit order
        for s in 0..size {
            let mut win = get(&is_min, s);
            let mut rest = s;
            while !win && rest != 0 {
                let low = rest & rest.wrapping_neg();
                win = get(&winning, s ^ low);
                rest ^= low;
            }
            if win {
                winning[s >> 6] |= 1 << (s & 63);
            }
        }
        ZeroOne {
            n,
            universe,
            minimal,
            winning,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> Coalition {
        self.universe
    }

    pub fn minimal_sets(&self) -> &[Coalition] {
        &self.minimal
    }

    /// `c(set) = 1`, without the universe check.
    #[inline]
    pub fn is_one(&self, set: Coalition) -> bool {
        let s = set.index();
        self.winning[s >> 6] >> (s & 63) & 1 == 1
    }

    pub fn evaluate(&self, set: Coalition) -> Result<bool> {
        check_subset(set, self.universe)?;
        Ok(self.is_one(set))
    }

    pub fn restrict(&self, set: Coalition) -> Result<ZeroOne> {
        check_subset(set, self.universe)?;
        let minimal = self
            .minimal
            .iter()
            .copied()
            .filter(|m| m.is_subset_of(set))
            .collect();
        Ok(Self::from_canonical(self.n, set, minimal))
    }

    fn antichain_violations(&self) -> Vec<(Coalition, Coalition)> {
        let mut out = Vec::new();
        for (k, &a) in self.minimal.iter().enumerate() {
            for &b in &self.minimal[k + 1..] {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Explicit values for every subset of the index space `{0..n-1}`; entries
/// outside the universe are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    n: usize,
    universe: Coalition,
    values: Vec<T>,
}

impl<T: Scalar> Table<T> {
    /// `values[s]` is the cost of the coalition with bit pattern `s`.
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        check_player_count(n)?;
        if values.len() != 1 << n {
            return Err(Error::TableSize {
                got: values.len(),
                expected: 1 << n,
            });
        }
        Ok(Table {
            n,
            universe: Coalition::full(n),
            values,
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(Coalition) -> T) -> Result<Self> {
        check_player_count(n)?;
        let values = (0..1u32 << n).map(|s| f(Coalition::from_bits(s))).collect();
        Self::new(n, values)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// A cost function `c: 2^universe -> T`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostFunction<T> {
    Table(Table<T>),
    ZeroOne(ZeroOne),
}

impl<T> From<ZeroOne> for CostFunction<T> {
    fn from(z: ZeroOne) -> Self {
        CostFunction::ZeroOne(z)
    }
}

impl<T> From<Table<T>> for CostFunction<T> {
    fn from(t: Table<T>) -> Self {
        CostFunction::Table(t)
    }
}

impl<T: Scalar> CostFunction<T> {
    pub fn table(n: usize, values: Vec<T>) -> Result<Self> {
        Table::new(n, values).map(CostFunction::Table)
    }

    pub fn zero_one(n: usize, sets: Vec<Coalition>) -> Result<Self> {
        ZeroOne::new(n, sets).map(CostFunction::ZeroOne)
    }

    /// Size of the underlying index space.
    pub fn n(&self) -> usize {
        match self {
            CostFunction::Table(t) => t.n,
            CostFunction::ZeroOne(z) => z.n,
        }
    }

    pub fn universe(&self) -> Coalition {
        match self {
            CostFunction::Table(t) => t.universe,
            CostFunction::ZeroOne(z) => z.universe,
        }
    }

    /// `c(set)`; `set` must lie inside the universe.
    pub fn evaluate(&self, set: Coalition) -> Result<T> {
        check_subset(set, self.universe())?;
        Ok(self.value(set))
    }

    #[inline]
    pub(crate) fn value(&self, set: Coalition) -> T {
        match self {
            CostFunction::Table(t) => t.values[set.index()].clone(),
            CostFunction::ZeroOne(z) => {
                if z.is_one(set) {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    /// `c(set) - c(set \ {player})`.
    pub fn marginal_cost(&self, player: PlayerId, set: Coalition) -> Result<T> {
        check_subset(set, self.universe())?;
        if !set.contains(player) {
            return Err(Error::NotAMember {
                player,
                coalition: set,
            });
        }
        Ok(self.value(set) - self.value(set.without(player)))
    }

    /// `c` restricted to the subsets of `set`.
    pub fn restrict(&self, set: Coalition) -> Result<Self> {
        check_subset(set, self.universe())?;
        Ok(match self {
            CostFunction::Table(t) => {
                let values = (0..t.values.len() as u32)
                    .map(|s| {
                        let s = Coalition::from_bits(s);
                        if s.is_subset_of(set) {
                            t.values[s.index()].clone()
                        } else {
                            T::zero()
                        }
                    })
                    .collect();
                CostFunction::Table(Table {
                    n: t.n,
                    universe: set,
                    values,
                })
            }
            CostFunction::ZeroOne(z) => CostFunction::ZeroOne(z.restrict(set)?),
        })
    }

    pub fn is_zero_one(&self) -> bool {
        match self {
            CostFunction::ZeroOne(_) => true,
            CostFunction::Table(_) => self
                .universe()
                .subsets()
                .all(|s| self.value(s).is_zero() || self.value(s).is_one()),
        }
    }

    /// The 0-1 representation, if the function is valid and 0-1 valued.
    pub fn to_zero_one(&self) -> Result<ZeroOne> {
        match self {
            CostFunction::ZeroOne(z) => Ok(z.clone()),
            CostFunction::Table(_) => {
                let report = self.validate();
                if !report.is_valid() {
                    return Err(Error::Invalid(report));
                }
                if !self.is_zero_one() {
                    return Err(Error::NotZeroOne);
                }
                Ok(ZeroOne::from_indicator(self.n(), self.universe(), |s| {
                    self.value(s).is_one()
                }))
            }
        }
    }

    pub fn to_table(&self) -> Table<T> {
        let universe = self.universe();
        let values = (0..1u32 << self.n())
            .map(|s| {
                let s = Coalition::from_bits(s);
                if s.is_subset_of(universe) {
                    self.value(s)
                } else {
                    T::zero()
                }
            })
            .collect();
        Table {
            n: self.n(),
            universe,
            values,
        }
    }

    /// Same universe and same value on every coalition in it.
    pub fn same_function(&self, other: &Self) -> bool {
        self.universe() == other.universe()
            && self
                .universe()
                .subsets()
                .all(|s| self.value(s) == other.value(s))
    }

    /// Distinct nonzero values, ascending.
    pub fn distinct_nonzero_values(&self) -> Vec<T> {
        let mut values: Vec<T> = Vec::new();
        for s in self.universe().subsets() {
            let v = self.value(s);
            if !v.is_zero() && !values.contains(&v) {
                values.push(v);
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        values
    }

    /// Checks normalization, monotonicity and, for 0-1 functions, the
    /// antichain invariant. Every violated pair is listed.
    pub fn validate(&self) -> ValidationReport {
        let universe = self.universe();
        let mut report = ValidationReport::default();
        let empty = self.value(Coalition::EMPTY);
        if !empty.is_zero() {
            report.normalization = Some(empty.to_string());
        }
        let covering_ok = universe.subsets().all(|s| {
            s.players()
                .all(|p| self.value(s.without(p)) <= self.value(s))
        });
        if !covering_ok {
            for big in universe.subsets() {
                let big_value = self.value(big);
                for small in big.subsets().filter(|&t| t != big) {
                    let small_value = self.value(small);
                    // NaN counts as a violation
                    #[allow(clippy::neg_cmp_op_on_partial_ord)]
                    if !(small_value <= big_value) {
                        report.monotonicity.push(MonotonicityViolation {
                            subset: small,
                            superset: big,
                            subset_value: small_value.to_string(),
                            superset_value: big_value.to_string(),
                        });
                    }
                }
            }
        }
        if let CostFunction::ZeroOne(z) = self {
            report.antichain = z.antichain_violations();
            report.empty_generator = z.minimal.contains(&Coalition::EMPTY);
        }
        report
    }
}

/// `c(subset) > c(superset)` for `subset ⊂ superset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub subset: Coalition,
    pub superset: Coalition,
    pub subset_value: String,
    pub superset_value: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// The value on the empty coalition, when it is not zero.
    pub normalization: Option<String>,
    pub monotonicity: Vec<MonotonicityViolation>,
    /// Comparable pairs in a minimal-coalition list.
    pub antichain: Vec<(Coalition, Coalition)>,
    pub empty_generator: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.normalization.is_none()
            && self.monotonicity.is_empty()
            && self.antichain.is_empty()
            && !self.empty_generator
    }

    pub fn messages(&self) -> Vec<String> {
        self.describe(|s| s.to_string())
    }

    /// [`messages`](Self::messages) with coalitions spelled by player name.
    pub fn named_messages(&self, players: &Players) -> Vec<String> {
        self.describe(|s| players.format_coalition(s))
    }

    fn describe(&self, name: impl Fn(Coalition) -> String) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(v) = &self.normalization {
            out.push(format!("not normalized: c({{}}) = {v}"));
        }
        for m in &self.monotonicity {
            out.push(format!(
                "not monotone: c({}) = {} > c({}) = {}",
                name(m.subset),
                m.subset_value,
                name(m.superset),
                m.superset_value
            ));
        }
        for (a, b) in &self.antichain {
            out.push(format!(
                "minimal coalitions {} and {} are comparable",
                name(*a),
                name(*b)
            ));
        }
        if self.empty_generator {
            out.push("minimal coalitions contain the empty set".to_string());
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        f.write_str(&self.messages().join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn set(players: &[u8]) -> Coalition {
        players.iter().map(|&p| PlayerId(p)).collect()
    }

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    /// c(S)=1 iff A ∈ S or {B,C} ⊆ S.
    fn g1() -> CostFunction<Rational> {
        CostFunction::zero_one(3, vec![set(&[0]), set(&[1, 2])]).unwrap()
    }

    /// A:1, B:2, AB:3
    fn g5() -> CostFunction<Rational> {
        CostFunction::table(2, vec![r(0), r(1), r(2), r(3)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(g1().evaluate(set(&[1, 2])).unwrap(), r(1));
        assert_eq!(g1().evaluate(Coalition::EMPTY).unwrap(), r(0));
        assert_eq!(g1().evaluate(set(&[1])).unwrap(), r(0));
        assert_eq!(g5().evaluate(set(&[0, 1])).unwrap(), r(3));
    }

    #[test]
    fn evaluate_outside_universe() {
        assert!(matches!(
            g1().evaluate(set(&[3])),
            Err(Error::OutsideUniverse { .. })
        ));
        let restricted = g1().restrict(set(&[1, 2])).unwrap();
        assert!(restricted.evaluate(set(&[0])).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(g1().validate().is_valid());
        assert!(g5().validate().is_valid());

        let unnormalized = CostFunction::table(1, vec![r(1), r(1)]).unwrap();
        let report = unnormalized.validate();
        assert_eq!(report.normalization.as_deref(), Some("1"));
        assert!(report.monotonicity.is_empty());

        let decreasing = CostFunction::table(2, vec![r(0), r(2), r(0), r(1)]).unwrap();
        let report = decreasing.validate();
        assert_eq!(report.monotonicity.len(), 1);
        assert_eq!(report.monotonicity[0].subset, set(&[0]));
        assert_eq!(report.monotonicity[0].superset, set(&[0, 1]));
        assert!(!report.is_valid());
        assert!(report.to_string().contains("not monotone"));
    }

    #[test]
    fn validate_lists_every_violated_pair() {
        // c({A}) = 5 exceeds c({A,B}), c({A,C}) and c({A,B,C})
        let c =
            CostFunction::table(3, vec![r(0), r(5), r(1), r(2), r(1), r(2), r(2), r(3)]).unwrap();
        assert_eq!(c.validate().monotonicity.len(), 3);
    }

    #[test]
    fn minimal_sets_are_canonicalized() {
        let z = ZeroOne::new(3, vec![set(&[1, 2]), set(&[0]), set(&[0, 1]), set(&[0])]).unwrap();
        assert_eq!(z.minimal_sets(), &[set(&[0]), set(&[1, 2])]);
        assert!(z.antichain_violations().is_empty());
        assert_eq!(
            ZeroOne::new(2, vec![Coalition::EMPTY]),
            Err(Error::EmptyCoalition)
        );
    }

    #[test]
    fn restrict_examples() {
        let r1 = g1().restrict(set(&[1, 2])).unwrap();
        let expected = ZeroOne::from_minimal_sets(3, set(&[1, 2]), vec![set(&[1, 2])]).unwrap();
        assert_eq!(r1, CostFunction::ZeroOne(expected));
        for t in set(&[1, 2]).subsets() {
            assert_eq!(r1.evaluate(t).unwrap(), g1().evaluate(t).unwrap());
        }
        assert_eq!(g1().restrict(g1().universe()).unwrap(), g1());
        assert!(g1().restrict(set(&[5])).is_err());
        let t = g5().restrict(set(&[1])).unwrap();
        assert_eq!(t.evaluate(set(&[1])).unwrap(), r(2));
    }

    #[test]
    fn marginal_cost_examples() {
        assert_eq!(g1().marginal_cost(PlayerId(2), set(&[1, 2])).unwrap(), r(1));
        assert_eq!(
            g1().marginal_cost(PlayerId(2), set(&[0, 1, 2])).unwrap(),
            r(0)
        );
        let zero = CostFunction::<Rational>::zero_one(2, vec![]).unwrap();
        assert_eq!(zero.marginal_cost(PlayerId(0), set(&[0])).unwrap(), r(0));
        assert!(matches!(
            g1().marginal_cost(PlayerId(0), set(&[1])),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn table_and_zero_one_agree() {
        let z = g1();
        let t = CostFunction::Table(z.to_table());
        assert!(z.same_function(&t));
        assert_eq!(t.to_zero_one().unwrap(), z.to_zero_one().unwrap());
        assert_eq!(g5().to_zero_one(), Err(Error::NotZeroOne));
    }

    #[test]
    fn distinct_values_sorted() {
        assert_eq!(g5().distinct_nonzero_values(), vec![r(1), r(2), r(3)]);
        assert_eq!(g1().distinct_nonzero_values(), vec![r(1)]);
    }

    #[test]
    fn works_over_floats() {
        let c = CostFunction::table(2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.marginal_cost(PlayerId(1), set(&[0, 1])).unwrap(), 2.0);
    }
}
