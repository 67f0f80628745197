//! Level-set decomposition of a monotone cost function into positively
//! weighted monotone 0-1 components.
//!
//! With `0 < v_1 < ... < v_m` the distinct nonzero values of `c`, component
//! `k` is the threshold indicator `g_k(S) = [c(S) >= v_k]` with weight
//! `v_k - v_{k-1}`, so that `c = Σ_k weight_k · g_k` exactly.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{CostFunction, ZeroOne};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Component<T> {
    pub game: ZeroOne,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    components: Vec<Component<T>>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn new(components: Vec<Component<T>>) -> Self {
        Decomposition { components }
    }

    pub fn components(&self) -> &[Component<T>] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Component<T>] {
        &mut self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `Σ_k weight_k · g_k(set)`.
    pub fn value(&self, set: Coalition) -> T {
        self.components
            .iter()
            .filter(|comp| comp.game.is_one(set))
            .fold(T::zero(), |acc, comp| acc + comp.weight.clone())
    }
}

/// Threshold decomposition of a valid cost function.
pub fn decompose<T: Scalar>(c: &CostFunction<T>) -> Result<Decomposition<T>> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    if let CostFunction::ZeroOne(z) = c {
        let components = if z.minimal_sets().is_empty() {
            Vec::new()
        } else {
            vec![Component {
                game: z.clone(),
                weight: T::one(),
            }]
        };
        return Ok(Decomposition::new(components));
    }
    let mut previous = T::zero();
    let mut components = Vec::new();
    for threshold in c.distinct_nonzero_values() {
        let game = ZeroOne::from_indicator(c.n(), c.universe(), |s| c.value(s) >= threshold);
        let weight = threshold.clone() - previous;
        previous = threshold;
        components.push(Component { game, weight });
    }
    Ok(Decomposition::new(components))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    SumMismatch {
        coalition: Coalition,
        expected: String,
        actual: String,
    },
    NonPositiveWeight {
        component: usize,
        weight: String,
    },
    NonMonotone {
        component: usize,
        subset: Coalition,
        superset: Coalition,
    },
    UniverseMismatch {
        component: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violations: Vec<DecompositionViolation>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the weighted sum on every subset, positivity of every weight and
/// monotonicity of every component.
pub fn verify_decomposition<T: Scalar>(
    c: &CostFunction<T>,
    d: &Decomposition<T>,
) -> DecompositionReport {
    let mut violations = Vec::new();
    let universe = c.universe();
    for (k, comp) in d.components().iter().enumerate() {
        // a NaN weight counts as non-positive
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(comp.weight > T::zero()) {
            violations.push(DecompositionViolation::NonPositiveWeight {
                component: k,
                weight: comp.weight.to_string(),
            });
        }
        if comp.game.universe() != universe || comp.game.n() != c.n() {
            violations.push(DecompositionViolation::UniverseMismatch { component: k });
            continue;
        }
        for s in universe.subsets() {
            for p in s.players() {
                if comp.game.is_one(s.without(p)) && !comp.game.is_one(s) {
                    violations.push(DecompositionViolation::NonMonotone {
                        component: k,
                        subset: s.without(p),
                        superset: s,
                    });
                }
            }
        }
        if comp.game.is_one(Coalition::EMPTY) {
            violations.push(DecompositionViolation::NonMonotone {
                component: k,
                subset: Coalition::EMPTY,
                superset: Coalition::EMPTY,
            });
        }
    }
    if !violations
        .iter()
        .any(|v| matches!(v, DecompositionViolation::UniverseMismatch { .. }))
    {
        for s in universe.subsets() {
            let expected = c.value(s);
            let actual = d.value(s);
            if expected != actual {
                violations.push(DecompositionViolation::SumMismatch {
                    coalition: s,
                    expected: expected.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
    }
    DecompositionReport { violations }
}
