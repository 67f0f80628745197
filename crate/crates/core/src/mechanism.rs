//! Online cost-sharing mechanisms built on shuffle rules.
//!
//! For a 0-1 game the player charged at each stage is the marginal player of
//! the image ordering of the prefix present so far. General monotone games
//! are decomposed per prefix into 0-1 level sets and the component shares
//! summed with their weights.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, PlayerId};
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::game::{CostFunction, ZeroOne};
use crate::order::ArrivalOrder;
use crate::scalar::Scalar;
use crate::shuffle::{shuffle, CoordinateKind, CoordinateRule, ShuffleState};

/// Shares of the players present at one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationVector<T> {
    shares: BTreeMap<PlayerId, T>,
}

impl<T: Scalar> AllocationVector<T> {
    pub fn from_shares(shares: BTreeMap<PlayerId, T>) -> Self {
        AllocationVector { shares }
    }

    pub fn share(&self, player: PlayerId) -> Option<&T> {
        self.shares.get(&player)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlayerId, &T)> {
        self.shares.iter().map(|(&p, v)| (p, v))
    }

    pub fn arrived(&self) -> Coalition {
        self.shares.keys().copied().collect()
    }

    pub fn total(&self) -> T {
        self.shares
            .values()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }
}

/// One allocation vector per arrival event, in arrival order.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationTrace<T> {
    arrivals: Vec<PlayerId>,
    steps: Vec<AllocationVector<T>>,
}

impl<T: Scalar> AllocationTrace<T> {
    pub fn from_steps(arrivals: Vec<PlayerId>, steps: Vec<AllocationVector<T>>) -> Self {
        AllocationTrace { arrivals, steps }
    }

    pub fn arrivals(&self) -> &[PlayerId] {
        &self.arrivals
    }

    pub fn steps(&self) -> &[AllocationVector<T>] {
        &self.steps
    }

    /// Shares once everyone has arrived; `None` for an empty order.
    pub fn final_shares(&self) -> Option<&AllocationVector<T>> {
        self.steps.last()
    }

    /// A player's final share, zero if she never arrived.
    pub fn final_share(&self, player: PlayerId) -> T {
        self.final_shares()
            .and_then(|v| v.share(player).cloned())
            .unwrap_or_else(T::zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "cd")]
pub enum MechanismConfig {
    /// Shapley-fair shuffle, identical to `Gsfs(Reverse)`.
    Sfs,
    Gsfs(CoordinateKind),
    /// Level-set decomposition per prefix, then `Gsfs` on every component.
    Egsfs(CoordinateKind),
}

impl MechanismConfig {
    pub fn rule(self) -> CoordinateKind {
        match self {
            MechanismConfig::Sfs => CoordinateKind::Reverse,
            MechanismConfig::Gsfs(cd) | MechanismConfig::Egsfs(cd) => cd,
        }
    }

    pub fn kind_name(self) -> &'static str {
        match self {
            MechanismConfig::Sfs => "sfs",
            MechanismConfig::Gsfs(_) => "gsfs",
            MechanismConfig::Egsfs(_) => "egsfs",
        }
    }

    pub fn from_parts(kind: &str, cd: CoordinateKind) -> std::result::Result<Self, String> {
        match kind {
            "sfs" if cd == CoordinateKind::Reverse => Ok(MechanismConfig::Sfs),
            "sfs" => Err(format!("sfs always uses the reverse rule, not {cd}")),
            "gsfs" => Ok(MechanismConfig::Gsfs(cd)),
            "egsfs" => Ok(MechanismConfig::Egsfs(cd)),
            other => Err(format!(
                "unknown mechanism '{other}' (expected sfs, gsfs or egsfs)"
            )),
        }
    }
}

impl fmt::Display for MechanismConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismConfig::Sfs => f.write_str("sfs"),
            MechanismConfig::Gsfs(cd) => write!(f, "gsfs({cd})"),
            MechanismConfig::Egsfs(cd) => write!(f, "egsfs({cd})"),
        }
    }
}

impl FromStr for MechanismConfig {
    type Err = String;

    /// `sfs`, `gsfs(arrival)`, `egsfs(reverse)`, ...
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "sfs" {
            return Ok(MechanismConfig::Sfs);
        }
        let (kind, rest) = s
            .split_once('(')
            .ok_or_else(|| format!("malformed mechanism '{s}'"))?;
        let cd = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("malformed mechanism '{s}'"))?
            .parse::<CoordinateKind>()
            .map_err(|e| e.to_string())?;
        Self::from_parts(kind, cd)
    }
}

/// Per-prefix shares for a 0-1 game: the marginal player of each image pays 1.
pub fn allocate_zero_one<T: Scalar, R: CoordinateRule + ?Sized>(
    game: &ZeroOne,
    order: &ArrivalOrder,
    rule: &R,
) -> Result<AllocationTrace<T>> {
    let mut state = ShuffleState::new(game);
    let mut steps = Vec::with_capacity(order.len());
    for &p in order.as_slice() {
        state.insert_next(p, rule)?;
        #[cfg(debug_assertions)]
        {
            let scratch = shuffle(&order.prefix(state.arrivals().len()), game, rule)?;
            assert_eq!(
                &scratch,
                state.image(),
                "incremental image diverged from scratch shuffle"
            );
        }
        let marginal = state.image().marginal();
        let shares = state
            .arrivals()
            .iter()
            .map(|&q| {
                (
                    q,
                    if Some(q) == marginal {
                        T::one()
                    } else {
                        T::zero()
                    },
                )
            })
            .collect();
        steps.push(AllocationVector { shares });
    }
    Ok(AllocationTrace {
        arrivals: order.as_slice().to_vec(),
        steps,
    })
}

/// [`allocate_zero_one`] for a cost function that must be 0-1 valued.
pub fn allocate_01_stream<T: Scalar, R: CoordinateRule + ?Sized>(
    c: &CostFunction<T>,
    order: &ArrivalOrder,
    rule: &R,
) -> Result<AllocationTrace<T>> {
    let game = c.to_zero_one()?;
    allocate_zero_one(&game, order, rule)
}

/// Weighted component shares under the decomposition of `c` restricted to
/// each prefix.
pub fn allocate_general_stream<T: Scalar, R: CoordinateRule + ?Sized>(
    c: &CostFunction<T>,
    order: &ArrivalOrder,
    rule: &R,
) -> Result<AllocationTrace<T>> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    let players = order.players();
    if !players.is_subset_of(c.universe()) {
        return Err(Error::OutsideUniverse {
            coalition: players,
            universe: c.universe(),
        });
    }
    let mut steps = Vec::with_capacity(order.len());
    for k in 1..=order.len() {
        let prefix = order.prefix(k);
        let local = c.restrict(prefix.players())?;
        let mut shares: BTreeMap<PlayerId, T> =
            prefix.as_slice().iter().map(|&p| (p, T::zero())).collect();
        for comp in decompose(&local)?.components() {
            if let Some(m) = shuffle(&prefix, &comp.game, rule)?.marginal() {
                let share = shares.get_mut(&m).expect("marginal player has arrived");
                *share = share.clone() + comp.weight.clone();
            }
        }
        steps.push(AllocationVector { shares });
    }
    Ok(AllocationTrace {
        arrivals: order.as_slice().to_vec(),
        steps,
    })
}

/// Runs the configured mechanism. `Sfs` and `Gsfs` require a 0-1 game.
pub fn allocate<T: Scalar>(
    c: &CostFunction<T>,
    order: &ArrivalOrder,
    config: MechanismConfig,
) -> Result<AllocationTrace<T>> {
    match config {
        MechanismConfig::Sfs | MechanismConfig::Gsfs(_) => {
            allocate_01_stream(c, order, &config.rule())
        }
        MechanismConfig::Egsfs(cd) => allocate_general_stream(c, order, &cd),
    }
}
