use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, PlayerId, Players, MAX_PLAYERS};
use crate::game::CostFunction;
use crate::gamefile::GameSpec;
use crate::shuffle::CoordinateKind;
use crate::Rational;

/// Witnesses kept per property; the failure count is always exact.
pub const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Bijectivity,
    PrefixCommutation,
    RoundTrip,
    GroupSizeMonotone,
    FlipMonotone,
    /// Everyone arriving after a player who was marginal on arrival sits
    /// before her in the final image.
    LateArrivalsPrecede,
    /// On a flip of the last two arrivals with the same marginal player,
    /// the related prefixes nest.
    RelatedPrefixNesting,
    BudgetBalance,
    NonNegative,
    OnlineIndividualRationality,
    ShapleyFair,
    EarlyArrivalAdjacent,
    EarlyArrivalGeneral,
    EarlyArrivalFormsAgree,
    DecompositionExact,
    DecompositionPrefixConsistency,
    RuleBijection,
    RulePrefixCommutation,
    RuleInverse,
    Golden,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Bijectivity => "bijectivity",
            Property::PrefixCommutation => "prefix-commutation",
            Property::RoundTrip => "round-trip",
            Property::GroupSizeMonotone => "group-size-monotone",
            Property::FlipMonotone => "flip-monotone",
            Property::LateArrivalsPrecede => "late-arrivals-precede",
            Property::RelatedPrefixNesting => "related-prefix-nesting",
            Property::BudgetBalance => "budget-balance",
            Property::NonNegative => "non-negative",
            Property::OnlineIndividualRationality => "online-individual-rationality",
            Property::ShapleyFair => "shapley-fair",
            Property::EarlyArrivalAdjacent => "early-arrival-adjacent",
            Property::EarlyArrivalGeneral => "early-arrival-general",
            Property::EarlyArrivalFormsAgree => "early-arrival-forms-agree",
            Property::DecompositionExact => "decomposition-exact",
            Property::DecompositionPrefixConsistency => "decomposition-prefix-consistency",
            Property::RuleBijection => "rule-bijection",
            Property::RulePrefixCommutation => "rule-prefix-commutation",
            Property::RuleInverse => "rule-inverse",
            Property::Golden => "golden",
        }
    }

    pub const ALL: [Property; 20] = [
        Property::Bijectivity,
        Property::PrefixCommutation,
        Property::RoundTrip,
        Property::GroupSizeMonotone,
        Property::FlipMonotone,
        Property::LateArrivalsPrecede,
        Property::RelatedPrefixNesting,
        Property::BudgetBalance,
        Property::NonNegative,
        Property::OnlineIndividualRationality,
        Property::ShapleyFair,
        Property::EarlyArrivalAdjacent,
        Property::EarlyArrivalGeneral,
        Property::EarlyArrivalFormsAgree,
        Property::DecompositionExact,
        Property::DecompositionPrefixConsistency,
        Property::RuleBijection,
        Property::RulePrefixCommutation,
        Property::RuleInverse,
        Property::Golden,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown property '{s}'"))
    }
}

/// Everything needed to re-run one failing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub game: GameSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cd: Option<CoordinateKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    pub detail: String,
}

/// Outcome of one property over one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub instance: String,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<(String, Witness)>,
}

impl PropertyReport {
    pub fn new(property: Property, instance: impl Into<String>) -> Self {
        PropertyReport {
            property,
            instance: instance.into(),
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub(crate) fn absorb(&mut self, other: PropertyReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<34} {:<44} checked={} failures={}",
            self.property.as_str(),
            self.instance,
            self.checked,
            self.failures
        )
    }
}

/// A failed predicate, before it is named for a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Failure {
    pub orders: Vec<Vec<PlayerId>>,
    pub player: Option<PlayerId>,
    pub detail: String,
}

impl Failure {
    pub fn new(
        orders: Vec<Vec<PlayerId>>,
        player: Option<PlayerId>,
        detail: impl Into<String>,
    ) -> Self {
        Failure {
            orders,
            player,
            detail: detail.into(),
        }
    }
}

/// What a witness needs beyond the failure itself.
pub(crate) struct WitnessContext<'a> {
    pub game_key: &'a str,
    pub cost: &'a CostFunction<Rational>,
    pub cd: Option<CoordinateKind>,
    pub mechanism: Option<String>,
}

impl WitnessContext<'_> {
    pub fn players(&self) -> Players {
        Players::lettered(self.cost.n())
    }

    pub fn witness(&self, failure: Failure) -> (String, Witness) {
        let players = self.players();
        let names = |seq: &[PlayerId]| seq.iter().map(|&p| players.name(p).to_string()).collect();
        let witness = Witness {
            game: GameSpec::from_game(&players, self.cost, None),
            cd: self.cd,
            mechanism: self.mechanism.clone(),
            orders: failure.orders.iter().map(|o| names(o)).collect(),
            player: failure.player.map(|p| players.name(p).to_string()),
            example: None,
            detail: failure.detail,
        };
        (self.game_key.to_string(), witness)
    }
}

/// Lettered display used in failure details; sweeps always letter players.
pub(crate) fn seq(players: &[PlayerId]) -> String {
    format!(
        "[{}]",
        Players::lettered(MAX_PLAYERS).format_sequence(players)
    )
}

pub(crate) fn set(coalition: Coalition) -> String {
    Players::lettered(MAX_PLAYERS).format_coalition(coalition)
}

pub(crate) fn who(player: Option<PlayerId>) -> String {
    player.map_or_else(
        || "none".to_string(),
        |p| Players::lettered(MAX_PLAYERS).name(p).to_string(),
    )
}

/// Per-property accumulation for one game, in first-seen property order.
pub(crate) struct Tally {
    instance: String,
    reports: Vec<PropertyReport>,
}

impl Tally {
    pub fn new(instance: impl Into<String>) -> Self {
        Tally {
            instance: instance.into(),
            reports: Vec::new(),
        }
    }

    fn entry(&mut self, property: Property) -> &mut PropertyReport {
        if let Some(k) = self.reports.iter().position(|r| r.property == property) {
            &mut self.reports[k]
        } else {
            self.reports
                .push(PropertyReport::new(property, self.instance.clone()));
            self.reports.last_mut().unwrap()
        }
    }

    pub fn record(
        &mut self,
        property: Property,
        outcome: Option<Failure>,
        ctx: &WitnessContext<'_>,
    ) {
        let entry = self.entry(property);
        entry.checked += 1;
        if let Some(failure) = outcome {
            entry.failures += 1;
            if entry.witnesses.len() < MAX_WITNESSES {
                entry.witnesses.push(ctx.witness(failure));
            }
        }
    }

    /// Registers a property that may see zero instances.
    pub fn touch(&mut self, property: Property) {
        self.entry(property);
    }

    pub fn failures(&self, property: Property) -> u64 {
        self.reports
            .iter()
            .find(|r| r.property == property)
            .map_or(0, |r| r.failures)
    }

    pub fn into_reports(self) -> Vec<PropertyReport> {
        self.reports
    }
}

/// Merges per-game reports in game order.
pub(crate) fn merge(instance: &str, per_game: Vec<Vec<PropertyReport>>) -> Vec<PropertyReport> {
    let mut merged: Vec<PropertyReport> = Vec::new();
    for reports in per_game {
        for r in reports {
            match merged.iter_mut().find(|m| m.property == r.property) {
                Some(m) => m.absorb(r),
                None => {
                    let mut fresh = PropertyReport::new(r.property, instance);
                    fresh.absorb(r);
                    merged.push(fresh);
                }
            }
        }
    }
    merged.sort_by_key(|r| r.property);
    merged
}
