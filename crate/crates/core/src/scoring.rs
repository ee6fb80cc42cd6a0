//! The objective: per-event priority scores and cross-model conflict
//! penalties gated by temporal overlap.
//!
//! A penalty fires when a selected event starts within the half-open active
//! span `[start, start + duration)` of a selected, label-conflicting event
//! from another model. All arithmetic is exact integer arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{EventId, LabelledEventStructure};

/// Default penalty per conflicting label pair; dominates any priority at
/// desk scale.
pub const DEFAULT_GAMMA_WEIGHT: i64 = -1000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ScoreError {
    #[error("gamma weight for ({0}, {1}) must be strictly negative, got {2}")]
    NonNegativeWeight(String, String, i64),
    #[error("events `{0}` and `{1}` belong to the same model")]
    SameModel(EventId, EventId),
    #[error("schedule references unknown event `{0}`")]
    InvalidSchedule(String),
}

/// Unordered pair of label tokens, stored with the smaller token first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabelPair(String, String);

impl LabelPair {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            LabelPair(a, b)
        } else {
            LabelPair(b, a)
        }
    }
}

impl fmt::Display for LabelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// The label conflict set: unordered label pairs with strictly negative
/// weights. Querying is direction-free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelConflictSet {
    weights: BTreeMap<LabelPair, i64>,
}

impl LabelConflictSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        a: impl Into<String>,
        b: impl Into<String>,
        weight: i64,
    ) -> Result<(), ScoreError> {
        let (a, b) = (a.into(), b.into());
        if weight >= 0 {
            return Err(ScoreError::NonNegativeWeight(a, b, weight));
        }
        self.weights.insert(LabelPair::new(a, b), weight);
        Ok(())
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<i64> {
        self.weights.get(&LabelPair::new(a, b)).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&LabelPair, i64)> {
        self.weights.iter().map(|(p, w)| (p, *w))
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Overlap-gated penalty: `z` when the second event starts within the
/// half-open span `[x1, x1 + y)` of the first, `0` otherwise.
pub fn overlap_penalty(x1: u64, x2: u64, y: u64, z: i64) -> i64 {
    if x2 >= x1 && x2 - x1 < y {
        z
    } else {
        0
    }
}

/// Summed weight over all conflicting label pairs across the two label sets;
/// `0` when none match.
pub fn label_conflict_weight(
    labels1: &BTreeSet<String>,
    labels2: &BTreeSet<String>,
    gamma: &LabelConflictSet,
) -> i64 {
    labels1
        .iter()
        .flat_map(|a| labels2.iter().filter_map(|b| gamma.weight(a, b)))
        .sum()
}

/// Penalty contributed by the ordered cross-model pair `(j, k)`: the overlap
/// penalty of `k` starting inside `j`'s span, when both are selected, else 0.
pub fn pair_score(
    j: &EventId,
    k: &EventId,
    j_les: &LabelledEventStructure,
    k_les: &LabelledEventStructure,
    selection: &BTreeSet<EventId>,
    clocks: &BTreeMap<EventId, u64>,
    gamma: &LabelConflictSet,
) -> Result<i64, ScoreError> {
    if j.model() == k.model() {
        return Err(ScoreError::SameModel(j.clone(), k.clone()));
    }
    if !(selection.contains(j) && selection.contains(k)) {
        return Ok(0);
    }
    let j_attrs = j_les.attributes(j);
    let k_attrs = k_les.attributes(k);
    let weight = label_conflict_weight(&j_attrs.labels, &k_attrs.labels, gamma);
    if weight == 0 {
        return Ok(0);
    }
    let (cj, ck) = match (clocks.get(j), clocks.get(k)) {
        (Some(cj), Some(ck)) => (*cj, *ck),
        _ => {
            return Err(ScoreError::InvalidSchedule(format!(
                "no clock for {j} or {k}"
            )))
        }
    };
    Ok(overlap_penalty(cj, ck, j_attrs.duration, weight))
}

/// Priority of `j` when selected, 0 otherwise.
pub fn event_score(
    j: &EventId,
    les: &LabelledEventStructure,
    selection: &BTreeSet<EventId>,
) -> i64 {
    if selection.contains(j) {
        les.attributes(j).priority as i64
    } else {
        0
    }
}

/// Itemized objective value: selected-event scores, nonzero pair penalties,
/// and their total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObjectiveBreakdown {
    /// Scores of selected events (unselected events contribute 0 and are
    /// omitted).
    pub event_scores: BTreeMap<EventId, i64>,
    /// Nonzero penalties by ordered cross-model pair.
    pub pair_scores: BTreeMap<(EventId, EventId), i64>,
    pub total: i64,
}

impl ObjectiveBreakdown {
    pub fn from_parts(
        event_scores: BTreeMap<EventId, i64>,
        pair_scores: BTreeMap<(EventId, EventId), i64>,
    ) -> Self {
        let total = event_scores.values().sum::<i64>() + pair_scores.values().sum::<i64>();
        ObjectiveBreakdown {
            event_scores,
            pair_scores,
            total,
        }
    }
}

/// Evaluate the objective of a concrete selection and clock assignment over
/// the given models: the sum of selected-event priorities plus all ordered
/// cross-model pair penalties.
pub fn objective(
    models: &[LabelledEventStructure],
    gamma: &LabelConflictSet,
    selection: &BTreeSet<EventId>,
    clocks: &BTreeMap<EventId, u64>,
) -> Result<ObjectiveBreakdown, ScoreError> {
    for e in selection {
        if !models.iter().any(|m| m.contains(e)) {
            return Err(ScoreError::InvalidSchedule(e.qualified()));
        }
    }

    let mut event_scores = BTreeMap::new();
    for les in models {
        for e in les.events() {
            if selection.contains(e) {
                event_scores.insert(e.clone(), event_score(e, les, selection));
            }
        }
    }

    let mut pair_scores = BTreeMap::new();
    for (i, j_les) in models.iter().enumerate() {
        for (l, k_les) in models.iter().enumerate() {
            if i == l {
                continue;
            }
            for j in j_les.events() {
                for k in k_les.events() {
                    let s = pair_score(j, k, j_les, k_les, selection, clocks, gamma)?;
                    if s != 0 {
                        pair_scores.insert((j.clone(), k.clone()), s);
                    }
                }
            }
        }
    }

    Ok(ObjectiveBreakdown::from_parts(event_scores, pair_scores))
}
