//! Rank functions and clock assignment.
//!
//! A rank function totally orders one model's events consistently with
//! causality, with the selected events occupying the initial segment. Clocks
//! then follow by recurrence: the rank-1 event starts at the model's offset
//! and each selected event starts when its predecessor in rank order ends.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::config;
use crate::model::{EventId, LabelledEventStructure, ModelError, ModelName};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("selection is not a trace of model `{0}`")]
    NotATrace(ModelName),
    #[error("rank function is invalid for model `{0}`")]
    InvalidRank(ModelName),
}

/// Injective, order-preserving map from a model's events onto `1..=n`,
/// ranking selected events strictly before unselected ones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankFunction {
    model: ModelName,
    rank: BTreeMap<EventId, u32>,
}

impl RankFunction {
    pub fn new(model: ModelName, rank: BTreeMap<EventId, u32>) -> Self {
        RankFunction { model, rank }
    }

    pub fn model(&self) -> &ModelName {
        &self.model
    }

    pub fn rank(&self, e: &EventId) -> Option<u32> {
        self.rank.get(e).copied()
    }

    pub fn ranks(&self) -> &BTreeMap<EventId, u32> {
        &self.rank
    }

    /// Events sorted by ascending rank.
    pub fn ordered_events(&self) -> Vec<EventId> {
        let mut by_rank: Vec<(&u32, &EventId)> = self.rank.iter().map(|(e, r)| (r, e)).collect();
        by_rank.sort();
        by_rank.into_iter().map(|(_, e)| e.clone()).collect()
    }
}

/// Start times for selected events plus the per-model offsets they derive
/// from. Unselected events carry no clock.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClockAssignment {
    pub clock: BTreeMap<EventId, u64>,
    pub offsets: BTreeMap<ModelName, u64>,
}

impl ClockAssignment {
    pub fn clock(&self, e: &EventId) -> Option<u64> {
        self.clock.get(e).copied()
    }
}

/// Check the five rank constraints: order preservation over full causality,
/// injectivity, bounds `1..=n`, and selected-before-unselected.
pub fn validate_rank(
    rank: &RankFunction,
    selection: &BTreeSet<EventId>,
    les: &LabelledEventStructure,
) -> Result<bool, ModelError> {
    for e in rank.ranks().keys().chain(selection.iter()) {
        if !les.contains(e) {
            return Err(ModelError::UnknownEvent(e.qualified()));
        }
    }
    if les.events().iter().any(|e| rank.rank(e).is_none()) {
        return Ok(false);
    }
    let n = les.len() as u32;
    let r = |e: &EventId| rank.rank(e).unwrap();

    let order_preserving = les.causality().iter().all(|(j, k)| r(j) <= r(k));
    let injective = {
        let image: BTreeSet<u32> = les.events().iter().map(r).collect();
        image.len() == les.len()
    };
    let in_bounds = les.events().iter().all(|e| r(e) >= 1 && r(e) <= n);
    let selected_first = les.events().iter().all(|j| {
        les.events()
            .iter()
            .all(|k| !(selection.contains(j) && !selection.contains(k)) || r(j) < r(k))
    });
    Ok(order_preserving && injective && in_bounds && selected_first)
}

/// All rank functions over the model that satisfy [`validate_rank`] for the
/// given trace. The selected events range over every linear extension of
/// causality; the unselected events are appended in a fixed topological order
/// with lexicographic tie-break. Output order is deterministic
/// (lexicographic by the rank-ordered selected sequence).
pub fn linear_extensions(
    les: &LabelledEventStructure,
    selection: &BTreeSet<EventId>,
) -> Result<Vec<RankFunction>, ScheduleError> {
    if !config::is_trace(les, selection)? {
        return Err(ScheduleError::NotATrace(les.name().clone()));
    }

    let mut orders = Vec::new();
    let mut prefix = Vec::new();
    extend_order(les, selection, &mut prefix, &mut orders);

    let unselected: Vec<EventId> = topo_order(
        les,
        &les.events()
            .iter()
            .filter(|e| !selection.contains(*e))
            .cloned()
            .collect::<BTreeSet<_>>(),
    );

    Ok(orders
        .into_iter()
        .map(|order| {
            let mut rank = BTreeMap::new();
            for (i, e) in order.iter().chain(unselected.iter()).enumerate() {
                rank.insert(e.clone(), (i + 1) as u32);
            }
            RankFunction::new(les.name().clone(), rank)
        })
        .collect())
}

fn extend_order(
    les: &LabelledEventStructure,
    selection: &BTreeSet<EventId>,
    prefix: &mut Vec<EventId>,
    out: &mut Vec<Vec<EventId>>,
) {
    if prefix.len() == selection.len() {
        out.push(prefix.clone());
        return;
    }
    // Minimal elements in lexicographic order keeps the output deterministic.
    for e in selection {
        if prefix.contains(e) {
            continue;
        }
        let ready = les
            .causality()
            .iter()
            .all(|(p, k)| k != e || p == e || !selection.contains(p) || prefix.contains(p));
        if ready {
            prefix.push(e.clone());
            extend_order(les, selection, prefix, out);
            prefix.pop();
        }
    }
}

/// Topological order of `subset` under the model's causality, choosing the
/// lexicographically smallest available event at each step.
fn topo_order(les: &LabelledEventStructure, subset: &BTreeSet<EventId>) -> Vec<EventId> {
    let mut placed: BTreeSet<EventId> = BTreeSet::new();
    let mut order = Vec::new();
    while placed.len() < subset.len() {
        let next = subset
            .iter()
            .find(|e| {
                !placed.contains(*e)
                    && les.causality().iter().all(|(p, k)| {
                        &k != e || p == *e || !subset.contains(p) || placed.contains(p)
                    })
            })
            .expect("causality restricted to a finite subset always has a minimal element")
            .clone();
        placed.insert(next.clone());
        order.push(next);
    }
    order
}

/// Assign start clocks along the rank order: the rank-1 event starts at
/// `offset`, and each later selected event starts when the previous one ends.
pub fn assign_clocks(
    les: &LabelledEventStructure,
    rank: &RankFunction,
    selection: &BTreeSet<EventId>,
    offset: u64,
) -> Result<BTreeMap<EventId, u64>, ScheduleError> {
    if !validate_rank(rank, selection, les)? {
        return Err(ScheduleError::InvalidRank(les.name().clone()));
    }
    let mut clocks = BTreeMap::new();
    let mut t = offset;
    for e in rank.ordered_events() {
        if !selection.contains(&e) {
            break; // selected events occupy the initial rank segment
        }
        clocks.insert(e.clone(), t);
        t += les.attributes(&e).duration;
    }
    Ok(clocks)
}
