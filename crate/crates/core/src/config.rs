//! Configurations and traces.
//!
//! A configuration is a conflict-free, downward-closed subset of one model's
//! events; a trace is a maximal configuration. Maximality is decided both by
//! the textbook definition (no strict superset is a configuration) and by the
//! ground reformulation used in the solver backend: every unselected event is
//! either in conflict with a selected one or missing an immediate
//! predecessor. The two are proved equivalent for finite structures by the
//! checks in [`crate::verify`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{EventId, LabelledEventStructure, ModelError, ModelName};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("event set is not a configuration of model `{0}`")]
    NotAConfiguration(ModelName),
}

/// A checked configuration of one model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Configuration {
    events: BTreeSet<EventId>,
}

impl Configuration {
    pub fn new(
        les: &LabelledEventStructure,
        events: BTreeSet<EventId>,
    ) -> Result<Self, ConfigError> {
        if !is_configuration(les, &events)? {
            return Err(ConfigError::NotAConfiguration(les.name().clone()));
        }
        Ok(Configuration { events })
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }
}

/// A maximal configuration of one model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trace {
    model: ModelName,
    events: BTreeSet<EventId>,
}

impl Trace {
    pub fn new(
        les: &LabelledEventStructure,
        events: BTreeSet<EventId>,
    ) -> Result<Self, ConfigError> {
        if !is_trace(les, &events)? {
            return Err(ConfigError::NotAConfiguration(les.name().clone()));
        }
        Ok(Trace {
            model: les.name().clone(),
            events,
        })
    }

    pub fn model(&self) -> &ModelName {
        &self.model
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn contains(&self, e: &EventId) -> bool {
        self.events.contains(e)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

fn check_members(les: &LabelledEventStructure, c: &BTreeSet<EventId>) -> Result<(), ModelError> {
    for e in c {
        if !les.contains(e) {
            return Err(ModelError::UnknownEvent(e.qualified()));
        }
    }
    Ok(())
}

/// True iff no two members of `c` are in conflict.
pub fn is_conflict_free(
    les: &LabelledEventStructure,
    c: &BTreeSet<EventId>,
) -> Result<bool, ModelError> {
    check_members(les, c)?;
    Ok(les
        .conflict()
        .iter()
        .all(|pair| !(c.contains(pair.first()) && c.contains(pair.second()))))
}

/// True iff every causal predecessor of a member is a member.
pub fn is_downward_closed(
    les: &LabelledEventStructure,
    c: &BTreeSet<EventId>,
) -> Result<bool, ModelError> {
    check_members(les, c)?;
    Ok(les
        .causality()
        .iter()
        .all(|(pred, e)| !c.contains(e) || c.contains(pred)))
}

pub fn is_configuration(
    les: &LabelledEventStructure,
    c: &BTreeSet<EventId>,
) -> Result<bool, ModelError> {
    Ok(is_conflict_free(les, c)? && is_downward_closed(les, c)?)
}

/// True iff `z` can be added to the configuration `c`: all immediate
/// predecessors present, no conflict with a member.
fn addable(les: &LabelledEventStructure, c: &BTreeSet<EventId>, z: &EventId) -> bool {
    if c.contains(z) {
        return false;
    }
    let preds_present = les
        .immediate_causality()
        .iter()
        .all(|(p, e)| e != z || c.contains(p));
    let conflict_free = les
        .conflict()
        .iter()
        .all(|pair| !(pair.contains(z) && pair.other(z).map_or(false, |o| c.contains(o))));
    preds_present && conflict_free
}

/// True iff `c` is a configuration and no strict superset is one.
///
/// Checking single-event extensions suffices: a strictly larger configuration
/// always contains an event addable to `c`, because configurations are closed
/// under removing maximal elements.
pub fn is_trace(les: &LabelledEventStructure, c: &BTreeSet<EventId>) -> Result<bool, ModelError> {
    if !is_configuration(les, c)? {
        return Ok(false);
    }
    Ok(les.events().iter().all(|z| !addable(les, c, z)))
}

/// Ground maximality check mirroring the solver encoding: for every event `z`
/// outside the configuration, either some member conflicts with `z` or some
/// immediate predecessor of `z` is missing.
///
/// The caller must supply a configuration; this mirrors the hypothesis under
/// which the reformulation is equivalent to [`is_trace`].
pub fn is_maximal_conf_smt(
    les: &LabelledEventStructure,
    c: &BTreeSet<EventId>,
) -> Result<bool, ConfigError> {
    if !is_configuration(les, c)? {
        return Err(ConfigError::NotAConfiguration(les.name().clone()));
    }
    Ok(les.events().iter().filter(|z| !c.contains(z)).all(|z| {
        let conflicts_selected = les
            .conflict()
            .iter()
            .any(|pair| pair.contains(z) && pair.other(z).map_or(false, |o| c.contains(o)));
        let missing_pred = les
            .immediate_causality()
            .iter()
            .any(|(p, e)| e == z && !c.contains(p));
        conflicts_selected || missing_pred
    }))
}

/// All traces of the model, ordered lexicographically by their sorted
/// qualified-id sequence.
pub fn enumerate_traces(les: &LabelledEventStructure) -> Vec<Trace> {
    let mut found: BTreeSet<BTreeSet<EventId>> = BTreeSet::new();
    let mut current = BTreeSet::new();
    let mut banned = BTreeSet::new();
    extend_traces(les, &mut current, &mut banned, &mut found);
    found
        .into_iter()
        .map(|events| Trace {
            model: les.name().clone(),
            events,
        })
        .collect()
}

fn extend_traces(
    les: &LabelledEventStructure,
    current: &mut BTreeSet<EventId>,
    banned: &mut BTreeSet<EventId>,
    found: &mut BTreeSet<BTreeSet<EventId>>,
) {
    let next = les
        .events()
        .iter()
        .find(|z| !banned.contains(*z) && addable(les, current, z))
        .cloned();
    match next {
        Some(e) => {
            current.insert(e.clone());
            extend_traces(les, current, banned, found);
            current.remove(&e);

            banned.insert(e.clone());
            extend_traces(les, current, banned, found);
            banned.remove(&e);
        }
        None => {
            // Leaf: maximal unless some banned event is still addable.
            if les.events().iter().all(|z| !addable(les, current, z)) {
                found.insert(current.clone());
            }
        }
    }
}
