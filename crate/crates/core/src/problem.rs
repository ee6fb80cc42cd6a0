//! A composition problem: a list of disjoint models, the label conflict set,
//! and per-model dephasing offsets.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{LabelledEventStructure, ModelName};
use crate::scoring::LabelConflictSet;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("model `{0}` declared twice")]
    DuplicateModel(ModelName),
    #[error("offset names unknown model `{0}`")]
    UnknownModel(ModelName),
}

/// Models in declaration order, plus the external label conflicts and the
/// per-model start offsets (defaulting to 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionProblem {
    models: Vec<LabelledEventStructure>,
    gamma: LabelConflictSet,
    offsets: BTreeMap<ModelName, u64>,
}

impl CompositionProblem {
    pub fn new(
        models: Vec<LabelledEventStructure>,
        gamma: LabelConflictSet,
        offsets: BTreeMap<ModelName, u64>,
    ) -> Result<Self, ProblemError> {
        for (i, m) in models.iter().enumerate() {
            if models[..i].iter().any(|other| other.name() == m.name()) {
                return Err(ProblemError::DuplicateModel(m.name().clone()));
            }
        }
        for name in offsets.keys() {
            if !models.iter().any(|m| m.name() == name) {
                return Err(ProblemError::UnknownModel(name.clone()));
            }
        }
        Ok(CompositionProblem {
            models,
            gamma,
            offsets,
        })
    }

    pub fn models(&self) -> &[LabelledEventStructure] {
        &self.models
    }

    pub fn model(&self, name: &ModelName) -> Option<&LabelledEventStructure> {
        self.models.iter().find(|m| m.name() == name)
    }

    pub fn gamma(&self) -> &LabelConflictSet {
        &self.gamma
    }

    pub fn offsets(&self) -> &BTreeMap<ModelName, u64> {
        &self.offsets
    }

    /// Start offset of a model, 0 when not mentioned.
    pub fn offset(&self, name: &ModelName) -> u64 {
        self.offsets.get(name).copied().unwrap_or(0)
    }
}
