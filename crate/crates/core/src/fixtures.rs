//! Shared test fixtures: the three running-example models A, B and C.

use std::collections::BTreeSet;

use crate::model::{EventAttributes, EventId, LabelledEventStructure, ModelName};
use crate::problem::CompositionProblem;
use crate::scoring::LabelConflictSet;

pub fn ids(model: &str, locals: &[&str]) -> BTreeSet<EventId> {
    locals
        .iter()
        .map(|l| EventId::new(ModelName::new(model), *l))
        .collect()
}

fn ev(model: &str, local: &str) -> EventId {
    EventId::new(ModelName::new(model), local)
}

/// Model A: e0 -> e1, e1 -> e2, e1 -> e3, e2 -> e4, with e2 # e3.
pub fn model_a() -> LabelledEventStructure {
    let e = |l: &str| ev("A", l);
    LabelledEventStructure::new(
        ModelName::new("A"),
        vec![
            (e("e0"), EventAttributes::new(1, 1)),
            (e("e1"), EventAttributes::new(1, 1)),
            (
                e("e2"),
                EventAttributes::new(5, 3).with_labels(["pro1", "ma1"]),
            ),
            (
                e("e3"),
                EventAttributes::new(1, 3).with_labels(["pro2", "ma3"]),
            ),
            (e("e4"), EventAttributes::new(5, 2).with_labels(["ma2"])),
        ],
        vec![
            (e("e0"), e("e1")),
            (e("e1"), e("e2")),
            (e("e1"), e("e3")),
            (e("e2"), e("e4")),
        ],
        vec![(e("e2"), e("e3"))],
    )
    .unwrap()
}

/// Model B: g0 -> g1, g1 -> g2, g1 -> g3, g2 -> g4, g3 -> g4, conflict-free.
pub fn model_b() -> LabelledEventStructure {
    let g = |l: &str| ev("B", l);
    LabelledEventStructure::new(
        ModelName::new("B"),
        vec![
            (g("g0"), EventAttributes::new(1, 1)),
            (g("g1"), EventAttributes::new(1, 1)),
            (g("g2"), EventAttributes::new(1, 2).with_labels(["mb1"])),
            (g("g3"), EventAttributes::new(1, 1).with_labels(["mb2"])),
            (g("g4"), EventAttributes::new(1, 4)),
        ],
        vec![
            (g("g0"), g("g1")),
            (g("g1"), g("g2")),
            (g("g1"), g("g3")),
            (g("g2"), g("g4")),
            (g("g3"), g("g4")),
        ],
        vec![],
    )
    .unwrap()
}

/// Model C: f0 -> f1, f1 -> f2, f1 -> f3, with f2 # f3.
pub fn model_c() -> LabelledEventStructure {
    let f = |l: &str| ev("C", l);
    LabelledEventStructure::new(
        ModelName::new("C"),
        vec![
            (f("f0"), EventAttributes::new(1, 1)),
            (f("f1"), EventAttributes::new(1, 1)),
            (
                f("f2"),
                EventAttributes::new(3, 3).with_labels(["x>9", "mc1"]),
            ),
            (
                f("f3"),
                EventAttributes::new(1, 2).with_labels(["x>20", "mc3"]),
            ),
        ],
        vec![(f("f0"), f("f1")), (f("f1"), f("f2")), (f("f1"), f("f3"))],
        vec![(f("f2"), f("f3"))],
    )
    .unwrap()
}

/// The label conflicts of the running example: {ma1, mc1} and {ma2, mb2}.
pub fn example_gamma() -> LabelConflictSet {
    let mut gamma = LabelConflictSet::new();
    gamma.insert("ma1", "mc1", -1000).unwrap();
    gamma.insert("ma2", "mb2", -1000).unwrap();
    gamma
}

/// The base composition problem: models A, B, C, all offsets zero.
pub fn base_problem() -> CompositionProblem {
    CompositionProblem::new(
        vec![model_a(), model_b(), model_c()],
        example_gamma(),
        Default::default(),
    )
    .unwrap()
}

/// The dephased problem: model C starts at 4, model B at 1.
pub fn dephased_problem() -> CompositionProblem {
    CompositionProblem::new(
        vec![model_a(), model_b(), model_c()],
        example_gamma(),
        [(ModelName::new("C"), 4), (ModelName::new("B"), 1)]
            .into_iter()
            .collect(),
    )
    .unwrap()
}
