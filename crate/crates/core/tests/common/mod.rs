//! Seeded random generators for event structures and composition problems.
//!
//! Direct conflicts are only placed between causally unrelated events whose
//! reflexive descendant cones are disjoint; conflict propagation over a pair
//! with a shared descendant would derive a self-conflict and be rejected by
//! the constructor.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use les_compose::model::{EventAttributes, EventId, LabelledEventStructure, ModelName};
use les_compose::scoring::LabelConflictSet;
use les_compose::CompositionProblem;

pub const LABEL_POOL: [&str; 6] = ["l0", "l1", "l2", "l3", "l4", "l5"];

/// A random validated structure with up to `max_events` events.
pub fn random_les(rng: &mut ChaCha8Rng, name: &str, max_events: usize) -> LabelledEventStructure {
    let name = ModelName::new(name);
    let n = rng.gen_range(1..=max_events);
    let ids: Vec<EventId> = (0..n)
        .map(|i| EventId::new(name.clone(), format!("x{i}")))
        .collect();

    let mut edges = Vec::new();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.4) {
                edges.push((ids[i].clone(), ids[j].clone()));
                reach[i][j] = true;
            }
        }
    }
    // Warshall; edges only go from smaller to larger index, so this is a DAG.
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }

    let mut conflicts = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if reach[i][j] || reach[j][i] {
                continue;
            }
            let cones_disjoint = (0..n).all(|k| !(reach[i][k] && reach[j][k]));
            if cones_disjoint && rng.gen_bool(0.3) {
                conflicts.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }

    let events: Vec<(EventId, EventAttributes)> = ids
        .iter()
        .map(|id| {
            let mut attrs = EventAttributes::new(rng.gen_range(0..=9), rng.gen_range(0..=3));
            if rng.gen_bool(0.5) {
                let count = rng.gen_range(1..=2);
                let labels: Vec<&str> = (0..count)
                    .map(|_| LABEL_POOL[rng.gen_range(0..LABEL_POOL.len())])
                    .collect();
                attrs = attrs.with_labels(labels);
            }
            (id.clone(), attrs)
        })
        .collect();

    LabelledEventStructure::new(name, events, edges, conflicts)
        .expect("generated relations satisfy the axioms")
}

/// A random problem: up to 3 models of up to `max_events` events each, a
/// random label conflict set over the shared pool, and random offsets.
pub fn random_problem(rng: &mut ChaCha8Rng, max_events: usize) -> CompositionProblem {
    let k = rng.gen_range(1..=3);
    let models: Vec<LabelledEventStructure> = (0..k)
        .map(|m| random_les(rng, &format!("M{m}"), max_events))
        .collect();

    let mut gamma = LabelConflictSet::new();
    for (i, a) in LABEL_POOL.iter().enumerate() {
        for b in LABEL_POOL.iter().skip(i + 1) {
            if rng.gen_bool(0.2) {
                let weight = -rng.gen_range(1..=1000i64);
                gamma.insert(*a, *b, weight).expect("weight is negative");
            }
        }
    }

    let mut offsets = BTreeMap::new();
    for m in models.iter() {
        if rng.gen_bool(0.5) {
            offsets.insert(m.name().clone(), rng.gen_range(0..=5u64));
        }
    }

    CompositionProblem::new(models, gamma, offsets).expect("model names are distinct")
}
