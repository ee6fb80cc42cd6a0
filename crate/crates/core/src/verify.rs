//! Executable correctness checks for the maximality reformulation.
//!
//! For a concrete finite model, every configuration is enumerated and the
//! definitional trace check is compared with the ground reformulation used
//! by the solver backend. A deliberately broken variant of the
//! reformulation (quantifying over selected events as well) is kept as a
//! regression guard. The same equivalence can be handed to an external
//! solver: the emitted file asserts that the two formulations disagree for
//! some selection, so an `unsat` answer certifies equivalence.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::config;
use crate::model::{EventId, LabelledEventStructure};

/// Exhaustive enumeration bound.
pub const MAX_EVENTS_EXHAUSTIVE: usize = 16;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("model has {events} events, exhaustive check is limited to {MAX_EVENTS_EXHAUSTIVE}")]
    TooLarge { events: usize },
}

/// Outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Holds,
    /// The first configuration (in lexicographic order) on which the two
    /// formulations disagree.
    Counterexample(BTreeSet<EventId>),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Holds)
    }
}

/// The literal unguarded reformulation: quantifies over every event,
/// selected or not. Broken by construction (a selected conflict-free root
/// falsifies it); kept to show the guard on unselected events is necessary.
pub fn maximality_unguarded(les: &LabelledEventStructure, c: &BTreeSet<EventId>) -> bool {
    les.events().iter().all(|z| {
        let conflicts_selected = les
            .conflict()
            .iter()
            .any(|pair| pair.contains(z) && pair.other(z).map_or(false, |o| c.contains(o)));
        let missing_pred = les
            .immediate_predecessors(z)
            .expect("declared event")
            .iter()
            .any(|p| !c.contains(p));
        conflicts_selected || missing_pred
    })
}

fn check_against<F>(les: &LabelledEventStructure, smt_form: F) -> Result<Equivalence, VerifyError>
where
    F: Fn(&LabelledEventStructure, &BTreeSet<EventId>) -> bool,
{
    let n = les.len();
    if n > MAX_EVENTS_EXHAUSTIVE {
        return Err(VerifyError::TooLarge { events: n });
    }
    let events: Vec<EventId> = les.events().iter().cloned().collect();
    let mut counterexamples: BTreeSet<BTreeSet<EventId>> = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let c: BTreeSet<EventId> = events
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.clone())
            .collect();
        if !config::is_configuration(les, &c).expect("members are declared") {
            continue;
        }
        let definitional = config::is_trace(les, &c).expect("members are declared");
        if definitional != smt_form(les, &c) {
            counterexamples.insert(c);
        }
    }
    Ok(match counterexamples.into_iter().next() {
        None => Equivalence::Holds,
        Some(c) => Equivalence::Counterexample(c),
    })
}

/// Check, over every configuration of the model, that the definitional
/// trace property and the ground reformulation coincide.
pub fn check_maximality_equivalence(
    les: &LabelledEventStructure,
) -> Result<Equivalence, VerifyError> {
    check_against(les, |m, c| {
        config::is_maximal_conf_smt(m, c).expect("caller enumerates configurations only")
    })
}

/// Same exhaustive check against the unguarded variant; expected to fail on
/// any model with a conflict-free root.
pub fn check_broken_variant(les: &LabelledEventStructure) -> Result<Equivalence, VerifyError> {
    check_against(les, maximality_unguarded)
}

fn emit_equivalence(les: &LabelledEventStructure, broken: bool) -> String {
    let (sym, ordered) = crate::smt::event_symbols(std::slice::from_ref(les));
    let mut out = String::new();
    let mut push = |line: &str| {
        out.push_str(line);
        out.push('\n');
    };

    if ordered.is_empty() {
        push("(define-fun maximality () Bool true)");
        push("(define-fun maximalityDef () Bool true)");
        push("(assert (or (and maximality (not maximalityDef)) (and (not maximality) maximalityDef)))");
        push("(check-sat)");
        return out;
    }

    let constructors: Vec<String> = ordered.iter().map(|(s, _)| format!("({s})")).collect();
    push(&format!(
        "(declare-datatypes ((Event 0)) (({})))",
        constructors.join(" ")
    ));
    push("(declare-fun sel (Event) Bool)");

    let or_terms = |terms: &[String]| -> String {
        match terms.len() {
            0 => "false".to_string(),
            1 => terms[0].clone(),
            _ => format!("(or {})", terms.join(" ")),
        }
    };

    // configuration-hood of the free selection, the theorem's hypothesis
    let mut config_terms: Vec<String> = Vec::new();
    for pair in les.conflict() {
        config_terms.push(format!(
            "(not (and (sel {}) (sel {})))",
            sym[pair.first()],
            sym[pair.second()]
        ));
    }
    for (p, e) in les.causality() {
        if p != e {
            config_terms.push(format!("(=> (sel {}) (sel {}))", sym[e], sym[p]));
        }
    }
    let config_body = if config_terms.is_empty() {
        "true".to_string()
    } else {
        format!("(and {})", config_terms.join(" "))
    };
    push(&format!("(define-fun isConfig () Bool {config_body})"));

    // formulation used by the solver backend: immediate predecessors
    let mut max_terms: Vec<String> = Vec::new();
    for z in les.events() {
        let mut blocked: Vec<String> = Vec::new();
        for pair in les.conflict() {
            if let Some(y) = pair.other(z) {
                blocked.push(format!("(sel {})", sym[y]));
            }
        }
        for p in les.immediate_predecessors(z).expect("declared event") {
            blocked.push(format!("(not (sel {}))", sym[&p]));
        }
        let body = or_terms(&blocked);
        if broken {
            max_terms.push(body);
        } else {
            max_terms.push(format!("(=> (not (sel {})) {})", sym[z], body));
        }
    }
    push(&format!(
        "(define-fun maximality () Bool (and {}))",
        max_terms.join(" ")
    ));

    // definitional formulation: no single unselected event is addable,
    // with predecessors taken from the full causality
    let mut def_terms: Vec<String> = Vec::new();
    for z in les.events() {
        let mut blocked: Vec<String> = Vec::new();
        for pair in les.conflict() {
            if let Some(y) = pair.other(z) {
                blocked.push(format!("(sel {})", sym[y]));
            }
        }
        for (p, e) in les.causality() {
            if e == z && p != z {
                blocked.push(format!("(not (sel {}))", sym[p]));
            }
        }
        def_terms.push(format!(
            "(=> (not (sel {})) {})",
            sym[z],
            or_terms(&blocked)
        ));
    }
    push(&format!(
        "(define-fun maximalityDef () Bool (and {}))",
        def_terms.join(" ")
    ));

    push("(assert isConfig)");
    push("(assert (or (and maximality (not maximalityDef)) (and (not maximality) maximalityDef)))");
    push("(check-sat)");
    out
}

/// Emit a file asserting that the solver-backend maximality formulation and
/// the definitional one disagree for some configuration; `unsat` from an
/// external solver certifies their equivalence on this model.
pub fn emit_equivalence_smt(les: &LabelledEventStructure) -> String {
    emit_equivalence(les, false)
}

/// Same file with the unguarded (broken) formulation; expected satisfiable.
pub fn emit_equivalence_smt_broken(les: &LabelledEventStructure) -> String {
    emit_equivalence(les, true)
}
