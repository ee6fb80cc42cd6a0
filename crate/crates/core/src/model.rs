//! Labelled event structures and their derived relations.
//!
//! A structure is declared through its immediate causality edges and direct
//! conflict pairs only; the reflexive-transitive closure of causality, the
//! propagated conflict relation and the concurrency relation are always
//! computed here, never taken from the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Name of one behavioural model. Event ids are namespaced by it, which
/// realizes the pairwise-disjointness assumption on the event sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelName(String);

impl ModelName {
    pub fn new(name: impl Into<String>) -> Self {
        ModelName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Globally unique event identifier, rendered as `model.local`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId {
    model: ModelName,
    local: String,
}

impl EventId {
    pub fn new(model: ModelName, local: impl Into<String>) -> Self {
        EventId {
            model,
            local: local.into(),
        }
    }

    pub fn model(&self) -> &ModelName {
        &self.model
    }

    pub fn local(&self) -> &str {
        &self.local
    }

    /// Qualified form, `model.local`.
    pub fn qualified(&self) -> String {
        format!("{}.{}", self.model, self.local)
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.model, self.local)
    }
}

/// Unordered pair of events, stored with the smaller id first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventPair(EventId, EventId);

impl EventPair {
    pub fn new(a: EventId, b: EventId) -> Self {
        if a <= b {
            EventPair(a, b)
        } else {
            EventPair(b, a)
        }
    }

    pub fn first(&self) -> &EventId {
        &self.0
    }

    pub fn second(&self) -> &EventId {
        &self.1
    }

    pub fn contains(&self, e: &EventId) -> bool {
        &self.0 == e || &self.1 == e
    }

    /// The member that is not `e`, when `e` is one of the two.
    pub fn other(&self, e: &EventId) -> Option<&EventId> {
        if &self.0 == e {
            Some(&self.1)
        } else if &self.1 == e {
            Some(&self.0)
        } else {
            None
        }
    }

    pub fn is_self_pair(&self) -> bool {
        self.0 == self.1
    }
}

impl fmt::Display for EventPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// Ordered causality pairs.
pub type Relation = BTreeSet<(EventId, EventId)>;
/// Symmetric, irreflexive relations (conflict, concurrency).
pub type SymRelation = BTreeSet<EventPair>;

/// Per-event labelling: the label set mu, and nu = (priority, duration).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventAttributes {
    pub labels: BTreeSet<String>,
    pub priority: u64,
    pub duration: u64,
}

impl EventAttributes {
    pub fn new(priority: u64, duration: u64) -> Self {
        EventAttributes {
            labels: BTreeSet::new(),
            priority,
            duration,
        }
    }

    pub fn with_labels<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("causality cycle through {}", format_events(.0))]
    CycleDetected(Vec<EventId>),
    #[error("event `{0}` is in conflict with itself")]
    SelfConflict(EventId),
    #[error("event `{0}` declared twice")]
    DuplicateEvent(EventId),
}

fn format_events(events: &[EventId]) -> String {
    let ids: Vec<String> = events.iter().map(|e| e.qualified()).collect();
    ids.join(", ")
}

/// Relations derived from the declared ones: full causality (the closure),
/// propagated conflict, and concurrency. Every unordered pair of distinct
/// events falls in exactly one of causally-related, conflict, concurrency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRelations {
    pub causality: Relation,
    pub conflict: SymRelation,
    pub concurrency: SymRelation,
}

/// One behavioural model. Immutable once constructed; the constructor
/// validates endpoints, rejects cycles and self-conflicts, and computes the
/// derived relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledEventStructure {
    name: ModelName,
    events: BTreeSet<EventId>,
    immediate_causality: Relation,
    direct_conflicts: SymRelation,
    attributes: BTreeMap<EventId, EventAttributes>,
    derived: DerivedRelations,
}

impl LabelledEventStructure {
    pub fn new(
        name: ModelName,
        events: Vec<(EventId, EventAttributes)>,
        immediate_causality: Vec<(EventId, EventId)>,
        direct_conflicts: Vec<(EventId, EventId)>,
    ) -> Result<Self, ModelError> {
        let mut event_set = BTreeSet::new();
        let mut attributes = BTreeMap::new();
        for (e, attrs) in events {
            if !event_set.insert(e.clone()) {
                return Err(ModelError::DuplicateEvent(e));
            }
            attributes.insert(e, attrs);
        }

        let mut g = Relation::new();
        for (a, b) in immediate_causality {
            check_declared(&event_set, &a)?;
            check_declared(&event_set, &b)?;
            g.insert((a, b));
        }

        let mut direct = SymRelation::new();
        for (a, b) in direct_conflicts {
            check_declared(&event_set, &a)?;
            check_declared(&event_set, &b)?;
            if a == b {
                return Err(ModelError::SelfConflict(a));
            }
            direct.insert(EventPair::new(a, b));
        }

        let causality = close_causality(&g, &event_set)?;
        let conflict = propagate_conflicts(&direct, &causality)?;
        let concurrency = derive_concurrency(&causality, &conflict, &event_set);

        Ok(LabelledEventStructure {
            name,
            events: event_set,
            immediate_causality: g,
            direct_conflicts: direct,
            attributes,
            derived: DerivedRelations {
                causality,
                conflict,
                concurrency,
            },
        })
    }

    pub fn name(&self) -> &ModelName {
        &self.name
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn immediate_causality(&self) -> &Relation {
        &self.immediate_causality
    }

    pub fn direct_conflicts(&self) -> &SymRelation {
        &self.direct_conflicts
    }

    pub fn attributes(&self, e: &EventId) -> &EventAttributes {
        &self.attributes[e]
    }

    pub fn derived(&self) -> &DerivedRelations {
        &self.derived
    }

    /// Full causality, e' ->* e implies (e', e) is a member.
    pub fn causality(&self) -> &Relation {
        &self.derived.causality
    }

    /// Propagated conflict relation.
    pub fn conflict(&self) -> &SymRelation {
        &self.derived.conflict
    }

    pub fn concurrency(&self) -> &SymRelation {
        &self.derived.concurrency
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

    /// True iff a ->* b.
    pub fn causally_before(&self, a: &EventId, b: &EventId) -> bool {
        self.derived.causality.contains(&(a.clone(), b.clone()))
    }

    pub fn in_conflict(&self, a: &EventId, b: &EventId) -> bool {
        self.derived
            .conflict
            .contains(&EventPair::new(a.clone(), b.clone()))
    }

    /// The local configuration of `e`: every event e' with e' ->* e,
    /// including `e` itself.
    pub fn local_configuration(&self, e: &EventId) -> Result<BTreeSet<EventId>, ModelError> {
        check_declared(&self.events, e)?;
        Ok(self
            .derived
            .causality
            .iter()
            .filter(|(_, b)| b == e)
            .map(|(a, _)| a.clone())
            .collect())
    }

    /// All events e' with e' -> e in the immediate causality.
    pub fn immediate_predecessors(&self, e: &EventId) -> Result<BTreeSet<EventId>, ModelError> {
        check_declared(&self.events, e)?;
        Ok(self
            .immediate_causality
            .iter()
            .filter(|(_, b)| b == e)
            .map(|(a, _)| a.clone())
            .collect())
    }
}

fn check_declared(events: &BTreeSet<EventId>, e: &EventId) -> Result<(), ModelError> {
    if events.contains(e) {
        Ok(())
    } else {
        Err(ModelError::UnknownEvent(e.qualified()))
    }
}

/// Reflexive-transitive closure of the immediate causality `g`, restricted to
/// `events`. Fails when the closure would not be antisymmetric.
pub fn close_causality(g: &Relation, events: &BTreeSet<EventId>) -> Result<Relation, ModelError> {
    for (a, b) in g {
        check_declared(events, a)?;
        check_declared(events, b)?;
    }
    let index: BTreeMap<&EventId, usize> = events.iter().zip(0..).collect();
    let ids: Vec<&EventId> = events.iter().collect();
    let n = ids.len();

    let mut reach = vec![false; n * n];
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for (a, b) in g {
        reach[index[a] * n + index[b]] = true;
    }
    // Warshall
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }

    let cycle: Vec<EventId> = (0..n)
        .filter(|&i| (0..n).any(|j| i != j && reach[i * n + j] && reach[j * n + i]))
        .map(|i| ids[i].clone())
        .collect();
    if !cycle.is_empty() {
        return Err(ModelError::CycleDetected(cycle));
    }

    let mut closure = Relation::new();
    for i in 0..n {
        for j in 0..n {
            if reach[i * n + j] {
                closure.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    Ok(closure)
}

/// Smallest symmetric superset of `direct` closed under
/// e # e' and e' ->* e'' implies e # e''. Fails with `SelfConflict` when the
/// fixpoint derives a reflexive pair, which indicates an inconsistent input
/// (two conflicting events with a common causal successor).
pub fn propagate_conflicts(
    direct: &SymRelation,
    causality: &Relation,
) -> Result<SymRelation, ModelError> {
    let mut conflict = direct.clone();
    loop {
        let mut added = Vec::new();
        for pair in &conflict {
            for (e, succ) in [(pair.first(), pair.second()), (pair.second(), pair.first())] {
                // e # succ, propagate over every succ ->* s
                let _ = e;
                for (a, b) in causality {
                    if a == succ && b != succ {
                        let next = EventPair::new(e.clone(), b.clone());
                        if next.is_self_pair() {
                            return Err(ModelError::SelfConflict(e.clone()));
                        }
                        if !conflict.contains(&next) {
                            added.push(next);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return Ok(conflict);
        }
        conflict.extend(added);
    }
}

/// Pairs of distinct events neither causally related nor in conflict.
pub fn derive_concurrency(
    causality: &Relation,
    conflict: &SymRelation,
    events: &BTreeSet<EventId>,
) -> SymRelation {
    let mut co = SymRelation::new();
    for a in events {
        for b in events {
            if a < b {
                let related = causality.contains(&(a.clone(), b.clone()))
                    || causality.contains(&(b.clone(), a.clone()));
                let pair = EventPair::new(a.clone(), b.clone());
                if !related && !conflict.contains(&pair) {
                    co.insert(pair);
                }
            }
        }
    }
    co
}

/// Outcome of checking one event structure axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    /// The events witnessing the violation.
    Fail(Vec<EventId>),
}

impl AxiomStatus {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomStatus::Pass)
    }
}

impl fmt::Display for AxiomStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomStatus::Pass => f.write_str("pass"),
            AxiomStatus::Fail(w) => write!(f, "fail ({})", format_events(w)),
        }
    }
}

/// Axiom-by-axiom validation outcome for one pair of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub causality_reflexive: AxiomStatus,
    pub causality_transitive: AxiomStatus,
    pub causality_antisymmetric: AxiomStatus,
    pub conflict_symmetric: AxiomStatus,
    pub conflict_irreflexive: AxiomStatus,
    pub conflict_propagated: AxiomStatus,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.causality_reflexive.passed()
            && self.causality_transitive.passed()
            && self.causality_antisymmetric.passed()
            && self.conflict_symmetric.passed()
            && self.conflict_irreflexive.passed()
            && self.conflict_propagated.passed()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "causality reflexive:     {}", self.causality_reflexive)?;
        writeln!(f, "causality transitive:    {}", self.causality_transitive)?;
        writeln!(
            f,
            "causality antisymmetric: {}",
            self.causality_antisymmetric
        )?;
        writeln!(f, "conflict symmetric:      {}", self.conflict_symmetric)?;
        writeln!(f, "conflict irreflexive:    {}", self.conflict_irreflexive)?;
        writeln!(f, "conflict propagation:    {}", self.conflict_propagated)?;
        write!(
            f,
            "overall:                 {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Check the six event structure axioms on explicitly given relations.
///
/// `conflict` is interpreted as a set of ordered pairs when checking symmetry;
/// the symmetric [`SymRelation`] storage passes that check by construction,
/// so this variant takes ordered pairs to keep the symmetry check meaningful
/// for raw inputs.
pub fn validate_relations(
    events: &BTreeSet<EventId>,
    causality: &Relation,
    conflict: &Relation,
) -> ValidationReport {
    let reflexive = events
        .iter()
        .find(|e| !causality.contains(&((*e).clone(), (*e).clone())))
        .map(|e| AxiomStatus::Fail(vec![e.clone()]))
        .unwrap_or(AxiomStatus::Pass);

    let mut transitive = AxiomStatus::Pass;
    'trans: for (a, b) in causality {
        for (b2, c) in causality {
            if b == b2 && !causality.contains(&(a.clone(), c.clone())) {
                transitive = AxiomStatus::Fail(vec![a.clone(), b.clone(), c.clone()]);
                break 'trans;
            }
        }
    }

    let antisymmetric = causality
        .iter()
        .find(|(a, b)| a != b && causality.contains(&(b.clone(), a.clone())))
        .map(|(a, b)| AxiomStatus::Fail(vec![a.clone(), b.clone()]))
        .unwrap_or(AxiomStatus::Pass);

    let symmetric = conflict
        .iter()
        .find(|(a, b)| !conflict.contains(&(b.clone(), a.clone())))
        .map(|(a, b)| AxiomStatus::Fail(vec![a.clone(), b.clone()]))
        .unwrap_or(AxiomStatus::Pass);

    let irreflexive = conflict
        .iter()
        .find(|(a, b)| a == b)
        .map(|(a, _)| AxiomStatus::Fail(vec![a.clone()]))
        .unwrap_or(AxiomStatus::Pass);

    let mut propagated = AxiomStatus::Pass;
    'prop: for (a, b) in conflict {
        for (b2, c) in causality {
            if b == b2 && b != c && !conflict.contains(&(a.clone(), c.clone())) {
                propagated = AxiomStatus::Fail(vec![a.clone(), b.clone(), c.clone()]);
                break 'prop;
            }
        }
    }

    ValidationReport {
        causality_reflexive: reflexive,
        causality_transitive: transitive,
        causality_antisymmetric: antisymmetric,
        conflict_symmetric: symmetric,
        conflict_irreflexive: irreflexive,
        conflict_propagated: propagated,
    }
}

/// Validate the derived relations of a constructed structure. Pure; failures
/// are reported, never raised.
pub fn validate_les(les: &LabelledEventStructure) -> ValidationReport {
    let conflict_pairs = sym_to_ordered(&les.derived.conflict);
    validate_relations(&les.events, &les.derived.causality, &conflict_pairs)
}

/// Expand a symmetric relation into ordered pairs (both orientations).
pub fn sym_to_ordered(sym: &SymRelation) -> Relation {
    let mut out = Relation::new();
    for pair in sym {
        out.insert((pair.first().clone(), pair.second().clone()));
        out.insert((pair.second().clone(), pair.first().clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ids, model_a, model_b};

    fn ev(local: &str) -> EventId {
        EventId::new(ModelName::new("A"), local)
    }

    #[test]
    fn closure_of_model_a_edges() {
        let events: BTreeSet<EventId> = ["e0", "e1", "e2", "e3", "e4"]
            .iter()
            .map(|l| ev(l))
            .collect();
        let g: Relation = [("e0", "e1"), ("e1", "e2"), ("e1", "e3"), ("e2", "e4")]
            .iter()
            .map(|(a, b)| (ev(a), ev(b)))
            .collect();
        let closure = close_causality(&g, &events).unwrap();
        assert!(closure.contains(&(ev("e0"), ev("e4"))));
        assert!(closure.contains(&(ev("e1"), ev("e4"))));
        for e in &events {
            assert!(closure.contains(&(e.clone(), e.clone())));
        }
        assert!(!closure.contains(&(ev("e3"), ev("e4"))));
        // idempotent
        assert_eq!(close_causality(&closure, &events).unwrap(), closure);
    }

    #[test]
    fn closure_of_empty_relation_is_reflexive() {
        let events: BTreeSet<EventId> = [ev("a")].into_iter().collect();
        let closure = close_causality(&Relation::new(), &events).unwrap();
        assert_eq!(closure, [(ev("a"), ev("a"))].into_iter().collect());
    }

    #[test]
    fn two_cycle_is_rejected() {
        let events: BTreeSet<EventId> = [ev("a"), ev("b")].into_iter().collect();
        let g: Relation = [(ev("a"), ev("b")), (ev("b"), ev("a"))]
            .into_iter()
            .collect();
        match close_causality(&g, &events) {
            Err(ModelError::CycleDetected(cycle)) => {
                assert_eq!(cycle.len(), 2);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn closure_rejects_undeclared_endpoint() {
        let events: BTreeSet<EventId> = [ev("a")].into_iter().collect();
        let g: Relation = [(ev("a"), ev("zz"))].into_iter().collect();
        assert!(matches!(
            close_causality(&g, &events),
            Err(ModelError::UnknownEvent(_))
        ));
    }

    #[test]
    fn conflict_propagates_over_model_a_causality() {
        let a = model_a();
        // e2 # e3 propagates to e3 # e4 because e2 ->* e4
        assert!(a.in_conflict(&ev("e3"), &ev("e4")));
        assert!(a.in_conflict(&ev("e2"), &ev("e3")));
        assert_eq!(a.conflict().len(), 2);
    }

    #[test]
    fn empty_conflict_set_stays_empty() {
        let events: BTreeSet<EventId> = [ev("a"), ev("b")].into_iter().collect();
        let causality = close_causality(&Relation::new(), &events).unwrap();
        let out = propagate_conflicts(&SymRelation::new(), &causality).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn propagation_runs_along_chains() {
        // {a,b} with b ->* c and c ->* d must yield {a,c} and {a,d}.
        let events: BTreeSet<EventId> = ["a", "b", "c", "d"].iter().map(|l| ev(l)).collect();
        let g: Relation = [(ev("b"), ev("c")), (ev("c"), ev("d"))]
            .into_iter()
            .collect();
        let causality = close_causality(&g, &events).unwrap();
        let direct: SymRelation = [EventPair::new(ev("a"), ev("b"))].into_iter().collect();
        let out = propagate_conflicts(&direct, &causality).unwrap();
        assert!(out.contains(&EventPair::new(ev("a"), ev("c"))));
        assert!(out.contains(&EventPair::new(ev("a"), ev("d"))));
        // fixpoint: re-running changes nothing
        assert_eq!(propagate_conflicts(&out, &causality).unwrap(), out);
    }

    #[test]
    fn propagation_detects_derived_self_conflict() {
        // a # b with a common successor c derives c # c.
        let events: BTreeSet<EventId> = ["a", "b", "c"].iter().map(|l| ev(l)).collect();
        let g: Relation = [(ev("a"), ev("c")), (ev("b"), ev("c"))]
            .into_iter()
            .collect();
        let causality = close_causality(&g, &events).unwrap();
        let direct: SymRelation = [EventPair::new(ev("a"), ev("b"))].into_iter().collect();
        assert!(matches!(
            propagate_conflicts(&direct, &causality),
            Err(ModelError::SelfConflict(_))
        ));
    }

    #[test]
    fn model_b_has_one_concurrent_pair() {
        let b = model_b();
        let g = |l: &str| EventId::new(ModelName::new("B"), l);
        assert_eq!(
            b.concurrency(),
            &[EventPair::new(g("g2"), g("g3"))].into_iter().collect()
        );
    }

    #[test]
    fn chain_has_no_concurrency() {
        let les = LabelledEventStructure::new(
            ModelName::new("A"),
            ["a", "b", "c"]
                .iter()
                .map(|l| (ev(l), EventAttributes::new(1, 1)))
                .collect(),
            vec![(ev("a"), ev("b")), (ev("b"), ev("c"))],
            vec![],
        )
        .unwrap();
        assert!(les.concurrency().is_empty());
    }

    #[test]
    fn model_a_has_no_concurrency() {
        assert!(model_a().concurrency().is_empty());
    }

    #[test]
    fn validate_passes_on_derived_relations() {
        assert!(validate_les(&model_a()).passed());
        assert!(validate_les(&model_b()).passed());
    }

    #[test]
    fn validate_passes_on_empty_structure() {
        let les = LabelledEventStructure::new(ModelName::new("A"), vec![], vec![], vec![]).unwrap();
        assert!(validate_les(&les).passed());
    }

    #[test]
    fn missing_propagated_pair_fails_validation() {
        // Direct conflicts of model A without propagation: {e3,e4} is absent.
        let a = model_a();
        let raw_conflicts = sym_to_ordered(a.direct_conflicts());
        let report = validate_relations(a.events(), a.causality(), &raw_conflicts);
        match &report.conflict_propagated {
            AxiomStatus::Fail(witness) => {
                assert_eq!(witness, &vec![ev("e3"), ev("e2"), ev("e4")]);
            }
            AxiomStatus::Pass => panic!("propagation should fail on raw conflicts"),
        }
        assert!(!report.passed());
    }

    #[test]
    fn local_configuration_of_e4() {
        let a = model_a();
        assert_eq!(
            a.local_configuration(&ev("e4")).unwrap(),
            ids("A", &["e0", "e1", "e2", "e4"])
        );
        assert_eq!(a.local_configuration(&ev("e0")).unwrap(), ids("A", &["e0"]));
    }

    #[test]
    fn local_configuration_of_g4_is_everything() {
        let b = model_b();
        let g4 = EventId::new(ModelName::new("B"), "g4");
        assert_eq!(
            b.local_configuration(&g4).unwrap(),
            ids("B", &["g0", "g1", "g2", "g3", "g4"])
        );
    }

    #[test]
    fn immediate_predecessors_examples() {
        let a = model_a();
        let b = model_b();
        let g4 = EventId::new(ModelName::new("B"), "g4");
        assert_eq!(
            b.immediate_predecessors(&g4).unwrap(),
            ids("B", &["g2", "g3"])
        );
        assert_eq!(
            a.immediate_predecessors(&ev("e0")).unwrap(),
            BTreeSet::new()
        );
        assert_eq!(
            a.immediate_predecessors(&ev("e4")).unwrap(),
            ids("A", &["e2"])
        );
        assert!(a.immediate_predecessors(&ev("nope")).is_err());
    }

    #[test]
    fn relations_partition_distinct_pairs() {
        for les in [model_a(), model_b()] {
            let events: Vec<&EventId> = les.events().iter().collect();
            for (i, a) in events.iter().enumerate() {
                for b in events.iter().skip(i + 1) {
                    let related = les.causally_before(a, b) || les.causally_before(b, a);
                    let conf = les.in_conflict(a, b);
                    let co = les
                        .concurrency()
                        .contains(&EventPair::new((*a).clone(), (*b).clone()));
                    assert_eq!(
                        1,
                        related as u8 + conf as u8 + co as u8,
                        "pair {a}/{b} not in exactly one relation"
                    );
                }
            }
        }
    }
}
