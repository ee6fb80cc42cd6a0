//! Objective-maximizing search: a brute-force oracle over all per-model
//! trace/extension combinations and a branch-and-bound optimizer that prunes
//! with an admissible bound (remaining priorities, zero future penalties).
//!
//! Both share one deterministic tie-break among objective-equal schedules:
//! models are compared in declaration order by the rank-ordered sequence of
//! selected qualified ids, smallest first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::config::{self, Trace};
use crate::model::{EventId, LabelledEventStructure, ModelName};
use crate::problem::CompositionProblem;
use crate::schedule::{self, ClockAssignment, RankFunction};
use crate::scoring::{self, label_conflict_weight, overlap_penalty, ObjectiveBreakdown};

/// Enumeration guard for the oracle.
pub const ORACLE_CANDIDATE_LIMIT: u128 = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("problem too large for exhaustive search: {candidates} candidate schedules (limit {ORACLE_CANDIDATE_LIMIT})")]
    TooLarge { candidates: u128 },
    #[error("schedule failed revalidation: {0}")]
    InvalidSchedule(String),
}

/// A complete solution: per-model trace, rank function and clocks, plus the
/// itemized objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledTrace {
    pub selection: BTreeMap<ModelName, Trace>,
    pub ranks: BTreeMap<ModelName, RankFunction>,
    pub clocks: ClockAssignment,
    pub breakdown: ObjectiveBreakdown,
}

impl ScheduledTrace {
    /// Union of all selected events across models.
    pub fn selected_events(&self) -> BTreeSet<EventId> {
        self.selection
            .values()
            .flat_map(|t| t.events().iter().cloned())
            .collect()
    }

    /// Recheck every invariant from scratch: trace-hood, rank validity, the
    /// clock recurrence and offsets, and the objective total.
    pub fn revalidate(&self, problem: &CompositionProblem) -> Result<(), SolveError> {
        let invalid = |msg: String| SolveError::InvalidSchedule(msg);
        for les in problem.models() {
            let trace = self
                .selection
                .get(les.name())
                .ok_or_else(|| invalid(format!("no trace for model {}", les.name())))?;
            if !config::is_trace(les, trace.events()).map_err(|e| invalid(e.to_string()))? {
                return Err(invalid(format!(
                    "selection for {} is not a trace",
                    les.name()
                )));
            }
            let rank = self
                .ranks
                .get(les.name())
                .ok_or_else(|| invalid(format!("no rank for model {}", les.name())))?;
            if !schedule::validate_rank(rank, trace.events(), les)
                .map_err(|e| invalid(e.to_string()))?
            {
                return Err(invalid(format!("rank for {} is invalid", les.name())));
            }
            let expected =
                schedule::assign_clocks(les, rank, trace.events(), problem.offset(les.name()))
                    .map_err(|e| invalid(e.to_string()))?;
            for (e, t) in &expected {
                if self.clocks.clock(e) != Some(*t) {
                    return Err(invalid(format!("clock of {e} should be {t}")));
                }
            }
        }
        let fresh = scoring::objective(
            problem.models(),
            problem.gamma(),
            &self.selected_events(),
            &self.clocks.clock,
        )
        .map_err(|e| invalid(e.to_string()))?;
        if fresh.total != self.breakdown.total {
            return Err(invalid(format!(
                "objective total {} does not match recomputation {}",
                self.breakdown.total, fresh.total
            )));
        }
        Ok(())
    }
}

/// One fully scheduled choice for a single model: a trace, one linear
/// extension and the resulting clocks.
#[derive(Clone, Debug)]
struct Candidate {
    trace: Trace,
    rank: RankFunction,
    clocks: BTreeMap<EventId, u64>,
    priority_sum: i64,
    /// Rank-ordered selected event ids; the per-model tie-break key.
    key: Vec<EventId>,
}

fn build_candidates(les: &LabelledEventStructure, offset: u64) -> Vec<Candidate> {
    let mut out = Vec::new();
    for trace in config::enumerate_traces(les) {
        let extensions = schedule::linear_extensions(les, trace.events())
            .expect("enumerated traces admit extensions");
        for rank in extensions {
            let clocks = schedule::assign_clocks(les, &rank, trace.events(), offset)
                .expect("extension ranks are valid");
            let key: Vec<EventId> = rank
                .ordered_events()
                .into_iter()
                .filter(|e| trace.contains(e))
                .collect();
            let priority_sum = trace
                .events()
                .iter()
                .map(|e| les.attributes(e).priority as i64)
                .sum();
            out.push(Candidate {
                trace: trace.clone(),
                rank,
                clocks,
                priority_sum,
                key,
            });
        }
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// Ordered cross-model event pair with a nonzero label conflict weight.
struct PenaltyPair {
    j_model: usize,
    k_model: usize,
    j: EventId,
    k: EventId,
    j_duration: u64,
    weight: i64,
}

fn penalty_pairs(problem: &CompositionProblem) -> Vec<PenaltyPair> {
    let models = problem.models();
    let mut out = Vec::new();
    for (i, j_les) in models.iter().enumerate() {
        for (l, k_les) in models.iter().enumerate() {
            if i == l {
                continue;
            }
            for j in j_les.events() {
                for k in k_les.events() {
                    let weight = label_conflict_weight(
                        &j_les.attributes(j).labels,
                        &k_les.attributes(k).labels,
                        problem.gamma(),
                    );
                    if weight != 0 {
                        out.push(PenaltyPair {
                            j_model: i,
                            k_model: l,
                            j: j.clone(),
                            k: k.clone(),
                            j_duration: j_les.attributes(j).duration,
                            weight,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Penalty contributions between two decided models.
fn penalties_between(pairs: &[PenaltyPair], a: usize, b: usize, choice: &[&Candidate]) -> i64 {
    pairs
        .iter()
        .filter(|p| (p.j_model == a && p.k_model == b) || (p.j_model == b && p.k_model == a))
        .map(|p| {
            let (cj, ck) = (
                choice[p.j_model].clocks.get(&p.j),
                choice[p.k_model].clocks.get(&p.k),
            );
            match (cj, ck) {
                // clocks exist exactly for selected events
                (Some(cj), Some(ck)) => overlap_penalty(*cj, *ck, p.j_duration, p.weight),
                _ => 0,
            }
        })
        .sum()
}

fn assemble(problem: &CompositionProblem, choice: &[&Candidate]) -> ScheduledTrace {
    let mut selection = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    let mut clocks = ClockAssignment::default();
    for (les, cand) in problem.models().iter().zip(choice) {
        selection.insert(les.name().clone(), cand.trace.clone());
        ranks.insert(les.name().clone(), cand.rank.clone());
        clocks.clock.extend(cand.clocks.clone());
        clocks
            .offsets
            .insert(les.name().clone(), problem.offset(les.name()));
    }
    let selected: BTreeSet<EventId> = selection
        .values()
        .flat_map(|t| t.events().iter().cloned())
        .collect();
    let breakdown = scoring::objective(problem.models(), problem.gamma(), &selected, &clocks.clock)
        .expect("assembled schedules are internally consistent");
    ScheduledTrace {
        selection,
        ranks,
        clocks,
        breakdown,
    }
}

/// Exhaustive search over every per-model trace and linear extension.
/// Independent of the branch-and-bound path; guarded by
/// [`ORACLE_CANDIDATE_LIMIT`].
pub fn solve_oracle(problem: &CompositionProblem) -> Result<ScheduledTrace, SolveError> {
    let candidates: Vec<Vec<Candidate>> = problem
        .models()
        .iter()
        .map(|les| build_candidates(les, problem.offset(les.name())))
        .collect();

    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > ORACLE_CANDIDATE_LIMIT {
        return Err(SolveError::TooLarge { candidates: total });
    }

    let pairs = penalty_pairs(problem);
    let n = candidates.len();
    let mut best: Option<(i64, Vec<usize>)> = None;

    // Odometer over candidate indices; iteration order realizes the
    // tie-break, so only strict improvements replace the incumbent.
    let mut idx = vec![0usize; n];
    loop {
        let choice: Vec<&Candidate> = idx
            .iter()
            .enumerate()
            .map(|(m, &i)| &candidates[m][i])
            .collect();
        let mut score: i64 = choice.iter().map(|c| c.priority_sum).sum();
        for a in 0..n {
            for b in (a + 1)..n {
                score += penalties_between(&pairs, a, b, &choice);
            }
        }
        if best.as_ref().map_or(true, |(b, _)| score > *b) {
            best = Some((score, idx.clone()));
        }

        // advance odometer (last model varies fastest)
        let mut pos = n;
        loop {
            if pos == 0 {
                let (_, best_idx) = best.expect("at least one candidate combination");
                let choice: Vec<&Candidate> = best_idx
                    .iter()
                    .enumerate()
                    .map(|(m, &i)| &candidates[m][i])
                    .collect();
                return Ok(assemble(problem, &choice));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Branch-and-bound over per-model candidates in declaration order. The
/// bound adds the best remaining per-model priority sums and assumes zero
/// future penalties, which is admissible because penalties are nonpositive.
/// Result and tie-break are identical to [`solve_oracle`].
pub fn solve_native(problem: &CompositionProblem) -> ScheduledTrace {
    let candidates: Vec<Vec<Candidate>> = problem
        .models()
        .iter()
        .map(|les| build_candidates(les, problem.offset(les.name())))
        .collect();
    let pairs = penalty_pairs(problem);

    let best_remaining: Vec<i64> = {
        // suffix sums of each model's maximum priority sum
        let maxima: Vec<i64> = candidates
            .iter()
            .map(|c| c.iter().map(|cand| cand.priority_sum).max().unwrap_or(0))
            .collect();
        let mut suffix = vec![0i64; maxima.len() + 1];
        for i in (0..maxima.len()).rev() {
            suffix[i] = suffix[i + 1] + maxima[i];
        }
        suffix
    };

    struct Search<'a> {
        candidates: &'a [Vec<Candidate>],
        pairs: &'a [PenaltyPair],
        best_remaining: &'a [i64],
        best: Option<(i64, Vec<usize>)>,
    }

    impl<'a> Search<'a> {
        fn descend(&mut self, depth: usize, partial: i64, chosen: &mut Vec<usize>) {
            if depth == self.candidates.len() {
                if self.best.as_ref().map_or(true, |(b, _)| partial > *b) {
                    self.best = Some((partial, chosen.clone()));
                }
                return;
            }
            for (i, cand) in self.candidates[depth].iter().enumerate() {
                let mut score = partial + cand.priority_sum;
                chosen.push(i);
                let choice: Vec<&Candidate> = chosen
                    .iter()
                    .enumerate()
                    .map(|(m, &ci)| &self.candidates[m][ci])
                    .collect();
                for m in 0..depth {
                    score += penalties_between(self.pairs, m, depth, &choice);
                }
                let bound = score + self.best_remaining[depth + 1];
                // An equal bound cannot beat the incumbent: candidates are
                // visited in tie-break order, so later equals lose.
                if self.best.as_ref().map_or(true, |(b, _)| bound > *b) {
                    self.descend(depth + 1, score, chosen);
                }
                chosen.pop();
            }
        }
    }

    let mut search = Search {
        candidates: &candidates,
        pairs: &pairs,
        best_remaining: &best_remaining,
        best: None,
    };
    let mut chosen = Vec::new();
    search.descend(0, 0, &mut chosen);

    let (_, best_idx) = search.best.expect("every model has at least one trace");
    let choice: Vec<&Candidate> = best_idx
        .iter()
        .enumerate()
        .map(|(m, &i)| &candidates[m][i])
        .collect();
    assemble(problem, &choice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{base_problem, dephased_problem, ids};
    use crate::model::{EventAttributes, LabelledEventStructure};
    use crate::scoring::LabelConflictSet;

    #[test]
    fn oracle_reproduces_base_schedule() {
        let problem = base_problem();
        let solution = solve_oracle(&problem).unwrap();
        assert_eq!(solution.breakdown.total, 20);
        assert_eq!(
            solution.selection[&ModelName::new("A")].events(),
            &ids("A", &["e0", "e1", "e2", "e4"])
        );
        assert_eq!(
            solution.selection[&ModelName::new("C")].events(),
            &ids("C", &["f0", "f1", "f3"])
        );
        // tie broken toward g2 before g3
        let b_rank = &solution.ranks[&ModelName::new("B")];
        assert_eq!(
            b_rank.rank(&EventId::new(ModelName::new("B"), "g2")),
            Some(3)
        );
        solution.revalidate(&problem).unwrap();
    }

    #[test]
    fn oracle_reproduces_dephased_schedule() {
        let problem = dephased_problem();
        let solution = solve_oracle(&problem).unwrap();
        assert_eq!(solution.breakdown.total, 22);
        assert!(solution.selection[&ModelName::new("C")]
            .contains(&EventId::new(ModelName::new("C"), "f2")));
        // g3 now runs before g2
        let b_rank = &solution.ranks[&ModelName::new("B")];
        assert_eq!(
            b_rank.rank(&EventId::new(ModelName::new("B"), "g3")),
            Some(3)
        );
        solution.revalidate(&problem).unwrap();
    }

    #[test]
    fn native_matches_oracle_on_the_paper_instances() {
        for problem in [base_problem(), dephased_problem()] {
            let oracle = solve_oracle(&problem).unwrap();
            let native = solve_native(&problem);
            assert_eq!(native, oracle);
        }
    }

    #[test]
    fn single_event_model_solution() {
        let name = ModelName::new("S");
        let e = EventId::new(name.clone(), "e");
        let les = LabelledEventStructure::new(
            name.clone(),
            vec![(e.clone(), EventAttributes::new(7, 2))],
            vec![],
            vec![],
        )
        .unwrap();
        let problem = CompositionProblem::new(
            vec![les],
            LabelConflictSet::new(),
            [(name.clone(), 3)].into_iter().collect(),
        )
        .unwrap();
        let solution = solve_oracle(&problem).unwrap();
        assert_eq!(solution.breakdown.total, 7);
        assert_eq!(solution.clocks.clock(&e), Some(3));
        assert_eq!(solve_native(&problem), solution);
    }

    #[test]
    fn native_handles_long_chain() {
        let name = ModelName::new("L");
        let events: Vec<(EventId, EventAttributes)> = (0..30)
            .map(|i| {
                (
                    EventId::new(name.clone(), format!("c{i:02}")),
                    EventAttributes::new(1, 2),
                )
            })
            .collect();
        let edges: Vec<(EventId, EventId)> = (0..29)
            .map(|i| {
                (
                    EventId::new(name.clone(), format!("c{i:02}")),
                    EventId::new(name.clone(), format!("c{:02}", i + 1)),
                )
            })
            .collect();
        let les = LabelledEventStructure::new(name.clone(), events, edges, vec![]).unwrap();
        let problem =
            CompositionProblem::new(vec![les], LabelConflictSet::new(), BTreeMap::new()).unwrap();
        let solution = solve_native(&problem);
        assert_eq!(solution.breakdown.total, 30);
        // clocks are prefix sums of durations
        for i in 0..30u64 {
            let e = EventId::new(name.clone(), format!("c{i:02}"));
            assert_eq!(solution.clocks.clock(&e), Some(2 * i));
        }
    }

    #[test]
    fn oracle_guard_rejects_huge_products() {
        // Four 8-event antichains: 8!^4 combinations.
        let mut models = Vec::new();
        for m in 0..4 {
            let name = ModelName::new(format!("M{m}"));
            let events: Vec<(EventId, EventAttributes)> = (0..8)
                .map(|i| {
                    (
                        EventId::new(name.clone(), format!("a{i}")),
                        EventAttributes::new(1, 1),
                    )
                })
                .collect();
            models.push(LabelledEventStructure::new(name, events, vec![], vec![]).unwrap());
        }
        let problem =
            CompositionProblem::new(models, LabelConflictSet::new(), BTreeMap::new()).unwrap();
        assert!(matches!(
            solve_oracle(&problem),
            Err(SolveError::TooLarge { .. })
        ));
    }

    #[test]
    fn empty_problem_solves_to_zero() {
        let problem =
            CompositionProblem::new(vec![], LabelConflictSet::new(), BTreeMap::new()).unwrap();
        let solution = solve_oracle(&problem).unwrap();
        assert_eq!(solution.breakdown.total, 0);
        assert_eq!(solve_native(&problem), solution);
    }
}
