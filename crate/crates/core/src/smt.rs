//! SMT-LIB v2 emission and the external optimizing-solver backend.
//!
//! The encoding is fully ground: every quantifier is expanded to a
//! conjunction over the finite event sets, which keeps the files portable
//! across solvers. Events become an enumerated sort of qualified ids with
//! `.` replaced by `_`; the decision symbols are the selection predicate
//! `sel`, per-model ranks `s_<model>`, `clock`, `score` and `Score`, plus a
//! named `objective` constant that is maximized.
//!
//! The external solver's model is never trusted: the returned selection,
//! ranks and clocks are revalidated locally and the objective recomputed;
//! any disagreement with the reported optimum is an error.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::process::{Command, Stdio};

use thiserror::Error;

use crate::config::Trace;
use crate::model::{EventId, LabelledEventStructure, ModelName};
use crate::problem::CompositionProblem;
use crate::schedule::{ClockAssignment, RankFunction};
use crate::scoring::{self, label_conflict_weight};
use crate::solver::ScheduledTrace;

#[derive(Error, Debug)]
pub enum SmtError {
    #[error("solver command `{command}` could not be run: {source}")]
    SolverUnavailable {
        command: String,
        source: std::io::Error,
    },
    #[error("solver reported unsat")]
    SolverReportedUnsat,
    #[error("could not parse solver model: {0}")]
    ModelParseError(String),
    #[error("solver reported optimum {reported} but local recomputation gives {local}")]
    ObjectiveMismatch { reported: i64, local: i64 },
}

/// Replace every character outside `[A-Za-z0-9_]` with `_`.
fn sanitize(raw: &str) -> String {
    raw.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Deterministic event-to-symbol mapping over all models, in declaration
/// order. Collisions after sanitizing get a numeric suffix.
pub(crate) fn event_symbols(
    models: &[LabelledEventStructure],
) -> (BTreeMap<EventId, String>, Vec<(String, EventId)>) {
    let mut by_event = BTreeMap::new();
    let mut ordered = Vec::new();
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    for les in models {
        for e in les.events() {
            let base = sanitize(&e.qualified());
            let count = used.entry(base.clone()).or_insert(0);
            let sym = if *count == 0 {
                base.clone()
            } else {
                format!("{base}_{count}")
            };
            *count += 1;
            by_event.insert(e.clone(), sym.clone());
            ordered.push((sym, e.clone()));
        }
    }
    (by_event, ordered)
}

fn rank_symbol(name: &ModelName) -> String {
    format!("s_{}", sanitize(name.as_str()))
}

fn or_expr(terms: &[String]) -> String {
    match terms.len() {
        0 => "false".to_string(),
        1 => terms[0].clone(),
        _ => format!("(or {})", terms.join(" ")),
    }
}

fn and_expr(terms: &[String]) -> String {
    match terms.len() {
        0 => "true".to_string(),
        1 => terms[0].clone(),
        _ => format!("(and {})", terms.join(" ")),
    }
}

/// Emit the full optimization encoding for the problem. Byte-deterministic.
pub fn emit_smtlib(problem: &CompositionProblem) -> String {
    let models = problem.models();
    let (sym, ordered) = event_symbols(models);
    let mut out = String::new();
    let mut push = |line: &str| {
        out.push_str(line);
        out.push('\n');
    };

    push("(set-option :produce-models true)");

    if ordered.is_empty() {
        push("(declare-const objective Int)");
        push("(assert (= objective 0))");
        push("(maximize objective)");
        push("(check-sat)");
        push("(get-value (objective))");
        return out;
    }

    let constructors: Vec<String> = ordered.iter().map(|(s, _)| format!("({s})")).collect();
    push(&format!(
        "(declare-datatypes ((Event 0)) (({})))",
        constructors.join(" ")
    ));
    push("(declare-fun sel (Event) Bool)");
    push("(declare-fun clock (Event) Int)");
    push("(declare-fun score (Event) Int)");
    for les in models {
        push(&format!(
            "(declare-fun {} (Event) Int)",
            rank_symbol(les.name())
        ));
    }

    // cross-model pairs with a nonzero label-conflict weight
    let mut penalty_pairs: Vec<(EventId, EventId, u64, i64)> = Vec::new();
    for (i, j_les) in models.iter().enumerate() {
        for (l, k_les) in models.iter().enumerate() {
            if i == l {
                continue;
            }
            for j in j_les.events() {
                for k in k_les.events() {
                    let w = label_conflict_weight(
                        &j_les.attributes(j).labels,
                        &k_les.attributes(k).labels,
                        problem.gamma(),
                    );
                    if w != 0 {
                        penalty_pairs.push((j.clone(), k.clone(), j_les.attributes(j).duration, w));
                    }
                }
            }
        }
    }
    if !penalty_pairs.is_empty() {
        push("(declare-fun Score (Event Event) Int)");
    }
    push("(declare-const objective Int)");

    for les in models {
        let s = rank_symbol(les.name());
        let n = les.len();
        push(&format!("; model {}", les.name()));

        // conflict-freeness, one assertion per propagated conflict pair
        for pair in les.conflict() {
            push(&format!(
                "(assert (not (and (sel {}) (sel {}))))",
                sym[pair.first()],
                sym[pair.second()]
            ));
        }

        // downward closure over immediate predecessors
        for e in les.events() {
            let preds = les.immediate_predecessors(e).expect("declared event");
            if preds.is_empty() {
                continue;
            }
            let conj: Vec<String> = preds.iter().map(|p| format!("(sel {})", sym[p])).collect();
            push(&format!(
                "(assert (=> (sel {}) {}))",
                sym[e],
                and_expr(&conj)
            ));
        }

        // maximality: every unselected event is blocked
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
            if blocked.is_empty() {
                // roots without conflicts are always selected
                push(&format!("(assert (sel {}))", sym[z]));
            } else {
                push(&format!(
                    "(assert (=> (not (sel {})) {}))",
                    sym[z],
                    or_expr(&blocked)
                ));
            }
        }

        // rank: injective onto 1..=n, order preserving, selected first
        if n > 0 {
            let apps: Vec<String> = les
                .events()
                .iter()
                .map(|e| format!("({s} {})", sym[e]))
                .collect();
            if n > 1 {
                push(&format!("(assert (distinct {}))", apps.join(" ")));
            }
            for e in les.events() {
                push(&format!("(assert (>= ({s} {}) 1))", sym[e]));
                push(&format!("(assert (<= ({s} {}) {n}))", sym[e]));
            }
        }
        for (j, k) in les.causality() {
            if j != k {
                push(&format!("(assert (<= ({s} {}) ({s} {})))", sym[j], sym[k]));
            }
        }
        for j in les.events() {
            for k in les.events() {
                if j != k {
                    push(&format!(
                        "(assert (=> (and (sel {j_sym}) (not (sel {k_sym}))) (< ({s} {j_sym}) ({s} {k_sym}))))",
                        j_sym = sym[j],
                        k_sym = sym[k],
                    ));
                }
            }
        }

        // clock recurrence over consecutive selected ranks, root at offset
        for j in les.events() {
            for k in les.events() {
                if j != k {
                    push(&format!(
                        "(assert (=> (and (sel {j_sym}) (sel {k_sym}) (= (- ({s} {k_sym}) ({s} {j_sym})) 1)) (= (clock {k_sym}) (+ (clock {j_sym}) {dur}))))",
                        j_sym = sym[j],
                        k_sym = sym[k],
                        dur = les.attributes(j).duration,
                    ));
                }
            }
        }
        let offset = problem.offset(les.name());
        for j in les.events() {
            push(&format!(
                "(assert (=> (= ({s} {j_sym}) 1) (= (clock {j_sym}) {offset})))",
                j_sym = sym[j],
            ));
        }

        // event scores
        for j in les.events() {
            push(&format!(
                "(assert (= (score {j_sym}) (ite (sel {j_sym}) {p} 0)))",
                j_sym = sym[j],
                p = les.attributes(j).priority,
            ));
        }
    }

    // pairwise penalties, gated on both-selected and the overlap window
    if !penalty_pairs.is_empty() {
        push("; cross-model penalties");
    }
    for (j, k, dur, w) in &penalty_pairs {
        let diff = format!("(- (clock {}) (clock {}))", sym[k], sym[j]);
        push(&format!(
            "(assert (= (Score {j_sym} {k_sym}) (ite (and (sel {j_sym}) (sel {k_sym}) (>= {diff} 0) (< {diff} {dur})) {w} 0)))",
            j_sym = sym[j],
            k_sym = sym[k],
            w = smt_int(*w),
        ));
    }

    let mut terms: Vec<String> = ordered
        .iter()
        .map(|(s, _)| format!("(score {s})"))
        .collect();
    terms.extend(
        penalty_pairs
            .iter()
            .map(|(j, k, _, _)| format!("(Score {} {})", sym[j], sym[k])),
    );
    let sum = if terms.len() == 1 {
        terms[0].clone()
    } else {
        format!("(+ {})", terms.join(" "))
    };
    push(&format!("(assert (= objective {sum}))"));
    push("(maximize objective)");
    push("(check-sat)");
    push("(get-value (objective))");

    let sels: Vec<String> = ordered.iter().map(|(s, _)| format!("(sel {s})")).collect();
    push(&format!("(get-value ({}))", sels.join(" ")));
    for les in models {
        let s = rank_symbol(les.name());
        let apps: Vec<String> = les
            .events()
            .iter()
            .map(|e| format!("({s} {})", sym[e]))
            .collect();
        if !apps.is_empty() {
            push(&format!("(get-value ({}))", apps.join(" ")));
        }
    }
    let clocks: Vec<String> = ordered
        .iter()
        .map(|(s, _)| format!("(clock {s})"))
        .collect();
    push(&format!("(get-value ({}))", clocks.join(" ")));

    out
}

fn smt_int(v: i64) -> String {
    if v < 0 {
        format!("(- {})", -v)
    } else {
        v.to_string()
    }
}

// --- minimal s-expression reader for solver responses ---

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

pub(crate) fn parse_sexps(input: &str) -> Result<Vec<Sexp>, SmtError> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }

    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for tok in tokens {
        match tok.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let list = stack
                    .pop()
                    .ok_or_else(|| SmtError::ModelParseError("unbalanced parens".into()))?;
                if stack.is_empty() {
                    return Err(SmtError::ModelParseError("unbalanced parens".into()));
                }
                stack.last_mut().unwrap().push(Sexp::List(list));
            }
            _ => stack.last_mut().unwrap().push(Sexp::Atom(tok)),
        }
    }
    if stack.len() != 1 {
        return Err(SmtError::ModelParseError("unclosed paren".into()));
    }
    Ok(stack.pop().unwrap())
}

fn sexp_int(value: &Sexp) -> Option<i64> {
    match value {
        Sexp::Atom(a) => a.parse().ok(),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), inner] if minus == "-" => sexp_int(inner).map(|v| -v),
            _ => None,
        },
    }
}

fn sexp_bool(value: &Sexp) -> Option<bool> {
    match value {
        Sexp::Atom(a) if a == "true" => Some(true),
        Sexp::Atom(a) if a == "false" => Some(false),
        _ => None,
    }
}

/// Values extracted from the solver's `get-value` responses.
#[derive(Default, Debug)]
struct SolverModel {
    objective: Option<i64>,
    sel: BTreeMap<String, bool>,
    ranks: BTreeMap<(String, String), i64>,
    clocks: BTreeMap<String, i64>,
}

fn read_solver_output(output: &str) -> Result<SolverModel, SmtError> {
    let sexps = parse_sexps(output)?;
    let verdict = sexps.iter().find_map(|s| match s {
        Sexp::Atom(a) if a == "sat" || a == "unsat" || a == "unknown" => Some(a.as_str()),
        _ => None,
    });
    match verdict {
        Some("sat") => {}
        Some("unsat") => return Err(SmtError::SolverReportedUnsat),
        Some(v) => return Err(SmtError::ModelParseError(format!("solver verdict `{v}`"))),
        None => return Err(SmtError::ModelParseError("no solver verdict".into())),
    }

    let mut model = SolverModel::default();
    for sexp in &sexps {
        let Sexp::List(pairs) = sexp else { continue };
        for pair in pairs {
            let Sexp::List(items) = pair else { continue };
            let [term, value] = items.as_slice() else {
                continue;
            };
            match term {
                Sexp::Atom(a) if a == "objective" => {
                    model.objective = sexp_int(value);
                }
                Sexp::List(app) => {
                    let [Sexp::Atom(f), Sexp::Atom(arg)] = app.as_slice() else {
                        continue;
                    };
                    if f == "sel" {
                        if let Some(b) = sexp_bool(value) {
                            model.sel.insert(arg.clone(), b);
                        }
                    } else if f == "clock" {
                        if let Some(v) = sexp_int(value) {
                            model.clocks.insert(arg.clone(), v);
                        }
                    } else if let Some(m) = f.strip_prefix("s_") {
                        if let Some(v) = sexp_int(value) {
                            model.ranks.insert((m.to_string(), arg.clone()), v);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    Ok(model)
}

/// Run `command` (whitespace-split into program and arguments) with `input`
/// on its standard input and return its standard output.
pub fn run_solver_raw(command: &str, input: &str) -> Result<String, SmtError> {
    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| SmtError::SolverUnavailable {
        command: command.to_string(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "empty command"),
    })?;
    let mut child = Command::new(program)
        .args(parts)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SmtError::SolverUnavailable {
            command: command.to_string(),
            source,
        })?;
    // A solver that answers without draining stdin closes the pipe early;
    // that is not a failure.
    if let Err(source) = child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.as_bytes())
    {
        if source.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(SmtError::SolverUnavailable {
                command: command.to_string(),
                source,
            });
        }
    }
    let output = child
        .wait_with_output()
        .map_err(|source| SmtError::SolverUnavailable {
            command: command.to_string(),
            source,
        })?;
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}

/// Solve the problem by piping the emitted encoding to an external
/// optimizing solver and reconstructing a [`ScheduledTrace`] from its model.
pub fn run_external(
    problem: &CompositionProblem,
    solver_command: &str,
) -> Result<ScheduledTrace, SmtError> {
    let encoding = emit_smtlib(problem);
    let output = run_solver_raw(solver_command, &encoding)?;
    let model = read_solver_output(&output)?;

    let reported = model
        .objective
        .ok_or_else(|| SmtError::ModelParseError("no objective value".into()))?;

    let (sym, _) = event_symbols(problem.models());
    let mut selection = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    let mut clocks = ClockAssignment::default();

    for les in problem.models() {
        let mut selected = std::collections::BTreeSet::new();
        let mut rank_map = BTreeMap::new();
        for e in les.events() {
            let s = &sym[e];
            let is_sel = *model.sel.get(s).ok_or_else(|| {
                SmtError::ModelParseError(format!("no sel value for {}", e.qualified()))
            })?;
            if is_sel {
                selected.insert(e.clone());
            }
            let r = *model
                .ranks
                .get(&(sanitize(les.name().as_str()), s.clone()))
                .ok_or_else(|| {
                    SmtError::ModelParseError(format!("no rank value for {}", e.qualified()))
                })?;
            let r = u32::try_from(r).map_err(|_| {
                SmtError::ModelParseError(format!("rank {r} of {} out of range", e.qualified()))
            })?;
            rank_map.insert(e.clone(), r);
            if is_sel {
                let c = *model.clocks.get(s).ok_or_else(|| {
                    SmtError::ModelParseError(format!("no clock value for {}", e.qualified()))
                })?;
                let c = u64::try_from(c).map_err(|_| {
                    SmtError::ModelParseError(format!("clock {c} of {} is negative", e.qualified()))
                })?;
                clocks.clock.insert(e.clone(), c);
            }
        }
        let trace =
            Trace::new(les, selected).map_err(|e| SmtError::ModelParseError(e.to_string()))?;
        selection.insert(les.name().clone(), trace);
        ranks.insert(
            les.name().clone(),
            RankFunction::new(les.name().clone(), rank_map),
        );
        clocks
            .offsets
            .insert(les.name().clone(), problem.offset(les.name()));
    }

    let selected_all: std::collections::BTreeSet<EventId> = selection
        .values()
        .flat_map(|t| t.events().iter().cloned())
        .collect();
    let breakdown = scoring::objective(
        problem.models(),
        problem.gamma(),
        &selected_all,
        &clocks.clock,
    )
    .map_err(|e| SmtError::ModelParseError(e.to_string()))?;

    let schedule = ScheduledTrace {
        selection,
        ranks,
        clocks,
        breakdown,
    };
    schedule
        .revalidate(problem)
        .map_err(|e| SmtError::ModelParseError(e.to_string()))?;

    if schedule.breakdown.total != reported {
        return Err(SmtError::ObjectiveMismatch {
            reported,
            local: schedule.breakdown.total,
        });
    }
    Ok(schedule)
}
