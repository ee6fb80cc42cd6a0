//! Line-oriented model and scenario file formats.
//!
//! Model files declare one model each: a `model <name>` header, then
//! `event`, `edge` and `conflict` statements. Scenario files carry the
//! external knowledge: `gamma <label> <label> [weight=<negative-int>]`
//! conflicts and `offset <model> <nat>` dephasing. `#` starts a comment.
//! Only immediate causality and direct conflicts appear in files; closures
//! are always computed.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{EventAttributes, EventId, LabelledEventStructure, ModelError, ModelName};
use crate::problem::{CompositionProblem, ProblemError};
use crate::scoring::{LabelConflictSet, ScoreError, DEFAULT_GAMMA_WEIGHT};

#[derive(Error, Debug)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown event `{id}`")]
    UnknownEvent { line: usize, id: String },
    #[error("line {line}: unknown model `{name}`")]
    UnknownModel { line: usize, name: String },
    #[error("line {line}: {source}")]
    Score { line: usize, source: ScoreError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_nat(line: usize, field: &str, raw: &str) -> Result<u64, ParseError> {
    raw.parse().map_err(|_| {
        syntax(
            line,
            format!("{field} expects a natural number, got `{raw}`"),
        )
    })
}

/// Split `key=value`, checking the key.
fn keyed<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str, ParseError> {
    match token.split_once('=') {
        Some((k, v)) if k == key => Ok(v),
        _ => Err(syntax(line, format!("expected `{key}=...`, got `{token}`"))),
    }
}

/// Statements of a file, with comments and blank lines removed.
fn statements(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

/// Parse one model file into a validated structure (closures computed,
/// cycles and self-conflicts rejected).
pub fn parse_model_file(text: &str) -> Result<LabelledEventStructure, ParseError> {
    let mut name: Option<ModelName> = None;
    let mut events: Vec<(EventId, EventAttributes)> = Vec::new();
    let mut edges: Vec<(EventId, EventId)> = Vec::new();
    let mut conflicts: Vec<(EventId, EventId)> = Vec::new();

    for (line, tokens) in statements(text) {
        match tokens.as_slice() {
            ["model", n] => {
                if name.is_some() {
                    return Err(syntax(line, "duplicate `model` statement"));
                }
                if !events.is_empty() {
                    return Err(syntax(line, "`model` must be the first statement"));
                }
                name = Some(ModelName::new(*n));
            }
            ["model", ..] => return Err(syntax(line, "usage: model <name>")),
            ["event", id, rest @ ..] => {
                let model = name
                    .clone()
                    .ok_or_else(|| syntax(line, "`event` before `model` statement"))?;
                let (priority_tok, duration_tok, labels_tok) =
                    match rest {
                        [p, d] => (*p, *d, None),
                        [p, d, l] => (*p, *d, Some(*l)),
                        _ => return Err(syntax(
                            line,
                            "usage: event <id> priority=<nat> duration=<nat> [labels=<a>,<b>,...]",
                        )),
                    };
                let priority = parse_nat(line, "priority", keyed(line, priority_tok, "priority")?)?;
                let duration = parse_nat(line, "duration", keyed(line, duration_tok, "duration")?)?;
                let mut attrs = EventAttributes::new(priority, duration);
                if let Some(tok) = labels_tok {
                    let labels = keyed(line, tok, "labels")?;
                    attrs = attrs.with_labels(labels.split(',').filter(|l| !l.is_empty()));
                }
                events.push((EventId::new(model, *id), attrs));
            }
            [kind @ ("edge" | "conflict"), a, b] => {
                let model = name
                    .clone()
                    .ok_or_else(|| syntax(line, format!("`{kind}` before `model` statement")))?;
                let resolve = |local: &str| -> Result<EventId, ParseError> {
                    let id = EventId::new(model.clone(), local);
                    if events.iter().any(|(e, _)| e == &id) {
                        Ok(id)
                    } else {
                        Err(ParseError::UnknownEvent {
                            line,
                            id: local.to_string(),
                        })
                    }
                };
                let pair = (resolve(a)?, resolve(b)?);
                if *kind == "edge" {
                    edges.push(pair);
                } else {
                    conflicts.push(pair);
                }
            }
            [other, ..] => {
                return Err(syntax(line, format!("unknown statement `{other}`")));
            }
            [] => unreachable!("blank lines are filtered"),
        }
    }

    let name = name.ok_or_else(|| syntax(0, "missing `model` statement"))?;
    Ok(LabelledEventStructure::new(name, events, edges, conflicts)?)
}

/// Parse a scenario file against already-parsed models. Returns the
/// composition problem and any warnings (labels in gamma that no model
/// mentions are legal but flagged).
pub fn parse_scenario_file(
    text: &str,
    models: Vec<LabelledEventStructure>,
) -> Result<(CompositionProblem, Vec<String>), ParseError> {
    let mut gamma = LabelConflictSet::new();
    let mut offsets: BTreeMap<ModelName, u64> = BTreeMap::new();
    let mut warnings = Vec::new();

    let known_label = |label: &str| {
        models.iter().any(|m| {
            m.events()
                .iter()
                .any(|e| m.attributes(e).labels.contains(label))
        })
    };

    for (line, tokens) in statements(text) {
        match tokens.as_slice() {
            ["offset", model, value] => {
                let name = ModelName::new(*model);
                if !models.iter().any(|m| m.name() == &name) {
                    return Err(ParseError::UnknownModel {
                        line,
                        name: model.to_string(),
                    });
                }
                offsets.insert(name, parse_nat(line, "offset", value)?);
            }
            ["gamma", a, b, rest @ ..] => {
                let weight = match rest {
                    [] => DEFAULT_GAMMA_WEIGHT,
                    [tok] => keyed(line, tok, "weight")?.parse().map_err(|_| {
                        syntax(line, format!("weight expects an integer, got `{tok}`"))
                    })?,
                    _ => return Err(syntax(line, "usage: gamma <label> <label> [weight=<int>]")),
                };
                gamma
                    .insert(*a, *b, weight)
                    .map_err(|source| ParseError::Score { line, source })?;
                for label in [a, b] {
                    if !known_label(label) {
                        warnings.push(format!(
                            "line {line}: label `{label}` does not occur in any model"
                        ));
                    }
                }
            }
            [other, ..] => {
                return Err(syntax(line, format!("unknown statement `{other}`")));
            }
            [] => unreachable!("blank lines are filtered"),
        }
    }

    let problem = CompositionProblem::new(models, gamma, offsets)?;
    Ok((problem, warnings))
}

/// Canonical re-emission of a model file; parsing it back yields an
/// identical structure.
pub fn render_model_file(les: &LabelledEventStructure) -> String {
    let mut out = format!("model {}\n", les.name());
    for e in les.events() {
        let attrs = les.attributes(e);
        out.push_str(&format!(
            "event {} priority={} duration={}",
            e.local(),
            attrs.priority,
            attrs.duration
        ));
        if !attrs.labels.is_empty() {
            let labels: Vec<&str> = attrs.labels.iter().map(String::as_str).collect();
            out.push_str(&format!(" labels={}", labels.join(",")));
        }
        out.push('\n');
    }
    for (a, b) in les.immediate_causality() {
        out.push_str(&format!("edge {} {}\n", a.local(), b.local()));
    }
    for pair in les.direct_conflicts() {
        out.push_str(&format!(
            "conflict {} {}\n",
            pair.first().local(),
            pair.second().local()
        ));
    }
    out
}
