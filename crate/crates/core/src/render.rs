//! Textual renderers for solved schedules: the five-column human table, a
//! machine-readable key-value listing, and a fixed-scale text Gantt chart.

use crate::model::EventId;
use crate::problem::CompositionProblem;
use crate::solver::ScheduledTrace;

/// One selected event with everything the renderers need.
struct Row {
    clock: u64,
    event: EventId,
    rank: u32,
    priority: u64,
    duration: u64,
}

/// Rows sorted by (clock, local id, qualified id); clock ties are broken by
/// the unqualified id so events of different models interleave alphabetically.
fn rows(problem: &CompositionProblem, schedule: &ScheduledTrace) -> Vec<Row> {
    let mut out = Vec::new();
    for les in problem.models() {
        let Some(trace) = schedule.selection.get(les.name()) else {
            continue;
        };
        for e in trace.events() {
            let attrs = les.attributes(e);
            out.push(Row {
                clock: schedule.clocks.clock(e).unwrap_or(0),
                event: e.clone(),
                rank: schedule
                    .ranks
                    .get(les.name())
                    .and_then(|r| r.rank(e))
                    .unwrap_or(0),
                priority: attrs.priority,
                duration: attrs.duration,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.clock, a.event.local(), &a.event).cmp(&(b.clock, b.event.local(), &b.event))
    });
    out
}

/// Five-column table over the selected events, one row each, ending with the
/// objective total.
pub fn render_table(problem: &CompositionProblem, schedule: &ScheduledTrace) -> String {
    let mut out = String::from("clock event order priority duration\n");
    for row in rows(problem, schedule) {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            row.clock,
            row.event.local(),
            row.rank,
            row.priority,
            row.duration
        ));
    }
    out.push_str(&format!("objective={}\n", schedule.breakdown.total));
    out
}

/// Key-value records with qualified ids, one line per selected event, then
/// every nonzero pair penalty and the objective total. Field order is fixed.
pub fn render_machine(problem: &CompositionProblem, schedule: &ScheduledTrace) -> String {
    let mut out = String::new();
    for row in rows(problem, schedule) {
        let score = schedule
            .breakdown
            .event_scores
            .get(&row.event)
            .copied()
            .unwrap_or(0);
        out.push_str(&format!(
            "event={} clock={} rank={} priority={} duration={} score={}\n",
            row.event.qualified(),
            row.clock,
            row.rank,
            row.priority,
            row.duration,
            score
        ));
    }
    for ((j, k), s) in &schedule.breakdown.pair_scores {
        out.push_str(&format!(
            "pair={},{} score={}\n",
            j.qualified(),
            k.qualified(),
            s
        ));
    }
    out.push_str(&format!("objective={}\n", schedule.breakdown.total));
    out
}

/// One lane per model, time left to right at one character cell per time
/// unit. A selected event occupies the cells of its half-open span, showing
/// its local id truncated or `-`-padded to its duration; idle cells are `.`.
pub fn render_gantt(problem: &CompositionProblem, schedule: &ScheduledTrace) -> String {
    let horizon = rows(problem, schedule)
        .iter()
        .map(|r| r.clock + r.duration)
        .max()
        .unwrap_or(0) as usize;
    let name_width = problem
        .models()
        .iter()
        .map(|m| m.name().as_str().len())
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    for les in problem.models() {
        let mut cells = vec!['.'; horizon];
        if let Some(trace) = schedule.selection.get(les.name()) {
            for e in trace.events() {
                let start = schedule.clocks.clock(e).unwrap_or(0) as usize;
                let duration = les.attributes(e).duration as usize;
                let glyphs: Vec<char> = e.local().chars().collect();
                for i in 0..duration {
                    cells[start + i] = glyphs.get(i).copied().unwrap_or('-');
                }
            }
        }
        let lane: String = cells.into_iter().collect();
        out.push_str(&format!(
            "{:<width$} |{}\n",
            les.name(),
            lane,
            width = name_width
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{base_problem, dephased_problem};
    use crate::model::ModelName;
    use crate::problem::CompositionProblem;
    use crate::scoring::LabelConflictSet;
    use crate::solver::{solve_native, ScheduledTrace};
    use std::collections::BTreeMap;

    const TABLE_LEFT: &str = "\
clock event order priority duration
0 e0 1 1 1
0 f0 1 1 1
0 g0 1 1 1
1 e1 2 1 1
1 f1 2 1 1
1 g1 2 1 1
2 e2 3 5 3
2 f3 3 1 2
2 g2 3 1 2
4 g3 4 1 1
5 e4 4 5 2
5 g4 5 1 4
objective=20
";

    const TABLE_RIGHT: &str = "\
clock event order priority duration
0 e0 1 1 1
1 e1 2 1 1
1 g0 1 1 1
2 e2 3 5 3
2 g1 2 1 1
3 g3 3 1 1
4 f0 1 1 1
4 g2 4 1 2
5 e4 4 5 2
5 f1 2 1 1
6 f2 3 3 3
6 g4 5 1 4
objective=22
";

    fn solved(problem: &CompositionProblem) -> ScheduledTrace {
        solve_native(problem)
    }

    #[test]
    fn base_schedule_table_is_byte_exact() {
        let problem = base_problem();
        assert_eq!(render_table(&problem, &solved(&problem)), TABLE_LEFT);
    }

    #[test]
    fn dephased_schedule_table_is_byte_exact() {
        let problem = dephased_problem();
        assert_eq!(render_table(&problem, &solved(&problem)), TABLE_RIGHT);
    }

    #[test]
    fn empty_problem_table_is_header_and_objective() {
        let problem =
            CompositionProblem::new(vec![], LabelConflictSet::new(), BTreeMap::new()).unwrap();
        assert_eq!(
            render_table(&problem, &solved(&problem)),
            "clock event order priority duration\nobjective=0\n"
        );
    }

    #[test]
    fn machine_output_has_qualified_records() {
        let problem = base_problem();
        let text = render_machine(&problem, &solved(&problem));
        assert!(text.contains("event=A.e2 clock=2 rank=3 priority=5 duration=3 score=5\n"));
        assert!(text.contains("event=C.f3 clock=2 rank=3 priority=1 duration=2 score=1\n"));
        assert!(text.ends_with("objective=20\n"));
        // the optimum fires no penalties
        assert!(!text.contains("pair="));
        assert_eq!(text.lines().filter(|l| l.starts_with("event=")).count(), 12);
    }

    #[test]
    fn machine_output_lists_fired_penalties() {
        // Both e2 and f2 at clock 2 with conflicting labels: the penalty
        // fires in both orientations and the breakdown must show it.
        let problem = base_problem();
        let schedule = solved(&problem);
        let selected = schedule.selected_events();
        let clocks = &schedule.clocks.clock;
        let breakdown =
            crate::scoring::objective(problem.models(), problem.gamma(), &selected, clocks)
                .unwrap();
        assert!(breakdown.pair_scores.is_empty());

        // Rebuild with f2 forced in by hand-made clocks.
        let a_e2 = crate::model::EventId::new(ModelName::new("A"), "e2");
        let c_f2 = crate::model::EventId::new(ModelName::new("C"), "f2");
        let mut forced = schedule.clone();
        forced.clocks.clock.insert(c_f2.clone(), 2);
        let mut sel = selected.clone();
        sel.insert(c_f2.clone());
        forced.breakdown = crate::scoring::objective(
            problem.models(),
            problem.gamma(),
            &sel,
            &forced.clocks.clock,
        )
        .unwrap();
        let text = render_machine(&problem, &forced);
        assert!(text.contains(&format!(
            "pair={},{} score=-1000",
            a_e2.qualified(),
            c_f2.qualified()
        )));
    }

    #[test]
    fn gantt_lanes_follow_clocks() {
        let problem = base_problem();
        let text = render_gantt(&problem, &solved(&problem));
        let lanes: Vec<&str> = text.lines().collect();
        assert_eq!(lanes.len(), 3);
        let cells = |lane: &str| lane.split('|').nth(1).unwrap().to_string();
        let a = cells(lanes[0]);
        // e2 spans cells 2-4, e4 spans 5-6
        assert_eq!(&a[2..5], "e2-");
        assert_eq!(&a[5..7], "e4");
        // lane A: e0, e1 truncated to one cell each
        assert_eq!(&a[0..2], "ee");
    }

    #[test]
    fn dephased_gantt_f_lane_starts_at_cell_4() {
        let problem = dephased_problem();
        let text = render_gantt(&problem, &solved(&problem));
        let f_lane = text
            .lines()
            .find(|l| l.starts_with("C"))
            .unwrap()
            .split('|')
            .nth(1)
            .unwrap()
            .to_string();
        assert_eq!(&f_lane[0..4], "....");
        assert_eq!(&f_lane[4..5], "f");
    }

    #[test]
    fn single_event_occupies_duration_cells() {
        use crate::model::{EventAttributes, EventId, LabelledEventStructure};
        let name = ModelName::new("S");
        let e = EventId::new(name.clone(), "ev");
        let les = LabelledEventStructure::new(
            name,
            vec![(e, EventAttributes::new(1, 3))],
            vec![],
            vec![],
        )
        .unwrap();
        let problem =
            CompositionProblem::new(vec![les], LabelConflictSet::new(), BTreeMap::new()).unwrap();
        let text = render_gantt(&problem, &solved(&problem));
        assert_eq!(text, "S |ev-\n");
    }

    #[test]
    fn table_row_count_matches_selection() {
        let problem = dephased_problem();
        let schedule = solved(&problem);
        let text = render_table(&problem, &schedule);
        let rows = text.lines().count() - 2; // header and objective line
        assert_eq!(rows, schedule.selected_events().len());
    }
}
