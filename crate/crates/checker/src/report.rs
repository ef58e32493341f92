use std::fmt::Write as _;

use ce_dsl::Formula;

use crate::explore::Trace;
use crate::isolated::AbstractAssignment;

/// The outcome of checking one property: whether it holds, over how many
/// executions (traces, or abstract assignments for isolated verification),
/// and a concrete witness when it does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub property: Formula,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    /// Executions examined: all of them when the property holds, the
    /// prefix up to the first violation otherwise.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Trace(Trace),
    Assignment(AbstractAssignment),
}

/// Human-readable rendering of a trace, one line per position.
pub fn render_trace(trace: &Trace) -> String {
    let mut out = String::new();
    for step in trace {
        write!(out, "  {}", step.world).unwrap();
        if !step.percepts.is_empty() {
            let percepts: Vec<String> = step.percepts.iter().map(|p| p.to_string()).collect();
            write!(out, " | percepts: {}", percepts.join(", ")).unwrap();
        }
        match &step.action {
            Some(action) => writeln!(out, " | action: {action}").unwrap(),
            None => writeln!(out, " | terminal").unwrap(),
        }
    }
    out
}

/// Human-readable rendering of a whole report.
pub fn render_report(report: &VerificationReport) -> String {
    let mut out = String::new();
    writeln!(out, "property: {}", report.property).unwrap();
    if report.holds {
        writeln!(out, "result: holds ({} executions checked)", report.checked).unwrap();
    } else {
        writeln!(out, "result: VIOLATED").unwrap();
        match &report.counterexample {
            Some(Counterexample::Trace(trace)) => {
                writeln!(out, "counterexample trace ({} positions):", trace.len()).unwrap();
                out.push_str(&render_trace(trace));
            }
            Some(Counterexample::Assignment(assignment)) => {
                writeln!(out, "counterexample assignment:").unwrap();
                out.push_str(&assignment.to_string());
            }
            None => {}
        }
    }
    out
}
