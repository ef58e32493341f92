use std::collections::BTreeSet;

use ce_core::{ActionId, BeliefAtom, Outcome, Percept};
use ce_dsl::{Formula, GovernorSpec, Term};

use crate::explore::{Trace, TraceStep};
use crate::report::{Counterexample, VerificationReport};
use crate::CheckError;

/// Who a belief atom talks about: the governed agent (its percepts) or the
/// engine itself (its recorded beliefs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Robot,
    Engine,
}

/// Atoms may name agents by the governor's declared names or by the
/// conventional shorthands `r` (the governed agent) and `ce` (the engine).
pub fn resolve_agent(name: &str, gov: &GovernorSpec) -> Option<Role> {
    if name == gov.agent || name == "r" {
        Some(Role::Robot)
    } else if name == gov.name || name == "ce" {
        Some(Role::Engine)
    } else {
        None
    }
}

fn validate_agents(formula: &Formula, gov: &GovernorSpec) -> Result<(), CheckError> {
    for agent in formula.agents() {
        if resolve_agent(agent, gov).is_none() {
            return Err(CheckError::UnknownAgent(agent.to_string()));
        }
    }
    Ok(())
}

/// The belief data visible at one trace position.
#[derive(Debug, Clone, Copy)]
pub struct Position<'a> {
    pub percepts: &'a BTreeSet<Percept>,
    pub beliefs: &'a BTreeSet<BeliefAtom>,
}

impl<'a> From<&'a TraceStep> for Position<'a> {
    fn from(step: &'a TraceStep) -> Self {
        Position {
            percepts: &step.percepts,
            beliefs: &step.beliefs,
        }
    }
}

fn term_to_action(term: &Term) -> Option<ActionId> {
    match term {
        Term::Sym(name) => Some(ActionId::atom(name.clone())),
        Term::App(name, args) => {
            let mut ints = Vec::with_capacity(args.len());
            for arg in args {
                match arg {
                    Term::Int(n) => ints.push(*n),
                    _ => return None,
                }
            }
            Some(ActionId::new(name.clone(), ints))
        }
        Term::Int(_) => None,
    }
}

fn term_to_percept(term: &Term) -> Option<Percept> {
    match term {
        Term::Sym(name) => Some(Percept::new(name.clone(), Vec::new())),
        Term::App(name, args) => {
            let mut rendered = Vec::with_capacity(args.len());
            for arg in args {
                match arg {
                    Term::Sym(s) => rendered.push(s.clone()),
                    Term::Int(n) => rendered.push(n.to_string()),
                    Term::App(..) => return None,
                }
            }
            Some(Percept::new(name.clone(), rendered))
        }
        Term::Int(_) => None,
    }
}

/// Engine beliefs have two shapes: `sel(action)` and
/// `outcome(action, actor(kind))`.
fn term_to_engine_belief(term: &Term) -> Option<BeliefAtom> {
    match term {
        Term::App(name, args) if name == "sel" && args.len() == 1 => {
            Some(BeliefAtom::Selected(term_to_action(&args[0])?))
        }
        Term::App(name, args) if name == "outcome" && args.len() == 2 => {
            let action = term_to_action(&args[0])?;
            match &args[1] {
                Term::App(actor, inner) if inner.len() == 1 => match &inner[0] {
                    Term::Sym(kind) => Some(BeliefAtom::Predicted(
                        action,
                        Outcome::new(actor.as_str(), kind.as_str()),
                    )),
                    _ => None,
                },
                _ => None,
            }
        }
        _ => None,
    }
}

fn atom_holds(agent: &str, term: &Term, position: Position, gov: &GovernorSpec) -> bool {
    match resolve_agent(agent, gov).expect("agents validated before evaluation") {
        Role::Robot => term_to_percept(term)
            .map(|p| position.percepts.contains(&p))
            .unwrap_or(false),
        Role::Engine => term_to_engine_belief(term)
            .map(|b| position.beliefs.contains(&b))
            .unwrap_or(false),
    }
}

/// Finite-trace semantics: atoms look up the position's percept/belief
/// sets, boolean connectives are pointwise, and `G p` holds at `i` iff `p`
/// holds at every position from `i` to the end of the trace.
pub fn eval_at(formula: &Formula, positions: &[Position], i: usize, gov: &GovernorSpec) -> bool {
    match formula {
        Formula::Atom { agent, term } => atom_holds(agent, term, positions[i], gov),
        Formula::Not(inner) => !eval_at(inner, positions, i, gov),
        Formula::And(a, b) => eval_at(a, positions, i, gov) && eval_at(b, positions, i, gov),
        Formula::Or(a, b) => eval_at(a, positions, i, gov) || eval_at(b, positions, i, gov),
        Formula::Implies(a, b) => !eval_at(a, positions, i, gov) || eval_at(b, positions, i, gov),
        Formula::Always(inner) => (i..positions.len()).all(|j| eval_at(inner, positions, j, gov)),
    }
}

/// Whether the formula holds at the start of the given trace.
pub fn holds_on_trace(formula: &Formula, trace: &Trace, gov: &GovernorSpec) -> bool {
    let positions: Vec<Position> = trace.iter().map(Position::from).collect();
    eval_at(formula, &positions, 0, gov)
}

/// Checks a formula against every trace. The property holds for the system
/// iff it holds at position 0 of each trace; the first falsifying trace in
/// the canonical enumeration order is reported as the counterexample.
pub fn check_property(
    formula: &Formula,
    traces: &[Trace],
    gov: &GovernorSpec,
) -> Result<VerificationReport, CheckError> {
    validate_agents(formula, gov)?;
    let mut checked = 0;
    for trace in traces {
        checked += 1;
        if !holds_on_trace(formula, trace, gov) {
            return Ok(VerificationReport {
                property: formula.clone(),
                holds: false,
                counterexample: Some(Counterexample::Trace(trace.clone())),
                checked,
            });
        }
    }
    Ok(VerificationReport {
        property: formula.clone(),
        holds: true,
        counterexample: None,
        checked,
    })
}
