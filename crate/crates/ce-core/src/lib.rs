//! A declarative consequence engine.
//!
//! The engine governs an agent's action selection: every applicable action is
//! annotated with the outcomes a model predicts for it (e.g. "a human collides
//! with something"), outcomes are scored by a severity map, and the action set
//! is filtered down to the choices that are least harmful for the
//! highest-priority actor class first, then the next class, and so on.
//!
//! All operations are pure: they take an [`EngineState`] and return a new one,
//! so values can be shared freely across threads and re-running an operation
//! always yields the same result. Everything the engine concludes (predicted
//! outcomes, selected actions) is also recorded as [`BeliefAtom`]s so external
//! checkers can inspect its reasoning.

mod engine;
mod types;

pub use engine::{
    action_severity_sum, filter_by_precedence, filter_for_actor, EngineError,
};
pub use types::{
    ActionId, ActorClass, AnnotatedAction, BeliefAtom, EngineState, Outcome, OutcomeKind, Percept,
    Precedence, SeverityMap,
};
