use std::collections::BTreeSet;

use thiserror::Error;

use crate::types::{
    ActionId, ActorClass, AnnotatedAction, BeliefAtom, EngineState, Outcome, OutcomeKind,
    SeverityMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no applicable actions to govern")]
    NoApplicableActions,
    #[error("stale annotations: no outcome annotation for action {0}")]
    StaleAnnotations(ActionId),
    #[error("unscored outcome kind `{0}`")]
    UnscoredOutcome(OutcomeKind),
    #[error("duplicate actor class `{0}` in precedence order")]
    DuplicatePrecedence(ActorClass),
}

fn lookup<'a>(
    action: &ActionId,
    annotated: &'a [AnnotatedAction],
) -> Result<&'a AnnotatedAction, EngineError> {
    annotated
        .iter()
        .find(|an| an.action == *action)
        .ok_or_else(|| EngineError::StaleAnnotations(action.clone()))
}

/// Sum of severity scores over the outcomes of `action` whose actor is
/// `actor`. Outcomes for other actors are ignored; an action with no
/// outcomes for `actor` sums to 0. Duplicate outcomes each count.
pub fn action_severity_sum(
    action: &ActionId,
    actor: &ActorClass,
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
) -> Result<u64, EngineError> {
    let an = lookup(action, annotated)?;
    let mut sum = 0u64;
    for outcome in &an.outcomes {
        if outcome.actor != *actor {
            continue;
        }
        let score = severity
            .score(&outcome.kind)
            .ok_or_else(|| EngineError::UnscoredOutcome(outcome.kind.clone()))?;
        sum += score;
    }
    Ok(sum)
}

/// Keeps the candidates whose severity sum for `actor` is minimal over the
/// candidate set. A singleton candidate set is returned unchanged; an empty
/// one stays empty.
pub fn filter_for_actor(
    actor: &ActorClass,
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
    candidates: &BTreeSet<ActionId>,
) -> Result<BTreeSet<ActionId>, EngineError> {
    let mut sums = Vec::with_capacity(candidates.len());
    for action in candidates {
        sums.push((action, action_severity_sum(action, actor, annotated, severity)?));
    }
    let min = match sums.iter().map(|(_, s)| *s).min() {
        Some(min) => min,
        None => return Ok(BTreeSet::new()),
    };
    Ok(sums
        .into_iter()
        .filter(|(_, s)| *s == min)
        .map(|(a, _)| a.clone())
        .collect())
}

/// Folds [`filter_for_actor`] over the precedence order: the head actor
/// filters first, the remaining actors only refine within the survivors.
/// An empty order returns the candidates unchanged. The result is a subset
/// of `candidates` and is non-empty whenever `candidates` is.
pub fn filter_by_precedence(
    order: &[ActorClass],
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
    candidates: &BTreeSet<ActionId>,
) -> Result<BTreeSet<ActionId>, EngineError> {
    match order.split_first() {
        None => Ok(candidates.clone()),
        Some((head, tail)) => {
            let survivors = filter_for_actor(head, annotated, severity, candidates)?;
            filter_by_precedence(tail, annotated, severity, &survivors)
        }
    }
}

impl EngineState {
    /// First engine rule: ask the environment model for the outcomes of
    /// every applicable action and replace the previous annotations. Each
    /// predicted outcome is also recorded as an `outcome(a, o)` belief.
    pub fn model_applicable_actions<F>(&self, mut model: F) -> Result<EngineState, EngineError>
    where
        F: FnMut(&ActionId) -> Vec<Outcome>,
    {
        if self.applicable.is_empty() {
            return Err(EngineError::NoApplicableActions);
        }
        let mut next = self.clone();
        next.annotated = self
            .applicable
            .iter()
            .map(|action| AnnotatedAction::new(action.clone(), model(action)))
            .collect();
        for an in &next.annotated {
            for outcome in &an.outcomes {
                next.beliefs
                    .insert(BeliefAtom::Predicted(an.action.clone(), outcome.clone()));
            }
        }
        Ok(next)
    }

    /// Second engine rule: filter the applicable actions down to the most
    /// ethical subset via the precedence order, and record a `sel(a)` belief
    /// for every survivor. Requires that every applicable action has been
    /// annotated by [`EngineState::model_applicable_actions`].
    pub fn evaluate_outcomes(&self) -> Result<EngineState, EngineError> {
        for action in &self.applicable {
            lookup(action, &self.annotated)?;
        }
        let candidates: BTreeSet<ActionId> = self.applicable.iter().cloned().collect();
        let selected = filter_by_precedence(
            self.precedence.order(),
            &self.annotated,
            &self.severity,
            &candidates,
        )?;
        let mut next = self.clone();
        for action in &selected {
            next.beliefs.insert(BeliefAtom::Selected(action.clone()));
        }
        next.selected = selected;
        Ok(next)
    }
}
