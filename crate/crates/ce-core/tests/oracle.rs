//! Differential tests of the precedence filter against a naive oracle that
//! applies the selection condition literally: an action survives an actor's
//! tier iff its severity sum is <= every other candidate's sum.

use std::collections::BTreeSet;

use ce_core::{
    filter_by_precedence, filter_for_actor, ActionId, ActorClass, AnnotatedAction, Outcome,
    SeverityMap,
};
use proptest::prelude::*;

fn oracle_actor_sum(
    action: &ActionId,
    actor: &ActorClass,
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
) -> u64 {
    let an = annotated.iter().find(|an| an.action == *action).unwrap();
    an.outcomes
        .iter()
        .filter(|o| o.actor == *actor)
        .map(|o| severity.score(&o.kind).unwrap())
        .sum()
}

fn oracle_actor_tier(
    actor: &ActorClass,
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
    candidates: &BTreeSet<ActionId>,
) -> BTreeSet<ActionId> {
    candidates
        .iter()
        .filter(|a| {
            let sum = oracle_actor_sum(a, actor, annotated, severity);
            candidates
                .iter()
                .filter(|other| other != a)
                .all(|other| sum <= oracle_actor_sum(other, actor, annotated, severity))
        })
        .cloned()
        .collect()
}

fn oracle_precedence(
    order: &[ActorClass],
    annotated: &[AnnotatedAction],
    severity: &SeverityMap,
    candidates: &BTreeSet<ActionId>,
) -> BTreeSet<ActionId> {
    match order.split_first() {
        None => candidates.clone(),
        Some((head, tail)) => {
            let tier = oracle_actor_tier(head, annotated, severity, candidates);
            oracle_precedence(tail, annotated, severity, &tier)
        }
    }
}

#[derive(Debug, Clone)]
struct Instance {
    order: Vec<ActorClass>,
    annotated: Vec<AnnotatedAction>,
    severity: SeverityMap,
    candidates: BTreeSet<ActionId>,
}

// Instances bounded by the domain sizes the engine is exercised with in
// practice: up to 5 actions, 3 actor classes, 4 outcome kinds, scores 0-10.
fn instances() -> impl Strategy<Value = Instance> {
    let actors = ["human", "robot", "animal"];
    let kinds = ["safe", "collision", "hole", "damage"];
    (
        1usize..=5,
        1usize..=3,
        1usize..=4,
        proptest::collection::vec(0u64..=10, 4),
        proptest::collection::vec(
            proptest::collection::vec((0usize..3, 0usize..4), 0..=4),
            5,
        ),
    )
        .prop_map(move |(n_actions, n_actors, n_kinds, scores, raw_outcomes)| {
            let severity: SeverityMap = kinds
                .iter()
                .take(n_kinds)
                .zip(scores.iter())
                .map(|(k, s)| (*k, *s))
                .collect();
            let order: Vec<ActorClass> =
                actors.iter().take(n_actors).map(|a| (*a).into()).collect();
            let annotated: Vec<AnnotatedAction> = (0..n_actions)
                .map(|i| {
                    let outcomes = raw_outcomes[i]
                        .iter()
                        .map(|(actor, kind)| {
                            Outcome::new(actors[actor % n_actors], kinds[kind % n_kinds])
                        })
                        .collect();
                    AnnotatedAction::new(ActionId::atom(format!("a{i}")), outcomes)
                })
                .collect();
            let candidates = annotated.iter().map(|an| an.action.clone()).collect();
            Instance {
                order,
                annotated,
                severity,
                candidates,
            }
        })
}

proptest! {
    #[test]
    fn precedence_filter_matches_oracle(inst in instances()) {
        let ours = filter_by_precedence(
            &inst.order,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        ).unwrap();
        let expected = oracle_precedence(
            &inst.order,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        );
        prop_assert_eq!(ours, expected);
    }

    #[test]
    fn actor_tier_matches_oracle(inst in instances()) {
        let actor = inst.order[0].clone();
        let ours = filter_for_actor(
            &actor,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        ).unwrap();
        let expected = oracle_actor_tier(&actor, &inst.annotated, &inst.severity, &inst.candidates);
        prop_assert_eq!(ours, expected);
    }

    #[test]
    fn selection_is_sound_and_nonempty(inst in instances()) {
        let selected = filter_by_precedence(
            &inst.order,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        ).unwrap();
        prop_assert!(selected.is_subset(&inst.candidates));
        prop_assert!(!selected.is_empty());
    }

    #[test]
    fn annotation_order_is_irrelevant(inst in instances(), seed in any::<u64>()) {
        let baseline = filter_by_precedence(
            &inst.order,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        ).unwrap();

        // Cheap deterministic shuffle of the annotation list.
        let mut shuffled = inst.annotated.clone();
        let len = shuffled.len();
        for i in 0..len {
            let j = (seed as usize).wrapping_mul(31).wrapping_add(i * 17) % len;
            shuffled.swap(i, j);
        }
        let permuted = filter_by_precedence(
            &inst.order,
            &shuffled,
            &inst.severity,
            &inst.candidates,
        ).unwrap();
        prop_assert_eq!(baseline, permuted);
    }

    #[test]
    fn severity_scaling_preserves_selection(inst in instances(), factor in 1u64..=7) {
        let baseline = filter_by_precedence(
            &inst.order,
            &inst.annotated,
            &inst.severity,
            &inst.candidates,
        ).unwrap();
        let scaled: SeverityMap = inst
            .severity
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .collect();
        let rescaled = filter_by_precedence(
            &inst.order,
            &inst.annotated,
            &scaled,
            &inst.candidates,
        ).unwrap();
        prop_assert_eq!(baseline, rescaled);
    }

    #[test]
    fn strict_top_tier_minimum_vetoes_everything_else(inst in instances()) {
        let head = inst.order[0].clone();
        let sums: Vec<(ActionId, u64)> = inst
            .candidates
            .iter()
            .map(|a| (a.clone(), oracle_actor_sum(a, &head, &inst.annotated, &inst.severity)))
            .collect();
        let min = sums.iter().map(|(_, s)| *s).min().unwrap();
        let minimal: Vec<&ActionId> =
            sums.iter().filter(|(_, s)| *s == min).map(|(a, _)| a).collect();
        if minimal.len() == 1 {
            let selected = filter_by_precedence(
                &inst.order,
                &inst.annotated,
                &inst.severity,
                &inst.candidates,
            ).unwrap();
            prop_assert_eq!(selected.len(), 1);
            prop_assert!(selected.contains(minimal[0]));
        }
    }
}
