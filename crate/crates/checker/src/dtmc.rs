use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use ce_dsl::GovernorSpec;
use gridworld::{is_terminal, GridConfig, HumanStatus, WorldState};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::explore::Explorer;
use crate::CheckError;

/// A discrete-time Markov chain over reachable world states. State 0 is the
/// initial state; the deterministic action choice is folded into the
/// transitions, so the only branching is the humans' coin flips. Terminal
/// states are absorbing (self-loop with probability 1) and the rest of the
/// graph is acyclic because states carry their step counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dtmc {
    pub states: Vec<WorldState>,
    pub transitions: Vec<Vec<(BigRational, usize)>>,
    pub labels: BTreeMap<String, BTreeSet<usize>>,
}

/// The label vocabulary of a scenario: `<id>_hole` per human, plus
/// `robot_hole` and `at_goal`.
pub fn scenario_labels(cfg: &GridConfig) -> Vec<String> {
    let mut labels: Vec<String> =
        cfg.humans.iter().map(|(id, _)| format!("{id}_hole")).collect();
    labels.push("robot_hole".to_string());
    labels.push("at_goal".to_string());
    labels
}

fn state_labels(state: &WorldState, cfg: &GridConfig) -> Vec<String> {
    let mut out = Vec::new();
    for h in &state.humans {
        if h.status == HumanStatus::Fallen {
            out.push(format!("{}_hole", h.id));
        }
    }
    if state.robot == cfg.hole {
        out.push("robot_hole".to_string());
    }
    if state.robot == cfg.goal {
        out.push("at_goal".to_string());
    }
    out
}

/// Builds the exact DTMC of a scenario by breadth-first exploration.
/// Successors keep coin-combination order; identical successor states are
/// merged with their probabilities summed, so every non-terminal row sums
/// to exactly 1.
pub fn build_dtmc(cfg: &GridConfig, gov: &GovernorSpec) -> Result<Dtmc, CheckError> {
    let mut explorer = Explorer::new(cfg, gov);
    let initial = WorldState::initial(cfg);

    let mut index: HashMap<WorldState, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    index.insert(initial.clone(), 0);
    let mut transitions: Vec<Vec<(BigRational, usize)>> = Vec::new();

    let mut queue = VecDeque::new();
    queue.push_back(0usize);
    let mut next_unprocessed = 0usize;
    while let Some(i) = queue.pop_front() {
        debug_assert_eq!(i, next_unprocessed);
        next_unprocessed += 1;
        let state = states[i].clone();
        if is_terminal(&state, cfg) {
            transitions.push(vec![(BigRational::one(), i)]);
            continue;
        }
        let (_, successors) = explorer.successors(&state)?;
        let mut row = Vec::with_capacity(successors.len());
        for (p, succ) in successors {
            let j = *index.entry(succ.clone()).or_insert_with(|| {
                states.push(succ);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            row.push((p, j));
        }
        transitions.push(row);
    }

    let mut labels: BTreeMap<String, BTreeSet<usize>> = scenario_labels(cfg)
        .into_iter()
        .map(|l| (l, BTreeSet::new()))
        .collect();
    for (i, state) in states.iter().enumerate() {
        for label in state_labels(state, cfg) {
            labels.get_mut(&label).expect("label vocabulary is fixed").insert(i);
        }
    }

    Ok(Dtmc {
        states,
        transitions,
        labels,
    })
}

impl Dtmc {
    /// A state is absorbing iff its only transition is a self-loop of
    /// probability 1.
    pub fn is_absorbing(&self, i: usize) -> bool {
        matches!(self.transitions[i].as_slice(),
                 [(p, j)] if *j == i && p.is_one())
    }
}

/// Probability that a run from `start` reaches a state in `targets`,
/// computed by backward accumulation over the acyclic graph (absorbing
/// self-loops excluded). Exact rational arithmetic throughout.
pub fn reachability_from(
    transitions: &[Vec<(BigRational, usize)>],
    targets: &BTreeSet<usize>,
    start: usize,
) -> Result<BigRational, CheckError> {
    let n = transitions.len();
    // Post-order over the DAG gives a reverse topological order.
    let mut order = Vec::with_capacity(n);
    let mut mark = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    mark[start] = 1;
    while let Some(&mut (node, ref mut edge)) = stack.last_mut() {
        let row = &transitions[node];
        let mut advanced = false;
        while *edge < row.len() {
            let (_, succ) = &row[*edge];
            *edge += 1;
            if *succ == node {
                continue; // absorbing self-loop
            }
            match mark[*succ] {
                0 => {
                    mark[*succ] = 1;
                    stack.push((*succ, 0));
                    advanced = true;
                    break;
                }
                1 => return Err(CheckError::CyclicModel),
                _ => {}
            }
        }
        if !advanced && stack.last().map(|(n, _)| *n) == Some(node) && *stack.last().unwrap().1ance() {
        }
    }
    unreachable!()
}
