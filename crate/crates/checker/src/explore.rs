use std::collections::{BTreeSet, HashMap};

use ce_core::{ActionId, BeliefAtom, Percept};
use ce_dsl::GovernorSpec;
use gridworld::{
    applicable_actions, decide, is_terminal, percepts, world_step, Decision, GridConfig,
    WorldState,
};
use num_rational::BigRational;
use num_traits::One;

use crate::CheckError;

/// One position of an execution: the world, what the robot perceives there,
/// the engine's beliefs from that step's selection round, and the chosen
/// action. The final position of a trace is terminal: no action, no fresh
/// engine run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub world: WorldState,
    pub percepts: BTreeSet<Percept>,
    pub beliefs: BTreeSet<BeliefAtom>,
    pub action: Option<ActionId>,
}

/// A complete execution from the initial state to a terminal state.
pub type Trace = Vec<TraceStep>;

/// Explores scenarios with memoised decisions: the governed action choice
/// is a pure function of the world state, so each distinct state is decided
/// once no matter how many branches pass through it.
pub struct Explorer<'a> {
    cfg: &'a GridConfig,
    gov: &'a GovernorSpec,
    decisions: HashMap<WorldState, Decision>,
}

impl<'a> Explorer<'a> {
    pub fn new(cfg: &'a GridConfig, gov: &'a GovernorSpec) -> Self {
        Explorer {
            cfg,
            gov,
            decisions: HashMap::new(),
        }
    }

    pub fn config(&self) -> &GridConfig {
        self.cfg
    }

    pub fn decision(&mut self, state: &WorldState) -> Result<Decision, CheckError> {
        if let Some(d) = self.decisions.get(state) {
            return Ok(d.clone());
        }
        let engine = self.gov.engine(applicable_actions(state, self.cfg));
        let decision = decide(state, &engine, self.cfg)?;
        self.decisions.insert(state.clone(), decision.clone());
        Ok(decision)
    }

    /// All successor states of a non-terminal state under the decided
    /// action, one entry per distinct state. Branches are enumerated by
    /// coin-combination index (bit i of the index is the coin of the i-th
    /// active human, set = moves); combinations that coincide on the same
    /// state are merged by summing their probabilities, keeping
    /// first-occurrence order.
    pub fn successors(
        &mut self,
        state: &WorldState,
    ) -> Result<(Decision, Vec<(BigRational, WorldState)>), CheckError> {
        let decision = self.decision(state)?;
        let p = &self.cfg.move_probability;
        let stay = BigRational::one() - p;
        let active = state.active_humans().count();

        let mut merged: Vec<(BigRational, WorldState)> = Vec::new();
        for combo in 0u64..(1 << active) {
            let coins: Vec<bool> = (0..active).map(|i| combo & (1 << i) != 0).collect();
            let mut weight = BigRational::one();
            for &coin in &coins {
                weight *= if coin { p.clone() } else { stay.clone() };
            }
            let next = world_step(state, &decision.chosen, &coins, self.cfg)?;
            match merged.iter_mut().find(|(_, s)| *s == next) {
                Some((w, _)) => *w += weight,
                None => merged.push((weight, next)),
            }
        }
        Ok((decision, merged))
    }

    fn step_record(
        &mut self,
        state: &WorldState,
        decision: Option<&Decision>,
    ) -> TraceStep {
        TraceStep {
            world: state.clone(),
            percepts: percepts(state, self.cfg).into_iter().collect(),
            beliefs: decision.map(|d| d.engine.beliefs.clone()).unwrap_or_default(),
            action: decision.map(|d| d.chosen.clone()),
        }
    }
}

/// Enumerates every maximal execution of the scenario together with its
/// exact probability. Traces are produced depth-first with branches in
/// coin-combination order, so the enumeration order is canonical; the
/// probabilities sum to exactly 1.
pub fn explore_weighted(
    cfg: &GridConfig,
    gov: &GovernorSpec,
) -> Result<Vec<(Trace, BigRational)>, CheckError> {
    let mut explorer = Explorer::new(cfg, gov);
    let mut traces = Vec::new();
    let initial = WorldState::initial(cfg);

    // Explicit stack of (state, weight, prefix length marker) pairs would
    // need prefix copies anyway; recursion depth is bounded by the horizon.
    fn walk(
        explorer: &mut Explorer,
        state: &WorldState,
        weight: BigRational,
        prefix: &mut Trace,
        out: &mut Vec<(Trace, BigRational)>,
    ) -> Result<(), CheckError> {
        if is_terminal(state, explorer.config()) {
            prefix.push(explorer.step_record(state, None));
            out.push((prefix.clone(), weight));
            prefix.pop();
            return Ok(());
        }
        let (decision, successors) = explorer.successors(state)?;
        prefix.push(explorer.step_record(state, Some(&decision)));
        for (p, next) in successors {
            walk(explorer, &next, weight.clone() * p, prefix, out)?;
        }
        prefix.pop();
        Ok(())
    }

    let mut prefix = Vec::new();
    walk(
        &mut explorer,
        &initial,
        BigRational::one(),
        &mut prefix,
        &mut traces,
    )?;
    Ok(traces)
}

/// The set of maximal traces, complete and duplicate-free.
pub fn explore(cfg: &GridConfig, gov: &GovernorSpec) -> Result<Vec<Trace>, CheckError> {
    Ok(explore_weighted(cfg, gov)?
        .into_iter()
        .map(|(trace, _)| trace)
        .collect())
}
