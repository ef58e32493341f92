use std::fmt;

use ce_core::{ActionId, BeliefAtom, EngineState, Outcome, Percept};
use thiserror::Error;

use crate::config::GridConfig;
use crate::geometry::{chebyshev, euclid_sq, supercover_line, Cell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HumanStatus {
    Active,
    /// Stepped onto the hole. Terminal; the position stays on the hole.
    Fallen,
    /// Diverted by the robot. Terminal; the human stops moving.
    Rescued,
}

impl fmt::Display for HumanStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HumanStatus::Active => "active",
            HumanStatus::Fallen => "fallen",
            HumanStatus::Rescued => "rescued",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HumanState {
    pub id: String,
    pub pos: Cell,
    pub status: HumanStatus,
}

/// One node of the explored state space: robot position, the humans, and
/// the step counter. Percepts are derived from it on demand, never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldState {
    pub robot: Cell,
    pub humans: Vec<HumanState>,
    pub step: u32,
}

impl WorldState {
    pub fn initial(cfg: &GridConfig) -> Self {
        WorldState {
            robot: cfg.robot_start,
            humans: cfg
                .humans
                .iter()
                .map(|(id, pos)| HumanState {
                    id: id.clone(),
                    pos: *pos,
                    status: HumanStatus::Active,
                })
                .collect(),
            step: 0,
        }
    }

    pub fn active_humans(&self) -> impl Iterator<Item = &HumanState> {
        self.humans.iter().filter(|h| h.status == HumanStatus::Active)
    }

    pub fn human(&self, id: &str) -> Option<&HumanState> {
        self.humans.iter().find(|h| h.id == id)
    }
}

impl fmt::Display for WorldState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: robot={}", self.step, self.robot)?;
        for h in &self.humans {
            write!(f, " {}={}[{}]", h.id, h.pos, h.status)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("action {0} is not a moveTo action")]
    NotAMove(ActionId),
    #[error("moveTo target {0} is out of bounds")]
    OutOfBounds(Cell),
    #[error("engine error: {0}")]
    Engine(#[from] ce_core::EngineError),
}

pub const MOVE_ACTION: &str = "moveTo";

pub fn move_to(cell: Cell) -> ActionId {
    ActionId::new(MOVE_ACTION, vec![cell.x, cell.y])
}

pub fn move_target(action: &ActionId) -> Result<Cell, GridError> {
    if action.name != MOVE_ACTION || action.args.len() != 2 {
        return Err(GridError::NotAMove(action.clone()));
    }
    Ok(Cell::new(action.args[0], action.args[1]))
}

/// All actions available to the robot: one `moveTo(x, y)` per in-bounds
/// cell, row-major (y outer, x inner), staying put included.
pub fn applicable_actions(_state: &WorldState, cfg: &GridConfig) -> Vec<ActionId> {
    let mut out = Vec::with_capacity((cfg.width * cfg.height) as usize);
    for y in 0..cfg.height {
        for x in 0..cfg.width {
            out.push(move_to(Cell::new(x, y)));
        }
    }
    out
}

/// The robot's path for a move, cut short at the hole: cells after the
/// first hole cell are unreachable because the robot would fall there, so
/// they play no part in collision or diversion reasoning.
fn traversal(from: Cell, to: Cell, hole: Cell) -> (Vec<Cell>, bool) {
    let full = supercover_line(from, to);
    match full.iter().position(|&c| c == hole) {
        Some(idx) => {
            let mut prefix = full;
            prefix.truncate(idx + 1);
            (prefix, true)
        }
        None => (full, false),
    }
}

/// Predicts the outcomes of one move, mirroring the world dynamics:
///
/// * crossing the hole costs the robot (`<robot, hole>`), and the move ends
///   there, so nothing beyond the hole is reached;
/// * every active human on the reachable part of the path is hit
///   (`<robot, collision>` + `<human, collision>` per human) and thereby
///   diverted;
/// * every active human next to the hole (Chebyshev distance 1) is
///   predicted to fall (`<human, hole>`) unless the move diverts them:
///   touched on the reachable path, or the robot arrives (no hole on the
///   way) within Chebyshev distance 1 of them.
///
/// Multiset semantics: one entry per affected human.
pub fn model_action(
    state: &WorldState,
    action: &ActionId,
    cfg: &GridConfig,
) -> Result<Vec<Outcome>, GridError> {
    let target = move_target(action)?;
    if !cfg.in_bounds(target) {
        return Err(GridError::OutOfBounds(target));
    }
    let (path, hole_hit) = traversal(state.robot, target, cfg.hole);

    let mut outcomes = Vec::new();
    if hole_hit {
        outcomes.push(Outcome::new("robot", "hole"));
    }
    for h in state.active_humans() {
        if path.contains(&h.pos) {
            outcomes.push(Outcome::new("robot", "collision"));
            outcomes.push(Outcome::new("human", "collision"));
        }
    }
    for h in state.active_humans() {
        if chebyshev(h.pos, cfg.hole) != 1 {
            continue;
        }
        let diverted = path.contains(&h.pos)
            || (!hole_hit && chebyshev(target, h.pos) <= 1);
        if !diverted {
            outcomes.push(Outcome::new("human", "hole"));
        }
    }
    Ok(outcomes)
}

/// Percepts asserted by the environment for the robot:
///
/// * `danger(h)` — human `h` is active and exactly one cell (Chebyshev)
///   from the hole;
/// * `path_to(h)` — `h` is active and the straight line from the robot to
///   `h` does not touch the hole;
/// * `h(hole)` — `h` has fallen.
pub fn percepts(state: &WorldState, cfg: &GridConfig) -> Vec<Percept> {
    let mut out = Vec::new();
    for h in &state.humans {
        match h.status {
            HumanStatus::Active => {
                if chebyshev(h.pos, cfg.hole) == 1 {
                    out.push(Percept::new("danger", vec![h.id.clone()]));
                }
                if !supercover_line(state.robot, h.pos).contains(&cfg.hole) {
                    out.push(Percept::new("path_to", vec![h.id.clone()]));
                }
            }
            HumanStatus::Fallen => {
                out.push(Percept::new(h.id.clone(), vec!["hole".to_string()]));
            }
            HumanStatus::Rescued => {}
        }
    }
    out
}

/// Where an active human steps next: the in-bounds 8-neighbourhood cell
/// minimising Euclidean distance to the hole, ties broken by smaller x,
/// then smaller y. Panics when called for a non-active human.
pub fn human_step_target(h: &HumanState, cfg: &GridConfig) -> Cell {
    assert_eq!(
        h.status,
        HumanStatus::Active,
        "step target queried for non-active human {}",
        h.id
    );
    let mut best: Option<(i64, Cell)> = None;
    // x-major loop order implements the tie-break directly.
    for dx in -1..=1 {
        for dy in -1..=1 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let cell = Cell::new(h.pos.x + dx, h.pos.y + dy);
            if !cfg.in_bounds(cell) {
                continue;
            }
            let d = euclid_sq(cell, cfg.hole);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, cell));
            }
        }
    }
    best.expect("a positive-size grid has at least one neighbour").1
}

/// Advances the world by one step: the robot executes its move, then each
/// active human acts in sequence order.
///
/// A human is rescued (permanently diverted) when the robot's move touches
/// them: crossed on the reachable path, or — provided the robot survived
/// the move — it ends next to them (Chebyshev distance 1) or on the cell
/// they were about to step to. Otherwise the human moves exactly when its
/// coin is true, falling if the step target is the hole.
///
/// `coins` supplies one boolean per human that was active on entry, in
/// sequence order; a length mismatch panics.
pub fn world_step(
    state: &WorldState,
    action: &ActionId,
    coins: &[bool],
    cfg: &GridConfig,
) -> Result<WorldState, GridError> {
    let target = move_target(action)?;
    if !cfg.in_bounds(target) {
        return Err(GridError::OutOfBounds(target));
    }
    let (path, hole_hit) = traversal(state.robot, target, cfg.hole);
    let arrived = !hole_hit;

    let active = state.active_humans().count();
    assert_eq!(
        coins.len(),
        active,
        "expected {active} coins, got {}",
        coins.len()
    );

    let mut next = state.clone();
    next.robot = target;
    next.step += 1;

    let mut coin_iter = coins.iter().copied();
    for h in next.humans.iter_mut() {
        if h.status != HumanStatus::Active {
            continue;
        }
        let coin = coin_iter.next().expect("arity checked above");
        let step_target = human_step_target(h, cfg);
        let rescued = path.contains(&h.pos)
            || (arrived && (chebyshev(target, h.pos) <= 1 || target == step_target));
        if rescued {
            h.status = HumanStatus::Rescued;
        } else if coin {
            h.pos = step_target;
            if h.pos == cfg.hole {
                h.status = HumanStatus::Fallen;
            }
        }
    }
    Ok(next)
}

/// A run ends when the robot stands on the goal and no human is still
/// active, or when the step horizon is reached.
pub fn is_terminal(state: &WorldState, cfg: &GridConfig) -> bool {
    if state.step >= cfg.horizon {
        return true;
    }
    state.robot == cfg.goal && state.active_humans().next().is_none()
}

/// One governed decision: the engine annotations, the selected set, and the
/// action the distance metric picked from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub engine: EngineState,
    pub chosen: ActionId,
}

impl Decision {
    pub fn beliefs(&self) -> &std::collections::BTreeSet<BeliefAtom> {
        &self.engine.beliefs
    }
}

/// Runs the full selection pipeline for one step: model every applicable
/// action, let the engine filter to the most ethical subset, then pick the
/// selected action whose target is closest (Euclidean) to the goal, ties
/// broken row-major (smaller y, then smaller x).
///
/// `engine` is the per-step engine instance; its applicable set should be
/// [`applicable_actions`] for this grid.
pub fn decide(
    state: &WorldState,
    engine: &EngineState,
    cfg: &GridConfig,
) -> Result<Decision, GridError> {
    let engine = engine.model_applicable_actions(|action| {
        model_action(state, action, cfg).expect("applicable actions are in bounds")
    })?;
    let engine = engine.evaluate_outcomes()?;

    let chosen = engine
        .selected
        .iter()
        .map(|action| {
            let target = move_target(action).expect("selected actions are moves");
            (euclid_sq(target, cfg.goal), target.y, target.x, action)
        })
        .min()
        .map(|(_, _, _, action)| action.clone())
        .expect("selection is never empty for a non-empty grid");
    Ok(Decision { engine, chosen })
}

/// The selectAction entry point: engine filter plus distance metric.
pub fn select_action(
    state: &WorldState,
    engine: &EngineState,
    cfg: &GridConfig,
) -> Result<ActionId, GridError> {
    Ok(decide(state, engine, cfg)?.chosen)
}
