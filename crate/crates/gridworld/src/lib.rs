//! A finite grid scenario for exercising the consequence engine.
//!
//! The world is a small grid with a hole, a goal, one robot and any number
//! of humans. Each step the robot may move to any cell (it traverses the
//! straight line there); each human then independently moves one cell
//! towards the hole with the configured probability. Humans the robot
//! reaches or blocks are permanently diverted; humans that step onto the
//! hole fall. The robot's moves are filtered by the consequence engine
//! before a distance metric picks among the survivors, so ethical
//! behaviour (diverting endangered humans, staying clear of the hole)
//! emerges from outcome scores rather than hand-coded rules.
//!
//! Everything here is a pure function of its inputs, which is what lets
//! the checker crate enumerate all coin-flip branches exactly.

mod config;
mod geometry;
mod world;

pub use config::{parse_scenario, ConfigError, GridConfig, DEFAULT_HEIGHT, DEFAULT_WIDTH};
pub use geometry::{chebyshev, euclid_sq, supercover_line, Cell};
pub use world::{
    applicable_actions, decide, human_step_target, is_terminal, model_action, move_target,
    move_to, percepts, select_action, world_step, Decision, GridError, HumanState, HumanStatus,
    WorldState, MOVE_ACTION,
};
