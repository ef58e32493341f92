use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::Cell;

/// Scenario parameters: grid size, the hole and goal cells, where the robot
/// and the humans start, how likely each human is to move per step, and the
/// step horizon that bounds every run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub width: i64,
    pub height: i64,
    pub hole: Cell,
    pub goal: Cell,
    pub robot_start: Cell,
    /// (id, start cell) in file order; the order fixes the per-step update
    /// sequence and the coin order.
    pub humans: Vec<(String, Cell)>,
    pub move_probability: BigRational,
    pub horizon: u32,
}

pub const DEFAULT_WIDTH: i64 = 5;
pub const DEFAULT_HEIGHT: i64 = 5;
pub const DEFAULT_HORIZON: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn perr(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

impl GridConfig {
    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.x < self.width && cell.y >= 0 && cell.y < self.height
    }

    /// Checks the structural invariants: everything in bounds, hole and goal
    /// distinct, start cells pairwise distinct and off the hole,
    /// probability within [0, 1].
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Invalid(m));
        if self.width < 1 || self.height < 1 {
            return fail(format!("grid {}x{} is empty", self.width, self.height));
        }
        if self.horizon < 1 {
            return fail("horizon must be at least 1".into());
        }
        for (name, cell) in [
            ("hole", self.hole),
            ("goal", self.goal),
            ("robot", self.robot_start),
        ] {
            if !self.in_bounds(cell) {
                return fail(format!("{name} cell {cell} is out of bounds"));
            }
        }
        if self.hole == self.goal {
            return fail(format!("hole and goal coincide at {}", self.hole));
        }
        let mut starts = vec![("robot".to_string(), self.robot_start)];
        for (id, cell) in &self.humans {
            if !self.in_bounds(*cell) {
                return fail(format!("human {id} starts out of bounds at {cell}"));
            }
            starts.push((format!("human {id}"), *cell));
        }
        for (i, (name_a, a)) in starts.iter().enumerate() {
            if *a == self.hole {
                return fail(format!("{name_a} starts on the hole"));
            }
            for (name_b, b) in &starts[i + 1..] {
                if a == b {
                    return fail(format!("{name_a} and {name_b} both start at {a}"));
                }
            }
        }
        if self.move_probability < BigRational::zero()
            || self.move_probability > BigRational::one()
        {
            return fail(format!(
                "move probability {} is outside [0, 1]",
                self.move_probability
            ));
        }
        Ok(())
    }
}

fn parse_cell(line: usize, text: &str) -> Result<Cell, ConfigError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(line, format!("expected cell `(x,y)`, found `{text}`")))?;
    let (x, y) = inner
        .split_once(',')
        .ok_or_else(|| perr(line, format!("expected cell `(x,y)`, found `{text}`")))?;
    let x = x
        .trim()
        .parse()
        .map_err(|_| perr(line, format!("invalid x coordinate `{}`", x.trim())))?;
    let y = y
        .trim()
        .parse()
        .map_err(|_| perr(line, format!("invalid y coordinate `{}`", y.trim())))?;
    Ok(Cell::new(x, y))
}

fn parse_probability(line: usize, text: &str) -> Result<BigRational, ConfigError> {
    let bad = || perr(line, format!("invalid probability `{text}`"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(perr(line, "probability denominator is zero"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = whole.parse().map_err(|_| bad())?;
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(whole * &scale + digits, scale));
    }
    let value: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(value))
}

/// Parses a scenario file: `key = value` lines with `#` comments. Keys are
/// `width`, `height`, `hole`, `goal`, `robot`, `human.<id>`,
/// `move_probability` and `horizon`; cells are written `(x,y)` and the
/// probability accepts `p/q`, decimal or integer forms. `hole`, `goal` and
/// `robot` are required, the rest default to a 5x5 grid, probability 1/2
/// and horizon 20. Humans keep file order.
pub fn parse_scenario(text: &str) -> Result<GridConfig, ConfigError> {
    let mut width = None;
    let mut height = None;
    let mut hole = None;
    let mut goal = None;
    let mut robot = None;
    let mut humans: Vec<(String, Cell)> = Vec::new();
    let mut move_probability = None;
    let mut horizon = None;

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(n, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        let value = value.trim();

        fn set<T>(
            n: usize,
            key: &str,
            slot: &mut Option<T>,
            value: T,
        ) -> Result<(), ConfigError> {
            if slot.is_some() {
                return Err(perr(n, format!("duplicate key `{key}`")));
            }
            *slot = Some(value);
            Ok(())
        }

        match key {
            "width" => set(n, key, &mut width, parse_dim(n, key, value)?)?,
            "height" => set(n, key, &mut height, parse_dim(n, key, value)?)?,
            "hole" => set(n, key, &mut hole, parse_cell(n, value)?)?,
            "goal" => set(n, key, &mut goal, parse_cell(n, value)?)?,
            "robot" => set(n, key, &mut robot, parse_cell(n, value)?)?,
            "move_probability" => {
                set(n, key, &mut move_probability, parse_probability(n, value)?)?
            }
            "horizon" => {
                let h: u32 = value
                    .parse()
                    .map_err(|_| perr(n, format!("invalid horizon `{value}`")))?;
                set(n, key, &mut horizon, h)?;
            }
            _ => match key.strip_prefix("human.") {
                Some(id) if !id.is_empty() => {
                    if humans.iter().any(|(other, _)| other == id) {
                        return Err(perr(n, format!("duplicate human id `{id}`")));
                    }
                    humans.push((id.to_string(), parse_cell(n, value)?));
                }
                _ => return Err(perr(n, format!("unknown key `{key}`"))),
            },
        }
    }

    let lines = text.lines().count() + 1;
    let require = |slot: Option<Cell>, key: &str| {
        slot.ok_or_else(|| perr(lines, format!("missing required key `{key}`")))
    };
    let config = GridConfig {
        width: width.unwrap_or(DEFAULT_WIDTH),
        height: height.unwrap_or(DEFAULT_HEIGHT),
        hole: require(hole, "hole")?,
        goal: require(goal, "goal")?,
        robot_start: require(robot, "robot")?,
        humans,
        move_probability: move_probability
            .unwrap_or_else(|| BigRational::new(BigInt::one(), BigInt::from(2))),
        horizon: horizon.unwrap_or(DEFAULT_HORIZON),
    };
    config.validate()?;
    Ok(config)
}

fn parse_dim(line: usize, key: &str, value: &str) -> Result<i64, ConfigError> {
    let v: i64 = value
        .parse()
        .map_err(|_| perr(line, format!("invalid {key} `{value}`")))?;
    if v < 1 {
        return Err(perr(line, format!("{key} must be positive")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENARIO: &str = "\
# two humans, hole in the middle
width = 5
height = 5
hole = (2,2)
goal = (4,2)
robot = (0,2)
human.h1 = (0,1)
human.h2 = (0,3)
move_probability = 1/2
horizon = 20
";

    #[test]
    fn parses_a_full_scenario() {
        let cfg = parse_scenario(SCENARIO).unwrap();
        assert_eq!(cfg.width, 5);
        assert_eq!(cfg.hole, Cell::new(2, 2));
        assert_eq!(
            cfg.humans,
            vec![
                ("h1".to_string(), Cell::new(0, 1)),
                ("h2".to_string(), Cell::new(0, 3)),
            ]
        );
        assert_eq!(cfg.move_probability, BigRational::new(1.into(), 2.into()));
        assert_eq!(cfg.horizon, 20);
    }

    #[test]
    fn defaults_fill_optional_keys() {
        let cfg = parse_scenario("hole = (2,2)\ngoal = (4,2)\nrobot = (0,2)\n").unwrap();
        assert_eq!((cfg.width, cfg.height), (5, 5));
        assert_eq!(cfg.horizon, DEFAULT_HORIZON);
        assert_eq!(cfg.move_probability, BigRational::new(1.into(), 2.into()));
        assert!(cfg.humans.is_empty());
    }

    #[test]
    fn decimal_probability_is_exact() {
        let cfg =
            parse_scenario("hole = (2,2)\ngoal = (4,2)\nrobot = (0,2)\nmove_probability = 0.5\n")
                .unwrap();
        assert_eq!(cfg.move_probability, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn missing_required_key_is_reported() {
        let e = parse_scenario("hole = (2,2)\ngoal = (4,2)\n").unwrap_err();
        assert!(e.to_string().contains("robot"), "{e}");
    }

    #[test]
    fn hole_equal_goal_is_rejected() {
        let e = parse_scenario("hole = (2,2)\ngoal = (2,2)\nrobot = (0,2)\n").unwrap_err();
        assert!(e.to_string().contains("coincide"), "{e}");
    }

    #[test]
    fn start_on_hole_is_rejected() {
        let e =
            parse_scenario("hole = (2,2)\ngoal = (4,2)\nrobot = (0,2)\nhuman.h1 = (2,2)\n")
                .unwrap_err();
        assert!(e.to_string().contains("hole"), "{e}");
    }

    #[test]
    fn coinciding_starts_are_rejected() {
        let e = parse_scenario(
            "hole = (2,2)\ngoal = (4,2)\nrobot = (0,2)\nhuman.h1 = (0,2)\n",
        )
        .unwrap_err();
        assert!(e.to_string().contains("both start"), "{e}");
    }

    #[test]
    fn out_of_bounds_cells_are_rejected() {
        let e = parse_scenario("hole = (2,2)\ngoal = (5,2)\nrobot = (0,2)\n").unwrap_err();
        assert!(e.to_string().contains("out of bounds"), "{e}");
    }

    #[test]
    fn probability_above_one_is_rejected() {
        let e = parse_scenario(
            "hole = (2,2)\ngoal = (4,2)\nrobot = (0,2)\nmove_probability = 3/2\n",
        )
        .unwrap_err();
        assert!(e.to_string().contains("outside"), "{e}");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let e = parse_scenario("hole = (2,2)\nhole = (1,1)\ngoal = (4,2)\nrobot = (0,2)\n")
            .unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }
}
