//! Text formats for the consequence engine.
//!
//! Two small languages live here:
//!
//! * governor files (`.gov`): name, governed agent, outcome scores and the
//!   actor precedence chain — see [`parse_governor`] for the exact layout;
//! * property formulas: boolean combinations of belief atoms with an
//!   "always" operator, one formula per line in a property file — see
//!   [`parse_property`].
//!
//! Both parsers are total: any input yields either a value or an error with
//! a position, never a panic.

mod governor;
mod property;

pub use governor::{parse_governor, serialize_governor, GovernorParseError, GovernorSpec};
pub use property::{parse_property, parse_property_file, Formula, PropertyParseError, Term};
