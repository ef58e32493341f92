use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A class of actors in the environment, e.g. `human` or `robot`.
///
/// Comparison is by name. Individuals can be modelled as a class that
/// contains a single member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActorClass(String);

impl ActorClass {
    /// Panics on an empty name: an unnamed actor class cannot be referenced
    /// from a severity map or precedence order.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "actor class name must be non-empty");
        ActorClass(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ActorClass {
    fn from(name: &str) -> Self {
        ActorClass::new(name)
    }
}

/// A kind of outcome an action may cause, e.g. `safe`, `collision`, `hole`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeKind(String);

impl OutcomeKind {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "outcome kind name must be non-empty");
        OutcomeKind(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for OutcomeKind {
    fn from(name: &str) -> Self {
        OutcomeKind::new(name)
    }
}

/// A predicted outcome for one actor: "a human falls in the hole" is
/// `Outcome { actor: human, kind: hole }`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    pub actor: ActorClass,
    pub kind: OutcomeKind,
}

impl Outcome {
    pub fn new(actor: impl Into<ActorClass>, kind: impl Into<OutcomeKind>) -> Self {
        Outcome {
            actor: actor.into(),
            kind: kind.into(),
        }
    }
}

impl From<(&str, &str)> for Outcome {
    fn from((actor, kind): (&str, &str)) -> Self {
        Outcome::new(actor, kind)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.actor, self.kind)
    }
}

/// An action identifier: a name plus integer arguments, e.g. `moveTo(3, 2)`
/// or a bare `a1`. The pair uniquely identifies the action within one engine
/// invocation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId {
    pub name: String,
    pub args: Vec<i64>,
}

impl ActionId {
    pub fn new(name: impl Into<String>, args: Vec<i64>) -> Self {
        ActionId {
            name: name.into(),
            args,
        }
    }

    pub fn atom(name: impl Into<String>) -> Self {
        ActionId::new(name, Vec::new())
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            f.write_str(&self.name)
        } else {
            write!(f, "{}(", self.name)?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
    }
}

/// An action together with the multiset of outcomes the model predicts for
/// it. Duplicates matter: two humans colliding yields two entries, and both
/// count towards the severity sum. An empty list means the action is safe
/// for everyone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedAction {
    pub action: ActionId,
    pub outcomes: Vec<Outcome>,
}

impl AnnotatedAction {
    pub fn new(action: ActionId, outcomes: Vec<Outcome>) -> Self {
        AnnotatedAction { action, outcomes }
    }
}

/// Severity scores per outcome kind. Score 0 marks a harmless outcome; the
/// map must cover every kind that can appear in an annotation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeverityMap {
    entries: BTreeMap<OutcomeKind, u64>,
}

impl SeverityMap {
    pub fn new() -> Self {
        SeverityMap::default()
    }

    pub fn insert(&mut self, kind: impl Into<OutcomeKind>, score: u64) {
        self.entries.insert(kind.into(), score);
    }

    pub fn score(&self, kind: &OutcomeKind) -> Option<u64> {
        self.entries.get(kind).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OutcomeKind, u64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<K: Into<OutcomeKind>> FromIterator<(K, u64)> for SeverityMap {
    fn from_iter<I: IntoIterator<Item = (K, u64)>>(iter: I) -> Self {
        let mut map = SeverityMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

/// Actor classes ordered by ethical priority, highest first. Duplicates are
/// rejected; partial orders are not supported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precedence {
    order: Vec<ActorClass>,
}

impl Precedence {
    pub fn new(order: Vec<ActorClass>) -> Result<Self, crate::EngineError> {
        let mut seen = BTreeSet::new();
        for actor in &order {
            if !seen.insert(actor.clone()) {
                return Err(crate::EngineError::DuplicatePrecedence(actor.clone()));
            }
        }
        Ok(Precedence { order })
    }

    pub fn order(&self) -> &[ActorClass] {
        &self.order
    }
}

impl fmt::Display for Precedence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, actor) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" > ")?;
            }
            write!(f, "{actor}")?;
        }
        Ok(())
    }
}

/// A declarative fact perceived from the environment, e.g. `danger(h1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percept {
    pub name: String,
    pub args: Vec<String>,
}

impl Percept {
    pub fn new(name: impl Into<String>, args: Vec<String>) -> Self {
        Percept {
            name: name.into(),
            args,
        }
    }
}

impl fmt::Display for Percept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            f.write_str(&self.name)
        } else {
            write!(f, "{}({})", self.name, self.args.join(","))
        }
    }
}

/// A fact recorded inside the engine so its reasoning can be inspected:
/// which actions were selected, which outcomes were predicted, and any
/// percepts asserted by the environment. Belief sets are deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BeliefAtom {
    /// `sel(a)`: the engine selected action `a`.
    Selected(ActionId),
    /// `outcome(a, o)`: the model predicted outcome `o` for action `a`.
    Predicted(ActionId, Outcome),
    /// An environment percept.
    Percept(Percept),
}

impl fmt::Display for BeliefAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeliefAtom::Selected(a) => write!(f, "sel({a})"),
            BeliefAtom::Predicted(a, o) => {
                write!(f, "outcome({a}, {}({}))", o.actor, o.kind)
            }
            BeliefAtom::Percept(p) => write!(f, "{p}"),
        }
    }
}

/// The full engine state: names, the applicable action list, annotations,
/// the selected subset, the precedence order and severity map, plus the
/// recorded beliefs.
///
/// The environment model is not part of the state; it is passed to
/// [`EngineState::model_applicable_actions`] as a function, so the same
/// engine works against any environment that can predict outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineState {
    pub ce_name: String,
    pub agent_name: String,
    pub applicable: Vec<ActionId>,
    pub annotated: Vec<AnnotatedAction>,
    pub selected: BTreeSet<ActionId>,
    pub precedence: Precedence,
    pub severity: SeverityMap,
    pub beliefs: BTreeSet<BeliefAtom>,
}

impl EngineState {
    pub fn new(
        ce_name: impl Into<String>,
        agent_name: impl Into<String>,
        applicable: Vec<ActionId>,
        precedence: Precedence,
        severity: SeverityMap,
    ) -> Self {
        EngineState {
            ce_name: ce_name.into(),
            agent_name: agent_name.into(),
            applicable,
            annotated: Vec::new(),
            selected: BTreeSet::new(),
            precedence,
            severity,
            beliefs: BTreeSet::new(),
        }
    }
}
