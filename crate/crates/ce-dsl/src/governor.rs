use std::fmt::Write as _;

use ce_core::{ActionId, ActorClass, EngineState, Precedence, SeverityMap};
use thiserror::Error;

/// A parsed governor file: who it governs, how outcomes are scored and
/// which actor class takes priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GovernorSpec {
    pub name: String,
    pub agent: String,
    pub severity: SeverityMap,
    pub precedence: Precedence,
}

impl GovernorSpec {
    /// Instantiates a fresh engine for one selection round over the given
    /// applicable actions.
    pub fn engine(&self, applicable: Vec<ActionId>) -> EngineState {
        EngineState::new(
            self.name.clone(),
            self.agent.clone(),
            applicable,
            self.precedence.clone(),
            self.severity.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct GovernorParseError {
    /// 1-based line number; points past the last line for missing sections.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> GovernorParseError {
    GovernorParseError {
        line,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().unwrap().is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Lines that carry content: everything except blanks and `#` comments.
struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    end_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let end_line = text.lines().count() + 1;
        Lines {
            items,
            pos: 0,
            end_line,
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }
}

fn expect_tagged<'a>(
    lines: &mut Lines<'a>,
    tag: &str,
) -> Result<(usize, &'a str), GovernorParseError> {
    match lines.next() {
        None => Err(err(lines.end_line, format!("missing `{tag}` line"))),
        Some((n, line)) => match line.strip_prefix(tag) {
            Some(rest) => Ok((n, rest.trim())),
            None => Err(err(n, format!("expected `{tag}`, found `{line}`"))),
        },
    }
}

/// Parses a governor file. The layout is fixed:
///
/// ```text
/// :name: ethical_g
/// :agent: robot
///
/// :Outcome Scores:
///
/// safe = 0
/// collision = 4
/// hole = 10
///
/// :Ethical Precedence:
///
/// human > robot
/// ```
///
/// Blank lines and `#` comments are insignificant. Scores must be
/// non-negative integers, outcome kinds must be unique, and the precedence
/// chain must list distinct actor classes.
pub fn parse_governor(text: &str) -> Result<GovernorSpec, GovernorParseError> {
    let mut lines = Lines::new(text);

    let (name_line, name) = expect_tagged(&mut lines, ":name:")?;
    if !is_ident(name) {
        return Err(err(name_line, format!("invalid name `{name}`")));
    }
    let (agent_line, agent) = expect_tagged(&mut lines, ":agent:")?;
    if !is_ident(agent) {
        return Err(err(agent_line, format!("invalid agent name `{agent}`")));
    }

    match lines.next() {
        None => return Err(err(lines.end_line, "missing `:Outcome Scores:` section")),
        Some((_, ":Outcome Scores:")) => {}
        Some((n, line)) => {
            return Err(err(n, format!("expected `:Outcome Scores:`, found `{line}`")));
        }
    }

    let mut severity = SeverityMap::new();
    loop {
        match lines.peek() {
            None => {
                return Err(err(lines.end_line, "missing `:Ethical Precedence:` section"));
            }
            Some((_, ":Ethical Precedence:")) => {
                lines.next();
                break;
            }
            Some((n, line)) => {
                lines.next();
                let (kind, value) = line
                    .split_once('=')
                    .ok_or_else(|| err(n, format!("expected `<kind> = <score>`, found `{line}`")))?;
                let kind = kind.trim();
                let value = value.trim();
                if !is_ident(kind) {
                    return Err(err(n, format!("invalid outcome kind `{kind}`")));
                }
                if value.starts_with('-') {
                    return Err(err(n, "score must be non-negative"));
                }
                let score: u64 = value
                    .parse()
                    .map_err(|_| err(n, format!("invalid score `{value}`")))?;
                if severity.score(&kind.into()).is_some() {
                    return Err(err(n, format!("duplicate outcome kind `{kind}`")));
                }
                severity.insert(kind, score);
            }
        }
    }

    let (chain_line, chain) = match lines.next() {
        None => return Err(err(lines.end_line, "missing precedence chain")),
        Some(item) => item,
    };
    let mut order = Vec::new();
    for part in chain.split('>') {
        let class = part.trim();
        if !is_ident(class) {
            return Err(err(
                chain_line,
                format!("invalid actor class `{class}` in precedence chain"),
            ));
        }
        order.push(ActorClass::new(class));
    }
    let precedence = Precedence::new(order)
        .map_err(|e| err(chain_line, e.to_string()))?;

    if let Some((n, line)) = lines.next() {
        return Err(err(n, format!("unexpected trailing content `{line}`")));
    }

    Ok(GovernorSpec {
        name: name.to_string(),
        agent: agent.to_string(),
        severity,
        precedence,
    })
}

/// Renders a spec in the canonical layout accepted by [`parse_governor`].
/// Outcome scores are emitted in lexicographic kind order, so the output is
/// stable regardless of how the spec was built; `parse(serialize(s)) == s`.
pub fn serialize_governor(spec: &GovernorSpec) -> String {
    let mut out = String::new();
    writeln!(out, ":name: {}", spec.name).unwrap();
    writeln!(out, ":agent: {}", spec.agent).unwrap();
    out.push('\n');
    out.push_str(":Outcome Scores:\n\n");
    for (kind, score) in spec.severity.iter() {
        writeln!(out, "{kind} = {score}").unwrap();
    }
    out.push('\n');
    out.push_str(":Ethical Precedence:\n\n");
    writeln!(out, "{}", spec.precedence).unwrap();
    out
}
