use std::fmt;

use thiserror::Error;

/// A ground term inside a belief atom: a symbol, an integer, or a functor
/// application such as `danger(h1)` or `outcome(moveTo(3,2), human(hole))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Sym(String),
    Int(i64),
    App(String, Vec<Term>),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sym(s) => f.write_str(s),
            Term::Int(n) => write!(f, "{n}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite-trace temporal formula over belief atoms.
///
/// `B(ag, t)` holds at a trace position iff agent `ag` holds belief `t`
/// there; `G` ("always") quantifies over the rest of the trace. This is
/// deliberately the minimal fragment needed for safety properties: no
/// next/until operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom { agent: String, term: Term },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(agent: impl Into<String>, term: Term) -> Self {
        Formula::Atom {
            agent: agent.into(),
            term,
        }
    }

    /// Every agent name referenced by some atom, in first-appearance order.
    pub fn agents(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::Atom { agent, .. } => {
                    if !out.contains(&agent.as_str()) {
                        out.push(agent);
                    }
                }
                Formula::Not(inner) | Formula::Always(inner) => walk(inner, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

// Binding strength, loosest first: -> | & (!, G). Used when printing to
// re-insert only the parentheses the grammar needs.
fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, inner: &Formula, min: u8) -> fmt::Result {
            if strength(inner) < min {
                write!(f, "({inner})")
            } else {
                write!(f, "{inner}")
            }
        }
        match self {
            Formula::Atom { agent, term } => write!(f, "B({agent}, {term})"),
            Formula::Not(inner) => {
                f.write_str("!")?;
                wrap(f, inner, 3)
            }
            Formula::Always(inner) => {
                // G always parenthesises its argument; it reads better for
                // temporal scope and round-trips unambiguously.
                write!(f, "G({inner})")
            }
            // & and | parse left-associatively, so a same-strength right
            // operand needs parentheses to reparse with the same shape.
            Formula::And(a, b) => {
                wrap(f, a, 2)?;
                f.write_str(" & ")?;
                wrap(f, b, 3)
            }
            Formula::Or(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" | ")?;
                wrap(f, b, 2)
            }
            Formula::Implies(a, b) => {
                // -> is right-associative: the left operand needs parens
                // even when it is itself an implication.
                wrap(f, a, 1)?;
                f.write_str(" -> ")?;
                wrap(f, b, 0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {pos}: {message}")]
pub struct PropertyParseError {
    /// Byte offset into the formula text.
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, PropertyParseError>;

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(PropertyParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> PResult<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            self.fail(format!("expected `{}`", byte as char))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => return self.fail("expected identifier"),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .expect("identifier bytes are ASCII")
            .to_string())
    }

    fn integer(&mut self) -> PResult<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.fail("expected integer");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("integer bytes are ASCII")
            .parse()
            .or_else(|_| self.fail("integer out of range"))
    }

    fn term(&mut self) -> PResult<Term> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' => Ok(Term::Int(self.integer()?)),
            _ => {
                let name = self.ident()?;
                if self.eat(b'(') {
                    let mut args = Vec::new();
                    loop {
                        args.push(self.term()?);
                        self.skip_ws();
                        if self.eat(b',') {
                            continue;
                        }
                        self.expect(b')')?;
                        break;
                    }
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Sym(name))
                }
            }
        }
    }

    // implication := disjunction ('->' implication)?   (right-associative)
    fn implication(&mut self) -> PResult<Formula> {
        let left = self.disjunction()?;
        self.skip_ws();
        if self.peek() == Some(b'-') {
            if self.text.get(self.pos + 1).copied() != Some(b'>') {
                return self.fail("expected `->`");
            }
            self.pos += 2;
            let right = self.implication()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut left = self.conjunction()?;
        loop {
            self.skip_ws();
            if self.eat(b'|') {
                let right = self.conjunction()?;
                left = Formula::Or(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat(b'&') {
                let right = self.unary()?;
                left = Formula::And(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn unary(&mut self) -> PResult<Formula> {
        self.skip_ws();
        if self.eat(b'!') {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.eat(b'(') {
            let inner = self.implication()?;
            self.skip_ws();
            self.expect(b')')?;
            return Ok(inner);
        }
        let start = self.pos;
        let name = self.ident()?;
        match name.as_str() {
            "G" => Ok(Formula::Always(Box::new(self.unary()?))),
            "B" => {
                self.skip_ws();
                self.expect(b'(')?;
                self.skip_ws();
                let agent = self.ident()?;
                self.skip_ws();
                self.expect(b',')?;
                let term = self.term()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(Formula::Atom { agent, term })
            }
            _ => {
                self.pos = start;
                self.fail(format!("expected formula, found `{name}`"))
            }
        }
    }
}

/// Parses a single property formula.
///
/// Grammar, loosest binding first: `->` (right-associative), `|`, `&`,
/// prefix `!` and `G`, parentheses, and atoms `B(<agent>, <term>)`.
/// Agent names are not validated here; the checker resolves them.
pub fn parse_property(text: &str) -> Result<Formula, PropertyParseError> {
    let mut parser = Parser::new(text);
    let formula = parser.implication()?;
    parser.skip_ws();
    if parser.pos != parser.text.len() {
        return parser.fail("unexpected trailing input");
    }
    Ok(formula)
}

/// Parses a property file: one formula per line, blank lines and `#`
/// comments ignored. Errors carry the 1-based line number alongside the
/// in-line offset.
pub fn parse_property_file(text: &str) -> Result<Vec<Formula>, (usize, PropertyParseError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_property(line).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(agent: &str, term: Term) -> Formula {
        Formula::atom(agent, term)
    }

    fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    fn sym(name: &str) -> Term {
        Term::Sym(name.into())
    }

    #[test]
    fn parses_the_guarded_safety_shape() {
        let f = parse_property(
            "G((B(r,danger(h1)) & B(r,path_to(h1))) -> G(!B(r,h1(hole))))",
        )
        .unwrap();
        let expected = Formula::Always(Box::new(Formula::Implies(
            Box::new(Formula::And(
                Box::new(atom("r", app("danger", vec![sym("h1")]))),
                Box::new(atom("r", app("path_to", vec![sym("h1")]))),
            )),
            Box::new(Formula::Always(Box::new(Formula::Not(Box::new(atom(
                "r",
                app("h1", vec![sym("hole")]),
            )))))),
        )));
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_a_tautology() {
        // The parenthesis after G captures the whole implication.
        let f = parse_property("G(B(ce,sel(a1)) -> B(ce,sel(a1)))").unwrap();
        let sel = atom("ce", app("sel", vec![sym("a1")]));
        assert_eq!(
            f,
            Formula::Always(Box::new(Formula::Implies(
                Box::new(sel.clone()),
                Box::new(sel)
            )))
        );
    }

    #[test]
    fn unbalanced_parenthesis_errors_at_position() {
        let e = parse_property("G((B(r,p) & B(r,q))").unwrap_err();
        assert_eq!(e.pos, 19);
        assert!(e.message.contains(")"));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_property("B(a,x) -> B(a,y) -> B(a,z)").unwrap();
        match f {
            Formula::Implies(_, rhs) => assert!(matches!(*rhs, Formula::Implies(..))),
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let f = parse_property("B(a,x) | B(a,y) & B(a,z)").unwrap();
        match f {
            Formula::Or(_, rhs) => assert!(matches!(*rhs, Formula::And(..))),
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn nested_terms_and_integers_parse() {
        let f = parse_property("B(ce, outcome(moveTo(3,2), human(hole)))").unwrap();
        assert_eq!(
            f,
            atom(
                "ce",
                app(
                    "outcome",
                    vec![
                        app("moveTo", vec![Term::Int(3), Term::Int(2)]),
                        app("human", vec![sym("hole")]),
                    ]
                )
            )
        );
    }

    #[test]
    fn display_round_trips() {
        let texts = [
            "G((B(r, danger(h1)) & B(r, path_to(h1))) -> G(!B(r, h1(hole))))",
            "B(a, x) | B(a, y) & !B(a, z)",
            "(B(a, x) -> B(a, y)) -> B(a, z)",
            "G(!B(r, h2(hole)))",
        ];
        for text in texts {
            let f = parse_property(text).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_property(&printed).unwrap(), f, "through `{printed}`");
        }
    }

    #[test]
    fn property_file_skips_comments_and_reports_lines() {
        let file = "# safety\nG(!B(r, h2(hole)))\n\nB(r, danger(h1))\n";
        let formulas = parse_property_file(file).unwrap();
        assert_eq!(formulas.len(), 2);

        let bad = "B(r, ok)\nB(r,\n";
        let (line, _) = parse_property_file(bad).unwrap_err();
        assert_eq!(line, 2);
    }
}
