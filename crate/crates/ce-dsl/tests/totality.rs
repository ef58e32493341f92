//! Both parsers must be total: arbitrary input yields a value or a
//! positioned error, never a panic. Plus structural round-trip properties.

use ce_dsl::{parse_governor, parse_property, serialize_governor, Formula, Term};
use proptest::prelude::*;

fn terms() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        "[a-z][a-z0-9_]{0,6}".prop_map(Term::Sym),
        (-999i64..999).prop_map(Term::Int),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        ("[a-z][a-z0-9_]{0,6}", proptest::collection::vec(inner, 1..=3))
            .prop_map(|(name, args)| Term::App(name, args))
    })
}

fn formulas() -> impl Strategy<Value = Formula> {
    let atom = ("[a-z][a-z0-9_]{0,4}", terms())
        .prop_map(|(agent, term)| Formula::Atom { agent, term });
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            inner.clone().prop_map(|f| Formula::Always(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner)
                .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn property_parser_never_panics(input in "\\PC*") {
        let _ = parse_property(&input);
    }

    #[test]
    fn property_parser_handles_arbitrary_bytes(input in proptest::collection::vec(any::<u8>(), 0..256)) {
        if let Ok(text) = std::str::from_utf8(&input) {
            let _ = parse_property(text);
        }
    }

    #[test]
    fn governor_parser_never_panics(input in "\\PC*") {
        let _ = parse_governor(&input);
    }

    #[test]
    fn printed_formulas_reparse_identically(f in formulas()) {
        let printed = f.to_string();
        let reparsed = parse_property(&printed).unwrap();
        prop_assert_eq!(reparsed, f);
    }

    #[test]
    fn governor_serialization_round_trips(
        name in "[a-z][a-z0-9_]{0,8}",
        agent in "[a-z][a-z0-9_]{0,8}",
        scores in proptest::collection::btree_map("[a-z][a-z0-9_]{0,8}", 0u64..1000, 1..6),
        chain in proptest::collection::btree_set("[a-z][a-z0-9_]{0,8}", 1..4),
    ) {
        let mut text = format!(":name: {name}\n:agent: {agent}\n:Outcome Scores:\n");
        for (kind, score) in &scores {
            text.push_str(&format!("{kind} = {score}\n"));
        }
        text.push_str(":Ethical Precedence:\n");
        let chain: Vec<String> = chain.into_iter().collect();
        text.push_str(&chain.join(" > "));
        text.push('\n');

        let spec = parse_governor(&text).unwrap();
        let canonical = serialize_governor(&spec);
        let respec = parse_governor(&canonical).unwrap();
        prop_assert_eq!(&respec, &spec);
        prop_assert_eq!(serialize_governor(&respec), canonical);
    }
}
