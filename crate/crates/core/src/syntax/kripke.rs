use std::collections::{BTreeMap, BTreeSet};

use super::parser::parse_atom;
use super::{ParseError, SourceSpan};
use crate::formula::{ConstraintAtom, Theory};
use crate::kripke::{KripkeStructure, StateLabel};

/// Reads the line-oriented structure format:
///
/// ```text
/// states: s0 s1
/// init: s0
/// initially: x = 0          # optional, constraints at instant 0
/// trans: s0 -> s1
/// trans: s1 -> s1
/// label s0: {p} {}
/// label s1: {p, q} {X x = x + 1; y <= x}
/// ```
pub fn parse_kripke(text: &str, theory: Theory) -> Result<KripkeStructure, ParseError> {
    let mut states: Vec<(String, SourceSpan)> = Vec::new();
    let mut init: Option<(String, SourceSpan)> = None;
    let mut initially = Vec::new();
    let mut transitions: Vec<(String, String, SourceSpan)> = Vec::new();
    let mut labels: BTreeMap<String, (StateLabel, SourceSpan)> = BTreeMap::new();

    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_start = offset;
        offset += raw.len();
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let content = content.trim_end();
        let indent = content.len() - content.trim_start().len();
        let content = content.trim_start();
        if content.is_empty() {
            continue;
        }
        let at = line_start + indent;
        let whole = SourceSpan::at(text, at, at + content.len());
        let Some(colon) = content.find(':') else {
            return Err(ParseError::new("expected `key: value`", whole));
        };
        let key = content[..colon].trim();
        let value = &content[colon + 1..];
        let value_at = at + colon + 1;

        if key == "states" {
            for (name, span) in words(text, value, value_at) {
                check_ident(name, span)?;
                if states.iter().any(|(s, _)| s == name) {
                    return Err(ParseError::new(format!("state `{name}` declared twice"), span));
                }
                states.push((name.to_string(), span));
            }
        } else if key == "init" {
            let ws = words(text, value, value_at);
            match ws.as_slice() {
                [(name, span)] => init = Some((name.to_string(), *span)),
                _ => return Err(ParseError::new("`init` takes exactly one state", whole)),
            }
        } else if key == "initially" {
            for (piece, piece_at) in split_keep_offset(value, ';', value_at) {
                if piece.trim().is_empty() {
                    continue;
                }
                initially.push(atom_at(text, piece, piece_at, theory)?);
            }
        } else if key == "trans" {
            let Some(arrow) = value.find("->") else {
                return Err(ParseError::new("expected `trans: a -> b`", whole));
            };
            let from = words(text, &value[..arrow], value_at);
            let to = words(text, &value[arrow + 2..], value_at + arrow + 2);
            match (from.as_slice(), to.as_slice()) {
                ([(a, _)], [(b, _)]) => {
                    transitions.push((a.to_string(), b.to_string(), whole));
                }
                _ => return Err(ParseError::new("expected `trans: a -> b`", whole)),
            }
        } else if let Some(name) = key.strip_prefix("label ") {
            let name = name.trim();
            let name_at = at + content.find(name).unwrap_or(0);
            let name_span = SourceSpan::at(text, name_at, name_at + name.len());
            check_ident(name, name_span)?;
            let label = parse_label(text, value, value_at, theory)?;
            if labels.insert(name.to_string(), (label, name_span)).is_some() {
                return Err(ParseError::new(
                    format!("state `{name}` labelled twice"),
                    name_span,
                ));
            }
        } else {
            return Err(ParseError::new(
                format!("unknown key `{key}`"),
                SourceSpan::at(text, at, at + colon),
            ));
        }
    }

    let end = SourceSpan::at(text, text.len(), text.len());
    if states.is_empty() {
        return Err(ParseError::new("structure declares no states", end));
    }
    let declared: BTreeSet<&str> = states.iter().map(|(s, _)| s.as_str()).collect();
    let Some((init, init_span)) = init else {
        return Err(ParseError::new("missing `init:` line", end));
    };
    if !declared.contains(init.as_str()) {
        return Err(ParseError::new(
            format!("undeclared state `{init}` in `init`"),
            init_span,
        ));
    }
    for (a, b, span) in &transitions {
        for s in [a, b] {
            if !declared.contains(s.as_str()) {
                return Err(ParseError::new(
                    format!("undeclared state `{s}` in transition"),
                    *span,
                ));
            }
        }
    }
    for (name, (_, span)) in &labels {
        if !declared.contains(name.as_str()) {
            return Err(ParseError::new(format!("label for undeclared state `{name}`"), *span));
        }
    }
    let mut label_map = BTreeMap::new();
    for (s, span) in &states {
        match labels.remove(s) {
            Some((l, _)) => {
                label_map.insert(s.clone(), l);
            }
            None => {
                return Err(ParseError::new(format!("state `{s}` has no label entry"), *span));
            }
        }
    }

    Ok(KripkeStructure {
        states: states.into_iter().map(|(s, _)| s).collect(),
        init,
        transitions: transitions.into_iter().map(|(a, b, _)| (a, b)).collect(),
        labels: label_map,
        initially,
    })
}

fn check_ident(name: &str, span: SourceSpan) -> Result<(), ParseError> {
    let mut chars = name.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(ParseError::new(format!("`{name}` is not a valid name"), span))
    }
}

/// Whitespace-separated words with absolute spans.
fn words<'t>(text: &str, value: &'t str, value_at: usize) -> Vec<(&'t str, SourceSpan)> {
    let mut out = Vec::new();
    let mut i = 0;
    for w in value.split_whitespace() {
        let rel = value[i..].find(w).unwrap() + i;
        i = rel + w.len();
        out.push((w, SourceSpan::at(text, value_at + rel, value_at + i)));
    }
    out
}

fn split_keep_offset(value: &str, sep: char, at: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in value.char_indices() {
        if c == sep {
            out.push((&value[start..i], at + start));
            start = i + 1;
        }
    }
    out.push((&value[start..], at + start));
    out
}

fn atom_at(text: &str, piece: &str, at: usize, theory: Theory) -> Result<ConstraintAtom, ParseError> {
    parse_atom(piece, theory).map_err(|e| ParseError {
        message: e.message,
        span: e.span.rebase(text, at),
    })
}

/// `{p, q} {atom; atom}`; the second group is optional.
fn parse_label(
    text: &str,
    value: &str,
    value_at: usize,
    theory: Theory,
) -> Result<StateLabel, ParseError> {
    let mut groups = Vec::new();
    let mut rest = value;
    let mut rest_at = value_at;
    loop {
        let trimmed = rest.trim_start();
        rest_at += rest.len() - trimmed.len();
        rest = trimmed;
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('{') {
            return Err(ParseError::new(
                "expected `{`",
                SourceSpan::at(text, rest_at, rest_at + 1),
            ));
        }
        let Some(close) = rest.find('}') else {
            return Err(ParseError::new(
                "unclosed `{`",
                SourceSpan::at(text, rest_at, rest_at + rest.len()),
            ));
        };
        groups.push((&rest[1..close], rest_at + 1));
        rest = &rest[close + 1..];
        rest_at += close + 1;
    }
    if groups.is_empty() || groups.len() > 2 {
        return Err(ParseError::new(
            "expected `{props} {constraints}`",
            SourceSpan::at(text, value_at, value_at + value.len()),
        ));
    }
    let mut props = BTreeSet::new();
    let (prop_text, prop_at) = groups[0];
    for (piece, piece_at) in split_keep_offset(prop_text, ',', prop_at) {
        let name = piece.trim();
        if name.is_empty() {
            continue;
        }
        let lead = piece.len() - piece.trim_start().len();
        let span = SourceSpan::at(text, piece_at + lead, piece_at + lead + name.len());
        check_ident(name, span)?;
        if super::parser::is_keyword(name) {
            return Err(ParseError::new(format!("`{name}` is a reserved word"), span));
        }
        props.insert(name.to_string());
    }
    let mut constraints = Vec::new();
    if let Some(&(atoms_text, atoms_at)) = groups.get(1) {
        for (piece, piece_at) in split_keep_offset(atoms_text, ';', atoms_at) {
            if piece.trim().is_empty() {
                continue;
            }
            constraints.push(atom_at(text, piece, piece_at, theory)?);
        }
    }
    Ok(StateLabel { props, constraints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{ArithTerm, Relation};

    const COUNTER: &str = "\
# two-state counter
states: s0 s1
init: s0
trans: s0 -> s1
trans: s1 -> s0
label s0: {p} {X x = x + 1}
label s1: {} {X x = x + 1}
";

    #[test]
    fn two_state_counter() {
        let m = parse_kripke(COUNTER, Theory::Dl).unwrap();
        assert_eq!(m.states, vec!["s0", "s1"]);
        assert_eq!(m.transitions.len(), 2);
        assert_eq!(m.init, "s0");
        let inc = ConstraintAtom::difference(
            ArithTerm::new("x", 1),
            ArithTerm::new("x", 0),
            Relation::Eq,
            1,
        );
        assert!(m.labels["s0"].props.contains("p"));
        assert_eq!(m.labels["s0"].constraints, vec![inc.clone()]);
        assert!(m.constraints().contains(&inc));
    }

    #[test]
    fn undeclared_state_is_named() {
        let src = COUNTER.replace("trans: s1 -> s0", "trans: s1 -> s9");
        let e = parse_kripke(&src, Theory::Dl).unwrap_err();
        assert!(e.message.contains("s9"), "{}", e.message);
        assert_eq!(e.span.line, 5);
    }

    #[test]
    fn missing_label() {
        let src = COUNTER.replace("label s1: {} {X x = x + 1}\n", "");
        let e = parse_kripke(&src, Theory::Dl).unwrap_err();
        assert!(e.message.contains("s1") && e.message.contains("label"));
    }

    #[test]
    fn empty_structure() {
        let e = parse_kripke("# nothing\n", Theory::Dl).unwrap_err();
        assert!(e.message.contains("no states"));
    }

    #[test]
    fn initial_constraints() {
        let src = format!("{COUNTER}initially: x = 0; y >= 2\n");
        let m = parse_kripke(&src, Theory::Dl).unwrap();
        assert_eq!(m.initially.len(), 2);
    }

    #[test]
    fn bad_constraint_span_is_absolute() {
        let src = COUNTER.replace("{X x = x + 1}\n", "{x + y + z = 1}\n");
        let e = parse_kripke(&src, Theory::Dl).unwrap_err();
        assert_eq!(e.span.line, 6);
        assert_eq!(&src[e.span.begin..e.span.end], "x + y + z = 1");
    }
}
