//! Line-oriented text formats for atom-level and concrete families.
//!
//! ```text
//! # comment
//! universe 7
//! empty
//! 2
//! 1 4 H
//! ```
//!
//! Concrete families use the header `ground <n>` and members drawn from
//! `1..=n` (no `H` token).

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};
use crate::family::{Family, Member, MAX_ATOMS};
use crate::saturation::ConcreteFamily;

/// Largest ground set a concrete family file may declare.
pub const MAX_GROUND: u32 = 63;

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    keyword: &'static str,
    limit: u32,
) -> Result<(usize, u32), ParseError> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| err(0, ParseErrorKind::MissingHeader(keyword)))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(err(no, ParseErrorKind::MissingHeader(keyword)));
    }
    let count = match (toks.next(), toks.next()) {
        (Some(t), None) => t
            .parse::<u32>()
            .map_err(|_| err(no, ParseErrorKind::BadHeader(line.to_string())))?,
        _ => return Err(err(no, ParseErrorKind::BadHeader(line.to_string()))),
    };
    if count > limit {
        return Err(err(no, ParseErrorKind::UniverseTooLarge(count, limit)));
    }
    Ok((no, count))
}

/// Parses one member line into `(mask, has_h)`.
fn parse_member_line(
    no: usize,
    line: &str,
    max: u32,
    allow_h: bool,
) -> Result<(u64, bool), ParseError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.contains(&"empty") {
        if toks.len() > 1 {
            return Err(err(no, ParseErrorKind::EmptyCombined));
        }
        return Ok((0, false));
    }
    let mut mask = 0u64;
    let mut has_h = false;
    for tok in toks {
        if tok == "H" && allow_h {
            if has_h {
                return Err(err(no, ParseErrorKind::RepeatedToken(tok.into())));
            }
            has_h = true;
            continue;
        }
        let a: u64 = tok
            .parse()
            .map_err(|_| err(no, ParseErrorKind::BadToken(tok.into())))?;
        if a == 0 || a > max as u64 {
            return Err(err(no, ParseErrorKind::AtomOutOfRange { atom: a, max }));
        }
        let bit = 1u64 << (a - 1);
        if mask & bit != 0 {
            return Err(err(no, ParseErrorKind::RepeatedToken(tok.into())));
        }
        mask |= bit;
    }
    Ok((mask, has_h))
}

pub fn parse_family(text: &str) -> Result<Family, ParseError> {
    let mut lines = content_lines(text);
    let (_, m) = parse_header(&mut lines, "universe", MAX_ATOMS)?;
    let mut seen = HashSet::new();
    let mut members = Vec::new();
    for (no, line) in lines {
        let (mask, large) = parse_member_line(no, line, m, true)?;
        let x = Member { mask, large };
        if !seen.insert(x) {
            return Err(err(no, ParseErrorKind::DuplicateMember));
        }
        members.push(x);
    }
    // Range and duplicates were checked above.
    Ok(Family::new(m, members).expect("validated members"))
}

pub fn serialize_family(f: &Family) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "universe {}", f.m());
    for x in f.members() {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn parse_concrete(text: &str) -> Result<ConcreteFamily, ParseError> {
    let mut lines = content_lines(text);
    let (_, n) = parse_header(&mut lines, "ground", MAX_GROUND)?;
    let mut seen = HashSet::new();
    let mut members = Vec::new();
    for (no, line) in lines {
        let (mask, _) = parse_member_line(no, line, n, false)?;
        if !seen.insert(mask) {
            return Err(err(no, ParseErrorKind::DuplicateMember));
        }
        members.push(mask);
    }
    Ok(ConcreteFamily::new(n, members).expect("validated members"))
}

pub fn serialize_concrete(c: &ConcreteFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ground {}", c.n());
    for &s in c.members() {
        if s == 0 {
            out.push_str("empty\n");
            continue;
        }
        let elems: Vec<String> = (0..64)
            .filter(|b| s >> b & 1 == 1)
            .map(|b| (b + 1).to_string())
            .collect();
        out.push_str(&elems.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let f = parse_family("universe 1\nempty\n1 H\n").unwrap();
        assert_eq!(f.m(), 1);
        assert_eq!(f.members(), &[Member::EMPTY, Member::large(1)]);

        let f = parse_family("# seven\nuniverse 7\n3 5 7 H\n").unwrap();
        assert_eq!(f.members(), &[Member::from_atoms(&[3, 5, 7], true)]);

        let f = parse_family("universe 0\nH\n").unwrap();
        assert_eq!(f.members(), &[Member::large(0)]);
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let e = parse_family("universe 2\n3\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(
            e.kind,
            ParseErrorKind::AtomOutOfRange { atom: 3, max: 2 }
        ));

        let e = parse_family("universe 2\n1\n\n# c\n1\n").unwrap_err();
        assert_eq!((e.line, e.kind), (5, ParseErrorKind::DuplicateMember));

        let e = parse_family("1 2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingHeader("universe"));
        assert_eq!(
            parse_family("").unwrap_err().kind,
            ParseErrorKind::MissingHeader("universe")
        );

        let e = parse_family("universe 3\n1 x\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadToken("x".into()));
        let e = parse_family("universe 3\nempty H\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyCombined);
        let e = parse_family("universe 3\n1 H H\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::RepeatedToken("H".into()));
        let e = parse_family("universe 63\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UniverseTooLarge(63, 62));
        let e = parse_family("universe seven\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadHeader(_)));
    }

    #[test]
    fn serialize_is_canonical() {
        let f = parse_family("universe 3\n1 2 H\n2\nempty\n").unwrap();
        assert_eq!(serialize_family(&f), "universe 3\nempty\n2\n1 2 H\n");
    }

    #[test]
    fn concrete_format() {
        let c = parse_concrete("ground 4\nempty\n1 2 3 4\n").unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(c.members(), &[0, 0b1111]);
        assert_eq!(serialize_concrete(&c), "ground 4\nempty\n1 2 3 4\n");
        assert!(parse_concrete("ground 2\nH\n").is_err());
    }

    fn arb_family() -> impl Strategy<Value = Family> {
        (0u32..=8).prop_flat_map(|m| {
            let full = crate::family::full_mask(m);
            proptest::collection::vec((any::<u64>(), any::<bool>()), 0..20).prop_map(move |v| {
                Family::from_members_dedup(
                    m,
                    v.into_iter().map(|(mask, large)| Member {
                        mask: mask & full,
                        large,
                    }),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(f in arb_family()) {
            let text = serialize_family(&f);
            let g = parse_family(&text).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(serialize_family(&g), text);
        }
    }
}
