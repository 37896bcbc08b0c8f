//! Branch cases: the extension rules of one covering argument.
//!
//! ```text
//! name: sqrt13-3.84
//! s: 0.281266
//! margin: 0.999999
//! rule: 3 21
//! rule: 221 23 1121
//! note: free text
//! ```

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::cf::Word;
use crate::decimal::parse_decimal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchCase {
    pub name: String,
    /// Exponent at which every rule must contract, as written.
    pub s_text: String,
    /// Bound the largest rule sum must stay below, as written.
    pub margin_text: String,
    pub rules: Vec<Vec<Word>>,
    pub note: Option<String>,
}

impl BranchCase {
    pub fn s(&self) -> BigRational {
        parse_decimal(&self.s_text).expect("validated on parse")
    }

    pub fn margin(&self) -> BigRational {
        parse_decimal(&self.margin_text).expect("validated on parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut s_text = None;
        let mut margin_text = None;
        let mut rules = Vec::new();
        let mut note: Option<String> = None;
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (field, body) = content
                .split_once(':')
                .ok_or_else(|| Error::parse(line, content, "expected `field: value`"))?;
            let (field, body) = (field.trim(), body.trim());
            let set_once = |slot: &mut Option<String>| -> Result<()> {
                if slot.replace(body.to_string()).is_some() {
                    return Err(Error::parse(line, field, "duplicate field"));
                }
                Ok(())
            };
            match field {
                "name" => set_once(&mut name)?,
                "note" => set_once(&mut note)?,
                "s" | "margin" => {
                    let v = parse_decimal(body)
                        .ok_or_else(|| Error::parse(line, field, format!("`{body}` is not a decimal")))?;
                    if v <= BigRational::from_integer(0.into()) {
                        return Err(Error::parse(line, field, "must be positive"));
                    }
                    if field == "s" {
                        set_once(&mut s_text)?;
                    } else {
                        set_once(&mut margin_text)?;
                    }
                }
                "rule" => {
                    let words = body
                        .split_whitespace()
                        .map(|t| Word::parse(t).map_err(|m| Error::parse(line, field, m)))
                        .collect::<Result<Vec<_>>>()?;
                    if words.is_empty() {
                        return Err(Error::parse(line, field, "empty rule"));
                    }
                    rules.push(words);
                }
                other => return Err(Error::parse(line, other, "unknown field")),
            }
        }
        let missing = |f: &str| Error::parse(last_line, f, "missing field");
        Ok(BranchCase {
            name: name.ok_or_else(|| missing("name"))?,
            s_text: s_text.ok_or_else(|| missing("s"))?,
            margin_text: margin_text.ok_or_else(|| missing("margin"))?,
            rules,
            note,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name: {}", self.name).unwrap();
        writeln!(out, "s: {}", self.s_text).unwrap();
        writeln!(out, "margin: {}", self.margin_text).unwrap();
        for r in &self.rules {
            let words: Vec<String> = r.iter().map(Word::to_token).collect();
            writeln!(out, "rule: {}", words.join(" ")).unwrap();
        }
        if let Some(n) = &self.note {
            writeln!(out, "note: {n}").unwrap();
        }
        out
    }
}

const CASES: &[&str] = &[
    include_str!("../../data/cases/sqrt10-sqrt13.case"),
    include_str!("../../data/cases/sqrt13-3.84.case"),
    include_str!("../../data/cases/3.84-sqrt20.case"),
    include_str!("../../data/cases/sqrt20-sqrt21.case"),
    include_str!("../../data/cases/3.84-3.92.case"),
    include_str!("../../data/cases/3.92-4.01.case"),
    include_str!("../../data/cases/4.01-sqrt20.case"),
];

pub fn builtin_cases() -> Vec<BranchCase> {
    CASES
        .iter()
        .map(|t| BranchCase::parse(t).expect("catalog case"))
        .collect()
}

pub fn builtin_case(name: &str) -> Result<BranchCase> {
    builtin_cases()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trips() {
        let cases = builtin_cases();
        assert_eq!(cases.len(), 7);
        for c in &cases {
            let text = c.to_text();
            assert_eq!(BranchCase::parse(&text).unwrap(), *c);
            assert_eq!(BranchCase::parse(&text).unwrap().to_text(), text);
        }
        assert!(builtin_case("sqrt10-sqrt13").is_ok());
        assert!(builtin_case("nope").is_err());
    }

    #[test]
    fn malformed_cases_name_line_and_field() {
        match BranchCase::parse("name: x\ns: 0.1\nmargin: abc\n") {
            Err(Error::Parse { line: 3, field, .. }) => assert_eq!(field, "margin"),
            other => panic!("unexpected {other:?}"),
        }
        match BranchCase::parse("name: x\ns: 0.1\nmargin: 1\nrule: 1x2\n") {
            Err(Error::Parse { line: 4, field, .. }) => assert_eq!(field, "rule"),
            other => panic!("unexpected {other:?}"),
        }
        match BranchCase::parse("name: x\nmargin: 1\n") {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "s"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
