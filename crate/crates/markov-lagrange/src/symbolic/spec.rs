//! Shift specifications and their line-oriented text format.
//!
//! ```text
//! # comment
//! name: b-3.84-3.92
//! alphabet: 1 2 3
//! blocks: 1 2 2321 1232 33
//! forbidden: 131 313
//! adjacency: 1 33 deny
//! ```
//!
//! `blocks` is optional; without it every letter is its own block.
//! `adjacency` lines may repeat and are kept in order; a pair without a rule
//! is allowed, and the last rule for a pair wins.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::cf::{Digit, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdjacencyRule {
    pub prev: Word,
    pub next: Word,
    pub allowed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SftSpec {
    pub name: String,
    pub alphabet: Vec<Digit>,
    pub blocks: Vec<Word>,
    pub forbidden: Vec<Word>,
    pub adjacency: Vec<AdjacencyRule>,
}

impl SftSpec {
    /// The full shift on `alphabet` with the listed forbidden words.
    pub fn letters(name: &str, alphabet: &[Digit], forbidden: &[&str]) -> Result<Self> {
        let spec = SftSpec {
            name: name.to_string(),
            alphabet: alphabet.to_vec(),
            blocks: Vec::new(),
            forbidden: forbidden
                .iter()
                .map(|w| w.parse())
                .collect::<Result<Vec<Word>>>()?,
            adjacency: Vec::new(),
        };
        spec.validate(0)?;
        Ok(spec)
    }

    /// Free concatenations of `blocks`.
    pub fn blocks(name: &str, blocks: &[&str]) -> Result<Self> {
        let blocks: Vec<Word> = blocks.iter().map(|w| w.parse()).collect::<Result<_>>()?;
        let alphabet: BTreeSet<Digit> = blocks.iter().flat_map(|b| b.digits().to_vec()).collect();
        let spec = SftSpec {
            name: name.to_string(),
            alphabet: alphabet.into_iter().collect(),
            blocks,
            forbidden: Vec::new(),
            adjacency: Vec::new(),
        };
        spec.validate(0)?;
        Ok(spec)
    }

    pub fn with_rule(mut self, prev: &str, next: &str, allowed: bool) -> Result<Self> {
        self.adjacency.push(AdjacencyRule {
            prev: prev.parse()?,
            next: next.parse()?,
            allowed,
        });
        self.validate(0)?;
        Ok(self)
    }

    pub fn is_block_presented(&self) -> bool {
        !self.blocks.is_empty()
    }

    /// Blocks, or the single letters of the alphabet for a letter shift.
    pub fn units(&self) -> Vec<Word> {
        if self.blocks.is_empty() {
            self.alphabet
                .iter()
                .map(|&d| Word::new(vec![d]).expect("positive letter"))
                .collect()
        } else {
            self.blocks.clone()
        }
    }

    /// Whether block `next` may follow block `prev`.
    pub fn allows(&self, prev: &Word, next: &Word) -> bool {
        self.adjacency
            .iter()
            .rev()
            .find(|r| &r.prev == prev && &r.next == next)
            .map_or(true, |r| r.allowed)
    }

    /// The time-reversed specification.
    pub fn reversed(&self) -> SftSpec {
        SftSpec {
            name: format!("{}~rev", self.name),
            alphabet: self.alphabet.clone(),
            blocks: self.blocks.iter().map(Word::reversed).collect(),
            forbidden: self.forbidden.iter().map(Word::reversed).collect(),
            adjacency: self
                .adjacency
                .iter()
                .map(|r| AdjacencyRule {
                    prev: r.next.reversed(),
                    next: r.prev.reversed(),
                    allowed: r.allowed,
                })
                .collect(),
        }
    }

    fn validate(&self, line: usize) -> Result<()> {
        if self.alphabet.is_empty() {
            return Err(Error::parse(line, "alphabet", "the alphabet is empty"));
        }
        let letters: BTreeSet<Digit> = self.alphabet.iter().copied().collect();
        let check = |field: &str, w: &Word| -> Result<()> {
            match w.digits().iter().find(|d| !letters.contains(d)) {
                Some(d) => Err(Error::parse(
                    line,
                    field,
                    format!("letter {d} of `{w}` is not in the alphabet"),
                )),
                None => Ok(()),
            }
        };
        for b in &self.blocks {
            check("blocks", b)?;
        }
        for f in &self.forbidden {
            check("forbidden", f)?;
        }
        let units = self.units();
        for r in &self.adjacency {
            for w in [&r.prev, &r.next] {
                if !units.contains(w) {
                    return Err(Error::parse(
                        line,
                        "adjacency",
                        format!("`{w}` is not a block of `{}`", self.name),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut alphabet: Option<Vec<Digit>> = None;
        let mut blocks = Vec::new();
        let mut forbidden = Vec::new();
        let mut adjacency = Vec::new();
        let mut last_line = 0;
        let words = |line: usize, field: &str, body: &str| -> Result<Vec<Word>> {
            body.split_whitespace()
                .map(|t| Word::parse(t).map_err(|m| Error::parse(line, field, m)))
                .collect()
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (field, body) = content
                .split_once(':')
                .ok_or_else(|| Error::parse(line, content, "expected `field: value`"))?;
            let field = field.trim();
            let body = body.trim();
            match field {
                "name" => {
                    if body.is_empty() {
                        return Err(Error::parse(line, field, "empty name"));
                    }
                    if name.replace(body.to_string()).is_some() {
                        return Err(Error::parse(line, field, "duplicate field"));
                    }
                }
                "alphabet" => {
                    let mut letters = Vec::new();
                    for t in body.split_whitespace() {
                        let d: Digit = t
                            .parse()
                            .ok()
                            .filter(|&d| d > 0)
                            .ok_or_else(|| Error::parse(line, field, format!("`{t}` is not a positive integer")))?;
                        letters.push(d);
                    }
                    let sorted: BTreeSet<Digit> = letters.iter().copied().collect();
                    if sorted.len() != letters.len() {
                        return Err(Error::parse(line, field, "repeated letter"));
                    }
                    if alphabet.replace(sorted.into_iter().collect()).is_some() {
                        return Err(Error::parse(line, field, "duplicate field"));
                    }
                }
                "blocks" => blocks.extend(words(line, field, body)?.into_iter().map(|w| (line, w))),
                "forbidden" => forbidden.extend(words(line, field, body)?.into_iter().map(|w| (line, w))),
                "adjacency" => {
                    let parts: Vec<&str> = body.split_whitespace().collect();
                    let [prev, next, verdict] = parts[..] else {
                        return Err(Error::parse(line, field, "expected `<prev> <next> allow|deny`"));
                    };
                    let allowed = match verdict {
                        "allow" => true,
                        "deny" => false,
                        other => {
                            return Err(Error::parse(line, field, format!("`{other}` is neither allow nor deny")))
                        }
                    };
                    let prev = Word::parse(prev).map_err(|m| Error::parse(line, field, m))?;
                    let next = Word::parse(next).map_err(|m| Error::parse(line, field, m))?;
                    adjacency.push((line, AdjacencyRule { prev, next, allowed }));
                }
                other => return Err(Error::parse(line, other, "unknown field")),
            }
        }
        let name = name.ok_or_else(|| Error::parse(last_line, "name", "missing field"))?;
        let alphabet = alphabet.ok_or_else(|| Error::parse(last_line, "alphabet", "missing field"))?;
        let mut spec = SftSpec {
            name,
            alphabet,
            blocks: Vec::new(),
            forbidden: Vec::new(),
            adjacency: Vec::new(),
        };
        spec.validate(last_line)?;
        for (line, w) in blocks {
            spec.blocks.push(w);
            spec.validate(line)?;
        }
        for (line, w) in forbidden {
            spec.forbidden.push(w);
            spec.validate(line)?;
        }
        for (line, rule) in adjacency {
            spec.adjacency.push(rule);
            spec.validate(line)?;
        }
        Ok(spec)
    }

    /// Canonical text; `parse(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let join = |ws: &[Word]| ws.iter().map(Word::to_token).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "name: {}", self.name).unwrap();
        let letters: Vec<String> = self.alphabet.iter().map(|d| d.to_string()).collect();
        writeln!(out, "alphabet: {}", letters.join(" ")).unwrap();
        if !self.blocks.is_empty() {
            writeln!(out, "blocks: {}", join(&self.blocks)).unwrap();
        }
        if !self.forbidden.is_empty() {
            writeln!(out, "forbidden: {}", join(&self.forbidden)).unwrap();
        }
        for r in &self.adjacency {
            let verdict = if r.allowed { "allow" } else { "deny" };
            writeln!(out, "adjacency: {} {} {verdict}", r.prev, r.next).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# block shift near 3.9
name: sample
alphabet: 1 2 3
blocks: 1 2 2321 1232 33
adjacency: 1 33 deny   # no 1 before 33
adjacency: 33 1 deny
";

    #[test]
    fn parses_and_round_trips() {
        let spec = SftSpec::parse(SAMPLE).unwrap();
        assert_eq!(spec.alphabet, vec![1, 2, 3]);
        assert_eq!(spec.blocks.len(), 5);
        assert!(!spec.allows(&"1".parse().unwrap(), &"33".parse().unwrap()));
        assert!(spec.allows(&"2".parse().unwrap(), &"33".parse().unwrap()));
        let text = spec.to_text();
        assert_eq!(SftSpec::parse(&text).unwrap(), spec);
        assert_eq!(SftSpec::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn errors_name_line_and_field() {
        let bad = "name: x\nforbidden: 13\nalphabet: 1 2\n";
        match SftSpec::parse(bad) {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(field, "forbidden");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        match SftSpec::parse("name: x\nalphabet: 1 2\nadjacency: 1 2 maybe\n") {
            Err(Error::Parse { line: 3, field, .. }) => assert_eq!(field, "adjacency"),
            other => panic!("unexpected {other:?}"),
        }
        match SftSpec::parse("name: x\nalphabet: 1 0\n") {
            Err(Error::Parse { line: 2, field, .. }) => assert_eq!(field, "alphabet"),
            other => panic!("unexpected {other:?}"),
        }
        match SftSpec::parse("name: x\n") {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "alphabet"),
            other => panic!("unexpected {other:?}"),
        }
        match SftSpec::parse("name: x\nalphabet: 1 2\nblocks: 12\nadjacency: 12 21 deny\n") {
            Err(Error::Parse { line: 4, field, .. }) => assert_eq!(field, "adjacency"),
            other => panic!("unexpected {other:?}"),
        }
        match SftSpec::parse("name: x\ncolour: red\n") {
            Err(Error::Parse { line: 2, field, .. }) => assert_eq!(field, "colour"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversal_swaps_rule_sides() {
        let spec = SftSpec::blocks("r", &["12", "3"])
            .unwrap()
            .with_rule("12", "3", false)
            .unwrap();
        let rev = spec.reversed();
        assert_eq!(rev.blocks[0].to_token(), "21");
        assert_eq!(rev.adjacency[0].prev.to_token(), "3");
        assert_eq!(rev.adjacency[0].next.to_token(), "21");
    }
}
