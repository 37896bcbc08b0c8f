//! Shifts and gap-constant comparisons shipped with the crate.

use crate::error::{Error, Result};
use crate::surd::Surd;
use crate::symbolic::spec::SftSpec;

const SPECS: &[(&str, &str)] = &[
    ("k12", include_str!("../../data/specs/k12.sft")),
    ("k123", include_str!("../../data/specs/k123.sft")),
    ("k1234", include_str!("../../data/specs/k1234.sft")),
    ("x2-121-212", include_str!("../../data/specs/x2-121-212.sft")),
    ("x3-13-31", include_str!("../../data/specs/x3-13-31.sft")),
    ("x3-131-313-231-132", include_str!("../../data/specs/x3-131-313-231-132.sft")),
    ("x3-131-313-2312-2132", include_str!("../../data/specs/x3-131-313-2312-2132.sft")),
    ("x4-14-41-24-42", include_str!("../../data/specs/x4-14-41-24-42.sft")),
    ("b-11-22", include_str!("../../data/specs/b-11-22.sft")),
    ("b-1-2-2321-1232", include_str!("../../data/specs/b-1-2-2321-1232.sft")),
    ("b-sqrt20-sqrt21", include_str!("../../data/specs/b-sqrt20-sqrt21.sft")),
    ("b-3.84-3.92", include_str!("../../data/specs/b-3.84-3.92.sft")),
    ("b-3.92-4.01", include_str!("../../data/specs/b-3.92-4.01.sft")),
    ("b-4.01-sqrt20", include_str!("../../data/specs/b-4.01-sqrt20.sft")),
];

pub fn builtin_spec_names() -> Vec<&'static str> {
    SPECS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_spec(name: &str) -> Result<SftSpec> {
    let (_, text) = SPECS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    SftSpec::parse(text)
}

/// A threshold `t` with the claim `c(inner, outer) < t`.
#[derive(Clone, Debug)]
pub struct GapCase {
    pub label: &'static str,
    pub inner: &'static str,
    pub outer: &'static str,
    pub threshold_text: &'static str,
}

impl GapCase {
    pub fn threshold(&self) -> Surd {
        parse_real(self.threshold_text).expect("catalog threshold")
    }
}

/// `sqrt(N)` or a plain decimal.
pub fn parse_real(text: &str) -> Result<Surd> {
    let t = text.trim();
    if let Some(inner) = t
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix('√'))
    {
        let n: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, "real", format!("`{t}` is not sqrt of an integer")))?;
        return Surd::sqrt(n);
    }
    crate::decimal::parse_decimal(t)
        .map(|r| Surd::rational(&r))
        .ok_or_else(|| Error::parse(0, "real", format!("`{t}` is not a decimal")))
}

pub fn gap_cases() -> Vec<GapCase> {
    let case = |label, inner, outer, threshold_text| GapCase {
        label,
        inner,
        outer,
        threshold_text,
    };
    vec![
        case("sqrt10-sqrt13", "b-11-22", "k12", "sqrt(10)"),
        case("3.06-sqrt13", "b-11-22", "k12", "3.0407"),
        case("sqrt13-3.84", "k12", "k123", "sqrt(13)"),
        case("3.84-sqrt20", "b-1-2-2321-1232", "k123", "3.81"),
        case("sqrt20-sqrt21", "b-sqrt20-sqrt21", "x4-14-41-24-42", "4.46"),
        case("3.84-3.92", "b-3.84-3.92", "x3-131-313-231-132", "3.84"),
        case("3.92-4.01", "b-3.92-4.01", "x3-131-313-2312-2132", "3.92"),
        case("4.01-sqrt20", "b-4.01-sqrt20", "k123", "4.01"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses_and_round_trips() {
        for name in builtin_spec_names() {
            let spec = builtin_spec(name).unwrap();
            assert_eq!(spec.name, name);
            assert_eq!(SftSpec::parse(&spec.to_text()).unwrap(), spec);
        }
        assert!(builtin_spec("nope").is_err());
    }

    #[test]
    fn thresholds_parse() {
        assert_eq!(parse_real("sqrt(10)").unwrap(), Surd::sqrt(10).unwrap());
        assert_eq!(parse_real("√13").unwrap(), Surd::sqrt(13).unwrap());
        assert!(parse_real("3.0407").unwrap().is_rational());
        assert!(parse_real("sqrt(x)").is_err());
        for c in gap_cases() {
            c.threshold();
        }
    }
}
