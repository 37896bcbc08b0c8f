//! Covering certificates: for a branch case and exponent `s`, every rule must
//! satisfy `sum_w (max f_w)^s < 1`, which bounds the dimension of the covered
//! set by `s`.

pub mod case;
pub mod ratio;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cf::Word;
use crate::decimal::{format_decimal, DecimalInterval, Rounding};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::surd::Enclose;

pub use case::{builtin_case, builtin_cases, BranchCase};
pub use ratio::{max_ratio, max_ratio_by_subdivision, ArgMax, RatioFn, RatioMax};

/// Digits shown for sums in certificates.
const SHOWN_DIGITS: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct TermBound {
    pub extension: Word,
    pub ratio: String,
    pub max: String,
    pub max_decimal: DecimalInterval,
    pub location: ArgMax,
    pub power: DecimalInterval,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleSum {
    pub terms: Vec<TermBound>,
    pub sum: DecimalInterval,
    #[serde(skip)]
    pub enclosure: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub case: String,
    pub s: String,
    pub margin: String,
    pub rules: Vec<RuleSum>,
    pub max_sum: DecimalInterval,
    /// Every rule sum is below 1.
    pub verdict: bool,
    /// Every rule sum is below the stated margin.
    pub meets_margin: bool,
    #[serde(skip)]
    pub max_enclosure: Interval,
}

fn term_bound(w: &Word, s: &Interval, bits: u32) -> Result<(TermBound, Interval)> {
    let f = RatioFn::new(w)?;
    let m = max_ratio(&f);
    let enc = m.value.enclose(bits);
    if !enc.upper_lt(&BigRational::one()) {
        return Err(Error::NonContracting(m.value.to_string()));
    }
    let power = enc.pow(s).expect("positive maximum");
    let tb = TermBound {
        extension: w.clone(),
        ratio: f.to_string(),
        max: m.value.to_string(),
        max_decimal: enc.to_decimal(SHOWN_DIGITS),
        location: m.location,
        power: power.to_decimal(SHOWN_DIGITS),
    };
    Ok((tb, power))
}

/// Rule sums `sum_w (max f_w)^s`, each enclosed at scale `bits`.
pub fn rule_sums(rules: &[Vec<Word>], s: &BigRational, bits: u32) -> Result<Vec<RuleSum>> {
    let s_iv = Interval::from_ratio(s, bits);
    rules
        .iter()
        .map(|rule| {
            let mut terms = Vec::new();
            let mut sum = Interval::zero(bits);
            for w in rule {
                let (tb, p) = term_bound(w, &s_iv, bits)?;
                sum = &sum + &p;
                terms.push(tb);
            }
            Ok(RuleSum {
                terms,
                sum: sum.to_decimal(SHOWN_DIGITS),
                enclosure: sum,
            })
        })
        .collect()
}

fn all_contract(sums: &[RuleSum]) -> bool {
    sums.iter().all(|r| r.enclosure.upper_lt(&BigRational::one()))
}

pub fn verify_case_at(case: &BranchCase, s: &BigRational, bits: u32) -> Result<Certificate> {
    let rules = rule_sums(&case.rules, s, bits)?;
    let max_enclosure = rules
        .iter()
        .map(|r| r.enclosure.clone())
        .reduce(|a, b| a.max(&b))
        .unwrap_or_else(|| Interval::zero(bits));
    let margin = case.margin();
    Ok(Certificate {
        case: case.name.clone(),
        s: format_decimal(s, 6, Rounding::Up),
        margin: case.margin_text.clone(),
        verdict: all_contract(&rules),
        meets_margin: max_enclosure.upper_lt(&margin),
        max_sum: max_enclosure.to_decimal(SHOWN_DIGITS),
        rules,
        max_enclosure,
    })
}

/// Certificate at the exponent stored with the case.
pub fn verify_case(case: &BranchCase, bits: u32) -> Result<Certificate> {
    let mut c = verify_case_at(case, &case.s(), bits)?;
    c.s = case.s_text.clone();
    Ok(c)
}

/// Smallest exponent for which every rule contracts, to within `tolerance`:
/// the result `s` contracts and `s - tolerance` does not.
pub fn min_admissible_s(rules: &[Vec<Word>], tolerance: &BigRational, bits: u32) -> Result<BigRational> {
    let ok = |s: &BigRational| -> Result<bool> { Ok(all_contract(&rule_sums(rules, s, bits)?)) };
    let mut lo = BigRational::zero();
    if ok(&lo)? {
        return Ok(lo);
    }
    let mut hi = BigRational::one();
    while !ok(&hi)? {
        lo = hi.clone();
        hi = &hi * BigRational::from_integer(2.into());
        if hi > BigRational::from_integer(1024.into()) {
            return Err(Error::NonContracting(format!("no exponent below {hi}")));
        }
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / &two;
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::bits_for_digits;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_term_rule_contracts_for_any_positive_s() {
        let rules = vec![vec![w("3")]];
        let s = min_admissible_s(&rules, &q(1, 1000), 128).unwrap();
        assert!(s <= q(1, 1000) && s > q(0, 1));
    }

    #[test]
    fn two_term_rule_solves_sum_equation() {
        // (1/35)^s + f221^s = 1 near s = 0.1748
        let rules = vec![vec![w("112"), w("221")]];
        let s = min_admissible_s(&rules, &q(1, 1_000_000), 128).unwrap();
        assert!(s > q(1745, 10000) && s < q(1749, 10000), "{s}");
    }

    #[test]
    fn first_builtin_case_verifies() {
        let c = builtin_case("sqrt10-sqrt13").unwrap();
        let cert = verify_case(&c, bits_for_digits(40)).unwrap();
        assert!(cert.verdict && cert.meets_margin);
        assert_eq!(cert.rules[0].terms[0].max, "1/35");
        assert!(cert.max_sum.lo.starts_with("0.99998"));
    }

    #[test]
    fn no_rules_is_vacuous() {
        assert_eq!(min_admissible_s(&[], &q(1, 100), 64).unwrap(), q(0, 1));
    }
}
