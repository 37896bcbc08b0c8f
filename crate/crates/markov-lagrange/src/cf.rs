//! Words of partial quotients, continuant matrices, cylinders and the
//! alternating digit order on continued fractions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Digit = u32;

/// A finite word of positive partial quotients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<Digit>);

impl Word {
    pub fn new(digits: Vec<Digit>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidDigit(d as i64));
        }
        Ok(Word(digits))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn push(&mut self, d: Digit) {
        assert!(d > 0, "digits are positive");
        self.0.push(d);
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        (1..n).filter(|d| n % d == 0).all(|d| self.rotate(d) != *self)
    }

    /// Shortest root `u` with `self = u^k`.
    pub fn primitive_root(&self) -> Word {
        let n = self.0.len();
        (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| self.rotate(d) == *self)
            .map(|d| self.slice(0..d))
            .unwrap_or_else(|| self.clone())
    }

    /// Lexicographically least rotation.
    pub fn least_rotation(&self) -> Word {
        (0..self.0.len().max(1))
            .map(|k| self.rotate(k))
            .min()
            .unwrap_or_default()
    }

    pub fn contains_factor(&self, factor: &[Digit]) -> bool {
        factor.is_empty() || self.0.windows(factor.len()).any(|w| w == factor)
    }

    /// Compact digits when every letter is below ten, comma separated
    /// otherwise; a single letter above nine keeps a trailing comma.
    pub fn to_token(&self) -> String {
        if self.0.iter().all(|&d| d < 10) {
            self.0.iter().map(|d| d.to_string()).collect()
        } else if self.0.len() == 1 {
            format!("{},", self.0[0])
        } else {
            self.0
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn parse(token: &str) -> std::result::Result<Word, String> {
        let token = token.trim();
        if token.is_empty() {
            return Err("empty word".into());
        }
        let digits: std::result::Result<Vec<Digit>, String> = if token.contains(',') {
            token
                .strip_suffix(',')
                .unwrap_or(token)
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Digit>()
                        .map_err(|_| format!("`{t}` is not a positive integer"))
                })
                .collect()
        } else {
            token
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| format!("`{c}` is not a digit"))
                })
                .collect()
        };
        let digits = digits?;
        if digits.contains(&0) {
            return Err(format!("`{token}` contains the digit 0"));
        }
        Ok(Word(digits))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s).map_err(|m| Error::parse(0, "word", m))
    }
}

impl TryFrom<String> for Word {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        Word::parse(&s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_token()
    }
}

impl TryFrom<&[Digit]> for Word {
    type Error = Error;
    fn try_from(d: &[Digit]) -> Result<Self> {
        Word::new(d.to_vec())
    }
}

/// The product of `[[a, 1], [1, 0]]` over a word, laid out as
/// `[[q, q_prev], [p, p_prev]]` so that `[0; w] = p / q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuantMatrix {
    pub q: BigInt,
    pub q_prev: BigInt,
    pub p: BigInt,
    pub p_prev: BigInt,
}

impl ContinuantMatrix {
    pub fn identity() -> Self {
        ContinuantMatrix {
            q: BigInt::one(),
            q_prev: BigInt::zero(),
            p: BigInt::zero(),
            p_prev: BigInt::one(),
        }
    }

    pub fn digit(a: Digit) -> Self {
        ContinuantMatrix {
            q: BigInt::from(a),
            q_prev: BigInt::one(),
            p: BigInt::one(),
            p_prev: BigInt::zero(),
        }
    }

    pub fn mul(&self, o: &ContinuantMatrix) -> ContinuantMatrix {
        ContinuantMatrix {
            q: &self.q * &o.q + &self.q_prev * &o.p,
            q_prev: &self.q * &o.q_prev + &self.q_prev * &o.p_prev,
            p: &self.p * &o.q + &self.p_prev * &o.p,
            p_prev: &self.p * &o.q_prev + &self.p_prev * &o.p_prev,
        }
    }

    /// Appends one digit on the right.
    pub fn push(&self, a: Digit) -> ContinuantMatrix {
        let a = BigInt::from(a);
        ContinuantMatrix {
            q: &a * &self.q + &self.q_prev,
            q_prev: self.q.clone(),
            p: &a * &self.p + &self.p_prev,
            p_prev: self.p.clone(),
        }
    }

    /// Equal to `(-1)^n` for a word of length `n`.
    pub fn determinant(&self) -> BigInt {
        &self.q * &self.p_prev - &self.q_prev * &self.p
    }

    /// The convergent `[0; w]`.
    pub fn convergent(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }

    /// `[0; w, t]` for a tail value `t`.
    pub fn apply(&self, t: &BigRational) -> BigRational {
        let num = BigRational::from_integer(self.p.clone()) * t + BigRational::from_integer(self.p_prev.clone());
        let den = BigRational::from_integer(self.q.clone()) * t + BigRational::from_integer(self.q_prev.clone());
        num / den
    }
}

pub fn continuants(w: &Word) -> ContinuantMatrix {
    w.digits()
        .iter()
        .fold(ContinuantMatrix::identity(), |m, &a| m.push(a))
}

/// The continuant polynomial `K(a_1, ..., a_n)`; `K()` is 1.
pub fn continuant(digits: &[Digit]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for &a in digits {
        let next = BigInt::from(a) * &cur + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The closure of the set of `[0; w, t]` with `t > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderInterval {
    pub left: BigRational,
    pub right: BigRational,
}

impl CylinderInterval {
    pub fn length(&self) -> BigRational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.left <= *x && *x <= self.right
    }
}

pub fn cylinder(w: &Word) -> CylinderInterval {
    let m = continuants(w);
    let a = m.convergent();
    let b = BigRational::new(&m.p + &m.p_prev, &m.q + &m.q_prev);
    if a <= b {
        CylinderInterval { left: a, right: b }
    } else {
        CylinderInterval { left: b, right: a }
    }
}

/// `1 / (q_n (q_n + q_{n-1}))`.
pub fn cylinder_length(w: &Word) -> BigRational {
    let m = continuants(w);
    BigRational::new(BigInt::one(), &m.q * (&m.q + &m.q_prev))
}

/// `[a_0; preperiod, period, period, ...]`; an empty period means the
/// expansion is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub a0: BigInt,
    pub preperiod: Word,
    pub period: Word,
}

impl CfExpansion {
    pub fn periodic(a0: impl Into<BigInt>, preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(CfExpansion {
            a0: a0.into(),
            preperiod,
            period,
        })
    }

    /// A finite expansion, normalised so that it never ends in 1.
    pub fn finite(a0: impl Into<BigInt>, digits: Word) -> Self {
        let mut a0 = a0.into();
        let mut d = digits.0;
        if d.last() == Some(&1) {
            d.pop();
            match d.last_mut() {
                Some(last) => *last += 1,
                None => a0 += 1,
            }
        }
        CfExpansion {
            a0,
            preperiod: Word(d),
            period: Word::empty(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Partial quotient `i` (with `a_0` at `i = 0`), `None` past the end of a
    /// finite expansion.
    pub fn digit(&self, i: usize) -> Option<BigInt> {
        if i == 0 {
            return Some(self.a0.clone());
        }
        let j = i - 1;
        let pre = self.preperiod.len();
        if j < pre {
            return Some(BigInt::from(self.preperiod.0[j]));
        }
        if self.period.is_empty() {
            return None;
        }
        Some(BigInt::from(self.period.0[(j - pre) % self.period.len()]))
    }

    /// Exact value of a finite expansion.
    pub fn finite_value(&self) -> Option<BigRational> {
        if !self.is_finite() {
            return None;
        }
        let m = continuants(&self.preperiod);
        Some(BigRational::from_integer(self.a0.clone()) + m.convergent())
    }
}

/// Orders two expansions by the alternating digit rule: at the first index
/// `i` where they differ, `x > y` iff `(-1)^i (x_i - y_i) > 0`, an exhausted
/// finite expansion acting as an infinite digit.
pub fn compare_cf(x: &CfExpansion, y: &CfExpansion) -> Ordering {
    let horizon = 2 + x.preperiod.len().max(y.preperiod.len())
        + match (x.period.len(), y.period.len()) {
            (0, n) | (n, 0) => n,
            (a, b) => a.lcm(&b),
        };
    for i in 0..=horizon {
        let ord = match (x.digit(i), y.digit(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        };
        if ord != Ordering::Equal {
            return if i % 2 == 0 { ord } else { ord.reverse() };
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn continuants_of_small_words() {
        let m = continuants(&w("221"));
        assert_eq!(m.q, BigInt::from(7));
        assert_eq!(m.q_prev, BigInt::from(5));
        assert_eq!(m.convergent(), q(3, 7));
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert_eq!(continuants(&Word::empty()), ContinuantMatrix::identity());
        assert_eq!(continuant(&[2, 2, 1]), BigInt::from(7));
        assert_eq!(continuant(&[]), BigInt::one());
    }

    #[test]
    fn cylinder_of_221() {
        let c = cylinder(&w("221"));
        assert_eq!(c.length(), q(1, 84));
        assert_eq!(cylinder_length(&w("221")), q(1, 84));
        assert_eq!(c.left, q(5, 12));
        assert_eq!(c.right, q(3, 7));
    }

    #[test]
    fn word_tokens() {
        assert_eq!(w("2321").digits(), &[2, 3, 2, 1]);
        assert_eq!(w("10,2").digits(), &[10, 2]);
        assert_eq!(w("10,2").to_token(), "10,2");
        assert_eq!(w("10,").digits(), &[10]);
        assert_eq!(w("10,").to_token(), "10,");
        assert!(Word::parse("10").is_err());
        assert!("120".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!(Word::new(vec![1, 0]).is_err());
    }

    #[test]
    fn rotations_and_roots() {
        assert!(w("12").is_primitive());
        assert!(!w("1212").is_primitive());
        assert_eq!(w("1212").primitive_root(), w("12"));
        assert_eq!(w("2131").least_rotation(), w("1213"));
    }

    #[test]
    fn finite_expansions_drop_trailing_one() {
        let x = CfExpansion::finite(0, w("21"));
        assert_eq!(x.preperiod, w("3"));
        assert_eq!(x.finite_value(), Some(q(1, 3)));
        let y = CfExpansion::finite(2, w("1"));
        assert_eq!(y.a0, BigInt::from(3));
        assert!(y.preperiod.is_empty());
    }

    #[test]
    fn digit_rule_examples() {
        let p = |pre: &str, per: &str| {
            let pre = if pre.is_empty() { Word::empty() } else { w(pre) };
            CfExpansion::periodic(0, pre, w(per)).unwrap()
        };
        // [0; 1, ...] > [0; 2, ...]
        assert_eq!(compare_cf(&p("", "1"), &p("", "2")), Ordering::Greater);
        // second digit larger means larger value
        assert_eq!(compare_cf(&p("1", "2"), &p("1", "1")), Ordering::Greater);
        assert_eq!(compare_cf(&p("12", "12"), &p("", "12")), Ordering::Equal);
        // [0; 2] = 1/2 exceeds [0; 2, 1, ...]
        let half = CfExpansion::finite(0, w("2"));
        assert_eq!(compare_cf(&half, &p("2", "1")), Ordering::Greater);
    }
}
