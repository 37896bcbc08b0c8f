//! Shifts of finite type over positive digits, Markov values of periodic
//! sequences, extremal continued fractions and gap constants.

pub mod automaton;
pub mod catalog;
pub mod spec;

use serde::Serialize;

use crate::cf::{Digit, Word};
use crate::error::{Error, Result};
use crate::surd::{eval_periodic, Surd, SurdSum};

pub use automaton::Automaton;
pub use catalog::{builtin_spec, builtin_spec_names, gap_cases, GapCase};
pub use spec::{AdjacencyRule, SftSpec};

/// A bi-infinite periodic sequence `...www...` with `b_0 = w_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicSeq {
    period: Word,
}

impl PeriodicSeq {
    pub fn new(period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(PeriodicSeq { period })
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// The sequence read from index `k`.
    pub fn shift(&self, k: usize) -> PeriodicSeq {
        PeriodicSeq {
            period: self.period.rotate(k),
        }
    }

    pub fn reversed(&self) -> PeriodicSeq {
        PeriodicSeq {
            period: self.period.reversed(),
        }
    }
}

/// `b_j + [0; b_{j+1}, b_{j+2}, ...] + [0; b_{j-1}, b_{j-2}, ...]`.
pub fn height(seq: &PeriodicSeq, j: usize) -> Result<Surd> {
    let p = &seq.period;
    let n = p.len();
    let j = j % n;
    let forward = eval_periodic(&Word::empty(), &p.rotate(j + 1))?;
    let backward = eval_periodic(&Word::empty(), &p.reversed().rotate((n - j) % n))?;
    Surd::from_int(p.digits()[j]).add(&forward)?.add(&backward)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovValue {
    pub value: Surd,
    /// First index within the period where the supremum is attained.
    pub position: usize,
}

/// The Markov value `sup_j height(seq, j)`, attained inside one period.
pub fn markov_value(seq: &PeriodicSeq) -> Result<MarkovValue> {
    let mut best: Option<MarkovValue> = None;
    for j in 0..seq.period.len() {
        let h = height(seq, j)?;
        if best.as_ref().map_or(true, |b| h > b.value) {
            best = Some(MarkovValue { value: h, position: j });
        }
    }
    Ok(best.expect("nonempty period"))
}

/// Whether no forbidden word occurs anywhere in the periodic sequence.
pub fn avoids(seq: &PeriodicSeq, forbidden: &[Word]) -> bool {
    let n = seq.period.len();
    let longest = forbidden.iter().map(Word::len).max().unwrap_or(0);
    let copies = longest / n + 2;
    let text: Vec<Digit> = seq.period.digits().repeat(copies);
    !forbidden.iter().any(|f| {
        let f = f.digits();
        f.is_empty() || (0..n).any(|i| text[i..].starts_with(f))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Min,
    Max,
}

/// An eventually periodic extremal sequence and its exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremal {
    pub value: Surd,
    pub preperiod: Word,
    pub period: Word,
}

impl Extremal {
    pub fn expansion(&self) -> String {
        format!("[0; {}({})^∞]", prefix_text(&self.preperiod), self.period)
    }
}

fn prefix_text(w: &Word) -> String {
    if w.is_empty() {
        String::new()
    } else {
        format!("{}, ", w)
    }
}

/// Shortest period and preperiod describing the same sequence.
fn normalise(mut pre: Vec<Digit>, period: Word) -> (Word, Word) {
    let mut period = period.primitive_root();
    while let Some(&last) = pre.last() {
        if last != *period.digits().last().expect("nonempty") {
            break;
        }
        pre.pop();
        period = period.rotate(period.len() - 1);
    }
    (Word::new(pre).expect("positive digits"), period)
}

/// Supremum or infimum of `[0; x_1 x_2 ...]` over one-sided sequences of the
/// automaton that begin with `prefix`.
pub fn extremal_in(a: &Automaton, which: Extreme, prefix: &Word) -> Result<Extremal> {
    let mut state = a
        .run(prefix.digits())
        .ok_or_else(|| Error::EmptyAdmissible(prefix.to_token()))?;
    let mut digits: Vec<Digit> = prefix.digits().to_vec();
    let mut seen: std::collections::HashMap<(usize, usize), usize> = Default::default();
    loop {
        // Index of the next digit, counted from 1.
        let index = digits.len() + 1;
        if let Some(&start) = seen.get(&(state, index % 2)) {
            let period = Word::new(digits[start..].to_vec())?;
            let (pre, period) = normalise(digits[..start].to_vec(), period);
            let value = eval_periodic(&pre, &period)?;
            return Ok(Extremal {
                value,
                preperiod: pre,
                period,
            });
        }
        seen.insert((state, index % 2), digits.len());
        // Larger value: smaller digit at odd index, larger at even index.
        let want_small = (which == Extreme::Max) == (index % 2 == 1);
        let d = if want_small {
            a.letters(state).next()
        } else {
            a.letters(state).last()
        }
        .expect("trimmed automaton has no dead ends");
        digits.push(d);
        state = a.step(state, d).expect("letter read from this state");
    }
}

pub fn extremal_value(spec: &SftSpec, which: Extreme, prefix: &Word) -> Result<Extremal> {
    extremal_in(&Automaton::compile(spec)?, which, prefix)
}

/// The same extremum over the reversed sequences `[0; x_{-1} x_{-2} ...]`.
pub fn past_extremal_value(spec: &SftSpec, which: Extreme, prefix: &Word) -> Result<Extremal> {
    extremal_value(&spec.reversed(), which, prefix)
}

/// Transitive, symmetric automaton for `spec`.
pub fn compile_checked(spec: &SftSpec) -> Result<Automaton> {
    let a = Automaton::compile(spec)?;
    if !a.is_transitive() {
        return Err(Error::NotTransitive(spec.name.clone()));
    }
    let r = Automaton::compile(&spec.reversed())?;
    if !a.same_language(&r) {
        return Err(Error::NotSymmetric(spec.name.clone()));
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct GapConstant {
    pub value: SurdSum,
    /// Minimiser of `[0; x]` over the inner shift.
    pub inner_min: Extremal,
    /// Minimiser of `[0; x]` over the outer shift.
    pub outer_min: Extremal,
    /// Smallest admissible leading letter of the inner shift.
    pub letter: Digit,
}

/// `c(B, C) = (min K(B))^{-1} + max_n 1 / (n + min K(C))`, the maximum
/// running over admissible leading letters `n` of `K(B)`.
pub fn gap_constant(inner: &SftSpec, outer: &SftSpec) -> Result<GapConstant> {
    let b = compile_checked(inner)?;
    let c = compile_checked(outer)?;
    if !b.is_contained_in(&c) {
        return Err(Error::NotContained {
            inner: inner.name.clone(),
            outer: outer.name.clone(),
        });
    }
    let inner_min = extremal_in(&b, Extreme::Min, &Word::empty())?;
    let outer_min = extremal_in(&c, Extreme::Min, &Word::empty())?;
    // 1 / (n + t) decreases in n, so the smallest letter wins.
    let letter = b.letters(b.start()).next().expect("nonempty shift");
    let first = inner_min.value.recip()?;
    let second = Surd::from_int(letter).add(&outer_min.value)?.recip()?;
    let value = SurdSum::from(first).add_surd(&second);
    Ok(GapConstant {
        value,
        inner_min,
        outer_min,
        letter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> PeriodicSeq {
        PeriodicSeq::new(w(s)).unwrap()
    }

    #[test]
    fn classical_markov_values() {
        assert_eq!(markov_value(&seq("1")).unwrap().value, Surd::sqrt(5).unwrap());
        assert_eq!(markov_value(&seq("2")).unwrap().value, Surd::sqrt(8).unwrap());
        // The third Markov number 5 gives sqrt(221)/5.
        assert_eq!(
            markov_value(&seq("2211")).unwrap().value,
            Surd::new(0, 1, 5, 221).unwrap()
        );
    }

    #[test]
    fn heights_sum_two_tails() {
        let h = height(&seq("12"), 0).unwrap();
        // 1 + [0; 2, 1, ...] + [0; 2, 1, ...]
        let t = eval_periodic(&Word::empty(), &w("21")).unwrap();
        assert_eq!(h, Surd::from_int(1).add(&t).unwrap().add(&t).unwrap());
    }

    #[test]
    fn avoidance_is_cyclic() {
        assert!(!avoids(&seq("31"), &[w("13")]));
        assert!(avoids(&seq("12"), &[w("13"), w("31")]));
        assert!(!avoids(&seq("2"), &[w("222222")]));
    }

    #[test]
    fn extremal_full_shift() {
        let spec = SftSpec::letters("k12", &[1, 2], &[]).unwrap();
        let max = extremal_value(&spec, Extreme::Max, &Word::empty()).unwrap();
        assert_eq!(max.period, w("12"));
        assert!(max.preperiod.is_empty());
        let min = extremal_value(&spec, Extreme::Min, &Word::empty()).unwrap();
        assert_eq!(min.period, w("21"));
        assert!(min.value < max.value);
    }

    #[test]
    fn extremal_block_shift_is_aligned() {
        let spec = SftSpec::blocks("b", &["11", "22"]).unwrap();
        let min = extremal_value(&spec, Extreme::Min, &Word::empty()).unwrap();
        assert_eq!(min.period, w("2"));
        assert_eq!(min.value, eval_periodic(&Word::empty(), &w("2")).unwrap());
        let after = extremal_value(&spec, Extreme::Min, &w("1")).unwrap();
        assert_eq!(after.preperiod, w("11"));
        assert_eq!(after.period, w("2"));
        assert!(matches!(
            extremal_value(&spec, Extreme::Max, &w("12")),
            Err(Error::EmptyAdmissible(_))
        ));
    }

    #[test]
    fn gap_constant_of_two_blocks() {
        let b = SftSpec::blocks("b", &["11", "22"]).unwrap();
        let c = SftSpec::letters("k12", &[1, 2], &[]).unwrap();
        let g = gap_constant(&b, &c).unwrap();
        // 1/(sqrt2 - 1) + 1/(1 + [0; 2, 1, ...]) = sqrt 2 + sqrt 3
        let expected = SurdSum::from(Surd::sqrt(2).unwrap()).add_surd(&Surd::sqrt(3).unwrap());
        assert_eq!(g.value, expected);
        assert_eq!(g.letter, 1);
    }

    #[test]
    fn gap_constant_rejects_bad_pairs() {
        let b = SftSpec::blocks("b", &["11", "22"]).unwrap();
        let c = SftSpec::letters("x", &[1, 2], &["11"]).unwrap();
        assert!(matches!(gap_constant(&b, &c), Err(Error::NotContained { .. })));
        let k = SftSpec::letters("k123", &[1, 2, 3], &[]).unwrap();
        let lopsided = SftSpec::blocks("l", &["112", "3"]).unwrap();
        assert!(matches!(gap_constant(&lopsided, &k), Err(Error::NotSymmetric(_))));
    }
}
