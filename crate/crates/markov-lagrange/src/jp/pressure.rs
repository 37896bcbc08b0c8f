//! Certified dimension bracket from exact cylinder ratios.
//!
//! For a word `u` readable from state `v` the ratio `|I(a u)| / |I(a)|` over
//! all admissible `a` ending in `v` lies between `min f_u` and `max f_u`.
//! With `S_v(s) = sum_u (max f_u)^s` the dimension is at most any `s` with
//! `max_v S_v(s) < 1`; with the minima it is at least any `s` where every
//! state sum exceeds 1.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::GaussSystem;
use crate::cf::Digit;
use crate::decimal::{format_decimal, parse_decimal, DecimalInterval, Rounding};
use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DISTORTION_LABEL: &str = "RIGOROUS-UP-TO-DISTORTION-CONSTANT";

const CERT_BITS: u32 = 80;
const SHOWN_DIGITS: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct PressureBracket {
    pub set: String,
    pub depth: usize,
    pub bracket: DecimalInterval,
    pub label: &'static str,
}

impl PressureBracket {
    pub fn lower(&self) -> BigRational {
        self.bracket.lower()
    }

    pub fn upper(&self) -> BigRational {
        self.bracket.upper()
    }
}

/// Coefficients of the ratio function of one word.
#[derive(Clone, Copy, Debug)]
struct Ratio {
    alpha: u128,
    beta: u128,
    gamma: u128,
    delta: u128,
}

impl Ratio {
    fn b(&self) -> u128 {
        self.beta - self.alpha
    }

    fn d(&self) -> u128 {
        self.delta - self.gamma
    }

    fn interior(&self) -> bool {
        let (ag, bd) = (self.alpha * self.gamma, self.b() * self.d());
        bd > ag && bd < 4 * ag
    }

    fn max_f64(&self) -> f64 {
        let (a, b, g, d) = (self.alpha as f64, self.b() as f64, self.gamma as f64, self.d() as f64);
        if self.interior() {
            1.0 / (a * d + g * b + 2.0 * (a * g * b * d).sqrt())
        } else {
            self.f0_f64().max(self.f1_f64())
        }
    }

    fn min_f64(&self) -> f64 {
        self.f0_f64().min(self.f1_f64())
    }

    fn f0_f64(&self) -> f64 {
        1.0 / (self.beta as f64 * self.delta as f64)
    }

    fn f1_f64(&self) -> f64 {
        2.0 / ((self.alpha + self.beta) as f64 * (self.gamma + self.delta) as f64)
    }

    fn f0(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.beta) * BigInt::from(self.delta))
    }

    fn f1(&self) -> BigRational {
        BigRational::new(
            BigInt::from(2),
            BigInt::from(self.alpha + self.beta) * BigInt::from(self.gamma + self.delta),
        )
    }

    fn max_enclosure(&self, bits: u32) -> Interval {
        if self.interior() {
            let lin = BigInt::from(self.alpha) * BigInt::from(self.d()) + BigInt::from(self.gamma) * BigInt::from(self.b());
            let radicand = BigInt::from(self.alpha * self.gamma) * BigInt::from(self.b() * self.d()) * 4;
            let root = Interval::from_int(radicand, bits).sqrt().expect("positive");
            (&Interval::from_int(lin, bits) + &root).recip().expect("positive")
        } else {
            Interval::from_ratio(&self.f0().max(self.f1()), bits)
        }
    }

    fn min_enclosure(&self, bits: u32) -> Interval {
        Interval::from_ratio(&self.f0().min(self.f1()), bits)
    }
}

/// Classes of states with identical futures: the presentation of a letter
/// shift is deterministic, so Moore refinement applies.
fn future_classes(edges: &[Vec<(Digit, usize)>]) -> Vec<usize> {
    let n = edges.len();
    let mut class = vec![0usize; n];
    loop {
        let mut ids: HashMap<(usize, Vec<(Digit, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|v| {
                let mut sig: Vec<(Digit, usize)> = edges[v].iter().map(|&(d, t)| (d, class[t])).collect();
                sig.sort_unstable();
                let len = ids.len();
                *ids.entry((class[v], sig)).or_insert(len)
            })
            .collect();
        let before = class.iter().collect::<std::collections::BTreeSet<_>>().len();
        if ids.len() == before {
            return next;
        }
        class = next;
    }
}

fn words_from(edges: &[Vec<(Digit, usize)>], start: usize, depth: usize) -> Vec<Ratio> {
    let mut out = Vec::new();
    // Continuant matrix (q, q_prev, p, p_prev) of the path so far.
    fn go(
        edges: &[Vec<(Digit, usize)>],
        at: usize,
        left: usize,
        m: (u128, u128, u128, u128),
        out: &mut Vec<Ratio>,
    ) {
        if left == 0 {
            let (q, q1, p, p1) = m;
            out.push(Ratio {
                alpha: p,
                beta: q,
                gamma: p + p1,
                delta: q + q1,
            });
            return;
        }
        for &(d, t) in &edges[at] {
            let a = d as u128;
            let (q, q1, p, p1) = m;
            go(edges, t, left - 1, (a * q + q1, q, a * p + p1, p), out);
        }
    }
    go(edges, start, depth, (1, 0, 0, 1), &mut out);
    out
}

fn sum_f64(logs: &[f64], s: f64) -> f64 {
    logs.iter().map(|l| (s * l).exp()).sum()
}

/// Root of a decreasing function on `[0, 2]` by bisection, or 0 if it is
/// already non-positive at 0.
fn decreasing_root(h: impl Fn(f64) -> f64) -> f64 {
    if h(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 2.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn decimal(x: f64, rounding: Rounding) -> BigRational {
    let r = BigRational::from_float(x.max(0.0)).unwrap_or_else(BigRational::zero);
    parse_decimal(&format_decimal(&r, SHOWN_DIGITS, rounding)).expect("formatted decimal")
}

/// Enclosures of `ln max f_u` and `ln min f_u` for every word, per class.
fn log_enclosures(groups: &[Vec<Ratio>], upper: bool) -> Vec<Vec<Interval>> {
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|r| {
                    let base = if upper {
                        r.max_enclosure(CERT_BITS)
                    } else {
                        r.min_enclosure(CERT_BITS)
                    };
                    base.ln().expect("positive base")
                })
                .collect()
        })
        .collect()
}

fn sums_at(logs: &[Vec<Interval>], s: &BigRational) -> Vec<Interval> {
    let s = Interval::from_ratio(s, CERT_BITS);
    logs.iter().map(|g| g.iter().map(|l| (l * &s).exp()).sum()).collect()
}

/// Bracket of the dimension from words of length `depth >= 3`.
pub fn pressure_bracket(sys: &GaussSystem, depth: usize) -> Result<PressureBracket> {
    if depth < 3 {
        return Err(Error::Unsupported(format!("pressure depth {depth} below 3")));
    }
    let edges = sys.edges();
    let classes = future_classes(edges);
    let mut reps: Vec<usize> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (v, &c) in classes.iter().enumerate() {
        if seen.insert(c) {
            reps.push(v);
        }
    }
    let groups: Vec<Vec<Ratio>> = reps.iter().map(|&v| words_from(edges, v, depth)).collect();
    let max_logs: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|r| r.max_f64().ln()).collect()).collect();
    let min_logs: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|r| r.min_f64().ln()).collect()).collect();

    let s_up = decreasing_root(|s| max_logs.iter().map(|l| sum_f64(l, s)).fold(f64::MIN, f64::max) - 1.0);
    let s_lo = decreasing_root(|s| min_logs.iter().map(|l| sum_f64(l, s)).fold(f64::MAX, f64::min) - 1.0);

    let one = BigRational::one();
    let max_iv = log_enclosures(&groups, true);
    let mut upper = None;
    let mut slack = 1e-10;
    while slack < 1e-3 {
        let cand = decimal(s_up + slack, Rounding::Up);
        if sums_at(&max_iv, &cand).iter().all(|x| x.upper_lt(&one)) {
            upper = Some(cand);
            break;
        }
        slack *= 10.0;
    }
    let upper = upper
        .ok_or_else(|| Error::NonContracting(format!("no certified upper exponent near {s_up}")))?
        .min(one.clone());

    let mut lower = None;
    let mut slack = 1e-10;
    let min_iv = if s_lo == 0.0 {
        lower = Some(BigRational::zero());
        Vec::new()
    } else {
        log_enclosures(&groups, false)
    };
    while lower.is_none() && slack < 1e-3 {
        let cand = decimal(s_lo - slack, Rounding::Down);
        if cand.is_zero() || sums_at(&min_iv, &cand).iter().all(|x| x.lower_gt(&one)) {
            lower = Some(cand);
        }
        slack *= 10.0;
    }
    let lower = lower.unwrap_or_else(BigRational::zero);

    Ok(PressureBracket {
        set: sys.name().to_string(),
        depth,
        bracket: DecimalInterval::new(&lower, &upper, SHOWN_DIGITS),
        label: DISTORTION_LABEL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::builtin_spec;

    fn sys(name: &str) -> GaussSystem {
        GaussSystem::new(&builtin_spec(name).unwrap()).unwrap()
    }

    #[test]
    fn full_shift_has_one_class() {
        let s = sys("k123");
        let c = future_classes(s.edges());
        assert!(c.iter().all(|&x| x == c[0]));
        let s = sys("x3-13-31");
        let c = future_classes(s.edges());
        assert_eq!(c.iter().collect::<std::collections::BTreeSet<_>>().len(), 3);
    }

    #[test]
    fn bracket_contains_two_letter_dimension() {
        let b = pressure_bracket(&sys("k12"), 8).unwrap();
        let x = parse_decimal("0.5312805").unwrap();
        assert!(b.lower() < x && x < b.upper(), "{}", b.bracket);
        assert_eq!(b.label, DISTORTION_LABEL);
        assert!(pressure_bracket(&sys("k12"), 2).is_err());
    }

    #[test]
    fn deeper_words_narrow_the_bracket() {
        let b6 = pressure_bracket(&sys("k12"), 6).unwrap();
        let b10 = pressure_bracket(&sys("k12"), 10).unwrap();
        assert!(b10.upper() - b10.lower() < b6.upper() - b6.lower());
    }
}
