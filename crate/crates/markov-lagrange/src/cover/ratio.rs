//! Cylinder-length ratios and their exact maxima.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cf::{continuants, Word};
use crate::error::{Error, Result};
use crate::surd::Surd;

/// `f(r) = (r + 1) / ((alpha r + beta)(gamma r + delta))`, the ratio
/// `|I(a w)| / |I(a)|` written in terms of `r = q_{n-1}(a) / q_n(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioFn {
    pub extension: Word,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
    pub delta: BigInt,
}

impl RatioFn {
    pub fn new(extension: &Word) -> Result<Self> {
        if extension.is_empty() {
            return Err(Error::Unsupported("ratio function of the empty word".into()));
        }
        let m = continuants(extension);
        // alpha = K(w_2..w_m), beta = K(w), gamma - alpha = K(w_2..w_{m-1}),
        // delta - beta = K(w_1..w_{m-1}).
        Ok(RatioFn {
            extension: extension.clone(),
            alpha: m.p.clone(),
            beta: m.q.clone(),
            gamma: &m.p + &m.p_prev,
            delta: &m.q + &m.q_prev,
        })
    }

    pub fn eval(&self, r: &BigRational) -> BigRational {
        let lift = |n: &BigInt| BigRational::from_integer(n.clone());
        let one = BigRational::one();
        (r + &one) / ((lift(&self.alpha) * r + lift(&self.beta)) * (lift(&self.gamma) * r + lift(&self.delta)))
    }

    /// An upper bound of `f` on `[r0, r1]` from monotonicity of each factor.
    fn upper_on(&self, r0: &BigRational, r1: &BigRational) -> BigRational {
        let lift = |n: &BigInt| BigRational::from_integer(n.clone());
        (r1 + BigRational::one())
            / ((lift(&self.alpha) * r0 + lift(&self.beta)) * (lift(&self.gamma) * r0 + lift(&self.delta)))
    }
}

impl fmt::Display for RatioFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = |a: &BigInt, b: &BigInt| {
            if a.is_one() {
                format!("r+{b}")
            } else {
                format!("{a}r+{b}")
            }
        };
        write!(
            f,
            "(r+1)/(({})({}))",
            lin(&self.alpha, &self.beta),
            lin(&self.gamma, &self.delta)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArgMax {
    Zero,
    One,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioMax {
    pub value: Surd,
    pub location: ArgMax,
}

/// `max_{0 <= r <= 1} f(r)` in closed form.
///
/// With `u = r + 1`, `B = beta - alpha`, `D = delta - gamma` the function is
/// `u / ((alpha u + B)(gamma u + D))`, unimodal on `u > 0` with peak at
/// `u* = sqrt(B D / (alpha gamma))` and peak value
/// `1 / (sqrt(alpha D) + sqrt(gamma B))^2`.
pub fn max_ratio(f: &RatioFn) -> RatioMax {
    let b = &f.beta - &f.alpha;
    let d = &f.delta - &f.gamma;
    let ag = &f.alpha * &f.gamma;
    let bd = &b * &d;
    // u*^2 = bd / ag compared with 1 and 4.
    if bd <= ag {
        let v = BigRational::new(BigInt::one(), &f.beta * &f.delta);
        return RatioMax {
            value: Surd::rational(&v),
            location: ArgMax::Zero,
        };
    }
    if bd >= &ag * 4 {
        let v = BigRational::new(
            BigInt::from(2),
            (&f.alpha + &f.beta) * (&f.gamma + &f.delta),
        );
        return RatioMax {
            value: Surd::rational(&v),
            location: ArgMax::One,
        };
    }
    let base = &f.alpha * &d + &f.gamma * &b;
    let peak = Surd::new(base, 2, 1, &ag * &bd)
        .and_then(|s| s.recip())
        .expect("positive denominator");
    RatioMax {
        value: peak,
        location: ArgMax::Interior,
    }
}

/// Rigorous bracket `[lo, hi]` of the maximum by branch and bound over
/// rational subintervals of `[0, 1]` down to width `2^-depth`.
pub fn max_ratio_by_subdivision(f: &RatioFn, depth: u32) -> (BigRational, BigRational) {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut best = f.eval(&zero).max(f.eval(&one));
    let mut pending = vec![(zero, one, 0u32)];
    let mut leaf_max = BigRational::zero();
    while let Some((r0, r1, level)) = pending.pop() {
        let ub = f.upper_on(&r0, &r1);
        if ub <= best {
            continue;
        }
        if level == depth {
            leaf_max = leaf_max.max(ub);
            continue;
        }
        let mid = (&r0 + &r1) / BigInt::from(2);
        let fm = f.eval(&mid);
        if fm > best {
            best = fm;
        }
        pending.push((r0, mid.clone(), level + 1));
        pending.push((mid, r1, level + 1));
    }
    let hi = leaf_max.max(best.clone());
    (best, hi)
}
