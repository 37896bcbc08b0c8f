//! Dyadic interval arithmetic with outward rounding.
//!
//! An [`Interval`] stores integers `lo <= hi` and a scale `bits`; it encloses
//! every real in `[lo / 2^bits, hi / 2^bits]`. Every operation returns an
//! interval containing all exact results for all inputs drawn from its
//! operands, so a strict comparison of endpoints is a proof.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::decimal::DecimalInterval;

/// Bits needed for `digits` decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    x.div_floor(&pow2(k))
}

fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    -floor_shr(&-x, k)
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &s * &s < *x {
        s + 1
    } else {
        s
    }
}

impl Interval {
    fn raw(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, bits }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Self {
        let v = n.into() << bits;
        Interval::raw(v.clone(), v, bits)
    }

    pub fn zero(bits: u32) -> Self {
        Interval::from_int(0, bits)
    }

    pub fn one(bits: u32) -> Self {
        Interval::from_int(1, bits)
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << bits;
        Interval::raw(
            floor_div(&scaled, r.denom()),
            ceil_div(&scaled, r.denom()),
            bits,
        )
    }

    /// Encloses `[a, b]`; the endpoints may come in either order.
    pub fn from_bounds(a: &BigRational, b: &BigRational, bits: u32) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Interval::from_ratio(a, bits).hull(&Interval::from_ratio(b, bits))
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        let r = BigRational::from_float(x).expect("finite float");
        Interval::from_ratio(&r, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn mid_f64(&self) -> f64 {
        let sum = BigRational::new(&self.lo + &self.hi, pow2(self.bits + 1));
        sum.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lower() <= *r && *r <= self.upper()
    }

    /// Sign if it is decided by the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Same enclosure at another scale, rounded outward.
    pub fn rescale(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = bits - self.bits;
                Interval::raw(&self.lo << k, &self.hi << k, bits)
            }
            Ordering::Less => {
                let k = self.bits - bits;
                Interval::raw(floor_shr(&self.lo, k), ceil_shr(&self.hi, k), bits)
            }
        }
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let bits = self.bits.max(other.bits);
        (self.rescale(bits), other.rescale(bits))
    }

    pub fn hull(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::raw(
            a.lo.clone().min(b.lo.clone()),
            a.hi.clone().max(b.hi.clone()),
            a.bits,
        )
    }

    /// Enclosure of `max(x, y)` over the two intervals.
    pub fn max(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::raw(a.lo.max(b.lo), a.hi.max(b.hi), a.bits)
    }

    pub fn min(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::raw(a.lo.min(b.lo), a.hi.min(b.hi), a.bits)
    }

    /// True when every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    pub fn upper_lt(&self, r: &BigRational) -> bool {
        self.upper() < *r
    }

    pub fn lower_gt(&self, r: &BigRational) -> bool {
        self.lower() > *r
    }

    /// Widens by `ulps` units in the last place on both sides.
    pub fn widen(&self, ulps: &BigInt) -> Self {
        Interval::raw(&self.lo - ulps, &self.hi + ulps, self.bits)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let a = &self.lo * n;
        let b = &self.hi * n;
        if a <= b {
            Interval::raw(a, b, self.bits)
        } else {
            Interval::raw(b, a, self.bits)
        }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division by zero");
        let (lo, hi) = if n.is_positive() {
            (floor_div(&self.lo, n), ceil_div(&self.hi, n))
        } else {
            (floor_div(&self.hi, n), ceil_div(&self.lo, n))
        };
        Interval::raw(lo, hi, self.bits)
    }

    /// Multiplies by `2^k`, exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            Interval::raw(&self.lo << k as u32, &self.hi << k as u32, self.bits)
        } else {
            let k = (-k) as u32;
            Interval::raw(self.lo.clone(), self.hi.clone(), self.bits + k)
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else if self.is_positive() {
            self.clone()
        } else {
            Interval::raw(BigInt::zero(), self.lo.abs().max(self.hi.abs()), self.bits)
        }
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        let lo = floor_shr(&(&a.lo * &a.lo), a.bits);
        let hi = ceil_shr(&(&a.hi * &a.hi), a.bits);
        Interval::raw(lo, hi, a.bits)
    }

    /// `self / other`, or `None` when `other` contains zero.
    pub fn checked_div(&self, other: &Interval) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let (a, b) = self.aligned(other);
        let bits = a.bits;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            let scaled = x << bits;
            for y in [&b.lo, &b.hi] {
                let f = floor_div(&scaled, y);
                let c = ceil_div(&scaled, y);
                lo = Some(match lo {
                    Some(l) if l <= f => l,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(h) if h >= c => h,
                    _ => c,
                });
            }
        }
        Some(Interval::raw(lo.unwrap(), hi.unwrap(), bits))
    }

    pub fn recip(&self) -> Option<Self> {
        Interval::one(self.bits).checked_div(self)
    }

    /// Square root, or `None` when the interval is entirely negative.
    /// Negative lower ends are clamped to zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let lo = if self.lo.is_positive() {
            (&self.lo << self.bits).sqrt()
        } else {
            BigInt::zero()
        };
        let hi = ceil_sqrt(&(&self.hi << self.bits));
        Some(Interval::raw(lo, hi, self.bits))
    }

    /// Enclosure of `exp` over the interval.
    pub fn exp(&self) -> Self {
        let lo = exp_point(&self.lo, self.bits);
        if self.lo == self.hi {
            return lo;
        }
        let hi = exp_point(&self.hi, self.bits);
        Interval::raw(lo.lo, hi.hi, self.bits)
    }

    /// Enclosure of the natural logarithm, or `None` unless the interval is positive.
    pub fn ln(&self) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_point(&self.lo, self.bits);
        if self.lo == self.hi {
            return Some(lo);
        }
        let hi = ln_point(&self.hi, self.bits);
        Some(Interval::raw(lo.lo, hi.hi, self.bits))
    }

    /// `self^s` for a positive base.
    pub fn pow(&self, s: &Interval) -> Option<Self> {
        let ln = self.ln()?;
        Some((&ln * s).exp())
    }

    pub fn to_decimal(&self, digits: usize) -> DecimalInterval {
        DecimalInterval::new(&self.lower(), &self.upper(), digits)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-&self.hi, -&self.lo, self.bits)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::raw(a.lo + b.lo, a.hi + b.hi, a.bits)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::raw(a.lo - b.hi, a.hi - b.lo, a.bits)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        let bits = a.bits;
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval::raw(floor_shr(min, bits), ceil_shr(max, bits), bits)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $method(self, other: Interval) -> Interval {
                (&self).$method(&other)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $method(self, other: &Interval) -> Interval {
                (&self).$method(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::zero(0), |acc, x| acc + x)
    }
}

/// Magnitude of the largest endpoint, in units of the scale.
fn mag(x: &Interval) -> BigInt {
    x.lo.abs().max(x.hi.abs())
}

/// `exp(m / 2^bits)` at scale `bits`.
fn exp_point(m: &BigInt, bits: u32) -> Interval {
    if m.is_zero() {
        return Interval::one(bits);
    }
    let magnitude = m.bits() as i64 - bits as i64;
    // |m / 2^bits| < 2^magnitude; reduce the argument below 2^-10.
    let k = (magnitude + 10).max(0) as u32;
    let w = bits + k + 24;
    let r_int = m << (w - bits - k);
    let r = Interval::raw(r_int.clone(), r_int, w);

    let mut sum = Interval::one(w);
    let mut term = Interval::one(w);
    let mut i: u32 = 1;
    loop {
        term = (&term * &r).div_int(&BigInt::from(i));
        sum = &sum + &term;
        if mag(&term) <= BigInt::one() {
            break;
        }
        i += 1;
    }
    // Tail after the last term is at most its magnitude since |r| < 2^-10.
    sum = sum.widen(&(mag(&term) + 1));
    for _ in 0..k {
        sum = sum.square();
    }
    sum.rescale(bits)
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
}

/// `2 atanh(u) = ln((1+u)/(1-u))` for `|u| <= 1/3`.
fn two_atanh(u: &Interval) -> Interval {
    let w = u.bits;
    let u2 = u.square();
    let mut power = u.clone();
    let mut sum = Interval::zero(w);
    let mut j: u32 = 0;
    loop {
        sum = &sum + &power.div_int(&BigInt::from(2 * j + 1));
        power = &power * &u2;
        j += 1;
        if mag(&power) <= BigInt::one() {
            break;
        }
    }
    // Remaining terms sum to at most |power| / (1 - u^2) <= 2 |power|.
    let sum = sum.widen(&(mag(&power) * 2 + 1));
    sum.mul_int(&BigInt::from(2))
}

fn ln2(w: u32) -> Interval {
    LN2_CACHE.with(|cache| {
        if let Some(v) = cache.borrow().get(&w) {
            return v.clone();
        }
        let third = Interval::from_ratio(&BigRational::new(1.into(), 3.into()), w);
        let v = two_atanh(&third);
        cache.borrow_mut().insert(w, v.clone());
        v
    })
}

/// `ln(m / 2^bits)` for `m > 0`, at scale `bits`.
fn ln_point(m: &BigInt, bits: u32) -> Interval {
    // m / 2^bits = 2^e * f with f in [1, 2).
    let mut e = m.bits() as i64 - 1 - bits as i64;
    let w = bits + 40 + (64 - e.unsigned_abs().leading_zeros());
    let f_at = |e: i64| -> Interval {
        // f = m * 2^(-bits - e), represented at scale w.
        let shift = w as i64 - bits as i64 - e;
        if shift >= 0 {
            let v = m << shift as u32;
            Interval::raw(v.clone(), v, w)
        } else {
            let s = (-shift) as u32;
            Interval::raw(floor_shr(m, s), ceil_shr(m, s), w)
        }
    };
    let mut f = f_at(e);
    // Keep f within [1/sqrt 2, sqrt 2] so that |u| < 0.172.
    let sqrt2_ish = Interval::from_ratio(&BigRational::new(181.into(), 128.into()), w);
    if sqrt2_ish.certainly_lt(&f) || sqrt2_ish.lo <= f.lo {
        e += 1;
        f = f_at(e);
    }
    let one = Interval::one(w);
    let u = (&f - &one).checked_div(&(&f + &one)).expect("f > 0");
    let ln_f = two_atanh(&u);
    let result = &ln2(w).mul_int(&BigInt::from(e)) + &ln_f;
    result.rescale(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u32 = 200;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn assert_encloses(iv: &Interval, x: f64, tol: f64) {
        let m = iv.mid_f64();
        assert!((m - x).abs() <= tol, "midpoint {m} vs {x}");
        assert!(iv.width_f64() < 1e-50, "width {}", iv.width_f64());
    }

    #[test]
    fn exact_rationals_round_outward() {
        let third = Interval::from_ratio(&q(1, 3), 10);
        assert!(third.contains(&q(1, 3)));
        assert!(third.width() <= q(1, 1024));
        let neg = Interval::from_ratio(&q(-1, 3), 10);
        assert!(neg.contains(&q(-1, 3)));
    }

    #[test]
    fn field_operations_enclose() {
        let a = Interval::from_ratio(&q(2, 3), B);
        let b = Interval::from_ratio(&q(-5, 7), B);
        assert!((&a + &b).contains(&q(-1, 21)));
        assert!((&a - &b).contains(&q(29, 21)));
        assert!((&a * &b).contains(&q(-10, 21)));
        assert!(a.checked_div(&b).unwrap().contains(&q(-14, 15)));
        assert!(b.square().contains(&q(25, 49)));
        let straddle = Interval::from_bounds(&q(-1, 2), &q(1, 3), B);
        assert!(a.checked_div(&straddle).is_none());
        assert_eq!(straddle.square().lower(), q(0, 1));
    }

    #[test]
    fn sqrt_encloses() {
        let two = Interval::from_int(2, B);
        let r = two.sqrt().unwrap();
        assert_encloses(&r, std::f64::consts::SQRT_2, 1e-15);
        assert!(r.square().contains(&q(2, 1)));
        assert!(Interval::from_int(-1, B).sqrt().is_none());
    }

    #[test]
    fn exp_and_ln_known_values() {
        let one = Interval::one(B);
        assert_encloses(&one.exp(), std::f64::consts::E, 1e-15);
        let e = one.exp();
        assert!(e.ln().unwrap().contains(&q(1, 1)));
        assert_encloses(&Interval::from_int(2, B).ln().unwrap(), std::f64::consts::LN_2, 1e-16);
        assert_encloses(&Interval::from_int(-30, B).exp(), (-30f64).exp(), 1e-25);
        let tenth = Interval::from_ratio(&q(1, 10), B);
        assert_encloses(&tenth.ln().unwrap(), (0.1f64).ln(), 1e-15);
        assert!(Interval::zero(B).ln().is_none());
    }

    #[test]
    fn pow_matches_float() {
        let base = Interval::from_ratio(&q(1, 35), B);
        let s = Interval::from_ratio(&q(174813, 1_000_000), B);
        let v = base.pow(&s).unwrap();
        assert_encloses(&v, (1.0f64 / 35.0).powf(0.174813), 1e-15);
    }

    #[test]
    fn exp_of_wide_interval_is_monotone_hull() {
        let iv = Interval::from_bounds(&q(-1, 1), &q(1, 1), B);
        let e = iv.exp();
        assert!(e.lower_gt(&q(36, 100)) && e.lower() < q(37, 100));
        assert!(e.upper_lt(&q(272, 100)) && e.upper() > q(271, 100));
    }

    #[test]
    fn comparisons_are_strict() {
        let a = Interval::from_ratio(&q(1, 3), B);
        let b = Interval::from_ratio(&q(1, 2), B);
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_lt(&a));
        assert!(!a.certainly_lt(&a));
        assert_eq!(b.sign(), Some(Ordering::Greater));
        assert_eq!(Interval::zero(B).sign(), Some(Ordering::Equal));
    }

    #[test]
    fn decimal_rendering_brackets_value() {
        let third = Interval::from_ratio(&q(1, 3), B);
        let d = third.to_decimal(6);
        assert_eq!(d.lo, "0.333333");
        assert_eq!(d.hi, "0.333334");
    }
}
