//! Exact quadratic irrationals `(a + b sqrt(D)) / c` and finite sums of them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::{continuants, CfExpansion, ContinuantMatrix, Word};
use crate::decimal::DecimalInterval;
use crate::error::{Error, Result};
use crate::interval::{bits_for_digits, Interval};

/// Anything that can be enclosed by a dyadic interval at a requested scale.
pub trait Enclose {
    fn enclose(&self, bits: u32) -> Interval;
}

impl Enclose for BigRational {
    fn enclose(&self, bits: u32) -> Interval {
        Interval::from_ratio(self, bits)
    }
}

/// Decimal enclosure with `digits` fractional digits.
pub fn approx<T: Enclose + ?Sized>(value: &T, digits: u32) -> DecimalInterval {
    value
        .enclose(bits_for_digits(digits))
        .to_decimal(digits as usize)
}

/// `n = s^2 t` with `t` square-free; `n >= 1`.
pub fn square_free_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "square-free part of a non-positive integer");
    if let Some(v) = n.to_u128() {
        let (s, t) = square_free_u128(v);
        return (BigInt::from(s), BigInt::from(t));
    }
    let mut rem = n.clone();
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p * &p <= rem {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            s *= &p;
        }
        if (&rem % &p).is_zero() {
            rem /= &p;
            t *= &p;
        }
        p += 1;
    }
    // rem has at most two prime factors now.
    let r = rem.sqrt();
    if &r * &r == rem && !rem.is_one() {
        s *= r;
    } else {
        t *= rem;
    }
    (s, t)
}

fn square_free_u128(mut rem: u128) -> (u128, u128) {
    let mut s: u128 = 1;
    let mut t: u128 = 1;
    let mut p: u128 = 2;
    while p.saturating_mul(p).saturating_mul(p) <= rem {
        let p2 = p * p;
        while rem % p2 == 0 {
            rem /= p2;
            s *= p;
        }
        if rem % p == 0 {
            rem /= p;
            t *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rem.sqrt();
    if r * r == rem && rem != 1 {
        s *= r;
    } else {
        t *= rem;
    }
    (s, t)
}

/// `(a + b sqrt(d)) / c` in canonical form: `c > 0`, `gcd(a, b, c) = 1`,
/// `d` square-free and greater than 1, or `b = d = 0` for a rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Surd {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (mut a, mut b, mut c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::Unsupported(format!("square root of negative {d}")));
        }
        let mut d = if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            BigInt::zero()
        } else {
            let (s, t) = square_free_part(&d);
            b *= s;
            t
        };
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
            d = BigInt::zero();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Surd { a, b, c, d })
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Surd::new(n, 0, 1, 0).expect("integer")
    }

    pub fn rational(r: &BigRational) -> Self {
        Surd::new(r.numer().clone(), 0, r.denom().clone(), 0).expect("nonzero denominator")
    }

    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Surd::new(0, 1, 1, n)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// The radicand, 0 for rationals.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    fn common_field(&self, o: &Surd) -> Result<BigInt> {
        match (self.is_rational(), o.is_rational()) {
            (true, _) => Ok(o.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == o.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch(self.d.to_string(), o.d.to_string())),
        }
    }

    pub fn add(&self, o: &Surd) -> Result<Surd> {
        let d = self.common_field(o)?;
        Surd::new(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
            d,
        )
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, o: &Surd) -> Result<Surd> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Surd) -> Result<Surd> {
        let d = self.common_field(o)?;
        Surd::new(
            &self.a * &o.a + &self.b * &o.b * &d,
            &self.a * &o.b + &self.b * &o.a,
            &self.c * &o.c,
            d,
        )
    }

    pub fn conjugate(&self) -> Surd {
        Surd {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Surd::new(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    pub fn div(&self, o: &Surd) -> Result<Surd> {
        self.mul(&o.recip()?)
    }

    /// `(P + P' x) / (Q + Q' x)`.
    pub fn mobius(&self, p: &BigInt, p1: &BigInt, q: &BigInt, q1: &BigInt) -> Result<Surd> {
        let num = Surd::from_int(p.clone()).add(&Surd::from_int(p1.clone()).mul(self)?)?;
        let den = Surd::from_int(q.clone()).add(&Surd::from_int(q1.clone()).mul(self)?)?;
        num.div(&den)
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        let s = match (sa, sb) {
            (NoSign, NoSign) => return Ordering::Equal,
            (_, NoSign) => sa,
            (NoSign, _) => sb,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * &self.d;
                if a2 > b2d {
                    sa
                } else {
                    sb
                }
            }
        };
        if s == Plus {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(80).mid_f64()
    }
}

impl Enclose for Surd {
    fn enclose(&self, bits: u32) -> Interval {
        let w = bits + 8;
        let mut num = Interval::from_int(self.a.clone(), w);
        if !self.b.is_zero() {
            let root = Interval::from_int(self.d.clone(), w).sqrt().expect("d >= 0");
            num = &num + &root.mul_int(&self.b);
        }
        num.div_int(&self.c).rescale(bits)
    }
}

impl Ord for Surd {
    fn cmp(&self, o: &Surd) -> Ordering {
        match self.sub(o) {
            Ok(diff) => diff.signum(),
            Err(_) => SurdSum::from(self.clone()).cmp(&SurdSum::from(o.clone())),
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, o: &Surd) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = |b: &BigInt| -> String {
            if b.is_one() {
                format!("√{}", self.d)
            } else if (-b).is_one() {
                format!("-√{}", self.d)
            } else {
                format!("{b}√{}", self.d)
            }
        };
        let body = if self.b.is_zero() {
            self.a.to_string()
        } else if self.a.is_zero() {
            radical(&self.b)
        } else if self.b.is_negative() {
            format!("{} - {}", self.a, radical(&-&self.b))
        } else {
            format!("{} + {}", self.a, radical(&self.b))
        };
        if self.c.is_one() {
            f.write_str(&body)
        } else if self.b.is_zero() || self.a.is_zero() {
            write!(f, "{body}/{}", self.c)
        } else {
            write!(f, "({body})/{}", self.c)
        }
    }
}

/// The purely or eventually periodic continued fraction
/// `[0; preperiod, period, period, ...]`.
pub fn eval_periodic(preperiod: &Word, period: &Word) -> Result<Surd> {
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    // x = [0; period, 1/x] solves q' x^2 + (q - p') x - p = 0.
    let m = continuants(period);
    let lin = &m.q - &m.p_prev;
    let disc = &lin * &lin + BigInt::from(4) * &m.p * &m.q_prev;
    let x = Surd::new(-lin, 1, BigInt::from(2) * &m.q_prev, disc)?;
    let pre: ContinuantMatrix = continuants(preperiod);
    x.mobius(&pre.p, &pre.p_prev, &pre.q, &pre.q_prev)
}

impl CfExpansion {
    pub fn to_surd(&self) -> Result<Surd> {
        let head = Surd::from_int(self.a0.clone());
        let tail = match self.finite_value() {
            Some(v) => return Ok(Surd::rational(&v)),
            None => eval_periodic(&self.preperiod, &self.period)?,
        };
        head.add(&tail)
    }
}

/// A finite sum of surds, at most one term per radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SurdSum {
    terms: Vec<Surd>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn terms(&self) -> &[Surd] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single surd this sum equals, when it lies in one field.
    pub fn as_surd(&self) -> Option<Surd> {
        match self.terms.as_slice() {
            [] => Some(Surd::from_int(0)),
            [t] => Some(t.clone()),
            [r, t] if r.is_rational() => r.add(t).ok(),
            _ => None,
        }
    }

    pub fn add_surd(&self, s: &Surd) -> SurdSum {
        // Canonical terms: one rational and one pure radical per radicand.
        let rational = Surd::new(s.a.clone(), 0, s.c.clone(), 0).expect("c > 0");
        let radical = Surd::new(0, s.b.clone(), s.c.clone(), s.d.clone()).expect("c > 0");
        let mut terms = self.terms.clone();
        for part in [rational, radical] {
            if part.is_zero() {
                continue;
            }
            match terms.iter().position(|t| t.d == part.d) {
                Some(i) => {
                    let merged = terms[i].add(&part).expect("same field");
                    if merged.is_zero() {
                        terms.remove(i);
                    } else {
                        terms[i] = merged;
                    }
                }
                None => terms.push(part),
            }
        }
        terms.sort_by(|x, y| x.d.cmp(&y.d));
        SurdSum { terms }
    }

    pub fn add(&self, o: &SurdSum) -> SurdSum {
        o.terms.iter().fold(self.clone(), |acc, t| acc.add_surd(t))
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum {
            terms: self.terms.iter().map(Surd::neg).collect(),
        }
    }

    pub fn sub(&self, o: &SurdSum) -> SurdSum {
        self.add(&o.neg())
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(80).mid_f64()
    }
}

impl From<Surd> for SurdSum {
    fn from(s: Surd) -> SurdSum {
        SurdSum::zero().add_surd(&s)
    }
}

impl Enclose for SurdSum {
    fn enclose(&self, bits: u32) -> Interval {
        self.terms
            .iter()
            .fold(Interval::zero(bits), |acc, t| &acc + &t.enclose(bits + 8))
            .rescale(bits)
    }
}

impl Ord for SurdSum {
    fn cmp(&self, o: &SurdSum) -> Ordering {
        let diff = self.sub(o);
        if diff.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = diff.as_surd() {
            return s.signum();
        }
        // A nonzero sum over distinct square-free radicands is nonzero, so
        // refinement terminates.
        let mut bits = 64;
        loop {
            if let Some(sign) = diff.enclose(bits).sign() {
                return sign;
            }
            bits *= 2;
        }
    }
}

impl PartialOrd for SurdSum {
    fn partial_cmp(&self, o: &SurdSum) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.signum()) {
                (0, _) => write!(f, "{t}")?,
                (_, Ordering::Less) => write!(f, " - {}", t.neg())?,
                _ => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}
