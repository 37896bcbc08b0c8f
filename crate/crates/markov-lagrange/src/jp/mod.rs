//! Periodic-orbit estimates of the dimension of letter-restricted Cantor sets.
//!
//! The transfer operator of the Gauss system restricted to a shift has a
//! Fredholm determinant `Delta(s)` whose power series in the orbit data is
//! truncated at order `N`; the largest zero of `Delta_N` in `(0, 1)` estimates
//! the dimension. The truncation error is not controlled, so every estimate is
//! labelled heuristic. [`pressure_bracket`] gives a certified bracket from
//! cylinder ratios.

mod pressure;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cf::{continuants, Digit, Word};
use crate::decimal::DecimalInterval;
use crate::error::{Error, Result};
use crate::interval::{bits_for_digits, Interval};
use crate::surd::{eval_periodic, Surd};
use crate::symbolic::{Automaton, SftSpec};

pub use pressure::{pressure_bracket, PressureBracket};

pub const HEURISTIC: &str = "HEURISTIC";
pub const MAX_ORDER: usize = 12;

/// Working precision for root isolation.
const ROOT_DIGITS: u32 = 60;

/// The Gauss map restricted to a letter shift of finite type.
#[derive(Clone, Debug)]
pub struct GaussSystem {
    spec: SftSpec,
    automaton: Automaton,
    memory: usize,
}

impl GaussSystem {
    pub fn new(spec: &SftSpec) -> Result<Self> {
        if spec.is_block_presented() {
            return Err(Error::Unsupported(format!(
                "`{}` is block-presented; periodic-orbit sums need a letter shift",
                spec.name
            )));
        }
        let automaton = Automaton::compile(spec)?;
        if !automaton.is_transitive() {
            return Err(Error::NotTransitive(spec.name.clone()));
        }
        let memory = spec.forbidden.iter().map(Word::len).max().unwrap_or(1).saturating_sub(1);
        Ok(GaussSystem {
            spec: spec.clone(),
            automaton,
            memory,
        })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &SftSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &[Digit] {
        &self.spec.alphabet
    }

    /// Length of the longest forbidden word minus one.
    pub fn memory(&self) -> usize {
        self.memory
    }

    pub(crate) fn edges(&self) -> &[Vec<(Digit, usize)>] {
        self.automaton.nfa_edges()
    }

    /// Whether the finite word avoids every forbidden factor.
    pub fn is_admissible(&self, w: &[Digit]) -> bool {
        w.iter().all(|d| self.spec.alphabet.contains(d))
            && !self
                .spec
                .forbidden
                .iter()
                .any(|f| w.windows(f.len()).any(|x| x == f.digits()))
    }

    /// Whether `...www...` avoids every forbidden factor.
    pub fn is_cyclically_admissible(&self, w: &[Digit]) -> bool {
        self.automaton.accepts_periodic(w)
    }

    /// Number of points of period dividing `n`: the trace of `A^n` for the
    /// adjacency matrix of the presentation.
    pub fn periodic_point_count(&self, n: usize) -> BigInt {
        let edges = self.edges();
        let m = edges.len();
        let mut a = vec![vec![BigInt::zero(); m]; m];
        for (i, row) in edges.iter().enumerate() {
            for &(_, j) in row {
                a[i][j] += 1;
            }
        }
        let mut p = a.clone();
        for _ in 1..n {
            let mut next = vec![vec![BigInt::zero(); m]; m];
            for i in 0..m {
                for k in 0..m {
                    if p[i][k].is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        if !a[k][j].is_zero() {
                            next[i][j] += &p[i][k] * &a[k][j];
                        }
                    }
                }
            }
            p = next;
        }
        (0..m).map(|i| p[i][i].clone()).sum()
    }
}

/// One primitive periodic orbit, represented by its least rotation.
#[derive(Clone, Debug)]
pub struct PeriodicOrbit {
    pub word: Word,
    /// `prod x_i^2` over the orbit, the reciprocal of `|(T^n)'|`.
    pub multiplier: Interval,
    pub log_multiplier: Interval,
}

impl PeriodicOrbit {
    pub fn new(word: Word, bits: u32) -> Self {
        let (tr, disc) = trace_and_discriminant(&word);
        // Dominant eigenvalue of the continuant matrix.
        let root = Interval::from_int(disc, bits).sqrt().expect("positive discriminant");
        let mu = (&Interval::from_int(tr, bits) + &root).mul_pow2(-1);
        let log_multiplier = mu.ln().expect("eigenvalue above 1").mul_int(&BigInt::from(-2));
        let multiplier = mu.square().recip().expect("nonzero eigenvalue");
        PeriodicOrbit {
            word,
            multiplier,
            log_multiplier,
        }
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }
}

fn trace_and_discriminant(w: &Word) -> (BigInt, BigInt) {
    let m = continuants(w);
    let tr = &m.q + &m.p_prev;
    let disc = &tr * &tr - m.determinant() * 4;
    (tr, disc)
}

/// Multiplier from the eigenvalues of the continuant matrix, `4 / (tr + sqrt(disc))^2`.
pub fn multiplier_exact(w: &Word) -> Result<Surd> {
    let (tr, disc) = trace_and_discriminant(w);
    let mu = Surd::new(tr, 1, 2, disc)?;
    mu.mul(&mu)?.recip()
}

/// Multiplier as the product of `x_i^2` over the orbit points
/// `x_i = [0; overline(rotation_i(w))]`.
pub fn multiplier_from_orbit_points(w: &Word) -> Result<Surd> {
    let mut acc = Surd::from_int(1);
    for i in 0..w.len() {
        let x = eval_periodic(&Word::empty(), &w.rotate(i))?;
        acc = acc.mul(&x)?.mul(&x)?;
    }
    Ok(acc)
}

/// Primitive periodic orbits of exact period `n`, sorted by representative.
pub fn enumerate_orbits(sys: &GaussSystem, n: usize, bits: u32) -> Vec<PeriodicOrbit> {
    orbit_representatives(sys, n)
        .into_par_iter()
        .map(|w| PeriodicOrbit::new(w, bits))
        .collect()
}

/// Least rotations of the primitive admissible cycles of length `n`, sorted.
pub fn orbit_representatives(sys: &GaussSystem, n: usize) -> Vec<Word> {
    if n == 0 {
        return Vec::new();
    }
    let edges = sys.edges();
    let mut found = BTreeSet::new();
    let mut path = Vec::with_capacity(n);
    for start in 0..edges.len() {
        walk(edges, start, start, n, &mut path, &mut |w: &[Digit]| {
            let word = Word::new(w.to_vec()).expect("positive digits");
            if word.is_primitive() && word == word.least_rotation() {
                found.insert(word);
            }
        });
    }
    debug_assert!(found.iter().all(|w| sys.is_cyclically_admissible(w.digits())));
    found.into_iter().collect()
}

/// Closed walks of length `n` from `start`; every path prefix is admissible.
fn walk(
    edges: &[Vec<(Digit, usize)>],
    start: usize,
    at: usize,
    n: usize,
    path: &mut Vec<Digit>,
    emit: &mut dyn FnMut(&[Digit]),
) {
    if path.len() == n {
        if at == start {
            emit(path);
        }
        return;
    }
    for &(d, t) in &edges[at] {
        path.push(d);
        walk(edges, start, t, n, path, emit);
        path.pop();
    }
}

/// Orbit data up to a fixed order, with the `s`-independent weights
/// `d / (1 - (-1)^{dk} lambda^k)` cached for every orbit of period `d` and
/// every `k <= order / d`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub system: String,
    pub order: usize,
    pub bits: u32,
    orbits: Vec<Vec<PeriodicOrbit>>,
    weights: Vec<Vec<Vec<Interval>>>,
    weights_f64: Vec<Vec<Vec<f64>>>,
    logs_f64: Vec<Vec<f64>>,
}

impl OrbitTable {
    pub fn build(sys: &GaussSystem, order: usize, bits: u32) -> Result<Self> {
        check_order(order)?;
        let orbits: Vec<Vec<PeriodicOrbit>> = (1..=order).map(|d| enumerate_orbits(sys, d, bits)).collect();
        Self::from_orbits(sys.name(), orbits, bits)
    }

    /// Table from explicit orbit lists, `orbits[d - 1]` holding period `d`.
    pub fn from_orbits(system: &str, orbits: Vec<Vec<PeriodicOrbit>>, bits: u32) -> Result<Self> {
        let order = orbits.len();
        check_order(order)?;
        if let Some(o) = orbits.iter().enumerate().find_map(|(i, l)| l.iter().find(|o| o.period() != i + 1)) {
            return Err(Error::Unsupported(format!("orbit {} filed under the wrong period", o.word)));
        }
        let one = Interval::one(bits);
        let mut weights = Vec::with_capacity(order);
        let mut weights_f64 = Vec::with_capacity(order);
        let mut logs_f64 = Vec::with_capacity(order);
        for (i, list) in orbits.iter().enumerate() {
            let d = i + 1;
            let reps = order / d;
            let (w, wf): (Vec<Vec<Interval>>, Vec<Vec<f64>>) = list
                .par_iter()
                .map(|o| {
                    let mut iv = Vec::with_capacity(reps);
                    let mut fl = Vec::with_capacity(reps);
                    let mut power = one.clone();
                    for k in 1..=reps {
                        power = &power * &o.multiplier;
                        let signed = if (d * k) % 2 == 0 { power.clone() } else { -&power };
                        let denom = &one - &signed;
                        let weight = Interval::from_int(d, bits).checked_div(&denom).expect("multiplier below 1");
                        fl.push(weight.mid_f64());
                        iv.push(weight);
                    }
                    (iv, fl)
                })
                .unzip();
            weights.push(w);
            weights_f64.push(wf);
            logs_f64.push(list.iter().map(|o| o.log_multiplier.mid_f64()).collect());
        }
        Ok(OrbitTable {
            system: system.to_string(),
            order,
            bits,
            orbits,
            weights,
            weights_f64,
            logs_f64,
        })
    }

    /// Primitive orbits of exact period `d`.
    pub fn orbits(&self, d: usize) -> &[PeriodicOrbit] {
        &self.orbits[d - 1]
    }

    fn check(&self, n: usize) -> Result<()> {
        check_order(n)?;
        if n > self.order {
            return Err(Error::Unsupported(format!(
                "order {n} exceeds the enumerated orbit data (order {})",
                self.order
            )));
        }
        Ok(())
    }

    /// `t_n(s)` for `n = 1..=order`, enclosed.
    pub fn traces(&self, s: &Interval, order: usize) -> Result<Vec<Interval>> {
        self.check(order)?;
        Ok((1..=order)
            .map(|n| {
                divisors(n)
                    .into_iter()
                    .map(|d| {
                        let k = n / d;
                        let kk = BigInt::from(k);
                        self.orbits[d - 1]
                            .par_iter()
                            .zip(self.weights[d - 1].par_iter())
                            .map(|(o, w)| {
                                let e = (&o.log_multiplier * s).mul_int(&kk).exp();
                                &w[k - 1] * &e
                            })
                            .reduce(|| Interval::zero(self.bits), |a, b| &a + &b)
                    })
                    .sum()
            })
            .collect())
    }

    fn traces_f64(&self, s: f64, order: usize) -> Vec<f64> {
        (1..=order)
            .map(|n| {
                divisors(n)
                    .into_iter()
                    .map(|d| {
                        let k = n / d;
                        self.logs_f64[d - 1]
                            .iter()
                            .zip(&self.weights_f64[d - 1])
                            .map(|(l, w)| w[k - 1] * (k as f64 * s * l).exp())
                            .sum::<f64>()
                    })
                    .sum()
            })
            .collect()
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Unsupported(format!("order {n} outside 1..={MAX_ORDER}")));
    }
    Ok(())
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `sum_{m <= N} c_m` with `c_0 = 1`, `c_m = -(1/m) sum_{j=1}^m t_j c_{m-j}`.
fn truncated_sum_iv(t: &[Interval], bits: u32) -> Interval {
    let mut c = vec![Interval::one(bits)];
    for m in 1..=t.len() {
        let acc: Interval = (1..=m).map(|j| &t[j - 1] * &c[m - j]).sum();
        c.push(-&acc.div_int(&BigInt::from(m)));
    }
    c.into_iter().sum()
}

fn truncated_sum_f64(t: &[f64]) -> f64 {
    let mut c = vec![1.0];
    for m in 1..=t.len() {
        let acc: f64 = (1..=m).map(|j| t[j - 1] * c[m - j]).sum();
        c.push(-acc / m as f64);
    }
    c.iter().sum()
}

/// Enclosure of `Delta_N(s)`.
pub fn determinant(table: &OrbitTable, s: &BigRational, order: usize) -> Result<Interval> {
    let s = Interval::from_ratio(s, table.bits);
    let t = table.traces(&s, order)?;
    Ok(truncated_sum_iv(&t, table.bits))
}

/// `Delta_N(s)` in floating point.
pub fn determinant_f64(table: &OrbitTable, s: f64, order: usize) -> Result<f64> {
    table.check(order)?;
    Ok(truncated_sum_f64(&table.traces_f64(s, order)))
}

/// Order used when none is given: 8 up to three letters, 6 beyond.
pub fn default_order(sys: &GaussSystem) -> usize {
    if sys.alphabet().len() <= 3 {
        8
    } else {
        6
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimEstimate {
    pub set: String,
    pub order: usize,
    pub value: f64,
    /// Enclosure of the largest zero of `Delta_N` in `(0, 1)`.
    pub bracket: DecimalInterval,
    /// `|s_N - s_{N-1}|`, absent at order 1.
    pub residual: Option<f64>,
    pub label: &'static str,
}

/// Largest zero of `Delta_N` on `(0.01, 0.99)`: a downward scan in steps of
/// `0.01` finds the first sign change, then interval bisection narrows it to
/// `tolerance` or to the working precision.
pub fn largest_root(table: &OrbitTable, order: usize, tolerance: f64) -> Result<(BigRational, BigRational)> {
    table.check(order)?;
    let f = |s: f64| truncated_sum_f64(&table.traces_f64(s, order));
    let mut hi_s = 99;
    let mut f_hi = f(0.99);
    let mut bracket = None;
    for j in (1..99).rev() {
        let f_lo = f(j as f64 / 100.0);
        if f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
            bracket = Some((j, hi_s));
            break;
        }
        hi_s = j;
        f_hi = f_lo;
    }
    let (a, b) = bracket.ok_or(Error::NoRoot(order))?;
    let hundred = BigInt::from(100);
    let mut lo = BigRational::new(a.into(), hundred.clone());
    let mut hi = BigRational::new(b.into(), hundred);
    let sign_at = |s: &BigRational| determinant(table, s, order).map(|d| d.sign());
    let lo_sign = sign_at(&lo)?;
    let tol = BigRational::from_float(tolerance).unwrap_or_else(BigRational::zero);
    let two = BigRational::from_integer(2.into());
    if lo_sign.is_none() || sign_at(&hi)?.is_none() {
        // Sign change too close to a grid point to resolve; keep the grid bracket.
        return Ok((lo, hi));
    }
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        match sign_at(&mid)? {
            None => break,
            Some(sg) if Some(sg) == lo_sign => lo = mid,
            Some(_) => hi = mid,
        }
    }
    Ok((lo, hi))
}

pub fn estimate_dimension(sys: &GaussSystem, order: usize, tolerance: f64) -> Result<DimEstimate> {
    let table = OrbitTable::build(sys, order, bits_for_digits(ROOT_DIGITS))?;
    estimate_from_table(&table, order, tolerance)
}

pub fn estimate_from_table(table: &OrbitTable, order: usize, tolerance: f64) -> Result<DimEstimate> {
    let (lo, hi) = largest_root(table, order, tolerance)?;
    let mid = (&lo + &hi) / BigInt::from(2);
    let value = mid.to_f64().unwrap_or(f64::NAN);
    let residual = if order >= 2 {
        largest_root(table, order - 1, tolerance).ok().map(|(l, h)| {
            let prev = ((l + h) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN);
            (value - prev).abs()
        })
    } else {
        None
    };
    Ok(DimEstimate {
        set: table.system.clone(),
        order,
        value,
        bracket: DecimalInterval::new(&lo, &hi, 12),
        residual,
        label: HEURISTIC,
    })
}
