use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use markov_lagrange::cf::{compare_cf, continuants, cylinder, cylinder_length, CfExpansion, ContinuantMatrix, Word};
use markov_lagrange::cover::{builtin_cases, max_ratio, min_admissible_s, verify_case_at, RatioFn};
use markov_lagrange::interval::Interval;
use markov_lagrange::surd::{eval_periodic, Enclose};
use markov_lagrange::symbolic::{markov_value, PeriodicSeq, SftSpec};

fn word(max_digit: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=max_digit, len).prop_map(|d| Word::new(d).unwrap())
}

fn ratio() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #[test]
    fn continuant_determinant_is_a_sign(w in word(20, 0..25)) {
        let det = continuants(&w).determinant();
        let expected = if w.len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(det, expected);
    }

    #[test]
    fn continuants_are_multiplicative(u in word(9, 0..12), v in word(9, 0..12)) {
        prop_assert_eq!(continuants(&u.concat(&v)), continuants(&u).mul(&continuants(&v)));
        let pushed = v.digits().iter().fold(continuants(&u), |m, &d| m.push(d));
        prop_assert_eq!(pushed, continuants(&u.concat(&v)));
        prop_assert_eq!(continuants(&Word::empty()), ContinuantMatrix::identity());
    }

    #[test]
    fn cylinder_length_matches_endpoints(w in word(12, 1..15)) {
        let c = cylinder(&w);
        prop_assert_eq!(c.length(), cylinder_length(&w));
        let inner = w.concat(&Word::new(vec![1]).unwrap());
        let ic = cylinder(&inner);
        prop_assert!(c.left <= ic.left && ic.right <= c.right);
    }

    #[test]
    fn digit_rule_agrees_with_surd_order(
        a in word(4, 0..5), p in word(4, 1..5),
        b in word(4, 0..5), r in word(4, 1..5),
    ) {
        let x = CfExpansion::periodic(0, a.clone(), p.clone()).unwrap();
        let y = CfExpansion::periodic(0, b.clone(), r.clone()).unwrap();
        let sx = eval_periodic(&a, &p).unwrap();
        let sy = eval_periodic(&b, &r).unwrap();
        prop_assert_eq!(compare_cf(&x, &y), sx.cmp(&sy));
    }

    #[test]
    fn digit_rule_agrees_on_finite_expansions(a in word(5, 1..8), b in word(5, 1..8)) {
        let x = CfExpansion::finite(0, a);
        let y = CfExpansion::finite(0, b);
        prop_assert_eq!(compare_cf(&x, &y), x.finite_value().unwrap().cmp(&y.finite_value().unwrap()));
    }

    #[test]
    fn markov_value_ignores_shift_and_reversal(p in word(3, 1..7), k in 0usize..7) {
        let seq = PeriodicSeq::new(p).unwrap();
        let m = markov_value(&seq).unwrap().value;
        prop_assert_eq!(&markov_value(&seq.shift(k)).unwrap().value, &m);
        prop_assert_eq!(&markov_value(&seq.reversed()).unwrap().value, &m);
    }

    #[test]
    fn ratio_function_is_exact(a in word(6, 1..10), w in word(6, 1..6)) {
        let m = continuants(&a);
        let r = BigRational::new(m.q_prev.clone(), m.q.clone());
        let f = RatioFn::new(&w).unwrap();
        let direct = cylinder_length(&a.concat(&w)) / cylinder_length(&a);
        prop_assert_eq!(f.eval(&r), direct.clone());
        let top = max_ratio(&f).value.enclose(128);
        prop_assert!(direct <= top.upper());
    }

    #[test]
    fn ratio_maximum_dominates_samples(w in word(5, 1..6), n in 0i64..=64) {
        let f = RatioFn::new(&w).unwrap();
        let top = max_ratio(&f).value.enclose(128);
        let v = f.eval(&q(n, 64));
        prop_assert!(v <= top.upper());
    }

    #[test]
    fn spec_text_round_trips(
        letters in prop::collection::btree_set(1u32..=12, 1..5),
        forbidden in prop::collection::vec(prop::collection::vec(0usize..4, 1..4), 0..4),
    ) {
        let alphabet: Vec<u32> = letters.into_iter().collect();
        let forbidden: Vec<String> = forbidden
            .iter()
            .map(|ix| ix.iter().map(|&i| alphabet[i % alphabet.len()].to_string()).collect::<Vec<_>>().join(",") + ",")
            .collect();
        let refs: Vec<&str> = forbidden.iter().map(String::as_str).collect();
        let spec = SftSpec::letters("random", &alphabet, &refs).unwrap();
        let text = spec.to_text();
        prop_assert_eq!(SftSpec::parse(&text).unwrap(), spec);
    }

    #[test]
    fn interval_arithmetic_encloses(a in ratio(), b in ratio()) {
        let (ia, ib) = (Interval::from_ratio(&a, 80), Interval::from_ratio(&b, 80));
        prop_assert!((&ia + &ib).contains(&(&a + &b)));
        prop_assert!((&ia - &ib).contains(&(&a - &b)));
        prop_assert!((&ia * &ib).contains(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(ia.checked_div(&ib).unwrap().contains(&(&a / &b)));
        }
        let x = a.abs() + BigRational::one();
        let ix = Interval::from_ratio(&x, 80);
        prop_assert!(ix.ln().unwrap().exp().contains(&x));
        prop_assert!(ix.sqrt().unwrap().square().contains(&x));
        let y = ix.ln().unwrap().mid_f64();
        prop_assert!((y - num_traits::ToPrimitive::to_f64(&x).unwrap().ln()).abs() < 1e-12);
    }
}

#[test]
fn covering_sums_decrease_in_s() {
    let grid: Vec<BigRational> = (5..=95).map(|k| q(k, 100)).collect();
    for case in builtin_cases() {
        let sums: Vec<Interval> = grid
            .iter()
            .map(|s| verify_case_at(&case, s, 96).unwrap().max_enclosure)
            .collect();
        for w in sums.windows(2) {
            assert!(w[1].certainly_lt(&w[0]), "{}", case.name);
        }
    }
}

#[test]
fn smallest_contracting_exponent_is_below_the_catalog_one() {
    for case in builtin_cases() {
        let s = min_admissible_s(&case.rules, &q(1, 10_000_000), 96).unwrap();
        assert!(s <= case.s(), "{}: {s}", case.name);
        assert!(!verify_case_at(&case, &(&s - q(1, 1000)), 96).unwrap().verdict);
    }
}

#[test]
fn digit_rule_orders_a_known_chain() {
    // [0; 2, 1^inf] < [0; 1^inf] < [0; 1, 2^inf]
    let e = |pre: &str, per: &str| {
        let pre = if pre.is_empty() { Word::empty() } else { pre.parse().unwrap() };
        CfExpansion::periodic(0, pre, per.parse().unwrap()).unwrap()
    };
    assert_eq!(compare_cf(&e("2", "1"), &e("", "1")), Ordering::Less);
    assert_eq!(compare_cf(&e("", "1"), &e("1", "2")), Ordering::Less);
    assert_eq!(compare_cf(&e("", "12"), &e("1", "21")), Ordering::Equal);
}
