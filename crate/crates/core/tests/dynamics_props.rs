mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::*;
use p1red::arith::primes::primes_up_to;
use p1red::arith::PadicContext;
use p1red::dynamics::{
    bad_prime_set, classify_quadratic, escape_bound, iterates_cgr_regression, orbit, pcf_decide, pushforward_form,
    quadratic_map, OrbitOutcome, PcfVerdict, DEFAULT_MAXDEPTH,
};
use p1red::map::{Mobius, ProjPoint, RationalMap};
use p1red::ramification::{branch_form, cgr_test, critical_form, PointSetForm, Role};

fn map(s: &str) -> RationalMap {
    RationalMap::parse(s).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn point() -> impl Strategy<Value = ProjPoint> {
    (-400i64..=400, 0i64..=60)
        .prop_filter("not (0:0)", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| ProjPoint::from_i64(x, y))
}

fn postcritical(v: &PcfVerdict) -> &PointSetForm {
    match v {
        PcfVerdict::Pcf { postcritical, .. } => postcritical,
        other => panic!("expected PCF, got {other}"),
    }
}

/// Primes in `(16, bound]` where `m` fails critically good reduction.
fn cgr_bad(m: &RationalMap, bound: u64) -> BTreeSet<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 16 && !cgr_test(m, &PadicContext::new(p).unwrap()).unwrap())
        .collect()
}

const PCF_MAPS: [&str; 6] = ["x^2", "x^2 - 1", "x^2 - 2", "x^3 - 3*x", "1/x^2", "(x^4 - 8*x)/(4*x^3 + 4)"];

#[test]
fn pcf_examples() {
    for s in PCF_MAPS {
        let m = map(s);
        let v = pcf_decide(&m, DEFAULT_MAXDEPTH).unwrap();
        assert!(v.is_pcf(), "{s}: {v}");
    }
    let lattes = pcf_decide(&map("(x^4 - 8*x)/(4*x^3 + 4)"), DEFAULT_MAXDEPTH).unwrap();
    let expected = PointSetForm::new(&common::form(&[1, 0, 0, 1, 0]), Role::Source).unwrap();
    assert_eq!(postcritical(&lattes).form(), expected.form());

    let cheb = pcf_decide(&map("x^3 - 3*x"), DEFAULT_MAXDEPTH).unwrap();
    let pts = postcritical(&cheb).rational_points();
    for v in [ProjPoint::from_int(2), ProjPoint::from_int(-2), ProjPoint::infinity()] {
        assert!(pts.contains(&v));
    }

    for s in ["x^2 - x", "x^2 + 1", "(x^2 + 1)/(3*x)", "x^3 - 3*x + 1"] {
        let v = pcf_decide(&map(s), DEFAULT_MAXDEPTH).unwrap();
        assert_eq!(v.label(), "not-pcf", "{s}: {v}");
    }
    let irrational = pcf_decide(&map("x^3 + x + 1"), 4).unwrap();
    assert_eq!(irrational.label(), "unknown");
}

#[test]
fn quadratic_family_is_pcf_only_at_three_parameters() {
    for a in -6i64..=6 {
        for b in 1i64..=6 {
            let c = rat(a, b);
            let direct = pcf_decide(&quadratic_map(&c), DEFAULT_MAXDEPTH).unwrap();
            let fast = classify_quadratic(&c).unwrap();
            assert_eq!(direct.label(), fast.label(), "c = {c}");
            let expect = c.is_integer() && (-2..=0).contains(&(a / b));
            assert_eq!(fast.is_pcf(), expect, "c = {c}");
        }
    }
}

#[test]
fn bad_primes_and_regression() {
    let lattes = map("(x^4 - 8*x)/(4*x^3 + 4)");
    let v = pcf_decide(&lattes, DEFAULT_MAXDEPTH).unwrap();
    let mut report = bad_prime_set(&lattes, &v).unwrap();
    assert_eq!(report.bad_primes, vec![2, 3]);
    assert!(iterates_cgr_regression(&lattes, &mut report, 2, &[5, 7, 11, 13]).unwrap());
    assert_eq!(report.checked_iterates, 2);
    assert!(iterates_cgr_regression(&lattes, &mut report, 2, &[3]).is_err());
    assert!(iterates_cgr_regression(&lattes, &mut report, 6, &[5]).is_err());

    let m = map("x^2 - 1");
    let v = pcf_decide(&m, DEFAULT_MAXDEPTH).unwrap();
    let mut report = bad_prime_set(&m, &v).unwrap();
    assert_eq!(report.bad_primes, vec![2]);
    let good: Vec<u64> = primes_up_to(60).into_iter().filter(|p| *p != 2).collect();
    assert!(iterates_cgr_regression(&m, &mut report, 4, &good).unwrap());

    let v = pcf_decide(&map("x^2 - x"), DEFAULT_MAXDEPTH).unwrap();
    assert!(bad_prime_set(&map("x^2 - x"), &v).is_err());
}

#[test]
fn non_pcf_iterates_gain_bad_primes() {
    let m = map("x^2 - x");
    for k in 1..=3 {
        assert!(cgr_bad(&m.iterate(k).unwrap(), 200).is_empty(), "k = {k}");
    }
    assert!(cgr_bad(&m.iterate(4).unwrap(), 200).contains(&61));
    let pcf = map("x^2 - 1");
    for k in 1..=4 {
        assert!(cgr_bad(&pcf.iterate(k).unwrap(), 200).is_empty(), "k = {k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn escape_bound_holds_for_x2_minus_x(pt in point()) {
        let m = map("x^2 - x");
        let b = escape_bound(&m).unwrap();
        let image = m.evaluate(&pt);
        prop_assert!(image.height() * &b.constant >= num_traits::pow(pt.height(), 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn escape_bound_holds(f in small_map(2, 3, 6), pt in point()) {
        let b = escape_bound(&f).unwrap();
        prop_assert!(b.constant >= BigInt::one());
        let image = f.evaluate(&pt);
        prop_assert!(image.height() * &b.constant >= num_traits::pow(pt.height(), f.degree()));
    }

    #[test]
    fn escaped_orbits_keep_growing(f in small_map(2, 3, 4), pt in point()) {
        let record = orbit(&f, &pt, 200).unwrap();
        if let OrbitOutcome::Escaped { index, .. } = record.outcome {
            let mut current = record.points[index].clone();
            for _ in 0..5 {
                let next = f.evaluate(&current);
                prop_assert!(next.height() > current.height());
                current = next;
            }
        }
        if let OrbitOutcome::Periodic { tail, period } = record.outcome {
            prop_assert_eq!(f.evaluate(&record.points[tail + period - 1]), record.points[tail].clone());
        }
    }

    #[test]
    fn quadratic_classification_matches_decision(a in -20i64..=20, b in 1i64..=20) {
        let c = rat(a, b);
        let fast = classify_quadratic(&c).unwrap();
        let direct = pcf_decide(&quadratic_map(&c), DEFAULT_MAXDEPTH).unwrap();
        prop_assert_eq!(fast.label(), direct.label());
        if let PcfVerdict::NotPcf { witness } = &fast {
            prop_assert!(witness.escaped());
            prop_assert_eq!(witness.start.clone(), ProjPoint::from_int(0));
        }
    }

    #[test]
    fn pcf_verdict_is_conjugation_invariant(
        i in 0usize..PCF_MAPS.len(),
        (a, b, c, d) in (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3).prop_filter("invertible", |(a, b, c, d)| a * d != b * c),
    ) {
        let m = map(PCF_MAPS[i]);
        let conj = m.conjugate(&Mobius::from_i64(a, b, c, d).unwrap());
        let v = pcf_decide(&m, DEFAULT_MAXDEPTH).unwrap();
        let w = pcf_decide(&conj, DEFAULT_MAXDEPTH).unwrap();
        prop_assert!(w.is_pcf(), "{} -> {}", m, conj);
        prop_assert_eq!(postcritical(&v).len(), postcritical(&w).len());
    }

    #[test]
    fn postcritical_set_is_forward_invariant(i in 0usize..PCF_MAPS.len()) {
        let m = map(PCF_MAPS[i]);
        let post = pcf_decide(&m, DEFAULT_MAXDEPTH).unwrap();
        let post = postcritical(&post);
        let image = pushforward_form(&m, post).unwrap();
        let image = PointSetForm::new(image.form(), Role::Source).unwrap();
        prop_assert!(post.contains_set(&image));
        let branch = PointSetForm::new(branch_form(&m).unwrap().form(), Role::Source).unwrap();
        prop_assert!(post.contains_set(&branch));
        for cp in critical_form(&m).unwrap().rational_points() {
            prop_assert!(post.contains(&m.evaluate(&cp)));
        }
        prop_assert!(!post.discriminant().is_zero() || post.len() <= 1);
    }
}
