mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use common::*;
use p1red::arith::PadicContext;
use p1red::map::{Mobius, ProjPoint, RationalMap};

fn ctx(p: u64) -> PadicContext {
    PadicContext::new(p).unwrap()
}

fn map(s: &str) -> RationalMap {
    RationalMap::parse(s).unwrap()
}

fn point() -> impl Strategy<Value = ProjPoint> {
    (-50i64..=50, 0i64..=20)
        .prop_filter("not (0:0)", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| ProjPoint::from_i64(x, y))
}

fn unit_mobius(p: u64) -> impl Strategy<Value = Mobius> {
    prop::array::uniform4(-4i64..=4).prop_filter_map("unit determinant", move |[a, b, c, d]| {
        let det = a * d - b * c;
        (det.rem_euclid(p as i64) != 0).then(|| Mobius::from_i64(a, b, c, d).unwrap())
    })
}

/// `(F : G)` at `(x : y)` over `F_p`, compared projectively by cross-multiplication.
fn same_mod_point(a: (u64, u64), b: (u64, u64), p: u64) -> bool {
    (a.0 as u128 * b.1 as u128 % p as u128) == (a.1 as u128 * b.0 as u128 % p as u128)
}

#[test]
fn construction_examples() {
    let f = map("(2*x^2+1)/x");
    assert_eq!(f.degree(), 2);
    assert_eq!(f.resultant(), BigInt::from(2));
    assert_eq!(f.bad_sgr_primes(), vec![2]);
    assert!(!f.sgr_test(&ctx(2)));
    assert!(f.sgr_test(&ctx(3)));
    assert_eq!(f.reduce(&ctx(2)).reduced_degree(), 1);

    let g = map("(x^2 - 1)/(x - 1)");
    assert_eq!(g.degree(), 1);
    assert!(RationalMap::parse("(x+1)/(x+1)").is_err());
    assert!(RationalMap::parse("3").is_err());

    let h = map("x^3 - 3*x");
    assert_eq!(h.resultant(), BigInt::from(1));
    assert!(h.bad_sgr_primes().is_empty());
    assert!(h.is_polynomial());
    assert!(!map("1/x^3").is_polynomial());
    assert!(!f.is_polynomial());
    assert_eq!(map(&h.to_expression()), h);
}

#[test]
fn composition_examples() {
    let f = map("x^2 - 1");
    let ff = f.iterate(2).unwrap();
    assert_eq!(ff, map("x^4 - 2*x^2"));
    assert_eq!(f.compose(&RationalMap::identity()).unwrap(), f);
    let inv = map("1/x");
    assert_eq!(inv.compose(&inv).unwrap(), RationalMap::identity());
    assert!(map("x^2").iterate_capped(10, 512).is_err());
    assert!(map("x^2").iterate(0).is_err());
}

#[test]
fn witness_model_example() {
    let f = map("(x^2 + 4)/(2*x)");
    assert!(!f.sgr_test(&ctx(2)));
    let s = Mobius::from_i64(2, 0, 0, 1).unwrap();
    let model = f.conjugate_source(&s);
    assert!(model.sgr_test(&ctx(2)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_respects_composition(f in small_map(1, 3, 4), g in small_map(1, 3, 4), pt in point()) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.degree(), f.degree() * g.degree());
        prop_assert_eq!(fg.evaluate(&pt), f.evaluate(&g.evaluate(&pt)));
    }

    #[test]
    fn reduction_commutes_with_composition(f in small_map(1, 3, 4), g in small_map(1, 3, 4), p in prime_50()) {
        let c = ctx(p);
        prop_assume!(f.sgr_test(&c) && g.sgr_test(&c));
        let fg = f.compose(&g).unwrap();
        prop_assert!(fg.sgr_test(&c));
        let lhs = fg.reduce(&c);
        let rhs = f.reduce(&c).compose(&g.reduce(&c));
        prop_assert!(lhs.same_map(&rhs));
        prop_assert!(rhs.same_map(&lhs));
    }

    #[test]
    fn reduction_commutes_with_evaluation(f in small_map(1, 4, 6), pt in point(), p in prime_50()) {
        let c = ctx(p);
        prop_assume!(f.sgr_test(&c));
        let (x, y) = pt.reduce(p);
        let via_q = f.evaluate(&pt).reduce(p);
        let via_fp = f.reduce(&c).evaluate(x, y);
        prop_assert!(same_mod_point(via_q, via_fp, p));
    }

    #[test]
    fn sgr_fails_exactly_at_resultant_primes(f in small_map(1, 4, 9)) {
        let r = f.resultant();
        prop_assert!(!r.is_zero());
        for p in PRIMES_50 {
            let divides = (&r % BigInt::from(p)).is_zero();
            prop_assert_eq!(f.sgr_test(&ctx(p)), !divides);
            prop_assert_eq!(f.bad_sgr_primes().contains(&p), divides);
        }
    }

    #[test]
    fn unit_conjugation_preserves_reduction_type(
        (p, m) in prime_50().prop_flat_map(|p| (Just(p), unit_mobius(p))),
        f in small_map(2, 3, 5),
    ) {
        let c = ctx(p);
        prop_assert!(m.is_integral_unit(&c));
        let g = f.conjugate(&m);
        prop_assert_eq!(g.degree(), f.degree());
        prop_assert_eq!(g.sgr_test(&c), f.sgr_test(&c));
        if f.sgr_test(&c) {
            prop_assert_eq!(g.reduce(&c).separable_test(), f.reduce(&c).separable_test());
        }
    }

    #[test]
    fn iterates_add(f in small_map(2, 2, 3), a in 1usize..=2, b in 1usize..=2) {
        let lhs = f.iterate(a + b).unwrap();
        let rhs = f.iterate(a).unwrap().compose(&f.iterate(b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
