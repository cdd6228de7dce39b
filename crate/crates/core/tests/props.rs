//! Property suites: ordering laws for certified comparison, refinement
//! stability, surd arithmetic closure, and format round-trips.

use std::cmp::Ordering;

use flatlatt_core::combinat::{format_diagram, parse_diagram, CylinderDiagram, Permutation};
use flatlatt_core::numeric::{certified_compare, parse_rational, Precision, Scalar};
use num_rational::BigRational;
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::default()
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    /// Four random comparisons per case, ten thousand pairs total: the
    /// certified comparison agrees with exact rational order.
    #[test]
    fn compare_agrees_with_rational_order(
        pairs in proptest::collection::vec(((-10_000i64..10_000, 1i64..10_000), (-10_000i64..10_000, 1i64..10_000)), 4)
    ) {
        let p = prec();
        for ((n1, d1), (n2, d2)) in pairs {
            let a = rational(n1, d1);
            let b = rational(n2, d2);
            let sa = Scalar::from_rational(a.clone());
            let sb = Scalar::from_rational(b.clone());
            prop_assert_eq!(certified_compare(&sa, &sb, &p).unwrap(), a.cmp(&b));
        }
    }

    /// Antisymmetry and reflexivity of the certified comparison.
    #[test]
    fn compare_order_laws(n1 in -1000i64..1000, d1 in 1i64..1000, n2 in -1000i64..1000, d2 in 1i64..1000) {
        let p = prec();
        let a = Scalar::from_ratio(n1, d1);
        let b = Scalar::from_ratio(n2, d2);
        let ab = certified_compare(&a, &b, &p).unwrap();
        let ba = certified_compare(&b, &a, &p).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(certified_compare(&a, &a, &p).unwrap(), Ordering::Equal);
    }

    /// Surd products collapse exactly: sqrt(a) * sqrt(b) squared is a*b.
    #[test]
    fn surd_product_squares_exactly(an in 1i64..200, ad in 1i64..200, bn in 1i64..200, bd in 1i64..200) {
        let a = rational(an, ad);
        let b = rational(bn, bd);
        let sa = Scalar::from_rational(a.clone()).sqrt().unwrap();
        let sb = Scalar::from_rational(b.clone()).sqrt().unwrap();
        let prod = sa.mul(&sb);
        let sq = prod.mul(&prod);
        prop_assert_eq!(sq.as_rational().unwrap(), &(a * b));
    }

    /// Diagram text format round-trips for arbitrary permutation pairs.
    #[test]
    fn diagram_text_round_trip(r in proptest::collection::vec(0usize..5, 5), u in proptest::collection::vec(0usize..5, 5)) {
        let to_perm = |seed: &[usize]| {
            // turn an arbitrary vector into a permutation by stable argsort
            let mut idx: Vec<usize> = (0..seed.len()).collect();
            idx.sort_by_key(|&i| (seed[i], i));
            Permutation::from_images(idx).unwrap()
        };
        let d = CylinderDiagram::new(to_perm(&r), to_perm(&u)).unwrap();
        let text = format_diagram(&d);
        prop_assert_eq!(parse_diagram(&text).unwrap(), d);
    }

    /// Rational strings parse back to the same value.
    #[test]
    fn rational_string_round_trip(n in -100_000i64..100_000, d in 1i64..100_000) {
        let q = rational(n, d);
        let s = flatlatt_core::numeric::rational_string(&q);
        prop_assert_eq!(parse_rational(&s).unwrap(), q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Refining precision never changes a comparison that succeeded.
    #[test]
    fn refinement_preserves_successful_comparisons(n in 1i64..500, d in 1i64..500) {
        let coarse = Precision { start_bits: 64, cap_bits: 128, tol_bits: 64 };
        let fine = Precision { start_bits: 512, cap_bits: 1024, tol_bits: 64 };
        // a genuinely interval-backed comparand: pi-scaled rational against
        // a nearby rational multiple of 355/113
        let x = Scalar::from_ratio(n, d).mul(&Scalar::pi());
        let q = Scalar::from_ratio(n * 355, d * 113);
        if let Ok(ord) = certified_compare(&x, &q, &coarse) {
            prop_assert_eq!(certified_compare(&x, &q, &fine).unwrap(), ord);
        }
    }

    /// Interval enclosures always contain the represented value and
    /// shrink (weakly) under refinement.
    #[test]
    fn enclosures_nest_under_refinement(n in 1i64..100, d in 1i64..100) {
        let x = Scalar::from_ratio(n, d).sqrt().unwrap().add(&Scalar::pi());
        let lo_bits = x.approx(64).unwrap();
        let hi_bits = x.approx(160).unwrap();
        prop_assert!(hi_bits.lo >= lo_bits.lo);
        prop_assert!(hi_bits.hi <= lo_bits.hi);
        prop_assert!(hi_bits.width() <= lo_bits.width());
    }
}

/// Scalar arithmetic on exact inputs never demotes silently: sums,
/// differences, products and quotients of rationals stay rational.
#[test]
fn exact_arithmetic_stays_exact() {
    let a = Scalar::from_ratio(3, 7);
    let b = Scalar::from_ratio(-5, 11);
    for v in [a.add(&b), a.sub(&b), a.mul(&b), a.div(&b)] {
        assert!(v.as_rational().is_some());
    }
}
