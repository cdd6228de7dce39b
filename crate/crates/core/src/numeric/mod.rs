//! Certified scalar arithmetic and the Perron-Frobenius eigensolver.
//!
//! Scalars are immutable values, safe to share and send between workers;
//! refining precision produces new enclosures rather than mutating state.

pub mod dyadic;
pub mod expr;
pub mod matrix;
pub mod perron;
pub mod scalar;

pub use dyadic::DyInterval;
pub use matrix::NonnegIntMatrix;
pub use perron::{perron, PerronData};
pub use scalar::{
    certified_compare, linear_combination, parse_rational, parse_scalar, rational_string,
    scalar_sum, Precision, Scalar,
};

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::cmp::Ordering;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn compare_identical_rationals() {
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_ratio(1, 2);
        assert_eq!(certified_compare(&a, &b, &prec()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn compare_sqrt3_below_seven_fourths() {
        let a = Scalar::from_integer(3).sqrt().unwrap();
        let b = Scalar::from_ratio(7, 4);
        assert_eq!(certified_compare(&a, &b, &prec()).unwrap(), Ordering::Less);
    }

    #[test]
    fn compare_third_above_decimal_approx() {
        // 1/3 > 3333/10000 by cross multiplication: 10000 > 3*3333 = 9999
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(3333, 10000);
        assert_eq!(certified_compare(&a, &b, &prec()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn surd_products_collapse_to_rationals() {
        let s = Scalar::from_ratio(1, 3).sqrt().unwrap();
        let sq = s.mul(&s);
        assert_eq!(sq.as_rational().unwrap(), &BigRational::new(BigInt::from(1), BigInt::from(3)));
        let t = Scalar::from_integer(8).sqrt().unwrap();
        let u = Scalar::from_integer(2).sqrt().unwrap();
        // sqrt(8) = 2 sqrt(2), so sqrt(8) + sqrt(2) = 3 sqrt(2) stays exact
        let sum = t.add(&u);
        let (coef, rad) = sum.as_surd().unwrap();
        assert_eq!(coef, BigRational::from_integer(BigInt::from(3)));
        assert_eq!(rad, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn mismatched_radicals_demote_to_interval() {
        let a = Scalar::from_integer(2).sqrt().unwrap();
        let b = Scalar::from_integer(3).sqrt().unwrap();
        let s = a.add(&b);
        assert!(!s.is_exact());
        // sqrt(2) + sqrt(3) ~ 3.146
        let iv = s.approx(64).unwrap();
        assert!(iv.lo < BigRational::new(BigInt::from(3146270), BigInt::from(1000000)));
        assert!(iv.hi > BigRational::new(BigInt::from(3146263), BigInt::from(1000000)));
    }

    #[test]
    fn interval_equality_needs_shared_expression() {
        let pi1 = Scalar::pi();
        let pi2 = Scalar::pi();
        assert_eq!(certified_compare(&pi1, &pi2, &prec()).unwrap(), Ordering::Equal);
        // pi vs a different expression of the same magnitude cannot be
        // certified equal: expect PrecisionExhausted on pi vs pi+0*e built
        // differently? Use 2*pi/2 instead.
        let half = Scalar::from_ratio(1, 2);
        let two = Scalar::from_integer(2);
        let other = Scalar::pi().mul(&two).mul(&half);
        let r = certified_compare(&pi1, &other, &Precision { start_bits: 64, cap_bits: 256, tol_bits: 64 });
        assert!(matches!(r, Err(crate::error::Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn refinement_shrinks_width() {
        let x = Scalar::pi().add(&Scalar::from_integer(2).sqrt().unwrap().exp());
        let w1 = x.approx(64).unwrap().width();
        let w2 = x.approx(128).unwrap().width();
        let w3 = x.approx(256).unwrap().width();
        assert!(w2 <= w1);
        assert!(w3 <= w2);
    }

    #[test]
    fn pi_enclosure_is_tight() {
        let iv = Scalar::pi().approx(128).unwrap();
        let lo = BigRational::new(BigInt::from(3141592653589793238i64), BigInt::from(1000000000000000000i64));
        let hi = BigRational::new(BigInt::from(3141592653589793239i64), BigInt::from(1000000000000000000i64));
        assert!(iv.lo > lo.clone() - BigRational::new(BigInt::from(1), BigInt::from(1000000000000i64)));
        assert!(iv.hi < hi.clone() + BigRational::new(BigInt::from(1), BigInt::from(1000000000000i64)));
        assert!(iv.lo < hi && iv.hi > lo);
    }

    #[test]
    fn exp_and_ln_roundtrip_enclosures() {
        // ln(e^2) should enclose 2
        let two = Scalar::from_integer(2);
        let e2 = two.exp();
        let back = e2.ln().unwrap();
        let iv = back.approx(96).unwrap();
        let t = BigRational::from_integer(BigInt::from(2));
        assert!(iv.lo <= t && t <= iv.hi);
        assert!(iv.width() < BigRational::new(BigInt::from(1), BigInt::one() << 64));
    }

    #[test]
    fn perron_trivial_one_by_one() {
        let m = NonnegIntMatrix::from_rows_i64(&[&[1]]).unwrap();
        let p = perron(&m, &prec()).unwrap();
        assert!(p.exact);
        assert_eq!(p.value.as_rational().unwrap(), &BigRational::from_integer(BigInt::one()));
        assert_eq!(p.vector.len(), 1);
    }

    #[test]
    fn perron_lshape_matrix() {
        // characteristic polynomial x^2 - 5x + 4 = (x-4)(x-1)
        let m = NonnegIntMatrix::from_rows_i64(&[&[3, 1], &[2, 2]]).unwrap();
        let p = perron(&m, &prec()).unwrap();
        assert!(p.exact);
        assert_eq!(p.value.as_rational().unwrap(), &BigRational::from_integer(BigInt::from(4)));
        assert_eq!(p.vector[0].as_rational().unwrap(), &BigRational::from_integer(BigInt::one()));
        assert_eq!(p.vector[1].as_rational().unwrap(), &BigRational::from_integer(BigInt::one()));
    }

    #[test]
    fn perron_permutation_matrix_is_irreducible() {
        let m = NonnegIntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(m.is_irreducible());
        let p = perron(&m, &prec()).unwrap();
        assert!(p.exact);
        assert_eq!(p.value.as_rational().unwrap(), &BigRational::from_integer(BigInt::one()));
        assert_eq!(p.vector[1].as_rational().unwrap(), &BigRational::from_integer(BigInt::one()));
    }

    #[test]
    fn perron_reducible_rejected() {
        let m = NonnegIntMatrix::from_rows_i64(&[&[1, 1], &[0, 1]]).unwrap();
        assert!(!m.is_irreducible());
        assert!(matches!(perron(&m, &prec()), Err(crate::error::Error::NotIrreducible)));
    }

    #[test]
    fn perron_irrational_root_enclosure() {
        // [[2,1],[1,1]] has Perron root (3+sqrt(5))/2 ~ 2.618
        let m = NonnegIntMatrix::from_rows_i64(&[&[2, 1], &[1, 1]]).unwrap();
        let p = perron(&m, &prec()).unwrap();
        assert!(!p.exact);
        let iv = p.value.approx(96).unwrap();
        let lo = BigRational::new(BigInt::from(2618033), BigInt::from(1000000));
        let hi = BigRational::new(BigInt::from(2618035), BigInt::from(1000000));
        assert!(iv.lo > lo - BigRational::new(BigInt::from(1), BigInt::from(1000)));
        assert!(iv.hi < hi + BigRational::new(BigInt::from(1), BigInt::from(1000)));
        // eigenvector entry 1: x = lambda - 2 ~ 0.618
        let v = p.vector[1].approx(96).unwrap();
        let t = BigRational::new(BigInt::from(618033), BigInt::from(1000000));
        assert!(v.lo < &t + BigRational::new(BigInt::from(1), BigInt::from(10000)));
        assert!(v.hi > &t - BigRational::new(BigInt::from(1), BigInt::from(10000)));
    }

    /// Matrices a*I + b*J (J all ones) have Perron root a + b*n with the
    /// all-ones eigenvector: the exact path must return them with residual
    /// exactly zero.
    #[test]
    fn perron_exact_on_rational_root_family() {
        for n in 1usize..=4 {
            for a in 0i64..3 {
                for b in 1i64..3 {
                    let entries: alloc::vec::Vec<BigInt> = (0..n * n)
                        .map(|k| {
                            let diag = k / n == k % n;
                            BigInt::from(if diag { a + b } else { b })
                        })
                        .collect();
                    let m = NonnegIntMatrix::new(n, entries).unwrap();
                    let p = perron(&m, &Precision::default()).unwrap();
                    assert!(p.exact);
                    let root = BigRational::from_integer(BigInt::from(a + b * n as i64));
                    assert_eq!(p.value.as_rational().unwrap(), &root);
                    // residual exactly zero
                    for i in 0..n {
                        let mut acc = BigRational::from_integer(BigInt::from(0));
                        for j in 0..n {
                            acc += BigRational::from_integer(m.entry(i, j).clone())
                                * p.vector[j].as_rational().unwrap();
                        }
                        let lhs = acc;
                        let rhs = p.value.as_rational().unwrap()
                            * p.vector[i].as_rational().unwrap();
                        assert_eq!(lhs, rhs, "residual must be exactly zero");
                    }
                }
            }
        }
    }

    #[test]
    fn charpoly_of_lshape_matrix() {
        let m = NonnegIntMatrix::from_rows_i64(&[&[3, 1], &[2, 2]]).unwrap();
        let c = m.charpoly();
        // x^2 - 5x + 4: coefficients [4, -5]
        assert_eq!(c, vec![BigInt::from(4), BigInt::from(-5)]);
    }

    #[test]
    fn parse_scalar_forms() {
        assert_eq!(
            parse_scalar("3/4").unwrap().as_rational().unwrap(),
            &BigRational::new(BigInt::from(3), BigInt::from(4))
        );
        assert_eq!(
            parse_scalar("0.45").unwrap().as_rational().unwrap(),
            &BigRational::new(BigInt::from(9), BigInt::from(20))
        );
        assert_eq!(
            parse_scalar("-2").unwrap().as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(-2))
        );
        let s = parse_scalar("sqrt(5)").unwrap();
        let (coef, rad) = s.as_surd().unwrap();
        assert_eq!(coef, BigRational::from_integer(BigInt::one()));
        assert_eq!(rad, BigRational::from_integer(BigInt::from(5)));
    }
}
