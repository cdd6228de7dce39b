//! Geometry on rectangle-decomposed translation surfaces: cylinder data,
//! saddle-connection enumeration, holonomy spectra and alpha brackets.

pub mod saddle;
pub mod spectra;
pub mod surface;

pub use saddle::{enumerate_saddle_connections, CoeffVec, SaddleConnection};
pub use spectra::{
    alpha_bounds, alpha_bracket_from, apply2, direction_classes, measured_lambda,
    min_virtual_triangle, min_virtual_triangle_of, standardize, wedge, wedge_sign, AlphaBracket,
    VirtualTriangleMin,
};
pub use surface::{CylinderInfo, Direction, RectangleSurface};

/// Cylinder decomposition data for one direction: one entry per cycle of
/// the corresponding permutation, plus the Dehn twist vector when the
/// inverse moduli are commensurable (absent otherwise, not a failure).
pub fn cylinder_data(
    s: &RectangleSurface,
    dir: Direction,
) -> (
    alloc::vec::Vec<CylinderInfo>,
    Option<crate::combinat::TwistInts>,
) {
    (s.cylinders(dir), s.twist_vector(dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{CylinderDiagram, Permutation};
    use crate::numeric::{Precision, Scalar};
    use alloc::vec;
    use alloc::vec::Vec;
    use core::cmp::Ordering;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    fn prec() -> Precision {
        Precision::default()
    }

    /// Unit torus with one marked point.
    fn torus() -> RectangleSurface {
        let d = CylinderDiagram::new(Permutation::identity(1), Permutation::identity(1)).unwrap();
        RectangleSurface::from_parts(
            d,
            vec![Scalar::one()],
            vec![Scalar::one()],
            Some((vec![1], vec![1])),
            &prec(),
        )
        .unwrap()
    }

    /// Torus with marked points at 0 and (1/2, 0): two 1/2 x 1 rectangles.
    fn m3() -> RectangleSurface {
        let d = CylinderDiagram::new(
            Permutation::from_one_based(&[2, 1]).unwrap(),
            Permutation::identity(2),
        )
        .unwrap();
        RectangleSurface::from_parts(
            d,
            vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 2)],
            vec![Scalar::one()],
            Some((vec![1], vec![1, 1])),
            &prec(),
        )
        .unwrap()
    }

    /// L-shaped surface of three squares of side 1/sqrt(3).
    fn lshape() -> RectangleSurface {
        let tv = crate::construct::TVData::new(
            CylinderDiagram::new(
                Permutation::from_one_based(&[2, 1, 3]).unwrap(),
                Permutation::from_one_based(&[3, 2, 1]).unwrap(),
            )
            .unwrap(),
            crate::construct::TwistVector::new(vec![1, 2]).unwrap(),
            crate::construct::TwistVector::new(vec![1, 2]).unwrap(),
        )
        .unwrap();
        crate::construct::build_surface(&tv, &prec()).unwrap().surface
    }

    fn rational_pair(c: &SaddleConnection) -> (BigRational, BigRational) {
        (
            c.hol_x.as_rational().unwrap().clone(),
            c.hol_y.as_rational().unwrap().clone(),
        )
    }

    /// Brute-force oracle for the torus: primitive integer vectors of norm
    /// at most L (the marked point sees every primitive lattice vector,
    /// and imprimitive ones pass through its translates).
    fn primitive_vectors_up_to(l2_num: i64, l2_den: i64) -> Vec<(i64, i64)> {
        let bound = 8i64;
        let mut out = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                if (x, y) == (0, 0) {
                    continue;
                }
                if num_integer::gcd(x, y) != 1 {
                    continue;
                }
                if (x * x + y * y) * l2_den <= l2_num {
                    out.push((x, y));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn torus_connections_match_primitive_vectors() {
        let t = torus();
        // L in {1, sqrt(2), sqrt(5), 3}: exact squared bounds 1, 2, 5, 9
        for (l, l2) in [
            (Scalar::one(), 1i64),
            (Scalar::from_integer(2).sqrt().unwrap(), 2),
            (Scalar::from_integer(5).sqrt().unwrap(), 5),
            (Scalar::from_integer(3), 9),
        ] {
            let conns = enumerate_saddle_connections(&t, &l, &prec()).unwrap();
            let mut got: Vec<(i64, i64)> = conns
                .iter()
                .map(|c| {
                    let (x, y) = rational_pair(c);
                    assert!(x.is_integer() && y.is_integer());
                    (
                        i64::try_from(x.to_integer()).unwrap(),
                        i64::try_from(y.to_integer()).unwrap(),
                    )
                })
                .collect();
            got.sort();
            got.dedup();
            assert_eq!(got.len(), conns.len(), "no duplicate holonomies");
            assert_eq!(got, primitive_vectors_up_to(l2, 1), "L^2 = {l2}");
        }
    }

    #[test]
    fn torus_excludes_two_zero() {
        // (2,0) passes through the marked point and must not appear
        let t = torus();
        let conns =
            enumerate_saddle_connections(&t, &Scalar::from_integer(3), &prec()).unwrap();
        for c in &conns {
            let (x, y) = rational_pair(c);
            assert!(
                !(x == BigRational::from_integer(BigInt::from(2))
                    && y == BigRational::from_integer(BigInt::from(0)))
            );
        }
    }

    #[test]
    fn m3_short_horizontal_connections() {
        let s = m3();
        let l = Scalar::from_ratio(1, 2);
        let conns = enumerate_saddle_connections(&s, &l, &prec()).unwrap();
        assert_eq!(conns.len(), 4);
        for c in &conns {
            let (x, y) = rational_pair(c);
            assert_eq!(y, BigRational::from_integer(0.into()));
            assert_eq!(
                x.abs(),
                BigRational::new(BigInt::from(1), BigInt::from(2))
            );
            // each runs between the two distinct marked points
            assert_ne!(c.from_class, c.to_class);
        }
    }

    #[test]
    fn connection_set_closed_under_negation() {
        for s in [torus(), m3(), lshape()] {
            let conns =
                enumerate_saddle_connections(&s, &Scalar::from_integer(2), &prec()).unwrap();
            assert!(conns.len() % 2 == 0);
            for c in &conns {
                let neg = c.coeffs.negated();
                assert!(
                    conns.iter().any(|d| d.coeffs == neg),
                    "missing reverse of {:?}",
                    c.coeffs
                );
            }
        }
    }

    #[test]
    fn min_virtual_triangle_examples() {
        let two = Scalar::from_integer(2);
        let m = min_virtual_triangle(&torus(), &two, &prec()).unwrap();
        assert!(m.certified);
        assert!(m.value.as_rational().unwrap().is_one());

        let m = min_virtual_triangle(&m3(), &two, &prec()).unwrap();
        assert!(m.certified);
        assert_eq!(
            m.value.as_rational().unwrap(),
            &BigRational::new(1.into(), 2.into())
        );

        let m = min_virtual_triangle(&lshape(), &two, &prec()).unwrap();
        assert!(m.certified);
        assert_eq!(
            m.value.as_rational().unwrap(),
            &BigRational::new(1.into(), 3.into())
        );
    }

    #[test]
    fn alpha_bounds_examples() {
        let three = Scalar::from_integer(3);
        let a = alpha_bounds(&torus(), &three, &prec()).unwrap();
        assert_eq!(
            a.exact.as_ref().unwrap().as_rational().unwrap(),
            &BigRational::new(1.into(), 2.into())
        );
        let a = alpha_bounds(&m3(), &three, &prec()).unwrap();
        assert_eq!(
            a.exact.as_ref().unwrap().as_rational().unwrap(),
            &BigRational::new(1.into(), 4.into())
        );
        let a = alpha_bounds(&lshape(), &three, &prec()).unwrap();
        assert_eq!(
            a.exact.as_ref().unwrap().as_rational().unwrap(),
            &BigRational::new(1.into(), 6.into())
        );
    }

    #[test]
    fn cylinder_data_examples() {
        let t = torus();
        let cyls = t.cylinders(Direction::Horizontal);
        assert_eq!(cyls.len(), 1);
        assert!(cyls[0].height.as_rational().unwrap().is_one());
        assert!(cyls[0].circumference.as_rational().unwrap().is_one());
        assert!(cyls[0].inverse_modulus.as_rational().unwrap().is_one());
        assert!(cyls[0].area.as_rational().unwrap().is_one());
        assert_eq!(t.twist_vector(Direction::Horizontal).unwrap(), vec![1]);

        // M3 as presented: one horizontal cylinder (h=1, c=1, mu=1, A=1)
        let s = m3();
        let cyls = s.cylinders(Direction::Horizontal);
        assert_eq!(cyls.len(), 1);
        assert!(cyls[0].height.as_rational().unwrap().is_one());
        assert!(cyls[0].circumference.as_rational().unwrap().is_one());
        assert!(cyls[0].inverse_modulus.as_rational().unwrap().is_one());
        assert_eq!(s.twist_vector(Direction::Horizontal).unwrap(), vec![1]);
        // vertical: two cylinders of inverse modulus 2, twists (1,1)
        let cyls = s.cylinders(Direction::Vertical);
        assert_eq!(cyls.len(), 2);
        for c in &cyls {
            assert_eq!(
                c.inverse_modulus.as_rational().unwrap(),
                &BigRational::from_integer(2.into())
            );
        }
        assert_eq!(s.twist_vector(Direction::Vertical).unwrap(), vec![1, 1]);

        // L-shape horizontal: cylinders (h=1/sqrt3, c=2/sqrt3, mu=2, A=2/3)
        // and (h=1/sqrt3, c=1/sqrt3, mu=1, A=1/3), twists (1,2)
        let s = lshape();
        let cyls = s.cylinders(Direction::Horizontal);
        assert_eq!(cyls.len(), 2);
        assert_eq!(
            cyls[0].inverse_modulus.as_rational().unwrap(),
            &BigRational::from_integer(2.into())
        );
        assert!(cyls[1].inverse_modulus.as_rational().unwrap().is_one());
        assert_eq!(
            cyls[0].area.as_rational().unwrap(),
            &BigRational::new(2.into(), 3.into())
        );
        assert_eq!(
            cyls[1].area.as_rational().unwrap(),
            &BigRational::new(1.into(), 3.into())
        );
        assert_eq!(s.twist_vector(Direction::Horizontal).unwrap(), vec![1, 2]);
    }

    #[test]
    fn built_twist_vectors_have_gcd_one() {
        use num_integer::Integer;
        for s in [torus(), m3(), lshape()] {
            for dir in [Direction::Horizontal, Direction::Vertical] {
                let n = s.twist_vector(dir).unwrap();
                let g = n.iter().fold(0u64, |g, &x| g.gcd(&x));
                assert_eq!(g, 1);
            }
        }
    }

    #[test]
    fn standardize_examples() {
        let p = prec();
        let one = Scalar::one();
        let zero = Scalar::zero();
        // identity case
        let g = standardize((&one, &zero), (&zero, &one), &p).unwrap();
        for (i, j, expect) in [(0, 0, 1i64), (0, 1, 0), (1, 0, 0), (1, 1, 1)] {
            assert_eq!(
                g[i][j].as_rational().unwrap(),
                &BigRational::from_integer(expect.into())
            );
        }
        // xi = (2,0), eta = (0,1/2): b = 1, g = diag(1/2, 2)
        let two = Scalar::from_integer(2);
        let half = Scalar::from_ratio(1, 2);
        let g = standardize((&two, &zero), (&zero, &half), &p).unwrap();
        assert_eq!(
            g[0][0].as_rational().unwrap(),
            &BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            g[1][1].as_rational().unwrap(),
            &BigRational::from_integer(2.into())
        );
        let (ix, iy) = apply2(&g, &two, &zero);
        assert!(ix.as_rational().unwrap().is_one());
        assert!(iy.as_rational().unwrap().is_zero());
        // xi = (1,1), eta = (-1,1): rotation by -45 degrees with b = 2
        let neg_one = Scalar::from_integer(-1);
        let g = standardize((&one, &one), (&neg_one, &one), &p).unwrap();
        let (sx, sy) = apply2(&g, &one, &one);
        let sqrt2 = Scalar::from_integer(2).sqrt().unwrap();
        assert_eq!(sx.cmp_certified(&sqrt2, &p).unwrap(), Ordering::Equal);
        assert!(sy.as_rational().unwrap().is_zero());
        let (ex, ey) = apply2(&g, &neg_one, &one);
        assert!(ex.as_rational().unwrap().is_zero());
        let abs_ey = ey.abs_exact().unwrap();
        assert_eq!(abs_ey.cmp_certified(&sqrt2, &p).unwrap(), Ordering::Equal);
        // det 1
        let det = g[0][0].mul(&g[1][1]).sub(&g[0][1].mul(&g[1][0]));
        assert!(det.as_rational().unwrap().is_one());
        // parallel pair is degenerate
        assert!(matches!(
            standardize((&one, &one), (&two, &two), &p),
            Err(crate::error::Error::DegeneratePair)
        ));
    }

    #[test]
    fn wedge_invariance_under_unit_determinant_maps() {
        let p = prec();
        let s = m3();
        let conns = enumerate_saddle_connections(&s, &Scalar::from_integer(2), &p).unwrap();
        // g from standardize on a transverse pair of connections
        let a = &conns[0];
        let b = conns
            .iter()
            .find(|c| wedge_sign(&s, a, c, &p).unwrap() != Ordering::Equal)
            .unwrap();
        let g = standardize((&a.hol_x, &a.hol_y), (&b.hol_x, &b.hol_y), &p).unwrap();
        for c1 in conns.iter().take(8) {
            for c2 in conns.iter().take(8) {
                let before = wedge(c1, c2);
                let (x1, y1) = apply2(&g, &c1.hol_x, &c1.hol_y);
                let (x2, y2) = apply2(&g, &c2.hol_x, &c2.hol_y);
                let after = x1.mul(&y2).sub(&x2.mul(&y1));
                assert_eq!(
                    before.cmp_certified(&after, &p).unwrap(),
                    Ordering::Equal
                );
            }
        }
    }

    #[test]
    fn nonpositive_scan_length_rejected() {
        let t = torus();
        assert!(matches!(
            enumerate_saddle_connections(&t, &Scalar::zero(), &prec()),
            Err(crate::error::Error::DomainError(_))
        ));
    }

    #[test]
    fn measured_lambda_on_torus_is_one() {
        let l = measured_lambda(&torus(), &Scalar::from_integer(3), &prec()).unwrap();
        assert!(l.as_rational().unwrap().is_one());
    }
}
