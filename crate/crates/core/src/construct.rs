//! The Thurston-Veech construction: from a cylinder diagram and a pair of
//! Dehn twist vectors to a normalized labeled rectangle surface.
//!
//! Heights and widths are the Perron eigenvectors of E1 = A1 B A2 B^t and
//! E2 = A2 B^t A1 B; the surface is then put in standard form (shortest
//! horizontal and vertical saddle connections of equal length) by the
//! diagonal flow and scaled to area 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinat::CylinderDiagram;
use crate::error::{Error, Result};
use crate::geom::{Direction, RectangleSurface};
use crate::numeric::{perron, NonnegIntMatrix, Precision, Scalar};

/// Positive integers indexed by the cycles of one permutation, with
/// gcd(n_1,..,n_k) = 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistVector(Vec<u64>);

impl TwistVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidTwist("twist vector is empty".into()));
        }
        if entries.iter().any(|&n| n == 0) {
            return Err(Error::InvalidTwist("twist entries must be positive".into()));
        }
        let g = entries.iter().fold(0u64, |g, &n| g.gcd(&n));
        if g != 1 {
            return Err(Error::InvalidTwist(format!(
                "gcd of twist vector {entries:?} is {g}, expected 1"
            )));
        }
        Ok(TwistVector(entries))
    }

    pub fn ones(k: usize) -> Self {
        TwistVector(vec![1; k])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Thurston-Veech data: a transitive diagram plus twist vectors over the
/// horizontal (sigma_right) and vertical (sigma_up) cycles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TVData {
    pub diagram: CylinderDiagram,
    pub n_horizontal: TwistVector,
    pub n_vertical: TwistVector,
}

impl TVData {
    pub fn new(
        diagram: CylinderDiagram,
        n_horizontal: TwistVector,
        n_vertical: TwistVector,
    ) -> Result<Self> {
        if n_horizontal.len() != diagram.sigma_right.cycle_count() {
            return Err(Error::InvalidTwist(
                "horizontal twist arity must match sigma_right cycle count".into(),
            ));
        }
        if n_vertical.len() != diagram.sigma_up.cycle_count() {
            return Err(Error::InvalidTwist(
                "vertical twist arity must match sigma_up cycle count".into(),
            ));
        }
        Ok(TVData {
            diagram,
            n_horizontal,
            n_vertical,
        })
    }
}

/// Rectangular nonnegative integer matrix (the cycle intersection matrix B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<u64>,
}

impl IntersectionMatrix {
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

/// b_ij = number of labels shared by the i-th sigma_right cycle and the
/// j-th sigma_up cycle; row sums equal the sigma_right cycle lengths.
pub fn intersection_matrix(d: &CylinderDiagram) -> IntersectionMatrix {
    let hcycles = d.sigma_right.cycles();
    let vcycles = d.sigma_up.cycles();
    let mut vcycle_of = vec![0usize; d.l];
    for (j, cyc) in vcycles.iter().enumerate() {
        for &k in cyc {
            vcycle_of[k] = j;
        }
    }
    let rows = hcycles.len();
    let cols = vcycles.len();
    let mut entries = vec![0u64; rows * cols];
    for (i, cyc) in hcycles.iter().enumerate() {
        for &k in cyc {
            entries[i * cols + vcycle_of[k]] += 1;
        }
    }
    IntersectionMatrix {
        rows,
        cols,
        entries,
    }
}

/// E1 = A1 B A2 B^t (heights side) and E2 = A2 B^t A1 B (widths side).
pub fn transition_matrices(tv: &TVData) -> Result<(NonnegIntMatrix, NonnegIntMatrix)> {
    let b = intersection_matrix(&tv.diagram);
    let r = b.rows;
    let c = b.cols;
    let nh: Vec<BigInt> = tv.n_horizontal.entries().iter().map(|&n| BigInt::from(n)).collect();
    let nv: Vec<BigInt> = tv.n_vertical.entries().iter().map(|&n| BigInt::from(n)).collect();
    // E1[i][i'] = nh[i] * sum_j b[i][j] * nv[j] * b[i'][j]
    let mut e1 = vec![BigInt::zero(); r * r];
    for i in 0..r {
        for i2 in 0..r {
            let mut acc = BigInt::zero();
            for j in 0..c {
                acc += BigInt::from(b.entry(i, j)) * &nv[j] * BigInt::from(b.entry(i2, j));
            }
            e1[i * r + i2] = &nh[i] * acc;
        }
    }
    // E2[j][j'] = nv[j] * sum_i b[i][j] * nh[i] * b[i][j']
    let mut e2 = vec![BigInt::zero(); c * c];
    for j in 0..c {
        for j2 in 0..c {
            let mut acc = BigInt::zero();
            for i in 0..r {
                acc += BigInt::from(b.entry(i, j)) * &nh[i] * BigInt::from(b.entry(i, j2));
            }
            e2[j * c + j2] = &nv[j] * acc;
        }
    }
    Ok((NonnegIntMatrix::new(r, e1)?, NonnegIntMatrix::new(c, e2)?))
}

/// Everything the construction produces besides the surface itself.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub surface: RectangleSurface,
    pub e1: NonnegIntMatrix,
    pub e2: NonnegIntMatrix,
    /// Perron eigenvalue of E1 (= E2), the product of the two shears.
    pub eigenvalue: Scalar,
    /// True when every dimension is exact (rational Perron data).
    pub exact: bool,
}

/// Build the normalized labeled surface determined by the Thurston-Veech
/// data. Normalization order: eigenvectors, then the diagonal flow that
/// equalizes the shortest horizontal and vertical saddle lengths, then a
/// global scale to area 1.
pub fn build_surface(tv: &TVData, prec: &Precision) -> Result<BuildOutput> {
    if !tv.diagram.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let (e1, e2) = transition_matrices(tv)?;
    let p1 = perron(&e1, prec)?;
    let p2 = perron(&e2, prec)?;
    let exact = p1.exact && p2.exact;
    let heights_raw = p1.vector;
    let widths_raw = p2.vector;
    let b = intersection_matrix(&tv.diagram);

    if exact {
        verify_consistency(tv, &b, &p1.value, &heights_raw, &widths_raw)?;
        let q2 = p2.value.as_rational().expect("exact");
        let q1 = p1.value.as_rational().expect("exact");
        if q1 != q2 {
            return Err(Error::DomainError(
                "transition matrices disagree on the Perron root".into(),
            ));
        }
    }

    // every rectangle corner is a distinguished point, so the shortest
    // horizontal (vertical) saddle connection is the least width (height)
    let min_w = RectangleSurface::min_scalar(&widths_raw, prec);
    let min_h = RectangleSurface::min_scalar(&heights_raw, prec);

    // area of the unnormalized surface: sum over rectangles of w*h
    let hcycles = tv.diagram.sigma_right.cycles();
    let mut vcycle_of = vec![0usize; tv.diagram.l];
    for (j, cyc) in tv.diagram.sigma_up.cycles().iter().enumerate() {
        for &k in cyc {
            vcycle_of[k] = j;
        }
    }
    let mut area = Scalar::zero();
    for (i, cyc) in hcycles.iter().enumerate() {
        for &k in cyc {
            area = area.add(&heights_raw[i].mul(&widths_raw[vcycle_of[k]]));
        }
    }

    // widths scale by gamma*delta = sqrt(min_h / (min_w * area)),
    // heights by delta/gamma = sqrt(min_w / (min_h * area))
    let width_scale = min_h.div(&min_w.mul(&area)).sqrt()?;
    let height_scale = min_w.div(&min_h.mul(&area)).sqrt()?;
    let widths: Vec<Scalar> = widths_raw.iter().map(|w| w.mul(&width_scale)).collect();
    let heights: Vec<Scalar> = heights_raw.iter().map(|h| h.mul(&height_scale)).collect();

    let surface = RectangleSurface::from_parts(
        tv.diagram.clone(),
        widths,
        heights,
        Some((
            tv.n_horizontal.entries().to_vec(),
            tv.n_vertical.entries().to_vec(),
        )),
        prec,
    )?;
    Ok(BuildOutput {
        surface,
        e1,
        e2,
        eigenvalue: p1.value,
        exact,
    })
}

/// Exact-path checks: n_i * mu_i is one constant per direction and the
/// eigenvalue is the product of the two constants.
fn verify_consistency(
    tv: &TVData,
    b: &IntersectionMatrix,
    eigenvalue: &Scalar,
    heights: &[Scalar],
    widths: &[Scalar],
) -> Result<()> {
    let mismatch = || Error::DomainError("n_i * mu_i is not constant per direction".into());
    let mut mu1: Option<BigRational> = None;
    for i in 0..b.rows {
        let mut c = BigRational::zero();
        for j in 0..b.cols {
            if b.entry(i, j) == 0 {
                continue;
            }
            c += BigRational::from_integer(BigInt::from(b.entry(i, j)))
                * widths[j].as_rational().expect("exact");
        }
        let mu = c / heights[i].as_rational().expect("exact");
        let nmu = mu * BigRational::from_integer(BigInt::from(tv.n_horizontal.entries()[i]));
        match &mu1 {
            Some(v) if *v != nmu => return Err(mismatch()),
            Some(_) => {}
            None => mu1 = Some(nmu),
        }
    }
    let mut mu2: Option<BigRational> = None;
    for j in 0..b.cols {
        let mut c = BigRational::zero();
        for i in 0..b.rows {
            if b.entry(i, j) == 0 {
                continue;
            }
            c += BigRational::from_integer(BigInt::from(b.entry(i, j)))
                * heights[i].as_rational().expect("exact");
        }
        let mu = c / widths[j].as_rational().expect("exact");
        let nmu = mu * BigRational::from_integer(BigInt::from(tv.n_vertical.entries()[j]));
        match &mu2 {
            Some(v) if *v != nmu => return Err(mismatch()),
            Some(_) => {}
            None => mu2 = Some(nmu),
        }
    }
    let prod = mu1.unwrap() * mu2.unwrap();
    if &prod != eigenvalue.as_rational().expect("exact") {
        return Err(Error::DomainError(
            "eigenvalue differs from the product of the parabolic shears".into(),
        ));
    }
    Ok(())
}

/// 2x2 matrix of scalars, row major.
pub type Matrix2 = [[Scalar; 2]; 2];

#[derive(Debug, Clone)]
pub struct ParabolicPair {
    /// Upper triangular shear [[1, mu],[0, 1]].
    pub horizontal: Matrix2,
    pub horizontal_shear: Scalar,
    /// Lower triangular shear [[1, 0],[mu', 1]].
    pub vertical: Matrix2,
    pub vertical_shear: Scalar,
}

/// Derivatives of the two simple parabolic automorphisms: shears by the
/// least common integer multiple of the inverse moduli in each direction.
pub fn parabolic_generators(s: &RectangleSurface) -> Result<ParabolicPair> {
    let shear = |dir: Direction| -> Result<Scalar> {
        let cyls = s.cylinders(dir);
        match s.twist_vector(dir) {
            Some(n) => Ok(cyls[0]
                .inverse_modulus
                .mul(&Scalar::from_integer(n[0] as i64))),
            None => Err(Error::NotCommensurable),
        }
    };
    let h = shear(Direction::Horizontal)?;
    let v = shear(Direction::Vertical)?;
    Ok(ParabolicPair {
        horizontal: [
            [Scalar::one(), h.clone()],
            [Scalar::zero(), Scalar::one()],
        ],
        horizontal_shear: h,
        vertical: [
            [Scalar::one(), Scalar::zero()],
            [v.clone(), Scalar::one()],
        ],
        vertical_shear: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Permutation;
    use num_traits::One;

    fn prec() -> Precision {
        Precision::default()
    }

    fn diagram(r: &[u64], u: &[u64]) -> CylinderDiagram {
        CylinderDiagram::new(
            Permutation::from_one_based(r).unwrap(),
            Permutation::from_one_based(u).unwrap(),
        )
        .unwrap()
    }

    fn lshape_tv() -> TVData {
        TVData::new(
            diagram(&[2, 1, 3], &[3, 2, 1]),
            TwistVector::new(vec![1, 2]).unwrap(),
            TwistVector::new(vec![1, 2]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn intersection_matrix_examples() {
        let b = intersection_matrix(&diagram(&[1], &[1]));
        assert_eq!((b.rows, b.cols), (1, 1));
        assert_eq!(b.entry(0, 0), 1);
        let b = intersection_matrix(&diagram(&[2, 1, 3], &[3, 2, 1]));
        assert_eq!((b.rows, b.cols), (2, 2));
        assert_eq!(b.row(0), &[1, 1]);
        assert_eq!(b.row(1), &[1, 0]);
        // one sigma_right cycle, two sigma_up cycles
        let b = intersection_matrix(&diagram(&[2, 1], &[1, 2]));
        assert_eq!((b.rows, b.cols), (1, 2));
        assert_eq!(b.row(0), &[1, 1]);
    }

    #[test]
    fn twist_vector_gcd_enforced() {
        assert!(TwistVector::new(vec![2, 4]).is_err());
        assert!(TwistVector::new(vec![]).is_err());
        assert!(TwistVector::new(vec![1, 0]).is_err());
        assert!(TwistVector::new(vec![2, 3]).is_ok());
    }

    #[test]
    fn lshape_transition_matrix_and_root() {
        let tv = lshape_tv();
        let (e1, e2) = transition_matrices(&tv).unwrap();
        assert_eq!(e1.entry(0, 0), &BigInt::from(3));
        assert_eq!(e1.entry(0, 1), &BigInt::from(1));
        assert_eq!(e1.entry(1, 0), &BigInt::from(2));
        assert_eq!(e1.entry(1, 1), &BigInt::from(2));
        let out = build_surface(&tv, &prec()).unwrap();
        assert!(out.exact);
        assert_eq!(
            out.eigenvalue.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(4))
        );
        // all three squares have side exactly 1/sqrt(3) = (1/3) sqrt(3)
        let third_sqrt3 = Scalar::from_ratio(1, 3).mul(&Scalar::from_integer(3).sqrt().unwrap());
        for k in 0..3 {
            let w = out.surface.width_of(k);
            let h = out.surface.height_of(k);
            assert_eq!(
                w.cmp_certified(&third_sqrt3, &prec()).unwrap(),
                core::cmp::Ordering::Equal
            );
            assert_eq!(
                h.cmp_certified(&third_sqrt3, &prec()).unwrap(),
                core::cmp::Ordering::Equal
            );
        }
        let p2 = perron(&e2, &prec()).unwrap();
        assert_eq!(
            p2.value.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(4))
        );
    }

    #[test]
    fn torus_build_is_unit_square() {
        let tv = TVData::new(
            diagram(&[1], &[1]),
            TwistVector::ones(1),
            TwistVector::ones(1),
        )
        .unwrap();
        let out = build_surface(&tv, &prec()).unwrap();
        assert_eq!(
            out.surface.width_of(0).as_rational().unwrap(),
            &BigRational::from_integer(BigInt::one())
        );
        assert_eq!(
            out.surface.height_of(0).as_rational().unwrap(),
            &BigRational::from_integer(BigInt::one())
        );
        assert_eq!(
            out.eigenvalue.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::one())
        );
    }

    #[test]
    fn twice_marked_torus_build_is_standard_form() {
        // sigma_right = (1 2), sigma_up = id: the M3 class; the normalized
        // build is two squares of side 1/sqrt(2), affinely equivalent to
        // the two 1/2 x 1 rectangles presentation.
        let tv = TVData::new(
            diagram(&[2, 1], &[1, 2]),
            TwistVector::ones(1),
            TwistVector::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        let out = build_surface(&tv, &prec()).unwrap();
        let side = Scalar::from_ratio(1, 2).mul(&Scalar::from_integer(2).sqrt().unwrap());
        for k in 0..2 {
            assert_eq!(
                out.surface
                    .width_of(k)
                    .cmp_certified(&side, &prec())
                    .unwrap(),
                core::cmp::Ordering::Equal
            );
        }
        // horizontal shear fixed by the built geometry: one cylinder of
        // circumference sqrt(2) and height 1/sqrt(2), inverse modulus 2
        let pg = parabolic_generators(&out.surface).unwrap();
        assert_eq!(
            pg.horizontal_shear.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(2))
        );
        assert_eq!(
            pg.vertical_shear.as_rational().unwrap(),
            &BigRational::one()
        );
    }

    #[test]
    fn parabolic_generators_examples() {
        let tv = TVData::new(
            diagram(&[1], &[1]),
            TwistVector::ones(1),
            TwistVector::ones(1),
        )
        .unwrap();
        let out = build_surface(&tv, &prec()).unwrap();
        let pg = parabolic_generators(&out.surface).unwrap();
        assert_eq!(pg.horizontal_shear.as_rational().unwrap(), &BigRational::one());
        assert_eq!(pg.vertical_shear.as_rational().unwrap(), &BigRational::one());
        // L-shape: LCM of inverse moduli {2, 1} is 2 in both directions
        let out = build_surface(&lshape_tv(), &prec()).unwrap();
        let pg = parabolic_generators(&out.surface).unwrap();
        assert_eq!(
            pg.horizontal_shear.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(2))
        );
        assert_eq!(
            pg.vertical_shear.as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(2))
        );
    }

    #[test]
    fn eigenvalue_is_product_of_shears() {
        let out = build_surface(&lshape_tv(), &prec()).unwrap();
        let pg = parabolic_generators(&out.surface).unwrap();
        let prod = pg.horizontal_shear.mul(&pg.vertical_shear);
        assert_eq!(
            prod.as_rational().unwrap(),
            out.eigenvalue.as_rational().unwrap()
        );
    }

    #[test]
    fn rebuild_round_trip_reproduces_dimensions() {
        let tv = lshape_tv();
        let out = build_surface(&tv, &prec()).unwrap();
        let nh = out.surface.twist_vector(Direction::Horizontal).unwrap();
        let nv = out.surface.twist_vector(Direction::Vertical).unwrap();
        let tv2 = TVData::new(
            out.surface.diagram().clone(),
            TwistVector::new(nh).unwrap(),
            TwistVector::new(nv).unwrap(),
        )
        .unwrap();
        let out2 = build_surface(&tv2, &prec()).unwrap();
        for k in 0..3 {
            assert_eq!(
                out.surface
                    .width_of(k)
                    .cmp_certified(out2.surface.width_of(k), &prec())
                    .unwrap(),
                core::cmp::Ordering::Equal
            );
            assert_eq!(
                out.surface
                    .height_of(k)
                    .cmp_certified(out2.surface.height_of(k), &prec())
                    .unwrap(),
                core::cmp::Ordering::Equal
            );
        }
    }

    #[test]
    fn exact_area_is_one() {
        for tv in [
            lshape_tv(),
            TVData::new(
                diagram(&[2, 3, 1], &[1, 2, 3]),
                TwistVector::ones(1),
                TwistVector::new(vec![1, 1, 1]).unwrap(),
            )
            .unwrap(),
        ] {
            let out = build_surface(&tv, &prec()).unwrap();
            assert!(out.surface.area().as_rational().unwrap().is_one());
        }
    }

    #[test]
    fn irrational_build_twist_shears_agree_within_tolerance() {
        let tv = TVData::new(
            diagram(&[2, 1, 3], &[3, 2, 1]),
            TwistVector::new(vec![1, 1]).unwrap(),
            TwistVector::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        let out = build_surface(&tv, &prec()).unwrap();
        assert!(!out.exact);
        for dir in [Direction::Horizontal, Direction::Vertical] {
            let cyls = out.surface.cylinders(dir);
            let n = out.surface.twist_vector(dir).unwrap();
            // the n_i mu_i enclosures must pairwise overlap: they denote
            // one real shear
            let shears: Vec<_> = cyls
                .iter()
                .zip(n.iter())
                .map(|(c, &ni)| {
                    c.inverse_modulus
                        .mul(&Scalar::from_integer(ni as i64))
                        .approx(96)
                        .unwrap()
                })
                .collect();
            for w in shears.windows(2) {
                assert!(
                    w[0].lo <= w[1].hi && w[1].lo <= w[0].hi,
                    "twist shear enclosures must overlap"
                );
            }
        }
    }

    #[test]
    fn irrational_build_certifies_area() {
        // twists all ones on the L diagram: E1 = B B^t = [[2,1],[1,1]],
        // golden-ratio Perron root
        let tv = TVData::new(
            diagram(&[2, 1, 3], &[3, 2, 1]),
            TwistVector::new(vec![1, 1]).unwrap(),
            TwistVector::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        let out = build_surface(&tv, &prec()).unwrap();
        assert!(!out.exact);
        let iv = out.surface.area().approx(96).unwrap();
        let one = BigRational::one();
        assert!(iv.lo <= one && one <= iv.hi);
    }
}
