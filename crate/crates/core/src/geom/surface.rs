//! Rectangle-decomposed translation surfaces.
//!
//! A surface is l labeled rectangles with widths constant along vertical
//! (sigma_up) cycles and heights constant along horizontal (sigma_right)
//! cycles; the right edge of k glues to the left edge of sigma_right(k) and
//! the top of k to the bottom of sigma_up(k). Every rectangle corner is a
//! distinguished point: corner classes are the commutator cycles, with
//! 2*pi*k cone angle for a class of size k (k = 1 classes are marked
//! points, retained throughout).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::combinat::{
    genus_and_tau, singularity_profile, CylinderDiagram, SingularityProfile, TwistInts,
};
use crate::error::{Error, Result};
use crate::numeric::{Precision, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// One cylinder of a horizontal or vertical decomposition. For vertical
/// cylinders the `height` field measures the horizontal width, per the
/// convention that inverse modulus = circumference / height.
#[derive(Debug, Clone)]
pub struct CylinderInfo {
    /// Rectangle labels in cycle order.
    pub cycle: Vec<usize>,
    pub height: Scalar,
    pub circumference: Scalar,
    pub inverse_modulus: Scalar,
    pub area: Scalar,
}

#[derive(Debug, Clone)]
pub struct RectangleSurface {
    diagram: CylinderDiagram,
    hcycles: Vec<Vec<usize>>,
    vcycles: Vec<Vec<usize>>,
    hcycle_of: Vec<usize>,
    vcycle_of: Vec<usize>,
    /// Heights indexed by horizontal cycles.
    heights: Vec<Scalar>,
    /// Widths indexed by vertical cycles.
    widths: Vec<Scalar>,
    /// Corner class of the bottom-left corner of each rectangle.
    class_of_bl: Vec<usize>,
    class_count: usize,
    profile: SingularityProfile,
    genus: u64,
    gamma: u64,
    /// Twist vectors carried over from the Thurston-Veech construction.
    twists: Option<(TwistInts, TwistInts)>,
}

impl RectangleSurface {
    /// Assemble and validate: checks the area normalization (exactly 1 on
    /// exact data, certified within 2^-64 otherwise).
    pub fn from_parts(
        diagram: CylinderDiagram,
        widths: Vec<Scalar>,
        heights: Vec<Scalar>,
        twists: Option<(TwistInts, TwistInts)>,
        prec: &Precision,
    ) -> Result<Self> {
        let s = Self::assemble(diagram, widths, heights, twists)?;
        s.verify_area(prec)?;
        Ok(s)
    }

    /// Assemble without the area check (used for mirrored copies, which
    /// preserve area by construction).
    pub(crate) fn assemble(
        diagram: CylinderDiagram,
        widths: Vec<Scalar>,
        heights: Vec<Scalar>,
        twists: Option<(TwistInts, TwistInts)>,
    ) -> Result<Self> {
        if !diagram.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let hcycles = diagram.sigma_right.cycles();
        let vcycles = diagram.sigma_up.cycles();
        if heights.len() != hcycles.len() || widths.len() != vcycles.len() {
            return Err(Error::InvalidTwist(
                "dimension vectors must be indexed by cycles".into(),
            ));
        }
        let l = diagram.l;
        let mut hcycle_of = vec![0; l];
        for (ci, cyc) in hcycles.iter().enumerate() {
            for &k in cyc {
                hcycle_of[k] = ci;
            }
        }
        let mut vcycle_of = vec![0; l];
        for (ci, cyc) in vcycles.iter().enumerate() {
            for &k in cyc {
                vcycle_of[k] = ci;
            }
        }
        let commutator_cycles = diagram.commutator().cycles();
        let mut class_of_bl = vec![0; l];
        for (ci, cyc) in commutator_cycles.iter().enumerate() {
            for &k in cyc {
                class_of_bl[k] = ci;
            }
        }
        let profile = singularity_profile(&diagram);
        let gt = genus_and_tau(&profile)?;
        Ok(RectangleSurface {
            class_count: commutator_cycles.len(),
            diagram,
            hcycles,
            vcycles,
            hcycle_of,
            vcycle_of,
            heights,
            widths,
            class_of_bl,
            profile,
            genus: gt.genus,
            gamma: gt.gamma,
            twists,
        })
    }

    fn verify_area(&self, prec: &Precision) -> Result<()> {
        let area = self.area();
        if let Some(q) = area.as_rational() {
            if !q.is_one() {
                return Err(Error::DomainError(alloc::format!(
                    "surface area {q} is not 1"
                )));
            }
            return Ok(());
        }
        // interval data: certified |area - 1| <= 2^-64
        let bits = prec.tol_bits.max(64) + 16;
        let iv = area.approx(bits)?;
        let one = BigRational::one();
        let tol = BigRational::new(BigInt::one(), BigInt::one() << 64);
        if (&iv.lo - &one).abs() > tol || (&iv.hi - &one).abs() > tol {
            return Err(Error::DomainError("area differs from 1 beyond 2^-64".into()));
        }
        Ok(())
    }

    pub fn area(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..self.len() {
            acc = acc.add(&self.width_of(k).mul(self.height_of(k)));
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.diagram.l
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diagram(&self) -> &CylinderDiagram {
        &self.diagram
    }

    pub fn profile(&self) -> &SingularityProfile {
        &self.profile
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// tau / pi, an even integer.
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn tau(&self) -> Scalar {
        Scalar::from_integer(self.gamma as i64).mul(&Scalar::pi())
    }

    pub fn width_of(&self, k: usize) -> &Scalar {
        &self.widths[self.vcycle_of[k]]
    }

    pub fn height_of(&self, k: usize) -> &Scalar {
        &self.heights[self.hcycle_of[k]]
    }

    pub fn widths_by_vcycle(&self) -> &[Scalar] {
        &self.widths
    }

    pub fn heights_by_hcycle(&self) -> &[Scalar] {
        &self.heights
    }

    pub fn hcycles(&self) -> &[Vec<usize>] {
        &self.hcycles
    }

    pub fn vcycles(&self) -> &[Vec<usize>] {
        &self.vcycles
    }

    pub fn hcycle_of(&self, k: usize) -> usize {
        self.hcycle_of[k]
    }

    pub fn vcycle_of(&self, k: usize) -> usize {
        self.vcycle_of[k]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Corner classes: every rectangle corner is a point of Sigma.
    pub fn class_of_bl(&self, k: usize) -> usize {
        self.class_of_bl[k]
    }

    pub fn class_of_br(&self, k: usize) -> usize {
        self.class_of_bl[self.diagram.sigma_right.apply(k)]
    }

    pub fn class_of_tl(&self, k: usize) -> usize {
        self.class_of_bl[self.diagram.sigma_up.apply(k)]
    }

    pub fn class_of_tr(&self, k: usize) -> usize {
        self.class_of_bl[self
            .diagram
            .sigma_up
            .apply(self.diagram.sigma_right.apply(k))]
    }

    pub fn right_neighbor(&self, k: usize) -> usize {
        self.diagram.sigma_right.apply(k)
    }

    pub fn up_neighbor(&self, k: usize) -> usize {
        self.diagram.sigma_up.apply(k)
    }

    pub fn provenance_twists(&self) -> Option<&(TwistInts, TwistInts)> {
        self.twists.as_ref()
    }

    /// Cylinders of the horizontal (vertical) decomposition, one per cycle
    /// of the corresponding permutation, in cycle order.
    pub fn cylinders(&self, dir: Direction) -> Vec<CylinderInfo> {
        let (cycles, transverse): (&[Vec<usize>], &dyn Fn(usize) -> Scalar) = match dir {
            Direction::Horizontal => (&self.hcycles, &|k| self.height_of(k).clone()),
            Direction::Vertical => (&self.vcycles, &|k| self.width_of(k).clone()),
        };
        cycles
            .iter()
            .map(|cyc| {
                let height = transverse(cyc[0]);
                let mut circumference = Scalar::zero();
                for &k in cyc {
                    let along = match dir {
                        Direction::Horizontal => self.width_of(k),
                        Direction::Vertical => self.height_of(k),
                    };
                    circumference = circumference.add(along);
                }
                let inverse_modulus = circumference.div(&height);
                let area = circumference.mul(&height);
                CylinderInfo {
                    cycle: cyc.clone(),
                    height,
                    circumference,
                    inverse_modulus,
                    area,
                }
            })
            .collect()
    }

    /// Dehn twist vector for a direction: n_i = LCM(mu)/mu_i when the
    /// inverse moduli are commensurable. Exact data decides exactly; for
    /// interval-backed surfaces the twist vectors recorded by the
    /// construction are returned. `None` means not certified commensurable.
    pub fn twist_vector(&self, dir: Direction) -> Option<TwistInts> {
        let cyls = self.cylinders(dir);
        let ratios: Option<Vec<BigRational>> = cyls
            .iter()
            .map(|c| {
                c.inverse_modulus
                    .div(&cyls[0].inverse_modulus)
                    .as_rational()
                    .cloned()
            })
            .collect();
        if let Some(ratios) = ratios {
            // mu = mu_1 * L, L = lcm of numerators / gcd of denominators
            // of the reduced ratios; then n_i = L / ratio_i.
            let mut lcm_num = BigInt::one();
            let mut gcd_den: Option<BigInt> = None;
            for r in &ratios {
                lcm_num = num_integer::lcm(lcm_num.clone(), r.numer().clone());
                gcd_den = Some(match gcd_den {
                    Some(g) => num_integer::gcd(g, r.denom().clone()),
                    None => r.denom().clone(),
                });
            }
            let l_rat = BigRational::new(lcm_num, gcd_den.unwrap_or_else(BigInt::one));
            let mut n = Vec::with_capacity(ratios.len());
            for r in &ratios {
                let q = &l_rat / r;
                if !q.is_integer() || !q.is_positive() {
                    return None;
                }
                n.push(q.to_integer().try_into().ok()?);
            }
            return Some(n);
        }
        // interval-backed: commensurability is guaranteed by the
        // construction; report the recorded Dehn twist vectors
        self.twists.as_ref().map(|(nh, nv)| match dir {
            Direction::Horizontal => nh.clone(),
            Direction::Vertical => nv.clone(),
        })
    }

    /// Left-right mirror image: sigma_right inverts, widths and heights are
    /// preserved. Used to enumerate the second quadrant by reusing the
    /// first-quadrant search.
    pub(crate) fn mirrored_lr(&self) -> RectangleSurface {
        let diagram = CylinderDiagram {
            l: self.diagram.l,
            sigma_right: self.diagram.sigma_right.inverse(),
            sigma_up: self.diagram.sigma_up.clone(),
        };
        // cycle sets are preserved under inversion, and cycles() orders by
        // smallest element, so per-cycle dimension vectors stay aligned
        RectangleSurface::assemble(
            diagram,
            self.widths.clone(),
            self.heights.clone(),
            self.twists.clone(),
        )
        .expect("mirror of a valid surface is valid")
    }

    /// Certified minimum of a nonempty list of positive scalars. When two
    /// entries cannot be separated within the precision cap they are equal
    /// up to 2^-cap and either choice is a valid minimum for the
    /// normalization flow (which only rescales within the affine class).
    pub fn min_scalar(items: &[Scalar], prec: &Precision) -> Scalar {
        let mut best = items[0].clone();
        for s in &items[1..] {
            match s.cmp_certified(&best, prec) {
                Ok(Ordering::Less) => best = s.clone(),
                Ok(_) => {}
                Err(_) => {}
            }
        }
        best
    }
}
