//! Saddle-connection enumeration on rectangle surfaces.
//!
//! Developed points are tracked as integer combinations of the cycle widths
//! and heights, so collinearity at singular corners is decided exactly on
//! the coefficient lattice whenever possible, with certified interval signs
//! as the fallback. The search runs one open-cone depth-first pass per
//! bottom-left corner for the first quadrant, repeats on the left-right
//! mirror for the second, and closes under orientation reversal; axis
//! directions come from walking the cylinder boundary circles.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::surface::RectangleSurface;
use crate::error::{Error, Result};
use crate::numeric::dyadic::{dot, DyInterval};
use crate::numeric::{linear_combination, Precision, Scalar};

/// Developed point: x = sum xc[j] * width[j], y = sum yc[i] * height[i].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffVec {
    pub xc: Vec<BigInt>,
    pub yc: Vec<BigInt>,
}

impl CoeffVec {
    fn origin(s: &RectangleSurface) -> Self {
        CoeffVec {
            xc: vec![BigInt::zero(); s.widths_by_vcycle().len()],
            yc: vec![BigInt::zero(); s.heights_by_hcycle().len()],
        }
    }

    fn step_right(&self, s: &RectangleSurface, k: usize) -> Self {
        let mut out = self.clone();
        out.xc[s.vcycle_of(k)] += 1;
        out
    }

    fn step_up(&self, s: &RectangleSurface, k: usize) -> Self {
        let mut out = self.clone();
        out.yc[s.hcycle_of(k)] += 1;
        out
    }

    /// Top-right corner of rectangle k developed at this offset.
    fn far_corner(&self, s: &RectangleSurface, k: usize) -> Self {
        self.step_right(s, k).step_up(s, k)
    }

    pub fn x_scalar(&self, s: &RectangleSurface) -> Scalar {
        linear_combination(&self.xc, s.widths_by_vcycle())
    }

    pub fn y_scalar(&self, s: &RectangleSurface) -> Scalar {
        linear_combination(&self.yc, s.heights_by_hcycle())
    }

    pub fn negated(&self) -> Self {
        CoeffVec {
            xc: self.xc.iter().map(|c| -c).collect(),
            yc: self.yc.iter().map(|c| -c).collect(),
        }
    }

    fn mirror_x(&self) -> Self {
        CoeffVec {
            xc: self.xc.iter().map(|c| -c).collect(),
            yc: self.yc.clone(),
        }
    }
}

/// Boundary direction of an open cone: a coordinate axis or the direction
/// through a previously split corner.
#[derive(Debug, Clone)]
enum Dir {
    XAxis,
    YAxis,
    Pt(CoeffVec),
}

/// Fast certified decisions for the cone search and the spectra: exact
/// signs from the integer coefficient lattice where one-signed, then plain
/// interval arithmetic over cached dyadic enclosures of the cycle
/// dimensions, and only then the full scalar refinement.
pub(crate) struct DecisionCtx<'a> {
    s: &'a RectangleSurface,
    prec: &'a Precision,
    widths_iv: Vec<DyInterval>,
    heights_iv: Vec<DyInterval>,
    bits: u32,
    /// All dimensions exact: skip the cache and compute exactly.
    exact: bool,
}

impl<'a> DecisionCtx<'a> {
    pub(crate) fn new(s: &'a RectangleSurface, prec: &'a Precision) -> Result<Self> {
        let bits = prec.start_bits.min(96);
        let widths_iv = s
            .widths_by_vcycle()
            .iter()
            .map(|w| w.approx(bits))
            .collect::<Result<Vec<_>>>()?;
        let heights_iv = s
            .heights_by_hcycle()
            .iter()
            .map(|h| h.approx(bits))
            .collect::<Result<Vec<_>>>()?;
        let exact = s.widths_by_vcycle().iter().all(|w| w.is_exact())
            && s.heights_by_hcycle().iter().all(|h| h.is_exact());
        Ok(DecisionCtx {
            s,
            prec,
            widths_iv,
            heights_iv,
            bits,
            exact,
        })
    }

    fn x_iv(&self, v: &CoeffVec) -> DyInterval {
        dot(&v.xc, &self.widths_iv, self.bits)
    }

    fn y_iv(&self, v: &CoeffVec) -> DyInterval {
        dot(&v.yc, &self.heights_iv, self.bits)
    }

    /// Certified sign of the wedge a /\ b.
    pub(crate) fn wedge_sign_points(&self, a: &CoeffVec, b: &CoeffVec) -> Result<Ordering> {
        // exact on the coefficient lattice when the bilinear matrix
        // c_ij = a.xc[j] b.yc[i] - b.xc[j] a.yc[i] has one sign
        let mut any_pos = false;
        let mut any_neg = false;
        for j in 0..a.xc.len() {
            for i in 0..a.yc.len() {
                let c = &a.xc[j] * &b.yc[i] - &b.xc[j] * &a.yc[i];
                match c.sign() {
                    num_bigint::Sign::Plus => any_pos = true,
                    num_bigint::Sign::Minus => any_neg = true,
                    num_bigint::Sign::NoSign => {}
                }
                if any_pos && any_neg {
                    break;
                }
            }
        }
        match (any_pos, any_neg) {
            (false, false) => return Ok(Ordering::Equal),
            (true, false) => return Ok(Ordering::Greater),
            (false, true) => return Ok(Ordering::Less),
            (true, true) => {}
        }
        if !self.exact {
            // cached interval arithmetic
            let w = self
                .x_iv(a)
                .mul(&self.y_iv(b), self.bits)
                .sub(&self.x_iv(b).mul(&self.y_iv(a), self.bits), self.bits);
            if let Some(sign) = w.sign() {
                return Ok(sign);
            }
        }
        // exact computation or full scalar refinement
        let ax = a.x_scalar(self.s);
        let ay = a.y_scalar(self.s);
        let bx = b.x_scalar(self.s);
        let by = b.y_scalar(self.s);
        ax.mul(&by).sub(&bx.mul(&ay)).sign(self.prec)
    }

    fn wedge_sign(&self, a: &Dir, b: &CoeffVec) -> Result<Ordering> {
        match a {
            // x-axis /\ b = y(b); coefficients are nonnegative in the search
            Dir::XAxis => Ok(if b.yc.iter().all(|c| c.is_zero()) {
                Ordering::Equal
            } else if b.yc.iter().any(|c| c.is_negative()) {
                b.y_scalar(self.s).sign(self.prec)?
            } else {
                Ordering::Greater
            }),
            Dir::YAxis => unreachable!("y-axis is only used as an upper cone bound"),
            Dir::Pt(p) => self.wedge_sign_points(p, b),
        }
    }

    fn wedge_sign_upper(&self, b: &CoeffVec, a: &Dir) -> Result<Ordering> {
        match a {
            // b /\ y-axis = x(b)
            Dir::YAxis => Ok(if b.xc.iter().all(|c| c.is_zero()) {
                Ordering::Equal
            } else if b.xc.iter().any(|c| c.is_negative()) {
                b.x_scalar(self.s).sign(self.prec)?
            } else {
                Ordering::Greater
            }),
            Dir::XAxis => unreachable!("x-axis is only used as a lower cone bound"),
            Dir::Pt(p) => self.wedge_sign_points(b, p),
        }
    }

    /// len^2 of the developed point against l^2: Less/Equal means within
    /// the bound. An undecided cache check falls to scalar refinement.
    fn len2_cmp(&self, v: &CoeffVec, l2_iv: &DyInterval, l2: &Scalar) -> Result<Ordering> {
        if !self.exact {
            let x = self.x_iv(v);
            let y = self.y_iv(v);
            let d2 = x.mul(&x, self.bits).add(&y.mul(&y, self.bits), self.bits);
            if d2.lo > l2_iv.hi {
                return Ok(Ordering::Greater);
            }
            if d2.hi < l2_iv.lo {
                return Ok(Ordering::Less);
            }
        }
        let xs = v.x_scalar(self.s);
        let ys = v.y_scalar(self.s);
        xs.mul(&xs).add(&ys.mul(&ys)).cmp_certified(l2, self.prec)
    }

    /// Selection order on len^2 of developed vectors. Exact data compares
    /// exactly; interval data compares cached enclosures and treats an
    /// undecided check as a tie (lengths agreeing to within the cache
    /// resolution select interchangeably; certification never relies on
    /// interval-backed selection).
    pub(crate) fn cmp_len2(&self, a: &CoeffVec, b: &CoeffVec) -> Result<Ordering> {
        if self.exact {
            let al = {
                let x = a.x_scalar(self.s);
                let y = a.y_scalar(self.s);
                x.mul(&x).add(&y.mul(&y))
            };
            let bl = {
                let x = b.x_scalar(self.s);
                let y = b.y_scalar(self.s);
                x.mul(&x).add(&y.mul(&y))
            };
            return al.cmp_certified(&bl, self.prec);
        }
        let ax = self.x_iv(a);
        let ay = self.y_iv(a);
        let a2 = ax.mul(&ax, self.bits).add(&ay.mul(&ay, self.bits), self.bits);
        let bx = self.x_iv(b);
        let by = self.y_iv(b);
        let b2 = bx.mul(&bx, self.bits).add(&by.mul(&by, self.bits), self.bits);
        if a2.lo > b2.hi {
            return Ok(Ordering::Greater);
        }
        if a2.hi < b2.lo {
            return Ok(Ordering::Less);
        }
        Ok(Ordering::Equal)
    }

    /// Interval enclosure of the wedge a /\ b from the cache.
    pub(crate) fn wedge_iv(&self, a: &CoeffVec, b: &CoeffVec) -> DyInterval {
        self.x_iv(a)
            .mul(&self.y_iv(b), self.bits)
            .sub(&self.x_iv(b).mul(&self.y_iv(a), self.bits), self.bits)
    }

    pub(crate) fn is_exact(&self) -> bool {
        self.exact
    }

    /// Lenient prune check: certainly-beyond means the subtree is dead;
    /// anything undecided keeps searching, which is always sound.
    fn certainly_beyond(&self, v: &CoeffVec, l2_iv: &DyInterval, l2: &Scalar) -> bool {
        if self.exact {
            let xs = v.x_scalar(self.s);
            let ys = v.y_scalar(self.s);
            let d2 = xs.mul(&xs).add(&ys.mul(&ys));
            return matches!(
                d2.cmp_certified(l2, self.prec),
                Ok(Ordering::Greater)
            );
        }
        let x = self.x_iv(v);
        let y = self.y_iv(v);
        let d2 = x.mul(&x, self.bits).add(&y.mul(&y, self.bits), self.bits);
        d2.lo > l2_iv.hi
    }
}

/// Oriented saddle connection: holonomy, endpoint singularity classes and
/// the chain of rectangles the developed segment crosses.
#[derive(Debug, Clone)]
pub struct SaddleConnection {
    pub hol_x: Scalar,
    pub hol_y: Scalar,
    pub from_class: usize,
    pub to_class: usize,
    pub path: Vec<usize>,
    /// Integer coefficients of the holonomy over (widths, heights).
    pub coeffs: CoeffVec,
}

impl SaddleConnection {
    pub fn len2(&self) -> Scalar {
        self.hol_x.mul(&self.hol_x).add(&self.hol_y.mul(&self.hol_y))
    }

    pub fn reversed(&self) -> SaddleConnection {
        let mut path = self.path.clone();
        path.reverse();
        SaddleConnection {
            hol_x: self.hol_x.neg(),
            hol_y: self.hol_y.neg(),
            from_class: self.to_class,
            to_class: self.from_class,
            path,
            coeffs: self.coeffs.negated(),
        }
    }
}

struct Search<'a> {
    ctx: &'a DecisionCtx<'a>,
    l2: Scalar,
    l2_iv: DyInterval,
    found: Vec<SaddleConnection>,
    start_class: usize,
}

impl<'a> Search<'a> {
    /// Visit rectangle `k` developed with bottom-left offset `o`, with the
    /// live open cone (lo, hi). Records the far corner when it lies
    /// strictly inside the cone and within the length bound, splits the
    /// cone there, and recurses through the right and top exits.
    fn visit(&mut self, k: usize, o: &CoeffVec, lo: &Dir, hi: &Dir, path: &mut Vec<usize>) -> Result<()> {
        // prune: everything reachable is at distance >= |o|; an undecided
        // check keeps searching, which is always sound
        if self.ctx.certainly_beyond(o, &self.l2_iv, &self.l2) {
            return Ok(());
        }
        let s = self.ctx.s;
        path.push(k);
        let f = o.far_corner(s, k);
        let lo_f = self.ctx.wedge_sign(lo, &f)?;
        let f_hi = self.ctx.wedge_sign_upper(&f, hi)?;
        if lo_f == Ordering::Greater && f_hi == Ordering::Greater {
            // far corner strictly inside the cone: this is the unique
            // saddle-connection candidate of the visit
            match self.ctx.len2_cmp(&f, &self.l2_iv, &self.l2)? {
                Ordering::Greater => {}
                _ => self.found.push(SaddleConnection {
                    hol_x: f.x_scalar(s),
                    hol_y: f.y_scalar(s),
                    from_class: self.start_class,
                    to_class: s.class_of_tr(k),
                    path: path.clone(),
                    coeffs: f.clone(),
                }),
            }
            let dir_f = Dir::Pt(f.clone());
            // right child: directions strictly below dir(f)
            self.visit(s.right_neighbor(k), &o.step_right(s, k), lo, &dir_f, path)?;
            // top child: directions strictly above dir(f)
            self.visit(s.up_neighbor(k), &o.step_up(s, k), &dir_f, hi, path)?;
        } else if lo_f != Ordering::Greater {
            // cone is entirely counterclockwise of the far corner: exit top
            self.visit(s.up_neighbor(k), &o.step_up(s, k), lo, hi, path)?;
        } else {
            // cone is entirely clockwise of the far corner: exit right
            self.visit(s.right_neighbor(k), &o.step_right(s, k), lo, hi, path)?;
        }
        path.pop();
        Ok(())
    }
}

/// Connections with direction in the open first quadrant, starting at each
/// bottom-left corner.
fn first_quadrant(s: &RectangleSurface, l2: &Scalar, prec: &Precision) -> Result<Vec<SaddleConnection>> {
    let ctx = DecisionCtx::new(s, prec)?;
    let l2_iv = l2.approx(prec.start_bits)?;
    let mut out = Vec::new();
    for k in 0..s.len() {
        let mut search = Search {
            ctx: &ctx,
            l2: l2.clone(),
            l2_iv: l2_iv.clone(),
            found: Vec::new(),
            start_class: s.class_of_bl(k),
        };
        let o = CoeffVec::origin(s);
        let mut path = Vec::new();
        search.visit(k, &o, &Dir::XAxis, &Dir::YAxis, &mut path)?;
        out.append(&mut search.found);
    }
    Ok(out)
}

/// Axis-direction connections: along each cylinder boundary circle the
/// distinguished corners are consecutive, so every gap is one rectangle
/// side and there is exactly one oriented connection per gap (plus its
/// reverse emitted by the caller).
fn horizontal_connections(s: &RectangleSurface, l2: &Scalar, prec: &Precision) -> Result<Vec<SaddleConnection>> {
    let mut out = Vec::new();
    for cyc in s.hcycles() {
        for &k in cyc {
            let w = s.width_of(k);
            let len2 = w.mul(w);
            if len2.cmp_certified(l2, prec)? == Ordering::Greater {
                continue;
            }
            let mut coeffs = CoeffVec::origin(s);
            coeffs.xc[s.vcycle_of(k)] += 1;
            out.push(SaddleConnection {
                hol_x: w.clone(),
                hol_y: Scalar::zero(),
                from_class: s.class_of_bl(k),
                to_class: s.class_of_br(k),
                path: vec![k],
                coeffs,
            });
        }
    }
    Ok(out)
}

fn vertical_connections(s: &RectangleSurface, l2: &Scalar, prec: &Precision) -> Result<Vec<SaddleConnection>> {
    let mut out = Vec::new();
    for cyc in s.vcycles() {
        for &k in cyc {
            let h = s.height_of(k);
            let len2 = h.mul(h);
            if len2.cmp_certified(l2, prec)? == Ordering::Greater {
                continue;
            }
            let mut coeffs = CoeffVec::origin(s);
            coeffs.yc[s.hcycle_of(k)] += 1;
            out.push(SaddleConnection {
                hol_x: Scalar::zero(),
                hol_y: h.clone(),
                from_class: s.class_of_bl(k),
                to_class: s.class_of_tl(k),
                path: vec![k],
                coeffs,
            });
        }
    }
    Ok(out)
}

/// All oriented saddle connections with |hol| <= L, each exactly once,
/// closed under orientation reversal. Deterministic order.
pub fn enumerate_saddle_connections(
    s: &RectangleSurface,
    l: &Scalar,
    prec: &Precision,
) -> Result<Vec<SaddleConnection>> {
    match l.sign(prec)? {
        Ordering::Greater => {}
        _ => return Err(Error::DomainError("scan length must be positive".into())),
    }
    let l2 = l.mul(l);
    let mut out = Vec::new();
    out.extend(horizontal_connections(s, &l2, prec)?);
    out.extend(vertical_connections(s, &l2, prec)?);
    out.extend(first_quadrant(s, &l2, prec)?);
    // second quadrant via the left-right mirror
    let m = s.mirrored_lr();
    for c in first_quadrant(&m, &l2, prec)? {
        // mirrored bottom-left of k is the original bottom-right; mirrored
        // top-right of k is the original top-left
        let from_class = s.class_of_br(c.path[0]);
        let to_class = s.class_of_tl(*c.path.last().expect("nonempty path"));
        out.push(SaddleConnection {
            hol_x: c.hol_x.neg(),
            hol_y: c.hol_y,
            from_class,
            to_class,
            path: c.path,
            coeffs: c.coeffs.mirror_x(),
        });
    }
    let reverses: Vec<SaddleConnection> = out.iter().map(|c| c.reversed()).collect();
    out.extend(reverses);
    out.sort_by(|a, b| {
        a.coeffs
            .cmp(&b.coeffs)
            .then_with(|| a.from_class.cmp(&b.from_class))
            .then_with(|| a.path.cmp(&b.path))
    });
    Ok(out)
}
