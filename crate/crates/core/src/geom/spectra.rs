//! Holonomy spectra: minimal virtual-triangle values with lattice
//! certification, alpha brackets, and the standard-form change of basis.

use alloc::vec::Vec;
use core::cmp::Ordering;
use num_rational::BigRational;
use num_traits::One;

use super::saddle::{enumerate_saddle_connections, DecisionCtx, SaddleConnection};
use super::surface::RectangleSurface;
use crate::error::{Error, Result};
use crate::numeric::{Precision, Scalar};

/// x1*y2 - x2*y1 of two holonomy vectors.
pub fn wedge(a: &SaddleConnection, b: &SaddleConnection) -> Scalar {
    a.hol_x.mul(&b.hol_y).sub(&b.hol_x.mul(&a.hol_y))
}

/// Certified wedge sign: exact on one-signed coefficient matrices, cached
/// interval arithmetic next, full scalar refinement last.
pub fn wedge_sign(
    s: &RectangleSurface,
    a: &SaddleConnection,
    b: &SaddleConnection,
    prec: &Precision,
) -> Result<Ordering> {
    let ctx = DecisionCtx::new(s, prec)?;
    ctx.wedge_sign_points(&a.coeffs, &b.coeffs)
}

/// Partition connections into parallelism classes (unoriented directions).
pub fn direction_classes<'a>(
    s: &RectangleSurface,
    conns: &'a [SaddleConnection],
    prec: &Precision,
) -> Result<Vec<Vec<&'a SaddleConnection>>> {
    let ctx = DecisionCtx::new(s, prec)?;
    direction_classes_ctx(&ctx, conns)
}

fn direction_classes_ctx<'a>(
    ctx: &DecisionCtx<'_>,
    conns: &'a [SaddleConnection],
) -> Result<Vec<Vec<&'a SaddleConnection>>> {
    let mut classes: Vec<Vec<&SaddleConnection>> = Vec::new();
    for c in conns {
        let mut placed = false;
        for class in classes.iter_mut() {
            if ctx.wedge_sign_points(&class[0].coeffs, &c.coeffs)? == Ordering::Equal {
                class.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(alloc::vec![c]);
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone)]
pub struct VirtualTriangleMin {
    /// Minimum nonzero |v1 /\ v2| over the enumerated pairs: an upper
    /// bound on beta(M), exact when certified.
    pub value: Scalar,
    /// True when all enumerated holonomies lie in a rank-2 lattice whose
    /// covolume equals `value`; then beta(M) equals `value` exactly.
    pub certified: bool,
}

/// Minimum nonzero wedge over all pairs of enumerated holonomies up to
/// length L, with lattice certification.
pub fn min_virtual_triangle(
    s: &RectangleSurface,
    l: &Scalar,
    prec: &Precision,
) -> Result<VirtualTriangleMin> {
    let conns = enumerate_saddle_connections(s, l, prec)?;
    min_virtual_triangle_of(s, &conns, prec)
}

/// Same, over an already-enumerated closed set of connections.
pub fn min_virtual_triangle_of(
    s: &RectangleSurface,
    conns: &[SaddleConnection],
    prec: &Precision,
) -> Result<VirtualTriangleMin> {
    let ctx = DecisionCtx::new(s, prec)?;
    let classes = direction_classes_ctx(&ctx, conns)?;
    if classes.len() < 2 {
        return Err(Error::InsufficientData);
    }
    // |v /\ w| = |v||w| sin(angle), so the minimum over each pair of
    // directions is attained by the shortest representatives
    let mut reps: Vec<&SaddleConnection> = Vec::new();
    for class in &classes {
        let mut best = class[0];
        for c in &class[1..] {
            if let Ok(Ordering::Less) = ctx.cmp_len2(&c.coeffs, &best.coeffs) {
                best = c;
            }
        }
        reps.push(best);
    }
    let mut min_abs: Option<(Scalar, crate::numeric::DyInterval)> = None;
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            let (a, b) = match ctx.wedge_sign_points(&reps[i].coeffs, &reps[j].coeffs)? {
                Ordering::Equal => continue,
                Ordering::Less => (reps[j], reps[i]),
                Ordering::Greater => (reps[i], reps[j]),
            };
            let aw = wedge(a, b);
            // track the minimum by exact comparison on exact data; on
            // interval data compare cached enclosures, keeping the current
            // holder on a tie (both enclose the same minimum then)
            min_abs = Some(match min_abs {
                None => {
                    let iv = ctx.wedge_iv(&a.coeffs, &b.coeffs);
                    (aw, iv)
                }
                Some((cur, cur_iv)) => {
                    let smaller = if ctx.is_exact() {
                        matches!(aw.cmp_certified(&cur, prec), Ok(Ordering::Less))
                    } else {
                        let iv = ctx.wedge_iv(&a.coeffs, &b.coeffs);
                        iv.hi < cur_iv.lo
                    };
                    if smaller {
                        let iv = ctx.wedge_iv(&a.coeffs, &b.coeffs);
                        (aw, iv)
                    } else {
                        (cur, cur_iv)
                    }
                }
            });
        }
    }
    let value = min_abs.ok_or(Error::InsufficientData)?.0;

    // lattice certification: the two shortest independent holonomies must
    // generate a lattice Lambda containing hol(M) with covolume equal to
    // the observed minimum. Containment is global, not just up to the scan
    // length: every holonomy is an integer combination of the cycle widths
    // (first coordinate) and cycle heights (second), since saddle
    // connections develop corner to corner through whole rectangles; it
    // therefore suffices that the generators (W_j, 0) and (0, H_i) have
    // integer coordinates in the basis. Every nonzero wedge of lattice
    // vectors is then a multiple of the covolume, which is attained.
    let certified = (|| -> Result<bool> {
        let e1 = shortest_ctx(&ctx, conns)?;
        let mut e2: Option<&SaddleConnection> = None;
        for c in sorted_by_len_ctx(&ctx, conns) {
            if ctx.wedge_sign_points(&e1.coeffs, &c.coeffs)? != Ordering::Equal {
                e2 = Some(c);
                break;
            }
        }
        let Some(e2) = e2 else { return Ok(false) };
        let det = wedge(e1, e2);
        let Some(det_q) = det.as_rational().cloned() else {
            return Ok(false);
        };
        let integral = |x: &Scalar, y: &Scalar| -> Option<bool> {
            // coordinates of (x, y) in the basis (e1, e2)
            let s_num = x.mul(&e2.hol_y).sub(&e2.hol_x.mul(y));
            let t_num = e1.hol_x.mul(y).sub(&x.mul(&e1.hol_y));
            let (sq, tq) = (s_num.as_rational()?, t_num.as_rational()?);
            Some((sq / &det_q).is_integer() && (tq / &det_q).is_integer())
        };
        let zero = Scalar::zero();
        for w in s.widths_by_vcycle() {
            match integral(w, &zero) {
                Some(true) => {}
                _ => return Ok(false),
            }
        }
        for h in s.heights_by_hcycle() {
            match integral(&zero, h) {
                Some(true) => {}
                _ => return Ok(false),
            }
        }
        let abs_det = if det_q < BigRational::from_integer(0.into()) {
            -det_q
        } else {
            det_q
        };
        let Some(vq) = value.as_rational() else {
            return Ok(false);
        };
        Ok(&abs_det == vq)
    })()?;
    Ok(VirtualTriangleMin { value, certified })
}

fn shortest_ctx<'a>(
    ctx: &DecisionCtx<'_>,
    conns: &'a [SaddleConnection],
) -> Result<&'a SaddleConnection> {
    let mut best = conns.first().ok_or(Error::InsufficientData)?;
    for c in &conns[1..] {
        match ctx.cmp_len2(&c.coeffs, &best.coeffs) {
            Ok(Ordering::Less) => best = c,
            Ok(Ordering::Equal) => {
                if c.coeffs < best.coeffs {
                    best = c;
                }
            }
            _ => {}
        }
    }
    Ok(best)
}

fn sorted_by_len_ctx<'a>(
    ctx: &DecisionCtx<'_>,
    conns: &'a [SaddleConnection],
) -> Vec<&'a SaddleConnection> {
    let mut v: Vec<&SaddleConnection> = conns.iter().collect();
    v.sort_by(|a, b| match ctx.cmp_len2(&a.coeffs, &b.coeffs) {
        Ok(o) if o != Ordering::Equal => o,
        _ => a.coeffs.cmp(&b.coeffs),
    });
    v
}

#[derive(Debug, Clone)]
pub struct AlphaBracket {
    pub lo: Scalar,
    pub hi: Scalar,
    /// Set when lo equals hi: the exact value of alpha(M).
    pub exact: Option<Scalar>,
    pub beta: VirtualTriangleMin,
}

/// Bracket alpha(M): lo = certified beta / 2 (else 0); hi = min(pi/tau,
/// observed-minimum-wedge / 2). pi/tau is the exact rational 1/gamma.
pub fn alpha_bounds(s: &RectangleSurface, l: &Scalar, prec: &Precision) -> Result<AlphaBracket> {
    let beta = min_virtual_triangle(s, l, prec)?;
    alpha_bracket_from(s.gamma(), beta, prec)
}

/// The bracket from an already-computed virtual-triangle minimum.
pub fn alpha_bracket_from(
    gamma: u64,
    beta: VirtualTriangleMin,
    prec: &Precision,
) -> Result<AlphaBracket> {
    let half = Scalar::from_ratio(1, 2);
    let hi_tau = Scalar::from_rational(BigRational::new(
        BigRational::one().numer().clone(),
        gamma.into(),
    ));
    let hi_wedge = beta.value.mul(&half);
    let hi = hi_tau.min_certified(&hi_wedge, prec)?;
    let lo = if beta.certified {
        beta.value.mul(&half)
    } else {
        Scalar::zero()
    };
    let exact = match lo.cmp_certified(&hi, prec) {
        Ok(Ordering::Equal) => Some(lo.clone()),
        _ => None,
    };
    Ok(AlphaBracket {
        lo,
        hi,
        exact,
        beta,
    })
}

/// 2x2 scalar matrix applied to a holonomy vector.
pub fn apply2(m: &[[Scalar; 2]; 2], x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
    (
        m[0][0].mul(x).add(&m[0][1].mul(y)),
        m[1][0].mul(x).add(&m[1][1].mul(y)),
    )
}

/// Unit-determinant matrix sending hol(xi) to (sqrt(b), 0) and hol(eta) to
/// (0, +/- sqrt(b)) where b = |hol(xi) /\ hol(eta)|.
pub fn standardize(
    xi: (&Scalar, &Scalar),
    eta: (&Scalar, &Scalar),
    prec: &Precision,
) -> Result<[[Scalar; 2]; 2]> {
    let (x1, y1) = xi;
    let (x2, y2) = eta;
    let d = x1.mul(y2).sub(&x2.mul(y1));
    let sign = d.sign(prec)?;
    match sign {
        Ordering::Equal => Err(Error::DegeneratePair),
        Ordering::Greater => {
            let root = d.sqrt()?;
            Ok([
                [y2.div(&root), x2.neg().div(&root)],
                [y1.neg().div(&root), x1.div(&root)],
            ])
        }
        Ordering::Less => {
            let b = d.neg();
            let root = b.sqrt()?;
            Ok([
                [y2.neg().div(&root), x2.div(&root)],
                [y1.neg().div(&root), x1.div(&root)],
            ])
        }
    }
}

/// Length of the shortest saddle connection found up to L (the measured
/// lambda, valid as the true lambda whenever any connection exists below L).
pub fn measured_lambda(s: &RectangleSurface, l: &Scalar, prec: &Precision) -> Result<Scalar> {
    let conns = enumerate_saddle_connections(s, l, prec)?;
    if conns.is_empty() {
        return Err(Error::InsufficientData);
    }
    let ctx = DecisionCtx::new(s, prec)?;
    let best = shortest_ctx(&ctx, &conns)?;
    best.len2().sqrt()
}
