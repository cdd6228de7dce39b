//! Perron-Frobenius eigendata with certification.
//!
//! Rational Perron roots of integer matrices are necessarily integers
//! (monic integer characteristic polynomial), so the solver first scans the
//! integers in the row-sum range for a root whose eigenspace contains a
//! strictly positive vector; positivity certifies that root as the Perron
//! root of an irreducible matrix and the output is exact with residual
//! exactly zero. Otherwise the root and eigenvector are returned as shared
//! interval expressions backed by Collatz-Wielandt bracketing.

use alloc::sync::Arc;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::NonnegIntMatrix;
use super::scalar::{Precision, Scalar};
use super::expr::{EigenData, Expr};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PerronData {
    /// Perron root.
    pub value: Scalar,
    /// Strictly positive eigenvector, first entry exactly 1.
    pub vector: Vec<Scalar>,
    /// True when the root is rational and the output is exact.
    pub exact: bool,
}

/// Perron root and positive eigenvector of an irreducible nonnegative
/// integer matrix, normalized so the first entry of the eigenvector is 1.
pub fn perron(e: &NonnegIntMatrix, prec: &Precision) -> Result<PerronData> {
    if !e.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let coeffs = e.charpoly();
    let (min_rs, max_rs) = e.row_sum_range();
    // Scan candidate integer roots descending; a positive eigenvector
    // certifies the Perron root, so the first hit wins.
    let mut k = max_rs.clone();
    let lo = if min_rs.is_positive() { min_rs } else { BigInt::one() };
    while k >= lo {
        if e.charpoly_at(&coeffs, &k).is_zero() {
            let kernel = e.integer_eigenkernel(&k);
            if kernel.len() == 1 {
                let v = &kernel[0];
                let first = &v[0];
                if !first.is_zero() {
                    let scaled: Vec<BigRational> = v.iter().map(|x| x / first).collect();
                    if scaled.iter().all(|x| x.is_positive()) {
                        return Ok(PerronData {
                            value: Scalar::from_bigint(k),
                            vector: scaled.into_iter().map(Scalar::from_rational).collect(),
                            exact: true,
                        });
                    }
                }
            }
        }
        k -= 1;
    }
    // Irrational Perron root: expression-backed intervals over a shared
    // eigendata table, precomputed finer than the starting precision so
    // ordinary refinements are table lookups.
    let table_bits = (prec.start_bits + 128).min(prec.cap_bits.max(prec.start_bits));
    let table = EigenData::compute(e.clone(), table_bits)
        .map_err(|_| Error::PrecisionExhausted { bits: table_bits })?;
    let m = Arc::new(table);
    let value = Scalar::sym(Arc::new(Expr::PerronRoot(m.clone())));
    let mut vector = Vec::with_capacity(e.dim());
    vector.push(Scalar::one());
    for i in 1..e.dim() {
        vector.push(Scalar::sym(Arc::new(Expr::PerronVec(m.clone(), i))));
    }
    // Certify the residual ||Ev - lambda v||_inf below the configured
    // tolerance at the starting precision.
    certify_residual(e, &value, &vector, prec)?;
    Ok(PerronData {
        value,
        vector,
        exact: false,
    })
}

/// Certified bound: every |(Ev - lambda v)_i| is below 2^-tol_bits.
///
/// Checks containment of the residual enclosure in [-tol, tol] at a fixed
/// working precision; the residual genuinely straddles zero, so a sign
/// escalation would never separate and would burn the precision cap.
pub fn certify_residual(
    e: &NonnegIntMatrix,
    value: &Scalar,
    vector: &[Scalar],
    prec: &Precision,
) -> Result<()> {
    let n = e.dim();
    let tol = BigRational::new(BigInt::one(), BigInt::one() << prec.tol_bits as usize);
    let work = prec.tol_bits + 32;
    for i in 0..n {
        let mut row = Scalar::zero();
        for j in 0..n {
            let a = e.entry(i, j);
            if a.is_zero() {
                continue;
            }
            row = row.add(&Scalar::from_bigint(a.clone()).mul(&vector[j]));
        }
        let resid = row.sub(&value.mul(&vector[i]));
        let iv = resid.approx(work)?;
        if iv.lo < -tol.clone() || iv.hi > tol {
            return Err(Error::PrecisionExhausted {
                bits: prec.tol_bits,
            });
        }
    }
    Ok(())
}
