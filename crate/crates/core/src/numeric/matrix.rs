//! Square nonnegative integer matrices and the numeric internals of the
//! Perron-Frobenius solver: reachability closure, characteristic polynomial,
//! exact rational kernel solves, Collatz-Wielandt bracketing and interval
//! Gaussian elimination for eigenvector enclosures.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{round_down, round_up, DyInterval};
use crate::error::{Error, Result};

/// Square matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonnegIntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl NonnegIntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Parse(alloc::format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.is_negative()) {
            return Err(Error::DomainError("matrix entry is negative".into()));
        }
        Ok(NonnegIntMatrix { n, entries })
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Parse("ragged matrix rows".into()));
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        NonnegIntMatrix::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    /// Product of two square matrices of the same dimension.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entry(k, j);
                }
            }
        }
        NonnegIntMatrix { n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entry(i, j).clone();
            }
        }
        NonnegIntMatrix { n, entries }
    }

    /// diag(d) * self, with d given as positive integers.
    pub fn scale_rows(&self, d: &[BigInt]) -> Self {
        debug_assert_eq!(d.len(), self.n);
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] *= &d[i];
            }
        }
        NonnegIntMatrix { n, entries }
    }

    /// Strong connectivity of the digraph with an edge i -> j whenever
    /// entry(i,j) > 0. Every vertex must lie on a cycle through vertex 0.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n;
        if n == 0 {
            return false;
        }
        let reach = |forward: bool| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let edge = if forward {
                        !self.entry(i, j).is_zero()
                    } else {
                        !self.entry(j, i).is_zero()
                    };
                    if edge && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen
        };
        let fwd = reach(true);
        let bwd = reach(false);
        // A 1x1 zero matrix has no cycle through its vertex.
        if n == 1 {
            return !self.entry(0, 0).is_zero() || {
                // Convention: [k] with k > 0 is irreducible, [0] is not,
                // but [0] never arises from transitive diagrams. Still,
                // treat a 1x1 positive matrix as irreducible.
                false
            };
        }
        fwd.iter().all(|&b| b) && bwd.iter().all(|&b| b)
    }

    /// Max and min row sums; the Perron root of an irreducible matrix lies
    /// between them.
    pub fn row_sum_range(&self) -> (BigInt, BigInt) {
        let mut min: Option<BigInt> = None;
        let mut max: Option<BigInt> = None;
        for row in self.rows() {
            let s: BigInt = row.iter().sum();
            match &min {
                Some(m) if *m <= s => {}
                _ => min = Some(s.clone()),
            }
            match &max {
                Some(m) if *m >= s => {}
                _ => max = Some(s),
            }
        }
        (min.unwrap_or_else(BigInt::zero), max.unwrap_or_else(BigInt::zero))
    }

    /// Characteristic polynomial coefficients of self, monic, via
    /// Faddeev-LeVerrier: returns c such that
    /// p(x) = x^n + c[n-1] x^(n-1) + ... + c[0].
    pub fn charpoly(&self) -> Vec<BigInt> {
        let n = self.n;
        let a: Vec<BigRational> = self
            .entries
            .iter()
            .map(|e| BigRational::from_integer(e.clone()))
            .collect();
        let mut m = vec![BigRational::zero(); n * n]; // M_0 = 0
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        for k in 1..=n {
            // M_k = A * M_{k-1} + c_{n-k+1} * I
            let mut next = vec![BigRational::zero(); n * n];
            for i in 0..n {
                for l in 0..n {
                    if a[i * n + l].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let t = &a[i * n + l] * &m[l * n + j];
                        next[i * n + j] += t;
                    }
                }
            }
            for i in 0..n {
                next[i * n + i] += &c[n - k + 1];
            }
            // c_{n-k} = -(1/k) tr(A * next)
            let mut tr = BigRational::zero();
            for i in 0..n {
                for l in 0..n {
                    tr += &a[i * n + l] * &next[l * n + i];
                }
            }
            c[n - k] = -tr / BigRational::from_integer(BigInt::from(k as u64));
            m = next;
        }
        c.truncate(n);
        c.into_iter()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect()
    }

    /// Evaluate the monic characteristic polynomial at an integer.
    pub fn charpoly_at(&self, coeffs: &[BigInt], x: &BigInt) -> BigInt {
        // Horner: p(x) = (((1)x + c_{n-1})x + ...)x + c_0
        let mut val = BigInt::one();
        for c in coeffs.iter().rev() {
            val = val * x + c;
        }
        val
    }

    /// Exact kernel of (self - lambda I) over the rationals for an integer
    /// lambda. Returns a basis of the kernel.
    pub fn integer_eigenkernel(&self, lambda: &BigInt) -> Vec<Vec<BigRational>> {
        let n = self.n;
        let mut m = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut v = BigRational::from_integer(self.entry(i, j).clone());
                if i == j {
                    v -= BigRational::from_integer(lambda.clone());
                }
                m[i * n + j] = v;
            }
        }
        rational_kernel(&mut m, n)
    }
}

/// Kernel basis of an n x n rational matrix (row-major), mutating scratch.
fn rational_kernel(m: &mut [BigRational], n: usize) -> Vec<Vec<BigRational>> {
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        // find pivot
        let mut piv = None;
        for r in row..n {
            if !m[r * n + col].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        for j in 0..n {
            m.swap(piv * n + j, row * n + j);
        }
        let inv = m[row * n + col].recip();
        for j in 0..n {
            let t = &m[row * n + j] * &inv;
            m[row * n + j] = t;
        }
        for r in 0..n {
            if r != row && !m[r * n + col].is_zero() {
                let factor = m[r * n + col].clone();
                for j in 0..n {
                    let t = &m[row * n + j] * &factor;
                    m[r * n + j] -= t;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![BigRational::zero(); n];
        v[fc] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r * n + fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Collatz-Wielandt bracket for the Perron root of an irreducible
/// nonnegative matrix, certified: for any positive v,
/// min_i (Ev)_i/v_i <= lambda <= max_i (Ev)_i/v_i.
///
/// The test vector is v = (E+I)^(2^k) * ones, computed by exact integer
/// matrix squaring (E+I is primitive, its powers are strictly positive),
/// with k doubled until the bracket width drops below 2^-bits. Everything
/// stays in integer arithmetic until the final directed rounding.
pub fn cw_bracket(e: &NonnegIntMatrix, bits: u32) -> DyInterval {
    let n = e.dim();
    let one = BigRational::one();
    let work_bits = bits + 32;
    // shifted matrix E + I
    let mut shifted_entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = e.entry(i, j).clone();
            if i == j {
                v += 1;
            }
            shifted_entries.push(v);
        }
    }
    let shifted = NonnegIntMatrix {
        n,
        entries: shifted_entries,
    };
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let bracket_for = |power: &NonnegIntMatrix| -> DyInterval {
        // v = power * ones (row sums), w = (E+I) v; q_i = w_i / v_i
        let v: Vec<BigInt> = power.rows().map(|r| r.iter().sum()).collect();
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for i in 0..n {
            let mut wi = v[i].clone();
            for j in 0..n {
                let a = e.entry(i, j);
                if !a.is_zero() {
                    wi += a * &v[j];
                }
            }
            let q = BigRational::new(wi, v[i].clone());
            if lo.as_ref().map_or(true, |l| q < *l) {
                lo = Some(q.clone());
            }
            if hi.as_ref().map_or(true, |h| q > *h) {
                hi = Some(q);
            }
        }
        // shift back: lambda(E) = lambda(E+I) - 1
        DyInterval::new(
            round_down(&(lo.unwrap() - &one), work_bits),
            round_up(&(hi.unwrap() - &one), work_bits),
        )
    };
    let mut power = shifted.clone();
    let mut bracket = bracket_for(&power);
    // each squaring doubles the contraction exponent; 24 doublings is far
    // beyond anything a desk-scale matrix needs
    for _ in 0..24 {
        if bracket.width() <= target {
            break;
        }
        power = power.mul(&power);
        bracket = bracket.intersect(&bracket_for(&power));
    }
    bracket
}

/// Interval enclosure of the Perron eigenvector entry `idx`, normalized so
/// entry 0 equals 1 exactly.
///
/// Solves (E - lambda I) x = 0 with x_0 = 1 by interval Gaussian elimination,
/// dropping one equation (the system has rank n-1 when lambda is simple).
/// Tries each dropped row in order until all pivots certify nonzero.
pub fn eigvec_enclosure(e: &NonnegIntMatrix, lambda: &DyInterval, idx: usize, bits: u32) -> Result<Vec<DyInterval>> {
    let n = e.dim();
    debug_assert!(idx < n);
    if n == 1 {
        return Ok(vec![DyInterval::point(BigRational::one())]);
    }
    let work = bits + 16;
    'drop_row: for dropped in 0..n {
        // unknowns x_1..x_{n-1}; equations: rows != dropped of (E - lambda I) x = 0
        // moved constant: column 0 times x_0 = 1.
        let rows: Vec<usize> = (0..n).filter(|&r| r != dropped).collect();
        let m = n - 1;
        let mut a: Vec<DyInterval> = Vec::with_capacity(m * m);
        let mut b: Vec<DyInterval> = Vec::with_capacity(m);
        for &r in &rows {
            for c in 1..n {
                let mut iv = DyInterval::point(BigRational::from_integer(e.entry(r, c).clone()));
                if r == c {
                    iv = iv.sub(lambda, work);
                }
                a.push(iv);
            }
            let mut rhs = DyInterval::point(-BigRational::from_integer(e.entry(r, 0).clone()));
            if r == 0 {
                rhs = rhs.add(lambda, work);
            }
            b.push(rhs);
        }
        // Gaussian elimination with deterministic pivoting by max |midpoint|.
        let mut perm: Vec<usize> = (0..m).collect();
        for col in 0..m {
            let mut best: Option<(usize, BigRational)> = None;
            for (pi, &r) in perm.iter().enumerate().skip(col) {
                let iv = &a[r * m + col];
                let mag_lo = iv.lo.abs();
                let mag_hi = iv.hi.abs();
                let mag = if mag_lo > mag_hi { mag_lo } else { mag_hi };
                if iv.contains_zero() {
                    continue;
                }
                if best.as_ref().map_or(true, |(_, bm)| mag > *bm) {
                    best = Some((pi, mag));
                }
            }
            let Some((pi, _)) = best else {
                continue 'drop_row;
            };
            perm.swap(col, pi);
            let pr = perm[col];
            for &r in perm.iter().skip(col + 1) {
                if a[r * m + col].lo.is_zero() && a[r * m + col].hi.is_zero() {
                    continue;
                }
                let factor = a[r * m + col].div(&a[pr * m + col], work);
                for c in (col + 1)..m {
                    let t = factor.mul(&a[pr * m + c], work);
                    a[r * m + c] = a[r * m + c].sub(&t, work);
                }
                let t = factor.mul(&b[pr], work);
                b[r] = b[r].sub(&t, work);
                a[r * m + col] = DyInterval::point(BigRational::zero());
            }
        }
        // back substitution
        let mut x = vec![DyInterval::point(BigRational::zero()); m];
        for col in (0..m).rev() {
            let pr = perm[col];
            let mut acc = b[pr].clone();
            for c in (col + 1)..m {
                let t = a[pr * m + c].mul(&x[c], work);
                acc = acc.sub(&t, work);
            }
            x[col] = acc.div(&a[pr * m + col], work);
        }
        let mut out = Vec::with_capacity(n);
        out.push(DyInterval::point(BigRational::one()));
        out.extend(x);
        return Ok(out.into_iter().map(|iv| iv.round_out(bits)).collect());
    }
    Err(Error::PrecisionExhausted { bits })
}
