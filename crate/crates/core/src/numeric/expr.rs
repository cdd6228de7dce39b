//! Lazy expression nodes for interval-backed scalars.
//!
//! Every node can be evaluated at any dyadic precision; evaluations at
//! higher precision produce enclosures contained in coarser ones, so
//! certified comparisons refine by re-evaluating the same shared expression.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{round_down, round_up, DyInterval};
use super::matrix::{cw_bracket, eigvec_enclosure, NonnegIntMatrix};

/// Per-evaluation memo keyed by node address and precision. Shared
/// subexpressions are common (scale factors referencing the same
/// eigenvector leaves), and nodes are immutable for the duration of an
/// evaluation, so address-based keys are sound within one call.
type Memo = BTreeMap<(usize, u32), DyInterval>;

#[derive(Debug)]
pub enum EvalError {
    /// The interval was too wide to decide a domain condition; retry at
    /// higher precision.
    NeedPrecision,
    /// The expression is genuinely outside a function domain.
    Domain(&'static str),
}

/// Precomputed Perron eigendata enclosures for one irreducible matrix,
/// stored at a fixed table precision. Evaluations at or below the table
/// precision are lookups; finer requests extend the Collatz-Wielandt ladder
/// from the stored bracket.
#[derive(Debug)]
pub struct EigenData {
    pub matrix: NonnegIntMatrix,
    pub table_bits: u32,
    pub root: DyInterval,
    pub vector: Vec<DyInterval>,
}

impl EigenData {
    /// Run the bracket ladder up to `table_bits` and enclose the
    /// eigenvector by interval elimination.
    pub fn compute(matrix: NonnegIntMatrix, table_bits: u32) -> Result<EigenData, EvalError> {
        let mut root: Option<DyInterval> = None;
        let mut p = 32u32;
        loop {
            let b = cw_bracket(&matrix, p);
            root = Some(match root {
                Some(prev) => prev.intersect(&b),
                None => b,
            });
            if p >= table_bits + 32 {
                break;
            }
            p = (p * 2).min(table_bits + 32);
        }
        let root = root.unwrap();
        let n = matrix.dim();
        let mut vector = Vec::with_capacity(n);
        for idx in 0..n {
            match eigvec_enclosure(&matrix, &root, idx, table_bits) {
                Ok(vs) => vector.push(vs[idx].clone()),
                Err(_) => return Err(EvalError::NeedPrecision),
            }
        }
        Ok(EigenData {
            matrix,
            table_bits,
            root: root.round_out(table_bits),
            vector,
        })
    }

    fn root_at(&self, bits: u32) -> DyInterval {
        if bits <= self.table_bits {
            return self.root.round_out(bits);
        }
        // extend the ladder past the table, keeping enclosures nested
        let mut cur = self.root.clone();
        let mut p = self.table_bits * 2;
        loop {
            let b = cw_bracket(&self.matrix, p.min(bits) + 32);
            cur = cur.intersect(&b);
            if p >= bits {
                break;
            }
            p = (p * 2).min(bits);
        }
        cur.round_out(bits)
    }

    fn vec_at(&self, idx: usize, bits: u32) -> Result<DyInterval, EvalError> {
        if bits <= self.table_bits {
            return Ok(self.vector[idx].round_out(bits));
        }
        let lam = self.root_at(bits + 32);
        match eigvec_enclosure(&self.matrix, &lam, idx, bits) {
            Ok(vs) => Ok(vs[idx].intersect(&self.vector[idx]).round_out(bits)),
            Err(_) => Err(EvalError::NeedPrecision),
        }
    }
}

#[derive(Debug)]
pub enum Expr {
    Rat(BigRational),
    /// coef * sqrt(rad), rad > 0 and not a perfect square.
    Surd { coef: BigRational, rad: BigRational },
    Pi,
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Sqrt(Arc<Expr>),
    Exp(Arc<Expr>),
    Ln(Arc<Expr>),
    /// Perron root of an irreducible nonnegative matrix with no rational
    /// (hence no integer) Perron root.
    PerronRoot(Arc<EigenData>),
    /// Entry `idx` of the Perron eigenvector normalized to first entry 1.
    PerronVec(Arc<EigenData>, usize),
}

impl Expr {
    /// Evaluate to an enclosing interval on the 2^-bits grid.
    ///
    /// Every node is evaluated at one flat working precision; rounding
    /// error accumulates additively per node instead of compounding with
    /// depth, so long sum chains stay cheap and enclosures stay valid.
    pub fn eval(&self, bits: u32) -> Result<DyInterval, EvalError> {
        let mut memo = Memo::new();
        let work = bits + 32;
        Ok(self.eval_memo(work, &mut memo)?.round_out(bits))
    }

    fn eval_memo(&self, bits: u32, memo: &mut Memo) -> Result<DyInterval, EvalError> {
        let key = (self as *const Expr as usize, bits);
        if let Some(iv) = memo.get(&key) {
            return Ok(iv.clone());
        }
        let out = self.eval_inner(bits, memo)?;
        memo.insert(key, out.clone());
        Ok(out)
    }

    fn eval_inner(&self, bits: u32, memo: &mut Memo) -> Result<DyInterval, EvalError> {
        match self {
            Expr::Rat(q) => Ok(DyInterval::point_rounded(q, bits)),
            Expr::Surd { coef, rad } => {
                let root = DyInterval::new(
                    super::dyadic::sqrt_down(rad, bits + 8),
                    super::dyadic::sqrt_up(rad, bits + 8),
                );
                let c = DyInterval::point(coef.clone());
                Ok(c.mul(&root, bits))
            }
            Expr::Pi => Ok(pi_interval(bits)),
            Expr::Add(a, b) => Ok(a.eval_memo(bits, memo)?.add(&b.eval_memo(bits, memo)?, bits)),
            Expr::Sub(a, b) => Ok(a.eval_memo(bits, memo)?.sub(&b.eval_memo(bits, memo)?, bits)),
            Expr::Mul(a, b) => Ok(a.eval_memo(bits, memo)?.mul(&b.eval_memo(bits, memo)?, bits)),
            Expr::Div(a, b) => {
                let den = b.eval_memo(bits, memo)?;
                if den.contains_zero() {
                    return Err(EvalError::NeedPrecision);
                }
                Ok(a.eval_memo(bits, memo)?.div(&den, bits))
            }
            Expr::Sqrt(a) => {
                let iv = a.eval_memo(bits, memo)?;
                if iv.hi.is_negative() {
                    return Err(EvalError::Domain("sqrt of negative value"));
                }
                if iv.lo.is_negative() {
                    return Err(EvalError::NeedPrecision);
                }
                Ok(iv.sqrt(bits))
            }
            Expr::Exp(a) => {
                let iv = a.eval_memo(bits, memo)?;
                Ok(exp_interval(&iv, bits))
            }
            Expr::Ln(a) => {
                let iv = a.eval_memo(bits, memo)?;
                if iv.hi.is_negative() || iv.hi.is_zero() {
                    return Err(EvalError::Domain("log of nonpositive value"));
                }
                if !iv.lo.is_positive() {
                    return Err(EvalError::NeedPrecision);
                }
                Ok(ln_interval(&iv, bits))
            }
            Expr::PerronRoot(t) => Ok(t.root_at(bits)),
            Expr::PerronVec(t, idx) => t.vec_at(*idx, bits),
        }
    }

    /// Structural equality: the witness that two interval scalars denote the
    /// same real because they are the same exact expression.
    pub fn structural_eq(a: &Arc<Expr>, b: &Arc<Expr>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        match (a.as_ref(), b.as_ref()) {
            (Expr::Rat(x), Expr::Rat(y)) => x == y,
            (Expr::Surd { coef: c1, rad: r1 }, Expr::Surd { coef: c2, rad: r2 }) => {
                c1 == c2 && r1 == r2
            }
            (Expr::Pi, Expr::Pi) => true,
            (Expr::Add(x1, y1), Expr::Add(x2, y2))
            | (Expr::Sub(x1, y1), Expr::Sub(x2, y2))
            | (Expr::Mul(x1, y1), Expr::Mul(x2, y2))
            | (Expr::Div(x1, y1), Expr::Div(x2, y2)) => {
                Expr::structural_eq(x1, x2) && Expr::structural_eq(y1, y2)
            }
            (Expr::Sqrt(x), Expr::Sqrt(y))
            | (Expr::Exp(x), Expr::Exp(y))
            | (Expr::Ln(x), Expr::Ln(y)) => Expr::structural_eq(x, y),
            (Expr::PerronRoot(t1), Expr::PerronRoot(t2)) => t1.matrix == t2.matrix,
            (Expr::PerronVec(t1, i1), Expr::PerronVec(t2, i2)) => {
                i1 == i2 && t1.matrix == t2.matrix
            }
            _ => false,
        }
    }
}

/// Enclosure of pi via Machin's formula 16 atan(1/5) - 4 atan(1/239).
pub fn pi_interval(bits: u32) -> DyInterval {
    let g = bits + 16;
    let a5 = atan_inv_int(5, g);
    let a239 = atan_inv_int(239, g);
    let sixteen = DyInterval::point(BigRational::from_integer(BigInt::from(16)));
    let four = DyInterval::point(BigRational::from_integer(BigInt::from(4)));
    sixteen.mul(&a5, g).sub(&four.mul(&a239, g), bits)
}

/// atan(1/n) for integer n >= 2 by the alternating Taylor series with
/// exact rational partial sums; the remainder is bounded by the first
/// omitted term.
fn atan_inv_int(n: i64, bits: u32) -> DyInterval {
    let x = BigRational::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let mut term = x.clone(); // x^(2k+1)/(2k+1), starting k = 0
    let mut power = x; // x^(2k+1)
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4) as usize);
    loop {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power *= &x2;
        k += 1;
        term = &power / BigRational::from_integer(BigInt::from(2 * k as i64 + 1));
        if term < eps {
            break;
        }
    }
    // alternating series: true value lies between sum and sum -/+ term
    let lo = &sum - &term;
    let hi = &sum + &term;
    DyInterval::new(round_down(&lo, bits), round_up(&hi, bits))
}

/// ln 2 = 2 atanh(1/3).
fn ln2_interval(bits: u32) -> DyInterval {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let at = atanh_small(&DyInterval::point(third), bits + 4);
    let two = DyInterval::point(BigRational::from_integer(BigInt::from(2)));
    two.mul(&at, bits)
}

/// atanh on an interval with |u| <= 1/2, via the odd series
/// atanh(u) = sum u^(2k+1)/(2k+1) with geometric remainder bound.
fn atanh_small(u: &DyInterval, bits: u32) -> DyInterval {
    let g = bits + 16;
    let u2 = u.mul(u, g);
    debug_assert!(u2.hi < BigRational::new(BigInt::from(1), BigInt::from(2)));
    let mut power = u.clone();
    let mut terms: Vec<DyInterval> = Vec::new();
    let mut k = 0u32;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 6) as usize);
    loop {
        let denom = DyInterval::point(BigRational::from_integer(BigInt::from(2 * k as i64 + 1)));
        terms.push(power.div(&denom, g));
        // magnitude of the next power
        power = power.mul(&u2, g);
        k += 1;
        let mag = power.lo.abs().max(power.hi.abs());
        if mag < eps || k > 4 * bits {
            break;
        }
    }
    // remainder: |sum_{j>=k} u^(2j+1)/(2j+1)| <= |u|^(2k+1) / (1 - u^2)
    let mag = power.lo.abs().max(power.hi.abs());
    let one_minus = BigRational::one() - u2.hi.clone();
    let rem = &mag / &one_minus;
    let mut acc = super::dyadic::sum(&terms, g);
    let r = DyInterval::new(round_down(&-rem.clone(), g), round_up(&rem, g));
    acc = acc.add(&r, bits);
    acc
}

/// Natural log of a positive interval: reduce by powers of two so the
/// mantissa is near 1, then use atanh.
pub fn ln_interval(x: &DyInterval, bits: u32) -> DyInterval {
    let g = bits + 16;
    debug_assert!(x.lo.is_positive());
    // find k with x * 2^-k in [2/3, 4/3] based on the midpoint
    let mid = (&x.lo + &x.hi) / BigRational::from_integer(BigInt::from(2));
    let mut k: i64 = 0;
    let mut m = mid;
    let two = BigRational::from_integer(BigInt::from(2));
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    while m > four_thirds {
        m /= &two;
        k += 1;
    }
    while m < two_thirds {
        m *= &two;
        k -= 1;
    }
    let scale = if k >= 0 {
        BigRational::new(BigInt::one(), BigInt::one() << k as usize)
    } else {
        BigRational::from_integer(BigInt::one() << (-k) as usize)
    };
    let reduced = DyInterval::new(&x.lo * &scale, &x.hi * &scale);
    // u = (m - 1)/(m + 1), |u| <= 1/2 whenever m in [1/3, 3]
    let one = DyInterval::point(BigRational::one());
    let num = reduced.sub(&one, g);
    let den = reduced.add(&one, g);
    let u = num.div(&den, g);
    let at = atanh_small(&u, g);
    let two_iv = DyInterval::point(two.clone());
    let ln_m = two_iv.mul(&at, g);
    let ln2 = ln2_interval(g);
    let k_iv = DyInterval::point(BigRational::from_integer(BigInt::from(k)));
    ln_m.add(&k_iv.mul(&ln2, g), bits)
}

/// exp of an interval via scaled Taylor series with interval terms.
pub fn exp_interval(x: &DyInterval, bits: u32) -> DyInterval {
    DyInterval::new(
        exp_point(&x.lo, bits, false),
        exp_point(&x.hi, bits, true),
    )
}

/// Directed bound on exp(x) for a rational x: lower bound if !up, upper if up.
fn exp_point(x: &BigRational, bits: u32, up: bool) -> BigRational {
    // scale x down so |y| <= 1/2, compute exp(y), square m times
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut m = 0u32;
    let mut y = x.clone();
    while y.abs() > half {
        y /= BigRational::from_integer(BigInt::from(2));
        m += 1;
        if m > 64 {
            break; // arguments this large never arise from the formulas
        }
    }
    let g = bits + 16 + 2 * m;
    // interval Taylor on the point y
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (g + 4) as usize);
    loop {
        sum += &term;
        k += 1;
        term = term * &y / BigRational::from_integer(BigInt::from(k));
        if term.abs() < eps {
            break;
        }
    }
    // remainder for |y| <= 1/2: |R| <= 2 |term|
    let rem = term.abs() * BigRational::from_integer(BigInt::from(2));
    let mut iv = DyInterval::new(round_down(&(&sum - &rem), g), round_up(&(&sum + &rem), g));
    for _ in 0..m {
        iv = iv.mul(&iv.clone(), g);
    }
    // exp is positive; the series enclosure may still dip below zero
    if !iv.lo.is_positive() {
        iv.lo = BigRational::zero();
    }
    if up {
        round_up(&iv.hi, bits)
    } else {
        round_down(&iv.lo, bits)
    }
}

