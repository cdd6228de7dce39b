//! Certified scalars: exact rationals, exact quadratic surds coef*sqrt(rad),
//! and lazy interval expressions refined on demand.
//!
//! Arithmetic between exact scalars stays exact whenever the result is
//! representable (rationals are closed under +,-,*,/; surds are closed under
//! *,/ and under +,- with a matching radicand). Anything else demotes to a
//! shared interval expression, and equality of two interval scalars is only
//! certified when they are structurally the same expression.

use alloc::string::String;
use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::DyInterval;
use super::expr::{EvalError, Expr};
use crate::error::{Error, Result};

/// Precision policy for certified decisions: evaluation starts at
/// `start_bits` and doubles up to `cap_bits`; `tol_bits` is the residual
/// certification tolerance used by the eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
    pub tol_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 128,
            cap_bits: 2048,
            tol_bits: 64,
        }
    }
}

impl Precision {
    pub fn with_cap(cap_bits: u32) -> Self {
        Precision {
            cap_bits,
            ..Precision::default()
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Rational(BigRational),
    /// coef * sqrt(rad) with coef != 0, rad > 0, rad != 1, square factors
    /// of rad reduced into coef.
    Surd { coef: BigRational, rad: BigRational },
    Sym(Arc<Expr>),
}

/// A certified real number.
#[derive(Clone)]
pub struct Scalar(Repr);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::Surd { coef, rad } => write!(f, "{coef}*sqrt({rad})"),
            Repr::Sym(_) => {
                let iv = self.approx(64).map_err(|_| fmt::Error)?;
                write!(f, "~{}", iv.to_decimal_string(12))
            }
        }
    }
}

/// Remove square factors: n = s^2 * r with r square-reduced.
/// Trial division by small primes plus a perfect-square check on the rest.
fn extract_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut r = BigUint::one();
    let mut m = n.clone();
    if m.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut p = 2u64;
    while p <= 1009 {
        let pb = BigUint::from(p);
        let p2 = &pb * &pb;
        loop {
            let (q, rem) = m.div_rem(&p2);
            if rem.is_zero() {
                s *= &pb;
                m = q;
            } else {
                break;
            }
        }
        let (q, rem) = m.div_rem(&pb);
        if rem.is_zero() {
            r *= &pb;
            m = q;
        }
        p = next_small_prime(p);
        if m.is_one() {
            break;
        }
    }
    if !m.is_one() {
        let root = m.sqrt();
        if &root * &root == m {
            s *= root;
        } else {
            r *= m;
        }
    }
    (s, r)
}

fn next_small_prime(p: u64) -> u64 {
    let mut q = p + 1;
    loop {
        let mut isp = q >= 2;
        let mut d = 2;
        while d * d <= q {
            if q % d == 0 {
                isp = false;
                break;
            }
            d += 1;
        }
        if isp {
            return q;
        }
        q += 1;
    }
}

/// sqrt of a nonnegative rational as (coef, rad): sqrt(q) = coef * sqrt(rad),
/// rad square-reduced; rad == 1 means the root is rational.
fn sqrt_rational(q: &BigRational) -> (BigRational, BigRational) {
    debug_assert!(!q.is_negative());
    if q.is_zero() {
        return (BigRational::zero(), BigRational::one());
    }
    // sqrt(n/d) = sqrt(n*d)/d
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let nd = n * d;
    let (s, r) = extract_square(&nd);
    let coef = BigRational::new(BigInt::from(s), q.denom().clone());
    (coef, BigRational::from_integer(BigInt::from(r)))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Rational(BigRational::zero()))
    }

    pub fn one() -> Self {
        Scalar(Repr::Rational(BigRational::one()))
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar(Repr::Rational(BigRational::from_integer(BigInt::from(n))))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar(Repr::Rational(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar(Repr::Rational(q))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(Repr::Rational(BigRational::from_integer(n)))
    }

    pub fn pi() -> Self {
        Scalar(Repr::Sym(Arc::new(Expr::Pi)))
    }

    /// Euler's number as exp(1).
    pub fn e() -> Self {
        Scalar(Repr::Sym(Arc::new(Expr::Exp(Arc::new(Expr::Rat(BigRational::one()))))))
    }

    pub(crate) fn sym(e: Arc<Expr>) -> Self {
        Scalar(Repr::Sym(e))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.0, Repr::Sym(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// (coef, rad) view: rationals are coef*sqrt(1).
    pub fn as_surd(&self) -> Option<(BigRational, BigRational)> {
        match &self.0 {
            Repr::Rational(q) => Some((q.clone(), BigRational::one())),
            Repr::Surd { coef, rad } => Some((coef.clone(), rad.clone())),
            Repr::Sym(_) => None,
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        matches!(&self.0, Repr::Rational(q) if q.is_zero())
    }

    fn expr(&self) -> Arc<Expr> {
        match &self.0 {
            Repr::Rational(q) => Arc::new(Expr::Rat(q.clone())),
            Repr::Surd { coef, rad } => Arc::new(Expr::Surd {
                coef: coef.clone(),
                rad: rad.clone(),
            }),
            Repr::Sym(e) => e.clone(),
        }
    }

    fn make_surd(coef: BigRational, rad: BigRational) -> Self {
        if coef.is_zero() || rad.is_one() {
            return Scalar(Repr::Rational(coef));
        }
        Scalar(Repr::Surd { coef, rad })
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Surd { coef: c1, rad: r1 }, Repr::Surd { coef: c2, rad: r2 }) if r1 == r2 => {
                Scalar::make_surd(c1 + c2, r1.clone())
            }
            (Repr::Rational(a), _) if a.is_zero() => other.clone(),
            (_, Repr::Rational(b)) if b.is_zero() => self.clone(),
            _ => Scalar(Repr::Sym(Arc::new(Expr::Add(self.expr(), other.expr())))),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a - b)),
            (Repr::Surd { coef: c1, rad: r1 }, Repr::Surd { coef: c2, rad: r2 }) if r1 == r2 => {
                Scalar::make_surd(c1 - c2, r1.clone())
            }
            (_, Repr::Rational(b)) if b.is_zero() => self.clone(),
            (Repr::Rational(a), _) if a.is_zero() => other.neg(),
            _ => Scalar(Repr::Sym(Arc::new(Expr::Sub(self.expr(), other.expr())))),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Rational(q) => Scalar(Repr::Rational(-q)),
            Repr::Surd { coef, rad } => Scalar(Repr::Surd {
                coef: -coef,
                rad: rad.clone(),
            }),
            Repr::Sym(e) => Scalar(Repr::Sym(Arc::new(Expr::Sub(
                Arc::new(Expr::Rat(BigRational::zero())),
                e.clone(),
            )))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Rational(a), Repr::Surd { coef, rad })
            | (Repr::Surd { coef, rad }, Repr::Rational(a)) => {
                Scalar::make_surd(a * coef, rad.clone())
            }
            (Repr::Surd { coef: c1, rad: r1 }, Repr::Surd { coef: c2, rad: r2 }) => {
                // sqrt(r1)*sqrt(r2) = sqrt(r1*r2); re-reduce squares
                let prod = r1 * r2;
                let (s, r) = sqrt_rational(&prod);
                // sqrt(prod) = s * sqrt(r)
                Scalar::make_surd(c1 * c2 * s, r)
            }
            (Repr::Rational(a), _) if a.is_zero() => Scalar::zero(),
            (_, Repr::Rational(b)) if b.is_zero() => Scalar::zero(),
            _ => Scalar(Repr::Sym(Arc::new(Expr::Mul(self.expr(), other.expr())))),
        }
    }

    /// Division; exact kinds with an exactly-zero divisor panic (internal
    /// invariant: callers certify nonzero first).
    pub fn div(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => {
                assert!(!b.is_zero(), "division by exact zero");
                Scalar(Repr::Rational(a / b))
            }
            (Repr::Surd { coef, rad }, Repr::Rational(b)) => {
                assert!(!b.is_zero(), "division by exact zero");
                Scalar::make_surd(coef / b, rad.clone())
            }
            (Repr::Rational(a), Repr::Surd { coef, rad }) => {
                // a / (c sqrt(r)) = a/(c r) * sqrt(r)
                Scalar::make_surd(a / (coef * rad), rad.clone())
            }
            (Repr::Surd { coef: c1, rad: r1 }, Repr::Surd { coef: c2, rad: r2 }) => {
                // sqrt(r1)/sqrt(r2) = sqrt(r1*r2)/r2
                let prod = r1 * r2;
                let (s, r) = sqrt_rational(&prod);
                Scalar::make_surd(c1 / c2 * s / r2, r)
            }
            _ => Scalar(Repr::Sym(Arc::new(Expr::Div(self.expr(), other.expr())))),
        }
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow_int(&self, e: i32) -> Self {
        if e == 0 {
            return Scalar::one();
        }
        let mut acc = Scalar::one();
        let base = if e > 0 { self.clone() } else { Scalar::one().div(self) };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self> {
        match &self.0 {
            Repr::Rational(q) => {
                if q.is_negative() {
                    return Err(Error::DomainError("sqrt of negative rational".into()));
                }
                let (coef, rad) = sqrt_rational(q);
                Ok(Scalar::make_surd(coef, rad))
            }
            _ => Ok(Scalar(Repr::Sym(Arc::new(Expr::Sqrt(self.expr()))))),
        }
    }

    pub fn exp(&self) -> Self {
        if self.is_zero_exact() {
            return Scalar::one();
        }
        Scalar(Repr::Sym(Arc::new(Expr::Exp(self.expr()))))
    }

    pub fn ln(&self) -> Result<Self> {
        if let Repr::Rational(q) = &self.0 {
            if q.is_one() {
                return Ok(Scalar::zero());
            }
            if !q.is_positive() {
                return Err(Error::DomainError("log of nonpositive rational".into()));
            }
        }
        Ok(Scalar(Repr::Sym(Arc::new(Expr::Ln(self.expr())))))
    }

    /// Interval enclosure at the given precision.
    pub fn approx(&self, bits: u32) -> Result<DyInterval> {
        match &self.0 {
            Repr::Rational(q) => Ok(DyInterval::point(q.clone())),
            Repr::Surd { coef, rad } => {
                let g = bits + 8;
                let root = DyInterval::new(
                    super::dyadic::sqrt_down(rad, g),
                    super::dyadic::sqrt_up(rad, g),
                );
                Ok(DyInterval::point(coef.clone()).mul(&root, bits))
            }
            Repr::Sym(e) => match e.eval(bits) {
                Ok(iv) => Ok(iv),
                Err(EvalError::NeedPrecision) => Err(Error::PrecisionExhausted { bits }),
                Err(EvalError::Domain(msg)) => Err(Error::DomainError(msg.into())),
            },
        }
    }

    /// Exact sign for exact kinds.
    fn exact_sign(&self) -> Option<Ordering> {
        match &self.0 {
            Repr::Rational(q) => Some(if q.is_zero() {
                Ordering::Equal
            } else if q.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            Repr::Surd { coef, .. } => Some(if coef.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            Repr::Sym(_) => None,
        }
    }

    /// Compare two exact scalars without any interval evaluation.
    fn exact_cmp(&self, other: &Self) -> Option<Ordering> {
        let (c1, r1) = self.as_surd()?;
        let (c2, r2) = other.as_surd()?;
        let s1 = if c1.is_zero() {
            Ordering::Equal
        } else if c1.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        let s2 = if c2.is_zero() {
            Ordering::Equal
        } else if c2.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        if s1 != s2 {
            return Some(s1.cmp(&s2));
        }
        if s1 == Ordering::Equal {
            return Some(Ordering::Equal);
        }
        // same nonzero sign: compare squares c^2 * r, flipping if negative
        let q1 = &c1 * &c1 * &r1;
        let q2 = &c2 * &c2 * &r2;
        let cmp = q1.cmp(&q2);
        Some(if s1 == Ordering::Greater { cmp } else { cmp.reverse() })
    }

    /// Certified sign with refinement; `Equal` only via exact kinds.
    pub fn sign(&self, prec: &Precision) -> Result<Ordering> {
        if let Some(s) = self.exact_sign() {
            return Ok(s);
        }
        let mut bits = prec.start_bits;
        loop {
            match self.approx(bits) {
                Ok(iv) => {
                    if let Some(s) = iv.sign() {
                        return Ok(s);
                    }
                }
                Err(Error::PrecisionExhausted { .. }) => {}
                Err(e) => return Err(e),
            }
            if bits >= prec.cap_bits {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = (bits * 2).min(prec.cap_bits);
        }
    }

    /// The true ordering of the represented reals. For intervals, refines
    /// precision until separation; equality of two interval scalars is
    /// reported only when both are the same shared exact expression.
    pub fn cmp_certified(&self, other: &Self, prec: &Precision) -> Result<Ordering> {
        if let Some(ord) = self.exact_cmp(other) {
            return Ok(ord);
        }
        if let (Repr::Sym(a), Repr::Sym(b)) = (&self.0, &other.0) {
            if Expr::structural_eq(a, b) {
                return Ok(Ordering::Equal);
            }
        }
        self.sub(other).sign(prec)
    }

    pub fn min_certified(&self, other: &Self, prec: &Precision) -> Result<Self> {
        Ok(match self.cmp_certified(other, prec)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn max_certified(&self, other: &Self, prec: &Precision) -> Result<Self> {
        Ok(match self.cmp_certified(other, prec)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn abs_exact(&self) -> Option<Self> {
        match self.exact_sign()? {
            Ordering::Less => Some(self.neg()),
            _ => Some(self.clone()),
        }
    }

    /// Serialized form: exact rationals as `p/q` (or bare integers), all
    /// other scalars as decimal interval strings.
    pub fn to_display_string(&self, prec: &Precision) -> String {
        match &self.0 {
            Repr::Rational(q) => rational_string(q),
            _ => {
                let bits = prec.start_bits;
                match self.approx(bits) {
                    Ok(iv) => {
                        let digits = decimal_digits_for(&iv);
                        iv.to_decimal_string(digits)
                    }
                    Err(_) => String::from("[unrepresentable]"),
                }
            }
        }
    }
}

fn decimal_digits_for(iv: &DyInterval) -> u32 {
    // enough digits to expose the interval width, clamped to a sane range
    let w = iv.width();
    if w.is_zero() {
        return 17;
    }
    let mut digits = 1u32;
    let mut scale = BigRational::one();
    let ten = BigRational::from_integer(BigInt::from(10));
    while digits < 40 {
        scale *= &ten;
        if &w * &scale > BigRational::one() {
            break;
        }
        digits += 1;
    }
    (digits + 2).clamp(7, 40)
}

pub fn rational_string(q: &BigRational) -> String {
    use alloc::format;
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p`, `p/q`, decimal `a.b`, or `sqrt(<rational>)` into a scalar.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let base = parse_scalar(inner)?;
        return base.sqrt();
    }
    let q = parse_rational(s)?;
    Ok(Scalar::from_rational(q))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(alloc::format!("invalid rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.trim().parse().map_err(|_| err())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let f: BigInt = frac_part.parse().map_err(|_| err())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, den);
        let base = BigRational::from_integer(i.clone());
        return Ok(if neg || i.is_negative() {
            base - frac
        } else {
            base + frac
        });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(n))
}

/// Free-function form of the certified comparison.
pub fn certified_compare(a: &Scalar, b: &Scalar, prec: &Precision) -> Result<Ordering> {
    a.cmp_certified(b, prec)
}

/// Exact linear combination sum(coeffs[i] * scalars[i]).
pub fn linear_combination(coeffs: &[BigInt], scalars: &[Scalar]) -> Scalar {
    debug_assert_eq!(coeffs.len(), scalars.len());
    let mut acc = Scalar::zero();
    for (c, s) in coeffs.iter().zip(scalars) {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&Scalar::from_rational(BigRational::from_integer(c.clone())).mul(s));
    }
    acc
}

/// Sum of a slice of scalars.
pub fn scalar_sum<'a>(items: impl Iterator<Item = &'a Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for s in items {
        acc = acc.add(s);
    }
    acc
}

/// Largest integer <= q, as i64 (desk-scale values only).
pub fn floor_i64(q: &BigRational) -> i64 {
    q.floor().to_integer().to_i64().expect("floor fits i64 at desk scale")
}
