//! Dyadic interval arithmetic with outward rounding.
//!
//! Endpoints are `BigRational`s whose denominators are powers of two after
//! rounding; all operations compute exactly on rationals and then round
//! outward to the requested bit grid, so every interval encloses the real
//! it represents.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(big(n))
}

/// 2^bits as a positive big integer.
fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Largest multiple of 2^-bits that is <= x.
pub fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    let floor = scaled.numer().div_floor(scaled.denom());
    BigRational::new(floor, pow2(bits))
}

/// Smallest multiple of 2^-bits that is >= x.
pub fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    let ceil = scaled.numer().div_ceil(scaled.denom());
    BigRational::new(ceil, pow2(bits))
}

/// Floor of sqrt(x) on the 2^-bits grid; requires x >= 0.
pub fn sqrt_down(x: &BigRational, bits: u32) -> BigRational {
    debug_assert!(!x.is_negative());
    // floor(sqrt(x) * 2^bits) = isqrt(floor(x * 4^bits)) works because
    // isqrt is monotone and exact on perfect squares.
    let scaled = x * BigRational::from_integer(pow2(2 * bits));
    let n = scaled.numer().div_floor(scaled.denom());
    let root = n.to_biguint().unwrap_or_else(BigUint::zero).sqrt();
    BigRational::new(BigInt::from(root), pow2(bits))
}

/// Ceiling of sqrt(x) on the 2^-bits grid; requires x >= 0.
pub fn sqrt_up(x: &BigRational, bits: u32) -> BigRational {
    debug_assert!(!x.is_negative());
    let scaled = x * BigRational::from_integer(pow2(2 * bits));
    let n = scaled.numer().div_ceil(scaled.denom());
    let n = n.to_biguint().unwrap_or_else(BigUint::zero);
    let mut root = n.sqrt();
    if &root * &root < n {
        root += 1u32;
    }
    BigRational::new(BigInt::from(root), pow2(bits))
}

/// A closed interval [lo, hi] enclosing one real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl DyInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        DyInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        DyInterval { lo: x.clone(), hi: x }
    }

    pub fn point_rounded(x: &BigRational, bits: u32) -> Self {
        DyInterval {
            lo: round_down(x, bits),
            hi: round_up(x, bits),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified sign of the enclosed real, if the interval separates from 0.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn round_out(&self, bits: u32) -> Self {
        DyInterval {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn neg(&self) -> Self {
        DyInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add(&self, other: &Self, bits: u32) -> Self {
        DyInterval {
            lo: round_down(&(&self.lo + &other.lo), bits),
            hi: round_up(&(&self.hi + &other.hi), bits),
        }
    }

    pub fn sub(&self, other: &Self, bits: u32) -> Self {
        DyInterval {
            lo: round_down(&(&self.lo - &other.hi), bits),
            hi: round_up(&(&self.hi - &other.lo), bits),
        }
    }

    pub fn mul(&self, other: &Self, bits: u32) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        DyInterval {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
        }
    }

    /// Division; caller must ensure `other` does not contain zero.
    pub fn div(&self, other: &Self, bits: u32) -> Self {
        debug_assert!(!other.contains_zero());
        let inv = DyInterval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        self.mul(&inv, bits)
    }

    /// Square root; caller must ensure lo >= 0.
    pub fn sqrt(&self, bits: u32) -> Self {
        DyInterval {
            lo: sqrt_down(&self.lo, bits),
            hi: sqrt_up(&self.hi, bits),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        // Both intervals enclose the same real, so they always overlap.
        debug_assert!(lo <= hi);
        DyInterval { lo, hi }
    }

    /// Render as a decimal interval string `"[lo,hi]"` with `digits`
    /// fractional digits, lo rounded down and hi rounded up.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let lo = decimal_dir(&self.lo, digits, false);
        let hi = decimal_dir(&self.hi, digits, true);
        let mut s = String::from("[");
        s.push_str(&lo);
        s.push(',');
        s.push_str(&hi);
        s.push(']');
        s
    }
}

/// Decimal rendering of a rational with directed rounding.
fn decimal_dir(x: &BigRational, digits: u32, round_up_dir: bool) -> String {
    use core::fmt::Write;
    let ten_pow = BigInt::from(10u32).pow(digits);
    let scaled = x * BigRational::from_integer(ten_pow.clone());
    let n = if round_up_dir {
        scaled.numer().div_ceil(scaled.denom())
    } else {
        scaled.numer().div_floor(scaled.denom())
    };
    let neg = n.sign() == Sign::Minus;
    let mag = n.magnitude().clone();
    let ten = BigUint::from(10u32).pow(digits);
    let (int_part, frac_part) = (mag.div_floor(&ten), mag.mod_floor(&ten));
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let _ = write!(out, "{int_part}");
    if digits > 0 {
        let frac = frac_part.to_str_radix(10);
        out.push('.');
        for _ in frac.len()..digits as usize {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

/// Sum a slice of intervals with a single rounding at the end.
pub fn sum(intervals: &[DyInterval], bits: u32) -> DyInterval {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for iv in intervals {
        lo += &iv.lo;
        hi += &iv.hi;
    }
    DyInterval {
        lo: round_down(&lo, bits),
        hi: round_up(&hi, bits),
    }
}

/// Dot product of integer coefficients with intervals.
pub fn dot(coeffs: &[BigInt], intervals: &[DyInterval], bits: u32) -> DyInterval {
    debug_assert_eq!(coeffs.len(), intervals.len());
    let mut terms = Vec::with_capacity(coeffs.len());
    for (c, iv) in coeffs.iter().zip(intervals) {
        let c = DyInterval::point(BigRational::from_integer(c.clone()));
        terms.push(c.mul(iv, bits + 8));
    }
    sum(&terms, bits)
}
