//! Exact probabilities of the form `num / 2^exp`.
//!
//! Every event over a uniformly random subset of a finite window has a
//! dyadic probability, so these never need floating point until a value is
//! reported.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A non-negative dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicProb {
    num: BigUint,
    exp: u32,
}

impl DyadicProb {
    pub fn new(num: impl Into<BigUint>, exp: u32) -> Self {
        let mut d = DyadicProb {
            num: num.into(),
            exp,
        };
        d.normalize();
        debug_assert!(
            d.num <= BigUint::one() << d.exp,
            "dyadic probability exceeds one"
        );
        d
    }

    pub fn zero() -> Self {
        DyadicProb {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        DyadicProb {
            num: BigUint::one(),
            exp: 0,
        }
    }

    /// `count / 2^exp` where `count` counts favourable subsets among `2^exp`.
    pub fn from_count(count: u64, exp: u32) -> Self {
        Self::new(BigUint::from(count), exp)
    }

    /// `3^a / 2^b`.
    pub fn pow3_over_pow2(a: u32, b: u32) -> Self {
        Self::new(BigUint::from(3u32).pow(a), b)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exp as u64) as u32;
        if shift > 0 {
            self.num >>= shift as usize;
            self.exp -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// Base-two logarithm of the reduced denominator.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::one() << self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator over the (possibly unreduced) denominator `2^exp`.
    ///
    /// Panics if `exp` is smaller than the reduced exponent.
    pub fn numerator_at(&self, exp: u32) -> BigUint {
        assert!(
            exp >= self.exp,
            "cannot express value over a smaller power of two"
        );
        &self.num << (exp - self.exp) as usize
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.num.clone().into(), self.denominator().into())
    }

    pub fn to_f64(&self) -> f64 {
        big_ratio_f64(&self.num, self.exp)
    }
}

/// `num / 2^exp` as an f64 without overflowing intermediate conversions.
pub(crate) fn big_ratio_f64(num: &BigUint, exp: u32) -> f64 {
    let bits = num.bits();
    let (mantissa, shift) = if bits > 64 {
        (
            (num >> (bits - 64) as usize).to_u64().unwrap_or(u64::MAX),
            bits - 64,
        )
    } else {
        (num.to_u64().unwrap_or(0), 0)
    };
    let e = shift as i64 - exp as i64;
    (mantissa as f64) * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

impl Ord for DyadicProb {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.numerator_at(e).cmp(&other.numerator_at(e))
    }
}

impl PartialOrd for DyadicProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DyadicProb {
    type Output = DyadicProb;

    fn add(self, rhs: &DyadicProb) -> DyadicProb {
        let e = self.exp.max(rhs.exp);
        DyadicProb::new(self.numerator_at(e) + rhs.numerator_at(e), e)
    }
}

impl Mul for &DyadicProb {
    type Output = DyadicProb;

    fn mul(self, rhs: &DyadicProb) -> DyadicProb {
        DyadicProb::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl fmt::Display for DyadicProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}
