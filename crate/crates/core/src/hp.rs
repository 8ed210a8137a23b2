//! Fixed-point reals with 128 fractional bits, enough headroom that every
//! bound comparison is decided by the 2^-40 slack rather than by rounding.
//!
//! Logarithms of positive rationals use the `atanh` series
//! `ln y = 2·Σ z^(2j+1)/(2j+1)` with `z = (y−1)/(y+1)` after scaling `y`
//! into `[1, 2)`, evaluated with 64 guard bits.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::count::Rational;

pub const FRAC_BITS: u32 = 128;
const GUARD_BITS: u32 = 64;
const WORK_BITS: u32 = FRAC_BITS + GUARD_BITS;

/// `value = raw / 2^FRAC_BITS`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real(BigInt);

fn round_shift(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    (x + half) >> bits
}

/// `round(num · 2^bits / den)` for positive `den`.
fn scaled_div(num: &BigInt, den: &BigInt, bits: u32) -> BigInt {
    let shifted = num << bits;
    let (q, r) = shifted.div_mod_floor(den);
    if (r << 1) >= *den {
        q + 1
    } else {
        q
    }
}

/// `ln(num/den)` at `WORK_BITS` for `num/den ∈ [1, 2)`.
fn ln_unit(num: &BigInt, den: &BigInt) -> BigInt {
    // z = (y − 1)/(y + 1) ∈ [0, 1/3)
    let z = scaled_div(&(num - den), &(num + den), WORK_BITS);
    if z.is_zero() {
        return BigInt::zero();
    }
    let z2 = (&z * &z) >> WORK_BITS;
    let mut term = z;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * j + 1);
        term = (&term * &z2) >> WORK_BITS;
        j += 1;
    }
    sum << 1
}

fn ln2_work() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    // 2 = 4/3 · 3/2, both factors inside [1, 2)
    LN2.get_or_init(|| {
        ln_unit(&BigInt::from(4), &BigInt::from(3)) + ln_unit(&BigInt::from(3), &BigInt::from(2))
    })
}

impl Real {
    pub fn zero() -> Real {
        Real(BigInt::zero())
    }

    pub fn from_int(x: i64) -> Real {
        Real(BigInt::from(x) << FRAC_BITS)
    }

    pub fn from_ratio(x: &Rational) -> Real {
        let den = x.denom();
        Real(scaled_div(x.numer(), den, FRAC_BITS))
    }

    /// `2^-bits`.
    pub fn pow2_neg(bits: u32) -> Real {
        assert!(bits <= FRAC_BITS);
        Real(BigInt::one() << (FRAC_BITS - bits))
    }

    /// `log₂ x` for a positive rational. Exact for powers of two.
    pub fn log2_ratio(x: &Rational) -> Real {
        assert!(x.is_positive(), "log2 of non-positive value {x}");
        let (a, b) = (x.numer().clone(), x.denom().clone());
        let mut k = a.bits() as i64 - b.bits() as i64;
        // y = x / 2^k, pushed into [1, 2)
        let (mut num, mut den) = if k >= 0 { (a.clone(), &b << k as u64) } else { (&a << (-k) as u64, b.clone()) };
        if num < den {
            k -= 1;
            num <<= 1;
        }
        if num >= &den << 1 {
            k += 1;
            den <<= 1;
        }
        let ln_y = ln_unit(&num, &den);
        let log2_y = scaled_div(&ln_y, ln2_work(), WORK_BITS);
        Real((BigInt::from(k) << FRAC_BITS) + round_shift(&log2_y, GUARD_BITS))
    }

    pub fn log2_int(x: &BigUint) -> Real {
        Real::log2_ratio(&Rational::from_integer(BigInt::from(x.clone())))
    }

    pub fn log2_u64(x: u64) -> Real {
        Real::log2_int(&BigUint::from(x))
    }

    /// `log₂ e = 1 / ln 2`.
    pub fn log2_e() -> Real {
        static LOG2E: OnceLock<Real> = OnceLock::new();
        LOG2E
            .get_or_init(|| {
                let one = BigInt::one() << (2 * WORK_BITS);
                Real(round_shift(&(one / ln2_work()), GUARD_BITS))
            })
            .clone()
    }

    pub fn mul_ratio(&self, r: &Rational) -> Real {
        let num = &self.0 * r.numer();
        let den = r.denom();
        Real(scaled_div(&num, den, 0))
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real(&self.0 * BigInt::from(k))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * (-(FRAC_BITS as f64)).exp2()
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        Real(self.0 + rhs.0)
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real(&self.0 + &rhs.0)
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        Real(self.0 - rhs.0)
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real(&self.0 - &rhs.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real(round_shift(&(&self.0 * &rhs.0), FRAC_BITS))
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |a, b| a + b)
    }
}

/// Rounds to 12 significant decimal digits; the fixed formatting used in
/// every report.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", sig12(self.to_f64()))
    }
}
