//! Fixed-point arithmetic with 192 fractional bits.
//!
//! Transition-frequency ratios feed an exact integer lattice, so they must be
//! computed well beyond double precision. All angles that occur in ring and
//! chain spectra are rational multiples of pi, which lets us do the range
//! reduction exactly on integers and only evaluate a Taylor series on
//! `[0, pi/2]`. The series runs with 32 guard bits and is rounded once at the
//! end, keeping results within a few ulp of the true value at 2^-192.
//!
//! `Fx` is a thin wrapper over `BigInt`: the represented value is
//! `mantissa / 2^192`. Addition and subtraction are exact; multiplication,
//! division and the series round to nearest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Fractional bits of the public representation.
pub const FRAC_BITS: u32 = 192;
/// Guard bits used inside the trigonometric series.
const GUARD_BITS: u32 = 32;
const WORK_BITS: u32 = FRAC_BITS + GUARD_BITS;

/// 160 decimal digits; enough for the 224-bit working precision.
const PI_DECIMAL: (&str, &str) = (
    "3",
    "1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679821480865132823066470938446095505822317253594081284811174503",
);

static PI_WORK: Lazy<BigInt> = Lazy::new(|| parse_decimal_fixed(PI_DECIMAL.0, PI_DECIMAL.1, WORK_BITS));

/// `round(n / d)` with ties away from zero. `d` must be nonzero.
pub(crate) fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d); // truncated toward zero; r has the sign of n
    if (r.magnitude() << 1u8) >= *d.magnitude() {
        let bump = if (n.sign() == d.sign()) || n.is_zero() {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        };
        q + bump
    } else {
        q
    }
}

fn parse_decimal_fixed(int_part: &str, frac_part: &str, bits: u32) -> BigInt {
    let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("decimal constant");
    let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
    div_round(&(digits << bits), &scale)
}

/// Fixed-point real with 192 fractional bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fx(BigInt);

impl Fx {
    pub fn zero() -> Self {
        Fx(BigInt::zero())
    }

    pub fn one() -> Self {
        Fx(BigInt::from(1) << FRAC_BITS)
    }

    pub fn from_int(v: i64) -> Self {
        Fx(BigInt::from(v) << FRAC_BITS)
    }

    /// Exact rational `num/den`, rounded once to the 2^-192 grid.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Fx(div_round(&(BigInt::from(num) << FRAC_BITS), &BigInt::from(den)))
    }

    /// Exact conversion: every finite f64 is a dyadic rational.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Fx::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let raw_frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if raw_exp == 0 {
            (raw_frac, -1074i64)
        } else {
            (raw_frac | (1u64 << 52), raw_exp - 1075)
        };
        let mut v = BigInt::from(mantissa);
        let shift = exp + FRAC_BITS as i64;
        if shift >= 0 {
            v <<= shift as u64;
        } else {
            v = div_round(&v, &(BigInt::from(1) << (-shift) as u64));
        }
        if negative {
            v = -v;
        }
        Some(Fx(v))
    }

    pub fn to_f64(&self) -> f64 {
        // Split into high bits + exponent to stay inside f64 range even for
        // huge mantissas.
        let bits = self.0.bits();
        if bits <= 1000 {
            self.0.to_f64().unwrap_or(0.0) / 2f64.powi(FRAC_BITS as i32)
        } else {
            let shift = bits - 64;
            let head = (&self.0 >> shift).to_f64().unwrap_or(0.0);
            head * 2f64.powi(shift as i32 - FRAC_BITS as i32)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Fx(self.0.abs())
    }

    pub fn mul(&self, other: &Fx) -> Fx {
        Fx(div_round(&(&self.0 * &other.0), &(BigInt::from(1) << FRAC_BITS)))
    }

    /// Rounded division; panics on zero divisor.
    pub fn div(&self, other: &Fx) -> Fx {
        assert!(!other.0.is_zero(), "division by zero");
        Fx(div_round(&(&self.0 << FRAC_BITS), &other.0))
    }

    pub fn mul_int(&self, k: i64) -> Fx {
        Fx(&self.0 * BigInt::from(k))
    }

    /// Square root of a nonnegative value, rounded to nearest.
    pub fn sqrt(&self) -> Fx {
        assert!(!self.0.is_negative(), "sqrt of negative value");
        let scaled = &self.0 << FRAC_BITS;
        let r = scaled.sqrt();
        // floor sqrt; bump if r+1 is closer
        let up = &r + 1;
        if (&up * &up - &scaled) < (&scaled - &r * &r) {
            Fx(up)
        } else {
            Fx(r)
        }
    }

    pub fn pi() -> Fx {
        Fx(div_round(&PI_WORK, &(BigInt::from(1) << GUARD_BITS)))
    }

    /// `round(value * 2^bits)` for feeding integer lattices.
    pub fn quantize(&self, bits: u32) -> BigInt {
        assert!(bits <= FRAC_BITS);
        div_round(&self.0, &(BigInt::from(1) << (FRAC_BITS - bits)))
    }

    /// Raw mantissa (value * 2^192).
    pub fn mantissa(&self) -> &BigInt {
        &self.0
    }

    pub fn from_mantissa(m: BigInt) -> Fx {
        Fx(m)
    }

    /// Integer floor of the value.
    pub fn floor_int(&self) -> BigInt {
        self.0.div_floor(&(BigInt::from(1) << FRAC_BITS))
    }

    /// Fractional part in [0, 1): `self - floor(self)`.
    pub fn fract(&self) -> Fx {
        Fx(self.0.mod_floor(&(BigInt::from(1) << FRAC_BITS)))
    }

    /// cos(pi * num / den) with exact range reduction on the rational.
    pub fn cos_pi_ratio(num: i64, den: i64) -> Fx {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-(num as i128), -(den as i128)) } else { (num as i128, den as i128) };
        // reduce num/den mod 2 (cosine has period 2 in r)
        let two_den = 2 * den;
        let mut m = num.rem_euclid(two_den); // r = m/den in [0, 2)
        let mut sign = 1i8;
        if m > den {
            m = two_den - m; // cos(2pi - y) = cos(y), now r in [0, 1]
        }
        if 2 * m > den {
            m = den - m; // cos(pi - y) = -cos(y), now r in [0, 1/2]
            sign = -1;
        }
        // y = pi * m / den in [0, pi/2], at working precision
        let y = div_round(&(&*PI_WORK * BigInt::from(m)), &BigInt::from(den));
        let c = cos_series_work(&y);
        let rounded = div_round(&c, &(BigInt::from(1) << GUARD_BITS));
        if sign < 0 {
            Fx(-rounded)
        } else {
            Fx(rounded)
        }
    }

    /// sin(pi * num / den) via sin(pi r) = cos(pi (1/2 - r)).
    pub fn sin_pi_ratio(num: i64, den: i64) -> Fx {
        let n = i64::checked_sub(den, i64::checked_mul(2, num).expect("ratio overflow")).expect("ratio overflow");
        Fx::cos_pi_ratio(n, i64::checked_mul(2, den).expect("ratio overflow"))
    }
}

/// cos(y) for y in [0, pi/2], mantissa at WORK_BITS in, mantissa at WORK_BITS out.
fn cos_series_work(y: &BigInt) -> BigInt {
    let one = BigInt::from(1) << WORK_BITS;
    let y2 = div_round(&(y * y), &one);
    let mut acc = one.clone();
    let mut term = one;
    let mut k: i64 = 1;
    loop {
        term = div_round(&(&term * &y2), &(BigInt::from(1) << WORK_BITS));
        term = div_round(&term, &BigInt::from((2 * k - 1) * (2 * k)));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            acc -= &term;
        } else {
            acc += &term;
        }
        k += 1;
        debug_assert!(k < 400, "cosine series failed to terminate");
    }
    acc
}

impl Add for Fx {
    type Output = Fx;
    fn add(self, rhs: Fx) -> Fx {
        Fx(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Fx> for &Fx {
    type Output = Fx;
    fn add(self, rhs: &'a Fx) -> Fx {
        Fx(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Fx> for Fx {
    fn add_assign(&mut self, rhs: &Fx) {
        self.0 += &rhs.0;
    }
}

impl Sub for Fx {
    type Output = Fx;
    fn sub(self, rhs: Fx) -> Fx {
        Fx(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Fx> for &Fx {
    type Output = Fx;
    fn sub(self, rhs: &'a Fx) -> Fx {
        Fx(&self.0 - &rhs.0)
    }
}

impl SubAssign<&Fx> for Fx {
    fn sub_assign(&mut self, rhs: &Fx) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-self.0)
    }
}

impl fmt::Debug for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fx({})", self.to_f64())
    }
}

impl fmt::Display for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

pub fn cmp_abs(a: &Fx, b: &Fx) -> Ordering {
    a.0.magnitude().cmp(b.0.magnitude())
}
