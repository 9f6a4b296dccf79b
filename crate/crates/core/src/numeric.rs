//! Exact arithmetic: unbounded naturals, integers and normalized rationals.
//!
//! Naturals and integers are `num-bigint` values. [`Rational`] wraps a
//! `BigRational`, which is kept in lowest terms with a positive denominator
//! after every operation, so structural equality is value equality.
//!
//! Text forms are `[-]digits` for integers and `[-]num/den` for rationals.
//! Rationals always print their denominator, including `/1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Unbounded natural number.
pub type Nat = BigUint;
/// Unbounded signed integer.
pub type Int = BigInt;

/// Exact rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<Int>, den: impl Into<Int>) -> Rational {
        let den = den.into();
        assert!(!den.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_int(v: impl Into<Int>) -> Rational {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    /// `2^k` for any integer exponent.
    pub fn pow2(k: i64) -> Rational {
        let mag = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rational::from_int(mag)
        } else {
            Rational(BigRational::new(BigInt::one(), mag))
        }
    }

    pub fn numer(&self) -> &Int {
        self.0.numer()
    }

    pub fn denom(&self) -> &Int {
        self.0.denom()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn floor(&self) -> Int {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> Int {
        self.0.ceil().to_integer()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering of `floor(self * 10^digits) / 10^digits` when
    /// `round_up` is false, otherwise of the ceiling. Never a rounded guess.
    pub fn to_decimal(&self, digits: usize, round_up: bool) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = Rational(&self.0 * BigRational::from_integer(scale.clone()));
        let v = if round_up { scaled.ceil() } else { scaled.floor() };
        let neg = v.is_negative();
        let mag = v.abs().to_string();
        let mag = if mag.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
        } else {
            mag
        };
        let (int_part, frac) = mag.split_at(mag.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }
}

pub fn rat_add(a: &Rational, b: &Rational) -> Rational {
    Rational(&a.0 + &b.0)
}

pub fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    Rational(&a.0 * &b.0)
}

pub fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.0.cmp(&b.0)
}

pub fn pow2(k: i64) -> Rational {
    Rational::pow2(k)
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<Int> for Rational {
    fn from(v: Int) -> Self {
        Rational::from_int(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed number `{0}`")]
pub struct NumberSyntaxError(pub String);

/// Parses `[-]digits`; leading zeros are accepted here, see [`is_canonical_int`].
pub fn parse_int(text: &str) -> Result<Int, NumberSyntaxError> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumberSyntaxError(text.to_string()));
    }
    BigInt::from_str(text).map_err(|_| NumberSyntaxError(text.to_string()))
}

/// Canonical integer text: no leading zeros, no `-0`.
pub fn is_canonical_int(text: &str) -> bool {
    match parse_int(text) {
        Ok(v) => v.to_string() == text,
        Err(_) => false,
    }
}

impl FromStr for Rational {
    type Err = NumberSyntaxError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n, d),
            None => (text, "1"),
        };
        if den.starts_with('-') {
            return Err(NumberSyntaxError(text.to_string()));
        }
        let num = parse_int(num)?;
        let den = parse_int(den)?;
        if den.is_zero() {
            return Err(NumberSyntaxError(text.to_string()));
        }
        Ok(Rational::new(num, den))
    }
}

/// Ceiling of log2 for positive naturals; `clog2(1) == 0`.
pub fn clog2(v: &Nat) -> u64 {
    assert!(!v.is_zero(), "clog2 of zero");
    let bits = v.bits();
    if v.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}
