//! Exact rational arithmetic and affine forms in the symbolic parameters.
//!
//! Everything symbolic in this crate is carried by [`Rational`]: an
//! arbitrary-precision fraction, always in lowest terms with a positive
//! denominator. [`AffineCT`] layers the two symbolic parameters of the
//! certifier on top of it: `c`, the exponent of the Diophantine inequality,
//! and `theta`, the dyadic split exponent (`M = X^theta`).
//!
//! Rationals cross every external boundary (CLI flags, config files, reports)
//! as `"num/den"` strings; plain integers are accepted and printed without
//! the `/1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty theta range: lo > hi")]
    EmptyThetaRange,
    #[error("malformed rational `{0}`: expected `num/den` or an integer")]
    Parse(String),
}

/// An exact fraction with arbitrary-precision numerator and denominator.
///
/// Invariants: the denominator is positive and `gcd(|num|, den) = 1` after
/// every construction and operation. Arithmetic never rounds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, RatError> {
        if den == 0 {
            return Err(RatError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, RatError> {
        if den.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, RatError> {
        if self.is_zero() {
            return Err(RatError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RatError> {
        if rhs.is_zero() {
            return Err(RatError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Lossy conversion for the numerical half of the crate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// Infallible constructor for literal fractions known to have a nonzero
/// denominator. Panics otherwise; reserved for compile-time constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("literal with nonzero denominator")
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    /// Panics on a zero divisor; use [`Rational::checked_div`] where the
    /// divisor is not known to be nonzero.
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = RatError;

    fn from_str(s: &str) -> Result<Self, RatError> {
        let s = s.trim();
        let bad = || RatError::Parse(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(RatError::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// An affine form `c0 + cc*c + ct*theta` in the symbolic parameters.
///
/// Addition, subtraction and rational scaling are closed and exact, which is
/// all the certifier ever needs: every exponent inequality it encodes is
/// affine in `(c, theta)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCT {
    pub c0: Rational,
    pub cc: Rational,
    pub ct: Rational,
}

impl AffineCT {
    pub fn new(c0: Rational, cc: Rational, ct: Rational) -> Self {
        AffineCT { c0, cc, ct }
    }

    pub fn constant(c0: Rational) -> Self {
        AffineCT::new(c0, Rational::zero(), Rational::zero())
    }

    /// The form `c` itself.
    pub fn in_c() -> Self {
        AffineCT::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    /// The form `theta` itself.
    pub fn in_theta() -> Self {
        AffineCT::new(Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        AffineCT::new(&self.c0 * k, &self.cc * k, &self.ct * k)
    }

    /// Exact value `c0 + cc*c + ct*theta`.
    pub fn eval(&self, c: &Rational, theta: &Rational) -> Rational {
        &self.c0 + &self.cc * c + &self.ct * theta
    }

    /// Exact maximum of `theta -> eval(c, theta)` over `[lo, hi]`, together
    /// with the endpoint where it is attained. The maximum of an affine form
    /// sits at the endpoint selected by the sign of the `theta` coefficient;
    /// a zero coefficient reports the lower endpoint.
    pub fn sup_on_theta(
        &self,
        c: &Rational,
        lo: &Rational,
        hi: &Rational,
    ) -> Result<(Rational, Rational), RatError> {
        if lo > hi {
            return Err(RatError::EmptyThetaRange);
        }
        let at = if self.ct.is_positive() { hi } else { lo };
        Ok((self.eval(c, at), at.clone()))
    }

    /// Restriction to a fixed `theta`, i.e. an affine form in `c` alone.
    pub fn at_theta(&self, theta: &Rational) -> AffineC {
        AffineC {
            a0: &self.c0 + &self.ct * theta,
            a1: self.cc.clone(),
        }
    }
}

impl Add for AffineCT {
    type Output = AffineCT;
    fn add(self, rhs: AffineCT) -> AffineCT {
        AffineCT::new(self.c0 + rhs.c0, self.cc + rhs.cc, self.ct + rhs.ct)
    }
}

impl Sub for AffineCT {
    type Output = AffineCT;
    fn sub(self, rhs: AffineCT) -> AffineCT {
        AffineCT::new(self.c0 - rhs.c0, self.cc - rhs.cc, self.ct - rhs.ct)
    }
}

impl fmt::Display for AffineCT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c0)?;
        if !self.cc.is_zero() {
            write!(f, " + ({})c", self.cc)?;
        }
        if !self.ct.is_zero() {
            write!(f, " + ({})theta", self.ct)?;
        }
        Ok(())
    }
}

/// An affine form `a0 + a1*c` in `c` alone, produced by fixing `theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineC {
    pub a0: Rational,
    pub a1: Rational,
}

impl AffineC {
    pub fn constant(a0: Rational) -> Self {
        AffineC { a0, a1: Rational::zero() }
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        &self.a0 + &self.a1 * c
    }

    pub fn add(&self, rhs: &AffineC) -> AffineC {
        AffineC { a0: &self.a0 + &rhs.a0, a1: &self.a1 + &rhs.a1 }
    }

    pub fn sub(&self, rhs: &AffineC) -> AffineC {
        AffineC { a0: &self.a0 - &rhs.a0, a1: &self.a1 - &rhs.a1 }
    }

    pub fn scale(&self, k: &Rational) -> AffineC {
        AffineC { a0: &self.a0 * k, a1: &self.a1 * k }
    }

    /// The `c` with `eval(c) = 0`, or `None` when the form is constant.
    pub fn root(&self) -> Option<Rational> {
        if self.a1.is_zero() {
            None
        } else {
            Some(-self.a0.clone() / self.a1.clone())
        }
    }
}

/// The unique `c` with `lhs(c, theta) = rhs(c, theta)`, or `None` when the
/// `c` coefficients coincide (parallel forms). `None` is a value here, not
/// an error: callers use it to mark constraints that never pin `c`.
pub fn solve_c(lhs: &AffineCT, rhs: &AffineCT, theta: &Rational) -> Option<Rational> {
    let l = lhs.at_theta(theta);
    let r = rhs.at_theta(theta);
    l.sub(&r, ).root()
}

/// Exact three-way comparison identical to `sign(a - b)`.
pub fn compare(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
