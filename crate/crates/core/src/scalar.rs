//! Exact scalars: elements `a + b*sqrt(d)` of a real quadratic field over the
//! rationals, with `d = 1` meaning the plain rational case.
//!
//! A computation adjoins at most one square root. Mixing two different
//! radicands in one arithmetic operation is a programming error and panics;
//! the public construction entry points check compatibility up front and
//! return [`CoreError::NestedRadicals`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rational: BigRational,
    irrational: BigRational,
    radicand: u64,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            rational: BigRational::zero(),
            irrational: BigRational::zero(),
            radicand: 1,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            rational: r,
            irrational: BigRational::zero(),
            radicand: 1,
        }
    }

    /// `a + b*sqrt(d)`; `d` must be square-free.
    pub fn with_sqrt(a: BigRational, b: BigRational, d: u64) -> Result<Self, CoreError> {
        if d == 0 || square_free_part(d) != (d, 1) {
            return Err(CoreError::Parse(format!("radicand {d} is not square-free")));
        }
        Ok(Scalar {
            rational: a,
            irrational: b,
            radicand: d,
        }
        .normalized())
    }

    /// `sqrt(d)` for a square-free `d`.
    pub fn sqrt_of(d: u64) -> Result<Self, CoreError> {
        Self::with_sqrt(BigRational::zero(), BigRational::one(), d)
    }

    fn normalized(mut self) -> Self {
        if self.radicand == 1 {
            self.rational += std::mem::take(&mut self.irrational);
        } else if self.irrational.is_zero() {
            self.radicand = 1;
        }
        self
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irrational
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.irrational.is_zero() && self.rational.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    /// Rational value, if the scalar has no irrational component.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational.clone())
    }

    fn common_radicand(a: u64, b: u64) -> u64 {
        match (a, b) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("{}", CoreError::NestedRadicals(d, e)),
        }
    }

    /// Radicand shared by `self` and `other`, or an error if they use different
    /// square roots.
    pub fn compatible_radicand(a: u64, b: u64) -> Result<u64, CoreError> {
        match (a, b) {
            (1, d) | (d, 1) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(CoreError::NestedRadicals(d, e)),
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        if self.irrational.is_zero() {
            return Scalar::from_rational(self.rational.recip());
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        let norm = &self.rational * &self.rational - &self.irrational * &self.irrational * d;
        Scalar {
            rational: &self.rational / &norm,
            irrational: -(&self.irrational / &norm),
            radicand: self.radicand,
        }
        .normalized()
    }

    /// Sign of the real number represented.
    pub fn signum(&self) -> i32 {
        let a = &self.rational;
        let b = &self.irrational;
        if b.is_zero() {
            return sign(a);
        }
        if a.is_zero() {
            return sign(b);
        }
        let (sa, sb) = (sign(a), sign(b));
        if sa == sb {
            return sa;
        }
        // |a| vs |b| sqrt(d): compare a^2 with b^2 d
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        match (a * a).cmp(&(b * b * d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Square root of a nonnegative rational, adjoining at most one radical.
    /// Returns `None` for negative input.
    pub fn sqrt_rational(r: &BigRational) -> Option<Scalar> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Scalar::zero());
        }
        // r = n/m = n*m / m^2
        let nm = r.numer() * r.denom();
        let nm = nm.to_u128()?;
        let (d, s) = square_free_part_u128(nm);
        let coeff = BigRational::new(BigInt::from(s), r.denom().clone());
        if d == 1 {
            Some(Scalar::from_rational(coeff))
        } else {
            let d = u64::try_from(d).ok()?;
            Some(
                Scalar {
                    rational: BigRational::zero(),
                    irrational: coeff,
                    radicand: d,
                }
                .normalized(),
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.irrational.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `n = d * s^2` with `d` square-free; returns `(d, s)`.
pub fn square_free_part(n: u64) -> (u64, u64) {
    let (d, s) = square_free_part_u128(n as u128);
    (d as u64, s as u64)
}

fn square_free_part_u128(mut n: u128) -> (u128, u128) {
    let mut d = 1u128;
    let mut s = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    (d * n, s)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let d = Scalar::common_radicand(self.radicand, rhs.radicand);
        Scalar {
            rational: &self.rational + &rhs.rational,
            irrational: &self.irrational + &rhs.irrational,
            radicand: d,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let d = Scalar::common_radicand(self.radicand, rhs.radicand);
        Scalar {
            rational: &self.rational - &rhs.rational,
            irrational: &self.irrational - &rhs.irrational,
            radicand: d,
        }
        .normalized()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.irrational.is_zero() && rhs.irrational.is_zero() {
            return Scalar::from_rational(&self.rational * &rhs.rational);
        }
        let d = Scalar::common_radicand(self.radicand, rhs.radicand);
        let dr = BigRational::from_integer(BigInt::from(d));
        Scalar {
            rational: &self.rational * &rhs.rational + &self.irrational * &rhs.irrational * dr,
            irrational: &self.rational * &rhs.irrational + &self.irrational * &rhs.rational,
            radicand: d,
        }
        .normalized()
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rational: -self.rational,
            irrational: -self.irrational,
            radicand: self.radicand,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.irrational.is_zero() {
            self.rational += &rhs.rational;
            return;
        }
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if rhs.irrational.is_zero() {
            self.rational -= &rhs.rational;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serialized as `p/q` or `p/q+r/s*sqrt(d)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            write!(f, "{}", fmt_rational(&self.rational))
        } else {
            write!(
                f,
                "{}+{}*sqrt({})",
                fmt_rational(&self.rational),
                fmt_rational(&self.irrational),
                self.radicand
            )
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CoreError> {
    let bad = || CoreError::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some(idx) = s.find("*sqrt(") else {
            return Ok(Scalar::from_rational(parse_rational(s)?));
        };
        let bad = || CoreError::Parse(format!("invalid scalar `{s}`"));
        let head = &s[..idx];
        let radicand: u64 = s[idx + 6..]
            .strip_suffix(')')
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        // split "a+b" at the '+' that is not part of a leading sign
        let plus = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let a = parse_rational(&head[..plus])?;
        let b = parse_rational(&head[plus + 1..])?;
        Scalar::with_sqrt(a, b, radicand)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
