//! Exact arithmetic in the rationals and in real quadratic fields Q(√d).
//!
//! A [`Scalar`] is `a + b·√d` with rational `a`, `b` and a squarefree radicand
//! `d`. Values with `b = 0` are plain rationals and carry radicand 0, so two
//! scalars are compatible whenever their radicands agree or either one is
//! rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("radicand mismatch: sqrt({0}) and sqrt({1}) cannot be combined")]
    RadicandMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Element `a + b·√d` of a real quadratic extension of the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Arithmetic operation selector for [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

/// Applies `op` to `x` (and `y` for binary operations).
pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Neg => Ok(-x),
        ArithOp::Inv => x.checked_inv(),
    }
}

/// Exact sign of `x` as -1, 0 or +1.
pub fn scalar_sign(x: &Scalar) -> i8 {
    x.signum()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(ScalarError::Parse(s.to_string()));
    }
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            let d: BigInt = d.trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(t.parse().map_err(|_| ScalarError::Parse(s.to_string()))?),
    };
    Ok(parsed)
}

/// Splits `n` into `(s, r)` with `n = s²·r` and `r` squarefree.
pub fn squarefree_part(n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p * p) {
            rest /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, rest)
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar { a, b: Rational::zero(), d: 0 }
    }

    /// Builds `a + b·√d`, pulling square factors out of `d`.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        let (s, r) = squarefree_part(d);
        let b = b * Rational::from_integer(s.into());
        if r <= 1 {
            // √0 = 0 and √1 = 1 both collapse into the rational part.
            let a = if r == 1 { a + b } else { a };
            return Self::from_rational(a);
        }
        Self::canonical(a, b, r)
    }

    fn canonical(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d <= 1 {
            Scalar { a, b: Rational::zero(), d: 0 }
        } else {
            Scalar { a, b, d }
        }
    }

    /// `√d` for a non-negative integer `d`.
    pub fn sqrt(d: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// φ = (1 + √5)/2.
    pub fn golden_ratio() -> Self {
        Self::new(rational(1, 2), rational(1, 2), 5)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    /// Radicand of the surd part; 0 for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn compatible(&self, other: &Scalar) -> bool {
        self.d == 0 || other.d == 0 || self.d == other.d
    }

    fn joint_radicand(&self, other: &Scalar) -> Result<u64, ScalarError> {
        if self.compatible(other) {
            Ok(self.d.max(other.d))
        } else {
            Err(ScalarError::RadicandMismatch(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.joint_radicand(other)?;
        Ok(Self::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.joint_radicand(other)?;
        Ok(Self::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let d = self.joint_radicand(other)?;
        let dr = Rational::from_integer(d.into());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, d))
    }

    pub fn checked_inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // (a - b√d) / (a² - b²d); the norm is non-zero because √d is irrational.
        let norm = self.norm();
        Ok(Self::canonical(&self.a / &norm, -(&self.b / &norm), self.d))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Field norm `a² - b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.into())
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.into());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Exact comparison; fails only for incompatible radicands.
    pub fn cmp_exact(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        Ok(match self.checked_sub(other)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Exact square root when the value is the square of a rational.
    pub fn rational_sqrt(&self) -> Option<Rational> {
        let r = self.as_rational()?;
        if r.is_negative() {
            return None;
        }
        let n = r.numer().to_biguint()?;
        let d = r.denom().to_biguint()?;
        let (sn, sd) = (n.sqrt(), d.sqrt());
        (&sn * &sn == n && &sd * &sd == d).then(|| Rational::new(sn.into(), sd.into()))
    }
}

fn sign_of(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

// Operator forms panic on radicand mismatch; callers that cannot guarantee a
// shared radicand use the `checked_*` methods.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = |b: &Rational| -> String {
            if b.is_one() {
                String::new()
            } else {
                format!("{b}*")
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{}sqrt({})", coeff(&-&self.b), self.d)
            } else {
                write!(f, "{}sqrt({})", coeff(&self.b), self.d)
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{}sqrt({})", self.a, coeff(&-&self.b), self.d)
        } else {
            write!(f, "{}+{}sqrt({})", self.a, coeff(&self.b), self.d)
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `p/q`, `sqrt(d)`, `r/s*sqrt(d)` and `p/q±r/s*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(open) = t.find("sqrt(") else {
            return parse_rational(&t).map(Scalar::from_rational);
        };
        let rest = &t[open + 5..];
        let close = rest.find(')').ok_or_else(err)?;
        if close + 1 != rest.len() {
            return Err(err());
        }
        let d: u64 = rest[..close].parse().map_err(|_| err())?;
        let prefix = &t[..open];
        let prefix = match prefix.strip_suffix('*') {
            Some(p) if !p.is_empty() && !p.ends_with(['+', '-']) => p,
            Some(_) => return Err(err()),
            None => prefix,
        };
        let split = prefix
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a_text, b_text) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_text.is_empty() { Rational::zero() } else { parse_rational(a_text)? };
        let b = match b_text {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other)?,
        };
        Ok(Scalar::new(a, b, d))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
