//! Exact scalar fields.
//!
//! Everything structural in this crate is generic over [`Field`], an exact
//! characteristic-zero field built on top of `num-traits`. Two instances are
//! provided: [`Rational`] (arbitrary precision `Q`) and [`GaussianRational`]
//! (`Q(i)`), which is the default coefficient type ([`crate::Scalar`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Exact field of characteristic zero with an (optional) complex conjugation.
///
/// For [`Rational`] the conjugation is the identity and the imaginary part
/// is always zero.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// Builds `re + im*i`; `None` when the field cannot hold a nonzero
    /// imaginary part.
    fn from_parts(re: Rational, im: Rational) -> Option<Self>;

    fn real_part(&self) -> Rational;

    fn imag_part(&self) -> Rational;

    fn conj(&self) -> Self;

    fn is_real(&self) -> bool {
        self.imag_part().is_zero()
    }

    /// The rational value when the imaginary part vanishes.
    fn to_rational(&self) -> Option<Rational> {
        if self.is_real() {
            Some(self.real_part())
        } else {
            None
        }
    }

    fn to_f64_parts(&self) -> (f64, f64) {
        (rational_to_f64(&self.real_part()), rational_to_f64(&self.imag_part()))
    }
}

impl Field for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn from_parts(re: Rational, im: Rational) -> Option<Self> {
        im.is_zero().then_some(re)
    }

    fn real_part(&self) -> Rational {
        self.clone()
    }

    fn imag_part(&self) -> Rational {
        Rational::zero()
    }

    fn conj(&self) -> Self {
        self.clone()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element `re + im*i` of the Gaussian rationals `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(rat(re, 1), rat(im, 1))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid scalar literal `{literal}`: {reason}")]
pub struct ParseScalarError {
    pub literal: String,
    pub reason: String,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator `{n}`"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator `{d}`"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Parses one signed term, returning `(value, is_imaginary)`.
fn parse_term(term: &str) -> Result<(Rational, bool), String> {
    let t = term.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let (value, imag) = if body == "i" {
        (Rational::one(), true)
    } else if let Some(coef) = body.strip_suffix("*i") {
        (parse_rational(coef)?, true)
    } else if let Some(coef) = body.strip_suffix('i') {
        (parse_rational(coef)?, true)
    } else {
        (parse_rational(body)?, false)
    };
    Ok((if neg { -value } else { value }, imag))
}

impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    /// Accepts `p`, `p/q`, `r/s*i`, `i`, `-i` and `p/q+r/s*i` (either sign).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| ParseScalarError { literal: s.to_string(), reason };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty literal".into()));
        }
        // split at a sign that is not the leading one
        let bytes = compact.as_bytes();
        let split = (1..bytes.len()).find(|&k| bytes[k] == b'+' || bytes[k] == b'-');
        let terms: Vec<&str> = match split {
            Some(k) => vec![&compact[..k], &compact[k..]],
            None => vec![&compact[..]],
        };
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut seen = (false, false);
        for t in terms {
            let (v, imag) = parse_term(t).map_err(err)?;
            if imag {
                if seen.1 {
                    return Err(err("two imaginary parts".into()));
                }
                seen.1 = true;
                im = v;
            } else {
                if seen.0 {
                    return Err(err("two real parts".into()));
                }
                seen.0 = true;
                re = v;
            }
        }
        Ok(Self { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Str(String),
            Int(i64),
        }
        match Lit::deserialize(deserializer)? {
            Lit::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Lit::Int(v) => Ok(GaussianRational::from_ints(v, 0)),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * inv
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }
}

impl Field for GaussianRational {
    fn from_rational(r: Rational) -> Self {
        r.into()
    }

    fn from_parts(re: Rational, im: Rational) -> Option<Self> {
        Some(Self::new(re, im))
    }

    fn real_part(&self) -> Rational {
        self.re.clone()
    }

    fn imag_part(&self) -> Rational {
        self.im.clone()
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

/// Shorthand for building a Gaussian rational from two `p/q` pairs.
pub fn gauss(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
}
