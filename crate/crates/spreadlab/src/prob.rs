//! Probabilities and real values that stay exact (big rationals) as long as
//! every input is exact, and degrade to `f64` as soon as one is not.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Prob {
    Exact(BigRational),
    Float(f64),
}

impl Prob {
    pub fn zero() -> Self {
        Prob::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob::Exact(BigRational::one())
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Prob::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn int(v: i64) -> Self {
        Prob::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// `(1/2)^k`
    pub fn half_pow(k: usize) -> Self {
        Prob::Exact(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Prob::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Prob::Exact(r) => Some(r),
            Prob::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Prob::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_zero(),
            Prob::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_negative(),
            Prob::Float(x) => *x < 0.0,
        }
    }

    pub fn abs(&self) -> Prob {
        match self {
            Prob::Exact(r) => Prob::Exact(r.abs()),
            Prob::Float(x) => Prob::Float(x.abs()),
        }
    }

    pub fn pow(&self, k: u32) -> Prob {
        let mut acc = Prob::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Negative values become zero.
    pub fn clamp_nonneg(self) -> Prob {
        if self.is_negative() {
            Prob::zero()
        } else {
            self
        }
    }

    pub fn max(self, other: Prob) -> Prob {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Prob>) -> Prob {
        let mut acc = Prob::zero();
        for p in items {
            acc += p;
        }
        acc
    }

    /// Exact decimal reading of a finite float: `0.9` becomes `9/10`, not the
    /// binary expansion of the nearest double.
    pub fn from_f64_decimal(x: f64) -> Result<Prob> {
        if !x.is_finite() {
            return Err(Error::Parse(format!("non-finite number {x}")));
        }
        Prob::parse(&format!("{x}"))
    }

    /// Accepts `a/b`, plain decimals and scientific notation, all exactly.
    pub fn parse(s: &str) -> Result<Prob> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            return Ok(Prob::Exact(BigRational::new(a, b)));
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits: BigInt = format!("{int_part}{frac_part}0")
            .parse()
            .map_err(|_| bad())?;
        let digits = digits / BigInt::from(10);
        let shift = exp - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let mut r = if shift >= 0 {
            BigRational::from_integer(digits * num::pow(ten, shift as usize))
        } else {
            BigRational::new(digits, num::pow(ten, (-shift) as usize))
        };
        if neg {
            r = -r;
        }
        Ok(Prob::Exact(r))
    }

    /// Method tag used in reports.
    pub fn method(&self) -> &'static str {
        match self {
            Prob::Exact(_) => "exact-rational",
            Prob::Float(_) => "exact-float",
        }
    }

    /// `"3/32"` for exact values, the float otherwise.
    pub fn display_exact(&self) -> String {
        match self {
            Prob::Exact(r) => r.to_string(),
            Prob::Float(x) => format!("{x}"),
        }
    }
}

impl From<f64> for Prob {
    fn from(x: f64) -> Self {
        Prob::Float(x)
    }
}

impl From<BigRational> for Prob {
    fn from(r: BigRational) -> Self {
        Prob::Exact(r)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_exact())
    }
}

impl PartialEq for Prob {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Prob {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a Prob> for &'a Prob {
            type Output = Prob;
            fn $m(self, rhs: &'a Prob) -> Prob {
                match (self, rhs) {
                    (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a $op b),
                    _ => Prob::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Prob> for Prob {
            type Output = Prob;
            fn $m(self, rhs: Prob) -> Prob {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Prob> for Prob {
            type Output = Prob;
            fn $m(self, rhs: &'a Prob) -> Prob {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&Prob> for Prob {
    fn add_assign(&mut self, rhs: &Prob) {
        match (&mut *self, rhs) {
            (Prob::Exact(a), Prob::Exact(b)) => *a += b,
            _ => *self = Prob::Float(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl AddAssign<Prob> for Prob {
    fn add_assign(&mut self, rhs: Prob) {
        *self += &rhs;
    }
}

impl Neg for Prob {
    type Output = Prob;
    fn neg(self) -> Prob {
        match self {
            Prob::Exact(a) => Prob::Exact(-a),
            Prob::Float(x) => Prob::Float(-x),
        }
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = match acc.checked_mul(n as u128 - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(Prob::parse("0.9").unwrap(), Prob::ratio(9, 10));
        assert_eq!(Prob::parse("3/32").unwrap(), Prob::ratio(3, 32));
        assert_eq!(Prob::parse("-1.5e-2").unwrap(), Prob::ratio(-3, 200));
        assert_eq!(Prob::parse("2E3").unwrap(), Prob::int(2000));
        assert_eq!(Prob::from_f64_decimal(0.1).unwrap(), Prob::ratio(1, 10));
        assert!(Prob::parse("abc").is_err());
        assert!(Prob::parse("1/0").is_err());
    }

    #[test]
    fn mixing_exact_and_float_degrades() {
        let a = Prob::ratio(1, 4) + Prob::Float(0.25);
        assert!(!a.is_exact());
        assert_eq!(a.to_f64(), 0.5);
        assert!(Prob::half_pow(5).is_exact());
        assert_eq!(Prob::half_pow(5), Prob::ratio(1, 32));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial_big(28, 14), BigInt::from(40116600u64));
        assert_eq!(binomial(3, 5), 0);
    }
}
