//! Exact rational arithmetic and the extended value type used for thresholds.

use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
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

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Lossy conversion, used only for warm starts and diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Numerator and denominator as machine integers, if they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }

    /// Arithmetic mean of a non-empty slice of naturals.
    pub fn mean_of(values: &[u64]) -> Self {
        assert!(!values.is_empty());
        let total: BigInt = values.iter().map(|&v| BigInt::from(v)).sum();
        Rational::from_big(total, BigInt::from(values.len()))
    }

    /// The unique fraction with denominator at most `max_den` closest to
    /// `self` (ties resolved towards the smaller value).
    pub fn best_approximation(&self, max_den: u64) -> Self {
        // Stern-Brocot descent on the fractional part.
        let floor = self.0.floor();
        let frac = &self.0 - &floor;
        if frac.is_zero() || max_den <= 1 {
            let up = &floor + BigRational::one();
            let down = Rational(floor);
            let upr = Rational(up);
            return if (self - &down) <= (&upr - self) { down } else { upr };
        }
        let md = BigInt::from(max_den);
        let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
        let (mut rn, mut rd) = (BigInt::one(), BigInt::one());
        loop {
            let mn = &ln + &rn;
            let mdn = &ld + &rd;
            if mdn > md {
                break;
            }
            let mediant = BigRational::new(mn.clone(), mdn.clone());
            match mediant.cmp(&frac) {
                Ordering::Less => {
                    ln = mn;
                    ld = mdn;
                }
                Ordering::Greater => {
                    rn = mn;
                    rd = mdn;
                }
                Ordering::Equal => return Rational(floor + mediant),
            }
        }
        let left = BigRational::new(ln, ld);
        let right = BigRational::new(rn, rd);
        let pick = if (&frac - &left) <= (&right - &frac) { left } else { right };
        Rational(floor + pick)
    }

    /// `(a, b)` with `a/b == self`, requiring both to fit in `i64`.
    pub fn parts_i64(&self) -> (i64, i64) {
        self.to_i64_pair().expect("rational does not fit in i64")
    }

    pub fn gcd_reduce(num: i64, den: i64) -> (i64, i64) {
        let g = num.gcd(&den);
        if g == 0 {
            (num, den)
        } else {
            (num / g, den / g)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("malformed rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".to_string()));
        }
        Ok(Rational::from_big(num, den))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// A rational or +infinity. Infinity is the threshold of an infeasible
/// problem.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl Threshold {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Threshold::Finite(r) => Some(r),
            Threshold::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Threshold::Infinite)
    }
}

impl From<Rational> for Threshold {
    fn from(r: Rational) -> Self {
        Threshold::Finite(r)
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
            (Threshold::Infinite, _) => Ordering::Greater,
            (_, Threshold::Infinite) => Ordering::Less,
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(r) => write!(f, "{r}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Threshold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "INF" | "∞" => Ok(Threshold::Infinite),
            other => other.parse().map(Threshold::Finite),
        }
    }
}
