//! Exact scalars and the coefficient rings ℚ, ℤ and 𝔽_p.
//!
//! A [`Scalar`] is an arbitrary-precision rational with an inline fast path
//! for values that are integers fitting in an `i64`. The representation is
//! canonical: a value is stored as `Small` exactly when it is such an integer,
//! so structural equality is value equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::Ring;
use crate::error::{Error, Result};

/// Largest modulus accepted for prime fields; keeps products inside `i64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64),
    Big(BigRational),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Small(0);
    pub const ONE: Scalar = Scalar::Small(1);

    pub fn from_ratio(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Scalar::Small(v);
            }
        }
        Scalar::Big(r)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        match n.to_i64() {
            Some(v) => Scalar::Small(v),
            None => Scalar::Big(BigRational::from_integer(n)),
        }
    }

    /// `num / den`; `None` when `den` is zero.
    pub fn fraction(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self::from_ratio(BigRational::new(num.into(), den.into())))
    }

    pub fn to_ratio(&self) -> BigRational {
        match self {
            Scalar::Small(v) => BigRational::from_integer((*v).into()),
            Scalar::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Small(1))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Small(_)) || matches!(self, Scalar::Big(r) if r.is_integer())
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(v) => *v < 0,
            Scalar::Big(r) => r.is_negative(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(v) => Some(*v),
            Scalar::Big(_) => None,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_add(*b) {
                return Scalar::Small(s);
            }
        }
        Self::from_ratio(self.to_ratio() + other.to_ratio())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_sub(*b) {
                return Scalar::Small(s);
            }
        }
        Self::from_ratio(self.to_ratio() - other.to_ratio())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_mul(*b) {
                return Scalar::Small(s);
            }
        }
        Self::from_ratio(self.to_ratio() * other.to_ratio())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Small(v) => match v.checked_neg() {
                Some(n) => Scalar::Small(n),
                None => Self::from_ratio(-self.to_ratio()),
            },
            Scalar::Big(r) => Self::from_ratio(-r.clone()),
        }
    }

    /// Rational quotient; `None` on division by zero.
    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if *b != 0 && a % b == 0 {
                if let Some(q) = a.checked_div(*b) {
                    return Some(Scalar::Small(q));
                }
            }
        }
        Some(Self::from_ratio(self.to_ratio() / other.to_ratio()))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Small(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(v) => write!(f, "{v}"),
            Scalar::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The coefficient ring A: ℚ, ℤ or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rationals,
    Integers,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffRing::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffRing::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Short name used in reports: `Q`, `Z`, `F5`.
    pub fn label(&self) -> String {
        match self {
            CoeffRing::Rationals => "Q".into(),
            CoeffRing::Integers => "Z".into(),
            CoeffRing::PrimeField(p) => format!("F{p}"),
        }
    }

    fn reduce_i64(p: u64, v: i64) -> Scalar {
        Scalar::Small(v.rem_euclid(p as i64))
    }

    fn inverse_mod(p: u64, v: i64) -> Option<i64> {
        let v = v.rem_euclid(p as i64);
        if v == 0 {
            return None;
        }
        // Fermat: v^(p-2) mod p.
        let (mut base, mut exp, mut acc) = (v as u128, p - 2, 1u128);
        let m = p as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as i64)
    }

    /// Maps an arbitrary rational into this ring.
    ///
    /// Fails for non-integers over ℤ and for denominators divisible by `p`.
    pub fn coerce(&self, s: &Scalar) -> Result<Scalar> {
        match self {
            CoeffRing::Rationals => Ok(s.clone()),
            CoeffRing::Integers => {
                if s.is_integer() {
                    Ok(s.clone())
                } else {
                    Err(Error::NotInRing(format!("{s} is not an integer")))
                }
            }
            CoeffRing::PrimeField(p) => {
                let r = s.to_ratio();
                let pm = BigInt::from(*p);
                let num = r.numer().mod_floor(&pm).to_i64().unwrap_or(0);
                let den = r.denom().mod_floor(&pm).to_i64().unwrap_or(0);
                let inv = Self::inverse_mod(*p, den)
                    .ok_or_else(|| Error::NotInRing(format!("{s} has denominator divisible by {p}")))?;
                Ok(Self::reduce_i64(*p, ((num as i128 * inv as i128) % *p as i128) as i64))
            }
        }
    }
}

impl Ring for CoeffRing {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    fn one(&self) -> Scalar {
        Scalar::ONE
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => {
                let (x, y) = (a.as_i64().unwrap_or(0), b.as_i64().unwrap_or(0));
                Self::reduce_i64(*p, x + y)
            }
            _ => a.add(b),
        }
    }

    fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => Self::reduce_i64(*p, -a.as_i64().unwrap_or(0)),
            _ => a.neg(),
        }
    }

    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => {
                let (x, y) = (a.as_i64().unwrap_or(0), b.as_i64().unwrap_or(0));
                Self::reduce_i64(*p, x - y)
            }
            _ => a.sub(b),
        }
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => {
                let (x, y) = (a.as_i64().unwrap_or(0), b.as_i64().unwrap_or(0));
                Self::reduce_i64(*p, x * y)
            }
            _ => a.mul(b),
        }
    }

    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }

    fn from_scalar(&self, s: &Scalar) -> Scalar {
        // Elements of the ring itself are already canonical; anything else is
        // a caller bug.
        self.coerce(s).expect("scalar outside the coefficient ring")
    }

    fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => Self::reduce_i64(*p, n),
            _ => Scalar::Small(n),
        }
    }

    fn scalars(&self) -> CoeffRing {
        *self
    }

    fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match self {
            CoeffRing::Rationals => a.div(b),
            CoeffRing::Integers => a.div(b).filter(Scalar::is_integer),
            CoeffRing::PrimeField(p) => {
                let inv = Self::inverse_mod(*p, b.as_i64()?)?;
                Some(self.mul(a, &Scalar::Small(inv)))
            }
        }
    }

    fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            CoeffRing::Integers => matches!(a, Scalar::Small(1) | Scalar::Small(-1)),
            _ => !a.is_zero(),
        }
    }

    fn is_domain(&self) -> bool {
        true
    }

    fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Integers)
    }

    fn format(&self, a: &Scalar) -> String {
        a.to_string()
    }
}
