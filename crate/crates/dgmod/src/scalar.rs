//! Exact scalars: arbitrary-precision rationals and prime-field elements.
//!
//! Every value carries its field so that mixing fields is caught at the
//! boundaries (matrix construction, parsing). There is no floating point
//! anywhere: rationals are reduced `BigInt` fractions and `F_p` elements are
//! canonical representatives in `0..p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field: `Q` or `F_p` with `p` prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field `F_p`. Rejects non-primes.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::zero())),
            FieldSpec::Prime(p) => Scalar::Mod(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::one())),
            FieldSpec::Prime(p) => Scalar::Mod(1 % *p, *p),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
            FieldSpec::Prime(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Mod(m, *p)
            }
        }
    }

    /// `(-1)^k`.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parse a scalar in this field from its string form (`"3/4"`, `"-2"`).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => {
                let r = BigRational::from_str(s)
                    .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
                Ok(Scalar::Rat(Box::new(r)))
            }
            FieldSpec::Prime(p) => {
                let v = BigInt::from_str(s)
                    .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))?;
                let m = v
                    .mod_floor(&BigInt::from(*p))
                    .try_into()
                    .map_err(|_| Error::Parse(format!("residue of {s:?} out of range")))?;
                Ok(Scalar::Mod(m, *p))
            }
        }
    }
}

use num_integer::Integer;

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("p:") {
            let p: u64 = rest
                .parse()
                .map_err(|e| Error::Parse(format!("bad prime in field {s:?}: {e}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::Parse(format!(
            "unknown field {s:?}; expected \"q\" or \"p:<prime>\""
        )))
    }
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(Box<BigRational>),
    /// Canonical representative and the modulus (a prime).
    Mod(u64, u64),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod(_, p) => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod(v, p) => *v == 1 % *p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() + b.as_ref())),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                debug_assert_eq!(p, q, "field mismatch");
                Scalar::Mod(addmod(*a, *b, *p), *p)
            }
            _ => panic!("field mismatch in scalar addition"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() * b.as_ref())),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                debug_assert_eq!(p, q, "field mismatch");
                Scalar::Mod(mulmod(*a, *b, *p), *p)
            }
            _ => panic!("field mismatch in scalar multiplication"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(Box::new(-a.as_ref())),
            Scalar::Mod(a, p) => Scalar::Mod(if *a == 0 { 0 } else { *p - *a }, *p),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(a) => Scalar::Rat(Box::new(a.recip())),
            Scalar::Mod(a, p) => Scalar::Mod(invmod(*a, *p), *p),
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Numerator sign over Q (used only for display niceties).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(a) => a.is_negative(),
            Scalar::Mod(..) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); p prime and a != 0 mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FieldSpec::prime(5).unwrap();
        let a = f5.from_i64(3);
        let b = f5.from_i64(4);
        assert_eq!(a.add(&b), f5.from_i64(2));
        assert_eq!(a.mul(&b), f5.from_i64(2));
        assert_eq!(a.inv().unwrap(), f5.from_i64(2)); // 3*2 = 6 = 1 mod 5
        assert_eq!(a.neg(), f5.from_i64(2));
        assert!(FieldSpec::prime(6).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = FieldSpec::rationals();
        let third = q.parse_scalar("1/3").unwrap();
        let mut acc = q.zero();
        for _ in 0..3 {
            acc = acc.add(&third);
        }
        assert!(acc.is_one());
        assert_eq!(q.parse_scalar("2/4").unwrap(), q.parse_scalar("1/2").unwrap());
    }

    #[test]
    fn field_spec_round_trip() {
        for s in ["q", "p:2", "p:7919"] {
            let f: FieldSpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("p:9".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn signs() {
        let q = FieldSpec::rationals();
        assert!(q.sign(0).is_one());
        assert_eq!(q.sign(-3), q.from_i64(-1));
        assert_eq!(q.sign(4), q.one());
    }
}
