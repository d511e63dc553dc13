use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation.
///
/// Every scalar in a single computation carries the same `FieldSpec`; mixing
/// fields is an internal error and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { characteristic: u64 },
}

/// Largest characteristic accepted; keeps products of residues inside `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..MAX_CHARACTERISTIC).contains(&p) || !is_prime(p) {
            return Err(Error::invalid(format!(
                "characteristic {p} is not a prime below 2^31"
            )));
        }
        Ok(FieldSpec::PrimeField { characteristic: p })
    }

    /// Checks the invariant that a prime-field characteristic really is prime.
    pub fn validate(self) -> Result<Self> {
        match self {
            FieldSpec::Rationals => Ok(self),
            FieldSpec::PrimeField { characteristic } => FieldSpec::prime(characteristic),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField { characteristic } => characteristic,
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField { characteristic } => Scalar::Modular {
                value: 0,
                modulus: characteristic,
            },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField { characteristic } => Scalar::Modular {
                value: n.rem_euclid(characteristic as i64) as u64,
                modulus: characteristic,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        self.from_i64(num) * self.from_i64(den).inv()
    }

    /// Parses the serialized form of a scalar: `"n"` or `"n/d"` for the
    /// rationals, a residue for prime fields.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::invalid(format!("cannot parse scalar {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (text.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::PrimeField { characteristic } => {
                let p = BigInt::from(characteristic);
                let n = num.mod_floor(&p).to_u64().unwrap();
                let d = den.mod_floor(&p).to_u64().unwrap();
                if d == 0 {
                    return Err(Error::invalid(format!(
                        "denominator of {text:?} vanishes mod {characteristic}"
                    )));
                }
                let n = Scalar::Modular { value: n, modulus: characteristic };
                let d = Scalar::Modular { value: d, modulus: characteristic };
                Ok(&n * &d.inv())
            }
        }
    }

    /// Draws a sampling scalar: uniform in {-2..2} over the rationals,
    /// uniform over the field for prime fields.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rationals => self.from_i64(rng.gen_range(-2..=2)),
            FieldSpec::PrimeField { characteristic } => Scalar::Modular {
                value: rng.gen_range(0..characteristic),
                modulus: characteristic,
            },
        }
    }

    pub fn label(self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::PrimeField { characteristic } => format!("F{characteristic}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Modular { modulus, .. } => FieldSpec::PrimeField { characteristic: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self * &other.inv()
    }

    /// Denominator of a rational; `1` for prime-field elements.
    pub fn denominator(&self) -> BigInt {
        match self {
            Scalar::Rational(q) => q.denom().clone(),
            Scalar::Modular { .. } => BigInt::one(),
        }
    }

    /// Reduces a rational modulo `p`. Returns `None` if `p` divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => {
                let pb = BigInt::from(p);
                let d = q.denom().mod_floor(&pb).to_u64().unwrap();
                if d == 0 {
                    return None;
                }
                let n = q.numer().mod_floor(&pb).to_u64().unwrap();
                let n = Scalar::Modular { value: n, modulus: p };
                let d = Scalar::Modular { value: d, modulus: p };
                Some(&n * &d.inv())
            }
            Scalar::Modular { modulus, .. } if *modulus == p => Some(self.clone()),
            Scalar::Modular { .. } => None,
        }
    }

    /// JSON form: rationals as `"n"`/`"n/d"` strings, residues as integers.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(_) => serde_json::Value::String(self.to_string()),
            Scalar::Modular { value, .. } => serde_json::Value::from(*value),
        }
    }

    pub fn from_json(field: FieldSpec, value: &serde_json::Value) -> Result<Scalar> {
        match value {
            serde_json::Value::String(s) => field.parse(s),
            serde_json::Value::Number(n) => field.parse(&n.to_string()),
            other => Err(Error::invalid(format!("expected a scalar, found {other}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: (a + b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: (a + p - b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular { value: (a * b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// `self += a * b` without intermediate clones where possible.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        match (&mut *self, a, b) {
            (Scalar::Rational(acc), Scalar::Rational(x), Scalar::Rational(y)) => *acc += x * y,
            (
                Scalar::Modular { value, modulus },
                Scalar::Modular { value: x, .. },
                Scalar::Modular { value: y, .. },
            ) => *value = (*value + x * y % *modulus) % *modulus,
            _ => panic!("field mismatch in add_product"),
        }
    }

    /// `self -= a * b`.
    pub fn sub_product(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        match (&mut *self, a, b) {
            (Scalar::Rational(acc), Scalar::Rational(x), Scalar::Rational(y)) => *acc -= x * y,
            (
                Scalar::Modular { value, modulus },
                Scalar::Modular { value: x, .. },
                Scalar::Modular { value: y, .. },
            ) => *value = (*value + *modulus - x * y % *modulus) % *modulus,
            _ => panic!("field mismatch in sub_product"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_serialization_is_lowest_terms() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("6/-4").unwrap().to_string(), "-3/2");
        assert_eq!(q.parse("4/2").unwrap().to_string(), "2");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_i64(3);
        assert_eq!((&a * &a.inv()), f.one());
        assert_eq!(f.from_i64(-1).to_string(), "4");
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(FieldSpec::prime(6).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let q = FieldSpec::Rationals;
        let x = q.from_ratio(3, 2);
        assert_eq!(x.reduce_mod(5).unwrap(), FieldSpec::prime(5).unwrap().from_i64(4));
        assert!(x.reduce_mod(2).is_none());
    }
}
