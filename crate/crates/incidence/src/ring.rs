//! Exact arithmetic in a pluggable commutative ring with unity.
//!
//! Three rings are supported: the integers, the integers modulo `n`
//! (`n >= 2`, zero divisors allowed), and the rationals. Values are kept
//! in canonical form at all times so structural equality coincides with
//! ring equality: integers are arbitrary precision, modular values are
//! residues in `[0, n)`, rationals are reduced fractions with positive
//! denominator.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifies which ring a [`RingValue`] lives in.
///
/// All arithmetic goes through the descriptor; mixing a value from one
/// ring with a descriptor of another kind panics, since it is a
/// programming error rather than a recoverable condition. Use
/// [`RingDescriptor::validate`] on untrusted input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDescriptor {
    Integer,
    Modular { modulus: u64 },
    Rational,
}

/// An element of one of the supported rings, stored canonically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingValue {
    Integer(BigInt),
    Modular(u64),
    Rational(BigRational),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus {0} is invalid: a modular ring needs modulus >= 2")]
    InvalidModulus(u64),
    #[error("value {value} does not belong to ring {ring}")]
    DescriptorMismatch { ring: String, value: String },
    #[error("cannot parse `{text}` as an element of {ring}")]
    Parse { ring: String, text: String },
}

impl std::fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingDescriptor::Integer => write!(f, "integer"),
            RingDescriptor::Modular { modulus } => write!(f, "modular:{modulus}"),
            RingDescriptor::Rational => write!(f, "rational"),
        }
    }
}

impl RingDescriptor {
    /// Builds a modular descriptor, rejecting moduli below 2.
    pub fn modular(modulus: u64) -> Result<Self, RingError> {
        if modulus < 2 {
            return Err(RingError::InvalidModulus(modulus));
        }
        Ok(RingDescriptor::Modular { modulus })
    }

    pub fn zero(&self) -> RingValue {
        match self {
            RingDescriptor::Integer => RingValue::Integer(BigInt::zero()),
            RingDescriptor::Modular { .. } => RingValue::Modular(0),
            RingDescriptor::Rational => RingValue::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> RingValue {
        match self {
            RingDescriptor::Integer => RingValue::Integer(BigInt::one()),
            RingDescriptor::Modular { .. } => RingValue::Modular(1),
            RingDescriptor::Rational => RingValue::Rational(BigRational::one()),
        }
    }

    /// Maps the integer `k` to `k * 1` in this ring.
    pub fn from_integer(&self, k: i64) -> RingValue {
        match self {
            RingDescriptor::Integer => RingValue::Integer(BigInt::from(k)),
            RingDescriptor::Modular { modulus } => {
                let n = *modulus as i128;
                let r = ((k as i128 % n) + n) % n;
                RingValue::Modular(r as u64)
            }
            RingDescriptor::Rational => RingValue::Rational(BigRational::from(BigInt::from(k))),
        }
    }

    pub fn add(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (RingDescriptor::Integer, RingValue::Integer(x), RingValue::Integer(y)) => {
                RingValue::Integer(x + y)
            }
            (RingDescriptor::Modular { modulus }, RingValue::Modular(x), RingValue::Modular(y)) => {
                RingValue::Modular(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (RingDescriptor::Rational, RingValue::Rational(x), RingValue::Rational(y)) => {
                RingValue::Rational(x + y)
            }
            _ => self.mismatch(a, b),
        }
    }

    pub fn mul(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (RingDescriptor::Integer, RingValue::Integer(x), RingValue::Integer(y)) => {
                RingValue::Integer(x * y)
            }
            (RingDescriptor::Modular { modulus }, RingValue::Modular(x), RingValue::Modular(y)) => {
                RingValue::Modular(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            (RingDescriptor::Rational, RingValue::Rational(x), RingValue::Rational(y)) => {
                RingValue::Rational(x * y)
            }
            _ => self.mismatch(a, b),
        }
    }

    pub fn neg(&self, a: &RingValue) -> RingValue {
        match (self, a) {
            (RingDescriptor::Integer, RingValue::Integer(x)) => RingValue::Integer(-x),
            (RingDescriptor::Modular { modulus }, RingValue::Modular(x)) => {
                RingValue::Modular(if *x == 0 { 0 } else { modulus - x })
            }
            (RingDescriptor::Rational, RingValue::Rational(x)) => RingValue::Rational(-x),
            _ => self.mismatch(a, a),
        }
    }

    pub fn sub(&self, a: &RingValue, b: &RingValue) -> RingValue {
        self.add(a, &self.neg(b))
    }

    /// Structural equality; canonical form makes it ring equality.
    pub fn eq(&self, a: &RingValue, b: &RingValue) -> bool {
        a == b
    }

    pub fn is_zero(&self, a: &RingValue) -> bool {
        match a {
            RingValue::Integer(x) => x.is_zero(),
            RingValue::Modular(x) => *x == 0,
            RingValue::Rational(x) => x.is_zero(),
        }
    }

    /// Re-canonicalizes a value: reduces modular residues and rational
    /// fractions. Values produced by this module are already canonical,
    /// so this is idempotent.
    pub fn canonicalize(&self, a: &RingValue) -> RingValue {
        match (self, a) {
            (RingDescriptor::Integer, RingValue::Integer(x)) => RingValue::Integer(x.clone()),
            (RingDescriptor::Modular { modulus }, RingValue::Modular(x)) => {
                RingValue::Modular(x % modulus)
            }
            (RingDescriptor::Rational, RingValue::Rational(x)) => {
                RingValue::Rational(BigRational::new(x.numer().clone(), x.denom().clone()))
            }
            _ => self.mismatch(a, a),
        }
    }

    /// Checks that a value belongs to this ring and is canonical.
    pub fn validate(&self, a: &RingValue) -> Result<(), RingError> {
        let ok = match (self, a) {
            (RingDescriptor::Integer, RingValue::Integer(_)) => true,
            (RingDescriptor::Modular { modulus }, RingValue::Modular(x)) => x < modulus,
            (RingDescriptor::Rational, RingValue::Rational(x)) => {
                x.denom().is_positive()
                    && x.numer().gcd(x.denom()).is_one()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(RingError::DescriptorMismatch {
                ring: self.to_string(),
                value: self.debug_value(a),
            })
        }
    }

    /// Text form: signed decimal for integers and modular residues,
    /// `p/q` for rationals.
    pub fn format(&self, a: &RingValue) -> String {
        match a {
            RingValue::Integer(x) => x.to_string(),
            RingValue::Modular(x) => x.to_string(),
            RingValue::Rational(x) => format!("{}/{}", x.numer(), x.denom()),
        }
    }

    /// Parses the text form. Modular input accepts any signed decimal and
    /// reduces it; rational input accepts `p/q` or a bare integer.
    pub fn parse(&self, text: &str) -> Result<RingValue, RingError> {
        let err = || RingError::Parse {
            ring: self.to_string(),
            text: text.to_string(),
        };
        let text = text.trim();
        match self {
            RingDescriptor::Integer => {
                let x: BigInt = text.parse().map_err(|_| err())?;
                Ok(RingValue::Integer(x))
            }
            RingDescriptor::Modular { modulus } => {
                let x: BigInt = text.parse().map_err(|_| err())?;
                let n = BigInt::from(*modulus);
                let r = ((x % &n) + &n) % &n;
                let (_, digits) = r.to_u64_digits();
                Ok(RingValue::Modular(digits.first().copied().unwrap_or(0)))
            }
            RingDescriptor::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| err())?;
                let den: BigInt = den.parse().map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(RingValue::Rational(BigRational::new(num, den)))
            }
        }
    }

    fn debug_value(&self, a: &RingValue) -> String {
        match a {
            RingValue::Integer(x) => format!("integer {x}"),
            RingValue::Modular(x) => format!("residue {x}"),
            RingValue::Rational(x) => format!("rational {x}"),
        }
    }

    fn mismatch(&self, a: &RingValue, b: &RingValue) -> ! {
        panic!(
            "ring value mismatch: descriptor {self}, operands {} and {}",
            self.debug_value(a),
            self.debug_value(b)
        )
    }
}
