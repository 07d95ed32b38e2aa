use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::NsError;

/// Coefficient field. Elements are carried as [`BigRational`]s; in a prime
/// field they are kept as canonical residues `0..p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, NsError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(NsError::NotPrime(p))
        }
    }

    /// Re-checks the primality of a deserialized field.
    pub fn validated(self) -> Result<Self, NsError> {
        match self {
            FieldSpec::Prime(p) => Self::prime(p),
            FieldSpec::Rationals => Ok(self),
        }
    }

    /// Maps a rational into the field.
    pub fn normalize(&self, x: &BigRational) -> Result<BigRational, NsError> {
        match *self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(NsError::NotRepresentable(format!("{x} has no value mod {p}")));
                }
                let inv = den.modpow(&(&p - 2), &p);
                let num = x.numer().mod_floor(&p);
                Ok(BigRational::from_integer((num * inv) % &p))
            }
        }
    }

    fn reduce(&self, x: BigRational) -> BigRational {
        match *self {
            FieldSpec::Rationals => x,
            FieldSpec::Prime(p) => {
                // operands are already residues, so the result is an integer
                BigRational::from_integer(x.to_integer().mod_floor(&BigInt::from(p)))
            }
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    pub fn parse(&self, text: &str) -> Result<BigRational, NsError> {
        let text = text.trim();
        let value = BigRational::from_str(text)
            .map_err(|_| NsError::Format(format!("bad coefficient `{text}`")))?;
        self.normalize(&value)
    }

    /// Decimal form; prime-field residues are printed in the symmetric range.
    pub fn render(&self, a: &BigRational) -> String {
        match *self {
            FieldSpec::Rationals => a.to_string(),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(p);
                let v = a.to_integer();
                if &v * 2 > p {
                    (v - p).to_string()
                } else {
                    v.to_string()
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F{p}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = NsError;

    /// Accepts a prime (`"5"`, `"F5"`) or `"Q"`/`"rationals"`.
    fn from_str(s: &str) -> Result<Self, NsError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t.strip_prefix(['F', 'f']).unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| NsError::Format(format!("unknown field `{s}`")))?;
        FieldSpec::prime(p)
    }
}
