//! Serialization helpers: every exact value is written as a decimal string
//! (`"123"`) or a reduced fraction (`"-7/3"`), never as a json number.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serializer;

use crate::Rational;

pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

pub fn rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_to_string))
}

pub fn rational_opt<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&rational_to_string(q)),
        None => s.serialize_none(),
    }
}

pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn u128_str<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn u64_str<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Outcome of a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Violated,
    PreconditionsNotMet,
}

impl Verdict {
    pub fn from_checks(all_hold: bool) -> Self {
        if all_hold {
            Verdict::Verified
        } else {
            Verdict::Violated
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Violated => "violated",
            Verdict::PreconditionsNotMet => "preconditions-not-met",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_are_reduced_strings() {
        let q = Rational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(rational_to_string(&q), "-3/2");
        assert_eq!(rational_to_string(&Rational::from_integer(BigInt::from(7))), "7");
    }
}
