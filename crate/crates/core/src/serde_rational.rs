//! Serialize exact rationals as `"numer/denom"` strings.

use serde::Serializer;

use crate::quantity::{format_rational, Rational};

pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

pub fn serialize_vec<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(format_rational))
}
