//! Fixed-point quantities and exact rationals.
//!
//! Every weight that enters the solver is an integer multiple of a quantum
//! `2^-B`. Costs are ratios of such sums, so the quantum cancels and all
//! comparisons inside the solver are exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::QuantityError;

/// Exact rational used for costs, thresholds and the potential scale α.
pub type Rational = BigRational;

/// Default number of fractional bits.
pub const DEFAULT_QUANT_BITS: u32 = 32;

/// Largest supported number of fractional bits.
pub const MAX_QUANT_BITS: u32 = 48;

/// A fixed-point value: `raw / 2^B`, with `B` carried by the owning graph or tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Quantity(i64);

impl Quantity {
    pub const ZERO: Quantity = Quantity(0);

    #[inline]
    pub const fn from_raw(raw: i64) -> Self {
        Quantity(raw)
    }

    #[inline]
    pub const fn raw(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// The exact value `raw / 2^bits`.
    pub fn to_rational(self, bits: u32) -> Rational {
        Rational::new(BigInt::from(self.0), BigInt::one() << bits)
    }

    pub fn to_f64(self, bits: u32) -> f64 {
        self.0 as f64 / (1u64 << bits) as f64
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}q", self.0)
    }
}

/// Rounds real inputs onto the `2^-bits` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantizer {
    bits: u32,
}

impl Default for Quantizer {
    fn default() -> Self {
        Quantizer { bits: DEFAULT_QUANT_BITS }
    }
}

impl Quantizer {
    pub fn new(bits: u32) -> Result<Self, QuantityError> {
        if bits > MAX_QUANT_BITS {
            return Err(QuantityError::TooManyBits(bits));
        }
        Ok(Quantizer { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Round half up onto the grid. Positive inputs never round to zero.
    pub fn quantize(self, x: f64) -> Result<Quantity, QuantityError> {
        if !x.is_finite() {
            return Err(QuantityError::NotFinite(x));
        }
        let scaled = x * (1u64 << self.bits) as f64;
        let rounded = (scaled + 0.5).floor();
        if rounded.abs() >= i64::MAX as f64 / 4.0 {
            return Err(QuantityError::OutOfRange(x));
        }
        let mut raw = rounded as i64;
        if x > 0.0 && raw < 1 {
            raw = 1;
        }
        Ok(Quantity(raw))
    }
}

/// Parse a decimal (`0.25`, `-3`, `1e-3`) or fraction (`7/20`) literal exactly.
pub fn parse_rational(text: &str) -> Result<Rational, QuantityError> {
    let s = text.trim();
    let bad = || QuantityError::Parse(text.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    if scale.abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Nearest dyadic rational `m / 2^bits` (round half up).
pub fn rational_from_f64(x: f64, bits: u32) -> Result<Rational, QuantityError> {
    let q = Quantizer::new(bits)?;
    if !x.is_finite() {
        return Err(QuantityError::NotFinite(x));
    }
    let raw = (x * (1u64 << q.bits()) as f64 + 0.5).floor();
    if raw.abs() >= i64::MAX as f64 / 4.0 {
        return Err(QuantityError::OutOfRange(x));
    }
    Ok(Quantity::from_raw(raw as i64).to_rational(bits))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `numer/denom`, with sign, as a plain string (`"3/14"`, `"2"`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest `t ≥ 0` with `2^t ≥ x`, for positive `x`; `0` for `x ≤ 1`.
pub fn ceil_log2(x: &Rational) -> u64 {
    if *x <= Rational::one() {
        return 0;
    }
    let floor = x.to_integer();
    let bits = floor.bits();
    // 2^(bits-1) ≤ floor(x) < 2^bits
    let lower = Rational::from_integer(BigInt::one() << (bits - 1));
    if *x == lower {
        bits - 1
    } else {
        bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn positive_inputs_never_vanish() {
        let qz = Quantizer::new(8).unwrap();
        assert_eq!(qz.quantize(1e-12).unwrap().raw(), 1);
        assert_eq!(qz.quantize(0.0).unwrap().raw(), 0);
        assert_eq!(qz.quantize(1.0).unwrap().raw(), 256);
        // half up
        assert_eq!(qz.quantize(0.5 / 256.0).unwrap().raw(), 1);
        assert_eq!(qz.quantize(1.5 / 256.0).unwrap().raw(), 2);
    }

    #[test]
    fn too_many_bits() {
        assert!(Quantizer::new(MAX_QUANT_BITS + 1).is_err());
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("7/20").unwrap(), q(7, 20));
        assert_eq!(parse_rational("-2.50").unwrap(), q(-5, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn ceil_log2_cases() {
        assert_eq!(ceil_log2(&q(88, 1)), 7);
        assert_eq!(ceil_log2(&q(4, 1)), 2);
        assert_eq!(ceil_log2(&q(64, 1)), 6);
        assert_eq!(ceil_log2(&q(65, 1)), 7);
        assert_eq!(ceil_log2(&q(129, 2)), 7);
        assert_eq!(ceil_log2(&q(1, 3)), 0);
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&q(2, 28)), "1/14");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }

    proptest! {
        #[test]
        fn quantization_is_monotone(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let qz = Quantizer::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(qz.quantize(lo).unwrap() <= qz.quantize(hi).unwrap());
        }

        #[test]
        fn ceil_log2_brackets(n in 1u64..1_000_000, d in 1u64..1000) {
            let x = Rational::new(n.into(), d.into());
            let t = ceil_log2(&x);
            let two_t = Rational::from_integer(BigInt::one() << t);
            prop_assert!(two_t >= x);
            if t > 0 {
                let prev = Rational::from_integer(BigInt::one() << (t - 1));
                prop_assert!(prev < x);
            }
        }
    }
}
