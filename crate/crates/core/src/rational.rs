//! Exact rational arithmetic and fixed-point decimal rendering.
//!
//! Every probability and expected value in this crate is a `Rational`;
//! floating point only ever appears at display and export time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator (enforced by `num_rational`).
pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// Render `x` as a decimal string with `places` fractional digits,
/// rounding half away from zero.
pub fn rational_round(x: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let abs = x.abs();
    // floor((|x| * scale * 2 + 1) adjusted) == round-half-up on |x|
    let num = abs.numer() * &scale * 2u32 + abs.denom();
    let rounded: BigInt = num.div_floor(&(abs.denom() * 2u32));
    let digits = rounded.to_string();
    let mut out = String::new();
    if x.is_negative() && !rounded.is_zero() {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    let places = places as usize;
    if digits.len() <= places {
        out.push_str("0.");
        out.push_str(&"0".repeat(places - digits.len()));
        out.push_str(&digits);
    } else {
        let split = digits.len() - places;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}
