//! Exact rational payoffs and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Payoffs, fees and transfers are all exact;
/// only the dynamics simulators convert to floating point.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used at the dynamics boundary.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"`, or a plain integer string into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::input(format!("invalid rational numerator in {s:?}")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::input(format!("invalid rational denominator in {s:?}")))?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` when the denominator is 1, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serializes a rational as a JSON number when it is an i64-sized integer,
/// falling back to the `p/q` string form otherwise.
pub fn rational_to_json(r: &Rational) -> serde_json::Value {
    if r.denom() == &BigInt::from(1) {
        if let Some(i) = r.numer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::String(format_rational(r))
}

/// Reads a rational from its JSON form: an integer number or a `p/q` string.
/// Fractional floats are rejected so that no silent binary-to-decimal
/// conversion slips exact values.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else if let Some(f) = n.as_f64() {
                if f.fract() == 0.0 && f.abs() < 2f64.powi(53) {
                    Ok(Rational::from_integer(BigInt::from(f as i64)))
                } else {
                    Err(Error::input(format!(
                        "non-integer number {f}; write exact values as \"p/q\" strings"
                    )))
                }
            } else {
                Err(Error::input("unreadable JSON number".to_string()))
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::input(format!(
            "expected number or \"p/q\" string, got {other}"
        ))),
    }
}

/// Max absolute value over a slice of rationals; zero for an empty slice.
pub fn max_abs<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    let mut best = Rational::zero();
    for v in values {
        let a = v.abs();
        if a > best {
            best = a;
        }
    }
    best
}
