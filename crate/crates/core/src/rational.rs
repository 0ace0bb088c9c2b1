use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational with 128-bit numerator and denominator.
pub type Rational = Ratio<i128>;

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::Parse(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| err())?;
        let den: i128 = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = frac.len() as u32;
        if digits > 30 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let int_part: i128 = match int {
            "" | "-" | "+" => 0,
            _ => int.parse().map_err(|_| err())?,
        };
        let frac_part: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        let scale = 10i128.checked_pow(digits).ok_or_else(err)?;
        let magnitude = int_part
            .abs()
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(err)?;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    s.parse::<i128>().map(Rational::from_integer).map_err(|_| err())
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` or `p` when the denominator is one.
pub(crate) fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn lcm_i128(a: i128, b: i128) -> Option<i128> {
    use num_integer::Integer;
    (a / a.gcd(&b)).checked_mul(b)
}
