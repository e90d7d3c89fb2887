//! Exact rational scalars and their canonical string form.
//!
//! All algebraic results in this crate are carried by [`Rational`]
//! (arbitrary-precision, always reduced, denominator positive). The
//! canonical text form is `p/q` with the denominator omitted when it is 1,
//! e.g. `-5/3`, `40`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced arbitrary-precision rational number.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a plain integer.
pub fn rat_int(num: i64) -> Rational {
    BigRational::from_integer(BigInt::from(num))
}

/// Canonical string form: `p` when the denominator is 1, else `p/q`.
pub fn rational_to_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-0.25` into an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty rational literal".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = int_part.trim_start_matches(['+', '-']);
        let int_val: BigUint = if int_digits.is_empty() {
            BigUint::zero()
        } else {
            int_digits
                .parse()
                .map_err(|_| format!("bad integer part in {s:?}"))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad fractional part in {s:?}"));
        }
        let frac_val: BigUint = frac_part
            .parse()
            .map_err(|_| format!("bad fractional part in {s:?}"))?;
        let scale = BigUint::from(10u32).pow(frac_part.len() as u32);
        let mut num = BigInt::from(int_val * &scale + frac_val);
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, BigInt::from(scale)));
    }
    let num: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(BigRational::from_integer(num))
}

/// Nearest `f64` to the rational (for hand-offs to the numerical engine).
pub fn rational_to_f64(value: &Rational) -> f64 {
    // Good to a ulp for the magnitudes used here.
    let num = value.numer();
    let den = value.denom();
    let fnum = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let fden = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
    fnum / fden
}

/// Floor square root test: returns `Some(r)` when `n = r^2` exactly.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(rational_to_string(&rat(40, 1)), "40");
        assert_eq!(rational_to_string(&rat(-5, 3)), "-5/3");
        assert_eq!(rational_to_string(&rat(10, -4)), "-5/2");
        assert_eq!(rational_to_string(&rat(0, 7)), "0");
    }

    #[test]
    fn parse_round_trip() {
        for text in ["40", "-5/3", "125/108", "0", "-22/5"] {
            let v = parse_rational(text).unwrap();
            assert_eq!(rational_to_string(&v), text);
        }
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn sqrt_detection() {
        assert_eq!(exact_sqrt(&BigInt::from(49)), Some(BigInt::from(7)));
        assert_eq!(exact_sqrt(&BigInt::from(48)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        assert_eq!(exact_sqrt(&BigInt::from(0)), Some(BigInt::from(0)));
    }
}
