//! Exact rational scalars and the few combinatorial helpers the engine needs.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number. No floating point is used anywhere.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, `-p/q` or a plain integer. Denominators must be nonzero.
pub fn parse_rational(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) {
        return None;
    }
    let num = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).ok()?;
    let den = match den {
        Some(d) if valid(d, false) => BigInt::from_str(d).ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// Generalized binomial coefficient `C(top, k) = top (top-1) ... (top-k+1) / k!`,
/// valid for negative `top`.
pub fn binomial(top: i64, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k as i64 {
        acc = acc * int(top - i) / int(i + 1);
    }
    acc
}

pub fn factorial(k: u32) -> Scalar {
    (1..=k as i64).fold(Scalar::one(), |acc, i| acc * int(i))
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Formats a rational the way the definition files write it (`p/q` or `p`).
pub fn format_scalar(value: &Scalar) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn is_negative(value: &Scalar) -> bool {
    value.is_negative()
}

pub fn dot(xs: &[Scalar], ys: &[Scalar]) -> Scalar {
    xs.iter().zip(ys).map(|(x, y)| x * y).sum()
}

pub fn zeros(len: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); len]
}

pub fn unit_vector(len: usize, index: usize) -> Vec<Scalar> {
    let mut v = zeros(len);
    v[index] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("5"), Some(int(5)));
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("+2/4"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("1.5"), None);
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(-3, 2), int(6));
        assert_eq!(binomial(2, 3), int(0));
        assert_eq!(binomial(7, 0), int(1));
    }

    #[test]
    fn formats_like_the_file_grammar() {
        assert_eq!(format_scalar(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_scalar(&int(7)), "7");
        assert_eq!(parse_rational(&format_scalar(&ratio(22, 7))), Some(ratio(22, 7)));
    }
}
