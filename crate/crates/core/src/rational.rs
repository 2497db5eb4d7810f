//! Exact rational scalars and a few integer helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"<int>"` or `"<int>/<nat>"` (optional leading sign, no whitespace
/// inside). Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix(['-', '+']).unwrap_or(num);
    if !digits(unsigned) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    match den {
        None => Some(Rational::from_integer(num)),
        Some(d) if digits(d) => {
            let den: BigInt = d.parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rational::new(num, den))
            }
        }
        Some(_) => None,
    }
}

/// `"<num>/<den>"`, denominator always printed.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double; `None` for NaN or infinities.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Ordinary falling factorial `m (m-1) ... (m-l+1)` of a nonnegative integer.
pub fn falling_factorial_int(m: u64, l: u32) -> BigInt {
    (0..l as u64).fold(BigInt::one(), |acc, i| {
        if i > m {
            BigInt::zero()
        } else {
            acc * BigInt::from(m - i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("4/6"), Some(rat(2, 3)));
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn fraction_string_keeps_denominator() {
        assert_eq!(fraction_string(&int(0)), "0/1");
        assert_eq!(fraction_string(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn integer_helpers() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(falling_factorial_int(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial_int(2, 3), BigInt::zero());
        assert_eq!(falling_factorial_int(0, 0), BigInt::one());
    }
}
