//! Exact rational scalars.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a rational.
pub fn sign_q(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

pub fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * q(i as i64))
}

pub fn inv_factorial(k: usize) -> Q {
    Q::one() / factorial(k)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseQError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    let s = s.trim();
    let bad = || ParseQError::Malformed(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ParseQError::ZeroDenominator(s.to_string()));
    }
    Ok(Q::new(n, d))
}

pub fn is_pm_one(x: &Q) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "3", "-2", "1/2", "-7/3"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(fmt_q(&parse_q("4/6").unwrap()), "2/3");
        assert!(matches!(parse_q("1/0"), Err(ParseQError::ZeroDenominator(_))));
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(5), q(120));
        assert_eq!(inv_factorial(3), frac(1, 6));
    }
}
