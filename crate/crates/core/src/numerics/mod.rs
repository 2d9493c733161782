//! Exact scalar and univariate arithmetic: big rationals, dense polynomials
//! in `q`, reduced rational functions in `q`, and small number-theoretic
//! helpers (generalized binomials, Moebius function, divisors).
//!
//! Rationals are [`num::BigRational`] (always reduced, denominator positive).
//! They serialize as `"num/den"` strings, with the `/den` part omitted for
//! integers; see [`format_rat`] and [`parse_rat`].

mod qpoly;
mod qrational;
pub(crate) mod zlaurent;

pub use num::BigRational;
pub use qpoly::QPoly;
pub use qrational::{rf_eval_at_one, rf_normalize, QRationalFunction};

use num::bigint::Sign;
use num::{BigInt, One, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Errors produced by scalar and rational-function arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericsError {
    /// A rational function was constructed with a zero denominator.
    #[error("division by zero: rational function denominator is the zero polynomial")]
    DivisionByZero,
    /// Evaluation of a reduced rational function hit a root of the denominator.
    #[error("pole-at-one: denominator vanishes at q = 1")]
    PoleAtOne,
    /// Evaluation of a reduced rational function hit a root of the denominator
    /// at a point other than 1.
    #[error("pole: denominator vanishes at q = {at}")]
    Pole { at: String },
    /// A string did not parse as a `num/den` rational.
    #[error("malformed rational literal: {text:?}")]
    BadRational { text: String },
}

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integer-valued rational from a machine integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Format a rational as `num/den`, or just `num` when the denominator is 1.
pub fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a rational from `num` or `num/den` form.
pub fn parse_rat(text: &str) -> Result<BigRational, NumericsError> {
    let bad = || NumericsError::BadRational {
        text: text.to_string(),
    };
    match text.split_once('/') {
        None => {
            let n = BigInt::from_str(text.trim()).map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Factorial as a big integer.
pub fn factorial(k: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=k {
        out *= BigInt::from(i);
    }
    out
}

/// Generalized binomial coefficient `C(r, k) = r(r-1)...(r-k+1) / k!` for a
/// rational upper argument.
pub fn binom_general(r: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k {
        num *= r - rat_int(i as i64);
    }
    num / BigRational::from_integer(factorial(k))
}

/// Binomial coefficient `C(n, k)` for an arbitrary (possibly negative)
/// integer upper argument. Always an integer; uses the reflection
/// `C(n, k) = (-1)^k C(k - n - 1, k)` for negative `n`.
pub fn binom_int(n: &BigInt, k: u64) -> BigInt {
    if n.sign() == Sign::Minus {
        let reflected = BigInt::from(k) - n - 1;
        let v = binom_nonneg(&reflected, k);
        if k % 2 == 0 {
            v
        } else {
            -v
        }
    } else {
        binom_nonneg(n, k)
    }
}

fn binom_nonneg(n: &BigInt, k: u64) -> BigInt {
    if BigInt::from(k) > *n {
        return BigInt::zero();
    }
    // Incremental exact form: C(n, i) = C(n, i-1) * (n - i + 1) / i.
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * (n - BigInt::from(i - 1)) / BigInt::from(i);
    }
    acc
}

/// Convenience wrapper for machine-integer arguments.
pub fn binom_i64(n: i64, k: u64) -> BigInt {
    binom_int(&BigInt::from(n), k)
}

/// Moebius function `mu(n)`: 0 when a square divides `n`, otherwise
/// `(-1)^(number of prime factors)`.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut remaining = n;
    let mut factors = 0u32;
    let mut p = 2u64;
    while p * p <= remaining {
        if remaining % p == 0 {
            remaining /= p;
            factors += 1;
            if remaining % p == 0 {
                return 0;
            }
        }
        p += 1;
    }
    if remaining > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `(-1)^e` for a possibly negative integer exponent.
pub fn neg_one_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
