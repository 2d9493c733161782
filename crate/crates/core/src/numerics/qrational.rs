//! Reduced rational functions in `q`.
//!
//! A [`QRationalFunction`] is a ratio of two [`QPoly`] values kept in the
//! canonical form: numerator and denominator share no polynomial factor, the
//! denominator is monic and nonzero, and no negative powers of `q` remain
//! (Laurent inputs are cleared by multiplying both sides with a power of `q`).

use super::qpoly::QPoly;
use super::{BigRational, NumericsError};
use num::{One, Zero};
use std::fmt;

/// A reduced ratio of polynomials in `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRationalFunction {
    num: QPoly,
    den: QPoly,
}

impl QRationalFunction {
    /// Build and reduce `num / den`.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(QRationalFunction {
                num: QPoly::zero(),
                den: QPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let (mut num, r1) = num.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (mut den, r2) = den.div_rem(&g);
        debug_assert!(r2.is_zero());
        // Make the denominator monic, folding its leading coefficient into
        // the numerator.
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = BigRational::one() / lead;
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(QRationalFunction { num, den })
    }

    /// Build from Laurent data `(num, num_shift) / (den, den_shift)`, where a
    /// pair represents `poly * q^shift`. Negative powers are cleared before
    /// reduction.
    pub fn from_laurent(
        num: QPoly,
        num_shift: i64,
        den: QPoly,
        den_shift: i64,
    ) -> Result<Self, NumericsError> {
        let rel = num_shift - den_shift;
        if rel >= 0 {
            Self::new(num.shift_up(rel as usize), den)
        } else {
            Self::new(num, den.shift_up((-rel) as usize))
        }
    }

    /// The zero function.
    pub fn zero() -> Self {
        QRationalFunction {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        QRationalFunction {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// Return the underlying polynomial when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&QPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Self::new(num, den).expect("denominators are nonzero")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Self::new(num, den).expect("denominators are nonzero")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("denominators are nonzero")
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator nonzero")
    }

    /// Evaluate at a rational point; errors at poles.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational, NumericsError> {
        let den = self.den.eval(x);
        if den.is_zero() {
            if x.is_one() {
                return Err(NumericsError::PoleAtOne);
            }
            return Err(NumericsError::Pole {
                at: super::format_rat(x),
            });
        }
        Ok(self.num.eval(x) / den)
    }
}

impl fmt::Display for QRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Normalize raw Laurent fraction parts into a reduced [`QRationalFunction`].
///
/// This is the public entry point for callers holding raw coefficient arrays:
/// numerator and denominator are given lowest-degree-first together with a
/// power-of-`q` shift each (so `coeffs, shift` represents
/// `q^shift * sum coeffs[i] q^i`).
pub fn rf_normalize(
    num_coeffs: Vec<BigRational>,
    num_shift: i64,
    den_coeffs: Vec<BigRational>,
    den_shift: i64,
) -> Result<QRationalFunction, NumericsError> {
    QRationalFunction::from_laurent(
        QPoly::from_coeffs(num_coeffs),
        num_shift,
        QPoly::from_coeffs(den_coeffs),
        den_shift,
    )
}

/// Evaluate a reduced rational function at `q = 1`.
///
/// Because the fraction is reduced, a vanishing denominator at 1 is a genuine
/// pole and is reported as [`NumericsError::PoleAtOne`].
pub fn rf_eval_at_one(rf: &QRationalFunction) -> Result<BigRational, NumericsError> {
    rf.eval(&BigRational::one())
}
