//! Integer Laurent polynomials in `q`, used as the fast accumulator type in
//! the Harder-Narasimhan recursion before the final rational-function
//! reduction. Not part of the public API.

use num::{BigInt, One, Zero};

/// `sum coeffs[i] * q^(shift + i)`, with nonzero first and last coefficient
/// (the zero value is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZLaurent {
    pub(crate) shift: i64,
    pub(crate) coeffs: Vec<BigInt>,
}

impl ZLaurent {
    pub(crate) fn zero() -> Self {
        ZLaurent {
            shift: 0,
            coeffs: Vec::new(),
        }
    }

    pub(crate) fn one() -> Self {
        ZLaurent {
            shift: 0,
            coeffs: vec![BigInt::one()],
        }
    }

    /// `q^e`.
    pub(crate) fn q_pow(e: i64) -> Self {
        ZLaurent {
            shift: e,
            coeffs: vec![BigInt::one()],
        }
    }

    /// `q^j - 1` for `j >= 1`.
    pub(crate) fn q_pow_minus_one(j: u64) -> Self {
        let mut coeffs = vec![BigInt::zero(); j as usize + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[j as usize] = BigInt::one();
        ZLaurent { shift: 0, coeffs }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.shift += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.shift = 0;
        }
    }

    pub(crate) fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(rhs.shift);
        let hi = (self.shift + self.coeffs.len() as i64)
            .max(rhs.shift + rhs.coeffs.len() as i64);
        let mut coeffs = vec![BigInt::zero(); (hi - shift) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.shift - shift) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.shift - shift) as usize + i] += c;
        }
        let mut out = ZLaurent { shift, coeffs };
        out.normalize();
        out
    }

    pub(crate) fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut out = ZLaurent {
            shift: self.shift + rhs.shift,
            coeffs,
        };
        out.normalize();
        out
    }

    pub(crate) fn neg(&self) -> Self {
        ZLaurent {
            shift: self.shift,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        // (q^2 - 1)(q^{-1}) + 1 = q - q^{-1} + 1.
        let a = ZLaurent::q_pow_minus_one(2).mul(&ZLaurent::q_pow(-1));
        let b = a.add(&ZLaurent::one());
        assert_eq!(b.shift, -1);
        assert_eq!(
            b.coeffs,
            vec![BigInt::from(-1), BigInt::from(1), BigInt::from(1)]
        );
        assert!(b.add(&b.neg()).is_zero());
    }
}
