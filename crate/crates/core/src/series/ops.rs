//! Ring operations and transcendental functions on truncated series.
//!
//! Multiplication accumulates into a hash map keyed by the packed monomial
//! and re-sorts, skipping any product pair whose combined adic order exceeds
//! the result truncation. Inverses use Newton iteration with doubling
//! precision; `log`/`exp` sum the usual power series in `u = f - 1` (resp.
//! `u = f`), which terminates after `order / min_order(u)` powers; integer
//! powers of series with constant term 1 expand through generalized binomial
//! coefficients so that negative exponents need no explicit inversion.

use super::{Key, SeriesContext, SeriesError, TruncatedSeries};
use crate::numerics::{binom_int, factorial, BigRational};
use num::{BigInt, One, Signed, Zero};
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

impl TruncatedSeries {
    /// Lower the truncation order (no-op if `order` is not smaller).
    pub fn truncated(&self, order: u32) -> TruncatedSeries {
        if order >= self.order {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| SeriesContext::order_of(*k) <= order)
            .cloned()
            .collect();
        TruncatedSeries {
            context: self.context.clone(),
            order,
            terms,
        }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> TruncatedSeries {
        if c.is_zero() {
            return TruncatedSeries {
                context: self.context.clone(),
                order: self.order,
                terms: Vec::new(),
            };
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        TruncatedSeries {
            context: self.context.clone(),
            order: self.order,
            terms,
        }
    }

    /// Add `c` to the constant term.
    pub fn add_constant(&self, c: &BigRational) -> TruncatedSeries {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        match out.terms.first_mut() {
            Some((0, v)) => {
                *v += c;
                if v.is_zero() {
                    out.terms.remove(0);
                }
            }
            _ => out.terms.insert(0, (0, c.clone())),
        }
        out
    }

    fn merge(&self, rhs: &TruncatedSeries, rhs_sign: i32) -> TruncatedSeries {
        self.assert_same_context(rhs);
        let order = self.order.min(rhs.order);
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let take_left = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some((ka, _)), Some((kb, _))) => ka <= kb,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            let (k, c) = if take_left {
                let (k, c) = &self.terms[i];
                i += 1;
                if j < rhs.terms.len() && rhs.terms[j].0 == *k {
                    let (_, cb) = &rhs.terms[j];
                    j += 1;
                    let s = if rhs_sign >= 0 { c + cb } else { c - cb };
                    (*k, s)
                } else {
                    (*k, c.clone())
                }
            } else {
                let (k, c) = &rhs.terms[j];
                j += 1;
                (*k, if rhs_sign >= 0 { c.clone() } else { -c })
            };
            if !c.is_zero() && SeriesContext::order_of(k) <= order {
                terms.push((k, c));
            }
        }
        TruncatedSeries {
            context: self.context.clone(),
            order,
            terms,
        }
    }

    fn mul_impl(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_same_context(rhs);
        let order = self.order.min(rhs.order);
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return TruncatedSeries {
                context: self.context.clone(),
                order,
                terms: Vec::new(),
            };
        }
        // Sort the shorter factor's terms by adic order so the inner loop can
        // stop as soon as the truncation budget is exhausted.
        let (outer, inner) = if self.terms.len() <= rhs.terms.len() {
            (rhs, self)
        } else {
            (self, rhs)
        };
        let mut inner_by_order: Vec<(u32, Key, &BigRational)> = inner
            .terms
            .iter()
            .map(|(k, c)| (SeriesContext::order_of(*k), *k, c))
            .collect();
        inner_by_order.sort_by_key(|(o, k, _)| (*o, *k));
        let mut acc: HashMap<Key, BigRational> = HashMap::with_capacity(outer.terms.len() * 2);
        for (ka, ca) in &outer.terms {
            let budget = order.saturating_sub(SeriesContext::order_of(*ka));
            for (ob, kb, cb) in &inner_by_order {
                if *ob > budget {
                    break;
                }
                let prod = ca * *cb;
                let key = ka + kb;
                match acc.get_mut(&key) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        let mut terms: Vec<(Key, BigRational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|(k, _)| *k);
        TruncatedSeries {
            context: self.context.clone(),
            order,
            terms,
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<TruncatedSeries, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let mut g = TruncatedSeries::constant(self.context.clone(), 0, c0.recip())
            .expect("order 0 is valid");
        let mut reached = 0u32;
        while reached < self.order {
            reached = (2 * reached + 1).min(self.order);
            let f = self.truncated(reached);
            g.order = reached;
            // g <- g * (2 - f * g), doubling the count of correct orders.
            let fg = f.mul_impl(&g);
            let two_minus = fg
                .scale(&BigRational::from_integer(BigInt::from(-1)))
                .add_constant(&BigRational::from_integer(BigInt::from(2)));
            g = g.mul_impl(&two_minus);
        }
        Ok(g)
    }

    /// Natural logarithm; requires constant term 1.
    pub fn log(&self) -> Result<TruncatedSeries, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::LogConstant(self.constant_term().to_string()));
        }
        let u = self.add_constant(&-BigRational::one());
        let Some(m) = u.min_nonconstant_order() else {
            return TruncatedSeries::zero(self.context.clone(), self.order);
        };
        let jmax = self.order / m;
        let mut acc = u.clone();
        let mut pw = u.clone();
        for j in 2..=jmax {
            pw = pw.mul_impl(&u);
            let sign = if j % 2 == 0 { -1 } else { 1 };
            let coeff = BigRational::new(BigInt::from(sign), BigInt::from(j));
            acc = acc.merge(&pw.scale(&coeff), 1);
        }
        Ok(acc)
    }

    /// Exponential; requires constant term 0.
    pub fn exp(&self) -> Result<TruncatedSeries, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ExpConstant(self.constant_term().to_string()));
        }
        let one = TruncatedSeries::one(self.context.clone(), self.order).expect("order checked");
        let Some(m) = self.min_nonconstant_order() else {
            return Ok(one);
        };
        let jmax = self.order / m;
        let mut acc = one.merge(self, 1);
        let mut pw = self.clone();
        for j in 2..=jmax {
            pw = pw.mul_impl(self);
            let coeff = BigRational::new(BigInt::one(), factorial(j as u64));
            acc = acc.merge(&pw.scale(&coeff), 1);
        }
        Ok(acc)
    }

    /// Integer power. Series with constant term 1 expand binomially (valid
    /// for negative exponents); otherwise positive exponents use
    /// square-and-multiply and negative exponents invert first.
    pub fn pow_int(&self, e: i64) -> Result<TruncatedSeries, SeriesError> {
        if e == 0 {
            return TruncatedSeries::one(self.context.clone(), self.order);
        }
        if self.constant_term().is_one() {
            let u = self.add_constant(&-BigRational::one());
            let Some(m) = u.min_nonconstant_order() else {
                return TruncatedSeries::one(self.context.clone(), self.order);
            };
            let jmax = self.order / m;
            let mut acc =
                TruncatedSeries::one(self.context.clone(), self.order).expect("order checked");
            let mut pw =
                TruncatedSeries::one(self.context.clone(), self.order).expect("order checked");
            let e_big = BigInt::from(e);
            for j in 1..=jmax {
                pw = pw.mul_impl(&u);
                let c = BigRational::from_integer(binom_int(&e_big, j as u64));
                if !c.is_zero() {
                    acc = acc.merge(&pw.scale(&c), 1);
                }
            }
            return Ok(acc);
        }
        if e < 0 {
            return self.inverse()?.pow_int(-e);
        }
        let mut base = self.clone();
        let mut exp = e as u64;
        let mut acc = TruncatedSeries::one(self.context.clone(), self.order).expect("order ok");
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_impl(&base);
            }
        }
        Ok(acc)
    }

    /// Rational power via `exp(r * log f)`; requires constant term 1.
    pub fn pow_rational(&self, r: &BigRational) -> Result<TruncatedSeries, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::PowConstant(self.constant_term().to_string()));
        }
        if r.is_integer() && r.abs() <= BigRational::from_integer(BigInt::from(i64::MAX)) {
            let e: i64 = r.to_integer().try_into().expect("checked range");
            return self.pow_int(e);
        }
        self.log()?.scale(r).exp()
    }

    /// Keep the constant term plus every monomial whose bidegree is a
    /// positive multiple of `(a, b)`.
    pub fn slope_component(&self, a: u32, b: u32) -> Result<TruncatedSeries, SeriesError> {
        if a == 0 && b == 0 {
            return Err(SeriesError::ZeroDirection);
        }
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| {
                if *k == 0 {
                    return true;
                }
                let (p, q) = self.context.bidegree_of(*k);
                multiple_of_slope(p, q, a, b).is_some()
            })
            .cloned()
            .collect();
        Ok(TruncatedSeries {
            context: self.context.clone(),
            order: self.order,
            terms,
        })
    }

    /// Substitute every variable by `t` (requires all weights 1) on a series
    /// supported on the slope `(a, b)`: the monomials of `x`-degree `ka` and
    /// `y`-degree `kb` collapse to `t^{k(a+b)}`, and the returned vector
    /// lists the coefficient of each `k = 0, 1, ..., order / (a + b)`.
    pub fn specialize_diagonal(&self, a: u32, b: u32) -> Result<Vec<BigRational>, SeriesError> {
        if a == 0 && b == 0 {
            return Err(SeriesError::ZeroDirection);
        }
        if self.context.vars().iter().any(|v| v.weight != 1) {
            return Err(SeriesError::WeightedSpecialization);
        }
        let kmax = (self.order / (a + b)) as usize;
        let mut out = vec![BigRational::zero(); kmax + 1];
        for (key, c) in &self.terms {
            if *key == 0 {
                out[0] += c;
                continue;
            }
            let (p, q) = self.context.bidegree_of(*key);
            let Some(k) = multiple_of_slope(p, q, a, b) else {
                return Err(SeriesError::UnsupportedMonomial(
                    self.context.monomial_text(*key),
                    p,
                    q,
                ));
            };
            // Weight-1 variables mean the adic order equals p + q = k(a+b),
            // so k is inside the truncation range by construction.
            out[k as usize] += c;
        }
        Ok(out)
    }
}

/// If `(p, q) = k (a, b)` for an integer `k >= 1`, return `k`.
fn multiple_of_slope(p: u32, q: u32, a: u32, b: u32) -> Option<u32> {
    let k = if a != 0 {
        if p % a != 0 {
            return None;
        }
        p / a
    } else {
        if p != 0 || b == 0 || q % b != 0 {
            return None;
        }
        q / b
    };
    if k >= 1 && p == k * a && q == k * b {
        Some(k)
    } else {
        None
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.merge(rhs, 1)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.merge(rhs, -1)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&BigRational::from_integer(BigInt::from(-1)))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.mul_impl(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};
    use crate::series::{Axis, Monomial};
    use std::sync::Arc;

    fn univar() -> (Arc<SeriesContext>, TruncatedSeries) {
        let ctx = SeriesContext::univariate("t", Axis::X);
        let t = TruncatedSeries::monomial(ctx.clone(), 10, &Monomial::new(vec![1]), rat_int(1))
            .unwrap();
        (ctx, t)
    }

    #[test]
    fn geometric_series_inverse() {
        let (ctx, t) = univar();
        let one_minus_t =
            TruncatedSeries::one(ctx, 10).unwrap().merge(&t, -1);
        let inv = one_minus_t.inverse().unwrap();
        for k in 0..=10u32 {
            assert_eq!(inv.coeff(&Monomial::new(vec![k])).unwrap(), rat_int(1));
        }
        assert_eq!((&inv * &one_minus_t).to_string(), "1");
    }

    #[test]
    fn log_of_geometric() {
        let (ctx, t) = univar();
        let f = TruncatedSeries::one(ctx, 10).unwrap().merge(&t, -1);
        let lg = f.inverse().unwrap().log().unwrap();
        // log 1/(1-t) = sum t^k / k
        for k in 1..=10u32 {
            assert_eq!(
                lg.coeff(&Monomial::new(vec![k])).unwrap(),
                rat(1, k as i64)
            );
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let (ctx, t) = univar();
        let one = TruncatedSeries::one(ctx, 10).unwrap();
        let f = &(&one + &t) + &t.scale(&rat(3, 2)).mul_impl(&t);
        let back = f.log().unwrap().exp().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn pow_int_matches_repeated_multiplication() {
        let (ctx, t) = univar();
        let f = &TruncatedSeries::one(ctx, 10).unwrap() + &t;
        let cube = f.pow_int(3).unwrap();
        assert_eq!(cube, f.mul_impl(&f).mul_impl(&f));
        let inv_sq = f.pow_int(-2).unwrap();
        assert_eq!(f.mul_impl(&f).mul_impl(&inv_sq).to_string(), "1");
    }

    #[test]
    fn pow_rational_consistency() {
        let (ctx, t) = univar();
        let f = &TruncatedSeries::one(ctx, 10).unwrap() + &t;
        let half = f.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(half.mul_impl(&half), f);
    }

    #[test]
    fn slope_component_filters_bidegree() {
        let ctx = SeriesContext::bipartite(1, 2).unwrap();
        // terms: s1 t1 (bidegree (1,1)), s1 t1 t2 (bidegree (1,2))
        let f = TruncatedSeries::from_terms(
            ctx,
            6,
            [
                (Monomial::new(vec![0, 0, 0]), rat_int(1)),
                (Monomial::new(vec![1, 1, 0]), rat_int(5)),
                (Monomial::new(vec![1, 1, 1]), rat_int(7)),
            ],
        )
        .unwrap();
        let on_11 = f.slope_component(1, 1).unwrap();
        assert_eq!(on_11.num_terms(), 2);
        assert_eq!(
            on_11.coeff(&Monomial::new(vec![1, 1, 0])).unwrap(),
            rat_int(5)
        );
        let on_12 = f.slope_component(1, 2).unwrap();
        assert_eq!(
            on_12.coeff(&Monomial::new(vec![1, 1, 1])).unwrap(),
            rat_int(7)
        );
        assert_eq!(on_12.coeff(&Monomial::new(vec![1, 1, 0])).unwrap(), rat_int(0));
    }

    #[test]
    fn specialize_diagonal_collects_levels() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let f = TruncatedSeries::from_terms(
            ctx,
            8,
            [
                (Monomial::new(vec![0, 0]), rat_int(1)),
                (Monomial::new(vec![1, 1]), rat_int(3)),
                (Monomial::new(vec![2, 2]), rat(-1, 2)),
            ],
        )
        .unwrap();
        let coeffs = f.specialize_diagonal(1, 1).unwrap();
        assert_eq!(coeffs.len(), 5);
        assert_eq!(coeffs[0], rat_int(1));
        assert_eq!(coeffs[1], rat_int(3));
        assert_eq!(coeffs[2], rat(-1, 2));
        assert_eq!(coeffs[3], rat_int(0));
    }

    #[test]
    fn specialize_rejects_off_slope_monomial() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let f = TruncatedSeries::from_terms(
            ctx,
            8,
            [(Monomial::new(vec![2, 1]), rat_int(1))],
        )
        .unwrap();
        assert!(matches!(
            f.specialize_diagonal(1, 1),
            Err(SeriesError::UnsupportedMonomial(..))
        ));
    }
}
