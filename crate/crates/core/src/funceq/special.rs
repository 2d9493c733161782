//! The one-variable specialization of a slope's wall function.
//!
//! Setting every `s` and `t` variable to `t` collapses the coupled system of
//! [`super::solve_R_system`] to a single equation for `f(t)` in the level
//! variable `u = (tx)^a (ty)^b`:
//!
//! ```text
//! f = prod_{k >= 1} (1 - (u f^E)^k)^{-k chi_k},
//! E = (l1 l2 a b - l2 a^2 - l1 b^2) / (l1 l2),
//! ```
//!
//! with `chi_k` the level-`k` sum of Euler characteristics. The invariants
//! `N[k]` come out of `f` either through a closed form (valid only when
//! `E != 0`) or as `[u^k] log f / k`, and two Moebius-type transforms turn
//! them into integer-valued counts: the BPS transform on the central slope
//! and the exponent extraction of the factorization
//! `f(t) = prod (1 - (sign * t)^k)^{-k d_k}`.
//!
//! Everywhere below, a slice indexed by level uses position `i` for level
//! `i + 1`, while full coefficient lists of a series start at the constant
//! term.

use super::FunceqError;
use crate::numerics::{
    binom_general, binom_int, divisors, mobius, neg_one_pow, rat_int, BigRational,
};
use crate::series::{Axis, Monomial, SeriesContext, TruncatedSeries};
use num::{BigInt, One, ToPrimitive, Zero};

/// The slope data entering the specialized functional equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedContext {
    pub a: u32,
    pub b: u32,
    pub e: BigRational,
    /// Aggregated `chi` per level (position `i` is level `i + 1`).
    pub chi: Vec<BigInt>,
    /// Coefficients of the solved `f(t)` by power of the level variable.
    pub f_coeffs: Vec<BigRational>,
}

impl SpecializedContext {
    pub fn new(l1: u32, l2: u32, a: u32, b: u32) -> Self {
        assert!(l1 > 0 && l2 > 0, "quiver must have vertices on both sides");
        assert!(
            (a > 0 || b > 0) && num::integer::gcd(a, b) == 1,
            "slope direction must be primitive"
        );
        let m = i64::from(l1) * i64::from(l2);
        let num = m * i64::from(a) * i64::from(b)
            - i64::from(l2) * i64::from(a) * i64::from(a)
            - i64::from(l1) * i64::from(b) * i64::from(b);
        SpecializedContext {
            a,
            b,
            e: BigRational::new(BigInt::from(num), BigInt::from(m)),
            chi: Vec::new(),
            f_coeffs: Vec::new(),
        }
    }

    pub fn set_chi(&mut self, chi: Vec<BigInt>) {
        self.chi = chi;
        self.f_coeffs.clear();
    }

    /// Solve the functional equation up to level `k_max` and cache the
    /// coefficients.
    pub fn solve(&mut self, k_max: u32) -> Result<&[BigRational], FunceqError> {
        self.f_coeffs = solve_specialized(&self.chi, self.a, self.b, &self.e, k_max)?;
        Ok(&self.f_coeffs)
    }
}

fn univariate_u(order: u32) -> (TruncatedSeries, TruncatedSeries) {
    let ctx = SeriesContext::univariate("u", Axis::X);
    let one = TruncatedSeries::one(ctx.clone(), order).expect("valid order");
    let u = TruncatedSeries::monomial(ctx, order, &Monomial::new(vec![1]), BigRational::one())
        .expect("valid monomial");
    (one, u)
}

fn coeff_list(f: &TruncatedSeries, order: u32) -> Vec<BigRational> {
    (0..=order)
        .map(|k| f.coeff(&Monomial::new(vec![k])).expect("univariate"))
        .collect()
}

fn series_from_coeffs(coeffs: &[BigRational]) -> Result<TruncatedSeries, FunceqError> {
    let ctx = SeriesContext::univariate("u", Axis::X);
    let order = coeffs.len().saturating_sub(1) as u32;
    Ok(TruncatedSeries::from_terms(
        ctx,
        order,
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::new(vec![k as u32]), c.clone())),
    )?)
}

/// Solve `f = prod_k (1 - (u f^E)^k)^{-k chi_k}` for the coefficients of
/// `f(t)` up to `u^{k_max}`. With `E = 0` the right-hand side is explicit
/// and one evaluation is exact; otherwise a fixed-point sweep gains at least
/// one level per pass (each unknown coefficient enters the right-hand side
/// only multiplied by `u`), which is asserted.
pub fn solve_specialized(
    chi_k: &[BigInt],
    a: u32,
    b: u32,
    e: &BigRational,
    k_max: u32,
) -> Result<Vec<BigRational>, FunceqError> {
    assert!(
        (a > 0 || b > 0) && num::integer::gcd(a, b) == 1,
        "slope direction must be primitive"
    );
    assert!(
        chi_k.len() >= k_max as usize,
        "chi must be given for every level up to k_max"
    );
    let (one, u) = univariate_u(k_max);
    let rhs = |f: &TruncatedSeries| -> Result<TruncatedSeries, FunceqError> {
        let g = &u * &f.pow_rational(e)?;
        let mut acc = one.clone();
        for k in 1..=k_max {
            let chi = chi_k[(k - 1) as usize].to_i64().ok_or_else(|| {
                FunceqError::ExponentOverflow(format!("chi_{k} = {}", chi_k[(k - 1) as usize]))
            })?;
            let exponent = (k as i64).checked_mul(chi).and_then(i64::checked_neg);
            let exponent = exponent
                .ok_or_else(|| FunceqError::ExponentOverflow(format!("{k} * chi_{k}")))?;
            if exponent == 0 {
                continue;
            }
            let factor = (&one - &g.pow_int(k as i64)?).pow_int(exponent)?;
            acc = &acc * &factor;
        }
        Ok(acc)
    };
    let mut f = one.clone();
    if e.is_zero() {
        f = rhs(&f)?;
    } else {
        let mut change_floor = 0u32;
        let mut sweeps = 0usize;
        loop {
            sweeps += 1;
            let new = rhs(&f)?;
            if new == f {
                break;
            }
            let changed_at = (&new - &f)
                .min_nonconstant_order()
                .expect("differing series share the constant term 1");
            if changed_at <= change_floor {
                return Err(FunceqError::NoProgress(sweeps));
            }
            change_floor = changed_at;
            f = new;
        }
    }
    Ok(coeff_list(&f, k_max))
}

/// `N[k] = [u^k] log f / k` from the coefficients of `f(t)`. This route is
/// always valid, and is the only one when `E = 0`.
#[allow(non_snake_case)]
pub fn log_route_N(f_coeffs: &[BigRational]) -> Result<Vec<BigRational>, FunceqError> {
    let f = series_from_coeffs(f_coeffs)?;
    let lg = f.log()?;
    Ok((1..f_coeffs.len())
        .map(|k| lg.coeff(&Monomial::new(vec![k as u32])).expect("univariate") / rat_int(k as i64))
        .collect())
}

/// Which closed form to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `N_{(1,1)}[k]` on the central slope of the complete bipartite setup:
    /// `(l1 l2 / k^2) binom((l1-1)(l2-1)k - 1, k - 1)`.
    Central { l1: u32, l2: u32, k: u32 },
    /// `N_{(d,d-1)}[1]`:
    /// `l1 l2 / (d ((l1-1)d + 1)) * binom((l1-1)(l2-1)d + l2 - 1, d - 1)`.
    SlopeDMinusOne { l1: u32, l2: u32, d: u32 },
    /// `N_{(a,b)}[k]` from the aggregated chi and `E` via
    /// `1/(E k^2) sum_r prod_i binom(E k i chi_i + r_i - 1, r_i)`, summed
    /// over `r_i >= 0` with `sum_i i r_i = k`. Invalid at `E = 0`.
    SpecializedGw {
        chi: Vec<BigInt>,
        e: BigRational,
        k: u32,
    },
}

/// All multiplicity vectors `(r_1, ..., r_k)` with `sum_i i * r_i = k`.
fn multiplicity_vectors(k: u32) -> Vec<Vec<u32>> {
    fn go(i: u32, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == 0 {
            if remaining == 0 {
                let mut v = prefix.clone();
                v.reverse();
                out.push(v);
            }
            return;
        }
        for r in 0..=remaining / i {
            prefix.push(r);
            go(i - 1, remaining - i * r, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Evaluate one of the exact closed forms for `N`.
#[allow(non_snake_case)]
pub fn closed_form_N(form: &ClosedForm) -> Result<BigRational, FunceqError> {
    match form {
        ClosedForm::Central { l1, l2, k } => {
            assert!(*k >= 1);
            let m = BigInt::from(*l1) * BigInt::from(*l2);
            let top = BigInt::from((i64::from(*l1) - 1) * (i64::from(*l2) - 1) * i64::from(*k) - 1);
            let binom = binom_int(&top, u64::from(*k) - 1);
            Ok(BigRational::new(m * binom, BigInt::from(*k) * BigInt::from(*k)))
        }
        ClosedForm::SlopeDMinusOne { l1, l2, d } => {
            assert!(*d >= 1);
            let m = BigInt::from(*l1) * BigInt::from(*l2);
            let top = BigInt::from(
                (i64::from(*l1) - 1) * (i64::from(*l2) - 1) * i64::from(*d) + i64::from(*l2) - 1,
            );
            let binom = binom_int(&top, u64::from(*d) - 1);
            let den = BigInt::from(*d) * BigInt::from((i64::from(*l1) - 1) * i64::from(*d) + 1);
            Ok(BigRational::new(m * binom, den))
        }
        ClosedForm::SpecializedGw { chi, e, k } => {
            assert!(*k >= 1);
            if e.is_zero() {
                return Err(FunceqError::UseLogRoute);
            }
            let mut sum = BigRational::zero();
            for r in multiplicity_vectors(*k) {
                let mut prod = BigRational::one();
                for (i0, &ri) in r.iter().enumerate() {
                    if ri == 0 {
                        continue;
                    }
                    let i = i0 + 1;
                    let chi_i = chi
                        .get(i0)
                        .map(|c| BigRational::from_integer(c.clone()))
                        .unwrap_or_else(BigRational::zero);
                    let top = e * &rat_int(i64::from(*k) * i as i64) * &chi_i
                        + rat_int(i64::from(ri) - 1);
                    prod *= binom_general(&top, u64::from(ri));
                    if prod.is_zero() {
                        break;
                    }
                }
                sum += prod;
            }
            Ok(sum / (e * &rat_int(i64::from(*k) * i64::from(*k))))
        }
    }
}

/// The Moebius-type transform sending `N[k]` to the BPS-style count
/// `sum_{d | k} mu(k/d) (-1)^{sign_exponent (d - k)} (d^2 / k^2) N[d]`.
/// Position `i` of both slices is level `i + 1`.
pub fn bps_moebius(n_values: &[BigRational], sign_exponent: i64) -> Vec<BigRational> {
    (1..=n_values.len() as u64)
        .map(|k| {
            let mut total = BigRational::zero();
            for d in divisors(k) {
                let mu = mobius(k / d);
                if mu == 0 {
                    continue;
                }
                let sign = neg_one_pow(sign_exponent * (d as i64 - k as i64));
                let scale = BigRational::new(
                    BigInt::from(mu * sign) * BigInt::from(d * d),
                    BigInt::from(k * k),
                );
                total += scale * &n_values[(d - 1) as usize];
            }
            total
        })
        .collect()
}

/// Exponents `d_k` of the factorization
/// `f(t) = prod_{k >= 1} (1 - (sign * t)^k)^{-k d_k}`: writing
/// `L_n = [t^n] log f`, comparing coefficients gives
/// `sum_{k | n} k^2 d_k = n sign^n L_n`, inverted by the Moebius function.
/// The results are exact rationals; integrality is the caller's claim to
/// check. Position `i` of the output is `d_{i+1}`.
pub fn product_factorization(
    f_t: &[BigRational],
    sign: i64,
) -> Result<Vec<BigRational>, FunceqError> {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let f = series_from_coeffs(f_t)?;
    let lg = f.log()?;
    let order = f_t.len().saturating_sub(1) as u64;
    let l_at = |n: u64| lg.coeff(&Monomial::new(vec![n as u32])).expect("univariate");
    Ok((1..=order)
        .map(|k| {
            let mut total = BigRational::zero();
            for n in divisors(k) {
                let mu = mobius(k / n);
                if mu == 0 {
                    continue;
                }
                let factor = BigInt::from(mu) * BigInt::from(n) * BigInt::from(neg_one_pow_sign(sign, n));
                total += BigRational::from_integer(factor) * &l_at(n);
            }
            total / rat_int((k * k) as i64)
        })
        .collect())
}

fn neg_one_pow_sign(sign: i64, n: u64) -> i64 {
    if sign == 1 {
        1
    } else {
        neg_one_pow(n as i64)
    }
}

/// Rebuild the coefficients of `prod_{k} (1 - (sign * t)^k)^{-k d_k}` up to
/// `t^order` from the exponents (position `i` is `d_{i+1}`).
pub fn reassemble_product(
    d: &[BigRational],
    sign: i64,
    order: u32,
) -> Result<Vec<BigRational>, FunceqError> {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let ctx = SeriesContext::univariate("u", Axis::X);
    let one = TruncatedSeries::one(ctx.clone(), order)?;
    let mut f = one.clone();
    for (i, dk) in d.iter().enumerate().take(order as usize) {
        if dk.is_zero() {
            continue;
        }
        let k = (i + 1) as u32;
        // 1 - (sign t)^k = 1 - sign^k t^k.
        let base = TruncatedSeries::from_terms(
            ctx.clone(),
            order,
            [
                (Monomial::new(vec![0]), BigRational::one()),
                (
                    Monomial::new(vec![k]),
                    -rat_int(neg_one_pow_sign(sign, u64::from(k))),
                ),
            ],
        )?;
        let exponent = -(rat_int(i64::from(k)) * dk);
        f = &f * &base.pow_rational(&exponent)?;
    }
    Ok(coeff_list(&f, order))
}
