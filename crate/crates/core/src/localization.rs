//! Tree counting behind the slope `(d, d-1)` invariants.
//!
//! Rooted glueing trees have a generating function `y(x)` solving the
//! substitution equation `y = x * phi(y)` with branching series
//! `phi(u) = (1 + u^{l1-1})^{l2-1}`: a node carries a subset of the `l2 - 1`
//! available colours, and each chosen colour glues on `l1 - 1` subtrees.
//! Lagrange inversion turns coefficients of powers of `y` into binomials,
//! and the module computes them three ways so each route checks the others:
//! by iterating the substitution, by the binomial closed form, and by a
//! direct recursive enumeration of the trees.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::numerics::{binom_i64, binom_int, format_rat};
use crate::series::{Axis, Monomial, SeriesContext, SeriesError, TruncatedSeries};

#[derive(Debug, Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    /// The substitution route and the binomial route compute the same
    /// coefficient; a mismatch is an internal arithmetic bug, not bad input.
    #[error("Lagrange routes disagree at (l1={l1}, l2={l2}, n={n}): series gives {iterated}, binomial gives {closed}")]
    RoutesDisagree {
        l1: u32,
        l2: u32,
        n: u32,
        iterated: String,
        closed: String,
    },
}

/// The branching series as a function of an already-truncated `y`.
fn phi_of(l1: u32, l2: u32, y: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let one = TruncatedSeries::one(y.context().clone(), y.order())?;
    (&one + &y.pow_int((l1 - 1) as i64)?).pow_int((l2 - 1) as i64)
}

/// Solve `y = x * phi(y)` to the given order. Substituting multiplies by
/// `x`, so every pass is exact one order further and an unchanged pass is
/// the exact truncated solution.
fn solve_y(l1: u32, l2: u32, order: u32) -> Result<TruncatedSeries, LocalizationError> {
    let ctx = SeriesContext::univariate("x", Axis::X);
    let x = TruncatedSeries::monomial(
        ctx.clone(),
        order,
        &Monomial::new(vec![1]),
        BigRational::one(),
    )?;
    let mut y = TruncatedSeries::zero(ctx, order)?;
    for _ in 0..=order + 1 {
        let next = &x * &phi_of(l1, l2, &y)?;
        if next == y {
            return Ok(y);
        }
        y = next;
    }
    unreachable!("substitution gains one order per pass and must stabilize")
}

/// Binomial route for the Lagrange coefficient: `(l1/n) [u^{n-l1}] phi(u)^n`.
fn closed_lagrange(l1: u32, l2: u32, n: u32) -> BigRational {
    if n < l1 {
        return BigRational::zero();
    }
    if l1 == 1 {
        // The branching series is the constant 2^{l2-1}, so y is linear.
        return if n == 1 {
            BigRational::from_integer(BigInt::one() << (l2 - 1) as usize)
        } else {
            BigRational::zero()
        };
    }
    if (n - l1) % (l1 - 1) != 0 {
        return BigRational::zero();
    }
    let top = BigInt::from(n as u64 * (l2 - 1) as u64);
    let picks = ((n - l1) / (l1 - 1)) as u64;
    BigRational::new(BigInt::from(l1) * binom_int(&top, picks), BigInt::from(n))
}

/// Coefficient `[x^n] y(x)^{l1}`, computed both by iterating the
/// substitution to order `n` and by the binomial closed form. The routes
/// must agree; the result is their common value.
pub fn lagrange_coeff(l1: u32, l2: u32, n: u32) -> Result<BigRational, LocalizationError> {
    assert!(l1 >= 1 && l2 >= 1 && n >= 1);
    let y = solve_y(l1, l2, n)?;
    let iterated = y.pow_int(l1 as i64)?.coeff(&Monomial::new(vec![n]))?;
    let closed = closed_lagrange(l1, l2, n);
    if iterated != closed {
        return Err(LocalizationError::RoutesDisagree {
            l1,
            l2,
            n,
            iterated: format_rat(&iterated),
            closed: format_rat(&closed),
        });
    }
    Ok(iterated)
}

/// Closed tree count for Kronecker type `(d, d-1)`:
/// `l1 l2 / (d ((l1-1)d + 1))` times `binom((l2-1)(l1-1)d + l2 - 1, d - 1)`.
pub fn tree_formula(l1: u32, l2: u32, d: u32) -> BigRational {
    assert!(l1 >= 1 && l2 >= 1 && d >= 1);
    let top = BigInt::from((l2 - 1) as u64 * (l1 - 1) as u64 * d as u64 + (l2 - 1) as u64);
    let num = BigInt::from(l1 as u64 * l2 as u64) * binom_int(&top, (d - 1) as u64);
    let den = BigInt::from(d as u64 * ((l1 - 1) as u64 * d as u64 + 1));
    BigRational::new(num, den)
}

/// Ordered forests of `m` trees with the given total node count, assembled
/// from a table of tree counts by size.
fn forests(m: u32, total: u32, trees: &[BigInt]) -> BigInt {
    let mut table = vec![BigInt::zero(); total as usize + 1];
    table[0] = BigInt::one();
    for _ in 0..m {
        let mut next = vec![BigInt::zero(); total as usize + 1];
        for used in 0..=total as usize {
            if table[used].is_zero() {
                continue;
            }
            for size in 1..=total as usize - used {
                next[used + size] += &table[used] * &trees[size];
            }
        }
        table = next;
    }
    table[total as usize].clone()
}

/// Direct recursive enumeration of the glueing trees: build the count of
/// rooted trees size by size (a root picks a colour subset, each colour
/// carries an ordered forest of `l1 - 1` subtrees), then weight the forests
/// on `(l1-1)d + 1` nodes with the `l2` source colours and divide by the
/// `d` root choices.
pub fn enumerate_trees(l1: u32, l2: u32, d: u32) -> BigRational {
    assert!(l1 >= 1 && l2 >= 1 && d >= 1);
    let n = (l1 - 1) * d + 1;
    let mut trees = vec![BigInt::zero(); n as usize + 1];
    for size in 1..=n as usize {
        let mut count = BigInt::zero();
        for colours in 0..l2 {
            let ways = binom_i64((l2 - 1) as i64, colours as u64);
            if ways.is_zero() {
                continue;
            }
            count += ways * forests(colours * (l1 - 1), size as u32 - 1, &trees);
        }
        trees[size] = count;
    }
    BigRational::new(
        BigInt::from(l2) * forests(l1, n, &trees),
        BigInt::from(d),
    )
}

/// Whether the closed count is pinned against the independent moduli route
/// for these parameters. The symmetric range `l1 = l2 >= 2` is; outside it
/// the orientation of the underlying reflection is unsettled (at `d = 1`
/// the formula yields `l2` where the direct moduli count suggests `l1`), so
/// those values are flagged rather than silently trusted.
pub fn formula_verified(l1: u32, l2: u32) -> bool {
    l1 == l2 && l2 >= 2
}

/// Solved substitution data for one parameter triple, to the order that
/// type `(d, d-1)` needs.
#[derive(Debug, Clone)]
pub struct TreeCountContext {
    pub l1: u32,
    pub l2: u32,
    pub d: u32,
    phi: TruncatedSeries,
    y: TruncatedSeries,
}

impl TreeCountContext {
    pub fn new(l1: u32, l2: u32, d: u32) -> Result<Self, LocalizationError> {
        assert!(l1 >= 2 && l2 >= 1 && d >= 1);
        let order = (l1 - 1) * d + 1;
        let y = solve_y(l1, l2, order)?;
        let phi = phi_of(l1, l2, &y)?;
        debug_assert!(phi.constant_term().is_one());
        debug_assert!(y.constant_term().is_zero());
        Ok(Self { l1, l2, d, phi, y })
    }

    pub fn phi(&self) -> &TruncatedSeries {
        &self.phi
    }

    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }
}
