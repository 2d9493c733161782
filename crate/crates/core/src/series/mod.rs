//! Multivariate truncated power series with exact rational coefficients.
//!
//! A series lives in a [`SeriesContext`]: an ordered list of named variables,
//! each tagged with an axis (`X` or `Y`) and a positive weight. A monomial in
//! the context variables carries a derived bidegree: the `x`-degree is the
//! weighted sum of exponents of `X`-axis variables, the `y`-degree likewise
//! for `Y`. The Laurent generators `x` and `y` themselves are never stored;
//! every series in this ring has its `x`/`y` powers locked to the variable
//! content, which is exactly the subring the wall-crossing computations live
//! in.
//!
//! Truncation is in the adic order: the order of a monomial is the plain sum
//! of its exponents (weights do not enter), and a series of order `N` is known
//! modulo monomials of order `> N`. All binary operations require the two
//! operands to share an identical context and panic otherwise; mathematical
//! failure modes (inverting a series with zero constant term, logarithms of
//! series with constant term != 1, ...) are reported as [`SeriesError`]s.
//!
//! Internally a monomial is packed into a `u64` key, one byte per variable
//! with variable 0 in the most significant byte, so the numeric key order is
//! the lexicographic order on exponent vectors. This caps a context at 8
//! variables and exponents at 255, comfortably above the desk scale this
//! library targets.

mod json;
mod ops;

pub use json::series_from_json;

use crate::numerics::{format_rat, BigRational};
use num::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Maximum number of variables a context may hold (one packed byte each).
pub const MAX_VARS: usize = 8;
/// Maximum truncation order (must fit a packed byte).
pub const MAX_ORDER: u32 = 255;

/// Errors produced by series construction and arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("a series context supports at most {MAX_VARS} variables, got {0}")]
    TooManyVariables(usize),
    #[error("duplicate variable name {0:?} in series context")]
    DuplicateVariable(String),
    #[error("variable weights must be positive")]
    ZeroWeight,
    #[error("truncation order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u32),
    #[error("exponent {0} exceeds the supported maximum {MAX_ORDER}")]
    ExponentTooLarge(u32),
    #[error("monomial has {got} exponents, context has {want} variables")]
    WrongArity { got: usize, want: usize },
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("log requires constant term 1, found {0}")]
    LogConstant(String),
    #[error("exp requires constant term 0, found {0}")]
    ExpConstant(String),
    #[error("pow requires constant term 1, found {0}")]
    PowConstant(String),
    #[error("slope direction (0, 0) is invalid")]
    ZeroDirection,
    #[error("unsupported monomial for diagonal specialization: {0} has bidegree ({1}, {2}), not a multiple of the slope")]
    UnsupportedMonomial(String, u32, u32),
    #[error("diagonal specialization requires all variable weights to be 1")]
    WeightedSpecialization,
    #[error("malformed series JSON: {0}")]
    BadJson(String),
}

/// Which Laurent generator a variable's weight contributes to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// One formal variable of the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub axis: Axis,
    /// Contribution of one power of this variable to its axis degree.
    pub weight: u32,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, axis: Axis, weight: u32) -> Self {
        VariableSpec {
            name: name.into(),
            axis,
            weight,
        }
    }
}

/// An ordered set of variables shared by all series in one computation.
#[derive(Debug, PartialEq, Eq)]
pub struct SeriesContext {
    vars: Vec<VariableSpec>,
}

/// Packed exponent vector (one byte per variable, variable 0 most
/// significant).
pub(crate) type Key = u64;

impl SeriesContext {
    /// Build a context from explicit variable specs.
    pub fn new(vars: Vec<VariableSpec>) -> Result<Arc<Self>, SeriesError> {
        if vars.len() > MAX_VARS {
            return Err(SeriesError::TooManyVariables(vars.len()));
        }
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(SeriesError::ZeroWeight);
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(SeriesError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(SeriesContext { vars }))
    }

    /// The standard context for a complete bipartite setup: `l1` weight-1
    /// variables `s1..s{l1}` on the `X` axis followed by `l2` weight-1
    /// variables `t1..t{l2}` on the `Y` axis.
    pub fn bipartite(l1: usize, l2: usize) -> Result<Arc<Self>, SeriesError> {
        let mut vars = Vec::with_capacity(l1 + l2);
        for k in 1..=l1 {
            vars.push(VariableSpec::new(format!("s{k}"), Axis::X, 1));
        }
        for l in 1..=l2 {
            vars.push(VariableSpec::new(format!("t{l}"), Axis::Y, 1));
        }
        Self::new(vars)
    }

    /// The context for a levelled setup. `l1_star[r - 1]` is the number of
    /// `X`-axis variables of weight `r` (named `s{r}_{i}`), and similarly for
    /// `l2_star` on the `Y` axis (named `t{s}_{i}`).
    pub fn levelled(l1_star: &[u32], l2_star: &[u32]) -> Result<Arc<Self>, SeriesError> {
        let mut vars = Vec::new();
        for (r0, &count) in l1_star.iter().enumerate() {
            let r = r0 as u32 + 1;
            for i in 1..=count {
                vars.push(VariableSpec::new(format!("s{r}_{i}"), Axis::X, r));
            }
        }
        for (s0, &count) in l2_star.iter().enumerate() {
            let s = s0 as u32 + 1;
            for i in 1..=count {
                vars.push(VariableSpec::new(format!("t{s}_{i}"), Axis::Y, s));
            }
        }
        Self::new(vars)
    }

    /// A single weight-1 variable, for one-variable work.
    pub fn univariate(name: impl Into<String>, axis: Axis) -> Arc<Self> {
        Self::new(vec![VariableSpec::new(name, axis, 1)]).expect("one variable fits")
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub(crate) fn pack(&self, exponents: &[u32]) -> Result<Key, SeriesError> {
        if exponents.len() != self.vars.len() {
            return Err(SeriesError::WrongArity {
                got: exponents.len(),
                want: self.vars.len(),
            });
        }
        let mut key: Key = 0;
        for (i, &e) in exponents.iter().enumerate() {
            if e > MAX_ORDER {
                return Err(SeriesError::ExponentTooLarge(e));
            }
            key |= (e as Key) << (8 * (MAX_VARS - 1 - i));
        }
        Ok(key)
    }

    pub(crate) fn unpack(&self, key: Key) -> Vec<u32> {
        (0..self.vars.len())
            .map(|i| ((key >> (8 * (MAX_VARS - 1 - i))) & 0xff) as u32)
            .collect()
    }

    /// Adic order of a packed monomial: plain sum of exponents.
    pub(crate) fn order_of(key: Key) -> u32 {
        let mut sum = 0u32;
        let mut k = key;
        while k != 0 {
            sum += (k & 0xff) as u32;
            k >>= 8;
        }
        sum
    }

    /// Derived `(x, y)` bidegree of a packed monomial.
    pub(crate) fn bidegree_of(&self, key: Key) -> (u32, u32) {
        let mut x = 0u32;
        let mut y = 0u32;
        for (i, v) in self.vars.iter().enumerate() {
            let e = ((key >> (8 * (MAX_VARS - 1 - i))) & 0xff) as u32;
            if e != 0 {
                match v.axis {
                    Axis::X => x += v.weight * e,
                    Axis::Y => y += v.weight * e,
                }
            }
        }
        (x, y)
    }

    /// Render a packed monomial as `s1^2*t1` style text (bare `1` for the
    /// empty monomial), without bidegree decoration.
    pub(crate) fn monomial_text(&self, key: Key) -> String {
        let exps = self.unpack(key);
        let mut parts = Vec::new();
        for (v, &e) in self.vars.iter().zip(exps.iter()) {
            match e {
                0 => {}
                1 => parts.push(v.name.clone()),
                _ => parts.push(format!("{}^{}", v.name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// A public exponent vector over a context's variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }
}

/// A truncated multivariate power series: exact rational coefficients on
/// monomials of adic order `<= order`, in a shared [`SeriesContext`].
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub(crate) context: Arc<SeriesContext>,
    pub(crate) order: u32,
    /// Sorted by packed key (= lexicographic on exponent vectors); no zero
    /// coefficients stored.
    pub(crate) terms: Vec<(Key, BigRational)>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.context == *other.context && self.order == other.order && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    /// The zero series at the given truncation order.
    pub fn zero(context: Arc<SeriesContext>, order: u32) -> Result<Self, SeriesError> {
        if order > MAX_ORDER {
            return Err(SeriesError::OrderTooLarge(order));
        }
        Ok(TruncatedSeries {
            context,
            order,
            terms: Vec::new(),
        })
    }

    /// The constant series 1.
    pub fn one(context: Arc<SeriesContext>, order: u32) -> Result<Self, SeriesError> {
        let mut s = Self::zero(context, order)?;
        s.terms.push((0, BigRational::one()));
        Ok(s)
    }

    /// The constant series `c`.
    pub fn constant(
        context: Arc<SeriesContext>,
        order: u32,
        c: BigRational,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(context, order)?;
        if !c.is_zero() {
            s.terms.push((0, c));
        }
        Ok(s)
    }

    /// Build from (monomial, coefficient) pairs; duplicates are summed and
    /// terms beyond the truncation order are rejected.
    pub fn from_terms(
        context: Arc<SeriesContext>,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(context, order)?;
        let mut collected: Vec<(Key, BigRational)> = Vec::new();
        for (m, c) in terms {
            let key = s.context.pack(&m.exponents)?;
            if SeriesContext::order_of(key) > order {
                return Err(SeriesError::OrderTooLarge(SeriesContext::order_of(key)));
            }
            collected.push((key, c));
        }
        collected.sort_by_key(|(k, _)| *k);
        for (k, c) in collected {
            match s.terms.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += c,
                _ => s.terms.push((k, c)),
            }
        }
        s.terms.retain(|(_, c)| !c.is_zero());
        Ok(s)
    }

    /// The series consisting of the single monomial `m` with coefficient `c`.
    pub fn monomial(
        context: Arc<SeriesContext>,
        order: u32,
        m: &Monomial,
        c: BigRational,
    ) -> Result<Self, SeriesError> {
        Self::from_terms(context, order, [(m.clone(), c)])
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.context
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant term; the representation keeps terms key-sorted so this is an
    /// O(1) peek at the front.
    pub fn constant_term(&self) -> BigRational {
        match self.terms.first() {
            Some((0, c)) => c.clone(),
            _ => BigRational::zero(),
        }
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Result<BigRational, SeriesError> {
        let key = self.context.pack(&m.exponents)?;
        Ok(self.coeff_key(key))
    }

    pub(crate) fn coeff_key(&self, key: Key) -> BigRational {
        match self.terms.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// Iterate terms as (exponent vector, coefficient), in lexicographic
    /// order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Monomial, &BigRational)> + '_ {
        self.terms
            .iter()
            .map(|(k, c)| (Monomial::new(self.context.unpack(*k)), c))
    }

    /// The `(x, y)` bidegree of a public monomial in this context.
    pub fn bidegree(&self, m: &Monomial) -> Result<(u32, u32), SeriesError> {
        let key = self.context.pack(&m.exponents)?;
        Ok(self.context.bidegree_of(key))
    }

    /// Lowest adic order of a nonconstant term, if any.
    pub fn min_nonconstant_order(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(k, _)| *k != 0)
            .map(|(k, _)| SeriesContext::order_of(*k))
            .min()
    }

    pub(crate) fn assert_same_context(&self, rhs: &Self) {
        assert!(
            *self.context == *rhs.context,
            "series operation on mismatched contexts"
        );
    }

    pub(crate) fn from_sorted_terms(
        context: Arc<SeriesContext>,
        order: u32,
        terms: Vec<(Key, BigRational)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        debug_assert!(terms
            .iter()
            .all(|(k, _)| SeriesContext::order_of(*k) <= order));
        TruncatedSeries {
            context,
            order,
            terms,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    /// Human-readable rendering with the derived Laurent part made explicit,
    /// e.g. `1 + s1*t1*x*y + 2*s1*t1^2*x*y^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if *key == 0 {
                parts.push(format_rat(&a));
            } else {
                if !a.is_one() {
                    parts.push(format_rat(&a));
                }
                let body = self.context.monomial_text(*key);
                if body != "1" {
                    parts.push(body);
                }
                let (p, q) = self.context.bidegree_of(*key);
                for (gen, e) in [("x", p), ("y", q)] {
                    match e {
                        0 => {}
                        1 => parts.push(gen.to_string()),
                        _ => parts.push(format!("{gen}^{e}")),
                    }
                }
                if parts.is_empty() {
                    parts.push("1".to_string());
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_int;

    #[test]
    fn packing_is_lexicographic() {
        let ctx = SeriesContext::bipartite(2, 1).unwrap();
        let a = ctx.pack(&[0, 1, 2]).unwrap();
        let b = ctx.pack(&[1, 0, 0]).unwrap();
        assert!(a < b, "lex smaller exponent vector packs smaller");
        assert_eq!(ctx.unpack(a), vec![0, 1, 2]);
        assert_eq!(SeriesContext::order_of(a), 3);
    }

    #[test]
    fn bidegree_uses_weights() {
        let ctx = SeriesContext::levelled(&[0, 1], &[1]).unwrap();
        assert_eq!(ctx.vars()[0].name, "s2_1");
        let key = ctx.pack(&[2, 1]).unwrap();
        // s2_1 has weight 2 on X, t1_1 weight 1 on Y.
        assert_eq!(ctx.bidegree_of(key), (4, 1));
        assert_eq!(SeriesContext::order_of(key), 3);
    }

    #[test]
    fn from_terms_merges_duplicates() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let m = Monomial::new(vec![1, 0]);
        let s = TruncatedSeries::from_terms(
            ctx,
            4,
            [(m.clone(), rat_int(2)), (m.clone(), rat_int(-2))],
        )
        .unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn display_shows_laurent_part() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let s = TruncatedSeries::from_terms(
            ctx.clone(),
            4,
            [
                (Monomial::new(vec![0, 0]), rat_int(1)),
                (Monomial::new(vec![1, 1]), rat_int(1)),
            ],
        )
        .unwrap();
        assert_eq!(s.to_string(), "1 + s1*t1*x*y");
    }
}
