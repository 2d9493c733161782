//! Gromov-Witten numbers read off from wall functions, and their comparison
//! against quiver moduli.
//!
//! The logarithm of a wall function `f` attached to a primitive direction
//! `(a, b)` collects one rational number per monomial: writing the level-`k`
//! part of `log f` as a sum of `k * N[(P1, P2)] * s^{P1} t^{P2} (x^a y^b)^k`,
//! the numbers `N[(P1, P2)]` are the refined Gromov-Witten invariants of the
//! wall and `N[k]`, their sum over fixed `k`, is the aggregated one. The
//! correspondence checked here states that for level-1 dimension vectors the
//! refined numbers equal Euler characteristics of stable quiver moduli, and
//! that the smooth-model series `f^b` and `f^a` have integer coefficients.

use std::collections::BTreeMap;

use num::integer::gcd;
use num::{BigInt, BigRational, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::funceq::{extract_chi, ChiTable, FunceqError};
use crate::hn::{self, HnError};
use crate::numerics::format_rat;
use crate::quiver::{vectors_with_sum, BipartiteQuiver, DimVector, StabilitySpec};
use crate::series::{Axis, SeriesError, TruncatedSeries};
use crate::wallcross::{factorize, InitialData, WallAutomorphism, WallcrossError};

#[derive(Debug, Error)]
pub enum GwError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Wallcross(#[from] WallcrossError),
    #[error(transparent)]
    Hn(#[from] HnError),
    #[error(transparent)]
    Funceq(#[from] FunceqError),
    /// The smooth-model series must have integer coefficients; a fractional
    /// one means the correspondence fails for this wall.
    #[error("smooth-model coefficient at {0} is {1}, not an integer")]
    NonIntegerSmoothModel(String, String),
    #[error("direction ({0}, {1}) is not primitive")]
    NotPrimitive(u32, u32),
    /// Refined labels split exponents into dimension vectors, which only
    /// makes sense when every variable counts with weight one.
    #[error("refined labels need unit-weight variables")]
    WeightedContext,
}

/// Refined and aggregated Gromov-Witten numbers of a single wall, keyed by
/// the dimension vector `(P1, P2)` respectively the level `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GWTable {
    a: u32,
    b: u32,
    order: u32,
    refined: BTreeMap<DimVector, BigRational>,
    aggregated: BTreeMap<u32, BigRational>,
}

impl GWTable {
    pub fn direction(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Largest level visible at this truncation order.
    pub fn max_level(&self) -> u32 {
        self.order / (self.a + self.b)
    }

    /// Refined number for one dimension vector; vectors without a recorded
    /// entry carry the value zero.
    pub fn refined(&self, d: &DimVector) -> BigRational {
        self.refined.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Aggregated number `N[k]`, the sum of the refined values at level `k`.
    pub fn aggregated(&self, k: u32) -> BigRational {
        assert!(
            k >= 1 && k <= self.max_level(),
            "level {k} is not visible at order {}",
            self.order
        );
        self.aggregated[&k].clone()
    }

    pub fn iter_refined(&self) -> impl Iterator<Item = (&DimVector, &BigRational)> + '_ {
        self.refined.iter()
    }

    pub fn len(&self) -> usize {
        self.refined.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refined.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let refined: Vec<Value> = self
            .refined
            .iter()
            .map(|(d, n)| {
                json!({
                    "p1": d.sinks,
                    "p2": d.sources,
                    "n": format_rat(n),
                })
            })
            .collect();
        let aggregated: Vec<Value> = self
            .aggregated
            .iter()
            .map(|(k, n)| json!({ "k": k, "n": format_rat(n) }))
            .collect();
        json!({
            "a": self.a,
            "b": self.b,
            "order": self.order,
            "refined": refined,
            "aggregated": aggregated,
        })
    }
}

fn require_unit_weights(f: &TruncatedSeries) -> Result<(), GwError> {
    if f.context().vars().iter().any(|v| v.weight != 1) {
        return Err(GwError::WeightedContext);
    }
    Ok(())
}

/// Split a monomial's exponents into the sink block and the source block,
/// following the axes of the context variables.
fn dim_vector_of(f: &TruncatedSeries, exponents: &[u32]) -> DimVector {
    let mut sinks = Vec::new();
    let mut sources = Vec::new();
    for (v, e) in f.context().vars().iter().zip(exponents) {
        match v.axis {
            Axis::X => sinks.push(*e),
            Axis::Y => sources.push(*e),
        }
    }
    DimVector::new(sinks, sources)
}

/// Read the refined numbers off one wall function: at level `k` the
/// coefficient of `s^{P1} t^{P2} (x^a y^b)^k` in `log f` is `k * N[(P1, P2)]`.
pub fn gw_from_wall(f: &TruncatedSeries, a: u32, b: u32) -> Result<GWTable, GwError> {
    // Reuse the wall validation: support on the ray, constant term one.
    WallAutomorphism::new(a, b, f.clone())?;
    require_unit_weights(f)?;

    let step = a + b;
    let lg = f.log()?;
    let mut refined = BTreeMap::new();
    let mut aggregated = BTreeMap::new();
    for k in 1..=f.order() / step {
        aggregated.insert(k, BigRational::zero());
    }
    for (m, coeff) in lg.iter_terms() {
        let total: u32 = m.exponents.iter().sum();
        if total == 0 {
            continue;
        }
        // Ray support makes the total degree an exact multiple of a + b.
        debug_assert_eq!(total % step, 0);
        let k = total / step;
        let n = coeff / BigRational::from_integer(BigInt::from(k));
        let slot = aggregated.get_mut(&k).expect("level within truncation");
        *slot = &*slot + &n;
        refined.insert(dim_vector_of(f, &m.exponents), n);
    }
    Ok(GWTable {
        a,
        b,
        order: f.order(),
        refined,
        aggregated,
    })
}

/// Framing flavour of the smooth model: source-framed raises the wall
/// function to the power `b`, sink-framed to the power `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothModelSpec {
    SourceFramed,
    SinkFramed,
}

/// Coefficient table of the smooth-model series. Both flavours must expand
/// with integer coefficients; a fractional one is reported as a
/// correspondence violation rather than returned.
pub fn smooth_model_chi(
    f: &TruncatedSeries,
    a: u32,
    b: u32,
    spec: SmoothModelSpec,
) -> Result<BTreeMap<DimVector, BigInt>, GwError> {
    WallAutomorphism::new(a, b, f.clone())?;
    require_unit_weights(f)?;

    let exponent = match spec {
        SmoothModelSpec::SourceFramed => b,
        SmoothModelSpec::SinkFramed => a,
    };
    let g = f.pow_int(exponent as i64)?;
    let mut table = BTreeMap::new();
    for (m, coeff) in g.iter_terms() {
        let total: u32 = m.exponents.iter().sum();
        if total == 0 {
            continue;
        }
        let d = dim_vector_of(f, &m.exponents);
        if !coeff.is_integer() {
            return Err(GwError::NonIntegerSmoothModel(
                d.to_string(),
                format_rat(coeff),
            ));
        }
        table.insert(d, coeff.to_integer());
    }
    Ok(table)
}

/// One row of the correspondence report: a level-1 dimension vector, its
/// wall-crossing number, the moduli Euler characteristic, and whether the
/// two agree.
#[derive(Debug, Clone)]
pub struct CorrespondenceRow {
    pub d: DimVector,
    pub gw: BigRational,
    pub chi: BigInt,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub l1: usize,
    pub l2: usize,
    pub a: u32,
    pub b: u32,
    pub rows: Vec<CorrespondenceRow>,
    /// Sum of the wall-crossing numbers over all rows, the aggregated `N[1]`.
    pub total: BigRational,
    pub pass: bool,
}

impl CorrespondenceReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "d": r.d.to_string(),
                    "gw": format_rat(&r.gw),
                    "chi": r.chi.to_string(),
                    "ok": r.ok,
                })
            })
            .collect();
        json!({
            "l1": self.l1,
            "l2": self.l2,
            "a": self.a,
            "b": self.b,
            "rows": rows,
            "total": format_rat(&self.total),
            "pass": self.pass,
        })
    }
}

/// Compare the refined numbers of the `(a, b)` wall of the complete
/// bipartite initial data against stable-moduli Euler characteristics, one
/// row per level-1 dimension vector.
///
/// On a primitive direction a proper nonzero subvector of a level-1 vector
/// can never have equal slope, so every row is coprime for the standard
/// stability and the moduli side is always defined.
pub fn coprime_correspondence_check(
    l1: usize,
    l2: usize,
    a: u32,
    b: u32,
    order: u32,
) -> Result<CorrespondenceReport, GwError> {
    if gcd(a, b) != 1 {
        return Err(GwError::NotPrimitive(a, b));
    }
    assert!(order >= a + b, "order too small to see level 1");

    let init = InitialData::symmetric(l1, l2, order)?;
    let scattering = factorize(&init)?;
    let f = scattering.wall_function(a, b);
    let table = gw_from_wall(&f, a, b)?;

    let quiver = BipartiteQuiver::complete(l1, l2);
    let stab = StabilitySpec::standard(&quiver);
    let mut rows = Vec::new();
    let mut total = BigRational::zero();
    let mut pass = true;
    for p1 in vectors_with_sum(l1, a) {
        for p2 in vectors_with_sum(l2, b) {
            let d = DimVector::new(p1.clone(), p2);
            let gw = table.refined(&d);
            let chi = hn::euler_stable(&quiver, &stab, &d)?;
            let ok = gw == BigRational::from_integer(chi.clone());
            pass &= ok;
            total = &total + &gw;
            rows.push(CorrespondenceRow { d, gw, chi, ok });
        }
    }
    Ok(CorrespondenceReport {
        l1,
        l2,
        a,
        b,
        rows,
        total,
        pass,
    })
}

/// Check the balanced divisibility at level `k`: the aggregated Euler
/// characteristic over the complete bipartite quiver on `m + m` vertices
/// equals `m` times the Euler characteristic of the Kronecker `m`-quiver
/// moduli at dimension `(ka, kb)`.
///
/// Level 1 is assembled directly from the moduli recursion; higher levels
/// contain non-coprime vectors and go through wall factorization and
/// extraction instead.
pub fn balanced_divisibility_check(m: usize, a: u32, b: u32, k: u32) -> Result<bool, GwError> {
    if gcd(a, b) != 1 {
        return Err(GwError::NotPrimitive(a, b));
    }
    assert!(k >= 1);

    let quiver = BipartiteQuiver::complete(m, m);
    let stab = StabilitySpec::standard(&quiver);
    let left = if k == 1 {
        let mut chi = ChiTable::new(m, m, a, b);
        chi.fill_from_recursion(&quiver, &stab, 1)?;
        chi.aggregated(1)?
    } else {
        let init = InitialData::symmetric(m, m, k * (a + b))?;
        let f = factorize(&init)?.wall_function(a, b);
        extract_chi(&f, a, b)?.aggregated(k)?
    };

    let kronecker = BipartiteQuiver::kronecker(m as u32);
    let kstab = StabilitySpec::standard(&kronecker);
    let d = DimVector::new(vec![k * a], vec![k * b]);
    let right = hn::euler_stable(&kronecker, &kstab, &d)?;
    Ok(left == BigInt::from(m as u64) * right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::series::{Monomial, SeriesContext};
    use num::One;

    fn pentagon_wall(order: u32) -> TruncatedSeries {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let m = Monomial::new(vec![1, 1]);
        let one = TruncatedSeries::one(ctx.clone(), order).unwrap();
        &one + &TruncatedSeries::monomial(ctx, order, &m, BigRational::one()).unwrap()
    }

    /// The closed form of the central wall on two sinks and two sources:
    /// the product of the four binomials over (1 - s1 s2 t1 t2 x^2 y^2)^4.
    fn central_two_by_two_wall(order: u32) -> TruncatedSeries {
        let ctx = SeriesContext::bipartite(2, 2).unwrap();
        let one = TruncatedSeries::one(ctx.clone(), order).unwrap();
        let mut f = one.clone();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let mut exps = vec![0u32; 4];
            exps[i] = 1;
            exps[2 + j] = 1;
            let m =
                TruncatedSeries::monomial(ctx.clone(), order, &Monomial::new(exps), BigRational::one())
                    .unwrap();
            f = &f * &(&one + &m);
        }
        let w = TruncatedSeries::monomial(
            ctx,
            order,
            &Monomial::new(vec![1, 1, 1, 1]),
            BigRational::one(),
        )
        .unwrap();
        &f * &(&one - &w).pow_int(-4).unwrap()
    }

    #[test]
    fn pentagon_numbers_follow_the_alternating_squares() {
        let table = gw_from_wall(&pentagon_wall(8), 1, 1).unwrap();
        assert_eq!(table.max_level(), 4);
        for k in 1..=4u32 {
            let d = DimVector::new(vec![k], vec![k]);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let expected = rat(sign, (k * k) as i64);
            assert_eq!(table.refined(&d), expected);
            assert_eq!(table.aggregated(k), expected);
        }
    }

    #[test]
    fn central_wall_fixtures_on_two_by_two() {
        let table = gw_from_wall(&central_two_by_two_wall(8), 1, 1).unwrap();
        // Four unit dimension vectors, each contributing one.
        assert_eq!(table.aggregated(1), rat(4, 1));
        assert_eq!(
            table.refined(&DimVector::new(vec![1, 0], vec![1, 0])),
            rat(1, 1)
        );
        // The balanced vector at level 2 and the pure powers of one factor.
        assert_eq!(
            table.refined(&DimVector::new(vec![1, 1], vec![1, 1])),
            rat(2, 1)
        );
        for k in 1..=4u32 {
            let d = DimVector::new(vec![k, 0], vec![k, 0]);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(table.refined(&d), rat(sign, (k * k) as i64));
        }
        // Level 2 sums to 4 * (-1/4) from the pure powers plus 2.
        assert_eq!(table.aggregated(2), rat(1, 1));
    }

    #[test]
    fn smooth_model_of_the_central_wall_is_integral() {
        let f = central_two_by_two_wall(8);
        let table = smooth_model_chi(&f, 1, 1, SmoothModelSpec::SourceFramed).unwrap();
        assert_eq!(
            table[&DimVector::new(vec![1, 0], vec![1, 0])],
            BigInt::from(1)
        );
        // 2 from pairing two disjoint binomial factors, 4 from the
        // denominator expansion.
        assert_eq!(
            table[&DimVector::new(vec![1, 1], vec![1, 1])],
            BigInt::from(6)
        );
        // Both framings coincide on the diagonal direction.
        let sink = smooth_model_chi(&f, 1, 1, SmoothModelSpec::SinkFramed).unwrap();
        assert_eq!(table, sink);
    }

    #[test]
    fn fractional_smooth_model_is_a_violation() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let one = TruncatedSeries::one(ctx.clone(), 4).unwrap();
        let m = TruncatedSeries::monomial(ctx, 4, &Monomial::new(vec![1, 1]), rat(1, 2)).unwrap();
        let f = &one + &m;
        let err = smooth_model_chi(&f, 1, 1, SmoothModelSpec::SourceFramed).unwrap_err();
        assert!(matches!(err, GwError::NonIntegerSmoothModel(_, _)));
    }

    #[test]
    fn one_sink_three_sources_correspondence_holds() {
        let report = coprime_correspondence_check(1, 3, 1, 3, 4).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 10);
        assert_eq!(report.total, rat(1, 1));
        let row = report
            .rows
            .iter()
            .find(|r| r.d == DimVector::new(vec![1], vec![1, 1, 1]))
            .unwrap();
        assert_eq!(row.gw, rat(1, 1));
        assert_eq!(row.chi, BigInt::from(1));
    }

    #[test]
    fn balanced_divisibility_in_the_smallest_cases() {
        assert!(balanced_divisibility_check(1, 1, 1, 1).unwrap());
        assert!(balanced_divisibility_check(2, 1, 1, 1).unwrap());
    }

    #[test]
    fn non_primitive_directions_are_rejected() {
        assert!(matches!(
            coprime_correspondence_check(1, 1, 2, 2, 8),
            Err(GwError::NotPrimitive(2, 2))
        ));
    }
}
