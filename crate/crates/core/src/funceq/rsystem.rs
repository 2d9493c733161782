//! The coupled functional-equation system for one slope ray.
//!
//! For a primitive direction `(a, b)` there is one unknown series `R^d` per
//! dimension vector `d = (P1, P2)` with `|P1| = ka`, `|P2| = kb`, `k >= 1`,
//! tied together by
//!
//! ```text
//! R^d = (1 - m_d * prod_{d'} (R^{d'})^{-<d, d'> chi(d')})^{-1}
//! ```
//!
//! where `m_d` is the monomial `s^{P1} t^{P2}` (which carries `x^{ka} y^{kb}`
//! through its bidegree) and the product runs over every vector on the ray,
//! `d' = d` included. The wall function is recovered as
//! `f = prod_d (R^d)^{k_d chi(d)}`.
//!
//! A vector with `chi(d) = 0` appears with exponent zero both in `f` and in
//! every equation (the exponent carries the factor `chi(d')`), so it
//! influences nothing: the solver iterates only over the support
//! `chi(d) != 0` and evaluates the decoupled equations in a single pass
//! afterwards so the returned solution still covers the whole ray.
//!
//! Going the other way, [`extract_chi`] reads a table off a factorized wall
//! function level by level. Re-solving with trial zeros at level `k` leaves
//! every contribution to a level-`k` coefficient intact except the linear
//! one from `f`'s own exponent, because a level-`k` correction inside any
//! equation or any cross product lands at order `> k(a+b)` and is truncated.
//! The coefficient difference at `m_d` is therefore exactly `k * chi(d)`.

use super::chi::{ChiTable, Provenance};
use super::FunceqError;
use crate::quiver::{BipartiteQuiver, DimVector};
use crate::series::{Monomial, SeriesContext, TruncatedSeries};
use crate::wallcross::WallAutomorphism;
use num::{BigInt, One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Solved values `R^d` for every vector on the ray up to the truncation's
/// maximum level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSystemSolution {
    a: u32,
    b: u32,
    order: u32,
    entries: BTreeMap<DimVector, TruncatedSeries>,
}

impl RSystemSolution {
    pub fn direction(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, d: &DimVector) -> Option<&TruncatedSeries> {
        self.entries.get(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &TruncatedSeries)> + '_ {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The monomial `s^{P1} t^{P2}` as a series.
fn ray_monomial(
    context: &Arc<SeriesContext>,
    order: u32,
    d: &DimVector,
) -> Result<TruncatedSeries, FunceqError> {
    let mut exps: Vec<u32> = d.sinks.clone();
    exps.extend_from_slice(&d.sources);
    Ok(TruncatedSeries::monomial(
        context.clone(),
        order,
        &Monomial::new(exps),
        num::BigRational::one(),
    )?)
}

fn chi_to_i64(d: &DimVector, chi: &BigInt) -> Result<i64, FunceqError> {
    chi.to_i64()
        .ok_or_else(|| FunceqError::ExponentOverflow(format!("chi({d}) = {chi}")))
}

/// One unknown of the system, with everything the sweep needs precomputed.
struct Variable {
    d: DimVector,
    level: u32,
    chi: i64,
    monomial: TruncatedSeries,
    value: TruncatedSeries,
}

/// Evaluate the right-hand side of the equation for `d` at the current
/// support values.
fn equation_rhs(
    quiver: &BipartiteQuiver,
    d: &DimVector,
    monomial: &TruncatedSeries,
    support: &[Variable],
) -> Result<TruncatedSeries, FunceqError> {
    let order = monomial.order();
    let context = monomial.context().clone();
    let mut prod = TruncatedSeries::one(context, order)?;
    for v in support {
        let pairing = quiver.euler_form(d, &v.d);
        let e = pairing
            .checked_mul(v.chi)
            .and_then(i64::checked_neg)
            .ok_or_else(|| {
                FunceqError::ExponentOverflow(format!("-<{d}, {}> chi = -{pairing} * {}", v.d, v.chi))
            })?;
        if e != 0 {
            prod = &prod * &v.value.pow_int(e)?;
        }
    }
    let inner = monomial * &prod;
    Ok((&TruncatedSeries::one(inner.context().clone(), order)? - &inner).inverse()?)
}

/// Solve the functional-equation system of `chi`'s ray over the complete
/// bipartite quiver of the table's shape at truncation `order`, returning
/// the solved `R^d` and the reassembled wall function
/// `f = prod (R^d)^{k chi(d)}`.
///
/// The table must be complete on every level reachable within the
/// truncation, i.e. `k <= order / (a + b)`. Iteration sweeps the support in
/// increasing level order and reuses values updated earlier in the same
/// sweep; since every unknown enters the others only through a factor of
/// adic order `>= a + b`, the lowest order at which a sweep still changes
/// anything must strictly increase from sweep to sweep, which the solver
/// enforces. A sweep that changes nothing has verified that the current
/// values satisfy every truncated equation exactly, so that is both the
/// termination test and the residual check.
#[allow(non_snake_case)]
pub fn solve_R_system(
    chi: &ChiTable,
    order: u32,
) -> Result<(RSystemSolution, TruncatedSeries), FunceqError> {
    let (l1, l2) = chi.shape();
    let quiver = BipartiteQuiver::complete(l1, l2);
    let quiver = &quiver;
    let (a, b) = chi.direction();
    let context = SeriesContext::bipartite(l1, l2)?;
    let max_level = order / (a + b);

    let mut support: Vec<Variable> = Vec::new();
    let mut decoupled: Vec<DimVector> = Vec::new();
    for k in 1..=max_level {
        for d in chi.ray_vectors(k) {
            let chi_d = chi
                .get(&d)
                .ok_or_else(|| FunceqError::MissingChi(d.to_string(), k))?;
            if chi_d.is_zero() {
                decoupled.push(d);
                continue;
            }
            let chi_d = chi_to_i64(&d, chi_d)?;
            let monomial = ray_monomial(&context, order, &d)?;
            support.push(Variable {
                d,
                level: k,
                chi: chi_d,
                monomial: monomial.clone(),
                value: &TruncatedSeries::one(context.clone(), order)? + &monomial,
            });
        }
    }

    let mut change_floor = 0u32;
    let mut sweeps = 0usize;
    loop {
        sweeps += 1;
        let mut min_change: Option<u32> = None;
        for i in 0..support.len() {
            let new = equation_rhs(quiver, &support[i].d, &support[i].monomial, &support)?;
            if new != support[i].value {
                let delta = &new - &support[i].value;
                let changed_at = delta
                    .min_nonconstant_order()
                    .expect("series differing only in nonconstant terms");
                min_change = Some(min_change.map_or(changed_at, |m: u32| m.min(changed_at)));
                support[i].value = new;
            }
        }
        match min_change {
            None => break,
            Some(o) if o > change_floor => change_floor = o,
            Some(_) => return Err(FunceqError::NoProgress(sweeps)),
        }
    }

    let mut f = TruncatedSeries::one(context.clone(), order)?;
    for v in &support {
        let e = (v.level as i64).checked_mul(v.chi).ok_or_else(|| {
            FunceqError::ExponentOverflow(format!("{} * chi({})", v.level, v.d))
        })?;
        f = &f * &v.value.pow_int(e)?;
    }

    let mut entries: BTreeMap<DimVector, TruncatedSeries> = BTreeMap::new();
    for d in decoupled {
        let monomial = ray_monomial(&context, order, &d)?;
        let value = equation_rhs(quiver, &d, &monomial, &support)?;
        entries.insert(d, value);
    }
    for v in support {
        entries.insert(v.d, v.value);
    }

    Ok((RSystemSolution { a, b, order, entries }, f))
}

/// Read the table of Euler characteristics off a factorized wall function by
/// the level-by-level triangular solve, then re-solve the full system and
/// demand it reproduces `f` exactly. The function must live over the
/// standard bipartite variables (`s1..s{l1}`, `t1..t{l2}`), which names the
/// quiver.
pub fn extract_chi(f: &TruncatedSeries, a: u32, b: u32) -> Result<ChiTable, FunceqError> {
    // Reject anything that is not a wall function on this ray up front.
    WallAutomorphism::new(a, b, f.clone())?;
    let l1 = f
        .context()
        .vars()
        .iter()
        .filter(|v| v.axis == crate::series::Axis::X)
        .count();
    let l2 = f.context().num_vars() - l1;
    assert!(
        **f.context() == *SeriesContext::bipartite(l1, l2)?,
        "extraction expects the standard bipartite variable layout"
    );
    let order = f.order();
    let max_level = order / (a + b);
    let mut table = ChiTable::new(l1, l2, a, b);

    for k in 1..=max_level {
        let vectors = table.ray_vectors(k);
        let mut trial = table.clone();
        for d in &vectors {
            trial.set(d.clone(), BigInt::zero(), Provenance::Extracted)?;
        }
        let (_, f_trial) = solve_R_system(&trial, k * (a + b))?;
        for d in vectors {
            let mut exps = d.sinks.clone();
            exps.extend_from_slice(&d.sources);
            let m = Monomial::new(exps);
            let diff = f.coeff(&m)? - f_trial.coeff(&m)?;
            let chi = diff / num::BigRational::from_integer(BigInt::from(k));
            if !chi.is_integer() {
                return Err(FunceqError::NonIntegralExtraction(
                    d.to_string(),
                    chi.to_string(),
                ));
            }
            table.set(d, chi.to_integer(), Provenance::Extracted)?;
        }
    }

    let (_, f_back) = solve_R_system(&table, order)?;
    if &f_back != f {
        return Err(FunceqError::RoundTripFailed);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_int;
    use crate::wallcross::{factorize, InitialData};

    fn unit_table(l1: usize, l2: usize) -> ChiTable {
        let q = BipartiteQuiver::complete(l1, l2);
        let st = crate::quiver::StabilitySpec::standard(&q);
        let mut t = ChiTable::new(l1, l2, 1, 1);
        t.fill_from_recursion(&q, &st, 1).unwrap();
        t
    }

    #[test]
    fn single_variable_system_gives_the_pentagon_wall() {
        // K(1) on the ray of (1, 1): <d, d> = 1 and chi = 1, so the lone
        // equation reads R = (1 - m R^{-1})^{-1}, whose exact solution is
        // R = 1 + m.
        let t = unit_table(1, 1);
        let (sol, f) = solve_R_system(&t, 3).unwrap();
        assert_eq!(sol.len(), 1);
        let d = DimVector::new(vec![1], vec![1]);
        let r = sol.get(&d).unwrap();
        assert_eq!(r.to_string(), "1 + s1*t1*x*y");
        assert_eq!(f, *r);
    }

    #[test]
    fn pentagon_round_trip_matches_factorization() {
        let init = InitialData::symmetric(1, 1, 8).unwrap();
        let sc = factorize(&init).unwrap();
        let f = sc.wall_function(1, 1);
        let table = extract_chi(&f, 1, 1).unwrap();
        // The pentagon's middle wall is 1 + s1 t1 x y: chi(k, k) = 1 at k = 1
        // and 0 beyond.
        for (d, chi, _) in table.iter() {
            let expected = if d.sink_total() == 1 { 1 } else { 0 };
            assert_eq!(chi, &BigInt::from(expected), "chi({d})");
        }
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let t = unit_table(2, 2);
        // Order 4 reaches level 2, which the table does not cover.
        assert!(matches!(
            solve_R_system(&t, 4),
            Err(FunceqError::MissingChi(_, 2))
        ));
    }

    #[test]
    fn non_integral_extraction_is_loud() {
        // Hand a series that is a legitimate ray function but not a wall
        // function of any integral table: f = 1 + (1/2) s1 t1 x y.
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let f = TruncatedSeries::from_terms(
            ctx,
            2,
            [
                (Monomial::new(vec![0, 0]), rat_int(1)),
                (Monomial::new(vec![1, 1]), crate::numerics::rat(1, 2)),
            ],
        )
        .unwrap();
        assert!(matches!(
            extract_chi(&f, 1, 1),
            Err(FunceqError::NonIntegralExtraction(..))
        ));
    }
}
