//! Ordered factorization of commutators in the tropical vertex group.
//!
//! The group elements used here are automorphisms
//!
//! ```text
//! T_{(a,b),f} : x -> x f^{-b},   y -> y f^{a}
//! ```
//!
//! of the ring of truncated series with Laurent part `x^p y^q` locked to the
//! variable content (see [`crate::series`]). The wall function `f` must have
//! constant term 1 and be supported on the ray of bidegrees
//! `k (a, b), k >= 1`, for a primitive direction `(a, b)`. On such support
//! `T` fixes `f` itself, so inverses stay in the same family.
//!
//! [`factorize`] computes the unique ordered product
//!
//! ```text
//! T_{(1,0),Fx} . T_{(0,1),Fy}
//!     = prod_{(a,b) primitive, b/a decreasing} T_{(a,b), f_{(a,b)}}
//! ```
//!
//! (composition is right-to-left: the rightmost factor acts first), with
//! `Fx`, `Fy` the initial data, order by order in the adic filtration:
//! assuming the walls are correct modulo order `n`, the discrepancy between
//! the two sides acting on `x` and `y` is concentrated in order `n`, each
//! discrepancy monomial of bidegree `k (a, b)` lifts to a correction of the
//! wall at slope `(a, b)`, and the two actions over-determine that correction
//! (the `x` action sees `-b c`, the `y` action sees `a c`), which is checked
//! exactly at every step. The returned [`Scattering`] is re-verified by
//! composing the full ordered product and comparing both actions against the
//! left-hand side at the requested order, so a successful run is a proof of
//! the factorization at that truncation.

use crate::numerics::{binom_int, BigRational};
use crate::series::{SeriesContext, SeriesError, TruncatedSeries};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WallcrossError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("wall function has constant term {0}, expected 1")]
    WallConstant(String),
    #[error("wall function monomial {0} has bidegree ({1}, {2}), not on the ray of ({3}, {4})")]
    OffRay(String, u32, u32, u32, u32),
    #[error("direction (0, 0) is not a wall direction")]
    ZeroDirection,
    #[error(
        "internal consistency failure at order {order}: residual term {monomial} of lower order"
    )]
    LowerOrderResidual { order: u32, monomial: String },
    #[error("overdetermined correction mismatch at {monomial}: x action gives {from_x}, y action gives {from_y}")]
    CrossCheckFailed {
        monomial: String,
        from_x: String,
        from_y: String,
    },
    #[error("ordered product does not reproduce the {side} action at order {order}")]
    CompositionMismatch { side: char, order: u32 },
}

/// The automorphism `x -> x f^{-b}, y -> y f^{a}` for a primitive direction
/// `(a, b)` and a wall function `f` supported on that ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallAutomorphism {
    a: u32,
    b: u32,
    f: TruncatedSeries,
}

impl WallAutomorphism {
    /// Validates that `(a, b)` is nonzero, `f` has constant term 1 and every
    /// nonconstant monomial of `f` has bidegree a positive multiple of
    /// `(a, b)`.
    pub fn new(a: u32, b: u32, f: TruncatedSeries) -> Result<Self, WallcrossError> {
        if a == 0 && b == 0 {
            return Err(WallcrossError::ZeroDirection);
        }
        if !f.constant_term().is_one() {
            return Err(WallcrossError::WallConstant(f.constant_term().to_string()));
        }
        for (key, _) in &f.terms {
            if *key == 0 {
                continue;
            }
            let (p, q) = f.context.bidegree_of(*key);
            let on_ray = if a != 0 {
                p % a == 0 && p / a >= 1 && q == (p / a) * b
            } else {
                p == 0 && q % b == 0 && q / b >= 1
            };
            if !on_ray {
                return Err(WallcrossError::OffRay(
                    f.context.monomial_text(*key),
                    p,
                    q,
                    a,
                    b,
                ));
            }
        }
        Ok(WallAutomorphism { a, b, f })
    }

    pub fn direction(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn wall_function(&self) -> &TruncatedSeries {
        &self.f
    }

    /// Apply the automorphism to a series: a monomial `m` of bidegree
    /// `(p, q)` maps to `m f^{aq - bp}`. Grouping by the binomial expansion
    /// `f^e = sum_j C(e, j) (f - 1)^j` turns the whole action into
    /// `sum_j (f-1)^j G_j` with `G_j = sum_m C(e_m, j) c_m m`, so the cost is
    /// one series multiplication per power of `f - 1` that survives the
    /// truncation, not one per input monomial.
    pub fn apply(&self, g: &TruncatedSeries) -> TruncatedSeries {
        assert!(
            **self.f.context() == **g.context(),
            "wall and argument live in different contexts"
        );
        let order = g.order().min(self.f.order());
        let h = self.f.add_constant(&-BigRational::one()).truncated(order);
        let Some(h_ord) = h.min_nonconstant_order() else {
            return g.truncated(order);
        };
        let jmax = order / h_ord;
        // Per-monomial exponents of f, reused across all j.
        let exps: Vec<BigInt> = g
            .terms
            .iter()
            .map(|(key, _)| {
                let (p, q) = g.context().bidegree_of(*key);
                BigInt::from(self.a as i64 * q as i64 - self.b as i64 * p as i64)
            })
            .collect();
        let mut acc = TruncatedSeries::zero(g.context().clone(), order).expect("order in range");
        let mut h_pow = TruncatedSeries::one(g.context().clone(), order).expect("order in range");
        for j in 0..=jmax {
            if j > 0 {
                h_pow = &h_pow * &h;
                if h_pow.is_zero() {
                    break;
                }
            }
            // The j-th power of h shifts orders up by at least j * h_ord, so
            // G_j only needs terms up to the remaining budget.
            let budget = order - j * h_ord;
            let mut gj_terms = Vec::new();
            for (i, (key, c)) in g.terms.iter().enumerate() {
                if SeriesContext::order_of(*key) > budget {
                    continue;
                }
                let w = binom_int(&exps[i], j as u64);
                if w.is_zero() {
                    continue;
                }
                gj_terms.push((*key, c * BigRational::from_integer(w)));
            }
            gj_terms.retain(|(_, c)| !c.is_zero());
            if gj_terms.is_empty() {
                continue;
            }
            let gj = TruncatedSeries::from_sorted_terms(g.context().clone(), order, gj_terms);
            acc = &acc + &(&h_pow * &gj);
        }
        acc
    }
}

impl fmt::Display for WallAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): {}", self.a, self.b, self.f)
    }
}

/// Primitive slope ordered by product position: directions appear in the
/// ordered factorization by decreasing `b / a`, so `(0, 1)` sorts first and
/// `(1, 0)` last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SlopeKey {
    a: u32,
    b: u32,
}

impl Ord for SlopeKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = other.b as u64 * self.a as u64;
        let rhs = self.b as u64 * other.a as u64;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for SlopeKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compare two primitive directions by product position (decreasing
/// `b / a`).
pub fn product_position(a1: u32, b1: u32, a2: u32, b2: u32) -> std::cmp::Ordering {
    SlopeKey { a: a1, b: b1 }.cmp(&SlopeKey { a: a2, b: b2 })
}

/// The left-hand side of the factorization: the pair of initial
/// automorphisms `T_{(1,0),Fx}` and `T_{(0,1),Fy}`.
#[derive(Clone, Debug)]
pub struct InitialData {
    context: Arc<SeriesContext>,
    order: u32,
    fx: TruncatedSeries,
    fy: TruncatedSeries,
}

impl InitialData {
    /// `Fx = prod_k (1 + s_k x)`, `Fy = prod_l (1 + t_l y)` over the
    /// bipartite context with `l1` s-variables and `l2` t-variables.
    pub fn symmetric(l1: usize, l2: usize, order: u32) -> Result<Self, WallcrossError> {
        let context = SeriesContext::bipartite(l1, l2)?;
        Self::products_of_linear_factors(context, l1, order)
    }

    /// Levelled initial data: a weight-`r` x-axis variable `s` contributes a
    /// factor `(1 + s x^r)^r` to `Fx`, and similarly on the y-axis.
    pub fn levelled(
        sink_counts: &[u32],
        source_counts: &[u32],
        order: u32,
    ) -> Result<Self, WallcrossError> {
        let context = SeriesContext::levelled(sink_counts, source_counts)?;
        let num_x = sink_counts.iter().sum::<u32>() as usize;
        Self::products_of_linear_factors(context, num_x, order)
    }

    fn products_of_linear_factors(
        context: Arc<SeriesContext>,
        num_x: usize,
        order: u32,
    ) -> Result<Self, WallcrossError> {
        let mut fx = TruncatedSeries::one(context.clone(), order)?;
        let mut fy = TruncatedSeries::one(context.clone(), order)?;
        for (i, v) in context.vars().iter().enumerate() {
            let mut exps = vec![0u32; context.num_vars()];
            exps[i] = 1;
            let var = TruncatedSeries::from_terms(
                context.clone(),
                order,
                [(crate::series::Monomial::new(exps), BigRational::one())],
            )?;
            let factor = (&TruncatedSeries::one(context.clone(), order)? + &var)
                .pow_int(v.weight as i64)?;
            if i < num_x {
                fx = &fx * &factor;
            } else {
                fy = &fy * &factor;
            }
        }
        Ok(InitialData {
            context,
            order,
            fx,
            fy,
        })
    }

    /// Initial data with explicitly given `Fx`, `Fy` (validated to be
    /// supported on the `(1, 0)` and `(0, 1)` rays respectively).
    pub fn from_walls(fx: TruncatedSeries, fy: TruncatedSeries) -> Result<Self, WallcrossError> {
        let order = fx.order().min(fy.order());
        let context = fx.context().clone();
        WallAutomorphism::new(1, 0, fx.clone())?;
        let wy = WallAutomorphism::new(0, 1, fy.clone());
        if fx.context() != fy.context() {
            // Same error surface as the series layer would raise on a mixed
            // operation, but without panicking.
            return Err(WallcrossError::Series(SeriesError::BadJson(
                "initial walls live in different contexts".into(),
            )));
        }
        wy?;
        Ok(InitialData {
            context,
            order,
            fx,
            fy,
        })
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.context
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn fx(&self) -> &TruncatedSeries {
        &self.fx
    }

    pub fn fy(&self) -> &TruncatedSeries {
        &self.fy
    }

    fn as_walls(&self, order: u32) -> Vec<WallAutomorphism> {
        vec![
            WallAutomorphism::new(1, 0, self.fx.truncated(order)).expect("valid initial wall"),
            WallAutomorphism::new(0, 1, self.fy.truncated(order)).expect("valid initial wall"),
        ]
    }
}

/// The result of a factorization: walls in product order (decreasing
/// `b / a`), all with wall functions truncated at `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scattering {
    context: Arc<SeriesContext>,
    order: u32,
    walls: Vec<WallAutomorphism>,
}

impl Scattering {
    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.context
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Walls in product order.
    pub fn walls(&self) -> &[WallAutomorphism] {
        &self.walls
    }

    /// The wall at a primitive direction, if present.
    pub fn wall(&self, a: u32, b: u32) -> Option<&WallAutomorphism> {
        self.walls.iter().find(|w| w.direction() == (a, b))
    }

    /// The wall function at a primitive direction; identity (constant 1) if
    /// the direction carries no wall.
    pub fn wall_function(&self, a: u32, b: u32) -> TruncatedSeries {
        match self.wall(a, b) {
            Some(w) => w.f.clone(),
            None => TruncatedSeries::one(self.context.clone(), self.order)
                .expect("scattering order is valid"),
        }
    }

    /// Recompose the ordered product and compare its action on `x` and `y`
    /// with the initial pair, exactly, at the scattering's order.
    pub fn verify(&self, init: &InitialData) -> Result<(), WallcrossError> {
        let order = self.order.min(init.order());
        let lhs = init.as_walls(order);
        for on_x in [true, false] {
            let want = chain_action(&lhs, on_x, order)?;
            let got = chain_action(&self.walls, on_x, order)?;
            if want != got {
                return Err(WallcrossError::CompositionMismatch {
                    side: if on_x { 'x' } else { 'y' },
                    order,
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let walls: Vec<serde_json::Value> = self
            .walls
            .iter()
            .map(|w| {
                serde_json::json!({
                    "a": w.a,
                    "b": w.b,
                    "f": w.f.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "order": self.order,
            "walls": walls,
        })
    }
}

/// The series `G` such that the ordered product sends `x -> x G` (`on_x`) or
/// `y -> y G`. Walls are given in product order, so the rightmost acts first:
/// folding from the right, `T_{(a,b),f}` maps `x G` to `x f^{-b} T(G)`.
fn chain_action(
    walls: &[WallAutomorphism],
    on_x: bool,
    order: u32,
) -> Result<TruncatedSeries, WallcrossError> {
    let Some(first) = walls.first() else {
        panic!("chain_action requires at least one wall");
    };
    let mut g = TruncatedSeries::one(first.f.context().clone(), order)?;
    for w in walls.iter().rev() {
        let exp = if on_x { -(w.b as i64) } else { w.a as i64 };
        let transported = w.apply(&g);
        if exp == 0 {
            g = transported;
        } else {
            g = &w.f.truncated(order).pow_int(exp)? * &transported;
        }
    }
    Ok(g)
}

fn primitive_direction(p: u32, q: u32) -> (u32, u32, u32) {
    let g = num::integer::gcd(p, q);
    debug_assert!(g > 0);
    (p / g, q / g, g)
}

/// Factor the commutator of the initial pair into the ordered product of
/// wall automorphisms, exactly, up to the initial data's truncation order.
pub fn factorize(init: &InitialData) -> Result<Scattering, WallcrossError> {
    let order = init.order();
    let context = init.context().clone();
    let mut walls: BTreeMap<SlopeKey, TruncatedSeries> = BTreeMap::new();
    walls.insert(SlopeKey { a: 1, b: 0 }, init.fx().clone());
    walls.insert(SlopeKey { a: 0, b: 1 }, init.fy().clone());

    let lhs_full = init.as_walls(order);
    let lhs_x = chain_action(&lhs_full, true, order)?;
    let lhs_y = chain_action(&lhs_full, false, order)?;

    for n in 1..=order {
        let current: Vec<WallAutomorphism> = walls
            .iter()
            .map(|(k, f)| {
                WallAutomorphism::new(k.a, k.b, f.truncated(n)).expect("walls stay valid")
            })
            .collect();
        let mut residuals = Vec::with_capacity(2);
        for on_x in [true, false] {
            let lhs = if on_x { &lhs_x } else { &lhs_y };
            let rhs = chain_action(&current, on_x, n)?;
            let ratio = &lhs.truncated(n) * &rhs.inverse()?;
            residuals.push(ratio.add_constant(&-BigRational::one()));
        }
        let (dx, dy) = (&residuals[0], &residuals[1]);
        if dx.is_zero() && dy.is_zero() {
            continue;
        }
        // All residual monomials must sit in order exactly n; lower-order
        // residue would mean the induction broke.
        let mut keys: Vec<u64> = dx.terms.iter().chain(dy.terms.iter()).map(|t| t.0).collect();
        keys.sort_unstable();
        keys.dedup();
        let mut corrections: BTreeMap<SlopeKey, Vec<(u64, BigRational)>> = BTreeMap::new();
        for key in keys {
            if SeriesContext::order_of(key) != n {
                return Err(WallcrossError::LowerOrderResidual {
                    order: n,
                    monomial: context.monomial_text(key),
                });
            }
            let (p, q) = context.bidegree_of(key);
            let (a, b, _) = primitive_direction(p, q);
            let cx = dx.coeff_key(key);
            let cy = dy.coeff_key(key);
            let c = if a > 0 {
                &cy / BigRational::from_integer(BigInt::from(a))
            } else {
                -&cx / BigRational::from_integer(BigInt::from(b))
            };
            // The same correction must explain both actions.
            let expect_x = -&c * BigRational::from_integer(BigInt::from(b));
            let expect_y = &c * BigRational::from_integer(BigInt::from(a));
            if cx != expect_x || cy != expect_y {
                return Err(WallcrossError::CrossCheckFailed {
                    monomial: context.monomial_text(key),
                    from_x: cx.to_string(),
                    from_y: cy.to_string(),
                });
            }
            corrections
                .entry(SlopeKey { a, b })
                .or_default()
                .push((key, c));
        }
        for (slope, terms) in corrections {
            let delta = TruncatedSeries::from_sorted_terms(context.clone(), order, terms)
                .add_constant(&BigRational::one());
            walls
                .entry(slope)
                .and_modify(|f| *f = &*f * &delta)
                .or_insert(delta);
        }
    }

    let result = Scattering {
        context,
        order,
        walls: walls
            .into_iter()
            .filter(|(_, f)| !f.constant_term().is_zero())
            .map(|(k, f)| WallAutomorphism::new(k.a, k.b, f).expect("walls stay valid"))
            .collect(),
    };
    result.verify(init)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};
    use crate::series::Monomial;

    #[test]
    fn pentagon_factorization() {
        let init = InitialData::symmetric(1, 1, 6).unwrap();
        let sc = factorize(&init).unwrap();
        let dirs: Vec<(u32, u32)> = sc.walls().iter().map(|w| w.direction()).collect();
        assert_eq!(dirs, vec![(0, 1), (1, 1), (1, 0)]);
        // Middle wall is exactly 1 + s1 t1 x y.
        let middle = sc.wall(1, 1).unwrap().wall_function();
        assert_eq!(
            middle.coeff(&Monomial::new(vec![1, 1])).unwrap(),
            rat_int(1)
        );
        assert_eq!(middle.num_terms(), 2);
        // Extreme walls stay the initial data.
        assert_eq!(sc.wall_function(1, 0), *init.fx());
        assert_eq!(sc.wall_function(0, 1), *init.fy());
    }

    #[test]
    fn apply_matches_direct_substitution() {
        // T_{(1,1),1+sxy} applied to a single monomial of bidegree (1,0)
        // gives m * f^{1*0-1*1}... exercised through a concrete example:
        // g = s (bidegree (1,0)), e = a q - b p = -1, so T(g) = s (1+s t)^{-1}.
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let one = TruncatedSeries::one(ctx.clone(), 6).unwrap();
        let st = TruncatedSeries::monomial(ctx.clone(), 6, &Monomial::new(vec![1, 1]), rat_int(1))
            .unwrap();
        let f = &one + &st;
        let w = WallAutomorphism::new(1, 1, f.clone()).unwrap();
        let g = TruncatedSeries::monomial(ctx.clone(), 6, &Monomial::new(vec![1, 0]), rat_int(1))
            .unwrap();
        let expect = &g * &f.pow_int(-1).unwrap();
        assert_eq!(w.apply(&g), expect);
    }

    #[test]
    fn wall_validation_rejects_off_ray_support() {
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let one = TruncatedSeries::one(ctx.clone(), 6).unwrap();
        let s = TruncatedSeries::monomial(ctx.clone(), 6, &Monomial::new(vec![1, 0]), rat_int(1))
            .unwrap();
        let f = &one + &s;
        assert!(matches!(
            WallAutomorphism::new(1, 1, f),
            Err(WallcrossError::OffRay(..))
        ));
    }

    #[test]
    fn product_position_ordering() {
        use std::cmp::Ordering::*;
        assert_eq!(product_position(0, 1, 1, 1), Less);
        assert_eq!(product_position(1, 1, 1, 0), Less);
        assert_eq!(product_position(1, 2, 1, 1), Less);
        assert_eq!(product_position(2, 3, 1, 2), Greater);
        assert_eq!(product_position(1, 1, 1, 1), Equal);
    }

    #[test]
    fn scale_invariance_of_corrections() {
        // Scaling the initial data coefficients must not break the
        // cross-check between x and y actions.
        let ctx = SeriesContext::bipartite(1, 1).unwrap();
        let one = TruncatedSeries::one(ctx.clone(), 5).unwrap();
        let s = TruncatedSeries::monomial(ctx.clone(), 5, &Monomial::new(vec![1, 0]), rat(2, 3))
            .unwrap();
        let t = TruncatedSeries::monomial(ctx.clone(), 5, &Monomial::new(vec![0, 1]), rat(-5, 7))
            .unwrap();
        let init = InitialData::from_walls(&one + &s, &one + &t).unwrap();
        let sc = factorize(&init).unwrap();
        sc.verify(&init).unwrap();
        let middle = sc.wall(1, 1).unwrap().wall_function();
        assert_eq!(
            middle.coeff(&Monomial::new(vec![1, 1])).unwrap(),
            rat(2, 3) * rat(-5, 7)
        );
    }
}
