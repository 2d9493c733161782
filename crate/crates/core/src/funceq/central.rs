//! The algebraic system for the central slope `(1, 1)`.
//!
//! On the central slope every wall contribution beyond level 1 vanishes, and
//! the wall function collapses to a finite product `f = prod_{k,l} R^{k,l}`
//! over unit pairs, with the series determined by
//!
//! ```text
//! R^{k,l} = 1 + s_k t_l x y prod_{k' != k} prod_{l' != l} R^{k',l'}.
//! ```
//!
//! Note the different normalization from the general ray system: here the
//! equations are polynomial (no inversion) and the own-row and own-column
//! factors are excluded.

use super::FunceqError;
use crate::numerics::BigRational;
use crate::series::{Monomial, SeriesContext, TruncatedSeries};
use num::One;
use std::collections::BTreeMap;

struct Cell {
    k: usize,
    l: usize,
    monomial: TruncatedSeries,
    value: TruncatedSeries,
}

/// Solve the central-slope system for the complete bipartite setup, keyed by
/// the 1-based unit pair `(k, l)`, and return it together with the wall
/// function `f_{(1,1)} = prod R^{k,l}`. The sweep logic mirrors
/// [`super::solve_R_system`]: unknowns feed each other only through an
/// order-2 monomial, so the lowest changed order must strictly increase per
/// sweep, and an unchanged sweep certifies the exact truncated fixed point.
pub fn central_system(
    l1: usize,
    l2: usize,
    order: u32,
) -> Result<(BTreeMap<(usize, usize), TruncatedSeries>, TruncatedSeries), FunceqError> {
    assert!(l1 >= 1 && l2 >= 1, "quiver must have vertices on both sides");
    let context = SeriesContext::bipartite(l1, l2)?;
    let one = TruncatedSeries::one(context.clone(), order)?;
    let mut cells: Vec<Cell> = Vec::with_capacity(l1 * l2);
    for k in 1..=l1 {
        for l in 1..=l2 {
            let mut exps = vec![0u32; l1 + l2];
            exps[k - 1] = 1;
            exps[l1 + l - 1] = 1;
            let monomial = TruncatedSeries::monomial(
                context.clone(),
                order,
                &Monomial::new(exps),
                BigRational::one(),
            )?;
            let value = &one + &monomial;
            cells.push(Cell {
                k,
                l,
                monomial,
                value,
            });
        }
    }

    let mut change_floor = 0u32;
    let mut sweeps = 0usize;
    loop {
        sweeps += 1;
        let mut min_change: Option<u32> = None;
        for i in 0..cells.len() {
            let mut prod = one.clone();
            for c in &cells {
                if c.k != cells[i].k && c.l != cells[i].l {
                    prod = &prod * &c.value;
                }
            }
            let new = &one + &(&cells[i].monomial * &prod);
            if new != cells[i].value {
                let changed_at = (&new - &cells[i].value)
                    .min_nonconstant_order()
                    .expect("series differing only in nonconstant terms");
                min_change = Some(min_change.map_or(changed_at, |m: u32| m.min(changed_at)));
                cells[i].value = new;
            }
        }
        match min_change {
            None => break,
            Some(o) if o > change_floor => change_floor = o,
            Some(_) => return Err(FunceqError::NoProgress(sweeps)),
        }
    }

    let mut f = one;
    let mut map = BTreeMap::new();
    for c in cells {
        f = &f * &c.value;
        map.insert((c.k, c.l), c.value);
    }
    Ok((map, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_case_has_an_empty_inner_product() {
        let (map, f) = central_system(1, 1, 6).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[&(1, 1)].to_string(), "1 + s1*t1*x*y");
        assert_eq!(f, map[&(1, 1)]);
    }

    #[test]
    fn two_by_two_matches_the_closed_forms() {
        let (map, f) = central_system(2, 2, 8).unwrap();
        let ctx = f.context().clone();
        let one = TruncatedSeries::one(ctx.clone(), 8).unwrap();
        let m = |exps: Vec<u32>| {
            TruncatedSeries::monomial(ctx.clone(), 8, &Monomial::new(exps), BigRational::one())
                .unwrap()
        };
        let w = m(vec![1, 1, 1, 1]);
        let inv = (&one - &w).inverse().unwrap();
        // R^{1,1} = (1 + s1 t1 x y) / (1 - s1 s2 t1 t2 x^2 y^2): eliminating
        // R^{2,2} from the mutual pair of equations telescopes the geometric
        // series.
        let r11 = &(&one + &m(vec![1, 0, 1, 0])) * &inv;
        assert_eq!(map[&(1, 1)], r11);
        // f = prod_{i,j} (1 + s_i t_j x y) / (1 - s1 s2 t1 t2 x^2 y^2)^4.
        let mut expected = inv.pow_int(4).unwrap();
        for exps in [
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
        ] {
            expected = &expected * &(&one + &m(exps));
        }
        assert_eq!(f, expected);
    }
}
