//! Poincare polynomials of stable quiver moduli via the Harder-Narasimhan
//! recursion.
//!
//! For a dimension vector `d` that is coprime for the chosen stability (no
//! proper nonzero sub-vector of equal slope), the Poincare polynomial of the
//! moduli space of stable representations is the closed sum
//!
//! ```text
//! P_d(q) = (q - 1) sum_{d^1, ..., d^s} (-1)^{s-1}
//!          q^{- sum_{k <= l} <d^l, d^k>}
//!          prod_{m, i} prod_{j=1}^{d^m_i} (1 - q^{-j})^{-1}
//! ```
//!
//! over all ways to write `d` as an ordered sum of nonzero dimension vectors
//! whose proper prefix sums all have slope strictly greater than `mu(d)`.
//! (This is the resolved form of the recursion that peels off the
//! Harder-Narasimhan stratum of maximal slope.)
//!
//! The sum is evaluated by a dynamic program over prefix sums `p <= d`: the
//! cross terms `sum_{k < l} <d^l, d^k>` telescope into one `<e, p>` per
//! appended part `e`, and every partial sum is kept as an integer Laurent
//! polynomial numerator over the fixed denominator
//!
//! ```text
//! D(p) = prod_j (q^j - 1)^{M_j(p)},   M_j(p) = sum_i floor(p_i / j),
//! ```
//!
//! which dominates the factors `(q^j - 1)` any sequence summing to `p` can
//! produce (per vertex, `sum_m [e^m_i >= j] <= floor(p_i / j)` by
//! superadditivity of the floor). The final rational function is reduced and
//! must come out a polynomial in `q` with integer coefficients; anything else
//! is reported as an error rather than silently accepted.

use crate::numerics::zlaurent::ZLaurent;
use crate::numerics::{rf_normalize, BigRational, NumericsError, QPoly};
use crate::quiver::{BipartiteQuiver, DimVector, QuiverError, StabilitySpec};
use num::{BigInt, One, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HnError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("dimension vector {0} is not coprime for this stability; the stable-moduli recursion needs a coprime vector")]
    NotCoprime(String),
    #[error("dimension vector is zero")]
    ZeroDim,
    #[error("state space for {0} has {1} boxes, above the supported limit")]
    TooLarge(String, usize),
    #[error("recursion result for {0} is not a polynomial: {1}")]
    NotPolynomial(String, String),
    #[error("recursion result for {0} has non-integer coefficients")]
    NotIntegral(String),
}

/// All ordered decompositions `d = d^1 + ... + d^s` into nonzero vectors
/// whose proper prefix sums have slope strictly greater than `mu(d)`.
/// Intended for small vectors (tests, oracles, inspection); the count grows
/// quickly with the box volume.
pub fn hn_decompositions(
    quiver: &BipartiteQuiver,
    stab: &StabilitySpec,
    d: &DimVector,
) -> Result<Vec<Vec<DimVector>>, HnError> {
    quiver.check_dim(d)?;
    stab.check_dim(d)?;
    if d.is_zero() {
        return Err(HnError::ZeroDim);
    }
    let mut out = Vec::new();
    let mut prefix_parts: Vec<DimVector> = Vec::new();
    dfs_decompose(stab, d, &DimVector::new(vec![0; d.sinks.len()], vec![0; d.sources.len()]), &mut prefix_parts, &mut out);
    Ok(out)
}

fn dfs_decompose(
    stab: &StabilitySpec,
    d: &DimVector,
    prefix: &DimVector,
    parts: &mut Vec<DimVector>,
    out: &mut Vec<Vec<DimVector>>,
) {
    let remaining = d.minus(prefix);
    for e in sub_vectors_nonzero(&remaining) {
        let next = prefix.plus(&e);
        parts.push(e);
        if next == *d {
            out.push(parts.clone());
        } else if stab.slope_cmp(&next, d) == Ordering::Greater {
            dfs_decompose(stab, d, &next, parts, out);
        }
        parts.pop();
    }
}

/// Nonzero vectors `0 < e <= bound`, in lexicographic order of entries.
fn sub_vectors_nonzero(bound: &DimVector) -> Vec<DimVector> {
    let entries: Vec<u32> = bound.entries().collect();
    let n = entries.len();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    'outer: loop {
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < entries[i] {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
        }
        out.push(DimVector {
            sinks: cur[..bound.sinks.len()].to_vec(),
            sources: cur[bound.sinks.len()..].to_vec(),
        });
    }
    out
}

const MAX_STATES: usize = 1 << 22;

/// `M_j(p) = sum_i floor(p_i / j)`.
fn denom_mult(p: &[u32], j: u32) -> u32 {
    p.iter().map(|&e| e / j).sum()
}

/// `sum_i e_i (e_i + 1) / 2`, the power of `q` cleared out of
/// `prod (1 - q^{-j})`.
fn sigma(e: &[u32]) -> i64 {
    e.iter().map(|&v| v as i64 * (v as i64 + 1) / 2).sum()
}

/// The Poincare polynomial (in `q`) of the moduli space of stable
/// representations with dimension vector `d`, for a coprime `d`.
pub fn poincare(
    quiver: &BipartiteQuiver,
    stab: &StabilitySpec,
    d: &DimVector,
) -> Result<QPoly, HnError> {
    quiver.check_dim(d)?;
    stab.check_dim(d)?;
    if d.is_zero() {
        return Err(HnError::ZeroDim);
    }
    if !stab.is_coprime(d) {
        return Err(HnError::NotCoprime(d.to_string()));
    }

    let entries: Vec<u32> = d.entries().collect();
    let n_entries = entries.len();
    let num_states: usize = entries
        .iter()
        .fold(1usize, |acc, &e| acc.saturating_mul(e as usize + 1));
    if num_states > MAX_STATES {
        return Err(HnError::TooLarge(d.to_string(), num_states));
    }

    // All boxes p <= d, processed in increasing total so every transition
    // goes from an already-finished state.
    let mut states: Vec<Vec<u32>> = Vec::with_capacity(num_states);
    let mut cur = vec![0u32; n_entries];
    loop {
        states.push(cur.clone());
        let mut i = n_entries;
        let mut done = true;
        while i > 0 {
            i -= 1;
            if cur[i] < entries[i] {
                cur[i] += 1;
                for v in cur.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }
    states.sort_by(|a, b| {
        let (sa, sb) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    let index: HashMap<Vec<u32>, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();

    let to_dim = |p: &[u32]| DimVector {
        sinks: p[..d.sinks.len()].to_vec(),
        sources: p[d.sinks.len()..].to_vec(),
    };
    let max_entry = *entries.iter().max().expect("nonempty");

    let mut numerators: Vec<Option<ZLaurent>> = vec![None; num_states];
    numerators[0] = Some(ZLaurent::one());

    for src in 0..num_states {
        let Some(n_src) = numerators[src].clone() else {
            continue;
        };
        let p = &states[src];
        let p_dim = to_dim(p);
        let p_total: u32 = p.iter().sum();
        if p_total > 0 {
            // Only prefixes of slope strictly above mu(d) may be extended.
            if stab.slope_cmp(&p_dim, d) != Ordering::Greater {
                continue;
            }
        }
        if p == &entries {
            continue;
        }
        let remaining = to_dim(&entries.iter().zip(p.iter()).map(|(a, b)| a - b).collect::<Vec<_>>());
        for e_dim in sub_vectors_nonzero(&remaining) {
            let e: Vec<u32> = e_dim.entries().collect();
            let dst_vec: Vec<u32> = p.iter().zip(&e).map(|(a, b)| a + b).collect();
            let dst = index[&dst_vec];
            // q exponent: sigma(e) from clearing denominators, minus the
            // diagonal term <e, e>, minus the telescoped cross term <e, p>.
            let t = sigma(&e)
                - quiver.euler_form(&e_dim, &e_dim)
                - quiver.euler_form(&e_dim, &p_dim);
            // Denominator correction so dst's numerator sits over D(dst).
            let mut x = ZLaurent::q_pow(t);
            for j in 1..=max_entry {
                let extra = denom_mult(&dst_vec, j)
                    - denom_mult(p, j)
                    - e.iter().filter(|&&v| v >= j).count() as u32;
                for _ in 0..extra {
                    x = x.mul(&ZLaurent::q_pow_minus_one(j as u64));
                }
            }
            let contrib = n_src.mul(&x).neg();
            numerators[dst] = Some(match numerators[dst].take() {
                Some(acc) => acc.add(&contrib),
                None => contrib,
            });
        }
    }

    let n_d = numerators[num_states - 1]
        .clone()
        .expect("the trivial decomposition always reaches d");
    // P = -(q - 1) N(d) / D(d).
    let numerator = n_d.mul(&ZLaurent::q_pow_minus_one(1)).neg();
    let mut denominator = ZLaurent::one();
    for j in 1..=max_entry {
        for _ in 0..denom_mult(&entries, j) {
            denominator = denominator.mul(&ZLaurent::q_pow_minus_one(j as u64));
        }
    }
    let (num_shift, num_coeffs) = laurent_parts(&numerator);
    let (den_shift, den_coeffs) = laurent_parts(&denominator);
    let rf = rf_normalize(num_coeffs, num_shift, den_coeffs, den_shift)?;
    let poly = rf
        .as_polynomial()
        .ok_or_else(|| HnError::NotPolynomial(d.to_string(), rf.den().to_string()))?
        .clone();
    if !poly.is_integral() {
        return Err(HnError::NotIntegral(d.to_string()));
    }
    Ok(poly)
}

fn laurent_parts(z: &ZLaurent) -> (i64, Vec<BigRational>) {
    (
        z.shift,
        z.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

/// Euler characteristic of the stable moduli space: the Poincare polynomial
/// evaluated at `q = 1`.
pub fn euler_stable(
    quiver: &BipartiteQuiver,
    stab: &StabilitySpec,
    d: &DimVector,
) -> Result<BigInt, HnError> {
    let p = poincare(quiver, stab, d)?;
    let value = p.eval(&BigRational::one());
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

/// Convenience: is the polynomial symmetric (`coeff_k == coeff_{deg-k}`) and
/// nonnegative? Poincare polynomials of the smooth projective moduli spaces
/// computed here must pass both.
pub fn looks_like_poincare(p: &QPoly) -> bool {
    p.is_palindromic() && p.is_nonnegative() && !p.coeff(0).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_int;

    #[test]
    fn point_moduli_for_one_arrow() {
        let q = BipartiteQuiver::kronecker(1);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![1], vec![1]);
        let p = poincare(&q, &st, &d).unwrap();
        assert!(p.is_one(), "got {p}");
        let decs = hn_decompositions(&q, &st, &d).unwrap();
        assert_eq!(decs.len(), 2);
    }

    #[test]
    fn projective_plane_for_three_arrows() {
        let q = BipartiteQuiver::kronecker(3);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![1], vec![1]);
        let p = poincare(&q, &st, &d).unwrap();
        assert_eq!(p, QPoly::from_ints(&[1, 1, 1]));
        assert_eq!(euler_stable(&q, &st, &d).unwrap(), BigInt::from(3));
    }

    #[test]
    fn unit_vector_moduli_is_a_point() {
        let q = BipartiteQuiver::complete(3, 3);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![1, 0, 0], vec![0, 1, 0]);
        assert_eq!(poincare(&q, &st, &d).unwrap(), QPoly::one());
    }

    #[test]
    fn rejects_non_coprime() {
        let q = BipartiteQuiver::kronecker(2);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![2], vec![2]);
        assert!(matches!(poincare(&q, &st, &d), Err(HnError::NotCoprime(_))));
    }

    #[test]
    fn projective_line_points_complement() {
        // Complete bipartite 3x3, d = (1+1+0, 1+0+0): chi = 1.
        let q = BipartiteQuiver::complete(3, 3);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![1, 1, 0], vec![1, 0, 0]);
        assert_eq!(euler_stable(&q, &st, &d).unwrap(), BigInt::from(1));
        let d2 = DimVector::new(vec![2, 0, 0], vec![1, 0, 0]);
        assert_eq!(euler_stable(&q, &st, &d2).unwrap(), BigInt::from(0));
    }

    #[test]
    fn palindromic_and_positive() {
        let q = BipartiteQuiver::kronecker(3);
        let st = StabilitySpec::standard(&q);
        let d = DimVector::new(vec![2], vec![3]);
        let p = poincare(&q, &st, &d).unwrap();
        assert!(looks_like_poincare(&p), "got {p}");
        // deg = 1 - <d,d> = 1 - (4 + 9 - 18) = 6
        assert_eq!(p.degree(), Some(6));
        assert!(p.eval(&rat_int(1)) > rat_int(0));
    }
}
