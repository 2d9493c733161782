//! Randomized consistency checks for the truncated series arithmetic:
//! multiplication against a naive convolution, and the analytic round trips
//! the rest of the library leans on.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, Zero};
use proptest::prelude::*;

use tropical_vertex::numerics::rat;
use tropical_vertex::{Monomial, SeriesContext, TruncatedSeries};

const ORDER: u32 = 8;

fn ctx() -> Arc<SeriesContext> {
    SeriesContext::bipartite(2, 2).unwrap()
}

fn one() -> TruncatedSeries {
    TruncatedSeries::one(ctx(), ORDER).unwrap()
}

fn coeff_strategy() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn term_strategy() -> impl Strategy<Value = (Vec<u32>, BigRational)> {
    (proptest::collection::vec(0u32..=2, 4), coeff_strategy())
}

fn series_from(terms: Vec<(Vec<u32>, BigRational)>) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        ctx(),
        ORDER,
        terms.into_iter().map(|(e, c)| (Monomial::new(e), c)),
    )
    .unwrap()
}

fn general_series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(term_strategy(), 0..6).prop_map(series_from)
}

/// A random series with zero constant term, the shape `log` and `exp`
/// exchange.
fn positive_part() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(term_strategy(), 0..6).prop_map(|terms| {
        series_from(
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().any(|&x| x > 0))
                .collect(),
        )
    })
}

fn naive_product(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (ma, ca) in a.iter_terms() {
        for (mb, cb) in b.iter_terms() {
            let e: Vec<u32> = ma
                .exponents
                .iter()
                .zip(&mb.exponents)
                .map(|(x, y)| x + y)
                .collect();
            if e.iter().sum::<u32>() > ORDER {
                continue;
            }
            *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    series_from(acc.into_iter().collect())
}

proptest! {
    #[test]
    fn multiplication_matches_the_naive_convolution(a in general_series(), b in general_series()) {
        prop_assert_eq!(&a * &b, naive_product(&a, &b));
    }

    #[test]
    fn exp_undoes_log(g in positive_part()) {
        let f = &one() + &g;
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn log_undoes_exp(g in positive_part()) {
        prop_assert_eq!(g.exp().unwrap().log().unwrap(), g.clone());
    }

    #[test]
    fn rational_powers_round_trip(g in positive_part(), p in 1i64..=3, q in 1i64..=3) {
        let f = &one() + &g;
        let r = rat(p, q);
        let there_and_back = f.pow_rational(&r).unwrap().pow_rational(&r.recip()).unwrap();
        prop_assert_eq!(there_and_back, f.clone());
        // A rational root of an integer power recovers the base.
        let root = f.pow_int(q).unwrap().pow_rational(&rat(1, q)).unwrap();
        prop_assert_eq!(root, f);
    }

    #[test]
    fn inverse_multiplies_to_one(g in positive_part()) {
        let f = &one() + &g;
        prop_assert_eq!(&f * &f.inverse().unwrap(), one());
    }

    #[test]
    fn truncation_commutes_with_multiplication(a in general_series(), b in general_series(), k in 0u32..=8) {
        let full = (&a * &b).truncated(k);
        let cut = &a.truncated(k) * &b.truncated(k);
        prop_assert_eq!(full, cut);
    }
}
