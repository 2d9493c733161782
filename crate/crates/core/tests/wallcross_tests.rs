//! End-to-end factorization checks: the finite catalogues, closed forms at
//! higher length, determinism, and the commutator identity itself.

use std::cmp::Ordering;
use std::sync::Arc;

use num::{BigRational, One};

use tropical_vertex::numerics::rat;
use tropical_vertex::wallcross::{factorize, product_position, InitialData};
use tropical_vertex::{Monomial, SeriesContext, TruncatedSeries};

fn product_of_binomials(
    ctx: &Arc<SeriesContext>,
    order: u32,
    factors: &[Vec<u32>],
) -> TruncatedSeries {
    let one = TruncatedSeries::one(ctx.clone(), order).unwrap();
    factors.iter().fold(one.clone(), |acc, exps| {
        let m = TruncatedSeries::monomial(
            ctx.clone(),
            order,
            &Monomial::new(exps.clone()),
            BigRational::one(),
        )
        .unwrap();
        &acc * &(&one + &m)
    })
}

/// Assert the scattering consists of exactly the given walls, in product
/// order, with exactly the given functions.
fn assert_catalogue(
    l1: usize,
    l2: usize,
    order: u32,
    expected: &[((u32, u32), Vec<Vec<u32>>)],
) {
    let init = InitialData::symmetric(l1, l2, order).unwrap();
    let sc = factorize(&init).unwrap();
    let dirs: Vec<(u32, u32)> = sc.walls().iter().map(|w| w.direction()).collect();
    let expected_dirs: Vec<(u32, u32)> = expected.iter().map(|(d, _)| *d).collect();
    assert_eq!(dirs, expected_dirs, "wall set of K({l1},{l2})");
    for ((a, b), factors) in expected {
        let want = product_of_binomials(sc.context(), order, factors);
        assert_eq!(sc.wall_function(*a, *b), want, "wall ({a},{b}) of K({l1},{l2})");
    }
}

#[test]
fn one_sink_one_source_is_the_pentagon() {
    assert_catalogue(
        1,
        1,
        8,
        &[
            ((0, 1), vec![vec![0, 1]]),
            ((1, 1), vec![vec![1, 1]]),
            ((1, 0), vec![vec![1, 0]]),
        ],
    );
}

#[test]
fn one_sink_two_sources_catalogue() {
    assert_catalogue(
        1,
        2,
        8,
        &[
            ((0, 1), vec![vec![0, 1, 0], vec![0, 0, 1]]),
            ((1, 2), vec![vec![1, 1, 1]]),
            ((1, 1), vec![vec![1, 1, 0], vec![1, 0, 1]]),
            ((1, 0), vec![vec![1, 0, 0]]),
        ],
    );
}

#[test]
fn one_sink_three_sources_catalogue() {
    assert_catalogue(
        1,
        3,
        8,
        &[
            (
                (0, 1),
                vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            ),
            ((1, 3), vec![vec![1, 1, 1, 1]]),
            (
                (1, 2),
                vec![vec![1, 1, 1, 0], vec![1, 1, 0, 1], vec![1, 0, 1, 1]],
            ),
            ((2, 3), vec![vec![2, 1, 1, 1]]),
            (
                (1, 1),
                vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![1, 0, 0, 1]],
            ),
            ((1, 0), vec![vec![1, 0, 0, 0]]),
        ],
    );
}

/// The central wall of the two-by-two case: all four binomials over the
/// fourth power of (1 - s1 s2 t1 t2 x^2 y^2).
fn central_two_by_two_closed_form(order: u32) -> TruncatedSeries {
    let ctx = SeriesContext::bipartite(2, 2).unwrap();
    let numerator = product_of_binomials(
        &ctx,
        order,
        &[
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
        ],
    );
    let one = TruncatedSeries::one(ctx.clone(), order).unwrap();
    let w = TruncatedSeries::monomial(
        ctx,
        order,
        &Monomial::new(vec![1, 1, 1, 1]),
        BigRational::one(),
    )
    .unwrap();
    &numerator * &(&one - &w).pow_int(-4).unwrap()
}

#[test]
fn two_by_two_central_wall_matches_the_closed_form() {
    let init = InitialData::symmetric(2, 2, 10).unwrap();
    let sc = factorize(&init).unwrap();
    assert_eq!(sc.wall_function(1, 1), central_two_by_two_closed_form(10));
}

/// The slope (1, 2) wall for one sink and four sources: binomials over all
/// source pairs, divided by the fourth power of (1 - s^2 t1 t2 t3 t4 x^2 y^4).
fn one_four_slope_one_two_closed_form(order: u32) -> TruncatedSeries {
    let ctx = SeriesContext::bipartite(1, 4).unwrap();
    let mut factors = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let mut e = vec![1, 0, 0, 0, 0];
            e[1 + i] = 1;
            e[1 + j] = 1;
            factors.push(e);
        }
    }
    let numerator = product_of_binomials(&ctx, order, &factors);
    let one = TruncatedSeries::one(ctx.clone(), order).unwrap();
    let w = TruncatedSeries::monomial(
        ctx,
        order,
        &Monomial::new(vec![2, 1, 1, 1, 1]),
        BigRational::one(),
    )
    .unwrap();
    &numerator * &(&one - &w).pow_int(-4).unwrap()
}

#[test]
fn one_four_slope_one_two_matches_the_closed_form() {
    let init = InitialData::symmetric(1, 4, 9).unwrap();
    let sc = factorize(&init).unwrap();
    assert_eq!(
        sc.wall_function(1, 2),
        one_four_slope_one_two_closed_form(9)
    );
}

#[test]
fn factorization_is_reproducible_and_passes_verification() {
    let init = InitialData::symmetric(2, 3, 7).unwrap();
    let first = factorize(&init).unwrap();
    let second = factorize(&init).unwrap();
    let pairs = |sc: &tropical_vertex::Scattering| {
        sc.walls()
            .iter()
            .map(|w| (w.direction(), w.wall_function().clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(pairs(&first), pairs(&second));
    first.verify(&init).unwrap();
}

#[test]
fn verification_rejects_mismatched_initial_data() {
    let init = InitialData::symmetric(1, 1, 6).unwrap();
    let sc = factorize(&init).unwrap();
    let ctx = init.context().clone();
    let one = TruncatedSeries::one(ctx.clone(), 6).unwrap();
    let fx = &one
        + &TruncatedSeries::monomial(ctx.clone(), 6, &Monomial::new(vec![1, 0]), rat(2, 1))
            .unwrap();
    let fy = &one
        + &TruncatedSeries::monomial(ctx, 6, &Monomial::new(vec![0, 1]), BigRational::one())
            .unwrap();
    let other = InitialData::from_walls(fx, fy).unwrap();
    assert!(sc.verify(&other).is_err());
}

#[test]
fn levelled_initial_data_factorizes_and_verifies() {
    // One sink variable of weight 1 and one of weight 2 against a single
    // weight-1 source variable.
    let init = InitialData::levelled(&[1, 1], &[1], 8).unwrap();
    let sc = factorize(&init).unwrap();
    sc.verify(&init).unwrap();
    assert_eq!(sc.wall_function(1, 0), *init.fx());
    assert_eq!(sc.wall_function(0, 1), *init.fy());
    for pair in sc.walls().windows(2) {
        let (a1, b1) = pair[0].direction();
        let (a2, b2) = pair[1].direction();
        assert_eq!(product_position(a1, b1, a2, b2), Ordering::Less);
    }
}
