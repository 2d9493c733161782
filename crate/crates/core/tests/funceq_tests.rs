//! Functional-equation pipeline against factorization output: extraction
//! round trips, explicit fixed points, the central polynomial system, and
//! the diagonal specialization.

use num::{BigInt, BigRational, One};

use tropical_vertex::funceq::special::{
    bps_moebius, closed_form_N, log_route_N, ClosedForm, SpecializedContext,
};
use tropical_vertex::funceq::{central_system, extract_chi, solve_R_system};
use tropical_vertex::numerics::{rat, rat_int};
use tropical_vertex::wallcross::{factorize, InitialData};
use tropical_vertex::{DimVector, Monomial, SeriesContext, TruncatedSeries};

#[test]
fn central_extraction_round_trips_and_vanishes_beyond_level_one() {
    for (l1, l2) in [(2usize, 2usize), (2, 3)] {
        let init = InitialData::symmetric(l1, l2, 8).unwrap();
        let f = factorize(&init).unwrap().wall_function(1, 1);
        let chi = extract_chi(&f, 1, 1).unwrap();

        for (d, value, _) in chi.iter() {
            let expected = if chi.level(d).unwrap() == 1 {
                BigInt::from(1)
            } else {
                BigInt::from(0)
            };
            assert_eq!(*value, expected, "chi at {d} on K({l1},{l2})");
        }
        assert_eq!(chi.aggregated(1).unwrap(), BigInt::from((l1 * l2) as u64));

        let (_, reassembled) = solve_R_system(&chi, 8).unwrap();
        assert_eq!(reassembled, f);
    }
}

#[test]
fn one_four_slope_one_two_system_fixed_points() {
    let init = InitialData::symmetric(1, 4, 6).unwrap();
    let f = factorize(&init).unwrap().wall_function(1, 2);
    let chi = extract_chi(&f, 1, 2).unwrap();

    // Level 1: one for each source pair, zero for doubled sources.
    for (d, value, _) in chi.iter() {
        let level = chi.level(d).unwrap();
        let expected = if level == 1 && d.sources.iter().all(|&e| e <= 1) {
            1
        } else if d == &DimVector::new(vec![2], vec![1, 1, 1, 1]) {
            -1
        } else {
            0
        };
        assert_eq!(*value, BigInt::from(expected), "chi at {d}");
    }

    let (solution, reassembled) = solve_R_system(&chi, 6).unwrap();
    assert_eq!(reassembled, f);

    // Explicit fixed points: the pair variable (1 + m12)/(1 - w) and the
    // balanced level-2 variable 1/(1 - w).
    let ctx = SeriesContext::bipartite(1, 4).unwrap();
    let one = TruncatedSeries::one(ctx.clone(), 6).unwrap();
    let m12 = TruncatedSeries::monomial(
        ctx.clone(),
        6,
        &Monomial::new(vec![1, 1, 1, 0, 0]),
        BigRational::one(),
    )
    .unwrap();
    let w = TruncatedSeries::monomial(
        ctx,
        6,
        &Monomial::new(vec![2, 1, 1, 1, 1]),
        BigRational::one(),
    )
    .unwrap();
    let geometric = (&one - &w).pow_int(-1).unwrap();
    assert_eq!(
        *solution
            .get(&DimVector::new(vec![1], vec![1, 1, 0, 0]))
            .unwrap(),
        &(&one + &m12) * &geometric
    );
    assert_eq!(
        *solution
            .get(&DimVector::new(vec![2], vec![1, 1, 1, 1]))
            .unwrap(),
        geometric
    );
}

#[test]
fn central_system_agrees_with_factorization() {
    for (l1, l2) in [(2usize, 2usize), (2, 3)] {
        let init = InitialData::symmetric(l1, l2, 8).unwrap();
        let wall = factorize(&init).unwrap().wall_function(1, 1);
        let (cells, f) = central_system(l1, l2, 8).unwrap();
        assert_eq!(f, wall, "central system of K({l1},{l2})");
        assert_eq!(cells.len(), l1 * l2);
    }
}

#[test]
fn degenerate_specialization_goes_through_the_log_route() {
    let init = InitialData::symmetric(2, 2, 8).unwrap();
    let wall = factorize(&init).unwrap().wall_function(1, 1);
    let diag = wall.specialize_diagonal(1, 1).unwrap();

    let mut sctx = SpecializedContext::new(2, 2, 1, 1);
    assert_eq!(sctx.e, rat_int(0));
    sctx.set_chi(vec![BigInt::from(4), BigInt::from(0), BigInt::from(0), BigInt::from(0)]);
    assert_eq!(sctx.solve(4).unwrap(), &diag[..]);

    // N[k] = 4 / k^2, by the log route and by the central closed form.
    let n = log_route_N(&diag).unwrap();
    for k in 1..=4u32 {
        assert_eq!(n[k as usize - 1], rat(4, (k * k) as i64));
        assert_eq!(
            closed_form_N(&ClosedForm::Central { l1: 2, l2: 2, k }).unwrap(),
            rat(4, (k * k) as i64)
        );
    }
}

#[test]
fn nondegenerate_specialization_matches_all_three_routes() {
    let init = InitialData::symmetric(2, 3, 8).unwrap();
    let wall = factorize(&init).unwrap().wall_function(1, 1);
    let diag = wall.specialize_diagonal(1, 1).unwrap();

    let mut sctx = SpecializedContext::new(2, 3, 1, 1);
    assert_eq!(sctx.e, rat(1, 6));
    sctx.set_chi(vec![BigInt::from(6), BigInt::from(0), BigInt::from(0), BigInt::from(0)]);
    assert_eq!(sctx.solve(4).unwrap(), &diag[..]);

    let n = log_route_N(&diag).unwrap();
    for k in 1..=4u32 {
        let central = closed_form_N(&ClosedForm::Central { l1: 2, l2: 3, k }).unwrap();
        let summed = closed_form_N(&ClosedForm::SpecializedGw {
            chi: vec![BigInt::from(6)],
            e: rat(1, 6),
            k,
        })
        .unwrap();
        assert_eq!(n[k as usize - 1], central, "log route vs central at k={k}");
        assert_eq!(summed, central, "binomial sum vs central at k={k}");
    }
}

#[test]
fn bps_values_on_the_two_three_slope() {
    let n: Vec<BigRational> = (1..=6)
        .map(|k| closed_form_N(&ClosedForm::Central { l1: 2, l2: 3, k }).unwrap())
        .collect();
    let bps = bps_moebius(&n, 2 * 3 - 2 - 3);
    let expected: Vec<BigRational> = [6, 6, 6, 12, 30, 78].iter().map(|&v| rat_int(v)).collect();
    assert_eq!(bps, expected);
}
