//! Verification suites for `tvx verify`. Cases are independent pure
//! computations; they run on a worker pool capped by `TVX_THREADS`, and the
//! report is assembled in declaration order so the output is byte-identical
//! whatever the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num::BigRational;
use num::One;

use tropical_vertex::funceq::extract_chi;
use tropical_vertex::gw::{balanced_divisibility_check, coprime_correspondence_check};
use tropical_vertex::hn;
use tropical_vertex::localization::{enumerate_trees, tree_formula};
use tropical_vertex::numerics::format_rat;
use tropical_vertex::wallcross::{factorize, InitialData, Scattering};
use tropical_vertex::{BipartiteQuiver, DimVector, Monomial, StabilitySpec, TruncatedSeries};

pub type Case = (
    String,
    Box<dyn Fn() -> Result<String, String> + Send + Sync>,
);

fn case(
    name: &str,
    run: impl Fn() -> Result<String, String> + Send + Sync + 'static,
) -> Case {
    (name.to_string(), Box::new(run))
}

fn thread_cap() -> usize {
    match std::env::var("TVX_THREADS") {
        Ok(raw) => raw.parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

/// Run every case, at most `TVX_THREADS` at a time, and return the outcomes
/// in declaration order.
pub fn run_parallel(cases: &[Case]) -> Vec<(String, Result<String, String>)> {
    let workers = thread_cap().min(cases.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<String, String>>>> =
        cases.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cases.len() {
                    break;
                }
                let outcome = (cases[i].1)();
                *slots[i].lock().expect("no panics hold this lock") = Some(outcome);
            });
        }
    });
    cases
        .iter()
        .zip(slots)
        .map(|((name, _), slot)| {
            let outcome = slot
                .into_inner()
                .expect("no panics hold this lock")
                .expect("every case ran");
            (name.clone(), outcome)
        })
        .collect()
}

/// The displayed walls of the three finite factorizations and the two
/// infinite closed forms, compared coefficient for coefficient.
pub fn smalllength() -> Vec<Case> {
    vec![
        case("finite 1x1 catalogue at order 8", || {
            catalogue_case(1, 1, FINITE_1_1)
        }),
        case("finite 1x2 catalogue at order 8", || {
            catalogue_case(1, 2, FINITE_1_2)
        }),
        case("finite 1x3 catalogue at order 8", || {
            catalogue_case(1, 3, FINITE_1_3)
        }),
        case("2x2 central closed form at order 10", two_by_two_closed_form),
        case(
            "1x4 slope (1,2) closed form at order 12",
            one_four_closed_form,
        ),
    ]
}

/// Wall-crossing numbers against moduli Euler characteristics, level-1
/// divisibility, and the pinned scalar values from the fixtures directory.
pub fn correspondence() -> Vec<Case> {
    let mut cases = Vec::new();
    for (l1, l2, a, b, order) in [
        (1usize, 1usize, 1u32, 1u32, 8u32),
        (1, 2, 1, 2, 8),
        (1, 3, 1, 3, 8),
        (2, 2, 1, 2, 6),
        (2, 3, 1, 1, 8),
        (3, 3, 3, 5, 8),
    ] {
        cases.push(case(
            &format!("coprime correspondence {l1}x{l2} slope ({a},{b})"),
            move || coprime_case(l1, l2, a, b, order),
        ));
    }
    for (m, a, b, k) in [(2usize, 1u32, 1u32, 1u32), (3, 1, 1, 1), (2, 1, 2, 1), (3, 3, 5, 1)] {
        cases.push(case(
            &format!("balanced divisibility m={m} slope ({a},{b}) level {k}"),
            move || balanced_case(m, a, b, k),
        ));
    }
    cases.push(case("pinned scalar values", pinned_values));
    cases
}

type Catalogue = &'static [((u32, u32), &'static [&'static [u32]])];

const FINITE_1_1: Catalogue = &[
    ((0, 1), &[&[0, 1]]),
    ((1, 1), &[&[1, 1]]),
    ((1, 0), &[&[1, 0]]),
];

const FINITE_1_2: Catalogue = &[
    ((0, 1), &[&[0, 1, 0], &[0, 0, 1]]),
    ((1, 2), &[&[1, 1, 1]]),
    ((1, 1), &[&[1, 1, 0], &[1, 0, 1]]),
    ((1, 0), &[&[1, 0, 0]]),
];

const FINITE_1_3: Catalogue = &[
    ((0, 1), &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
    ((1, 3), &[&[1, 1, 1, 1]]),
    ((1, 2), &[&[1, 1, 1, 0], &[1, 1, 0, 1], &[1, 0, 1, 1]]),
    ((2, 3), &[&[2, 1, 1, 1]]),
    ((1, 1), &[&[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]),
    ((1, 0), &[&[1, 0, 0, 0]]),
];

fn product_of_binomials(
    scattering: &Scattering,
    factors: &[&[u32]],
) -> Result<TruncatedSeries, String> {
    let ctx = scattering.context().clone();
    let order = scattering.order();
    let one = TruncatedSeries::one(ctx.clone(), order).map_err(|e| e.to_string())?;
    let mut acc = one.clone();
    for exps in factors {
        let m = TruncatedSeries::monomial(
            ctx.clone(),
            order,
            &Monomial::new(exps.to_vec()),
            BigRational::one(),
        )
        .map_err(|e| e.to_string())?;
        acc = &acc * &(&one + &m);
    }
    Ok(acc)
}

fn catalogue_case(l1: usize, l2: usize, expected: Catalogue) -> Result<String, String> {
    let init = InitialData::symmetric(l1, l2, 8).map_err(|e| e.to_string())?;
    let scattering = factorize(&init).map_err(|e| e.to_string())?;
    let dirs: Vec<(u32, u32)> = scattering.walls().iter().map(|w| w.direction()).collect();
    let want: Vec<(u32, u32)> = expected.iter().map(|(d, _)| *d).collect();
    if dirs != want {
        return Err(format!("wall directions {dirs:?}, expected {want:?}"));
    }
    for ((a, b), factors) in expected {
        if scattering.wall_function(*a, *b) != product_of_binomials(&scattering, factors)? {
            return Err(format!("wall ({a},{b}) deviates from the displayed product"));
        }
    }
    Ok(format!("{} walls match", expected.len()))
}

fn monomial_series(
    scattering: &Scattering,
    exps: Vec<u32>,
) -> Result<TruncatedSeries, String> {
    TruncatedSeries::monomial(
        scattering.context().clone(),
        scattering.order(),
        &Monomial::new(exps),
        BigRational::one(),
    )
    .map_err(|e| e.to_string())
}

fn two_by_two_closed_form() -> Result<String, String> {
    let init = InitialData::symmetric(2, 2, 10).map_err(|e| e.to_string())?;
    let scattering = factorize(&init).map_err(|e| e.to_string())?;
    let numerator = product_of_binomials(
        &scattering,
        &[&[1, 0, 1, 0], &[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 0, 1]],
    )?;
    let one = TruncatedSeries::one(scattering.context().clone(), 10).map_err(|e| e.to_string())?;
    let w = monomial_series(&scattering, vec![1, 1, 1, 1])?;
    let closed = &numerator * &(&one - &w).pow_int(-4).map_err(|e| e.to_string())?;
    if scattering.wall_function(1, 1) == closed {
        Ok("matches at order 10".into())
    } else {
        Err("central wall deviates from the closed form".into())
    }
}

fn one_four_closed_form() -> Result<String, String> {
    let init = InitialData::symmetric(1, 4, 12).map_err(|e| e.to_string())?;
    let scattering = factorize(&init).map_err(|e| e.to_string())?;
    let mut pair_factors: Vec<Vec<u32>> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let mut e = vec![1, 0, 0, 0, 0];
            e[1 + i] = 1;
            e[1 + j] = 1;
            pair_factors.push(e);
        }
    }
    let borrowed: Vec<&[u32]> = pair_factors.iter().map(Vec::as_slice).collect();
    let numerator = product_of_binomials(&scattering, &borrowed)?;
    let one = TruncatedSeries::one(scattering.context().clone(), 12).map_err(|e| e.to_string())?;
    let w = monomial_series(&scattering, vec![2, 1, 1, 1, 1])?;
    let closed = &numerator * &(&one - &w).pow_int(-4).map_err(|e| e.to_string())?;
    if scattering.wall_function(1, 2) == closed {
        Ok("matches at order 12".into())
    } else {
        Err("slope (1,2) wall deviates from the closed form".into())
    }
}

fn coprime_case(l1: usize, l2: usize, a: u32, b: u32, order: u32) -> Result<String, String> {
    let report = coprime_correspondence_check(l1, l2, a, b, order).map_err(|e| e.to_string())?;
    if report.pass {
        Ok(format!(
            "{} pairs, total {}",
            report.rows.len(),
            format_rat(&report.total)
        ))
    } else {
        let bad = report.rows.iter().find(|r| !r.ok).expect("some row failed");
        Err(format!(
            "mismatch at {}: wall gives {}, moduli give {}",
            bad.d,
            format_rat(&bad.gw),
            bad.chi
        ))
    }
}

fn balanced_case(m: usize, a: u32, b: u32, k: u32) -> Result<String, String> {
    match balanced_divisibility_check(m, a, b, k) {
        Ok(true) => Ok("sum divisible, quotient matches".into()),
        Ok(false) => Err("level sum fails the divisibility".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn pinned_values() -> Result<String, String> {
    let path = crate::fixture_path("values");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let values: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let want = |key: &str| -> Result<String, String> {
        values[key]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| format!("fixture file lacks '{key}'"))
    };

    let kron = BipartiteQuiver::kronecker(3);
    let stab = StabilitySpec::standard(&kron);
    let chi = hn::euler_stable(&kron, &stab, &DimVector::new(vec![3], vec![5]))
        .map_err(|e| e.to_string())?;
    if chi.to_string() != want("euler-kronecker-3-dim-3-5")? {
        return Err(format!("Kronecker-3 moduli at (3,5) gave {chi}"));
    }

    let init = InitialData::symmetric(3, 3, 8).map_err(|e| e.to_string())?;
    let scattering = factorize(&init).map_err(|e| e.to_string())?;
    let table = extract_chi(&scattering.wall_function(3, 5), 3, 5).map_err(|e| e.to_string())?;
    let aggregate = table.aggregated(1).map_err(|e| e.to_string())?;
    if aggregate.to_string() != want("slope-3-5-level-1-aggregate")? {
        return Err(format!("slope (3,5) level-1 aggregate gave {aggregate}"));
    }

    let formula = tree_formula(3, 3, 2);
    let enumeration = enumerate_trees(3, 3, 2);
    let pinned = want("trees-3-3-2")?;
    if format_rat(&formula) != pinned || format_rat(&enumeration) != pinned {
        return Err(format!(
            "tree count at (3,3,2) gave formula {} and enumeration {}",
            format_rat(&formula),
            format_rat(&enumeration)
        ));
    }

    Ok("3 values match".into())
}
