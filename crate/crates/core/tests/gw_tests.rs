//! Wall-to-moduli comparisons on small cases, and the integrality of the
//! smooth-model series for every computed wall.

use tropical_vertex::gw::{
    balanced_divisibility_check, coprime_correspondence_check, smooth_model_chi, GwError,
    SmoothModelSpec,
};
use tropical_vertex::numerics::rat_int;
use tropical_vertex::wallcross::{factorize, InitialData};

#[test]
fn correspondence_on_the_central_slope() {
    let report = coprime_correspondence_check(2, 2, 1, 1, 4).unwrap();
    assert!(report.pass);
    assert_eq!(report.rows.len(), 4);
    assert_eq!(report.total, rat_int(4));
}

#[test]
fn correspondence_on_a_noncentral_slope() {
    let report = coprime_correspondence_check(2, 2, 1, 2, 3).unwrap();
    assert!(report.pass);
    // Two sink choices times the three source vectors of total two.
    assert_eq!(report.rows.len(), 6);
}

#[test]
fn smooth_models_are_integral_for_all_computed_walls() {
    for (l1, l2) in [(1usize, 3usize), (2, 2)] {
        let init = InitialData::symmetric(l1, l2, 8).unwrap();
        let sc = factorize(&init).unwrap();
        for wall in sc.walls() {
            let (a, b) = wall.direction();
            for spec in [SmoothModelSpec::SourceFramed, SmoothModelSpec::SinkFramed] {
                smooth_model_chi(wall.wall_function(), a, b, spec).unwrap_or_else(|e| {
                    panic!("non-integral smooth model at ({a},{b}) on K({l1},{l2}): {e}")
                });
            }
        }
    }
}

#[test]
fn balanced_divisibility_at_level_one() {
    // 4 = 2 * 2 and 9 = 3 * 3 on the central slope.
    assert!(balanced_divisibility_check(2, 1, 1, 1).unwrap());
    assert!(balanced_divisibility_check(3, 1, 1, 1).unwrap());
}

#[test]
fn balanced_divisibility_beyond_level_one_reports_noncoprimality() {
    // The Kronecker side sits at a non-coprime dimension vector, where the
    // moduli recursion does not apply; the error must surface, not a guess.
    assert!(matches!(
        balanced_divisibility_check(2, 1, 1, 2),
        Err(GwError::Hn(_))
    ));
}
