//! Tree-count routes against each other and against the moduli recursion.

use tropical_vertex::funceq::special::{closed_form_N, ClosedForm};
use tropical_vertex::funceq::ChiTable;
use tropical_vertex::localization::{enumerate_trees, lagrange_coeff, tree_formula};
use tropical_vertex::numerics::rat_int;
use tropical_vertex::{BipartiteQuiver, StabilitySpec};

#[test]
fn lagrange_routes_agree_on_the_grid() {
    // Every call checks the series route against the binomial route
    // internally and errors on disagreement.
    for l1 in 1..=5u32 {
        for l2 in 1..=5u32 {
            for n in 1..=40u32 {
                lagrange_coeff(l1, l2, n).unwrap_or_else(|e| {
                    panic!("route disagreement at (l1, l2, n) = ({l1}, {l2}, {n}): {e}")
                });
            }
        }
    }
}

#[test]
fn triangle_of_routes_at_three_three_two() {
    assert_eq!(tree_formula(3, 3, 2), rat_int(9));
    assert_eq!(enumerate_trees(3, 3, 2), rat_int(9));

    // Moduli route: sum the stable Euler characteristics over all type
    // (2, 1) dimension vectors of the complete bipartite quiver.
    let quiver = BipartiteQuiver::complete(3, 3);
    let stab = StabilitySpec::standard(&quiver);
    let mut chi = ChiTable::new(3, 3, 2, 1);
    chi.fill_from_recursion(&quiver, &stab, 1).unwrap();
    assert_eq!(chi.aggregated(1).unwrap(), 9.into());
}

#[test]
fn tree_count_equals_the_type_closed_form() {
    for d in 1..=4u32 {
        let n = closed_form_N(&ClosedForm::SlopeDMinusOne { l1: 3, l2: 3, d }).unwrap();
        assert_eq!(n, tree_formula(3, 3, d), "d = {d}");
    }
}
