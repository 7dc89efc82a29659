mod common;

use common::*;
use symmkit::prehandle::Placement;

#[test]
fn lexfix_single_swap() {
    let tree = lexfix_tree();
    assert_eq!(fixings(&tree), lexfix_expected(), "\n{}", dump(&tree));
}

#[test]
fn orbitopal_fixing_static() {
    let tree = orbitopal_tree();
    assert_eq!(fixings(&tree), orbitopal_expected(), "\n{}", dump(&tree));
}

#[test]
fn orbitopal_fixing_extreme_matrices() {
    assert_eq!(orbitopal_extremes(&orbitopal_tree()), orbitopal_extremes_expected());
}

#[test]
fn isomorphism_pruning() {
    let tree = isoprune_tree();
    assert_eq!(symmetry_pruned(&tree), vec![vec![0, 0, 1]], "\n{}", dump(&tree));
    assert!(fixings(&tree).is_empty());
}

#[test]
fn orbital_fixing() {
    let tree = orbital_tree();
    assert_eq!(fixings(&tree), orbital_expected(), "\n{}", dump(&tree));
}

#[test]
fn column_move_balances_children() {
    for placement in [Placement::First, Placement::Median] {
        assert_eq!(dynamic_child_fixings(placement), dynamic_child_expected(placement), "{placement:?}");
    }
}
