mod common;

use common::*;
use symmkit::audit::{audit_conditions, CheckStatus};
use symmkit::bnb::{tree_from_json, tree_to_json};
use symmkit::instances::toy_suite;
use symmkit::oracle::OracleCaps;

#[test]
fn all_policies_pass_on_toys() {
    for inst in toy_suite().into_iter().filter(|i| integer_box(i) <= 40_000) {
        for (shc, pre, pl) in AUDIT_RUNS {
            let tree = full_tree(&inst, shc, pre, pl);
            let rep = audit_conditions(&tree, &inst, OracleCaps::default()).unwrap();
            assert!(rep.passed(), "{} {shc}/{pre:?}/{pl:?}\n{rep}", inst.name);
        }
    }
}

#[test]
fn lexfix_replay_passes() {
    let rep = audit_conditions(&lexfix_tree(), &single_swap_shell(), OracleCaps::default()).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn corrupted_pi_is_flagged() {
    let (inst, mut tree) = dynamic_tree();
    corrupt_pi(&mut tree);
    let rep = audit_conditions(&tree, &inst, OracleCaps::default()).unwrap();
    assert_eq!(rep.status(1), CheckStatus::Fail, "{rep}");
}

#[test]
fn mismatched_siblings_are_flagged() {
    let (inst, mut tree) = dynamic_tree();
    mismatch_siblings(&mut tree);
    let rep = audit_conditions(&tree, &inst, OracleCaps::default()).unwrap();
    assert_eq!(rep.status(3), CheckStatus::Fail, "{rep}");
}

#[test]
fn non_stabilizer_psi_is_flagged() {
    let (inst, mut tree) = dynamic_tree();
    non_stabilizer_psi(&mut tree);
    let rep = audit_conditions(&tree, &inst, OracleCaps::default()).unwrap();
    assert_eq!(rep.status(2), CheckStatus::Fail, "{rep}");
}

#[test]
fn tree_file_round_trip() {
    let (inst, tree) = dynamic_tree();
    let back = tree_from_json(&tree_to_json(&tree).unwrap()).unwrap();
    assert_eq!(back.nodes, tree.nodes);
    assert!(audit_conditions(&back, &inst, OracleCaps::default()).unwrap().passed());
}
