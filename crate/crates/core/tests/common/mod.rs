//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use symmkit::bnb::{replay, BnbTree, NodeStatus, PrehandleChoice, ShcFlags, SolveConfig};
use symmkit::instances::{build_ndb, ndb_shell, NdbData};
use symmkit::orbitope::{extreme_matrices, propagate_orbitope_dynamic, OrbitopeLayout};
use symmkit::prehandle::{BranchInfo, Placement, Policy, PrehandlingState};
use symmkit::{Domain, DomainVector, Instance, PermGroup, Permutation};

/// θ_{2,3}, θ_{1,2}, θ_{1,3} in row-major order.
pub const SCRIPT: [usize; 3] = [7, 1, 2];

pub type Fixings = BTreeMap<Vec<usize>, Vec<(usize, f64)>>;

/// A node path with the 1-based cells it fixes and their values.
pub type Expected<'a> = (&'a [usize], &'a [((usize, usize), f64)]);

/// Index of θ_{i,j} (1-based cell) on the 3×5 shell.
pub fn th(i: usize, j: usize) -> usize {
    (i - 1) * 5 + (j - 1)
}

pub fn fixings(tree: &BnbTree) -> Fixings {
    tree.nodes
        .iter()
        .map(|n| {
            let mut f = n.symmetry_fixings();
            f.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (n.path.clone(), f)
        })
        .filter(|(_, f)| !f.is_empty())
        .collect()
}

pub fn expect(list: &[Expected]) -> Fixings {
    list.iter()
        .map(|(path, fx)| {
            let mut v: Vec<(usize, f64)> = fx.iter().map(|&((i, j), val)| (th(i, j), val)).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (path.to_vec(), v)
        })
        .collect()
}

pub fn dump(tree: &BnbTree) -> String {
    tree.nodes.iter().map(|n| format!("{:?} {:?} {:?}\n", n.path, n.status, n.symmetry_fixings())).collect()
}

fn config(shc: &str, pre: PrehandleChoice) -> SolveConfig {
    let mut cfg = SolveConfig::with_shc(ShcFlags::parse(shc).unwrap());
    cfg.prehandle = pre;
    cfg
}

/// The 3×5 shell whose only symmetry swaps columns 2 and 3.
pub fn single_swap_shell() -> Instance {
    let mut inst = ndb_shell(3, 5);
    let layout = OrbitopeLayout::row_major(3, 5, 0);
    inst.group = PermGroup::new(16, vec![layout.column_swap(16, 1, 2)]).unwrap();
    inst
}

pub fn lexfix_tree() -> BnbTree {
    replay(&single_swap_shell(), &config("lexred", PrehandleChoice::Static), &SCRIPT).unwrap()
}

pub fn lexfix_expected() -> Fixings {
    expect(&[(&[0, 0], &[((1, 3), 0.0)]), (&[1, 0], &[((1, 3), 0.0), ((2, 2), 1.0)]), (&[1, 1, 1], &[((2, 2), 1.0)])])
}

pub fn orbitopal_tree() -> BnbTree {
    replay(&ndb_shell(3, 5), &config("orbitope", PrehandleChoice::Static), &SCRIPT).unwrap()
}

pub fn orbitopal_expected() -> Fixings {
    expect(&[
        (&[0, 0], &[((1, 3), 0.0), ((1, 4), 0.0), ((1, 5), 0.0), ((2, 4), 0.0), ((2, 5), 0.0)]),
        (&[0, 1], &[((1, 1), 1.0)]),
        (&[0, 1, 0], &[((1, 4), 0.0), ((1, 5), 0.0), ((2, 4), 0.0), ((2, 5), 0.0)]),
        (&[1, 0], &[((1, 3), 0.0), ((1, 4), 0.0), ((1, 5), 0.0), ((2, 2), 1.0)]),
        (&[1, 1], &[((1, 1), 1.0)]),
        (&[1, 1, 0], &[((1, 4), 0.0), ((1, 5), 0.0)]),
        (&[1, 1, 1], &[((2, 1), 1.0), ((2, 2), 1.0)]),
    ])
}

/// `(lexmax, lexmin)` at node `[0, 0]` of the orbitopal tree.
pub fn orbitopal_extremes(tree: &BnbTree) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let node = tree.find(&[0, 0]).unwrap();
    let ex = extreme_matrices(&OrbitopeLayout::row_major(3, 5, 0), &node.domains).unwrap();
    (ex.lexmax.values(), ex.lexmin.values())
}

pub fn orbitopal_extremes_expected() -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let lexmax = vec![vec![1.0, 0.0, 0.0, 0.0, 0.0], vec![1.0, 1.0, 0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0, 1.0, 1.0]];
    (lexmax, vec![vec![0.0; 5]; 3])
}

pub fn isoprune_tree() -> BnbTree {
    replay(&ndb_shell(3, 5), &config("isoprune", PrehandleChoice::Branching), &SCRIPT).unwrap()
}

pub fn symmetry_pruned(tree: &BnbTree) -> Vec<Vec<usize>> {
    tree.nodes.iter().filter(|n| n.status == NodeStatus::PrunedSymmetry).map(|n| n.path.clone()).collect()
}

pub fn orbital_tree() -> BnbTree {
    replay(&ndb_shell(3, 5), &config("orbital", PrehandleChoice::Branching), &SCRIPT).unwrap()
}

pub fn orbital_expected() -> Fixings {
    let zeros = |cells: &[(usize, usize)]| cells.iter().map(|&c| (c, 0.0)).collect::<Vec<_>>();
    let row2 = zeros(&[(2, 1), (2, 2), (2, 4), (2, 5)]);
    let a = zeros(&[(1, 1), (1, 3), (1, 4), (1, 5)]);
    let b = zeros(&[(1, 1), (1, 4), (1, 5)]);
    expect(&[(&[0], &row2), (&[0, 0], &a), (&[0, 1, 0], &b), (&[1, 0], &b)])
}

/// Fixings in the two children of branching on θ_{3,3} at node `[0, 1, 0]`
/// of the orbitopal tree, with rows 1–2 already seen.
pub fn dynamic_child_fixings(placement: Placement) -> Vec<Vec<(usize, f64)>> {
    let alpha = orbitopal_tree().find(&[0, 1, 0]).unwrap().domains.clone();
    let layout = OrbitopeLayout::row_major(3, 5, 0);
    let seen: Vec<usize> = (0..10).collect();
    let state =
        PrehandlingState::from_parts(Policy::OrbitopeDynamic(placement), seen, Permutation::identity(16)).unwrap();
    let child = state.child(BranchInfo { var: th(3, 3), proper: true }, &alpha, Some(&layout)).unwrap();
    [0, 1]
        .iter()
        .map(|&v| {
            let mut d: DomainVector = alpha.clone();
            d[th(3, 3)] = Domain::integer(v, v);
            let before = d.clone();
            propagate_orbitope_dynamic(&layout, &child, &mut d).unwrap();
            d.changed_since(&before).into_iter().map(|j| (j, d[j].fixed_value().unwrap())).collect()
        })
        .collect()
}

pub fn dynamic_child_expected(placement: Placement) -> Vec<Vec<(usize, f64)>> {
    match placement {
        Placement::First => vec![vec![(th(3, 4), 0.0), (th(3, 5), 0.0)], vec![]],
        Placement::Median => vec![vec![(th(3, 5), 0.0)], vec![(th(3, 4), 1.0)]],
    }
}

/// Integer box with `n` coordinates of at most `max_card` values each, drawn from `[-2, 3]`.
pub fn random_int_box(rng: &mut impl Rng, n: usize, max_card: i64) -> DomainVector {
    DomainVector::new(
        (0..n)
            .map(|_| {
                let lo = rng.gen_range(-2..=2);
                let hi = lo + rng.gen_range(0..max_card);
                Domain::integer(lo, hi)
            })
            .collect(),
    )
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Permutation::from_images(img).unwrap()
}

/// A small noise dosage instance, binary or integer, with random data.
pub fn random_ndb(rng: &mut impl Rng, tag: usize) -> Instance {
    let integer = rng.gen_bool(0.4);
    let (p, q) = if integer { (2, rng.gen_range(2..=3)) } else { (rng.gen_range(2..=3), rng.gen_range(2..=4)) };
    let d: Vec<u32> =
        (0..p).map(|_| if integer { rng.gen_range(1..=3) } else { rng.gen_range(1..=q as u32) }).collect();
    let t: Vec<f64> = (0..p).map(|_| rng.gen_range(1..=3) as f64).collect();
    let alpha: Vec<f64> = (0..p).map(|_| rng.gen_range(1..=5) as f64).collect();
    let load: f64 = d.iter().zip(&t).map(|(&k, &ti)| k as f64 * ti).sum();
    let h = (load / q as f64).ceil() + rng.gen_range(0..=3) as f64;
    build_ndb(&NdbData { name: format!("random_ndb_{tag}"), p, q, d, t, alpha, h, integer }).unwrap()
}

pub fn full_tree(inst: &Instance, shc: &str, pre: PrehandleChoice, placement: Placement) -> BnbTree {
    let mut cfg = config(shc, pre);
    cfg.placement = placement;
    cfg.bound_pruning = false;
    cfg.record_tree = true;
    symmkit::bnb::solve(inst, &cfg).unwrap().tree.unwrap()
}

/// Number of integer points of the initial box, continuous variables ignored.
pub fn integer_box(inst: &Instance) -> u64 {
    inst.initial_domains().iter().filter_map(|d| d.cardinality()).product()
}

/// Prehandling policies checked by the auditor.
pub const AUDIT_RUNS: [(&str, PrehandleChoice, Placement); 6] = [
    ("lexred", PrehandleChoice::Static, Placement::First),
    ("orbitope", PrehandleChoice::Static, Placement::First),
    ("lexred", PrehandleChoice::Branching, Placement::First),
    ("orbital+lexred", PrehandleChoice::Branching, Placement::First),
    ("orbitope", PrehandleChoice::OrbitopeDynamic, Placement::First),
    ("orbitope", PrehandleChoice::OrbitopeDynamic, Placement::Median),
];

pub fn dynamic_tree() -> (Instance, BnbTree) {
    let inst = symmkit::instances::ndb_toy();
    let tree = full_tree(&inst, "orbitope", PrehandleChoice::OrbitopeDynamic, Placement::Median);
    (inst, tree)
}

/// Swaps the first two entries of a depth-2 node's `π` prefix.
pub fn corrupt_pi(tree: &mut BnbTree) {
    let child = tree.nodes.iter().position(|n| n.depth() == 2).unwrap();
    let mut prefix = tree.nodes[child].states[0].pi_prefix().to_vec();
    prefix.swap(0, 1);
    tree.nodes[child].states[0].corrupt_prefix(prefix);
}

/// Gives the root's second child a different prefix than its sibling.
pub fn mismatch_siblings(tree: &mut BnbTree) {
    let second = tree.nodes[0].children[1];
    let mut prefix = tree.nodes[second].states[0].pi_prefix().to_vec();
    prefix.reverse();
    tree.nodes[second].states[0].corrupt_prefix(prefix);
}

/// Multiplies a child's `φ` by a column swap that moves a fixed one onto a fixed zero.
pub fn non_stabilizer_psi(tree: &mut BnbTree) {
    let layout = OrbitopeLayout::row_major(3, 5, 0);
    let (parent, a, b) = tree
        .nodes
        .iter()
        .filter(|n| !n.children.is_empty())
        .find_map(|n| {
            let fixed = |i, j| n.domains[layout.var(i, j)].fixed_value();
            (0..3).find_map(|i| {
                let a = (0..5).find(|&j| fixed(i, j) == Some(1.0))?;
                let b = (0..5).find(|&j| fixed(i, j) == Some(0.0))?;
                Some((n.id, a, b))
            })
        })
        .unwrap();
    let child = tree.nodes[parent].children[0];
    let swap = layout.column_swap(16, a, b);
    let bad = tree.nodes[parent].states[0].phi().compose(&swap).unwrap();
    tree.nodes[child].states[0].corrupt_phi(bad);
}

/// Every valid combination of symmetry method, prehandling policy and placement,
/// plus lexicographic reduction over the whole group.
pub fn all_configs() -> Vec<(String, SolveConfig)> {
    let mut out = Vec::new();
    for shc in ["none", "lexred", "orbitope", "orbital+lexred", "all", "isoprune", "lexred+isoprune"] {
        for pre in [PrehandleChoice::Static, PrehandleChoice::Branching, PrehandleChoice::OrbitopeDynamic] {
            for placement in [Placement::First, Placement::Median] {
                let mut c = config(shc, pre);
                c.placement = placement;
                if c.validate().is_ok() {
                    out.push((format!("{shc}/{}/{placement:?}", pre.label()), c));
                }
            }
        }
    }
    let mut g = config("lexred", PrehandleChoice::Branching);
    g.lexred_scope = symmkit::bnb::LexredScope::Group;
    out.push(("lexred-group".into(), g));
    out
}
