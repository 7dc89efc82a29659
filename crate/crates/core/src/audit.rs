//! Checks of the correctness conditions on a recorded branch-and-bound tree.
//!
//! * C1: along every edge `m` does not shrink and the `π` prefix is kept.
//! * C2: `ψ = φ_parent⁻¹ ∘ φ_child` is a symmetry mapping the parent's
//!   feasible set onto itself.
//! * C3: siblings share `(m, π, φ)`.
//! * C4: at every node, if `x` is feasible, satisfies the node's symmetry
//!   handling constraints and `σ(x) = σ(ξ(x))`, then `ξ(x)` is feasible too.
//!
//! A node's feasible set is the instance's feasible set intersected with the
//! node's recorded box. C2 and C4 enumerate it and are reported as unchecked
//! when that is too expensive.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::bnb::{BnbTree, TreeNode};
use crate::domain::VarKind;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::instance::Instance;
use crate::lexred::LexOrder;
use crate::oracle::{enumerate_feasible_in, OracleCaps};
use crate::perm::Permutation;
use crate::prehandle::PrehandlingState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Unchecked,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Unchecked => "unchecked",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Human-readable violations (or reasons for being unchecked).
    pub witnesses: Vec<String>,
}

impl ConditionReport {
    fn new(name: &'static str) -> Self {
        ConditionReport { name, status: CheckStatus::Pass, witnesses: Vec::new() }
    }

    fn fail(&mut self, w: String) {
        self.status = CheckStatus::Fail;
        self.witnesses.push(w);
    }

    fn unchecked(&mut self, w: String) {
        if self.status == CheckStatus::Pass {
            self.status = CheckStatus::Unchecked;
        }
        self.witnesses.push(w);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub conditions: [ConditionReport; 4],
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn status(&self, k: usize) -> CheckStatus {
        self.conditions[k - 1].status
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(f, "{}: {}", c.name, c.status.label())?;
            for w in c.witnesses.iter().take(10) {
                writeln!(f, "  {w}")?;
            }
            if c.witnesses.len() > 10 {
                writeln!(f, "  ... {} more", c.witnesses.len() - 10)?;
            }
        }
        Ok(())
    }
}

type Key = Vec<i64>;

struct Feasible {
    cache: HashMap<usize, Option<HashSet<Key>>>,
    ints: Vec<usize>,
    cap: u128,
}

impl Feasible {
    fn key(&self, x: &[f64]) -> Key {
        self.ints.iter().map(|&i| x[i].round() as i64).collect()
    }

    /// Integer parts of the feasible points of a node, `None` above the cap.
    fn of(&mut self, inst: &Instance, node: &TreeNode) -> Result<Option<&HashSet<Key>>> {
        if !self.cache.contains_key(&node.id) {
            let set = if node.domains.any_empty() {
                Some(HashSet::new())
            } else {
                match enumerate_feasible_in(inst, &node.domains, self.cap) {
                    Ok(points) => Some(points.iter().map(|p| self.key(&p.x)).collect()),
                    Err(Error::CapExceeded { .. }) => None,
                    Err(e) => return Err(e),
                }
            };
            self.cache.insert(node.id, set);
        }
        Ok(self.cache[&node.id].as_ref())
    }
}

fn key_to_point(key: &Key, ints: &[usize], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (&i, &v) in ints.iter().zip(key) {
        x[i] = v as f64;
    }
    x
}

fn prefix_ok(s: &PrehandlingState) -> bool {
    let mut seen = HashSet::new();
    s.pi_prefix().iter().all(|&i| i < s.n() && seen.insert(i))
}

/// Runs all four checks. `caps.group_cap` bounds group enumeration and
/// `caps.box_cap` the enumeration of each node's box.
pub fn audit_conditions(tree: &BnbTree, inst: &Instance, caps: OracleCaps) -> Result<AuditReport> {
    let n = inst.n();
    let mut c1 = ConditionReport::new("C1");
    let mut c2 = ConditionReport::new("C2");
    let mut c3 = ConditionReport::new("C3");
    let mut c4 = ConditionReport::new("C4");
    let ints: Vec<usize> = (0..n).filter(|&i| inst.vars[i].kind == VarKind::Integer).collect();
    let mut feas = Feasible { cache: HashMap::new(), ints: ints.clone(), cap: caps.box_cap };

    let groups: Vec<Option<Vec<Permutation>>> = tree
        .components
        .iter()
        .map(|c| PermGroup::new(n, c.generators.clone()).ok()?.with_cap(caps.group_cap).enumerate().ok())
        .collect();
    for (k, g) in groups.iter().enumerate() {
        if g.is_none() {
            let msg = format!("component {}: group not enumerable", k + 1);
            c2.unchecked(msg.clone());
            c4.unchecked(msg);
        }
    }

    for node in &tree.nodes {
        for (k, st) in node.states.iter().enumerate() {
            if !prefix_ok(st) {
                c1.fail(format!("node {:?} component {}: π prefix is not injective", node.path, k + 1));
            }
        }
        let Some(pid) = node.parent else { continue };
        let parent = &tree.nodes[pid];
        for (k, (a, b)) in parent.states.iter().zip(&node.states).enumerate() {
            if b.m() < a.m() || b.pi_prefix()[..a.m()] != *a.pi_prefix() {
                c1.fail(format!("edge {:?} -> {:?} component {}: π prefix not kept", parent.path, node.path, k + 1));
            }
            let psi = a.phi().inverse().compose(b.phi())?;
            if psi.is_identity() {
                continue;
            }
            let Some(group) = &groups[k] else { continue };
            if !group.contains(&psi) {
                c2.fail(format!("edge {:?} -> {:?}: ψ = {psi} is not a symmetry", parent.path, node.path));
                continue;
            }
            match feas.of(inst, parent)? {
                None => c2.unchecked(format!("node {:?}: box too large", parent.path)),
                Some(set) => {
                    let mut keys: Vec<&Key> = set.iter().collect();
                    keys.sort();
                    let moved = keys.into_iter().find(|key| {
                        let y = psi.act_on(&key_to_point(key, &ints, n));
                        !set.contains(&ints.iter().map(|&i| y[i].round() as i64).collect::<Key>())
                    });
                    if let Some(key) = moved {
                        c2.fail(format!(
                            "edge {:?} -> {:?}: ψ = {psi} maps {:?} out of the parent's feasible set",
                            parent.path, node.path, key
                        ));
                    }
                }
            }
        }
        let sibling_states = |i: usize| &tree.nodes[i].states;
        if let Some(&first) = parent.children.first() {
            if first != node.id && *sibling_states(first) != node.states {
                c3.fail(format!("siblings {:?} and {:?} differ", tree.nodes[first].path, node.path));
            }
        }
    }

    for node in &tree.nodes {
        for (k, st) in node.states.iter().enumerate() {
            let Some(group) = &groups[k] else { continue };
            if st.m() == 0 {
                continue;
            }
            let Some(set) = feas.of(inst, node)? else {
                c4.unchecked(format!("node {:?}: box too large", node.path));
                continue;
            };
            let pos = st.sigma_positions();
            let orders: Vec<LexOrder> = group.iter().map(|g| LexOrder::new(pos.clone(), g.clone())).collect();
            let mut keys: Vec<&Key> = set.iter().collect();
            keys.sort();
            'points: for key in keys {
                let x = key_to_point(key, &ints, n);
                if !orders.iter().all(|o| o.holds(&x)) {
                    continue;
                }
                let sx = st.sigma_apply(&x);
                for xi in group {
                    let y = xi.act_on(&x);
                    if st.sigma_apply(&y) != sx {
                        continue;
                    }
                    let ykey: Key = ints.iter().map(|&i| y[i].round() as i64).collect();
                    if !set.contains(&ykey) {
                        c4.fail(format!(
                            "node {:?}: ξ = {xi} maps feasible {:?} to infeasible {:?}",
                            node.path, key, ykey
                        ));
                        break 'points;
                    }
                }
            }
        }
    }
    Ok(AuditReport { conditions: [c1, c2, c3, c4] })
}
