//! Per-component choice of symmetry handling at solve start.

use crate::domain::VarKind;
use crate::error::{Error, Result};
use crate::group::{Component, PermGroup};
use crate::instance::{Instance, LinearConstraint, Sense};
use crate::orbital::OrbitalCandidates;
use crate::orbitope::{detect_orbitope, is_packing_partitioning, OrbitopeLayout};
use crate::perm::Permutation;
use crate::prehandle::Policy;

use super::config::{LexredScope, PrehandleChoice, SolveConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPlan {
    pub support: Vec<usize>,
    pub generators: Vec<Permutation>,
    pub policy: Policy,
    /// Present when orbitopal reduction handles the component.
    pub layout: Option<OrbitopeLayout>,
    /// Symmetries for lexicographic reduction.
    pub lex: Vec<Permutation>,
    /// Candidates for orbital reduction.
    pub orbital: Option<Vec<Permutation>>,
    /// Enumerated group for isomorphism pruning.
    pub iso: Option<Vec<Permutation>>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plan {
    pub components: Vec<ComponentPlan>,
    /// Symmetry handling rows `x_1 ≥ … ≥ x_q` for single-row orbitopes.
    pub shc_rows: Vec<LinearConstraint>,
    pub notices: Vec<String>,
}

/// The instance's own orbitope annotation, if it matches the component exactly.
fn hint_layout(inst: &Instance, comp: &Component) -> Option<OrbitopeLayout> {
    let layout = OrbitopeLayout::from_hint(inst.orbitope.as_ref()?).ok()?;
    let mut cells = layout.vars().to_vec();
    cells.sort_unstable();
    if cells != comp.support {
        return None;
    }
    let n = inst.n();
    let q = layout.q;
    let all_swaps =
        comp.group.generators().iter().all(|g| (0..q).any(|a| (a + 1..q).any(|b| layout.column_swap(n, a, b) == *g)));
    // the swaps must connect all columns, which detection checks; reuse it on the hint
    (all_swaps && detect_orbitope(&comp.group).is_some()).then_some(layout)
}

fn enumerate(group: &PermGroup, cap: usize, what: &str, notices: &mut Vec<String>) -> Option<Vec<Permutation>> {
    match group.clone().with_cap(cap).enumerate() {
        Ok(all) => Some(all.into_iter().filter(|g| !g.is_identity()).collect()),
        Err(Error::CapExceeded { cap, .. }) => {
            notices.push(format!("{what}: group larger than {cap} elements, using generators only"));
            None
        }
        Err(e) => {
            notices.push(format!("{what}: {e}"));
            None
        }
    }
}

pub fn plan(inst: &Instance, cfg: &SolveConfig) -> Result<Plan> {
    let mut out = Plan::default();
    if !cfg.shc.any() {
        return Ok(out);
    }
    let n = inst.n();
    for (ci, comp) in inst.group.components().into_iter().enumerate() {
        let gens = comp.group.generators().to_vec();
        let tag = format!("component {} ({} vars)", ci + 1, comp.support.len());
        let layout =
            if cfg.shc.orbitope { hint_layout(inst, &comp).or_else(|| detect_orbitope(&comp.group)) } else { None };
        let branching = if cfg.prehandle == PrehandleChoice::Static { Policy::Static } else { Policy::BranchingBased };
        let mut cp = ComponentPlan {
            support: comp.support.clone(),
            generators: gens.clone(),
            policy: branching,
            layout: None,
            lex: Vec::new(),
            orbital: None,
            iso: None,
            label: "none".into(),
        };
        if let Some(layout) = layout {
            if layout.p == 1 {
                for j in 0..layout.q - 1 {
                    out.shc_rows.push(LinearConstraint::new(
                        vec![(layout.var(0, j), 1.0), (layout.var(0, j + 1), -1.0)],
                        Sense::Ge,
                        0.0,
                    ));
                }
                cp.policy = Policy::Static;
                cp.label = format!("orbitope 1x{}: ordering constraints", layout.q);
            } else if layout.q == 2 {
                cp.lex = vec![layout.column_swap(n, 0, 1)];
                cp.label = format!("orbitope {}x2: lexred", layout.p);
            } else {
                if is_packing_partitioning(&layout, inst) {
                    out.notices.push(format!(
                        "{tag}: packing-partitioning orbitope detected, using dynamic orbitopal reduction"
                    ));
                }
                cp.policy = match cfg.prehandle {
                    PrehandleChoice::Static => Policy::Static,
                    _ => Policy::OrbitopeDynamic(cfg.placement),
                };
                cp.label = format!(
                    "orbitope {}x{}: {}",
                    layout.p,
                    layout.q,
                    if cp.policy == Policy::Static { "static" } else { "dynamic" }
                );
                cp.layout = Some(layout);
            }
            out.components.push(cp);
            continue;
        }
        let mut parts = Vec::new();
        if cfg.shc.lexred {
            cp.lex = match cfg.lexred_scope {
                LexredScope::Generators => gens.clone(),
                LexredScope::Group => {
                    enumerate(&comp.group, cfg.group_cap, &tag, &mut out.notices).unwrap_or_else(|| gens.clone())
                }
            };
            parts.push("lexred");
        }
        if cfg.shc.orbital {
            cp.orbital = Some(match cfg.orbital_candidates {
                OrbitalCandidates::Generators => gens.clone(),
                OrbitalCandidates::Enumerated => {
                    enumerate(&comp.group, cfg.group_cap, &tag, &mut out.notices).unwrap_or_else(|| gens.clone())
                }
            });
            parts.push("orbital");
        }
        if cfg.shc.isoprune {
            let binary = comp.support.iter().all(|&j| {
                let v = &inst.vars[j];
                v.kind == VarKind::Integer && v.lo == 0.0 && v.hi == 1.0
            });
            cp.iso = if binary {
                enumerate(&comp.group, cfg.group_cap, &tag, &mut out.notices)
            } else {
                out.notices.push(format!("{tag}: isomorphism pruning needs binary variables, skipped"));
                None
            };
            if cp.iso.is_some() {
                parts.push("isoprune");
            }
        }
        if !parts.is_empty() {
            cp.label = parts.join("+");
        }
        out.components.push(cp);
    }
    Ok(out)
}
