//! JSON form of a recorded tree (1-based variable indices), read by the auditor.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainVector, VarKind};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::prehandle::{Placement, Policy, PrehandlingState};

use super::{BnbTree, Branch, ComponentPlan, NodeStatus, Reduction, Source, TreeNode};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub n: usize,
    pub components: Vec<ComponentSpec>,
    pub nodes: Vec<NodeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub support: Vec<usize>,
    pub generators: Vec<Vec<Vec<usize>>>,
    pub policy: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: VarKind,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lo_strict: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hi_strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub seen: Vec<usize>,
    pub phi: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub var: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionSpec {
    pub var: usize,
    pub old: DomainSpec,
    pub new: DomainSpec,
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: usize,
    pub parent: Option<usize>,
    pub path: Vec<usize>,
    pub branch: Option<BranchSpec>,
    pub status: String,
    #[serde(default)]
    pub feasible: bool,
    pub domains: Vec<DomainSpec>,
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub reductions: Vec<ReductionSpec>,
    #[serde(default)]
    pub children: Vec<usize>,
}

fn policy_label(p: Policy) -> &'static str {
    match p {
        Policy::Static => "static",
        Policy::BranchingBased => "branching",
        Policy::OrbitopeDynamic(Placement::First) => "orbitope-dynamic-first",
        Policy::OrbitopeDynamic(Placement::Median) => "orbitope-dynamic-median",
    }
}

fn parse_policy(s: &str) -> Result<Policy> {
    Ok(match s {
        "static" => Policy::Static,
        "branching" => Policy::BranchingBased,
        "orbitope-dynamic-first" => Policy::OrbitopeDynamic(Placement::First),
        "orbitope-dynamic-median" => Policy::OrbitopeDynamic(Placement::Median),
        other => return Err(Error::Parse(format!("unknown policy {other:?}"))),
    })
}

fn parse_status(s: &str) -> Result<NodeStatus> {
    Ok(match s {
        "open" => NodeStatus::Open,
        "infeasible" => NodeStatus::PrunedInfeasible,
        "bound" => NodeStatus::PrunedBound,
        "symmetry" => NodeStatus::PrunedSymmetry,
        "leaf" => NodeStatus::Leaf,
        "branched" => NodeStatus::Branched,
        other => return Err(Error::Parse(format!("unknown node status {other:?}"))),
    })
}

fn parse_source(s: &str) -> Result<Source> {
    Source::ALL
        .into_iter()
        .find(|src| src.label() == s)
        .ok_or_else(|| Error::Parse(format!("unknown reduction source {s:?}")))
}

impl From<&Domain> for DomainSpec {
    fn from(d: &Domain) -> Self {
        DomainSpec {
            kind: d.kind,
            lo: d.lo.is_finite().then_some(d.lo),
            hi: d.hi.is_finite().then_some(d.hi),
            lo_strict: d.lo_strict,
            hi_strict: d.hi_strict,
        }
    }
}

impl From<&DomainSpec> for Domain {
    fn from(s: &DomainSpec) -> Self {
        let mut d = Domain::new(s.kind, s.lo.unwrap_or(f64::NEG_INFINITY), s.hi.unwrap_or(f64::INFINITY));
        d.lo_strict = s.lo_strict;
        d.hi_strict = s.hi_strict;
        d
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn zero_based(v: &[usize], n: usize) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| if i == 0 || i > n { Err(Error::Parse(format!("index {i} outside 1..={n}"))) } else { Ok(i - 1) })
        .collect()
}

impl From<&BnbTree> for TreeFile {
    fn from(t: &BnbTree) -> Self {
        let n = t.nodes.first().map_or(0, |r| r.domains.len());
        let components = t
            .components
            .iter()
            .map(|c| ComponentSpec {
                support: one_based(&c.support),
                generators: c.generators.iter().map(|g| g.cycles_one_based()).collect(),
                policy: policy_label(c.policy).into(),
                label: c.label.clone(),
            })
            .collect();
        let nodes = t
            .nodes
            .iter()
            .map(|nd| NodeSpec {
                id: nd.id,
                parent: nd.parent,
                path: nd.path.clone(),
                branch: nd.branch.map(|b| BranchSpec { var: b.var + 1, lo: b.lo, hi: b.hi }),
                status: nd.status.label().into(),
                feasible: nd.feasible,
                domains: nd.domains.iter().map(DomainSpec::from).collect(),
                states: nd
                    .states
                    .iter()
                    .map(|s| StateSpec { seen: one_based(s.pi_prefix()), phi: s.phi().cycles_one_based() })
                    .collect(),
                reductions: nd
                    .reductions
                    .iter()
                    .map(|r| ReductionSpec {
                        var: r.var + 1,
                        old: (&r.old).into(),
                        new: (&r.new).into(),
                        source: r.source.label().into(),
                    })
                    .collect(),
                children: nd.children.clone(),
            })
            .collect();
        TreeFile { n, components, nodes }
    }
}

impl TryFrom<TreeFile> for BnbTree {
    type Error = Error;

    fn try_from(f: TreeFile) -> Result<BnbTree> {
        let n = f.n;
        let mut components = Vec::with_capacity(f.components.len());
        let mut policies = Vec::with_capacity(f.components.len());
        for c in &f.components {
            let policy = parse_policy(&c.policy)?;
            policies.push(policy);
            components.push(ComponentPlan {
                support: zero_based(&c.support, n)?,
                generators: c
                    .generators
                    .iter()
                    .map(|g| Permutation::from_cycles_one_based(n, g))
                    .collect::<Result<_>>()?,
                policy,
                layout: None,
                lex: Vec::new(),
                orbital: None,
                iso: None,
                label: c.label.clone(),
            });
        }
        let mut nodes = Vec::with_capacity(f.nodes.len());
        for (k, s) in f.nodes.iter().enumerate() {
            if s.id != k || s.parent.is_some_and(|p| p >= k) || s.children.iter().any(|&c| c >= f.nodes.len()) {
                return Err(Error::Parse(format!("node {k}: ids must be sequential with parents first")));
            }
            if s.domains.len() != n || s.states.len() != components.len() {
                return Err(Error::Parse(format!("node {k}: wrong number of domains or states")));
            }
            let states = s
                .states
                .iter()
                .zip(&policies)
                .map(|(st, &pol)| {
                    let phi = Permutation::from_cycles_one_based(n, &st.phi)?;
                    let mut state = PrehandlingState::from_parts(pol, Vec::new(), phi)?;
                    // keep whatever prefix was recorded so the auditor can judge it
                    state.corrupt_prefix(zero_based(&st.seen, n)?);
                    Ok(state)
                })
                .collect::<Result<Vec<_>>>()?;
            let reductions = s
                .reductions
                .iter()
                .map(|r| {
                    Ok(Reduction {
                        var: zero_based(&[r.var], n)?[0],
                        old: (&r.old).into(),
                        new: (&r.new).into(),
                        source: parse_source(&r.source)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let branch = match &s.branch {
                Some(b) => Some(Branch { var: zero_based(&[b.var], n)?[0], lo: b.lo, hi: b.hi }),
                None => None,
            };
            nodes.push(TreeNode {
                id: s.id,
                parent: s.parent,
                path: s.path.clone(),
                branch,
                domains: DomainVector::new(s.domains.iter().map(Domain::from).collect()),
                states,
                status: parse_status(&s.status)?,
                reductions,
                children: s.children.clone(),
                feasible: s.feasible,
            });
        }
        Ok(BnbTree { nodes, components })
    }
}

pub fn tree_to_json(t: &BnbTree) -> Result<String> {
    Ok(serde_json::to_string(&TreeFile::from(t))?)
}

pub fn tree_from_json(s: &str) -> Result<BnbTree> {
    serde_json::from_str::<TreeFile>(s)?.try_into()
}

pub fn write_tree(t: &BnbTree, path: &Path) -> Result<()> {
    let mut s = tree_to_json(t)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_tree(path: &Path) -> Result<BnbTree> {
    tree_from_json(&std::fs::read_to_string(path)?)
}
