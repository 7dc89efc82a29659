//! Depth-first branch-and-bound with per-node symmetry handling.

mod config;
mod plan;
mod report;
mod tree_file;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::domain::{Domain, DomainVector, ExtReal, PropStatus, VarKind, TOL};
use crate::error::Result;
use crate::instance::{Instance, LinearConstraint, Sense};
use crate::lexred::{propagate_lex, LexOrder};
use crate::oracle::continuous_completion;
use crate::orbital::{branch_orbit_reduce, orbit_intersection_reduce, OrbitalContext};
use crate::orbitope::{propagate_orbitope, propagate_orbitope_dynamic};
use crate::prehandle::{BranchInfo, Policy, PrehandlingState};
use crate::propagate::propagate_linear;

pub use config::{BranchRule, LexredScope, PrehandleChoice, ShcFlags, SolveConfig};
pub use plan::{plan, ComponentPlan, Plan};
pub use report::format_report;
pub use tree_file::{read_tree, tree_from_json, tree_to_json, write_tree, TreeFile};

const MAX_FIXPOINT_ROUNDS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Model,
    Lexred,
    Orbitope,
    Orbital,
}

impl Source {
    pub const ALL: [Source; 4] = [Source::Model, Source::Lexred, Source::Orbitope, Source::Orbital];

    pub fn label(self) -> &'static str {
        match self {
            Source::Model => "model",
            Source::Lexred => "lexred",
            Source::Orbitope => "orbitope",
            Source::Orbital => "orbital",
        }
    }
}

/// One domain change and the propagator responsible for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub var: usize,
    pub old: Domain,
    pub new: Domain,
    pub source: Source,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}: {} -> {} [{}]", self.var + 1, self.old, self.new, self.source.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    /// Not processed: a limit was hit or the branching script ran out.
    Open,
    PrunedInfeasible,
    PrunedBound,
    PrunedSymmetry,
    /// All integer variables fixed.
    Leaf,
    Branched,
}

impl NodeStatus {
    pub fn label(self) -> &'static str {
        match self {
            NodeStatus::Open => "open",
            NodeStatus::PrunedInfeasible => "infeasible",
            NodeStatus::PrunedBound => "bound",
            NodeStatus::PrunedSymmetry => "symmetry",
            NodeStatus::Leaf => "leaf",
            NodeStatus::Branched => "branched",
        }
    }
}

/// `lo ≤ x_var ≤ hi` imposed on a child.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub var: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Child indices from the root, `0` being the down-branch.
    pub path: Vec<usize>,
    pub branch: Option<Branch>,
    /// Domains after processing (for open nodes: after branching only).
    pub domains: DomainVector,
    /// Prehandling state of each symmetry component.
    pub states: Vec<PrehandlingState>,
    pub status: NodeStatus,
    pub reductions: Vec<Reduction>,
    pub children: Vec<usize>,
    /// Whether a leaf admits a feasible completion.
    pub feasible: bool,
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn reductions_from(&self, source: Source) -> impl Iterator<Item = &Reduction> {
        self.reductions.iter().filter(move |r| r.source == source)
    }

    /// Symmetry-driven fixings `(var, value)` in order of discovery.
    pub fn symmetry_fixings(&self) -> Vec<(usize, f64)> {
        self.reductions
            .iter()
            .filter(|r| r.source != Source::Model && !r.old.is_fixed())
            .filter_map(|r| r.new.fixed_value().map(|v| (r.var, v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BnbTree {
    pub nodes: Vec<TreeNode>,
    pub components: Vec<ComponentPlan>,
}

impl BnbTree {
    pub fn root(&self) -> Option<&TreeNode> {
        self.nodes.first()
    }

    pub fn find(&self, path: &[usize]) -> Option<&TreeNode> {
        let mut cur = self.nodes.first()?;
        for &c in path {
            cur = &self.nodes[*cur.children.get(c)?];
        }
        Some(cur)
    }

    pub fn parent(&self, node: &TreeNode) -> Option<&TreeNode> {
        node.parent.map(|p| &self.nodes[p])
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.status == NodeStatus::Leaf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    LimitReached,
}

impl SolveStatus {
    pub fn label(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::LimitReached => "limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveStats {
    pub nodes: u64,
    pub leaves: u64,
    pub pruned_infeasible: u64,
    pub pruned_bound: u64,
    pub pruned_symmetry: u64,
    pub open: u64,
    pub reductions: BTreeMap<Source, u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub solution: Option<Vec<f64>>,
    pub stats: SolveStats,
    /// Boxes of leaves that admit a feasible completion.
    pub feasible_leaves: Vec<DomainVector>,
    pub tree: Option<BnbTree>,
    pub components: Vec<ComponentPlan>,
    pub notices: Vec<String>,
    pub wall_time: Duration,
    pub sym_time: Duration,
}

/// Solves `inst` to optimality (or a limit).
pub fn solve(inst: &Instance, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    inst.validate()?;
    Engine::new(inst, cfg)?.run()
}

/// Explores the tree obtained by branching along `script`, recording every node.
/// The configuration is not checked for soundness, so propagator combinations
/// can be studied in isolation.
pub fn replay(inst: &Instance, cfg: &SolveConfig, script: &[usize]) -> Result<BnbTree> {
    inst.validate()?;
    let mut cfg = cfg.clone();
    cfg.branch_rule = BranchRule::Script(script.to_vec());
    cfg.record_tree = true;
    let res = Engine::new(inst, &cfg)?.run()?;
    Ok(res.tree.unwrap_or_default())
}

struct Pending {
    parent: Option<usize>,
    path: Vec<usize>,
    branch: Option<Branch>,
    domains: DomainVector,
    states: Vec<PrehandlingState>,
    /// Per component: orbit of the branching variable at the parent.
    orbits: Vec<Option<Vec<usize>>>,
    /// Binary variables branched to one.
    ones: Vec<usize>,
}

struct Engine<'a> {
    inst: &'a Instance,
    cfg: &'a SolveConfig,
    plan: Plan,
    model: Vec<LinearConstraint>,
    integral_obj: bool,
    incumbent: Option<(f64, Vec<f64>)>,
    stats: SolveStats,
    feasible_leaves: Vec<DomainVector>,
    nodes: Vec<TreeNode>,
    sym_time: Duration,
}

enum Outcome {
    Infeasible,
    Done,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a Instance, cfg: &'a SolveConfig) -> Result<Self> {
        let plan = plan::plan(inst, cfg)?;
        let mut model = if cfg.model_propagation { inst.cons.clone() } else { Vec::new() };
        model.extend(plan.shc_rows.iter().cloned());
        let integral_obj =
            inst.obj.coefs.iter().all(|&(j, c)| inst.vars[j].kind == VarKind::Integer && (c - c.round()).abs() <= TOL);
        Ok(Engine {
            inst,
            cfg,
            plan,
            model,
            integral_obj,
            incumbent: None,
            stats: SolveStats::default(),
            feasible_leaves: Vec::new(),
            nodes: Vec::new(),
            sym_time: Duration::ZERO,
        })
    }

    fn delta(&self) -> f64 {
        if self.integral_obj {
            1.0 - 1e-6
        } else {
            1e-6
        }
    }

    fn run(mut self) -> Result<SolveResult> {
        let start = Instant::now();
        let n = self.inst.n();
        let ncomp = self.plan.components.len();
        let root = Pending {
            parent: None,
            path: Vec::new(),
            branch: None,
            domains: self.inst.initial_domains(),
            states: self.plan.components.iter().map(|c| PrehandlingState::root(c.policy, n)).collect(),
            orbits: vec![None; ncomp],
            ones: Vec::new(),
        };
        let mut stack = vec![root];
        let mut limit_hit = false;
        while let Some(node) = stack.pop() {
            let over_nodes = self.cfg.node_limit.is_some_and(|l| self.stats.nodes >= l);
            let over_time = self.cfg.time_limit.is_some_and(|t| start.elapsed() >= t);
            if over_nodes || over_time {
                limit_hit = true;
                self.record_open(node);
                for rest in stack.drain(..).rev() {
                    self.record_open(rest);
                }
                break;
            }
            let children = self.process(node)?;
            // left child on top
            stack.extend(children.into_iter().rev());
        }
        let open = self.stats.open > 0;
        let status = if limit_hit || open {
            SolveStatus::LimitReached
        } else if self.incumbent.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Infeasible
        };
        let tree =
            self.cfg.record_tree.then(|| BnbTree { nodes: self.nodes, components: self.plan.components.clone() });
        let (objective, solution) = match self.incumbent {
            Some((v, x)) => (Some(v), Some(x)),
            None => (None, None),
        };
        Ok(SolveResult {
            status,
            objective,
            solution,
            stats: self.stats,
            feasible_leaves: self.feasible_leaves,
            tree,
            components: self.plan.components,
            notices: self.plan.notices,
            wall_time: start.elapsed(),
            sym_time: self.sym_time,
        })
    }

    fn record(
        &mut self,
        p: &Pending,
        domains: DomainVector,
        status: NodeStatus,
        reductions: Vec<Reduction>,
    ) -> Option<usize> {
        if !self.cfg.record_tree {
            return None;
        }
        let id = self.nodes.len();
        if let Some(par) = p.parent {
            self.nodes[par].children.push(id);
        }
        self.nodes.push(TreeNode {
            id,
            parent: p.parent,
            path: p.path.clone(),
            branch: p.branch,
            domains,
            states: p.states.clone(),
            status,
            reductions,
            children: Vec::new(),
            feasible: false,
        });
        Some(id)
    }

    fn record_open(&mut self, p: Pending) {
        self.stats.open += 1;
        let d = p.domains.clone();
        self.record(&p, d, NodeStatus::Open, Vec::new());
    }

    fn finish(&mut self, p: &Pending, d: DomainVector, status: NodeStatus, log: Vec<Reduction>) -> Option<usize> {
        for r in &log {
            *self.stats.reductions.entry(r.source).or_default() += 1;
        }
        match status {
            NodeStatus::PrunedInfeasible => self.stats.pruned_infeasible += 1,
            NodeStatus::PrunedBound => self.stats.pruned_bound += 1,
            NodeStatus::PrunedSymmetry => self.stats.pruned_symmetry += 1,
            NodeStatus::Leaf => self.stats.leaves += 1,
            NodeStatus::Open => self.stats.open += 1,
            NodeStatus::Branched => {}
        }
        self.record(p, d, status, log)
    }

    fn isopruned(&self, p: &Pending) -> bool {
        if p.ones.is_empty() {
            return false;
        }
        let mut y = vec![0.0; self.inst.n()];
        for &i in &p.ones {
            y[i] = 1.0;
        }
        self.plan.components.iter().zip(&p.states).any(|(c, st)| {
            let Some(group) = &c.iso else { return false };
            let pos = st.sigma_positions();
            group.iter().any(|g| !LexOrder::new(pos.clone(), g.clone()).holds(&y))
        })
    }

    fn process(&mut self, p: Pending) -> Result<Vec<Pending>> {
        self.stats.nodes += 1;
        if self.isopruned(&p) {
            let d = p.domains.clone();
            self.finish(&p, d, NodeStatus::PrunedSymmetry, Vec::new());
            return Ok(Vec::new());
        }
        let mut d = p.domains.clone();
        let mut log = Vec::new();
        if let Outcome::Infeasible = self.propagate(&p, &mut d, &mut log)? {
            self.finish(&p, d, NodeStatus::PrunedInfeasible, log);
            return Ok(Vec::new());
        }
        if self.cfg.bound_pruning {
            if let Some((inc, _)) = &self.incumbent {
                if self.lower_bound(&d) >= inc - self.delta() {
                    self.finish(&p, d, NodeStatus::PrunedBound, log);
                    return Ok(Vec::new());
                }
            }
        }
        let Some(var) = self.select(&d) else {
            let all_fixed = self.inst.integer_vars().iter().all(|&j| d[j].is_fixed());
            if !all_fixed {
                self.finish(&p, d, NodeStatus::Open, log);
                return Ok(Vec::new());
            }
            return self.leaf(&p, d, log).map(|_| Vec::new());
        };
        let orbits: Vec<Option<Vec<usize>>> = self
            .plan
            .components
            .iter()
            .zip(&p.states)
            .map(|(c, st)| {
                let cands = c.orbital.as_ref()?;
                c.support.binary_search(&var).ok()?;
                Some(OrbitalContext::build(cands, st, &d).orbit(var))
            })
            .collect();
        let mut states = Vec::with_capacity(p.states.len());
        for (c, st) in self.plan.components.iter().zip(&p.states) {
            let proper = c.support.binary_search(&var).is_ok();
            states.push(st.child(BranchInfo { var, proper }, &d, c.layout.as_ref())?);
        }
        let id = self.finish(&p, d.clone(), NodeStatus::Branched, log);
        let binary = {
            let v = &self.inst.vars[var];
            v.lo == 0.0 && v.hi == 1.0
        };
        let children = split(&d[var])
            .into_iter()
            .enumerate()
            .map(|(k, (lo, hi))| {
                let mut cd = d.clone();
                cd[var].tighten_lo(ExtReal::exact(lo));
                cd[var].tighten_hi(ExtReal::exact(hi));
                let mut path = p.path.clone();
                path.push(k);
                let mut ones = p.ones.clone();
                if binary && lo == 1.0 {
                    ones.push(var);
                }
                Pending {
                    parent: id,
                    path,
                    branch: Some(Branch { var, lo, hi }),
                    domains: cd,
                    states: states.clone(),
                    orbits: orbits.clone(),
                    ones,
                }
            })
            .collect();
        Ok(children)
    }

    fn leaf(&mut self, p: &Pending, d: DomainVector, log: Vec<Reduction>) -> Result<()> {
        let n = self.inst.n();
        let mut x: Vec<f64> = (0..n).map(|j| d[j].fixed_value().unwrap_or(0.0)).collect();
        let feasible =
            continuous_completion(self.inst, &mut x, &d)? && self.plan.shc_rows.iter().all(|c| c.is_satisfied(&x));
        if feasible {
            self.feasible_leaves.push(d.clone());
            let v = self.inst.obj.value(&x);
            if self.incumbent.as_ref().is_none_or(|(best, _)| v < *best - TOL) {
                self.incumbent = Some((v, x));
            }
        }
        if let Some(id) = self.finish(p, d, NodeStatus::Leaf, log) {
            self.nodes[id].feasible = feasible;
        }
        Ok(())
    }

    fn lower_bound(&self, d: &DomainVector) -> f64 {
        self.inst.obj.coefs.iter().map(|&(j, c)| if c > 0.0 { c * d[j].lo } else { c * d[j].hi }).sum()
    }

    fn select(&self, d: &DomainVector) -> Option<usize> {
        let unfixed = |j: &usize| self.inst.vars[*j].kind == VarKind::Integer && !d[*j].is_fixed();
        match &self.cfg.branch_rule {
            BranchRule::FirstUnfixed => self.inst.integer_vars().into_iter().find(unfixed),
            BranchRule::WidestDomain => self
                .inst
                .integer_vars()
                .into_iter()
                .filter(unfixed)
                .max_by(|&a, &b| width(&d[a]).total_cmp(&width(&d[b])).then(b.cmp(&a))),
            BranchRule::Script(vars) => vars.iter().copied().find(|j| *j < d.len() && unfixed(j)),
        }
    }

    /// Runs every propagator until none changes the box.
    fn propagate(&mut self, p: &Pending, d: &mut DomainVector, log: &mut Vec<Reduction>) -> Result<Outcome> {
        if let Some(b) = p.branch {
            for orbit in p.orbits.iter().flatten() {
                if logged(&mut self.sym_time, Source::Orbital, d, log, |d| Ok(branch_orbit_reduce(orbit, b.var, d)))? {
                    return Ok(Outcome::Infeasible);
                }
            }
        }
        let orders: Vec<Vec<LexOrder>> = self
            .plan
            .components
            .iter()
            .zip(&p.states)
            .map(|(c, st)| {
                let pos = st.sigma_positions();
                c.lex.iter().map(|g| LexOrder::new(pos.clone(), g.clone())).collect()
            })
            .collect();
        let cutoff = self
            .incumbent
            .as_ref()
            .filter(|_| self.cfg.bound_pruning)
            .map(|(v, _)| LinearConstraint::new(self.inst.obj.coefs.clone(), Sense::Le, v - self.delta()));
        for _ in 0..MAX_FIXPOINT_ROUNDS {
            let before = d.clone();
            let model = self.model.iter().chain(cutoff.iter());
            if logged(&mut self.sym_time, Source::Model, d, log, |d| Ok(propagate_linear(model, d)))? {
                return Ok(Outcome::Infeasible);
            }
            for (ci, c) in self.plan.components.iter().enumerate() {
                let st = &p.states[ci];
                for o in &orders[ci] {
                    if logged(&mut self.sym_time, Source::Lexred, d, log, |d| Ok(propagate_lex(o, d)))? {
                        return Ok(Outcome::Infeasible);
                    }
                }
                if let Some(layout) = &c.layout {
                    let infeasible = logged(&mut self.sym_time, Source::Orbitope, d, log, |d| match st.policy {
                        Policy::Static => Ok(propagate_orbitope(layout, d)),
                        _ => propagate_orbitope_dynamic(layout, st, d),
                    })?;
                    if infeasible {
                        return Ok(Outcome::Infeasible);
                    }
                }
                if let Some(cands) = &c.orbital {
                    let infeasible = logged(&mut self.sym_time, Source::Orbital, d, log, |d| {
                        let ctx = OrbitalContext::build(cands, st, d);
                        Ok(orbit_intersection_reduce(&ctx, d))
                    })?;
                    if infeasible {
                        return Ok(Outcome::Infeasible);
                    }
                }
            }
            if *d == before {
                return Ok(Outcome::Done);
            }
        }
        Ok(Outcome::Done)
    }
}

/// Applies `f`, logs its changes and reports infeasibility.
fn logged(
    sym_time: &mut Duration,
    source: Source,
    d: &mut DomainVector,
    log: &mut Vec<Reduction>,
    f: impl FnOnce(&mut DomainVector) -> Result<PropStatus>,
) -> Result<bool> {
    let before = d.clone();
    let t = Instant::now();
    let status = f(d)?;
    if source != Source::Model {
        *sym_time += t.elapsed();
    }
    for var in d.changed_since(&before) {
        log.push(Reduction { var, old: before[var], new: d[var], source });
    }
    Ok(status == PropStatus::Infeasible || d.any_empty())
}

fn width(dom: &Domain) -> f64 {
    dom.hi - dom.lo
}

/// Down and up child bounds of an unfixed integer domain.
fn split(dom: &Domain) -> [(f64, f64); 2] {
    let (lo, hi) = (dom.lo, dom.hi);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let mid = ((lo + hi) / 2.0).floor();
            [(lo, mid), (mid + 1.0, hi)]
        }
        (true, false) => [(lo, lo), (lo + 1.0, hi)],
        (false, true) => [(lo, hi - 1.0), (hi, hi)],
        (false, false) => [(lo, 0.0), (1.0, hi)],
    }
}
