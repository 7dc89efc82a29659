//! Brute-force references: box enumeration, projection hulls, feasible sets,
//! orbit partitions and the one-leaf-per-orbit certificate.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::domain::{Domain, DomainVector, VarKind, TOL};
use crate::error::{Error, Result};
use crate::instance::{Instance, Sense};
use crate::perm::Permutation;

pub const DEFAULT_BOX_CAP: u128 = 1_000_000;
pub const DEFAULT_GROUP_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub box_cap: u128,
    pub group_cap: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { box_cap: DEFAULT_BOX_CAP, group_cap: DEFAULT_GROUP_CAP }
    }
}

impl OracleCaps {
    /// Defaults, overridden by `SYMMKIT_ORACLE_CAP=BOX` or `SYMMKIT_ORACLE_CAP=BOX,GROUP`.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        if let Ok(s) = std::env::var("SYMMKIT_ORACLE_CAP") {
            let mut parts = s.split(',').map(str::trim);
            if let Some(b) = parts.next().and_then(|x| x.parse().ok()) {
                caps.box_cap = b;
            }
            if let Some(g) = parts.next().and_then(|x| x.parse().ok()) {
                caps.group_cap = g;
            }
        }
        caps
    }
}

/// Calls `f` on every integer point of the box (continuous coordinates are skipped
/// and left at 0). Stops early when `f` returns `false`.
pub fn for_each_point(d: &DomainVector, cap: u128, mut f: impl FnMut(&[f64]) -> bool) -> Result<()> {
    let ints: Vec<usize> = (0..d.len()).filter(|&i| d[i].kind == VarKind::Integer).collect();
    let mut size: u128 = 1;
    for &i in &ints {
        let c = d[i]
            .cardinality()
            .ok_or_else(|| Error::InvalidInstance(format!("variable {} has an unbounded domain", i + 1)))?;
        size = size.saturating_mul(c as u128);
    }
    if size > cap {
        return Err(Error::CapExceeded { cap: cap.min(usize::MAX as u128) as usize, partial: 0 });
    }
    if size == 0 {
        return Ok(());
    }
    let mut x = vec![0.0; d.len()];
    for &i in &ints {
        x[i] = d[i].lo;
    }
    loop {
        if !f(&x) {
            return Ok(());
        }
        let mut k = ints.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            let i = ints[k];
            if x[i] < d[i].hi - 0.5 {
                x[i] += 1.0;
                break;
            }
            x[i] = d[i].lo;
        }
    }
}

/// Projection of a filtered box: interval hulls plus the exact value sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    pub domains: DomainVector,
    pub value_sets: Vec<BTreeSet<i64>>,
}

impl Hull {
    /// Coordinates whose value set has holes inside the interval hull.
    pub fn gaps(&self) -> Vec<usize> {
        (0..self.value_sets.len())
            .filter(|&i| {
                let s = &self.value_sets[i];
                match (s.first(), s.last()) {
                    (Some(a), Some(b)) => (b - a + 1) as usize != s.len(),
                    _ => false,
                }
            })
            .collect()
    }
}

/// Per-coordinate hull of `{x ∈ d : pred(x)}`; `None` if that set is empty.
pub fn tightest_domains(pred: impl Fn(&[f64]) -> bool, d: &DomainVector, cap: u128) -> Result<Option<Hull>> {
    let mut sets: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); d.len()];
    let mut any = false;
    for_each_point(d, cap, |x| {
        if pred(x) {
            any = true;
            for (i, s) in sets.iter_mut().enumerate() {
                s.insert(x[i].round() as i64);
            }
        }
        true
    })?;
    if !any {
        return Ok(None);
    }
    let domains = DomainVector::new(
        (0..d.len())
            .map(|i| match d[i].kind {
                VarKind::Integer => Domain::integer(*sets[i].first().unwrap(), *sets[i].last().unwrap()),
                VarKind::Continuous => d[i],
            })
            .collect(),
    );
    Ok(Some(Hull { domains, value_sets: sets }))
}

/// A feasible point; continuous coordinates sit at their objective-best value.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePoint {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Interval of each continuous variable once all integers are fixed at `x`.
/// Requires at most one continuous variable per constraint.
pub(crate) fn continuous_completion(inst: &Instance, x: &mut [f64], d: &DomainVector) -> Result<bool> {
    let n = inst.n();
    let mut lo: Vec<f64> = (0..n).map(|j| d[j].lo).collect();
    let mut hi: Vec<f64> = (0..n).map(|j| d[j].hi).collect();
    for c in &inst.cons {
        let conts: Vec<(usize, f64)> =
            c.coefs.iter().copied().filter(|&(j, _)| inst.vars[j].kind == VarKind::Continuous).collect();
        let fixed: f64 =
            c.coefs.iter().filter(|&&(j, _)| inst.vars[j].kind == VarKind::Integer).map(|&(j, a)| a * x[j]).sum();
        match conts.as_slice() {
            [] => {
                if !c.sense.holds(fixed, c.rhs) {
                    return Ok(false);
                }
            }
            [(j, a)] => {
                let b = (c.rhs - fixed) / a;
                let (upper, lower) = match (c.sense, *a > 0.0) {
                    (Sense::Le, true) | (Sense::Ge, false) => (true, false),
                    (Sense::Le, false) | (Sense::Ge, true) => (false, true),
                    (Sense::Eq, _) => (true, true),
                };
                if upper {
                    hi[*j] = hi[*j].min(b);
                }
                if lower {
                    lo[*j] = lo[*j].max(b);
                }
            }
            _ => return Err(Error::InvalidInstance("constraints may contain at most one continuous variable".into())),
        }
    }
    let c = inst.obj.dense(n);
    for j in 0..n {
        if inst.vars[j].kind != VarKind::Continuous {
            continue;
        }
        if lo[j] > hi[j] + TOL {
            return Ok(false);
        }
        let v = if c[j] > 0.0 || (c[j] == 0.0 && lo[j].is_finite()) { lo[j] } else { hi[j] };
        if !v.is_finite() {
            return Err(Error::InvalidInstance(format!("variable {} is unbounded in the objective direction", j + 1)));
        }
        x[j] = v;
    }
    Ok(true)
}

/// All feasible integer assignments inside `d`.
pub fn enumerate_feasible_in(inst: &Instance, d: &DomainVector, cap: u128) -> Result<Vec<FeasiblePoint>> {
    let mut out = Vec::new();
    let mut err = None;
    for_each_point(d, cap, |x| {
        let mut y = x.to_vec();
        match continuous_completion(inst, &mut y, d) {
            Ok(true) => {
                let objective = inst.obj.value(&y);
                out.push(FeasiblePoint { x: y, objective });
                true
            }
            Ok(false) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

pub fn enumerate_feasible(inst: &Instance, cap: u128) -> Result<Vec<FeasiblePoint>> {
    enumerate_feasible_in(inst, &inst.initial_domains(), cap)
}

/// Optimal value by enumeration, `None` if infeasible.
pub fn exhaustive_optimum(inst: &Instance, cap: u128) -> Result<Option<f64>> {
    Ok(enumerate_feasible(inst, cap)?.iter().map(|p| p.objective).min_by(f64::total_cmp))
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Lexicographically largest image of `x` under the group.
pub fn canonical_form(x: &[f64], group: &[Permutation]) -> Vec<f64> {
    let mut best = x.to_vec();
    for g in group {
        let y = g.act_on(x);
        if lex_cmp(&y, &best) == Ordering::Greater {
            best = y;
        }
    }
    best
}

/// Partition of `points` (by index) into orbits of the enumerated group,
/// ordered by first occurrence.
pub fn orbit_partition(points: &[Vec<f64>], group: &[Permutation]) -> Vec<Vec<usize>> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, x) in points.iter().enumerate() {
        let key: Vec<u64> = canonical_form(x, group).iter().map(|v| (v + 0.0).to_bits()).collect();
        match index.get(&key) {
            Some(&o) => out[o].push(k),
            None => {
                index.insert(key, out.len());
                out.push(vec![k]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafMode {
    /// Every orbit meets exactly one leaf.
    Exact,
    /// Every orbit meets at least one leaf.
    AtLeastOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub ok: bool,
    pub orbits: usize,
    pub feasible_points: usize,
    /// Number of leaves meeting each orbit.
    pub leaf_counts: Vec<usize>,
    /// A point of a violating orbit and that orbit's leaf count.
    pub counterexample: Option<(Vec<f64>, usize)>,
}

fn leaf_contains(leaf: &DomainVector, x: &[f64], inst: &Instance) -> bool {
    (0..x.len()).all(|j| inst.vars[j].kind == VarKind::Continuous || leaf[j].contains(x[j]))
}

/// Counts, for every orbit of feasible points, the leaves whose box meets it.
pub fn certify_leaf_uniqueness(
    inst: &Instance,
    leaves: &[DomainVector],
    group: &[Permutation],
    mode: LeafMode,
    cap: u128,
) -> Result<Certificate> {
    let points: Vec<Vec<f64>> = enumerate_feasible(inst, cap)?.into_iter().map(|p| p.x).collect();
    let orbits = orbit_partition(&points, group);
    let mut leaf_counts = Vec::with_capacity(orbits.len());
    let mut counterexample = None;
    for orbit in &orbits {
        let count = leaves.iter().filter(|leaf| orbit.iter().any(|&k| leaf_contains(leaf, &points[k], inst))).count();
        let good = match mode {
            LeafMode::Exact => count == 1,
            LeafMode::AtLeastOne => count >= 1,
        };
        if !good && counterexample.is_none() {
            counterexample = Some((points[orbit[0]].clone(), count));
        }
        leaf_counts.push(count);
    }
    Ok(Certificate {
        ok: counterexample.is_none(),
        orbits: orbits.len(),
        feasible_points: points.len(),
        leaf_counts,
        counterexample,
    })
}

/// Fixings of classical orbital fixing on binary variables: with `B₁` the
/// variables branched to one and `B₀` those branched to zero, every variable in
/// the orbit of a `B₀` member under the setwise stabilizer of `B₁` can be fixed to 0.
pub fn classical_orbital_fixings(group: &[Permutation], b1: &[usize], b0: &[usize]) -> BTreeSet<usize> {
    let ones: BTreeSet<usize> = b1.iter().copied().collect();
    let stab: Vec<&Permutation> = group.iter().filter(|g| b1.iter().all(|&i| ones.contains(&g.apply(i)))).collect();
    let mut out = BTreeSet::new();
    for &i in b0 {
        for g in &stab {
            out.insert(g.apply(i));
        }
    }
    out
}
