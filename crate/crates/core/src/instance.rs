//! Bounded-variable linear optimization instances with a symmetry group.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::domain::{approx_eq, Domain, DomainVector, VarKind, TOL};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variable {
    pub kind: VarKind,
    pub lo: f64,
    pub hi: f64,
}

impl Variable {
    pub fn binary() -> Self {
        Variable { kind: VarKind::Integer, lo: 0.0, hi: 1.0 }
    }

    pub fn integer(lo: i64, hi: i64) -> Self {
        Variable { kind: VarKind::Integer, lo: lo as f64, hi: hi as f64 }
    }

    pub fn continuous(lo: f64, hi: f64) -> Self {
        Variable { kind: VarKind::Continuous, lo, hi }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=", alias = "le")]
    Le,
    #[serde(rename = "=", alias = "eq", alias = "==")]
    Eq,
    #[serde(rename = ">=", alias = "ge")]
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + TOL,
            Sense::Ge => lhs >= rhs - TOL,
            Sense::Eq => (lhs - rhs).abs() <= TOL,
        }
    }
}

/// `Σ coefs · x  sense  rhs`, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coefs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        LinearConstraint { coefs: canonical_coefs(coefs), sense, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn is_satisfied(&self, x: &[f64]) -> bool {
        self.sense.holds(self.activity(x), self.rhs)
    }

    fn permuted(&self, g: &Permutation) -> LinearConstraint {
        LinearConstraint::new(self.coefs.iter().map(|&(j, a)| (g.apply(j), a)).collect(), self.sense, self.rhs)
    }
}

/// Sorted by index, duplicates merged, zeros dropped.
fn canonical_coefs(mut coefs: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    coefs.sort_by_key(|c| c.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(coefs.len());
    for (j, a) in coefs {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += a,
            _ => out.push((j, a)),
        }
    }
    out.retain(|c| c.1 != 0.0);
    out
}

/// Minimization objective `Σ coefs · x`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Objective {
    pub coefs: Vec<(usize, f64)>,
}

impl Objective {
    pub fn new(coefs: Vec<(usize, f64)>) -> Self {
        Objective { coefs: canonical_coefs(coefs) }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, c)| c * x[j]).sum()
    }

    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n];
        for &(j, v) in &self.coefs {
            c[j] = v;
        }
        c
    }
}

/// A `p × q` matrix of variables whose columns may be permuted arbitrarily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitopeHint {
    pub p: usize,
    pub q: usize,
    /// Row-major: cell `(i, j)` holds variable `index_map[i * q + j]`.
    pub index_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub vars: Vec<Variable>,
    pub cons: Vec<LinearConstraint>,
    pub obj: Objective,
    pub group: PermGroup,
    pub orbitope: Option<OrbitopeHint>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Checks index ranges and basic consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.group.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.group.n() });
        }
        for v in &self.vars {
            if v.lo.is_nan() || v.hi.is_nan() || v.lo > v.hi + TOL {
                return Err(Error::InvalidInstance(format!("bad bounds [{}, {}]", v.lo, v.hi)));
            }
        }
        let idx = self.cons.iter().flat_map(|c| c.coefs.iter().map(|t| t.0)).chain(self.obj.coefs.iter().map(|t| t.0));
        for j in idx {
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
        }
        if let Some(h) = &self.orbitope {
            if h.index_map.len() != h.p * h.q {
                return Err(Error::InvalidInstance("orbitope index map has wrong length".into()));
            }
            let mut seen = vec![false; n];
            for &j in &h.index_map {
                if j >= n || seen[j] {
                    return Err(Error::InvalidInstance("orbitope index map is not injective".into()));
                }
                seen[j] = true;
            }
        }
        Ok(())
    }

    pub fn initial_domains(&self) -> DomainVector {
        DomainVector::new(self.vars.iter().map(|v| Domain::new(v.kind, v.lo, v.hi)).collect())
    }

    pub fn integer_vars(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.vars[j].kind == VarKind::Integer).collect()
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.vars.iter().zip(x).all(|(v, &xv)| {
            xv >= v.lo - TOL && xv <= v.hi + TOL && (v.kind == VarKind::Continuous || approx_eq(xv, xv.round()))
        }) && self.cons.iter().all(|c| c.is_satisfied(x))
    }

    /// Formulation symmetry test: `p` maps objective, variable data and the
    /// constraint multiset onto themselves.
    pub fn validate_symmetry(&self, p: &Permutation) -> bool {
        let n = self.n();
        if p.len() != n {
            return false;
        }
        for j in 0..n {
            let (a, b) = (&self.vars[j], &self.vars[p.apply(j)]);
            if a.kind != b.kind || !bound_eq(a.lo, b.lo) || !bound_eq(a.hi, b.hi) {
                return false;
            }
        }
        let c = self.obj.dense(n);
        if (0..n).any(|j| !approx_eq(c[j], c[p.apply(j)])) {
            return false;
        }
        let mut orig: Vec<LinearConstraint> = self.cons.clone();
        let mut perm: Vec<LinearConstraint> = self.cons.iter().map(|r| r.permuted(p)).collect();
        orig.sort_by(cmp_rows);
        perm.sort_by(cmp_rows);
        orig.iter().zip(&perm).all(|(a, b)| rows_eq(a, b))
    }
}

fn bound_eq(a: f64, b: f64) -> bool {
    a == b || approx_eq(a, b)
}

fn cmp_rows(a: &LinearConstraint, b: &LinearConstraint) -> Ordering {
    a.sense.cmp(&b.sense).then(a.rhs.total_cmp(&b.rhs)).then(a.coefs.len().cmp(&b.coefs.len())).then_with(|| {
        for (x, y) in a.coefs.iter().zip(&b.coefs) {
            let o = x.0.cmp(&y.0).then(x.1.total_cmp(&y.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

fn rows_eq(a: &LinearConstraint, b: &LinearConstraint) -> bool {
    a.sense == b.sense
        && approx_eq(a.rhs, b.rhs)
        && a.coefs.len() == b.coefs.len()
        && a.coefs.iter().zip(&b.coefs).all(|(x, y)| x.0 == y.0 && approx_eq(x.1, y.1))
}
