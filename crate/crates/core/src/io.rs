//! JSON instance files. All indices in files are 1-based.
//!
//! ```json
//! { "n": 2,
//!   "vars": [{"kind": "integer", "lo": 0, "hi": 1}, {"kind": "integer", "lo": 0, "hi": 1}],
//!   "cons": [{"coefs": [[1, 1.0], [2, 1.0]], "sense": "<=", "rhs": 1}],
//!   "obj": {"coefs": [[1, -1.0], [2, -1.0]], "sense": "min"},
//!   "perms": [[[1, 2]]] }
//! ```
//! Missing `lo`/`hi` (or `null`) mean an infinite bound.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainVector, VarKind};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::instance::{Instance, LinearConstraint, Objective, OrbitopeHint, Sense, Variable};
use crate::perm::Permutation;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub n: usize,
    pub vars: Vec<VarSpec>,
    #[serde(default)]
    pub cons: Vec<ConSpec>,
    pub obj: ObjSpec,
    #[serde(default)]
    pub perms: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbitope: Option<OrbitopeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarSpec {
    pub kind: VarKind,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConSpec {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjSpec {
    pub coefs: Vec<(usize, f64)>,
    #[serde(default = "min_sense")]
    pub sense: String,
}

fn min_sense() -> String {
    "min".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitopeSpec {
    pub p: usize,
    pub q: usize,
    pub index_map: Vec<usize>,
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn one_based(coefs: &[(usize, f64)]) -> Vec<(usize, f64)> {
    coefs.iter().map(|&(j, a)| (j + 1, a)).collect()
}

fn zero_based(coefs: &[(usize, f64)], n: usize) -> Result<Vec<(usize, f64)>> {
    coefs
        .iter()
        .map(|&(j, a)| {
            if j == 0 || j > n {
                Err(Error::Parse(format!("coefficient index {j} outside 1..={n}")))
            } else {
                Ok((j - 1, a))
            }
        })
        .collect()
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            name: inst.name.clone(),
            n: inst.n(),
            vars: inst
                .vars
                .iter()
                .map(|v| VarSpec { kind: v.kind, lo: finite_or_none(v.lo), hi: finite_or_none(v.hi) })
                .collect(),
            cons: inst
                .cons
                .iter()
                .map(|c| ConSpec { coefs: one_based(&c.coefs), sense: c.sense, rhs: c.rhs })
                .collect(),
            obj: ObjSpec { coefs: one_based(&inst.obj.coefs), sense: min_sense() },
            perms: inst.group.generators().iter().map(|g| g.cycles_one_based()).collect(),
            orbitope: inst.orbitope.as_ref().map(|h| OrbitopeSpec {
                p: h.p,
                q: h.q,
                index_map: h.index_map.iter().map(|j| j + 1).collect(),
            }),
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Instance> {
        let n = f.n;
        if f.vars.len() != n {
            return Err(Error::Parse(format!("n = {n} but {} variables listed", f.vars.len())));
        }
        if f.obj.sense != "min" {
            return Err(Error::Parse(format!("objective sense {:?} unsupported, expected \"min\"", f.obj.sense)));
        }
        let vars = f
            .vars
            .iter()
            .map(|v| Variable {
                kind: v.kind,
                lo: v.lo.unwrap_or(f64::NEG_INFINITY),
                hi: v.hi.unwrap_or(f64::INFINITY),
            })
            .collect();
        let cons = f
            .cons
            .iter()
            .map(|c| Ok(LinearConstraint::new(zero_based(&c.coefs, n)?, c.sense, c.rhs)))
            .collect::<Result<Vec<_>>>()?;
        let obj = Objective::new(zero_based(&f.obj.coefs, n)?);
        let gens =
            f.perms.iter().map(|cycles| Permutation::from_cycles_one_based(n, cycles)).collect::<Result<Vec<_>>>()?;
        let orbitope = match f.orbitope {
            Some(o) => Some(OrbitopeHint {
                p: o.p,
                q: o.q,
                index_map: o
                    .index_map
                    .iter()
                    .map(|&j| {
                        if j == 0 || j > n {
                            Err(Error::Parse(format!("orbitope index {j} outside 1..={n}")))
                        } else {
                            Ok(j - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            }),
            None => None,
        };
        let inst = Instance { name: f.name, vars, cons, obj, group: PermGroup::new(n, gens)?, orbitope };
        inst.validate()?;
        Ok(inst)
    }
}

pub fn instance_to_json(inst: &Instance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceFile::from(inst))?)
}

pub fn instance_from_json(s: &str) -> Result<Instance> {
    let f: InstanceFile = serde_json::from_str(s)?;
    Instance::try_from(f)
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<()> {
    let mut s = instance_to_json(inst)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// Parses integer domains such as `"{0} [-1,0] {1} [-1,1]"`; a bare
/// number `v` means `{v}`, and `×` works as a separator.
pub fn parse_domains(s: &str) -> Result<DomainVector> {
    let bad = |t: &str| Error::Parse(format!("cannot read domain {t:?}"));
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad(t));
    let cleaned = s.replace('×', " ");
    let mut out = Vec::new();
    for tok in cleaned.split_whitespace() {
        let d = if let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (a, b) = inner.split_once(',').ok_or_else(|| bad(tok))?;
            Domain::integer(num(a)?, num(b)?)
        } else if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let v = num(inner)?;
            Domain::integer(v, v)
        } else {
            let v = num(tok)?;
            Domain::integer(v, v)
        };
        out.push(d);
    }
    Ok(DomainVector::new(out))
}
