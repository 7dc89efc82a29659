use crate::domain::VarKind;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::instance::{Instance, LinearConstraint, Objective, Sense, Variable};
use crate::orbitope::OrbitopeLayout;

/// Largest coefficient in [`sherali_smith_shc`] rows before a warning is raised.
pub const COEF_WARN_THRESHOLD: f64 = 1e9;

/// Noise dosage data: `p` machines with `d_i` tasks of `t_i` hours and
/// `α_i` noise each, `q` workers with `H` hours.
#[derive(Debug, Clone, PartialEq)]
pub struct NdbData {
    pub name: String,
    pub p: usize,
    pub q: usize,
    pub d: Vec<u32>,
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    pub h: f64,
    /// `θ_ij ∈ {0..d_i}` instead of binary.
    pub integer: bool,
}

fn column_group(p: usize, q: usize, n: usize) -> (PermGroup, OrbitopeLayout) {
    let layout = OrbitopeLayout::row_major(p, q, 0);
    let group = PermGroup::new(n, layout.adjacent_swaps(n)).expect("swaps act on n points");
    (group, layout)
}

/// Variables `θ` (row-major, indices `0..pq`) followed by `η`.
pub fn build_ndb(data: &NdbData) -> Result<Instance> {
    let (p, q) = (data.p, data.q);
    if p == 0 || q == 0 {
        return Err(Error::InvalidInstance("need at least one machine and one worker".into()));
    }
    for (what, len) in [("d", data.d.len()), ("t", data.t.len()), ("alpha", data.alpha.len())] {
        if len != p {
            return Err(Error::InvalidInstance(format!("{what} has {len} entries, expected {p}")));
        }
    }
    let n = p * q + 1;
    let eta = p * q;
    let cell = |i: usize, j: usize| i * q + j;
    let mut vars = Vec::with_capacity(n);
    for i in 0..p {
        let hi = if data.integer { data.d[i] as i64 } else { 1 };
        vars.extend((0..q).map(|_| Variable::integer(0, hi)));
    }
    vars.push(Variable::continuous(0.0, f64::INFINITY));
    let mut cons = Vec::new();
    for j in 0..q {
        let mut coefs = vec![(eta, 1.0)];
        coefs.extend((0..p).map(|i| (cell(i, j), -data.alpha[i])));
        cons.push(LinearConstraint::new(coefs, Sense::Ge, 0.0));
    }
    for i in 0..p {
        let coefs = (0..q).map(|j| (cell(i, j), 1.0)).collect();
        cons.push(LinearConstraint::new(coefs, Sense::Eq, data.d[i] as f64));
    }
    for j in 0..q {
        let coefs = (0..p).map(|i| (cell(i, j), data.t[i])).collect();
        cons.push(LinearConstraint::new(coefs, Sense::Le, data.h));
    }
    let (group, layout) = column_group(p, q, n);
    Ok(Instance {
        name: data.name.clone(),
        vars,
        cons,
        obj: Objective::new(vec![(eta, 1.0)]),
        group,
        orbitope: Some(layout.to_hint()),
    })
}

/// Binary `p × q` noise dosage skeleton without data constraints.
pub fn ndb_shell(p: usize, q: usize) -> Instance {
    let n = p * q + 1;
    let mut vars = vec![Variable::binary(); p * q];
    vars.push(Variable::continuous(0.0, f64::INFINITY));
    let (group, layout) = column_group(p, q, n);
    Instance {
        name: format!("ndb_shell_{p}x{q}"),
        vars,
        cons: Vec::new(),
        obj: Objective::new(vec![(p * q, 1.0)]),
        group,
        orbitope: Some(layout.to_hint()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShcRows {
    pub cons: Vec<LinearConstraint>,
    pub max_coef: f64,
    /// `max_coef` exceeds [`COEF_WARN_THRESHOLD`].
    pub warning: bool,
}

/// Column-ordering rows `Σ_i M^{p-i} θ_ij ≥ Σ_i M^{p-i} θ_i,j+1` with
/// `M = max_i d_i + 1`, for the orbitope of `inst`.
pub fn sherali_smith_shc(inst: &Instance) -> Result<ShcRows> {
    let hint = inst.orbitope.as_ref().ok_or_else(|| Error::InvalidInstance("instance has no orbitope".into()))?;
    let layout = OrbitopeLayout::from_hint(hint)?;
    let max_d = layout.vars().iter().map(|&v| inst.vars[v].hi).fold(0.0_f64, f64::max);
    if !max_d.is_finite() || layout.vars().iter().any(|&v| inst.vars[v].kind != VarKind::Integer) {
        return Err(Error::InvalidInstance("orbitope cells must be bounded integers".into()));
    }
    let m = max_d + 1.0;
    let p = layout.p;
    let weight = |i: usize| m.powi((p - 1 - i) as i32);
    let cons = (0..layout.q.saturating_sub(1))
        .map(|j| {
            let mut coefs = Vec::with_capacity(2 * p);
            for i in 0..p {
                coefs.push((layout.var(i, j), weight(i)));
                coefs.push((layout.var(i, j + 1), -weight(i)));
            }
            LinearConstraint::new(coefs, Sense::Ge, 0.0)
        })
        .collect();
    let max_coef = weight(0);
    Ok(ShcRows { cons, max_coef, warning: max_coef > COEF_WARN_THRESHOLD })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_symmetries() {
        let inst = super::super::ndb_toy();
        assert_eq!(inst.n(), 16);
        assert!(inst.group.generators().iter().all(|g| inst.validate_symmetry(g)));
    }

    #[test]
    fn dimension_mismatch() {
        let bad = NdbData {
            name: String::new(),
            p: 2,
            q: 2,
            d: vec![1],
            t: vec![1.0, 1.0],
            alpha: vec![1.0, 1.0],
            h: 1.0,
            integer: false,
        };
        assert!(build_ndb(&bad).is_err());
    }

    #[test]
    fn single_row_shc_is_a_chain() {
        let inst = build_ndb(&NdbData {
            name: String::new(),
            p: 1,
            q: 3,
            d: vec![2],
            t: vec![1.0],
            alpha: vec![1.0],
            h: 5.0,
            integer: true,
        })
        .unwrap();
        let rows = sherali_smith_shc(&inst).unwrap();
        assert_eq!(rows.cons.len(), 2);
        assert_eq!(rows.cons[0].coefs, vec![(0, 1.0), (1, -1.0)]);
        assert!(!rows.warning);
    }
}
