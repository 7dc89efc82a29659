use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::instance::{Instance, LinearConstraint, Objective, Sense, Variable};
use crate::perm::Permutation;

/// Largest number of blocks `C(v, k)` accepted by [`build_covering`].
pub const COVERING_VAR_CAP: usize = 100_000;

/// A `t-(v, k, λ)` covering design: blocks of size `k` over `v` points such
/// that every `t`-subset lies in at least `λ` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoveringParams {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
}

/// All `k`-subsets of `0..v` in lexicographic order.
pub fn subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > v {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < v - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut r: usize = 1;
    for i in 0..k.min(n - k) {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// Minimizes the number of blocks (with multiplicity `ν_K ∈ {0..λ}`).
pub fn build_covering(params: &CoveringParams) -> Result<Instance> {
    let CoveringParams { t, v, k, lambda } = *params;
    if !(v >= k && k >= t && t >= 1 && lambda >= 1) {
        return Err(Error::InvalidInstance(format!("need v ≥ k ≥ t ≥ 1 and λ ≥ 1, got t={t} v={v} k={k} λ={lambda}")));
    }
    match binomial(v, k) {
        Some(b) if b <= COVERING_VAR_CAP => {}
        _ => return Err(Error::CapExceeded { cap: COVERING_VAR_CAP, partial: 0 }),
    }
    let blocks = subsets(v, k);
    let index: HashMap<Vec<usize>, usize> = blocks.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let n = blocks.len();
    let vars = vec![Variable::integer(0, lambda as i64); n];
    let cons = subsets(v, t)
        .into_iter()
        .map(|ts| {
            let coefs = blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| ts.iter().all(|e| b.contains(e)))
                .map(|(i, _)| (i, 1.0))
                .collect();
            LinearConstraint::new(coefs, Sense::Ge, lambda as f64)
        })
        .collect();
    let gens = (0..v.saturating_sub(1))
        .map(|a| {
            let swap = |e: usize| {
                if e == a {
                    a + 1
                } else if e == a + 1 {
                    a
                } else {
                    e
                }
            };
            let image = blocks
                .iter()
                .map(|b| {
                    let mut img: Vec<usize> = b.iter().map(|&e| swap(e)).collect();
                    img.sort_unstable();
                    index[&img]
                })
                .collect();
            Permutation::from_images(image)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance {
        name: format!("covering_{t}_{v}_{k}_{lambda}"),
        vars,
        cons,
        obj: Objective::new((0..n).map(|i| (i, 1.0)).collect()),
        group: PermGroup::new(n, gens)?,
        orbitope: None,
    })
}
