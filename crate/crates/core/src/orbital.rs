//! Orbital reduction under a branching-based prehandling structure.
//!
//! A symmetry `γ` is kept if the box certifies `σ(x) ≤ σ(γ(x))` componentwise;
//! orbits of the kept symmetries then drive two reductions: the branching
//! variable dominates its orbit at a child, and every orbit shares the
//! intersection of its members' domains.

use std::cmp::Ordering;

use crate::domain::{DomainVector, ExtReal, PropStatus};
use crate::group::orbit_representatives;
use crate::perm::Permutation;
use crate::prehandle::PrehandlingState;

/// Which symmetries are tested for membership in the dominance group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitalCandidates {
    /// The component's generators only.
    Generators,
    /// Every enumerated group element (falls back to generators above the cap).
    Enumerated,
}

/// `γ` passes if at every position `s_k` of `σ`, `γ⁻¹(s_k) = s_k` or
/// `max D_{s_k} ≤ min D_{γ⁻¹(s_k)}`.
pub fn passes_filter(gamma: &Permutation, positions: &[usize], d: &DomainVector) -> bool {
    positions.iter().all(|&s| {
        let t = inverse_image(gamma, s);
        t == s || d[s].max().total_cmp(&d[t].min()) != Ordering::Greater
    })
}

fn inverse_image(gamma: &Permutation, s: usize) -> usize {
    let mut prev = s;
    let mut cur = gamma.apply(s);
    while cur != s {
        prev = cur;
        cur = gamma.apply(cur);
    }
    prev
}

pub fn filter_delta_generators(gens: &[Permutation], state: &PrehandlingState, d: &DomainVector) -> Vec<Permutation> {
    let positions = state.sigma_positions();
    gens.iter().filter(|g| passes_filter(g, &positions, d)).cloned().collect()
}

/// The kept symmetries at one node and their orbit partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalContext {
    pub kept: Vec<Permutation>,
    rep: Vec<usize>,
}

impl OrbitalContext {
    pub fn build(candidates: &[Permutation], state: &PrehandlingState, d: &DomainVector) -> Self {
        let kept = filter_delta_generators(candidates, state, d);
        let rep = orbit_representatives(d.len(), &kept);
        OrbitalContext { kept, rep }
    }

    /// Orbit of `i` under the kept symmetries, ascending.
    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let r = self.rep[i];
        (0..self.rep.len()).filter(|&j| self.rep[j] == r).collect()
    }

    /// Non-trivial orbits, each ascending.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.rep.len();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            buckets[self.rep[i]].push(i);
        }
        buckets.into_iter().filter(|b| b.len() > 1).collect()
    }
}

/// At a child of a branching on `branch_var`: `x_branch ≥ x_j` for `j` in its orbit
/// (computed at the parent).
pub fn branch_orbit_reduce(orbit: &[usize], branch_var: usize, d: &mut DomainVector) -> PropStatus {
    let mut changed = false;
    let hi = d[branch_var].max();
    let mut lo = d[branch_var].min();
    for &j in orbit {
        if j == branch_var {
            continue;
        }
        changed |= d[j].tighten_hi(hi);
        if d[j].is_empty() {
            return PropStatus::Infeasible;
        }
        let m = d[j].min();
        if m.total_cmp(&lo) == Ordering::Greater {
            lo = m;
        }
    }
    changed |= d[branch_var].tighten_lo(lo);
    if d[branch_var].is_empty() {
        return PropStatus::Infeasible;
    }
    PropStatus::from_changed(changed)
}

/// `D_i ← ⋂_{j ∈ O_i} D_j` for every orbit.
pub fn orbit_intersection_reduce(ctx: &OrbitalContext, d: &mut DomainVector) -> PropStatus {
    let mut changed = false;
    for orbit in ctx.orbits() {
        let mut lo = ExtReal::exact(f64::NEG_INFINITY);
        let mut hi = ExtReal::exact(f64::INFINITY);
        for &j in &orbit {
            if d[j].min().total_cmp(&lo) == Ordering::Greater {
                lo = d[j].min();
            }
            if d[j].max().total_cmp(&hi) == Ordering::Less {
                hi = d[j].max();
            }
        }
        for &j in &orbit {
            changed |= d[j].tighten_lo(lo);
            changed |= d[j].tighten_hi(hi);
            if d[j].is_empty() {
                return PropStatus::Infeasible;
            }
        }
    }
    PropStatus::from_changed(changed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::orbitope::OrbitopeLayout;
    use crate::prehandle::{BranchInfo, Policy};

    #[test]
    fn empty_sigma_keeps_everything() {
        let l = OrbitopeLayout::row_major(3, 5, 0);
        let gens = l.adjacent_swaps(16);
        let s = PrehandlingState::root(Policy::BranchingBased, 16);
        let d = DomainVector::new(vec![Domain::binary(); 16]);
        assert_eq!(filter_delta_generators(&gens, &s, &d).len(), 4);
    }

    #[test]
    fn zero_branch_fixes_row_orbit() {
        let l = OrbitopeLayout::row_major(3, 5, 0);
        let gens = l.adjacent_swaps(16);
        let root = PrehandlingState::root(Policy::BranchingBased, 16);
        let d = DomainVector::new(vec![Domain::binary(); 16]);
        let ctx = OrbitalContext::build(&gens, &root, &d);
        let orbit = ctx.orbit(7);
        assert_eq!(orbit, vec![5, 6, 7, 8, 9]);
        let mut child = d.clone();
        child[7].fix(0.0);
        assert_eq!(branch_orbit_reduce(&orbit, 7, &mut child), PropStatus::Reduced);
        assert!((5..10).all(|i| child[i].fixed_value() == Some(0.0)));
        // the one-child only gets a lower bound on the branching variable
        let mut one = d.clone();
        one[7].fix(1.0);
        assert_eq!(branch_orbit_reduce(&orbit, 7, &mut one), PropStatus::Unchanged);
        let s = root.child(BranchInfo { var: 7, proper: true }, &child, None).unwrap();
        assert_eq!(filter_delta_generators(&gens, &s, &child).len(), 4);
    }

    #[test]
    fn singleton_orbit_unchanged() {
        let mut d = DomainVector::new(vec![Domain::integer(0, 1)]);
        assert_eq!(branch_orbit_reduce(&[0], 0, &mut d), PropStatus::Unchanged);
    }

    #[test]
    fn integer_branch_orbit() {
        let mut d = DomainVector::new(vec![Domain::integer(0, 1), Domain::integer(0, 2), Domain::integer(0, 2)]);
        branch_orbit_reduce(&[0, 1, 2], 0, &mut d);
        assert_eq!(d[1], Domain::integer(0, 1));
        assert_eq!(d[2], Domain::integer(0, 1));
    }

    #[test]
    fn intersection_on_orbit() {
        let g = vec![Permutation::transposition(2, 0, 1)];
        let s = PrehandlingState::root(Policy::BranchingBased, 2);
        let mut d = DomainVector::new(vec![Domain::integer(0, 3), Domain::integer(1, 2)]);
        let ctx = OrbitalContext::build(&g, &s, &d);
        assert_eq!(orbit_intersection_reduce(&ctx, &mut d), PropStatus::Reduced);
        assert_eq!(d[0], Domain::integer(1, 2));
        assert_eq!(orbit_intersection_reduce(&ctx, &mut d), PropStatus::Unchanged);
    }

    #[test]
    fn filter_rejects_uncertified_swap() {
        // σ = (x0); swap (x0 x1) needs max D0 ≤ min D1
        let g = vec![Permutation::transposition(2, 0, 1)];
        let s = PrehandlingState::root(Policy::BranchingBased, 2)
            .child(BranchInfo { var: 0, proper: true }, &DomainVector::new(vec![Domain::binary(); 2]), None)
            .unwrap();
        let d = DomainVector::new(vec![Domain::integer(1, 1), Domain::binary()]);
        assert!(filter_delta_generators(&g, &s, &d).is_empty());
        let d = DomainVector::new(vec![Domain::integer(0, 0), Domain::binary()]);
        assert_eq!(filter_delta_generators(&g, &s, &d).len(), 1);
    }
}
