//! Per-node symmetry prehandling structures `(m, π, φ)`.
//!
//! The structure selects which symmetry handling constraints hold at a node:
//! `σ(x) ⪰ σ(γ(x))` for all symmetries `γ`, where `σ(x)` is the restriction of
//! `(π∘φ)(x)` to its first `m` entries. The `k`-th entry of `σ(x)` is
//! `x[(π∘φ)⁻¹(k)]`, so `σ` is fully described by the list of those indices.

use crate::domain::DomainVector;
use crate::error::{Error, Result};
use crate::orbitope::OrbitopeLayout;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    First,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// `σ` is the identity on all variables.
    Static,
    /// Variables enter `σ` in the order they are first branched on; `φ = id`.
    BranchingBased,
    /// Whole orbitope rows enter `σ` when one of their cells is branched on,
    /// and the branched column is moved within its class of equal columns.
    OrbitopeDynamic(Placement),
}

/// A branching decision as seen by the prehandling structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchInfo {
    pub var: usize,
    pub proper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrehandlingState {
    pub policy: Policy,
    n: usize,
    /// `seen[k] = π⁻¹(k)` for `k < m`.
    seen: Vec<usize>,
    phi: Permutation,
    phi_inv: Permutation,
}

impl PrehandlingState {
    /// State at the root node.
    pub fn root(policy: Policy, n: usize) -> Self {
        let seen = match policy {
            Policy::Static => (0..n).collect(),
            _ => Vec::new(),
        };
        PrehandlingState { policy, n, seen, phi: Permutation::identity(n), phi_inv: Permutation::identity(n) }
    }

    /// Assembles a state from raw parts, e.g. when reading a recorded tree.
    pub fn from_parts(policy: Policy, seen: Vec<usize>, phi: Permutation) -> Result<Self> {
        let n = phi.len();
        let mut mark = vec![false; n];
        for &i in &seen {
            if i >= n || mark[i] {
                return Err(Error::InvalidState(format!("π prefix {seen:?} is not injective on 0..{n}")));
            }
            mark[i] = true;
        }
        let phi_inv = phi.inverse();
        Ok(PrehandlingState { policy, n, seen, phi, phi_inv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.seen.len()
    }

    /// `π⁻¹(0..m)`.
    pub fn pi_prefix(&self) -> &[usize] {
        &self.seen
    }

    /// Full `π`: the prefix as recorded, then unseen indices in increasing order.
    pub fn pi(&self) -> Permutation {
        let mut image = vec![usize::MAX; self.n];
        for (k, &i) in self.seen.iter().enumerate() {
            image[i] = k;
        }
        let mut next = self.seen.len();
        for slot in image.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        Permutation::from_images(image).expect("prefix is injective")
    }

    pub fn phi(&self) -> &Permutation {
        &self.phi
    }

    /// `[(π∘φ)⁻¹(k) for k in 0..m]`.
    pub fn sigma_positions(&self) -> Vec<usize> {
        self.seen.iter().map(|&i| self.phi_inv.apply(i)).collect()
    }

    pub fn sigma_apply<T: Clone>(&self, x: &[T]) -> Vec<T> {
        self.seen.iter().map(|&i| x[self.phi_inv.apply(i)].clone()).collect()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.seen.contains(&var)
    }

    /// Test hook: overwrite the `π` prefix without any checks.
    #[doc(hidden)]
    pub fn corrupt_prefix(&mut self, seen: Vec<usize>) {
        self.seen = seen;
    }

    /// Test hook: overwrite `φ` without any checks.
    #[doc(hidden)]
    pub fn corrupt_phi(&mut self, phi: Permutation) {
        self.phi_inv = phi.inverse();
        self.phi = phi;
    }

    /// State of a child created by `branch` at a node with (propagated) `domains`.
    pub fn child(&self, branch: BranchInfo, domains: &DomainVector, layout: Option<&OrbitopeLayout>) -> Result<Self> {
        if branch.var >= self.n {
            return Err(Error::IndexOutOfRange { index: branch.var, n: self.n });
        }
        if !branch.proper {
            return Ok(self.clone());
        }
        match self.policy {
            Policy::Static => Ok(self.clone()),
            Policy::BranchingBased => {
                let mut out = self.clone();
                if !out.seen.contains(&branch.var) {
                    out.seen.push(branch.var);
                }
                Ok(out)
            }
            Policy::OrbitopeDynamic(placement) => {
                let layout =
                    layout.ok_or_else(|| Error::InvalidState("dynamic orbitope state needs a layout".into()))?;
                self.orbitope_child(branch.var, domains, layout, placement)
            }
        }
    }

    fn orbitope_child(
        &self,
        var: usize,
        domains: &DomainVector,
        layout: &OrbitopeLayout,
        placement: Placement,
    ) -> Result<Self> {
        let Some((row, col)) = layout.cell_of(var) else {
            return Ok(self.clone());
        };
        if self.seen.contains(&layout.var(row, 0)) {
            return Ok(self.clone());
        }
        let q = layout.q;
        // original column shown in view column c
        let view_to_orig: Vec<usize> = (0..q)
            .map(|c| layout.cell_of(self.phi_inv.apply(layout.var(0, c))).map(|rc| rc.1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidState("φ does not permute orbitope columns".into()))?;
        let same_column =
            |a: usize, b: usize| (0..layout.p).all(|i| domains[layout.var(i, a)] == domains[layout.var(i, b)]);
        let class: Vec<usize> = (0..q).filter(|&c| same_column(view_to_orig[c], col)).collect();
        let target = match placement {
            Placement::First => class[0],
            Placement::Median => class[(class.len() - 1) / 2],
        };
        let other = view_to_orig[target];
        let mut out = self.clone();
        if other != col {
            let psi = layout.column_swap(self.n, col, other);
            out.phi = self.phi.compose_unchecked(&psi);
            out.phi_inv = out.phi.inverse();
        }
        out.seen.extend((0..q).map(|c| layout.var(row, c)));
        Ok(out)
    }
}
