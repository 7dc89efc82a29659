//! Orbitopal reduction: complete propagation of "columns are lexicographically
//! non-increasing" for a `p × q` variable matrix with arbitrary domains.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::domain::{DomainVector, ExtReal, PropStatus, VarKind};
use crate::error::{Error, Result};
use crate::group::{PermGroup, UnionFind};
use crate::instance::{Instance, OrbitopeHint, Sense};
use crate::perm::Permutation;
use crate::prehandle::PrehandlingState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitopeLayout {
    pub p: usize,
    pub q: usize,
    cell_to_var: Vec<usize>,
    var_to_cell: HashMap<usize, (usize, usize)>,
}

impl OrbitopeLayout {
    pub fn new(p: usize, q: usize, cell_to_var: Vec<usize>) -> Result<Self> {
        if cell_to_var.len() != p * q {
            return Err(Error::InvalidInstance(format!("orbitope {p}x{q} needs {} cells", p * q)));
        }
        let mut var_to_cell = HashMap::with_capacity(p * q);
        for (k, &v) in cell_to_var.iter().enumerate() {
            if var_to_cell.insert(v, (k / q, k % q)).is_some() {
                return Err(Error::InvalidInstance(format!("variable {} appears twice in orbitope", v + 1)));
            }
        }
        Ok(OrbitopeLayout { p, q, cell_to_var, var_to_cell })
    }

    /// Cells `(i, j) ↦ offset + i·q + j`.
    pub fn row_major(p: usize, q: usize, offset: usize) -> Self {
        Self::new(p, q, (offset..offset + p * q).collect()).expect("distinct cells")
    }

    pub fn from_hint(h: &OrbitopeHint) -> Result<Self> {
        Self::new(h.p, h.q, h.index_map.clone())
    }

    pub fn to_hint(&self) -> OrbitopeHint {
        OrbitopeHint { p: self.p, q: self.q, index_map: self.cell_to_var.clone() }
    }

    #[inline]
    pub fn var(&self, i: usize, j: usize) -> usize {
        self.cell_to_var[i * self.q + j]
    }

    pub fn cell_of(&self, var: usize) -> Option<(usize, usize)> {
        self.var_to_cell.get(&var).copied()
    }

    pub fn vars(&self) -> &[usize] {
        &self.cell_to_var
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.cell_to_var[i * self.q..(i + 1) * self.q]
    }

    /// The variable permutation exchanging columns `a` and `b`.
    pub fn column_swap(&self, n: usize, a: usize, b: usize) -> Permutation {
        let mut image: Vec<usize> = (0..n).collect();
        for i in 0..self.p {
            image[self.var(i, a)] = self.var(i, b);
            image[self.var(i, b)] = self.var(i, a);
        }
        Permutation::from_images(image).expect("column swap is a bijection")
    }

    /// Generators `(j, j+1)` for all adjacent column pairs.
    pub fn adjacent_swaps(&self, n: usize) -> Vec<Permutation> {
        (0..self.q.saturating_sub(1)).map(|j| self.column_swap(n, j, j + 1)).collect()
    }
}

/// A `p × q` matrix of extended values, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtMatrix {
    pub p: usize,
    pub q: usize,
    pub cells: Vec<ExtReal>,
}

impl ExtMatrix {
    pub fn get(&self, i: usize, j: usize) -> ExtReal {
        self.cells[i * self.q + j]
    }

    /// Values with `ε` dropped.
    pub fn values(&self) -> Vec<Vec<f64>> {
        (0..self.p).map(|i| (0..self.q).map(|j| self.get(i, j).v).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeMatrices {
    pub lexmin: ExtMatrix,
    pub lexmax: ExtMatrix,
    /// First row where the two matrices differ in each column, `p` if none.
    pub first_diff_row: Vec<usize>,
}

/// Smallest value of `D` strictly above `v`.
fn next_above(kind: VarKind, v: ExtReal) -> ExtReal {
    match kind {
        VarKind::Integer => ExtReal::exact(v.v + 1.0),
        VarKind::Continuous => ExtReal { v: v.v, eps: 1 },
    }
}

fn next_below(kind: VarKind, v: ExtReal) -> ExtReal {
    match kind {
        VarKind::Integer => ExtReal::exact(v.v - 1.0),
        VarKind::Continuous => ExtReal { v: v.v, eps: -1 },
    }
}

fn ext_max(a: ExtReal, b: ExtReal) -> ExtReal {
    if a.total_cmp(&b) == Ordering::Less {
        b
    } else {
        a
    }
}

fn ext_min(a: ExtReal, b: ExtReal) -> ExtReal {
    if a.total_cmp(&b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Lexicographically smallest matrix with non-increasing columns inside `d`,
/// built from the last column to the first. `None` if there is none.
pub fn compute_lexmin(layout: &OrbitopeLayout, d: &DomainVector) -> Option<ExtMatrix> {
    lexmin_counted(layout, d, &mut 0)
}

pub fn compute_lexmax(layout: &OrbitopeLayout, d: &DomainVector) -> Option<ExtMatrix> {
    lexmax_counted(layout, d, &mut 0)
}

pub(crate) fn lexmin_counted(layout: &OrbitopeLayout, d: &DomainVector, ops: &mut u64) -> Option<ExtMatrix> {
    let (p, q) = (layout.p, layout.q);
    let mut cells = vec![ExtReal::exact(0.0); p * q];
    if p == 0 || q == 0 {
        return Some(ExtMatrix { p, q, cells });
    }
    for i in 0..p {
        *ops += 1;
        let dom = &d[layout.var(i, q - 1)];
        if dom.is_empty() {
            return None;
        }
        cells[i * q + q - 1] = dom.min();
    }
    for j in (0..q - 1).rev() {
        let mut equal = true;
        let mut flexible: Option<usize> = None;
        let mut i = 0;
        while i < p {
            *ops += 1;
            let dom = &d[layout.var(i, j)];
            if !equal {
                cells[i * q + j] = dom.min();
                i += 1;
                continue;
            }
            let r = cells[i * q + j + 1];
            if dom.max().total_cmp(&r) == Ordering::Less {
                // nothing in D at or above the reference: raise an earlier row
                let k = flexible?;
                let dk = &d[layout.var(k, j)];
                cells[k * q + j] = ext_max(dk.min(), next_above(dk.kind, cells[k * q + j + 1]));
                equal = false;
                i = k + 1;
                continue;
            }
            let v = ext_max(dom.min(), r);
            cells[i * q + j] = v;
            if v.total_cmp(&r) == Ordering::Greater {
                equal = false;
            } else if dom.max().total_cmp(&r) == Ordering::Greater {
                flexible = Some(i);
            }
            i += 1;
        }
    }
    Some(ExtMatrix { p, q, cells })
}

pub(crate) fn lexmax_counted(layout: &OrbitopeLayout, d: &DomainVector, ops: &mut u64) -> Option<ExtMatrix> {
    let (p, q) = (layout.p, layout.q);
    let mut cells = vec![ExtReal::exact(0.0); p * q];
    if p == 0 || q == 0 {
        return Some(ExtMatrix { p, q, cells });
    }
    for i in 0..p {
        *ops += 1;
        let dom = &d[layout.var(i, 0)];
        if dom.is_empty() {
            return None;
        }
        cells[i * q] = dom.max();
    }
    for j in 1..q {
        let mut equal = true;
        let mut flexible: Option<usize> = None;
        let mut i = 0;
        while i < p {
            *ops += 1;
            let dom = &d[layout.var(i, j)];
            if !equal {
                cells[i * q + j] = dom.max();
                i += 1;
                continue;
            }
            let r = cells[i * q + j - 1];
            if dom.min().total_cmp(&r) == Ordering::Greater {
                let k = flexible?;
                let dk = &d[layout.var(k, j)];
                cells[k * q + j] = ext_min(dk.max(), next_below(dk.kind, cells[k * q + j - 1]));
                equal = false;
                i = k + 1;
                continue;
            }
            let v = ext_min(dom.max(), r);
            cells[i * q + j] = v;
            if v.total_cmp(&r) == Ordering::Less {
                equal = false;
            } else if dom.min().total_cmp(&r) == Ordering::Less {
                flexible = Some(i);
            }
            i += 1;
        }
    }
    Some(ExtMatrix { p, q, cells })
}

pub fn extreme_matrices(layout: &OrbitopeLayout, d: &DomainVector) -> Option<ExtremeMatrices> {
    extremes_counted(layout, d, &mut 0)
}

fn extremes_counted(layout: &OrbitopeLayout, d: &DomainVector, ops: &mut u64) -> Option<ExtremeMatrices> {
    let lexmin = lexmin_counted(layout, d, ops)?;
    let lexmax = lexmax_counted(layout, d, ops)?;
    let first_diff_row = (0..layout.q)
        .map(|j| {
            (0..layout.p)
                .find(|&i| lexmin.get(i, j).total_cmp(&lexmax.get(i, j)) != Ordering::Equal)
                .unwrap_or(layout.p)
        })
        .collect();
    Some(ExtremeMatrices { lexmin, lexmax, first_diff_row })
}

/// Tightens `d` to the smallest box with the same intersection with the orbitope.
pub fn propagate_orbitope(layout: &OrbitopeLayout, d: &mut DomainVector) -> PropStatus {
    propagate_orbitope_counted(layout, d, &mut 0)
}

/// [`propagate_orbitope`] that also counts elementary cell operations.
pub fn propagate_orbitope_counted(layout: &OrbitopeLayout, d: &mut DomainVector, ops: &mut u64) -> PropStatus {
    let Some(ex) = extremes_counted(layout, d, ops) else {
        return PropStatus::Infeasible;
    };
    let mut changed = false;
    for j in 0..layout.q {
        let last = ex.first_diff_row[j].min(layout.p - 1);
        for i in 0..=last {
            *ops += 1;
            let dom = &mut d[layout.var(i, j)];
            changed |= dom.tighten_lo(ex.lexmin.get(i, j));
            changed |= dom.tighten_hi(ex.lexmax.get(i, j));
            if dom.is_empty() {
                return PropStatus::Infeasible;
            }
        }
    }
    PropStatus::from_changed(changed)
}

/// The part of the orbitope already in `σ`, as seen through `(π∘φ)`.
pub fn seen_sublayout(layout: &OrbitopeLayout, state: &PrehandlingState) -> Result<Option<OrbitopeLayout>> {
    let m = state.m();
    if !m.is_multiple_of(layout.q) {
        return Err(Error::InvalidState(format!("m = {m} is not a multiple of q = {}", layout.q)));
    }
    if m == 0 {
        return Ok(None);
    }
    OrbitopeLayout::new(m / layout.q, layout.q, state.sigma_positions()).map(Some)
}

/// Orbitopal reduction on the rows a dynamic prehandling state has seen.
pub fn propagate_orbitope_dynamic(
    layout: &OrbitopeLayout,
    state: &PrehandlingState,
    d: &mut DomainVector,
) -> Result<PropStatus> {
    Ok(match seen_sublayout(layout, state)? {
        Some(sub) => propagate_orbitope(&sub, d),
        None => PropStatus::Unchanged,
    })
}

/// Recognizes groups acting as all column permutations of a variable matrix.
///
/// Every generator must swap two columns of one common cell assignment, and the
/// column transpositions must connect all columns.
pub fn detect_orbitope(g: &PermGroup) -> Option<OrbitopeLayout> {
    let gens = g.generators();
    if gens.is_empty() {
        return None;
    }
    let cycles: Vec<Vec<Vec<usize>>> = gens.iter().map(|x| x.cycles()).collect();
    let p = cycles[0].len();
    if cycles.iter().any(|c| c.len() != p || c.iter().any(|cy| cy.len() != 2)) {
        return None;
    }
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut moved = vec![false; n];
    for c in cycles.iter().flatten() {
        uf.union(c[0], c[1]);
        moved[c[0]] = true;
        moved[c[1]] = true;
    }
    let support: Vec<usize> = (0..n).filter(|&i| moved[i]).collect();
    if !support.len().is_multiple_of(p) {
        return None;
    }
    let q = support.len() / p;
    // rows ordered by their smallest element
    let mut row_of = vec![usize::MAX; n];
    let mut row_roots: Vec<usize> = Vec::new();
    for &i in &support {
        let r = uf.find(i);
        let k = match row_roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                row_roots.push(r);
                row_roots.len() - 1
            }
        };
        row_of[i] = k;
    }
    if row_roots.len() != p {
        return None;
    }
    for c in &cycles {
        let mut rows: Vec<usize> = c.iter().map(|cy| row_of[cy[0]]).collect();
        rows.sort_unstable();
        rows.dedup();
        if rows.len() != p {
            return None;
        }
    }
    let ref_row: Vec<usize> = support.iter().copied().filter(|&i| row_of[i] == 0).collect();
    if ref_row.len() != q {
        return None;
    }
    let mut col_of = vec![usize::MAX; n];
    for (c, &i) in ref_row.iter().enumerate() {
        col_of[i] = c;
    }
    // column pair of each generator, read off the reference row
    let pairs: Vec<(usize, usize)> = cycles
        .iter()
        .map(|c| {
            let cy = c.iter().find(|cy| row_of[cy[0]] == 0).expect("one cycle per row");
            (col_of[cy[0]].min(col_of[cy[1]]), col_of[cy[0]].max(col_of[cy[1]]))
        })
        .collect();
    loop {
        let mut progress = true;
        while progress {
            progress = false;
            // an element moved by two generators with different column pairs is pinned
            for &i in &support {
                if col_of[i] != usize::MAX {
                    continue;
                }
                let mut cand: Option<Vec<usize>> = None;
                for (gi, c) in cycles.iter().enumerate() {
                    if c.iter().any(|cy| cy.contains(&i)) {
                        let (a, b) = pairs[gi];
                        cand = Some(match cand {
                            None => vec![a, b],
                            Some(v) => v.into_iter().filter(|&x| x == a || x == b).collect(),
                        });
                    }
                }
                if let Some(v) = cand {
                    if v.is_empty() {
                        return None;
                    }
                    if v.len() == 1 {
                        col_of[i] = v[0];
                        progress = true;
                    }
                }
            }
            for (gi, c) in cycles.iter().enumerate() {
                let (a, b) = pairs[gi];
                for cy in c {
                    let (u, v) = (cy[0], cy[1]);
                    for (x, y) in [(u, v), (v, u)] {
                        if col_of[x] != usize::MAX && col_of[y] == usize::MAX {
                            let other = if col_of[x] == a {
                                b
                            } else if col_of[x] == b {
                                a
                            } else {
                                return None;
                            };
                            col_of[y] = other;
                            progress = true;
                        }
                    }
                }
            }
        }
        // break remaining ties deterministically
        let open = cycles.iter().enumerate().find_map(|(gi, c)| {
            c.iter().find(|cy| col_of[cy[0]] == usize::MAX && col_of[cy[1]] == usize::MAX).map(|cy| (gi, cy[0]))
        });
        match open {
            Some((gi, u)) => col_of[u] = pairs[gi].0,
            None => break,
        }
    }
    let mut cells = vec![usize::MAX; p * q];
    for &i in &support {
        let (r, c) = (row_of[i], col_of[i]);
        if c == usize::MAX || cells[r * q + c] != usize::MAX {
            return None;
        }
        cells[r * q + c] = i;
    }
    let layout = OrbitopeLayout::new(p, q, cells).ok()?;
    let mut col_uf = UnionFind::new(q);
    for (gi, gen) in gens.iter().enumerate() {
        let (a, b) = pairs[gi];
        if *gen != layout.column_swap(n, a, b) {
            return None;
        }
        col_uf.union(a, b);
    }
    let root = col_uf.find(0);
    if (1..q).any(|c| col_uf.find(c) != root) {
        return None;
    }
    Some(layout)
}

/// At least three binary rows, each inside a `Σ ≤ 1` (or `= 1`) unit constraint.
pub fn is_packing_partitioning(layout: &OrbitopeLayout, inst: &Instance) -> bool {
    if layout.p < 3 {
        return false;
    }
    let binary = layout.vars().iter().all(|&v| {
        let x = &inst.vars[v];
        x.kind == VarKind::Integer && x.lo == 0.0 && x.hi == 1.0
    });
    binary
        && (0..layout.p).all(|i| {
            let row = layout.row(i);
            inst.cons.iter().any(|c| {
                matches!(c.sense, Sense::Le | Sense::Eq)
                    && c.rhs == 1.0
                    && c.coefs.iter().all(|&(j, a)| {
                        a == 1.0 && {
                            let v = &inst.vars[j];
                            v.kind == VarKind::Integer && v.lo >= 0.0
                        }
                    })
                    && row.iter().all(|v| c.coefs.iter().any(|t| t.0 == *v))
            })
        })
}
