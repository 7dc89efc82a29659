//! Lexicographic reduction: complete propagation of `σ(x) ⪰ σ(γ(x))`.
//!
//! With `s_k` the `k`-th position of `σ`, entry `k` of `σ(γ(x))` is
//! `x[γ⁻¹(s_k)]`, so the constraint compares the index pairs `(s_k, γ⁻¹(s_k))`.

use std::cmp::Ordering;

use crate::domain::{Domain, DomainVector, ExtReal, PropStatus};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexOrder {
    pub positions: Vec<usize>,
    pub gamma: Permutation,
    gamma_inv: Permutation,
}

impl LexOrder {
    pub fn new(positions: Vec<usize>, gamma: Permutation) -> Self {
        let gamma_inv = gamma.inverse();
        LexOrder { positions, gamma, gamma_inv }
    }

    /// The static order `x ⪰ γ(x)` over all variables.
    pub fn identity_order(gamma: Permutation) -> Self {
        Self::new((0..gamma.len()).collect(), gamma)
    }

    /// `(s_k, γ⁻¹(s_k))`.
    #[inline]
    fn pair(&self, k: usize) -> (usize, usize) {
        let a = self.positions[k];
        (a, self.gamma_inv.apply(a))
    }

    /// Whether `σ(x) ⪰ σ(γ(x))` holds for a point.
    pub fn holds(&self, x: &[f64]) -> bool {
        for k in 0..self.positions.len() {
            let (a, b) = self.pair(k);
            match x[a].total_cmp(&x[b]) {
                Ordering::Greater => return true,
                Ordering::Less => return false,
                Ordering::Equal => {}
            }
        }
        true
    }
}

enum Stage {
    Infeasible,
    /// Equality was forced at every position.
    Exhausted,
    /// First position where equality is not forced.
    Stopped(usize),
}

/// Records domains overwritten during a hypothetical run so they can be restored.
struct Trail(Vec<(usize, Domain)>);

impl Trail {
    fn set(&mut self, d: &mut DomainVector, i: usize, new: Domain) {
        self.0.push((i, d[i]));
        d[i] = new;
    }

    fn undo(self, d: &mut DomainVector) {
        for (i, old) in self.0.into_iter().rev() {
            d[i] = old;
        }
    }
}

fn both_fixed_equal(a: &Domain, b: &Domain) -> bool {
    match (a.fixed_value(), b.fixed_value()) {
        (Some(x), Some(y)) => ExtReal::exact(x).total_cmp(&ExtReal::exact(y)) == Ordering::Equal,
        _ => false,
    }
}

/// Stage 1 from position `from`: tighten `x_a ≥ min D_b`, `x_b ≤ max D_a` while
/// equality is forced.
fn stage_one(
    order: &LexOrder,
    d: &mut DomainVector,
    from: usize,
    mut trail: Option<&mut Trail>,
    ops: &mut u64,
) -> Stage {
    for k in from..order.positions.len() {
        *ops += 1;
        let (a, b) = order.pair(k);
        if a == b {
            continue;
        }
        let (lo_b, hi_a) = (d[b].min(), d[a].max());
        let mut da = d[a];
        let mut db = d[b];
        let ca = da.tighten_lo(lo_b);
        let cb = db.tighten_hi(hi_a);
        if ca || cb {
            match trail.as_deref_mut() {
                Some(t) => {
                    if ca {
                        t.set(d, a, da);
                    }
                    if cb {
                        t.set(d, b, db);
                    }
                }
                None => {
                    d[a] = da;
                    d[b] = db;
                }
            }
        }
        if da.is_empty() || db.is_empty() {
            return Stage::Infeasible;
        }
        if !both_fixed_equal(&da, &db) {
            return Stage::Stopped(k);
        }
    }
    Stage::Exhausted
}

/// Whether fixing `x_a = x_b = v` at position `k` makes the remaining positions infeasible.
fn fixing_fails(order: &LexOrder, d: &mut DomainVector, k: usize, a: usize, b: usize, v: f64, ops: &mut u64) -> bool {
    let mut trail = Trail(Vec::new());
    let mut da = d[a];
    let mut db = d[b];
    da.fix(v);
    db.fix(v);
    trail.set(d, a, da);
    trail.set(d, b, db);
    let out = if da.is_empty() || db.is_empty() {
        true
    } else {
        matches!(stage_one(order, d, k + 1, Some(&mut trail), ops), Stage::Infeasible)
    };
    trail.undo(d);
    out
}

/// Complete propagation of one lexicographic constraint, in place.
pub fn propagate_lex(order: &LexOrder, d: &mut DomainVector) -> PropStatus {
    propagate_lex_counted(order, d, &mut 0)
}

/// [`propagate_lex`] that also counts visited positions.
pub fn propagate_lex_counted(order: &LexOrder, d: &mut DomainVector, ops: &mut u64) -> PropStatus {
    let before = d.clone();
    let k = match stage_one(order, d, 0, None, ops) {
        Stage::Infeasible => return PropStatus::Infeasible,
        Stage::Exhausted => return status(&before, d),
        Stage::Stopped(k) => k,
    };
    let (a, b) = order.pair(k);
    // can x_a = x_b hold at the lower end of D_a?
    let (da, db) = (d[a], d[b]);
    let low_tie = !da.lo_strict && !db.lo_strict && da.min().total_cmp(&db.min()) == Ordering::Equal;
    let high_tie = !da.hi_strict && !db.hi_strict && da.max().total_cmp(&db.max()) == Ordering::Equal;
    let drop_low = low_tie && da.lo.is_finite() && fixing_fails(order, d, k, a, b, da.lo, ops);
    let drop_high = high_tie && db.hi.is_finite() && fixing_fails(order, d, k, a, b, db.hi, ops);
    if drop_low {
        d[a].tighten_lo(ExtReal { v: da.lo, eps: 1 });
    }
    if drop_high {
        d[b].tighten_hi(ExtReal { v: db.hi, eps: -1 });
    }
    if d[a].is_empty() || d[b].is_empty() {
        return PropStatus::Infeasible;
    }
    status(&before, d)
}

fn status(before: &DomainVector, after: &DomainVector) -> PropStatus {
    PropStatus::from_changed(before != after)
}

/// Round-robin over all orders until none changes `d`.
pub fn propagate_lex_all(orders: &[LexOrder], d: &mut DomainVector) -> PropStatus {
    let mut any = false;
    loop {
        let mut changed = false;
        for o in orders {
            match propagate_lex(o, d) {
                PropStatus::Infeasible => return PropStatus::Infeasible,
                PropStatus::Reduced => changed = true,
                PropStatus::Unchanged => {}
            }
        }
        if !changed {
            return PropStatus::from_changed(any);
        }
        any = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(b: &[(i64, i64)]) -> DomainVector {
        DomainVector::new(b.iter().map(|&(l, h)| Domain::integer(l, h)).collect())
    }

    #[test]
    fn example_two() {
        let g = Permutation::parse_cycles(4, "(1,3,2,4)").unwrap();
        let mut d = ints(&[(0, 0), (-1, 0), (1, 1), (-1, 1)]);
        assert_eq!(propagate_lex(&LexOrder::identity_order(g), &mut d), PropStatus::Reduced);
        assert_eq!(d, ints(&[(0, 0), (-1, 0), (1, 1), (-1, -1)]));
    }

    #[test]
    fn identity_unchanged() {
        let mut d = ints(&[(0, 1), (0, 3)]);
        let o = LexOrder::identity_order(Permutation::identity(2));
        assert_eq!(propagate_lex(&o, &mut d), PropStatus::Unchanged);
    }

    #[test]
    fn dynamic_order_of_cyclic_shift() {
        // σ = (x3, x4), x3 = 1, x4 = 0, γ = (1,2,3,4)
        let g = Permutation::parse_cycles(4, "(1,2,3,4)").unwrap();
        let mut d = ints(&[(0, 1), (0, 1), (1, 1), (0, 0)]);
        propagate_lex(&LexOrder::new(vec![2, 3], g), &mut d);
        assert_eq!(d[1].fixed_value(), Some(0.0));
        assert_eq!(d[0], Domain::binary());
    }

    #[test]
    fn continuous_strict_bound() {
        // (x0, x1) ⪰ (x1, x0) amounts to x0 ≥ x1
        let g = Permutation::transposition(2, 0, 1);
        let mut d = DomainVector::new(vec![Domain::continuous(0.0, 2.0), Domain::continuous(1.0, 3.0)]);
        assert_eq!(propagate_lex(&LexOrder::identity_order(g), &mut d), PropStatus::Reduced);
        assert_eq!(d[0].lo, 1.0);
        assert_eq!(d[1].hi, 2.0);
    }

    #[test]
    fn fixpoint_over_several_orders() {
        let a = LexOrder::identity_order(Permutation::transposition(3, 0, 1));
        let b = LexOrder::identity_order(Permutation::transposition(3, 1, 2));
        let mut d = ints(&[(0, 0), (0, 1), (0, 1)]);
        assert_eq!(propagate_lex_all(&[a, b], &mut d), PropStatus::Reduced);
        assert_eq!(d, ints(&[(0, 0), (0, 0), (0, 0)]));
        assert_eq!(propagate_lex_all(&[], &mut d), PropStatus::Unchanged);
    }

    #[test]
    fn infeasible_when_forced_order_violated() {
        let g = Permutation::transposition(2, 0, 1);
        let mut d = ints(&[(0, 0), (1, 1)]);
        assert_eq!(propagate_lex(&LexOrder::identity_order(g), &mut d), PropStatus::Infeasible);
    }
}
