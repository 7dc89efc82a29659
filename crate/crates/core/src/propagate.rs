//! Activity-based bound tightening on linear constraints.

use crate::domain::{DomainVector, ExtReal, PropStatus, VarKind, TOL};
use crate::instance::{LinearConstraint, Sense};

const MAX_ROUNDS: usize = 64;

/// Minimum relative improvement for a continuous bound to count as a change.
const MIN_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
struct Activity {
    finite: f64,
    inf_count: usize,
}

fn min_activity(c: &LinearConstraint, d: &DomainVector) -> Activity {
    let mut act = Activity { finite: 0.0, inf_count: 0 };
    for &(j, a) in &c.coefs {
        let b = if a > 0.0 { d[j].lo } else { d[j].hi };
        if b.is_finite() {
            act.finite += a * b;
        } else {
            act.inf_count += 1;
        }
    }
    act
}

fn max_activity(c: &LinearConstraint, d: &DomainVector) -> Activity {
    let mut act = Activity { finite: 0.0, inf_count: 0 };
    for &(j, a) in &c.coefs {
        let b = if a > 0.0 { d[j].hi } else { d[j].lo };
        if b.is_finite() {
            act.finite += a * b;
        } else {
            act.inf_count += 1;
        }
    }
    act
}

fn worth_it(kind: VarKind, old: f64, new: f64) -> bool {
    kind == VarKind::Integer || !old.is_finite() || (new - old).abs() > MIN_STEP * old.abs().max(1.0)
}

/// Tightens bounds from `Σ a_j x_j ≤ rhs` using the minimum activity.
fn tighten_le(
    coefs: &[(usize, f64)],
    rhs: f64,
    act: Activity,
    lower_of: impl Fn(usize, f64) -> f64,
    d: &mut DomainVector,
) -> bool {
    let mut changed = false;
    for &(j, a) in coefs {
        let own = lower_of(j, a);
        let rest = if own.is_finite() {
            if act.inf_count > 0 {
                continue;
            }
            act.finite - a * own
        } else {
            if act.inf_count > 1 {
                continue;
            }
            act.finite
        };
        let bound = (rhs - rest) / a;
        let dom = &mut d[j];
        if a > 0.0 {
            if bound < dom.hi - TOL && worth_it(dom.kind, dom.hi, bound) {
                changed |= dom.tighten_hi(ExtReal::exact(bound));
            }
        } else if bound > dom.lo + TOL && worth_it(dom.kind, dom.lo, bound) {
            changed |= dom.tighten_lo(ExtReal::exact(bound));
        }
    }
    changed
}

/// One pass over a single constraint. `None` means infeasible.
pub fn propagate_constraint(c: &LinearConstraint, d: &mut DomainVector) -> Option<bool> {
    let mut changed = false;
    if matches!(c.sense, Sense::Le | Sense::Eq) {
        let act = min_activity(c, d);
        if act.inf_count == 0 && act.finite > c.rhs + TOL * c.rhs.abs().max(1.0) {
            return None;
        }
        let snapshot = d.clone();
        changed |= tighten_le(
            &c.coefs,
            c.rhs,
            act,
            |j, a| {
                if a > 0.0 {
                    snapshot[j].lo
                } else {
                    snapshot[j].hi
                }
            },
            d,
        );
    }
    if matches!(c.sense, Sense::Ge | Sense::Eq) {
        // Σ a x ≥ r  ⇔  Σ (−a) x ≤ −r
        let act = max_activity(c, d);
        if act.inf_count == 0 && act.finite < c.rhs - TOL * c.rhs.abs().max(1.0) {
            return None;
        }
        let neg: Vec<(usize, f64)> = c.coefs.iter().map(|&(j, a)| (j, -a)).collect();
        let neg_act = Activity { finite: -act.finite, inf_count: act.inf_count };
        let snapshot = d.clone();
        changed |= tighten_le(
            &neg,
            -c.rhs,
            neg_act,
            |j, a| {
                if a > 0.0 {
                    snapshot[j].lo
                } else {
                    snapshot[j].hi
                }
            },
            d,
        );
    }
    if d.any_empty() {
        return None;
    }
    Some(changed)
}

/// Bound tightening over all constraints until a fixpoint (or a round limit).
pub fn propagate_linear<'a>(
    cons: impl IntoIterator<Item = &'a LinearConstraint> + Clone,
    d: &mut DomainVector,
) -> PropStatus {
    let mut any = false;
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for c in cons.clone() {
            match propagate_constraint(c, d) {
                None => return PropStatus::Infeasible,
                Some(ch) => changed |= ch,
            }
        }
        if !changed {
            break;
        }
        any = true;
    }
    PropStatus::from_changed(any)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn tightens_knapsack() {
        let c = LinearConstraint::new(vec![(0, 2.0), (1, 3.0)], Sense::Le, 6.0);
        let mut d = DomainVector::new(vec![Domain::integer(0, 5), Domain::integer(1, 5)]);
        assert_eq!(propagate_linear([&c], &mut d), PropStatus::Reduced);
        assert_eq!(d[0], Domain::integer(0, 1));
        assert_eq!(d[1], Domain::integer(1, 2));
    }

    #[test]
    fn equality_fixes_remaining() {
        let c = LinearConstraint::new(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Eq, 1.0);
        let mut d = DomainVector::new(vec![Domain::integer(1, 1), Domain::binary(), Domain::binary()]);
        propagate_linear([&c], &mut d);
        assert!(d.iter().all(|x| x.is_fixed()));
    }

    #[test]
    fn detects_infeasibility() {
        let c = LinearConstraint::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 3.0);
        let mut d = DomainVector::new(vec![Domain::binary(), Domain::binary()]);
        assert_eq!(propagate_linear([&c], &mut d), PropStatus::Infeasible);
    }

    #[test]
    fn continuous_with_infinite_bound() {
        // eta - x0 - 2 x1 >= 0, eta in [0, inf)
        let c = LinearConstraint::new(vec![(2, 1.0), (0, -1.0), (1, -2.0)], Sense::Ge, 0.0);
        let mut d = DomainVector::new(vec![
            Domain::integer(1, 1),
            Domain::integer(1, 1),
            Domain::continuous(0.0, f64::INFINITY),
        ]);
        propagate_linear([&c], &mut d);
        assert_eq!(d[2].lo, 3.0);
        assert_eq!(d[2].hi, f64::INFINITY);
    }
}
