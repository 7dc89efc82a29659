//! Variable domains with symbolic strictness (`lo + ε`, `hi − ε`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

/// Absolute tolerance for comparing and rounding bound values.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Integer,
    Continuous,
}

/// A real number plus an infinitesimal offset `eps · ε`, `eps ∈ {-1, 0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal {
    pub v: f64,
    pub eps: i8,
}

impl ExtReal {
    pub const fn exact(v: f64) -> Self {
        ExtReal { v, eps: 0 }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        if approx_eq(self.v, other.v) {
            self.eps.cmp(&other.eps)
        } else {
            self.v.total_cmp(&other.v)
        }
    }

    pub fn le(&self, other: &Self) -> bool {
        self.total_cmp(other) != Ordering::Greater
    }
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TOL
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub kind: VarKind,
    pub lo: f64,
    pub hi: f64,
    pub lo_strict: bool,
    pub hi_strict: bool,
}

impl Domain {
    pub fn new(kind: VarKind, lo: f64, hi: f64) -> Self {
        let mut d = Domain { kind, lo, hi, lo_strict: false, hi_strict: false };
        d.normalize();
        d
    }

    pub fn integer(lo: i64, hi: i64) -> Self {
        Self::new(VarKind::Integer, lo as f64, hi as f64)
    }

    pub fn binary() -> Self {
        Self::integer(0, 1)
    }

    pub fn continuous(lo: f64, hi: f64) -> Self {
        Self::new(VarKind::Continuous, lo, hi)
    }

    pub fn is_integer(&self) -> bool {
        self.kind == VarKind::Integer
    }

    /// Rounds integer bounds inward and clears their strictness flags.
    pub fn normalize(&mut self) {
        if self.kind != VarKind::Integer {
            return;
        }
        if self.lo.is_finite() {
            self.lo = if self.lo_strict { (self.lo + TOL).floor() + 1.0 } else { (self.lo - TOL).ceil() };
        }
        if self.hi.is_finite() {
            self.hi = if self.hi_strict { (self.hi - TOL).ceil() - 1.0 } else { (self.hi + TOL).floor() };
        }
        // avoid -0.0 from rounding
        self.lo += 0.0;
        self.hi += 0.0;
        self.lo_strict = false;
        self.hi_strict = false;
    }

    pub fn is_empty(&self) -> bool {
        if self.lo.is_nan() || self.hi.is_nan() {
            return true;
        }
        if approx_eq(self.lo, self.hi) {
            self.lo_strict || self.hi_strict
        } else {
            self.lo > self.hi
        }
    }

    pub fn min(&self) -> ExtReal {
        ExtReal { v: self.lo, eps: i8::from(self.lo_strict) }
    }

    pub fn max(&self) -> ExtReal {
        ExtReal { v: self.hi, eps: -i8::from(self.hi_strict) }
    }

    /// The single value of a fixed domain.
    pub fn fixed_value(&self) -> Option<f64> {
        if !self.lo_strict && !self.hi_strict && approx_eq(self.lo, self.hi) {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.fixed_value().is_some()
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_strict { v > self.lo + TOL } else { v >= self.lo - TOL };
        let below = if self.hi_strict { v < self.hi - TOL } else { v <= self.hi + TOL };
        above && below
    }

    /// `lo := max(lo, b)`. Returns whether the domain shrank.
    pub fn tighten_lo(&mut self, b: ExtReal) -> bool {
        if b.v == f64::NEG_INFINITY || b.total_cmp(&self.min()) != Ordering::Greater {
            return false;
        }
        let old = *self;
        self.lo = b.v;
        self.lo_strict = b.eps > 0;
        self.normalize();
        *self != old
    }

    /// `hi := min(hi, b)`. Returns whether the domain shrank.
    pub fn tighten_hi(&mut self, b: ExtReal) -> bool {
        if b.v == f64::INFINITY || b.total_cmp(&self.max()) != Ordering::Less {
            return false;
        }
        let old = *self;
        self.hi = b.v;
        self.hi_strict = b.eps < 0;
        self.normalize();
        *self != old
    }

    pub fn intersect(&mut self, other: &Domain) -> bool {
        let a = self.tighten_lo(other.min());
        let b = self.tighten_hi(other.max());
        a || b
    }

    pub fn fix(&mut self, v: f64) -> bool {
        let a = self.tighten_lo(ExtReal::exact(v));
        let b = self.tighten_hi(ExtReal::exact(v));
        a || b
    }

    /// `self ⊆ other` as sets.
    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.is_empty() || (other.min().le(&self.min()) && self.max().le(&other.max()))
    }

    /// Number of integer values, `None` for continuous or unbounded domains.
    pub fn cardinality(&self) -> Option<u64> {
        if self.kind != VarKind::Integer || !self.lo.is_finite() || !self.hi.is_finite() {
            return None;
        }
        if self.is_empty() {
            return Some(0);
        }
        Some((self.hi - self.lo).round() as u64 + 1)
    }

    /// Integer values in ascending order.
    pub fn values(&self) -> Vec<i64> {
        match self.cardinality() {
            Some(_) => (self.lo.round() as i64..=self.hi.round() as i64).collect(),
            None => Vec::new(),
        }
    }

    /// Reported bounds with `ε` replaced by 0.
    pub fn reported(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == v.round() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        if let Some(v) = self.fixed_value() {
            return write!(f, "{{{}}}", fmt_num(v));
        }
        let l = if self.lo_strict { "(" } else { "[" };
        let r = if self.hi_strict { ")" } else { "]" };
        write!(f, "{l}{},{}{r}", fmt_num(self.lo), fmt_num(self.hi))
    }
}

/// The box `D = D_1 × … × D_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainVector(pub Vec<Domain>);

impl DomainVector {
    pub fn new(domains: Vec<Domain>) -> Self {
        DomainVector(domains)
    }

    pub fn any_empty(&self) -> bool {
        self.0.iter().any(Domain::is_empty)
    }

    /// Componentwise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &DomainVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset_of(b))
    }

    /// Indices whose domain differs from `before`.
    pub fn changed_since(&self, before: &DomainVector) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != before.0[i]).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.0.len() && self.0.iter().zip(x).all(|(d, &v)| d.contains(v))
    }

    /// Number of integer points, `None` if some domain is not a finite integer range.
    pub fn box_size(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for d in &self.0 {
            total = total.checked_mul(d.cardinality()? as u128)?;
        }
        Some(total)
    }
}

impl Deref for DomainVector {
    type Target = Vec<Domain>;
    fn deref(&self) -> &Vec<Domain> {
        &self.0
    }
}

impl DerefMut for DomainVector {
    fn deref_mut(&mut self) -> &mut Vec<Domain> {
        &mut self.0
    }
}

impl fmt::Display for DomainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" × "))
    }
}

/// Outcome of one propagator call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropStatus {
    Unchanged,
    Reduced,
    Infeasible,
}

impl PropStatus {
    pub fn from_changed(changed: bool) -> Self {
        if changed {
            PropStatus::Reduced
        } else {
            PropStatus::Unchanged
        }
    }

    /// Combines two results of successive propagators.
    pub fn and(self, other: PropStatus) -> PropStatus {
        match (self, other) {
            (PropStatus::Infeasible, _) | (_, PropStatus::Infeasible) => PropStatus::Infeasible,
            (PropStatus::Reduced, _) | (_, PropStatus::Reduced) => PropStatus::Reduced,
            _ => PropStatus::Unchanged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_normalization_absorbs_strictness() {
        let mut d = Domain::integer(0, 3);
        assert!(d.tighten_lo(ExtReal { v: 1.0, eps: 1 }));
        assert_eq!((d.lo, d.hi, d.lo_strict), (2.0, 3.0, false));
        assert!(d.tighten_hi(ExtReal { v: 3.0, eps: -1 }));
        assert_eq!(d.fixed_value(), Some(2.0));
        let once = d;
        d.normalize();
        assert_eq!(d, once);
    }

    #[test]
    fn fractional_integer_bounds_round_inward() {
        let d = Domain::new(VarKind::Integer, -0.5, 2.7);
        assert_eq!((d.lo, d.hi), (0.0, 2.0));
    }

    #[test]
    fn continuous_strict_bounds() {
        let mut d = Domain::continuous(0.0, 1.0);
        assert!(d.tighten_lo(ExtReal { v: 1.0, eps: 1 }));
        assert!(d.is_empty());
        let mut e = Domain::continuous(0.0, 1.0);
        e.tighten_hi(ExtReal { v: 0.5, eps: -1 });
        assert!(!e.contains(0.5));
        assert!(e.contains(0.49));
        assert_eq!(e.to_string(), "[0,0.5)");
        assert_eq!(e.reported(), (0.0, 0.5));
    }

    #[test]
    fn min_max_order() {
        let d = Domain { kind: VarKind::Continuous, lo: 0.0, hi: 1.0, lo_strict: true, hi_strict: false };
        assert!(ExtReal::exact(0.0).total_cmp(&d.min()) == Ordering::Less);
        assert!(d.max().le(&ExtReal::exact(1.0)));
    }

    #[test]
    fn no_widening() {
        let mut d = Domain::integer(1, 2);
        assert!(!d.tighten_lo(ExtReal::exact(0.0)));
        assert!(!d.tighten_hi(ExtReal::exact(5.0)));
        assert!(!d.intersect(&Domain::integer(0, 4)));
    }

    #[test]
    fn box_size() {
        let b = DomainVector::new(vec![Domain::integer(0, 2), Domain::binary()]);
        assert_eq!(b.box_size(), Some(6));
        let c = DomainVector::new(vec![Domain::continuous(0.0, 1.0)]);
        assert_eq!(c.box_size(), None);
    }
}
