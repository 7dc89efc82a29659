//! Permutations of variable indices.
//!
//! A permutation acts on vectors by moving entries: `γ(x)_i = x_{γ⁻¹(i)}`.
//! Indices are 0-based here; cycle notation in files and display is 1-based.

use std::fmt;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// `image[i] = γ(i)`; rejects anything that is not a bijection on `0..n`.
    pub fn from_images(image: Vec<usize>) -> Result<Self, Error> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || seen[j] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection")));
            }
            seen[j] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds from 0-based cycles. Cycles must be disjoint.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, Error> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= n {
                    return Err(Error::IndexOutOfRange { index: a, n });
                }
                if touched[a] {
                    return Err(Error::InvalidPermutation(format!("index {} appears in two cycles", a + 1)));
                }
                touched[a] = true;
                image[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Permutation { image })
    }

    /// Same as [`from_cycles`](Self::from_cycles) with 1-based entries.
    pub fn from_cycles_one_based(n: usize, cycles: &[Vec<usize>]) -> Result<Self, Error> {
        let mut zero = Vec::with_capacity(cycles.len());
        for cyc in cycles {
            let mut c = Vec::with_capacity(cyc.len());
            for &a in cyc {
                if a == 0 {
                    return Err(Error::InvalidPermutation("cycle entries are 1-based".into()));
                }
                c.push(a - 1);
            }
            zero.push(c);
        }
        Self::from_cycles(n, &zero)
    }

    /// Parses `"(1,3,2,4)(5,6)"`; `"id"` or `"()"` give the identity.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open =
                rest.strip_prefix('(').ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {s:?}")))?;
            let close = open.find(')').ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let mut cyc = Vec::new();
            for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let v: usize = tok.parse().map_err(|_| Error::InvalidPermutation(format!("bad index {tok:?}")))?;
                cyc.push(v);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles_one_based(n, &cycles)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, Error> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Self {
        Permutation { image: other.image.iter().map(|&j| self.image[j]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Moved points, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.image.iter().enumerate().filter(|(i, &j)| *i != j).map(|(i, _)| i).collect()
    }

    /// Non-trivial cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.image.len();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] || self.image[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            done[start] = true;
            let mut j = self.image[start];
            while j != start {
                done[j] = true;
                cyc.push(j);
                j = self.image[j];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycles_one_based(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().map(|c| c.into_iter().map(|i| i + 1).collect()).collect()
    }

    /// `γ(x)` with `γ(x)_i = x_{γ⁻¹(i)}`.
    pub fn act_on<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        for (i, &j) in self.image.iter().enumerate() {
            out[j] = x[i].clone();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles_one_based();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn compose_identity() {
        assert_eq!(p(2, "id").compose(&p(2, "(1,2)")).unwrap(), p(2, "(1,2)"));
    }

    #[test]
    fn cyclic_shift_and_inverse_compose_to_identity() {
        let c = p(4, "(1,2,3,4)").compose(&p(4, "(1,4,3,2)")).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn compose_matches_image_table() {
        let a = p(3, "(1,2)");
        let b = p(3, "(2,3)");
        let c = a.compose(&b).unwrap();
        for i in 0..3 {
            assert_eq!(c.apply(i), a.apply(b.apply(i)));
        }
        assert_eq!(c, p(3, "(1,2,3)"));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(p(2, "id").compose(&p(3, "id")).is_err());
    }

    #[test]
    fn act_moves_entries() {
        // γ = (1,2,3,4): γ(x) = (x4, x1, x2, x3)
        let g = p(4, "(1,2,3,4)");
        assert_eq!(g.act_on(&[1, 2, 3, 4]), vec![4, 1, 2, 3]);
    }

    #[test]
    fn cycle_roundtrip_and_display() {
        let g = p(6, "(3,1,5)(2,6)");
        assert_eq!(g.to_string(), "(1,5,3)(2,6)");
        assert_eq!(Permutation::from_cycles_one_based(6, &g.cycles_one_based()).unwrap(), g);
        assert_eq!(p(3, "id").to_string(), "id");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::parse_cycles(3, "(1,4)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Permutation::parse_cycles(3, "1,2").is_err());
    }
}
