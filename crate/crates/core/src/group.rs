//! Permutation groups given by generators.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    pub enumeration_cap: usize,
}

/// One connected block of generators together with the indices they move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub support: Vec<usize>,
    pub group: PermGroup,
}

impl Component {
    /// The component's group acting on `0..support.len()` only.
    pub fn restricted(&self) -> PermGroup {
        let k = self.support.len();
        let mut local = vec![usize::MAX; self.group.n];
        for (a, &i) in self.support.iter().enumerate() {
            local[i] = a;
        }
        let gens = self
            .group
            .generators
            .iter()
            .map(|g| {
                let image = self.support.iter().map(|&i| local[g.apply(i)]).collect();
                Permutation::from_images(image).expect("generator maps support onto itself")
            })
            .collect();
        PermGroup { n: k, generators: gens, enumeration_cap: self.group.enumeration_cap }
    }
}

impl PermGroup {
    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.len() });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup { n, generators, enumeration_cap: DEFAULT_ENUMERATION_CAP })
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup { n, generators: Vec::new(), enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// All group elements in BFS order from the identity.
    pub fn enumerate(&self) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut out = vec![id.clone()];
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose_unchecked(&g);
                if seen.insert(h.clone()) {
                    if out.len() >= self.enumeration_cap {
                        return Err(Error::CapExceeded { cap: self.enumeration_cap, partial: out.len() });
                    }
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(out)
    }

    /// Orbit of `i`, ascending.
    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        mark[i] = true;
        let mut stack = vec![i];
        let mut out = vec![i];
        while let Some(a) = stack.pop() {
            for g in &self.generators {
                let b = g.apply(a);
                if !mark[b] {
                    mark[b] = true;
                    out.push(b);
                    stack.push(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orbit partition of `0..n`; `rep[i]` is the smallest element of the orbit of `i`.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        orbit_representatives(self.n, &self.generators)
    }

    /// Splits the generators into blocks whose supports are connected.
    pub fn components(&self) -> Vec<Component> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            let sup = g.support();
            for w in sup.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut blocks: Vec<(Vec<usize>, Vec<Permutation>)> = Vec::new();
        for g in &self.generators {
            let r = uf.find(g.support()[0]);
            match roots.iter().position(|&x| x == r) {
                Some(k) => blocks[k].1.push(g.clone()),
                None => {
                    roots.push(r);
                    blocks.push((Vec::new(), vec![g.clone()]));
                }
            }
        }
        for (support, gens) in blocks.iter_mut() {
            let mut moved = vec![false; self.n];
            for g in gens.iter() {
                for i in g.support() {
                    moved[i] = true;
                }
            }
            *support = (0..self.n).filter(|&i| moved[i]).collect();
        }
        let mut out: Vec<Component> = blocks
            .into_iter()
            .map(|(support, gens)| Component {
                support,
                group: PermGroup { n: self.n, generators: gens, enumeration_cap: self.enumeration_cap },
            })
            .collect();
        out.sort_by_key(|c| c.support[0]);
        out
    }
}

pub(crate) fn orbit_representatives(n: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for i in 0..n {
            let j = g.apply(i);
            if i != j {
                uf.union(i, j);
            }
        }
    }
    let mut rep = vec![usize::MAX; n];
    let mut root_min = vec![usize::MAX; n];
    for (i, slot) in rep.iter_mut().enumerate() {
        let r = uf.find(i);
        if root_min[r] == usize::MAX {
            root_min[r] = i;
        }
        *slot = root_min[r];
    }
    rep
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}
