//! Congruences as partitions of the universe.

use std::collections::{BTreeSet, HashSet, VecDeque};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::sets::ElemSet;
use super::{Elem, FiniteAlgebra, Table};
use crate::budget;
use crate::error::{Error, Result};

/// An equivalence relation; `rep[x]` is the least element of x's block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    rep: Vec<Elem>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct blocks were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut least = vec![usize::MAX; n];
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        for x in 0..n {
            least[roots[x]] = least[roots[x]].min(x);
        }
        Partition {
            rep: roots.iter().map(|&r| least[r]).collect(),
        }
    }
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            rep: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// Partition whose blocks are the fibres of `key`.
    pub fn from_key<K: std::hash::Hash + Eq>(n: usize, key: impl Fn(Elem) -> K) -> Self {
        let mut first: IndexMap<K, Elem> = IndexMap::new();
        let rep = (0..n).map(|x| *first.entry(key(x)).or_insert(x)).collect();
        Partition { rep }
    }

    pub fn from_pairs(n: usize, pairs: &[(Elem, Elem)]) -> Self {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_partition()
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    #[inline]
    pub fn rep(&self, x: Elem) -> Elem {
        self.rep[x]
    }

    #[inline]
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn is_identity(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_total(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    pub fn block_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut by: IndexMap<Elem, Vec<Elem>> = IndexMap::new();
        for (x, &r) in self.rep.iter().enumerate() {
            by.entry(r).or_default().push(x);
        }
        by.into_values().collect()
    }

    pub fn class(&self, x: Elem) -> Vec<Elem> {
        (0..self.size()).filter(|&y| self.related(x, y)).collect()
    }

    pub fn class_set(&self, x: Elem) -> ElemSet {
        super::sets::from_elems(self.size(), self.class(x))
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        (0..self.size()).all(|x| other.related(x, self.rep[x]))
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        uf.into_partition()
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_key(self.size(), |x| (self.rep[x], other.rep[x]))
    }

    /// The relation restricted to `set` (pairs with both ends in `set`);
    /// elements outside `set` become singletons.
    pub fn restrict(&self, set: &ElemSet) -> Partition {
        Partition::from_key(self.size(), |x| {
            if set.contains(x) {
                (self.rep[x], true)
            } else {
                (x, false)
            }
        })
    }

    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        let n = self.size();
        let mut v = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.related(a, b) {
                    v.push((a, b));
                }
            }
        }
        v
    }
}

fn generate(
    alg: &FiniteAlgebra,
    within: Option<&ElemSet>,
    base: &Partition,
    pairs: &[(Elem, Elem)],
) -> Partition {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut work: VecDeque<(Elem, Elem)> = VecDeque::new();
    let seeds = (0..n).map(|x| (x, base.rep(x))).chain(pairs.iter().copied());
    for (a, b) in seeds {
        if uf.union(a, b) {
            work.push_back((a, b));
        }
    }
    let params: Vec<Elem> = match within {
        Some(s) => s.ones().collect(),
        None => (0..n).collect(),
    };
    let tables: Vec<&Table> = alg.tables().values().collect();
    while let Some((a, b)) = work.pop_front() {
        for t in &tables {
            match t {
                Table::Constant(_) => {}
                Table::Unary(f) => {
                    if uf.union(f[a], f[b]) {
                        work.push_back((f[a], f[b]));
                    }
                }
                Table::Binary(f) => {
                    for &c in &params {
                        let (x, y) = (f[a * n + c], f[b * n + c]);
                        if uf.union(x, y) {
                            work.push_back((x, y));
                        }
                        let (x, y) = (f[c * n + a], f[c * n + b]);
                        if uf.union(x, y) {
                            work.push_back((x, y));
                        }
                    }
                }
            }
        }
    }
    uf.into_partition()
}

/// Cg: the least congruence containing the pairs.
pub fn cg(alg: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Partition {
    generate(alg, None, &Partition::identity(alg.size()), pairs)
}

/// Least congruence containing `base` and the pairs.
pub fn cg_over(alg: &FiniteAlgebra, base: &Partition, pairs: &[(Elem, Elem)]) -> Partition {
    generate(alg, None, base, pairs)
}

/// Least congruence of the subalgebra on `set` containing the pairs, as a
/// partition of the full universe (identity outside `set`).
pub fn cg_within(alg: &FiniteAlgebra, set: &ElemSet, pairs: &[(Elem, Elem)]) -> Partition {
    generate(alg, Some(set), &Partition::identity(alg.size()), pairs)
}

/// Least congruence whose 0-class contains `ideal`.
pub fn cg_collapsing(alg: &FiniteAlgebra, zero: Elem, ideal: impl IntoIterator<Item = Elem>) -> Partition {
    let pairs: Vec<(Elem, Elem)> = ideal.into_iter().map(|x| (x, zero)).collect();
    cg(alg, &pairs)
}

pub fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
    cg_over(alg, p, &[]) == *p
}

/// Congruences of the subalgebra on `set` that are generated by one pair.
fn principal_within(alg: &FiniteAlgebra, set: Option<&ElemSet>) -> Vec<Partition> {
    let elems: Vec<Elem> = match set {
        Some(s) => s.ones().collect(),
        None => (0..alg.size()).collect(),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            let p = generate(alg, set, &Partition::identity(alg.size()), &[(a, b)]);
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

fn join_closure(n: usize, principal: Vec<Partition>, within: Option<&ElemSet>) -> Result<Vec<Partition>> {
    let cap = budget::congruences();
    let bottom = Partition::identity(n);
    let mut all: BTreeSet<Partition> = BTreeSet::new();
    all.insert(bottom.clone());
    let mut frontier = vec![bottom];
    while let Some(t) = frontier.pop() {
        for p in &principal {
            let j = t.join(p);
            let j = match within {
                Some(s) => j.restrict(s),
                None => j,
            };
            if !all.contains(&j) {
                if all.len() >= cap {
                    return Err(Error::Resource(format!("more than {cap} congruences")));
                }
                all.insert(j.clone());
                frontier.push(j);
            }
        }
    }
    Ok(all.into_iter().collect())
}

/// All congruences, as joins of principal congruences, sorted.
pub fn congruence_lattice(alg: &FiniteAlgebra) -> Result<Vec<Partition>> {
    join_closure(alg.size(), principal_within(alg, None), None)
}

/// All congruences of the subalgebra on `set` (identity outside `set`).
pub fn congruence_lattice_within(alg: &FiniteAlgebra, set: &ElemSet) -> Result<Vec<Partition>> {
    join_closure(alg.size(), principal_within(alg, Some(set)), Some(set))
}

/// Quotient algebra; elements are the blocks ordered by least member.
/// Returns the algebra and the projection map.
pub fn quotient(alg: &FiniteAlgebra, p: &Partition, name: &str) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    if !is_congruence(alg, p) {
        return Err(Error::Invalid("partition is not a congruence".into()));
    }
    let n = alg.size();
    let reps: Vec<Elem> = (0..n).filter(|&x| p.rep(x) == x).collect();
    let mut index = vec![0; n];
    for (i, &r) in reps.iter().enumerate() {
        index[r] = i;
    }
    let proj: Vec<Elem> = (0..n).map(|x| index[p.rep(x)]).collect();
    let mut tables = IndexMap::new();
    for (op, t) in alg.tables() {
        let nt = match t {
            Table::Constant(c) => Table::Constant(proj[*c]),
            Table::Unary(f) => Table::Unary(reps.iter().map(|&x| proj[f[x]]).collect()),
            Table::Binary(f) => {
                let mut v = Vec::with_capacity(reps.len() * reps.len());
                for &x in &reps {
                    for &y in &reps {
                        v.push(proj[f[x * n + y]]);
                    }
                }
                Table::Binary(v)
            }
        };
        tables.insert(op.clone(), nt);
    }
    let labels = alg
        .labels()
        .map(|l| reps.iter().map(|&r| format!("[{}]", l[r])).collect());
    Ok((FiniteAlgebra::new(name, reps.len(), labels, tables)?, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};
    use crate::algebra::structure::product;

    #[test]
    fn luk_chains_are_simple() {
        let a = make_chain(ChainSpec::luk(4)).unwrap();
        let l = congruence_lattice(&a).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.iter().any(Partition::is_identity));
        assert!(l.iter().any(Partition::is_total));
    }

    #[test]
    fn godel_chain_congruences_follow_filters() {
        // Heyting congruences of G3 correspond to its three filters.
        let a = make_chain(ChainSpec::godel(3)).unwrap();
        let l = congruence_lattice(&a).unwrap();
        assert_eq!(l.len(), 3);
        let c = cg(&a, &[(1, 2)]);
        assert!(c.related(1, 2) && !c.related(0, 1));
    }

    #[test]
    fn product_congruences() {
        let b = make_chain(ChainSpec::luk(2)).unwrap();
        let p = product(&[&b, &b]).unwrap();
        assert_eq!(congruence_lattice(&p).unwrap().len(), 4);
        let (q, proj) = quotient(&p, &cg(&p, &[(0, 1)]), "q").unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(proj, vec![0, 0, 1, 1]);
    }

    #[test]
    fn partition_lattice_ops() {
        let a = Partition::from_pairs(4, &[(0, 1)]);
        let b = Partition::from_pairs(4, &[(1, 2)]);
        let j = a.join(&b);
        assert!(j.related(0, 2) && !j.related(0, 3));
        assert!(a.meet(&b).is_identity());
        assert!(a.refines(&j) && !j.refines(&a));
        assert_eq!(j.block_count(), 2);
        assert_eq!(j.blocks(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn non_congruence_rejected() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(quotient(&a, &Partition::from_pairs(3, &[(0, 1)]), "q").is_err());
    }
}
