//! Filters: nonempty, `star`-closed, upward closed subsets.
//!
//! Algebras without a `star` table are treated as lattices and use `meet`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::names::{MEET, STAR};
use crate::algebra::sets::{self, ElemSet};
use crate::algebra::{Binary, Elem, FiniteAlgebra, Lattice};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    AllProper,
    Prime,
    Maximal,
}

impl std::str::FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-proper" | "all" => Ok(FilterKind::AllProper),
            "prime" => Ok(FilterKind::Prime),
            "maximal" | "max" => Ok(FilterKind::Maximal),
            _ => Err(Error::Invalid(format!("unknown filter kind {s:?}"))),
        }
    }
}

pub(crate) struct FilterOps<'a> {
    pub lat: Lattice<'a>,
    pub mult: Binary<'a>,
}

impl<'a> FilterOps<'a> {
    pub fn of(alg: &'a FiniteAlgebra) -> Result<Self> {
        let lat = alg.lattice()?;
        let mult = alg.binary(STAR).or_else(|_| alg.binary(MEET))?;
        Ok(FilterOps { lat, mult })
    }

    pub fn up_closure(&self, s: &ElemSet) -> ElemSet {
        let mut out = s.clone();
        for x in 0..self.lat.n {
            if !out.contains(x) && s.ones().any(|a| self.lat.leq(a, x)) {
                out.insert(x);
            }
        }
        out
    }

    /// Fl: up-closure of all finite products of `seed ∪ {1}`.
    pub fn generate(&self, seed: impl IntoIterator<Item = Elem>) -> ElemSet {
        let n = self.lat.n;
        let mut set = ElemSet::with_capacity(n);
        let mut members = Vec::new();
        for x in std::iter::once(self.lat.one).chain(seed) {
            if !set.put(x) {
                members.push(x);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for j in 0..=i {
                let y = self.mult.apply(x, members[j]);
                if !set.put(y) {
                    members.push(y);
                }
            }
            i += 1;
        }
        self.up_closure(&set)
    }

    pub fn is_filter(&self, s: &ElemSet) -> bool {
        if s.is_clear() {
            return false;
        }
        let m = sets::members(s);
        m.iter()
            .all(|&a| m.iter().all(|&b| s.contains(self.mult.apply(a, b))))
            && m.iter()
                .all(|&a| (0..self.lat.n).all(|x| !self.lat.leq(a, x) || s.contains(x)))
    }

    pub fn is_proper(&self, s: &ElemSet) -> bool {
        !s.contains(self.lat.zero)
    }

    /// Prime: proper, and `a ∨ b ∈ P` forces `a ∈ P` or `b ∈ P`.
    pub fn is_prime(&self, s: &ElemSet) -> bool {
        let n = self.lat.n;
        self.is_proper(s)
            && (0..n).all(|a| {
                (0..n).all(|b| !s.contains(self.lat.join(a, b)) || s.contains(a) || s.contains(b))
            })
    }
}

/// Fl: the least filter containing `seed`.
pub fn generate_filter(alg: &FiniteAlgebra, seed: &[Elem]) -> Result<ElemSet> {
    if let Some(&bad) = seed.iter().find(|&&x| x >= alg.size()) {
        return Err(Error::Invalid(format!("{bad} is not an element")));
    }
    Ok(FilterOps::of(alg)?.generate(seed.iter().copied()))
}

pub fn is_filter(alg: &FiniteAlgebra, s: &ElemSet) -> Result<bool> {
    Ok(FilterOps::of(alg)?.is_filter(s))
}

pub fn is_prime(alg: &FiniteAlgebra, s: &ElemSet) -> Result<bool> {
    let ops = FilterOps::of(alg)?;
    Ok(ops.is_filter(s) && ops.is_prime(s))
}

fn select(ops: &FilterOps<'_>, all: Vec<ElemSet>, kind: FilterKind) -> Vec<ElemSet> {
    let proper: Vec<ElemSet> = all.into_iter().filter(|f| ops.is_proper(f)).collect();
    let mut out: Vec<ElemSet> = match kind {
        FilterKind::AllProper => proper,
        FilterKind::Prime => proper.into_iter().filter(|f| ops.is_prime(f)).collect(),
        FilterKind::Maximal => proper
            .iter()
            .filter(|f| !proper.iter().any(|g| g != *f && f.is_subset(g)))
            .cloned()
            .collect(),
    };
    out.sort_by(sets::cmp_bitmask);
    out
}

/// All filters (including the improper one): joins of principal filters.
pub fn all_filters(alg: &FiniteAlgebra) -> Result<Vec<ElemSet>> {
    let ops = FilterOps::of(alg)?;
    let principal: Vec<ElemSet> = (0..alg.size()).map(|a| ops.generate([a])).collect();
    let key = |s: &ElemSet| sets::members(s);
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut found: Vec<ElemSet> = Vec::new();
    for p in &principal {
        if seen.insert(key(p)) {
            found.push(p.clone());
        }
    }
    let mut i = 0;
    while i < found.len() {
        for p in &principal {
            if p.is_subset(&found[i]) {
                continue;
            }
            let mut u = found[i].clone();
            u.union_with(p);
            let j = ops.generate(u.ones());
            if seen.insert(key(&j)) {
                found.push(j);
            }
        }
        i += 1;
    }
    found.sort_by(sets::cmp_bitmask);
    Ok(found)
}

/// Proper, prime or maximal filters, sorted by bitmask.
pub fn enumerate_filters(alg: &FiniteAlgebra, kind: FilterKind) -> Result<Vec<ElemSet>> {
    let ops = FilterOps::of(alg)?;
    Ok(select(&ops, all_filters(alg)?, kind))
}

/// Same result by testing every subset; refuses universes above `max_size`.
pub fn enumerate_filters_exhaustive(
    alg: &FiniteAlgebra,
    kind: FilterKind,
    max_size: usize,
) -> Result<Vec<ElemSet>> {
    let n = alg.size();
    if n > max_size || n >= usize::BITS as usize {
        return Err(Error::Resource(format!(
            "subset scan over {n} elements exceeds bound {max_size}"
        )));
    }
    let ops = FilterOps::of(alg)?;
    let one = ops.lat.one;
    let mut all = Vec::new();
    for mask in 0usize..(1 << n) {
        if mask >> one & 1 == 0 {
            continue;
        }
        let s = sets::from_elems(n, (0..n).filter(|i| mask >> i & 1 == 1));
        if ops.is_filter(&s) {
            all.push(s);
        }
    }
    Ok(select(&ops, all, kind))
}

/// The element generating `f` as a principal filter, if any.
pub fn principal_generator(alg: &FiniteAlgebra, f: &ElemSet) -> Result<Option<Elem>> {
    let ops = FilterOps::of(alg)?;
    Ok(f.ones().find(|&a| ops.generate([a]) == *f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};
    use crate::algebra::structure::product;

    fn m(s: &ElemSet) -> Vec<Elem> {
        sets::members(s)
    }

    #[test]
    fn fl_examples() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        assert_eq!(m(&generate_filter(&l3, &[2]).unwrap()), vec![2]);
        assert_eq!(m(&generate_filter(&l3, &[1]).unwrap()), vec![0, 1, 2]);
        assert_eq!(m(&generate_filter(&g3, &[1]).unwrap()), vec![1, 2]);
        assert_eq!(m(&generate_filter(&g3, &[]).unwrap()), vec![2]);
    }

    #[test]
    fn spectra_of_small_chains() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        for k in [FilterKind::AllProper, FilterKind::Prime, FilterKind::Maximal] {
            let f: Vec<_> = enumerate_filters(&l3, k).unwrap().iter().map(m).collect();
            assert_eq!(f, vec![vec![2]]);
        }
        let all: Vec<_> = enumerate_filters(&g3, FilterKind::AllProper)
            .unwrap()
            .iter()
            .map(m)
            .collect();
        assert_eq!(all, vec![vec![2], vec![1, 2]]);
        let max: Vec<_> = enumerate_filters(&g3, FilterKind::Maximal)
            .unwrap()
            .iter()
            .map(m)
            .collect();
        assert_eq!(max, vec![vec![1, 2]]);
        assert_eq!(enumerate_filters(&g3, FilterKind::Prime).unwrap().len(), 2);
    }

    #[test]
    fn four_element_boolean() {
        let b = make_chain(ChainSpec::luk(2)).unwrap();
        let p = product(&[&b, &b]).unwrap();
        let max = enumerate_filters(&p, FilterKind::Maximal).unwrap();
        assert_eq!(max.len(), 2);
        for f in &max {
            assert!(principal_generator(&p, f).unwrap().is_some());
        }
    }

    #[test]
    fn join_route_matches_subset_scan() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        let algs = [
            product(&[&l3, &make_chain(ChainSpec::luk(2)).unwrap()]).unwrap(),
            product(&[&g3, &make_chain(ChainSpec::godel(2)).unwrap()]).unwrap(),
            make_chain(ChainSpec::godel(6)).unwrap(),
        ];
        for a in &algs {
            for k in [FilterKind::AllProper, FilterKind::Prime, FilterKind::Maximal] {
                assert_eq!(
                    enumerate_filters(a, k).unwrap(),
                    enumerate_filters_exhaustive(a, k, 12).unwrap(),
                    "{} {k:?}",
                    a.name()
                );
            }
        }
    }

    #[test]
    fn subset_scan_bound() {
        let a = make_chain(ChainSpec::godel(13)).unwrap();
        assert!(matches!(
            enumerate_filters_exhaustive(&a, FilterKind::Prime, 12),
            Err(Error::Resource(_))
        ));
    }
}
