//! Zariski sets on the prime and maximal spectra.

use serde::Serialize;

use super::filters::{enumerate_filters, FilterKind, FilterOps};
use super::topology::{FiniteTopology, PointSet};
use crate::algebra::axioms::{AxiomReport, Violation};
use crate::algebra::sets::{self, ElemSet};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// A set of filters with the basic open sets `D(a)` of the points not
/// containing `a`.
#[derive(Clone, Debug)]
pub struct SpectrumSpace {
    pub points: Vec<ElemSet>,
    /// `basis[a]` is `D(a)`.
    pub basis: Vec<PointSet>,
}

impl SpectrumSpace {
    pub fn new(n: usize, points: Vec<ElemSet>) -> Self {
        let basis = (0..n)
            .map(|a| sets::from_elems(points.len(), (0..points.len()).filter(|&p| !points[p].contains(a))))
            .collect();
        SpectrumSpace { points, basis }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all(&self) -> PointSet {
        sets::full(self.len())
    }

    pub fn d(&self, a: Elem) -> PointSet {
        self.basis[a].clone()
    }

    pub fn v(&self, a: Elem) -> PointSet {
        let mut s = self.all();
        s.difference_with(&self.basis[a]);
        s
    }

    /// Points not containing all of `xs`.
    pub fn d_set(&self, xs: &[Elem]) -> PointSet {
        let mut s = PointSet::with_capacity(self.len());
        for &a in xs {
            s.union_with(&self.basis[a]);
        }
        s
    }

    /// Points containing all of `xs`.
    pub fn v_set(&self, xs: &[Elem]) -> PointSet {
        let mut s = self.all();
        s.difference_with(&self.d_set(xs));
        s
    }

    pub fn topology(&self) -> FiniteTopology {
        FiniteTopology::from_subbasis(self.len(), &self.basis)
    }

    pub fn index_of(&self, f: &ElemSet) -> Option<usize> {
        self.points.iter().position(|p| p == f)
    }
}

#[derive(Clone, Debug)]
pub struct Zariski {
    pub spec: SpectrumSpace,
    pub max: SpectrumSpace,
}

pub fn zariski_sets(alg: &FiniteAlgebra) -> Result<Zariski> {
    let n = alg.size();
    Ok(Zariski {
        spec: SpectrumSpace::new(n, enumerate_filters(alg, FilterKind::Prime)?),
        max: SpectrumSpace::new(n, enumerate_filters(alg, FilterKind::Maximal)?),
    })
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l: &Elem| l + 1);
            for x in start..n {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Checks the six D_M/V_M identities. Subset items range over subsets of
/// size at most `max_subset`. Axiom ids are `i` .. `vi-forward`,
/// `vi-backward`; witnesses list the elements involved.
pub fn verify_dm_lemma(alg: &FiniteAlgebra, max_subset: usize) -> Result<AxiomReport> {
    let ops = FilterOps::of(alg)?;
    let l = ops.lat;
    let n = alg.size();
    let z = zariski_sets(alg)?;
    let m = &z.max;
    let mut found: Vec<Violation> = Vec::new();
    let mut note = |id: &str, w: Vec<Elem>| {
        if !found.iter().any(|v| v.axiom == id) {
            found.push(Violation {
                axiom: id.to_string(),
                witness: w,
            });
        }
    };
    for a in 0..n {
        for b in 0..n {
            let (da, db) = (m.d(a), m.d(b));
            let mut inter = da.clone();
            inter.intersect_with(&db);
            if inter != m.d(l.join(a, b)) {
                note("i", vec![a, b]);
            }
            let mut uni = da.clone();
            uni.union_with(&db);
            if uni != m.d(l.meet(a, b)) || uni != m.d(ops.mult.apply(a, b)) {
                note("ii", vec![a, b]);
            }
            let mut vi = m.v(a);
            vi.intersect_with(&m.v(b));
            if vi != m.v(l.meet(a, b)) {
                note("v", vec![a, b]);
            }
            let contained = m.v(a).is_subset(&m.v(b));
            if l.leq(a, b) && !contained {
                note("vi-forward", vec![a, b]);
            }
            if contained && !l.leq(a, b) {
                note("vi-backward", vec![a, b]);
            }
        }
    }
    let subs = subsets_up_to(n, max_subset);
    for x in &subs {
        let fl = ops.generate(x.iter().copied());
        let everything = fl.count_ones(..) == n;
        if (m.d_set(x) == m.all()) != everything {
            note("iii", x.clone());
        }
    }
    for x in &subs {
        for y in &subs {
            let mut u: Vec<Elem> = x.iter().chain(y).copied().collect();
            u.sort_unstable();
            u.dedup();
            let mut rhs = m.d_set(x);
            rhs.union_with(&m.d_set(y));
            if m.d_set(&u) != rhs {
                note("iv", x.iter().chain(y).copied().collect());
            }
        }
    }
    let order = ["i", "ii", "iii", "iv", "v", "vi-forward", "vi-backward"];
    found.sort_by_key(|v| order.iter().position(|o| *o == v.axiom));
    Ok(AxiomReport::new("dm-lemma", found))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decomposition {
    Join,
    Meet,
}

#[derive(Clone, Debug, Serialize)]
pub struct NowhereDense {
    /// Indices into the maximal spectrum.
    pub residual: Vec<usize>,
    pub nowhere_dense: bool,
}

/// Residual set `V_M(a) \ ∪ V_M(a_i)` (join) or `∩ V_M(a_i) \ V_M(a)`
/// (meet), and whether it is nowhere dense in Max.
pub fn nowhere_dense_check(
    alg: &FiniteAlgebra,
    a: Elem,
    parts: &[Elem],
    mode: Decomposition,
) -> Result<NowhereDense> {
    let l = alg.lattice()?;
    let expected = match mode {
        Decomposition::Join => l.join_all(parts.iter().copied()),
        Decomposition::Meet => l.meet_all(parts.iter().copied()),
    };
    if expected != a {
        return Err(Error::NotAJoin(format!(
            "{} is not the {mode:?} of {parts:?}",
            alg.label(a)
        )));
    }
    let z = zariski_sets(alg)?;
    let m = &z.max;
    let residual = match mode {
        Decomposition::Join => {
            let mut r = m.v(a);
            for &p in parts {
                r.difference_with(&m.v(p));
            }
            r
        }
        Decomposition::Meet => {
            let mut r = m.all();
            for &p in parts {
                r.intersect_with(&m.v(p));
            }
            r.difference_with(&m.v(a));
            r
        }
    };
    let nowhere_dense = m.topology().is_nowhere_dense(&residual);
    Ok(NowhereDense {
        residual: residual.ones().collect(),
        nowhere_dense,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HausdorffWitness {
    pub x: Elem,
    pub y: Elem,
    pub a: Elem,
    pub b: Elem,
    /// `M ∈ D_M(a)`, `N ∈ D_M(b)` and `D_M(a) ∩ D_M(b) = ∅`.
    pub separates: bool,
}

/// `x` least in `M \ N`, `y` least in `N \ M`, `a = x ⇒ y`, `b = y ⇒ x`.
pub fn hausdorff_witness(alg: &FiniteAlgebra, mf: &ElemSet, nf: &ElemSet) -> Result<HausdorffWitness> {
    if mf == nf {
        return Err(Error::Invalid("the two filters coincide".into()));
    }
    let r = alg.residuated()?;
    let x = mf.difference(nf).next();
    let y = nf.difference(mf).next();
    let (Some(x), Some(y)) = (x, y) else {
        return Err(Error::Invalid("one filter contains the other".into()));
    };
    let (a, b) = (r.imp(x, y), r.imp(y, x));
    let z = zariski_sets(alg)?;
    let sp = &z.max;
    let separates = match (sp.index_of(mf), sp.index_of(nf)) {
        (Some(i), Some(j)) => {
            let (da, db) = (sp.d(a), sp.d(b));
            da.contains(i) && db.contains(j) && da.is_disjoint(&db)
        }
        _ => false,
    };
    Ok(HausdorffWitness {
        x,
        y,
        a,
        b,
        separates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};
    use crate::algebra::structure::product;

    #[test]
    fn bounds_of_basic_opens() {
        let a = make_chain(ChainSpec::godel(4)).unwrap();
        let z = zariski_sets(&a).unwrap();
        assert_eq!(z.max.d(0), z.max.all());
        assert!(z.max.d(3).is_clear());
        assert!(z.max.topology().is_hausdorff());
        assert_eq!(z.max.len(), 1);
        assert_eq!(z.spec.len(), 3);
    }

    #[test]
    fn v_m_of_half_in_g3() {
        let a = make_chain(ChainSpec::godel(3)).unwrap();
        let z = zariski_sets(&a).unwrap();
        assert_eq!(sets::members(&z.max.points[0]), vec![1, 2]);
        assert_eq!(z.max.v(1).ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn lemma_on_boolean_square() {
        let b = make_chain(ChainSpec::luk(2)).unwrap();
        let p = product(&[&b, &b]).unwrap();
        assert!(verify_dm_lemma(&p, 2).unwrap().passed);
    }

    #[test]
    fn backward_order_item_fails_off_semisimple() {
        // Ł3: only {1} is maximal, so V_M(1/2) = V_M(0) = ∅ while 1/2 > 0.
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        let rep = verify_dm_lemma(&a, 2).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violation("vi-backward").unwrap().witness, vec![1, 0]);
        // G3: V_M(1) = V_M(1/2) = Max while 1 > 1/2.
        let g = make_chain(ChainSpec::godel(3)).unwrap();
        let rep = verify_dm_lemma(&g, 2).unwrap();
        assert_eq!(rep.violation("vi-backward").unwrap().witness, vec![2, 1]);
    }

    #[test]
    fn residuals() {
        let b = make_chain(ChainSpec::luk(2)).unwrap();
        let p = product(&[&b, &b]).unwrap();
        let r = nowhere_dense_check(&p, 3, &[1, 2], Decomposition::Join).unwrap();
        assert!(r.residual.is_empty() && r.nowhere_dense);
        let r = nowhere_dense_check(&p, 0, &[1, 2], Decomposition::Meet).unwrap();
        assert!(r.residual.is_empty());
        assert!(matches!(
            nowhere_dense_check(&p, 1, &[1, 2], Decomposition::Join),
            Err(Error::NotAJoin(_))
        ));
    }

    #[test]
    fn hausdorff_on_boolean_square() {
        let b = make_chain(ChainSpec::luk(2)).unwrap();
        let p = product(&[&b, &b]).unwrap();
        let z = zariski_sets(&p).unwrap();
        let w = hausdorff_witness(&p, &z.max.points[0], &z.max.points[1]).unwrap();
        assert!(w.separates);
        assert!(hausdorff_witness(&p, &z.max.points[0], &z.max.points[0]).is_err());
    }
}
