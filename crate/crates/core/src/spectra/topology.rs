//! Finite topological spaces given by a basis.

use fixedbitset::FixedBitSet;

/// A subset of the points of a finite space.
pub type PointSet = FixedBitSet;

#[derive(Clone, Debug)]
pub struct FiniteTopology {
    points: usize,
    basis: Vec<PointSet>,
}

impl FiniteTopology {
    /// Topology generated by `subbasis`: the basis is its closure under
    /// finite intersections (plus the whole space).
    pub fn from_subbasis(points: usize, subbasis: &[PointSet]) -> Self {
        let mut whole = PointSet::with_capacity(points);
        whole.insert_range(..);
        let mut basis: Vec<PointSet> = vec![whole];
        for s in subbasis {
            if !basis.contains(s) {
                basis.push(s.clone());
            }
        }
        let mut i = 0;
        while i < basis.len() {
            for j in 0..i {
                let mut x = basis[i].clone();
                x.intersect_with(&basis[j]);
                if !basis.contains(&x) {
                    basis.push(x);
                }
            }
            i += 1;
        }
        FiniteTopology { points, basis }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn basis(&self) -> &[PointSet] {
        &self.basis
    }

    fn whole(&self) -> PointSet {
        let mut w = PointSet::with_capacity(self.points);
        w.insert_range(..);
        w
    }

    pub fn complement(&self, s: &PointSet) -> PointSet {
        let mut c = self.whole();
        c.difference_with(s);
        c
    }

    /// Union of the basic opens inside `s`.
    pub fn interior(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::with_capacity(self.points);
        for b in &self.basis {
            if b.is_subset(s) {
                out.union_with(b);
            }
        }
        out
    }

    pub fn closure(&self, s: &PointSet) -> PointSet {
        self.complement(&self.interior(&self.complement(s)))
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        self.interior(s) == *s
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        self.closure(s) == *s
    }

    /// Closure has empty interior.
    pub fn is_nowhere_dense(&self, s: &PointSet) -> bool {
        self.interior(&self.closure(s)).is_clear()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.points).all(|p| {
            let mut single = PointSet::with_capacity(self.points);
            single.insert(p);
            self.is_open(&single)
        })
    }

    /// Distinct points have disjoint basic neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        (0..self.points).all(|p| {
            (p + 1..self.points).all(|q| {
                self.basis.iter().filter(|b| b.contains(p)).any(|u| {
                    self.basis
                        .iter()
                        .filter(|b| b.contains(q))
                        .any(|v| u.is_disjoint(v))
                })
            })
        })
    }

    /// All open sets; only for small spaces.
    pub fn open_sets(&self) -> Vec<PointSet> {
        let mut opens = vec![PointSet::with_capacity(self.points)];
        for b in &self.basis {
            let mut more = Vec::new();
            for o in &opens {
                let mut u = o.clone();
                u.union_with(b);
                if !opens.contains(&u) && !more.contains(&u) {
                    more.push(u);
                }
            }
            opens.extend(more);
        }
        opens.sort_by(crate::algebra::sets::cmp_bitmask);
        opens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> PointSet {
        crate::algebra::sets::from_elems(n, xs.iter().copied())
    }

    #[test]
    fn sierpinski_space() {
        let t = FiniteTopology::from_subbasis(2, &[set(2, &[1])]);
        assert!(!t.is_discrete());
        assert!(!t.is_hausdorff());
        assert!(t.is_nowhere_dense(&set(2, &[0])));
        assert!(!t.is_nowhere_dense(&set(2, &[1])));
        assert_eq!(t.closure(&set(2, &[1])), set(2, &[0, 1]));
        assert_eq!(t.open_sets().len(), 3);
    }

    #[test]
    fn discrete_space() {
        let t = FiniteTopology::from_subbasis(3, &[set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[0, 2])]);
        assert!(t.is_discrete());
        assert!(t.is_hausdorff());
        assert!(!t.is_nowhere_dense(&set(3, &[2])));
        assert!(t.is_nowhere_dense(&set(3, &[])));
        assert_eq!(t.open_sets().len(), 8);
    }
}
