//! Subsets of a finite universe.

use fixedbitset::FixedBitSet;

use super::Elem;

pub type ElemSet = FixedBitSet;

pub fn from_elems(n: usize, xs: impl IntoIterator<Item = Elem>) -> ElemSet {
    let mut s = FixedBitSet::with_capacity(n);
    for x in xs {
        s.insert(x);
    }
    s
}

pub fn full(n: usize) -> ElemSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub fn members(s: &ElemSet) -> Vec<Elem> {
    s.ones().collect()
}

/// Total order used for deterministic listings: the numeric value of the
/// membership bitmask (bit `i` set iff `i` is a member).
pub fn cmp_bitmask(a: &ElemSet, b: &ElemSet) -> std::cmp::Ordering {
    let la = a.ones().last();
    let lb = b.ones().last();
    if la != lb {
        return la.cmp(&lb);
    }
    let mut xa: Vec<Elem> = a.ones().collect();
    let mut xb: Vec<Elem> = b.ones().collect();
    xa.reverse();
    xb.reverse();
    xa.cmp(&xb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitmask_order() {
        let a = from_elems(4, [0, 1]);
        let b = from_elems(4, [2]);
        let c = from_elems(4, [0, 2]);
        assert_eq!(cmp_bitmask(&a, &b), std::cmp::Ordering::Less);
        assert_eq!(cmp_bitmask(&b, &c), std::cmp::Ordering::Less);
        assert_eq!(cmp_bitmask(&from_elems(4, []), &a), std::cmp::Ordering::Less);
    }
}
