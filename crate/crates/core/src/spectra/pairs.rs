//! Theory pairs `(Γ, Δ)`: consistency, completion and saturation.

use serde::Serialize;

use crate::algebra::names::{self, cyl, replacement, subst};
use crate::algebra::sets::{self, ElemSet};
use crate::algebra::{Elem, FiniteAlgebra, Lattice};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryPair {
    pub gamma: ElemSet,
    pub delta: ElemSet,
}

impl TheoryPair {
    pub fn new(n: usize, gamma: &[Elem], delta: &[Elem]) -> Self {
        TheoryPair {
            gamma: sets::from_elems(n, gamma.iter().copied()),
            delta: sets::from_elems(n, delta.iter().copied()),
        }
    }

    /// Every element lies in Γ or Δ.
    pub fn is_complete(&self) -> bool {
        let mut u = self.gamma.clone();
        u.union_with(&self.delta);
        u.count_ones(..) == u.len()
    }
}

fn consistent_with(l: &Lattice<'_>, gamma: &ElemSet, delta: &ElemSet) -> bool {
    !l.leq(l.meet_all(gamma.ones()), l.join_all(delta.ones()))
}

/// No finite meet from Γ lies below a finite join from Δ. In a finite
/// lattice it is enough to compare the meet of all of Γ with the join of
/// all of Δ.
pub fn pair_consistent(alg: &FiniteAlgebra, tp: &TheoryPair) -> Result<bool> {
    Ok(consistent_with(&alg.lattice()?, &tp.gamma, &tp.delta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Gamma,
    Delta,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletionStep {
    pub element: Elem,
    /// `(Γ ∪ {a}, Δ)` is consistent.
    pub gamma_consistent: bool,
    /// `(Γ, Δ ∪ {a})` is consistent.
    pub delta_consistent: bool,
    pub placed: Side,
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub pair: TheoryPair,
    pub steps: Vec<CompletionStep>,
}

/// Adds the missing elements in ascending order, to Γ when that stays
/// consistent and to Δ otherwise. Both options are evaluated at every step
/// and recorded; a step where neither is consistent is an internal error.
pub fn pair_complete_extension(alg: &FiniteAlgebra, tp: &TheoryPair) -> Result<Completion> {
    let l = alg.lattice()?;
    if !consistent_with(&l, &tp.gamma, &tp.delta) {
        return Err(Error::Precondition("theory pair is inconsistent".into()));
    }
    let mut pair = tp.clone();
    let mut steps = Vec::new();
    for a in 0..alg.size() {
        if pair.gamma.contains(a) || pair.delta.contains(a) {
            continue;
        }
        let mut g = pair.gamma.clone();
        g.insert(a);
        let mut d = pair.delta.clone();
        d.insert(a);
        let gamma_consistent = consistent_with(&l, &g, &pair.delta);
        let delta_consistent = consistent_with(&l, &pair.gamma, &d);
        let placed = if gamma_consistent {
            pair.gamma = g;
            Side::Gamma
        } else if delta_consistent {
            pair.delta = d;
            Side::Delta
        } else {
            return Err(Error::Internal(format!(
                "neither extension by {} is consistent",
                alg.label(a)
            )));
        };
        steps.push(CompletionStep {
            element: a,
            gamma_consistent,
            delta_consistent,
            placed,
        });
    }
    Ok(Completion { pair, steps })
}

#[derive(Clone, Debug, Serialize)]
pub struct Saturation {
    pub saturated: bool,
    /// First `(a, j)` with `c_j a ∈ Γ` and no admissible witness.
    pub witness: Option<(Elem, usize)>,
}

/// `Δa`: indices `i` with `c_i a ≠ a`.
pub fn dimension_set_of(alg: &FiniteAlgebra, a: Elem) -> Result<Vec<usize>> {
    let alpha = names::dimension(alg);
    let mut out = Vec::new();
    for i in 0..alpha {
        if alg.unary(&cyl(i))?.apply(a) != a {
            out.push(i);
        }
    }
    Ok(out)
}

/// For all `a` and `j`: `c_j a ∈ Γ` implies `s_[j|k] a ∈ Γ` for some
/// `k ∉ Δa`. The dimension is the number of `c_i` tables.
pub fn pair_saturated(alg: &FiniteAlgebra, tp: &TheoryPair) -> Result<Saturation> {
    let alpha = names::dimension(alg);
    if alpha == 0 {
        return Err(Error::Signature(format!("{}: no c_i tables", alg.name())));
    }
    let cs = (0..alpha)
        .map(|j| alg.unary(&cyl(j)))
        .collect::<Result<Vec<_>>>()?;
    let mut ss = vec![Vec::with_capacity(alpha); alpha];
    for (j, row) in ss.iter_mut().enumerate() {
        for k in 0..alpha {
            row.push(alg.unary(&subst(&replacement(alpha, j, k)))?);
        }
    }
    for a in 0..alg.size() {
        let delta_a = dimension_set_of(alg, a)?;
        for j in 0..alpha {
            if !tp.gamma.contains(cs[j].apply(a)) {
                continue;
            }
            let ok = (0..alpha)
                .filter(|k| !delta_a.contains(k))
                .any(|k| tp.gamma.contains(ss[j][k].apply(a)));
            if !ok {
                return Ok(Saturation {
                    saturated: false,
                    witness: Some((a, j)),
                });
            }
        }
    }
    Ok(Saturation {
        saturated: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};

    #[test]
    fn consistency_examples() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(!pair_consistent(&a, &TheoryPair::new(3, &[1], &[1])).unwrap());
        assert!(pair_consistent(&a, &TheoryPair::new(3, &[2], &[0])).unwrap());
        assert!(pair_consistent(&a, &TheoryPair::new(3, &[1], &[0])).unwrap());
        assert!(pair_consistent(&a, &TheoryPair::new(3, &[], &[])).unwrap());
    }

    #[test]
    fn completion_of_empty_pair_on_two() {
        let a = make_chain(ChainSpec::luk(2)).unwrap();
        let c = pair_complete_extension(&a, &TheoryPair::new(2, &[], &[])).unwrap();
        assert_eq!(c.pair, TheoryPair::new(2, &[1], &[0]));
        assert_eq!(c.steps.len(), 2);
        assert_eq!(c.steps[0].placed, Side::Delta);
    }

    #[test]
    fn completion_places_half() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        let c = pair_complete_extension(&a, &TheoryPair::new(3, &[2], &[0])).unwrap();
        assert!(c.pair.is_complete());
        assert!(pair_consistent(&a, &c.pair).unwrap());
        assert_eq!(c.pair, TheoryPair::new(3, &[1, 2], &[0]));
        let again = pair_complete_extension(&a, &c.pair).unwrap();
        assert_eq!(again.pair, c.pair);
        assert!(again.steps.is_empty());
    }

    #[test]
    fn inconsistent_input_rejected() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(matches!(
            pair_complete_extension(&a, &TheoryPair::new(3, &[0], &[])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn saturation_needs_quantifiers() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(matches!(
            pair_saturated(&a, &TheoryPair::new(3, &[], &[])),
            Err(Error::Signature(_))
        ));
    }
}
