//! Free algebras of finitely generated varieties, realized as tuple
//! algebras, plus atoms, relativization and product decomposition.

use indexmap::IndexMap;
use serde::Serialize;

use crate::algebra::names;
use crate::algebra::sets::{self, ElemSet};
use crate::algebra::structure::{
    extend_to_homomorphism, iso_check, product, subalgebra_generate, tuple_subalgebra, TupleAlgebra,
};
use crate::algebra::{apply_table, Elem, FiniteAlgebra, Table};
use crate::budget;
use crate::error::{Error, Result};

/// Finite algebras generating a variety. All share one signature.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub generators: Vec<FiniteAlgebra>,
}

impl VarietySpec {
    pub fn new(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidSpec("a variety needs at least one generator".into()))?;
        let sig = first.signature();
        if let Some(bad) = generators.iter().find(|a| !a.signature().same_as(&sig)) {
            return Err(Error::Signature(format!(
                "{} and {} have different signatures",
                first.name(),
                bad.name()
            )));
        }
        Ok(VarietySpec { generators })
    }

    pub fn name(&self) -> String {
        let parts: Vec<&str> = self.generators.iter().map(|a| a.name()).collect();
        format!("V({})", parts.join(","))
    }
}

/// One coordinate of the tuple representation: a generator algebra and a
/// valuation of the free generators in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinate {
    pub algebra: usize,
    pub valuation: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    /// Index of the `j`-th free generator.
    pub generators: Vec<Elem>,
    pub coordinates: Vec<Coordinate>,
    /// Tuple of every element, one entry per coordinate.
    pub tuples: Vec<Vec<Elem>>,
}

fn valuations(size: usize, n: usize) -> Vec<Vec<Elem>> {
    let total = size.pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut v = vec![0; n];
            for k in (0..n).rev() {
                v[k] = i % size;
                i /= size;
            }
            v
        })
        .collect()
}

/// The subalgebra of the product over all valuations generated by the `n`
/// projection tuples.
pub fn free_algebra(variety: &VarietySpec, n: usize) -> Result<FreeAlgebra> {
    if n == 0 {
        return Err(Error::InvalidSpec("generator count must be positive".into()));
    }
    let mut coordinates = Vec::new();
    for (i, a) in variety.generators.iter().enumerate() {
        let count = a.size().checked_pow(n as u32).filter(|&c| c <= budget::free_closure());
        if count.is_none() {
            return Err(Error::Resource(format!("{}^{n} valuations", a.size())));
        }
        coordinates.extend(valuations(a.size(), n).into_iter().map(|valuation| Coordinate {
            algebra: i,
            valuation,
        }));
    }
    let width = coordinates.len();
    if width > budget::free_closure() {
        return Err(Error::Resource(format!("{width} coordinates")));
    }
    let factors: Vec<&FiniteAlgebra> = coordinates
        .iter()
        .map(|c| &variety.generators[c.algebra])
        .collect();
    let projections: Vec<Vec<Elem>> = (0..n)
        .map(|j| coordinates.iter().map(|c| c.valuation[j]).collect())
        .collect();
    let limit = budget::table_elements().min(budget::free_closure() / width.max(1));
    let name = format!("Fr{n}{}", variety.name());
    let TupleAlgebra { algebra, tuples } = tuple_subalgebra(&factors, &projections, limit, &name)?;
    let generators: Vec<Elem> = projections
        .iter()
        .map(|p| tuples.binary_search(p).unwrap())
        .collect();
    let wide = variety.generators.iter().any(|a| a.size() > 10);
    let mut labels: Vec<String> = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            parts.join(if wide { "." } else { "" })
        })
        .collect();
    for (j, &g) in generators.iter().enumerate() {
        labels[g] = format!("g{j}");
    }
    let algebra = algebra.with_labels(Some(labels))?;
    Ok(FreeAlgebra {
        algebra,
        generators,
        coordinates,
        tuples,
    })
}

/// Minimal nonzero elements.
pub fn atoms(alg: &FiniteAlgebra) -> Result<Vec<Elem>> {
    let l = alg.lattice()?;
    Ok((0..alg.size())
        .filter(|&a| a != l.zero && (0..alg.size()).all(|y| y == l.zero || y == a || !l.leq(y, a)))
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct Atomicity {
    pub atomic: bool,
    /// A nonzero element with no atom below it.
    pub witness: Option<Elem>,
}

pub fn is_atomic(alg: &FiniteAlgebra) -> Result<Atomicity> {
    let l = alg.lattice()?;
    let at = atoms(alg)?;
    let witness = (0..alg.size()).find(|&x| x != l.zero && !at.iter().any(|&a| l.leq(a, x)));
    Ok(Atomicity {
        atomic: witness.is_none(),
        witness,
    })
}

/// Sg(Y) is everything and every map from Y into a generator algebra
/// extends to a homomorphism (uniquely, since Y generates).
pub fn is_freely_generated_by(
    free: &FreeAlgebra,
    y: &[Elem],
    variety: &VarietySpec,
) -> Result<bool> {
    if y.len() != free.generators.len() {
        return Err(Error::Precondition(format!(
            "{} candidate generators for a {}-generated free algebra",
            y.len(),
            free.generators.len()
        )));
    }
    let alg = &free.algebra;
    if subalgebra_generate(alg, y, None)?.count_ones(..) != alg.size() {
        return Ok(false);
    }
    for target in &variety.generators {
        for v in valuations(target.size(), y.len()) {
            let pairs: Vec<(Elem, Elem)> = y.iter().copied().zip(v).collect();
            if extend_to_homomorphism(alg, target, &pairs, false)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The lattice complement of `b`; the least one when several exist.
pub fn complement(alg: &FiniteAlgebra, b: Elem) -> Result<Elem> {
    alg.lattice()?
        .complements(b)
        .first()
        .copied()
        .ok_or(Error::NotComplemented(b))
}

/// Rl_b: the universe `{x : x <= b}` with `one` read as `b` and every
/// other operation followed by `∧ b`. Returns the algebra and its
/// embedding into `alg`.
pub fn relativize(alg: &FiniteAlgebra, b: Elem) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    let l = alg.lattice()?;
    let emb = l.down_set(b);
    let mut back = vec![usize::MAX; alg.size()];
    for (i, &x) in emb.iter().enumerate() {
        back[x] = i;
    }
    let n = alg.size();
    let cut = |x: Elem| back[l.meet(x, b)];
    let mut tables = IndexMap::new();
    for (op, t) in alg.tables() {
        let nt = match t {
            _ if op == names::ONE => Table::Constant(back[b]),
            Table::Constant(c) => Table::Constant(cut(*c)),
            Table::Unary(v) => Table::Unary(emb.iter().map(|&x| cut(v[x])).collect()),
            Table::Binary(v) => {
                let mut out = Vec::with_capacity(emb.len() * emb.len());
                for &x in &emb {
                    for &y in &emb {
                        out.push(cut(v[x * n + y]));
                    }
                }
                Table::Binary(out)
            }
        };
        tables.insert(op.clone(), nt);
    }
    let labels = alg.labels().map(|lb| emb.iter().map(|&x| lb[x].clone()).collect());
    let name = format!("Rl_{}({})", alg.label(b), alg.name());
    Ok((FiniteAlgebra::new(name, emb.len(), labels, tables)?, emb))
}

/// Unary tables other than `neg`: the extra-lattice operators.
pub fn operators(alg: &FiniteAlgebra) -> Vec<String> {
    alg.tables()
        .iter()
        .filter(|(op, t)| t.arity() == 1 && op.as_str() != names::NEG)
        .map(|(op, _)| op.clone())
        .collect()
}

/// Every operator fixes every element below `b`.
pub fn hereditary_closed(alg: &FiniteAlgebra, b: Elem) -> Result<bool> {
    let l = alg.lattice()?;
    let below = l.down_set(b);
    for op in operators(alg) {
        let f = alg.unary(&op)?;
        if below.iter().any(|&x| f.apply(x) != x) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Splitting {
    pub left: FiniteAlgebra,
    pub right: FiniteAlgebra,
    pub complement: Elem,
    /// `x ↦ (x ∧ b, x ∧ −b)` as indices into `left × right`.
    pub map: Vec<Elem>,
    pub iso: bool,
    /// First failure: a non-injective pair, a missed product element, or an
    /// operation that the map does not preserve.
    pub witness: Option<String>,
}

/// Builds Rl_b and Rl_−b and tests the canonical map into their product.
pub fn decompose(alg: &FiniteAlgebra, b: Elem) -> Result<Splitting> {
    let c = complement(alg, b)?;
    let l = alg.lattice()?;
    let (left, le) = relativize(alg, b)?;
    let (right, re) = relativize(alg, c)?;
    let prod = product(&[&left, &right])?;
    let back = |emb: &[Elem]| {
        let mut v = vec![usize::MAX; alg.size()];
        for (i, &x) in emb.iter().enumerate() {
            v[x] = i;
        }
        v
    };
    let (li, ri) = (back(&le), back(&re));
    let map: Vec<Elem> = (0..alg.size())
        .map(|x| li[l.meet(x, b)] * right.size() + ri[l.meet(x, c)])
        .collect();
    let mut hit = ElemSet::with_capacity(prod.size());
    let mut witness = None;
    for (x, &y) in map.iter().enumerate() {
        if hit.put(y) {
            witness = Some(format!("not injective at {}", alg.label(x)));
            break;
        }
    }
    if witness.is_none() && hit.count_ones(..) != prod.size() {
        let miss = hit.zeroes().next().unwrap();
        witness = Some(format!("misses {}", prod.label(miss)));
    }
    if witness.is_none() {
        witness = first_unpreserved(alg, &prod, &map);
    }
    Ok(Splitting {
        iso: witness.is_none(),
        left,
        right,
        complement: c,
        map,
        witness,
    })
}

fn first_unpreserved(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> Option<String> {
    let n = a.size();
    for (op, ta) in a.tables() {
        let tb = b.table(op)?;
        match (ta, tb) {
            (Table::Constant(x), Table::Constant(y)) if map[*x] != *y => {
                return Some(op.clone());
            }
            (Table::Unary(f), Table::Unary(_)) => {
                if let Some(x) = (0..n).find(|&x| map[f[x]] != apply_table(tb, b.size(), &[map[x]])) {
                    return Some(format!("{op}({})", a.label(x)));
                }
            }
            (Table::Binary(f), Table::Binary(_)) => {
                for x in 0..n {
                    for y in 0..n {
                        if map[f[x * n + y]] != apply_table(tb, b.size(), &[map[x], map[y]]) {
                            return Some(format!("{op}({}, {})", a.label(x), a.label(y)));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct FreeProductCheck {
    pub left_size: usize,
    pub right_size: usize,
    /// Isomorphism from `Fr_n × Fr_n` onto `Fr_{n+1}`.
    pub iso: Option<Vec<Elem>>,
}

/// Searches for an isomorphism `Fr_n × Fr_n ≅ Fr_{n+1}`.
pub fn free_product_decomposition_check(variety: &VarietySpec, n: usize) -> Result<FreeProductCheck> {
    let fr = free_algebra(variety, n)?;
    let next = free_algebra(variety, n + 1)?;
    let sq = product(&[&fr.algebra, &fr.algebra])?;
    let iso = if sq.size() == next.algebra.size() {
        iso_check(&sq, &next.algebra)?
    } else {
        None
    };
    Ok(FreeProductCheck {
        left_size: sq.size(),
        right_size: next.algebra.size(),
        iso,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomlessShadow {
    pub checked: usize,
    /// A nonzero `a` of the smaller subalgebra with `a ∧ g = 0` or `a ∧ ¬g = 0`.
    pub witness: Option<Elem>,
}

/// In Fr_n, every nonzero `a` generated by the first `n − 1` generators
/// splits over the last one.
pub fn atomless_shadow_check(variety: &VarietySpec, n: usize) -> Result<AtomlessShadow> {
    if n < 2 {
        return Err(Error::Precondition("needs at least two generators".into()));
    }
    let fr = free_algebra(variety, n)?;
    let alg = &fr.algebra;
    let l = alg.lattice()?;
    let g = fr.generators[n - 1];
    let ng = complement(alg, g)?;
    let sub = subalgebra_generate(alg, &fr.generators[..n - 1], None)?;
    let mut checked = 0;
    for a in sub.ones().filter(|&a| a != l.zero) {
        checked += 1;
        if l.meet(a, g) == l.zero || l.meet(a, ng) == l.zero {
            return Ok(AtomlessShadow {
                checked,
                witness: Some(a),
            });
        }
    }
    Ok(AtomlessShadow {
        checked,
        witness: None,
    })
}

/// Members of a set as labels, for reports.
pub fn label_set(alg: &FiniteAlgebra, s: &ElemSet) -> Vec<String> {
    sets::members(s).into_iter().map(|x| alg.label(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, make_lattice_chain, ChainSpec};
    use crate::algebra::structure::is_homomorphism;

    fn ba() -> VarietySpec {
        VarietySpec::new(vec![make_chain(ChainSpec::luk(2)).unwrap()]).unwrap()
    }

    /// Independent count: distinct Boolean functions reachable from the
    /// projections by pointwise and/or/not, as truth tables in a u64.
    fn boolean_function_count(n: usize) -> usize {
        let rows = 1usize << n;
        let mask: u64 = if rows == 64 { !0 } else { (1 << rows) - 1 };
        let mut seen = std::collections::BTreeSet::new();
        let mut todo: Vec<u64> = vec![0, mask];
        for j in 0..n {
            let mut t = 0u64;
            for r in 0..rows {
                if (r >> (n - 1 - j)) & 1 == 1 {
                    t |= 1 << r;
                }
            }
            todo.push(t);
        }
        while let Some(f) = todo.pop() {
            if !seen.insert(f) {
                continue;
            }
            let snapshot: Vec<u64> = seen.iter().copied().collect();
            todo.push(!f & mask);
            for g in snapshot {
                todo.push(f & g);
                todo.push(f | g);
            }
        }
        seen.len()
    }

    #[test]
    fn boolean_free_algebra_sizes() {
        for (n, atoms_expected) in [(1, 2), (2, 4), (3, 8)] {
            let fr = free_algebra(&ba(), n).unwrap();
            assert_eq!(fr.algebra.size(), boolean_function_count(n));
            assert_eq!(atoms(&fr.algebra).unwrap().len(), atoms_expected);
            assert!(is_atomic(&fr.algebra).unwrap().atomic);
        }
    }

    #[test]
    fn distributive_lattice_two_generators() {
        let v = VarietySpec::new(vec![make_lattice_chain(2).unwrap()]).unwrap();
        assert_eq!(free_algebra(&v, 2).unwrap().algebra.size(), 6);
    }

    #[test]
    fn projections_have_the_universal_property() {
        let v = ba();
        let fr = free_algebra(&v, 2).unwrap();
        assert!(is_freely_generated_by(&fr, &fr.generators, &v).unwrap());
    }

    #[test]
    fn negated_generator_generates_freely() {
        let v = ba();
        let fr = free_algebra(&v, 1).unwrap();
        let g = fr.generators[0];
        let ng = fr.algebra.unary("neg").unwrap().apply(g);
        assert!(is_freely_generated_by(&fr, &[ng], &v).unwrap());
        let zero = fr.algebra.constant("zero").unwrap();
        assert!(!is_freely_generated_by(&fr, &[zero], &v).unwrap());
    }

    #[test]
    fn meet_and_generator_do_not_generate() {
        let v = ba();
        let fr = free_algebra(&v, 2).unwrap();
        let l = fr.algebra.lattice().unwrap();
        let (g0, g1) = (fr.generators[0], fr.generators[1]);
        assert!(!is_freely_generated_by(&fr, &[l.meet(g0, g1), g0], &v).unwrap());
    }

    #[test]
    fn relativization_examples() {
        let fr = free_algebra(&ba(), 2).unwrap();
        let a = &fr.algebra;
        let one = a.constant("one").unwrap();
        let (same, _) = relativize(a, one).unwrap();
        assert_eq!(same.size(), a.size());
        let at = atoms(a).unwrap();
        assert_eq!(relativize(a, at[0]).unwrap().0.size(), 2);
        let l = a.lattice().unwrap();
        let two = l.join(at[0], at[1]);
        let (r, emb) = relativize(a, two).unwrap();
        assert_eq!(r.size(), 4);
        for x in atoms(&r).unwrap() {
            assert!(at.contains(&emb[x]));
        }
    }

    #[test]
    fn boolean_decomposition_succeeds_everywhere() {
        let fr = free_algebra(&ba(), 2).unwrap();
        for b in 0..fr.algebra.size() {
            let s = decompose(&fr.algebra, b).unwrap();
            assert!(s.iso, "b = {b}: {:?}", s.witness);
            assert_eq!(s.left.size() * s.right.size(), fr.algebra.size());
        }
        let one = fr.algebra.constant("one").unwrap();
        let s = decompose(&fr.algebra, one).unwrap();
        assert_eq!(s.right.size(), 1);
    }

    #[test]
    fn chain_middle_has_no_complement() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(matches!(decompose(&a, 1), Err(Error::NotComplemented(1))));
    }

    #[test]
    fn free_product_decomposition_one() {
        let c = free_product_decomposition_check(&ba(), 1).unwrap();
        assert_eq!((c.left_size, c.right_size), (16, 16));
        let iso = c.iso.expect("iso");
        let fr = free_algebra(&ba(), 1).unwrap();
        let sq = product(&[&fr.algebra, &fr.algebra]).unwrap();
        let fr2 = free_algebra(&ba(), 2).unwrap();
        assert!(is_homomorphism(&sq, &fr2.algebra, &iso).unwrap());
    }

    #[test]
    fn free_product_decomposition_two() {
        let c = free_product_decomposition_check(&ba(), 2).unwrap();
        assert_eq!((c.left_size, c.right_size), (256, 256));
        assert!(c.iso.is_some());
    }

    #[test]
    fn atomless_shadow_two_and_three() {
        for n in [2, 3] {
            let r = atomless_shadow_check(&ba(), n).unwrap();
            assert!(r.witness.is_none());
            assert_eq!(r.checked, (1 << (1 << (n - 1))) - 1);
        }
    }

    #[test]
    fn atom_counts_on_chains() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        assert_eq!(atoms(&a).unwrap(), vec![1]);
    }
}
