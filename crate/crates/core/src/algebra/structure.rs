//! Subalgebras, products and homomorphism search.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;

use super::sets::{self, ElemSet};
use super::{apply_table, Elem, FiniteAlgebra, Table};
use crate::budget;
use crate::error::{Error, Result};

/// Incremental closure of a subset under a list of tables.
pub(crate) struct Closure<'a> {
    n: usize,
    tables: Vec<&'a Table>,
    pub members: Vec<Elem>,
    pub set: ElemSet,
    done: usize,
}

impl<'a> Closure<'a> {
    pub fn new(alg: &'a FiniteAlgebra, ops: Option<&[&str]>) -> Result<Self> {
        let tables = match ops {
            None => alg.tables().values().collect(),
            Some(names) => names
                .iter()
                .map(|&op| {
                    alg.table(op)
                        .ok_or_else(|| Error::Signature(format!("no table for {op}")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let mut c = Closure {
            n: alg.size(),
            tables,
            members: Vec::new(),
            set: ElemSet::with_capacity(alg.size()),
            done: 0,
        };
        for t in c.tables.clone() {
            if let Table::Constant(k) = t {
                c.push(*k);
            }
        }
        Ok(c)
    }

    pub fn push(&mut self, x: Elem) {
        if !self.set.put(x) {
            self.members.push(x);
        }
    }

    pub fn run(&mut self) {
        while self.done < self.members.len() {
            let i = self.done;
            let x = self.members[i];
            for t in self.tables.clone() {
                match t {
                    Table::Constant(_) => {}
                    Table::Unary(v) => self.push(v[x]),
                    Table::Binary(v) => {
                        for j in 0..=i {
                            let y = self.members[j];
                            self.push(v[x * self.n + y]);
                            self.push(v[y * self.n + x]);
                        }
                    }
                }
            }
            self.done += 1;
        }
    }
}

/// Sg: least subset containing `seed` and the constants, closed under the
/// listed operations (all operations when `ops` is `None`).
pub fn subalgebra_generate(
    alg: &FiniteAlgebra,
    seed: &[Elem],
    ops: Option<&[&str]>,
) -> Result<ElemSet> {
    if let Some(&bad) = seed.iter().find(|&&x| x >= alg.size()) {
        return Err(Error::Invalid(format!("{bad} is not an element")));
    }
    let mut c = Closure::new(alg, ops)?;
    for &x in seed {
        c.push(x);
    }
    c.run();
    Ok(c.set)
}

/// True when `set` is closed under every operation.
pub fn is_subuniverse(alg: &FiniteAlgebra, set: &ElemSet) -> bool {
    first_escape(alg, set).is_none()
}

/// An operation application that leaves `set`: (op, arguments).
pub fn first_escape(alg: &FiniteAlgebra, set: &ElemSet) -> Option<(String, Vec<Elem>)> {
    let n = alg.size();
    let mem = sets::members(set);
    for (op, t) in alg.tables() {
        match t {
            Table::Constant(c) => {
                if !set.contains(*c) {
                    return Some((op.clone(), vec![]));
                }
            }
            Table::Unary(v) => {
                if let Some(&x) = mem.iter().find(|&&x| !set.contains(v[x])) {
                    return Some((op.clone(), vec![x]));
                }
            }
            Table::Binary(v) => {
                for &x in &mem {
                    for &y in &mem {
                        if !set.contains(v[x * n + y]) {
                            return Some((op.clone(), vec![x, y]));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Materializes a closed subset as an algebra. Returns the algebra and the
/// embedding (new index to old index).
pub fn subalgebra(alg: &FiniteAlgebra, set: &ElemSet, name: &str) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    if let Some((op, args)) = first_escape(alg, set) {
        return Err(Error::Invalid(format!(
            "subset is not closed under {op} at {args:?}"
        )));
    }
    let emb = sets::members(set);
    if emb.is_empty() {
        return Err(Error::Invalid("empty subuniverse".into()));
    }
    let mut back = vec![usize::MAX; alg.size()];
    for (i, &x) in emb.iter().enumerate() {
        back[x] = i;
    }
    let m = emb.len();
    let n = alg.size();
    let mut tables = IndexMap::new();
    for (op, t) in alg.tables() {
        let nt = match t {
            Table::Constant(c) => Table::Constant(back[*c]),
            Table::Unary(v) => Table::Unary(emb.iter().map(|&x| back[v[x]]).collect()),
            Table::Binary(v) => {
                let mut out = Vec::with_capacity(m * m);
                for &x in &emb {
                    for &y in &emb {
                        out.push(back[v[x * n + y]]);
                    }
                }
                Table::Binary(out)
            }
        };
        tables.insert(op.clone(), nt);
    }
    let labels = alg.labels().map(|l| emb.iter().map(|&x| l[x].clone()).collect());
    Ok((FiniteAlgebra::new(name, m, labels, tables)?, emb))
}

fn require_same_signature(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<()> {
    if !a.signature().same_as(&b.signature()) {
        return Err(Error::Signature(format!(
            "{} and {} have different signatures",
            a.name(),
            b.name()
        )));
    }
    Ok(())
}

/// Direct product; tuples are ordered lexicographically with the first
/// factor most significant.
pub fn product(algs: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = algs
        .first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?;
    for a in &algs[1..] {
        require_same_signature(first, a)?;
    }
    let sizes: Vec<usize> = algs.iter().map(|a| a.size()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= budget::table_elements())
        .ok_or_else(|| Error::Resource("product too large to tabulate".into()))?;
    let decode = |mut i: usize| -> Vec<Elem> {
        let mut t = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            t[k] = i % sizes[k];
            i /= sizes[k];
        }
        t
    };
    let encode = |t: &[Elem]| t.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x);
    let tuples: Vec<Vec<Elem>> = (0..total).map(decode).collect();
    let mut tables = IndexMap::new();
    for (op, _) in first.tables() {
        let per: Vec<&Table> = algs.iter().map(|a| a.table(op).unwrap()).collect();
        let comp = |args: &[&[Elem]]| -> Elem {
            let t: Vec<Elem> = (0..sizes.len())
                .map(|k| {
                    let a: Vec<Elem> = args.iter().map(|x| x[k]).collect();
                    apply_table(per[k], sizes[k], &a)
                })
                .collect();
            encode(&t)
        };
        let nt = match per[0] {
            Table::Constant(_) => Table::Constant(comp(&[])),
            Table::Unary(_) => Table::Unary(tuples.iter().map(|x| comp(&[x])).collect()),
            Table::Binary(_) => {
                let mut v = Vec::with_capacity(total * total);
                for x in &tuples {
                    for y in &tuples {
                        v.push(comp(&[x, y]));
                    }
                }
                Table::Binary(v)
            }
        };
        tables.insert(op.clone(), nt);
    }
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().zip(algs).map(|(&x, a)| a.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let name = algs.iter().map(|a| a.name()).collect::<Vec<_>>().join("x");
    FiniteAlgebra::new(name, total, Some(labels), tables)
}

/// A subalgebra of a product, stored by its tuples.
#[derive(Clone, Debug)]
pub struct TupleAlgebra {
    pub algebra: FiniteAlgebra,
    /// Sorted; element `i` of `algebra` is `tuples[i]`.
    pub tuples: Vec<Vec<Elem>>,
}

impl TupleAlgebra {
    pub fn index_of(&self, t: &[Elem]) -> Option<Elem> {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).ok()
    }
}

/// Sg of `gens` inside `∏ factors`, computed on tuples without
/// tabulating the full product. Elements are sorted lexicographically.
pub fn tuple_subalgebra(
    factors: &[&FiniteAlgebra],
    gens: &[Vec<Elem>],
    limit: usize,
    name: &str,
) -> Result<TupleAlgebra> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?;
    for a in &factors[1..] {
        require_same_signature(first, a)?;
    }
    let ops: Vec<(String, Vec<&Table>)> = first
        .tables()
        .keys()
        .map(|op| (op.clone(), factors.iter().map(|a| a.table(op).unwrap()).collect()))
        .collect();
    let eval = |per: &[&Table], args: &[&[Elem]]| -> Vec<Elem> {
        (0..factors.len())
            .map(|k| {
                let a: Vec<Elem> = args.iter().map(|t| t[k]).collect();
                apply_table(per[k], factors[k].size(), &a)
            })
            .collect()
    };
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut tuples: Vec<Vec<Elem>> = Vec::new();
    let mut push = |t: Vec<Elem>, tuples: &mut Vec<Vec<Elem>>| -> Result<()> {
        if !seen.contains(&t) {
            if tuples.len() == limit {
                return Err(Error::Resource(format!("subalgebra exceeds {limit} elements")));
            }
            seen.insert(t.clone());
            tuples.push(t);
        }
        Ok(())
    };
    for g in gens {
        if g.len() != factors.len() || g.iter().zip(factors).any(|(&x, a)| x >= a.size()) {
            return Err(Error::Invalid(format!("{g:?} is not a tuple of the product")));
        }
        push(g.clone(), &mut tuples)?;
    }
    for (_, per) in &ops {
        if let Table::Constant(_) = per[0] {
            push(eval(per, &[]), &mut tuples)?;
        }
    }
    let mut done = 0;
    while done < tuples.len() {
        let x = tuples[done].clone();
        for (_, per) in &ops {
            match per[0] {
                Table::Constant(_) => {}
                Table::Unary(_) => push(eval(per, &[&x]), &mut tuples)?,
                Table::Binary(_) => {
                    for j in 0..=done {
                        let y = tuples[j].clone();
                        push(eval(per, &[&x, &y]), &mut tuples)?;
                        push(eval(per, &[&y, &x]), &mut tuples)?;
                    }
                }
            }
        }
        done += 1;
    }
    if tuples.is_empty() {
        return Err(Error::Invalid("empty subalgebra".into()));
    }
    tuples.sort();
    let pos: HashMap<&[Elem], usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let m = tuples.len();
    let mut tables = IndexMap::new();
    for (op, per) in &ops {
        let t = match per[0] {
            Table::Constant(_) => Table::Constant(pos[eval(per, &[]).as_slice()]),
            Table::Unary(_) => {
                Table::Unary(tuples.iter().map(|x| pos[eval(per, &[x]).as_slice()]).collect())
            }
            Table::Binary(_) => {
                let mut v = Vec::with_capacity(m * m);
                for x in &tuples {
                    for y in &tuples {
                        v.push(pos[eval(per, &[x, y]).as_slice()]);
                    }
                }
                Table::Binary(v)
            }
        };
        tables.insert(op.clone(), t);
    }
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().zip(factors).map(|(&x, a)| a.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let algebra = FiniteAlgebra::new(name, m, Some(labels), tables)?;
    Ok(TupleAlgebra { algebra, tuples })
}

/// Projection tuple of a product element (inverse of the product encoding).
pub fn product_coordinates(sizes: &[usize], mut i: Elem) -> Vec<Elem> {
    let mut t = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        t[k] = i % sizes[k];
        i /= sizes[k];
    }
    t
}

pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> Result<bool> {
    require_same_signature(a, b)?;
    if map.len() != a.size() || map.iter().any(|&y| y >= b.size()) {
        return Ok(false);
    }
    let (n, m) = (a.size(), b.size());
    for (op, ta) in a.tables() {
        let tb = b.table(op).unwrap();
        let ok = match (ta, tb) {
            (Table::Constant(x), Table::Constant(y)) => map[*x] == *y,
            (Table::Unary(f), Table::Unary(g)) => (0..n).all(|x| map[f[x]] == g[map[x]]),
            (Table::Binary(f), Table::Binary(g)) => (0..n).all(|x| {
                (0..n).all(|y| map[f[x * n + y]] == g[map[x] * m + map[y]])
            }),
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy generating set: scan in index order, keep elements not yet generated.
pub fn generating_set(alg: &FiniteAlgebra) -> Vec<Elem> {
    let mut c = Closure::new(alg, None).expect("all tables exist");
    c.run();
    let mut gens = Vec::new();
    for x in 0..alg.size() {
        if !c.set.contains(x) {
            gens.push(x);
            c.push(x);
            c.run();
        }
    }
    gens
}

/// Order invariants used to prune isomorphism search.
fn invariants(alg: &FiniteAlgebra) -> Vec<(usize, usize)> {
    match alg.lattice() {
        Ok(l) => (0..alg.size())
            .map(|x| {
                let down = (0..l.n).filter(|&y| l.leq(y, x)).count();
                let up = (0..l.n).filter(|&y| l.leq(x, y)).count();
                (down, up)
            })
            .collect(),
        Err(_) => vec![(0, 0); alg.size()],
    }
}

#[derive(Clone)]
struct PartialHom {
    map: Vec<Option<Elem>>,
    known: Vec<Elem>,
    used: ElemSet,
    done: usize,
}

struct HomSearch<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    ops: Vec<(&'a Table, &'a Table)>,
    injective: bool,
    inv: Option<(Vec<(usize, usize)>, Vec<(usize, usize)>)>,
    gens: Vec<Elem>,
}

impl<'a> HomSearch<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra, injective: bool, iso: bool) -> Result<Self> {
        require_same_signature(a, b)?;
        let ops = a
            .tables()
            .iter()
            .map(|(op, t)| (t, b.table(op).unwrap()))
            .collect();
        let inv = iso.then(|| (invariants(a), invariants(b)));
        Ok(HomSearch {
            a,
            b,
            ops,
            injective,
            inv,
            gens: generating_set(a),
        })
    }

    fn start(&self) -> Option<PartialHom> {
        let mut st = PartialHom {
            map: vec![None; self.a.size()],
            known: Vec::new(),
            used: ElemSet::with_capacity(self.b.size()),
            done: 0,
        };
        for (ta, tb) in &self.ops {
            if let (Table::Constant(x), Table::Constant(y)) = (ta, tb) {
                if !self.assign(&mut st, *x, *y) {
                    return None;
                }
            }
        }
        self.close(&mut st).then_some(st)
    }

    fn assign(&self, st: &mut PartialHom, x: Elem, y: Elem) -> bool {
        match st.map[x] {
            Some(z) => z == y,
            None => {
                if self.injective && st.used.contains(y) {
                    return false;
                }
                if let Some((ia, ib)) = &self.inv {
                    if ia[x] != ib[y] {
                        return false;
                    }
                }
                st.map[x] = Some(y);
                st.used.insert(y);
                st.known.push(x);
                true
            }
        }
    }

    fn close(&self, st: &mut PartialHom) -> bool {
        let (n, m) = (self.a.size(), self.b.size());
        while st.done < st.known.len() {
            let i = st.done;
            let x = st.known[i];
            let fx = st.map[x].unwrap();
            for (ta, tb) in &self.ops {
                match (ta, tb) {
                    (Table::Unary(f), Table::Unary(g)) => {
                        if !self.assign(st, f[x], g[fx]) {
                            return false;
                        }
                    }
                    (Table::Binary(f), Table::Binary(g)) => {
                        for j in 0..=i {
                            let y = st.known[j];
                            let fy = st.map[y].unwrap();
                            if !self.assign(st, f[x * n + y], g[fx * m + fy])
                                || !self.assign(st, f[y * n + x], g[fy * m + fx])
                            {
                                return false;
                            }
                        }
                    }
                    _ => {}
                }
            }
            st.done += 1;
        }
        true
    }

    /// Depth-first over generator images; `visit` returns false to stop.
    fn search(&self, st: PartialHom, visit: &mut dyn FnMut(Vec<Elem>) -> bool) -> bool {
        let next = self.gens.iter().copied().find(|&g| st.map[g].is_none());
        let Some(g) = next else {
            let map: Vec<Elem> = st.map.iter().map(|x| x.unwrap()).collect();
            return visit(map);
        };
        for y in 0..self.b.size() {
            let mut s = st.clone();
            if self.assign(&mut s, g, y) && self.close(&mut s) && !self.search(s, visit) {
                return false;
            }
        }
        true
    }
}

/// All homomorphisms `a -> b` (injective ones only when asked).
pub fn homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra, injective: bool) -> Result<Vec<Vec<Elem>>> {
    let s = HomSearch::new(a, b, injective, false)?;
    let mut out = Vec::new();
    let cap = budget::homomorphisms();
    let mut overflow = false;
    if let Some(st) = s.start() {
        s.search(st, &mut |m| {
            if out.len() == cap {
                overflow = true;
                return false;
            }
            out.push(m);
            true
        });
    }
    if overflow {
        return Err(Error::Resource(format!("more than {cap} homomorphisms")));
    }
    Ok(out)
}

/// First homomorphism `a -> b` extending the given pairs, if any.
pub fn extend_to_homomorphism(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    pairs: &[(Elem, Elem)],
    injective: bool,
) -> Result<Option<Vec<Elem>>> {
    let s = HomSearch::new(a, b, injective, false)?;
    let Some(mut st) = s.start() else {
        return Ok(None);
    };
    for &(x, y) in pairs {
        if x >= a.size() || y >= b.size() {
            return Err(Error::Invalid(format!("pair ({x}, {y}) out of range")));
        }
        if !s.assign(&mut st, x, y) || !s.close(&mut st) {
            return Ok(None);
        }
    }
    let mut found = None;
    s.search(st, &mut |m| {
        found = Some(m);
        false
    });
    Ok(found)
}

/// An isomorphism `a -> b`, if one exists.
pub fn iso_check(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Vec<Elem>>> {
    require_same_signature(a, b)?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let s = HomSearch::new(a, b, true, true)?;
    let Some(st) = s.start() else {
        return Ok(None);
    };
    let mut found = None;
    s.search(st, &mut |m| {
        found = Some(m);
        false
    });
    Ok(found)
}

pub fn invert(map: &[Elem]) -> Vec<Elem> {
    let mut inv = vec![0; map.len()];
    for (x, &y) in map.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};

    fn l(n: usize) -> FiniteAlgebra {
        make_chain(ChainSpec::luk(n)).unwrap()
    }

    #[test]
    fn sg_examples() {
        let a = l(3);
        assert_eq!(sets::members(&subalgebra_generate(&a, &[], None).unwrap()), vec![0, 2]);
        assert_eq!(sets::members(&subalgebra_generate(&a, &[1], None).unwrap()), vec![0, 1, 2]);
        let a5 = l(5);
        // {0, 1/2, 1} is closed in Ł5.
        assert_eq!(sets::members(&subalgebra_generate(&a5, &[2], None).unwrap()), vec![0, 2, 4]);
        let meet_only = subalgebra_generate(&a5, &[1, 3], Some(&["meet"])).unwrap();
        assert_eq!(sets::members(&meet_only), vec![1, 3]);
    }

    #[test]
    fn product_of_two_booleans() {
        let b = l(2);
        let p = product(&[&b, &b]).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.constant("one").unwrap(), 3);
        assert_eq!(p.apply("join", &[1, 2]).unwrap(), 3);
        assert_eq!(p.label(2), "(1,0)");
        assert_eq!(product_coordinates(&[2, 2], 2), vec![1, 0]);
    }

    #[test]
    fn homs_l3_to_l2() {
        // Oracle: filter all 2^3 maps by the full signature.
        let (a, b) = (l(3), l(2));
        let mut expected = Vec::new();
        for code in 0..8usize {
            let m: Vec<Elem> = (0..3).map(|i| (code >> i) & 1).collect();
            if is_homomorphism(&a, &b, &m).unwrap() {
                expected.push(m);
            }
        }
        let mut found = homomorphisms(&a, &b, false).unwrap();
        found.sort();
        expected.sort();
        assert_eq!(found, expected);
        // Ł3 is simple and 1/2 is its own negation: nothing maps it into {0,1}.
        assert!(found.is_empty());
        assert_eq!(homomorphisms(&b, &a, false).unwrap(), vec![vec![0, 2]]);
    }

    #[test]
    fn iso_examples() {
        let b = l(2);
        let p = product(&[&b, &b]).unwrap();
        let iso = iso_check(&p, &p).unwrap().unwrap();
        assert!(is_homomorphism(&p, &p, &iso).unwrap());
        assert!(iso_check(&l(3), &make_chain(ChainSpec::godel(3)).unwrap()).is_err());
        assert!(iso_check(&l(3), &l(4)).unwrap().is_none());
    }

    #[test]
    fn subalgebra_materializes() {
        let a = l(5);
        let s = subalgebra_generate(&a, &[2], None).unwrap();
        let (sub, emb) = subalgebra(&a, &s, "sub").unwrap();
        assert_eq!(emb, vec![0, 2, 4]);
        assert!(is_homomorphism(&sub, &a, &emb).unwrap());
        assert_eq!(iso_check(&sub, &l(3)).unwrap(), Some(vec![0, 1, 2]));
        let bad = sets::from_elems(5, [0, 1, 4]);
        assert!(subalgebra(&a, &bad, "bad").is_err());
    }

    #[test]
    fn generating_sets_generate() {
        for a in [l(4), make_chain(ChainSpec::godel(5)).unwrap()] {
            let g = generating_set(&a);
            assert_eq!(subalgebra_generate(&a, &g, None).unwrap().count_ones(..), a.size());
        }
    }
}
