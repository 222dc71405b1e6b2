//! Ideals, amalgamation, congruence-pair extension, interpolation,
//! discriminator terms and the congruence/ideal correspondence of lattices.

use serde::Serialize;

use crate::algebra::axioms::{AxiomReport, Violation};
use crate::algebra::congruence::{cg, cg_collapsing, congruence_lattice, Partition};
use crate::algebra::names;
use crate::algebra::sets::{self, ElemSet};
use crate::algebra::structure::{homomorphisms, is_homomorphism, is_subuniverse, subalgebra_generate, tuple_subalgebra};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::budget;
use crate::error::{Error, Result};
use crate::free::operators;

// ---------------------------------------------------------------- ideals

/// The operation ideals are closed under: `oplus` when present, else `join`.
fn ideal_op(alg: &FiniteAlgebra) -> &'static str {
    if alg.has(names::OPLUS) {
        names::OPLUS
    } else {
        names::JOIN
    }
}

/// Ig: least set containing `seed` and `0`, closed under the ideal
/// operation and downward closed.
pub fn ideal_generate(alg: &FiniteAlgebra, seed: &[Elem]) -> Result<ElemSet> {
    let l = alg.lattice()?;
    let plus = alg.binary(ideal_op(alg))?;
    let mut members: Vec<Elem> = Vec::new();
    let mut set = ElemSet::with_capacity(alg.size());
    let mut todo: Vec<Elem> = seed.iter().copied().chain([l.zero]).collect();
    while let Some(x) = todo.pop() {
        if set.put(x) {
            continue;
        }
        members.push(x);
        for y in 0..alg.size() {
            if l.leq(y, x) && !set.contains(y) {
                todo.push(y);
            }
        }
        for &y in &members {
            todo.push(plus.apply(x, y));
            todo.push(plus.apply(y, x));
        }
    }
    Ok(set)
}

pub fn is_ideal(alg: &FiniteAlgebra, s: &ElemSet) -> Result<bool> {
    let l = alg.lattice()?;
    let plus = alg.binary(ideal_op(alg))?;
    if !s.contains(l.zero) {
        return Ok(false);
    }
    for x in s.ones() {
        if (0..alg.size()).any(|y| l.leq(y, x) && !s.contains(y)) {
            return Ok(false);
        }
        if s.ones().any(|y| !s.contains(plus.apply(x, y))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All ideals (including the improper one), sorted by bitmask.
pub fn ideal_lattice(alg: &FiniteAlgebra) -> Result<Vec<ElemSet>> {
    let mut all: Vec<ElemSet> = Vec::new();
    let principal: Vec<ElemSet> = (0..alg.size())
        .map(|a| ideal_generate(alg, &[a]))
        .collect::<Result<_>>()?;
    let mut seen = std::collections::HashSet::new();
    for p in &principal {
        if seen.insert(p.clone()) {
            all.push(p.clone());
        }
    }
    let mut i = 0;
    while i < all.len() {
        for p in &principal {
            let mut u = all[i].clone();
            u.union_with(p);
            let j = ideal_generate(alg, &sets::members(&u))?;
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(sets::cmp_bitmask);
    Ok(all)
}

/// `Ig(M ∪ N) = {x : x <= b + c for some b in M, c in N}`, with `+` the
/// ideal operation.
pub fn ideal_join_characterize(alg: &FiniteAlgebra, m: &ElemSet, n: &ElemSet) -> Result<bool> {
    if !is_ideal(alg, m)? || !is_ideal(alg, n)? {
        return Err(Error::Precondition("both arguments must be ideals".into()));
    }
    let l = alg.lattice()?;
    let plus = alg.binary(ideal_op(alg))?;
    let mut u = m.clone();
    u.union_with(n);
    let generated = ideal_generate(alg, &sets::members(&u))?;
    let mut described = ElemSet::with_capacity(alg.size());
    for b in m.ones() {
        for c in n.ones() {
            let s = plus.apply(b, c);
            for x in 0..alg.size() {
                if l.leq(x, s) {
                    described.insert(x);
                }
            }
        }
    }
    Ok(generated == described)
}

fn is_ideal_of_subuniverse(alg: &FiniteAlgebra, b: &ElemSet, m: &ElemSet) -> Result<bool> {
    let l = alg.lattice()?;
    let plus = alg.binary(ideal_op(alg))?;
    if !m.is_subset(b) || !m.contains(l.zero) {
        return Ok(false);
    }
    for x in m.ones() {
        if b.ones().any(|y| l.leq(y, x) && !m.contains(y)) {
            return Ok(false);
        }
        if m.ones().any(|y| !m.contains(plus.apply(x, y))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when `s` is a proper ideal with no proper ideal strictly above it.
fn is_maximal_ideal(all: &[ElemSet], s: &ElemSet, n: usize) -> bool {
    let proper = |x: &ElemSet| x.count_ones(..) < n;
    proper(s) && !all.iter().any(|t| proper(t) && t != s && s.is_subset(t))
}

/// An ideal `N′ ⊇ N` of `alg` with `N′ ∩ B = M`, for a subuniverse `B`,
/// an ideal `M` of `B` and an ideal `N` of `alg` with `N ∩ B ⊆ M`. With
/// `maximal`, `N′` must be a maximal ideal. `None` when no witness exists.
pub fn ideal_extension(
    alg: &FiniteAlgebra,
    b: &ElemSet,
    m: &ElemSet,
    n: &ElemSet,
    maximal: bool,
) -> Result<Option<ElemSet>> {
    if !is_subuniverse(alg, b) {
        return Err(Error::Precondition("B is not a subuniverse".into()));
    }
    if !is_ideal_of_subuniverse(alg, b, m)? {
        return Err(Error::Precondition("M is not an ideal of B".into()));
    }
    if !is_ideal(alg, n)? {
        return Err(Error::Precondition("N is not an ideal".into()));
    }
    let mut nb = n.clone();
    nb.intersect_with(b);
    if !nb.is_subset(m) {
        return Err(Error::Precondition("N ∩ B is not contained in M".into()));
    }
    let fits = |c: &ElemSet| {
        let mut cb = c.clone();
        cb.intersect_with(b);
        n.is_subset(c) && cb == *m
    };
    if !maximal {
        let mut seed = n.clone();
        seed.union_with(m);
        let first = ideal_generate(alg, &sets::members(&seed))?;
        if fits(&first) {
            return Ok(Some(first));
        }
    }
    let all = ideal_lattice(alg)?;
    Ok(all
        .iter()
        .find(|c| fits(c) && (!maximal || is_maximal_ideal(&all, c, alg.size())))
        .cloned())
}

// ------------------------------------------------------------- amalgams

/// `m: C → A` and `n: C → B`, both injective homomorphisms.
#[derive(Clone, Debug)]
pub struct AmalgamProblem {
    pub a: FiniteAlgebra,
    pub b: FiniteAlgebra,
    pub c: FiniteAlgebra,
    pub m: Vec<Elem>,
    pub n: Vec<Elem>,
}

fn is_injective(map: &[Elem]) -> bool {
    let mut seen = std::collections::HashSet::new();
    map.iter().all(|y| seen.insert(*y))
}

impl AmalgamProblem {
    pub fn new(a: FiniteAlgebra, b: FiniteAlgebra, c: FiniteAlgebra, m: Vec<Elem>, n: Vec<Elem>) -> Result<Self> {
        if !is_homomorphism(&c, &a, &m)? || !is_injective(&m) {
            return Err(Error::InvalidSpec("m is not an embedding of C into A".into()));
        }
        if !is_homomorphism(&c, &b, &n)? || !is_injective(&n) {
            return Err(Error::InvalidSpec("n is not an embedding of C into B".into()));
        }
        Ok(AmalgamProblem { a, b, c, m, n })
    }
}

#[derive(Clone, Debug)]
pub struct Amalgam {
    pub d: FiniteAlgebra,
    pub k: Vec<Elem>,
    pub h: Vec<Elem>,
}

/// A compatible pair `f: A → T`, `g: B → T` with `f∘m = g∘n`.
#[derive(Clone, Debug)]
struct Cone {
    target: usize,
    f: Vec<Elem>,
    g: Vec<Elem>,
}

fn cones(p: &AmalgamProblem) -> Result<Vec<Cone>> {
    let mut out = Vec::new();
    for (ti, t) in [&p.a, &p.b].into_iter().enumerate() {
        let fs = homomorphisms(&p.a, t, false)?;
        let gs = homomorphisms(&p.b, t, false)?;
        for f in &fs {
            for g in &gs {
                if (0..p.c.size()).all(|x| f[p.m[x]] == g[p.n[x]]) {
                    out.push(Cone {
                        target: ti,
                        f: f.clone(),
                        g: g.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn separates(maps: &[&[Elem]], size: usize) -> bool {
    let mut seen = std::collections::HashSet::new();
    (0..size).all(|x| seen.insert(maps.iter().map(|m| m[x]).collect::<Vec<_>>()))
}

/// Subsets of `0..len` of size `k` in lexicographic order.
fn combinations(len: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..len {
            cur.push(i);
            let go_on = go(i + 1, len, k, cur, visit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(0, len, k, &mut Vec::new(), visit);
}

const MAX_FAMILY: usize = 3;

/// Amalgams `D ≤ ∏ T_s` built from families of compatible pairs of
/// homomorphisms into `A` or `B` that separate the points of both.
/// Families are tried by size, then lexicographically; each candidate is
/// offered to `accept` until it returns true.
fn search_amalgams(
    p: &AmalgamProblem,
    max_size: usize,
    accept: &mut dyn FnMut(&Amalgam) -> Result<bool>,
) -> Result<Option<Amalgam>> {
    let cs = cones(p)?;
    let targets = [&p.a, &p.b];
    let mut budget_left = budget::homomorphisms();
    let mut found: Option<Amalgam> = None;
    let mut failure: Option<Error> = None;
    for k in 1..=MAX_FAMILY.min(cs.len()) {
        let mut best: Option<Amalgam> = None;
        combinations(cs.len(), k, &mut |idx| {
            if budget_left == 0 {
                failure = Some(Error::Resource("amalgam search budget exhausted".into()));
                return false;
            }
            budget_left -= 1;
            let fam: Vec<&Cone> = idx.iter().map(|&i| &cs[i]).collect();
            let fs: Vec<&[Elem]> = fam.iter().map(|c| c.f.as_slice()).collect();
            let gs: Vec<&[Elem]> = fam.iter().map(|c| c.g.as_slice()).collect();
            if !separates(&fs, p.a.size()) || !separates(&gs, p.b.size()) {
                return true;
            }
            let factors: Vec<&FiniteAlgebra> = fam.iter().map(|c| targets[c.target]).collect();
            let ka: Vec<Vec<Elem>> = (0..p.a.size()).map(|x| fs.iter().map(|f| f[x]).collect()).collect();
            let hb: Vec<Vec<Elem>> = (0..p.b.size()).map(|x| gs.iter().map(|g| g[x]).collect()).collect();
            let gens: Vec<Vec<Elem>> = ka.iter().chain(&hb).cloned().collect();
            let t = match tuple_subalgebra(&factors, &gens, max_size, "D") {
                Ok(t) => t,
                Err(Error::Resource(_)) => return true,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            if best.as_ref().is_some_and(|b| b.d.size() <= t.algebra.size()) {
                return true;
            }
            let am = Amalgam {
                k: ka.iter().map(|x| t.index_of(x).unwrap()).collect(),
                h: hb.iter().map(|x| t.index_of(x).unwrap()).collect(),
                d: t.algebra,
            };
            match accept(&am) {
                Ok(true) => best = Some(am),
                Ok(false) => {}
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if best.is_some() {
            found = best;
            break;
        }
    }
    Ok(found)
}

/// The smallest amalgam found within `max_size`, or `None`.
pub fn amalgamate(p: &AmalgamProblem, max_size: usize) -> Result<Option<Amalgam>> {
    search_amalgams(p, max_size, &mut |_| Ok(true))
}

/// Which side a superamalgamation failure was found on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `k(a) <= h(b)` without `t` with `a <= m(t)` and `n(t) <= b`.
    AB,
    /// `h(b) <= k(a)` without `t` with `b <= n(t)` and `m(t) <= a`.
    BA,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperamalgamReport {
    pub holds: bool,
    pub witness: Option<(Direction, Elem, Elem)>,
}

/// Checks that `(D, k, h)` is an amalgam and that it reflects order
/// through `C` in both directions.
pub fn superamalgam_check(p: &AmalgamProblem, am: &Amalgam) -> Result<SuperamalgamReport> {
    if !is_homomorphism(&p.a, &am.d, &am.k)? || !is_injective(&am.k) {
        return Err(Error::Precondition("k is not an embedding".into()));
    }
    if !is_homomorphism(&p.b, &am.d, &am.h)? || !is_injective(&am.h) {
        return Err(Error::Precondition("h is not an embedding".into()));
    }
    if (0..p.c.size()).any(|t| am.k[p.m[t]] != am.h[p.n[t]]) {
        return Err(Error::Precondition("k∘m differs from h∘n".into()));
    }
    let (la, lb, ld) = (p.a.lattice()?, p.b.lattice()?, am.d.lattice()?);
    for a in 0..p.a.size() {
        for b in 0..p.b.size() {
            let (ka, hb) = (am.k[a], am.h[b]);
            if ld.leq(ka, hb) && !(0..p.c.size()).any(|t| la.leq(a, p.m[t]) && lb.leq(p.n[t], b)) {
                return Ok(SuperamalgamReport {
                    holds: false,
                    witness: Some((Direction::AB, a, b)),
                });
            }
            if ld.leq(hb, ka) && !(0..p.c.size()).any(|t| lb.leq(b, p.n[t]) && la.leq(p.m[t], a)) {
                return Ok(SuperamalgamReport {
                    holds: false,
                    witness: Some((Direction::BA, a, b)),
                });
            }
        }
    }
    Ok(SuperamalgamReport {
        holds: true,
        witness: None,
    })
}

/// The smallest amalgam within `max_size` that passes
/// [`superamalgam_check`], if any.
pub fn find_superamalgam(p: &AmalgamProblem, max_size: usize) -> Result<Option<Amalgam>> {
    search_amalgams(p, max_size, &mut |am| Ok(superamalgam_check(p, am)?.holds))
}

// ------------------------------------------------------- congruence pairs

/// A congruence `T` of `alg` with `T ∩ Sg(X1)² = R` and `T ∩ Sg(X2)² = S`.
///
/// `R` and `S` are partitions of the whole universe that are congruences
/// of `Sg(X1)` and `Sg(X2)` and the identity elsewhere. Any such `T`
/// contains `Cg(R ∪ S)`, and restriction is monotone, so `Cg(R ∪ S)` is a
/// witness exactly when a witness exists.
pub fn cp_extend(
    alg: &FiniteAlgebra,
    x1: &[Elem],
    x2: &[Elem],
    r: &Partition,
    s: &Partition,
) -> Result<Option<Partition>> {
    let s1 = subalgebra_generate(alg, x1, None)?;
    let s2 = subalgebra_generate(alg, x2, None)?;
    for (name, set, p) in [("R", &s1, r), ("S", &s2, s)] {
        if p.size() != alg.size() || p.restrict(set) != *p {
            return Err(Error::Precondition(format!("{name} relates elements outside its subalgebra")));
        }
        if !congruence_of_sub(alg, set, p) {
            return Err(Error::Precondition(format!("{name} is not a congruence of its subalgebra")));
        }
    }
    let common: Vec<Elem> = x1.iter().copied().filter(|x| x2.contains(x)).collect();
    let s12 = subalgebra_generate(alg, &common, None)?;
    if r.restrict(&s12) != s.restrict(&s12) {
        return Err(Error::Precondition("R and S disagree on Sg(X1 ∩ X2)".into()));
    }
    let mut pairs = r.pairs();
    pairs.extend(s.pairs());
    let t = cg(alg, &pairs);
    Ok((t.restrict(&s1) == *r && t.restrict(&s2) == *s).then_some(t))
}

/// `p` restricted to `set` is compatible with every operation applied to
/// arguments from `set`.
fn congruence_of_sub(alg: &FiniteAlgebra, set: &ElemSet, p: &Partition) -> bool {
    let mem = sets::members(set);
    for (_, t) in alg.tables() {
        match t {
            crate::Table::Constant(_) => {}
            crate::Table::Unary(f) => {
                for &x in &mem {
                    for &y in &mem {
                        if p.related(x, y) && !p.related(f[x], f[y]) {
                            return false;
                        }
                    }
                }
            }
            crate::Table::Binary(f) => {
                let n = alg.size();
                for &x in &mem {
                    for &x2 in &mem {
                        if !p.related(x, x2) {
                            continue;
                        }
                        for &y in &mem {
                            if !p.related(f[x * n + y], f[x2 * n + y]) || !p.related(f[y * n + x], f[y * n + x2]) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------- interpolation

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "n")]
pub enum InterpolantKind {
    /// `x <= y <= z`.
    Identity,
    /// `x <= y <= z ⊕ … ⊕ z` with `n` summands.
    Power(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Interpolant {
    pub y: Elem,
    pub kind: InterpolantKind,
}

pub const DEFAULT_POWER_BOUND: usize = 4;

/// Some `y ∈ Sg(X1 ∩ X2)` between `x` and `z`, or, failing that, between
/// `x` and the `n`-fold ⊕-power of `z` for `n = 2..=max_power`.
pub fn interpolant_search(
    alg: &FiniteAlgebra,
    x1: &[Elem],
    x2: &[Elem],
    x: Elem,
    z: Elem,
    max_power: usize,
) -> Result<Option<Interpolant>> {
    let l = alg.lattice()?;
    if !subalgebra_generate(alg, x1, None)?.contains(x) {
        return Err(Error::Precondition("x is not in Sg(X1)".into()));
    }
    if !subalgebra_generate(alg, x2, None)?.contains(z) {
        return Err(Error::Precondition("z is not in Sg(X2)".into()));
    }
    if !l.leq(x, z) {
        return Err(Error::Precondition("x is not below z".into()));
    }
    let common: Vec<Elem> = x1.iter().copied().filter(|e| x2.contains(e)).collect();
    let s = subalgebra_generate(alg, &common, None)?;
    let between = |hi: Elem| s.ones().find(|&y| l.leq(x, y) && l.leq(y, hi));
    if let Some(y) = between(z) {
        return Ok(Some(Interpolant {
            y,
            kind: InterpolantKind::Identity,
        }));
    }
    if let Ok(plus) = alg.binary(names::OPLUS) {
        let mut power = z;
        for n in 2..=max_power {
            power = plus.apply(power, z);
            if let Some(y) = between(power) {
                return Ok(Some(Interpolant {
                    y,
                    kind: InterpolantKind::Power(n),
                }));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------- discriminator

/// Schemata for a unary `d`: (a) `x <= d(x)`, (b) `d(d(x)) <= d(x)`,
/// (c) `f(x) <= d(x)` for every operator `f`.
pub fn discriminator_check(alg: &FiniteAlgebra, d: &[Elem]) -> Result<AxiomReport> {
    if d.len() != alg.size() || d.iter().any(|&y| y >= alg.size()) {
        return Err(Error::Invalid("d is not a unary table".into()));
    }
    let l = alg.lattice()?;
    let mut violations = Vec::new();
    let mut first = |axiom: String, bad: Option<Elem>| {
        if let Some(x) = bad {
            violations.push(Violation {
                axiom,
                witness: vec![x],
            });
        }
    };
    let n = alg.size();
    first("a".into(), (0..n).find(|&x| !l.leq(x, d[x])));
    first("b".into(), (0..n).find(|&x| !l.leq(d[d[x]], d[x])));
    for op in operators(alg) {
        let f = alg.unary(&op)?;
        first(format!("c:{op}"), (0..n).find(|&x| !l.leq(f.apply(x), d[x])));
    }
    Ok(AxiomReport::new("discriminator", violations))
}

// --------------------------------------------------------- Grätzer–Schmidt

#[derive(Clone, Debug, Serialize)]
pub struct GratzerSchmidt {
    pub distributive: bool,
    pub relatively_complemented: bool,
    pub has_minimum: bool,
    pub ideals: usize,
    pub congruences: usize,
    /// `I ↦ Cg(I × {0})` is a bijection from ideals onto congruences whose
    /// zero classes give back `I`.
    pub correspondence: bool,
    pub biconditional: bool,
}

/// Every `c` in every interval `[a, b]` has a complement relative to it.
pub fn relatively_complemented(alg: &FiniteAlgebra) -> Result<bool> {
    let l = alg.lattice()?;
    let n = alg.size();
    for a in 0..n {
        for b in (0..n).filter(|&b| l.leq(a, b)) {
            for c in (0..n).filter(|&c| l.leq(a, c) && l.leq(c, b)) {
                if !(0..n).any(|d| l.meet(c, d) == a && l.join(c, d) == b) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn is_distributive(alg: &FiniteAlgebra) -> Result<bool> {
    let l = alg.lattice()?;
    let n = alg.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Compares the congruence lattice and the ideal lattice of the lattice
/// reduct, and the structural conditions, on one instance.
pub fn gratzer_schmidt_check(alg: &FiniteAlgebra) -> Result<GratzerSchmidt> {
    let lat = alg.restrict_signature(&[names::JOIN, names::MEET, names::ZERO, names::ONE])?;
    let l = lat.lattice()?;
    let n = lat.size();
    let has_minimum = (0..n).all(|x| l.leq(l.zero, x));
    let distributive = is_distributive(&lat)?;
    let relatively_complemented = relatively_complemented(&lat)?;
    let ideals = ideal_lattice(&lat)?;
    let congs = congruence_lattice(&lat)?;
    let images: Vec<Partition> = ideals
        .iter()
        .map(|i| cg_collapsing(&lat, l.zero, i.ones()))
        .collect();
    let zero_classes_match = ideals
        .iter()
        .zip(&images)
        .all(|(i, t)| t.class_set(l.zero) == *i);
    let mut distinct = images.clone();
    distinct.sort_by(|a, b| a.pairs().cmp(&b.pairs()));
    distinct.dedup();
    let correspondence = zero_classes_match && distinct.len() == images.len() && images.len() == congs.len();
    let conditions = distributive && relatively_complemented && has_minimum;
    Ok(GratzerSchmidt {
        distributive,
        relatively_complemented,
        has_minimum,
        ideals: ideals.len(),
        congruences: congs.len(),
        correspondence,
        biconditional: correspondence == conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, make_lattice_chain, ChainSpec};
    use crate::algebra::congruence::congruence_lattice_within;
    use crate::free::{free_algebra, VarietySpec};

    fn ba(n: usize) -> FiniteAlgebra {
        let v = VarietySpec::new(vec![make_chain(ChainSpec::luk(2)).unwrap()]).unwrap();
        free_algebra(&v, n).unwrap().algebra
    }

    #[test]
    fn ideal_generation_examples() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        assert_eq!(sets::members(&ideal_generate(&l3, &[0]).unwrap()), vec![0]);
        assert_eq!(sets::members(&ideal_generate(&l3, &[1]).unwrap()), vec![0, 1, 2]);
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        assert_eq!(sets::members(&ideal_generate(&g3, &[1]).unwrap()), vec![0, 1]);
    }

    #[test]
    fn join_characterization_on_boolean_algebras() {
        for n in [1, 2] {
            let a = ba(n);
            let all = ideal_lattice(&a).unwrap();
            for m in &all {
                for k in &all {
                    assert!(ideal_join_characterize(&a, m, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn ideal_extension_maximal_in_sixteen() {
        let a = ba(2);
        let b = subalgebra_generate(&a, &[a.element("g0").unwrap()], None).unwrap();
        let zero = a.constant("zero").unwrap();
        let g0 = a.element("g0").unwrap();
        let m = sets::from_elems(a.size(), [zero, g0]);
        let n = sets::from_elems(a.size(), [zero]);
        let w = ideal_extension(&a, &b, &m, &n, true).unwrap().expect("witness");
        let mut wb = w.clone();
        wb.intersect_with(&b);
        assert_eq!(wb, m);
        assert_eq!(w.count_ones(..), 8);
        let plain = ideal_extension(&a, &b, &m, &n, false).unwrap().unwrap();
        assert_eq!(plain, ideal_generate(&a, &[g0]).unwrap());
    }

    #[test]
    fn ideal_extension_with_zero_m() {
        let a = ba(2);
        let b = subalgebra_generate(&a, &[a.element("g0").unwrap()], None).unwrap();
        let zero = a.constant("zero").unwrap();
        let m = sets::from_elems(a.size(), [zero]);
        assert_eq!(ideal_extension(&a, &b, &m, &m, false).unwrap(), Some(m));
    }

    fn two_in_four() -> AmalgamProblem {
        let four = ba(1);
        let two = make_chain(ChainSpec::luk(2)).unwrap();
        let emb: Vec<Elem> = vec![four.constant("zero").unwrap(), four.constant("one").unwrap()];
        AmalgamProblem::new(four.clone(), four, two, emb.clone(), emb).unwrap()
    }

    #[test]
    fn identity_amalgam() {
        let two = make_chain(ChainSpec::luk(2)).unwrap();
        let id = vec![0, 1];
        let p = AmalgamProblem::new(two.clone(), two.clone(), two.clone(), id.clone(), id).unwrap();
        let am = amalgamate(&p, 64).unwrap().unwrap();
        assert_eq!(am.d.size(), 2);
        assert!(superamalgam_check(&p, &am).unwrap().holds);
    }

    #[test]
    fn boolean_amalgam_is_super() {
        let p = two_in_four();
        let am = amalgamate(&p, 256).unwrap().expect("amalgam");
        assert!(am.d.size() <= 16);
        assert!(is_homomorphism(&p.a, &am.d, &am.k).unwrap());
        let sup = find_superamalgam(&p, 256).unwrap().expect("superamalgam");
        assert_eq!(sup.d.size(), 16);
        assert!(superamalgam_check(&p, &sup).unwrap().holds);
    }

    #[test]
    fn identified_amalgam_is_not_super() {
        let p = two_in_four();
        let id: Vec<Elem> = (0..4).collect();
        let am = Amalgam {
            d: p.a.clone(),
            k: id.clone(),
            h: id,
        };
        let r = superamalgam_check(&p, &am).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some((Direction::AB, 1, 1)));
    }

    #[test]
    fn cp_on_two_generators() {
        let a = ba(2);
        let g0 = a.element("g0").unwrap();
        let g1 = a.element("g1").unwrap();
        let one = a.constant("one").unwrap();
        let s1 = subalgebra_generate(&a, &[g0], None).unwrap();
        let r = crate::algebra::congruence::cg_within(&a, &s1, &[(g0, one)]);
        let s = Partition::identity(a.size());
        let t = cp_extend(&a, &[g0], &[g1], &r, &s).unwrap().expect("extension");
        assert!(t.related(g0, one));
        assert!(cp_extend(&a, &[g0], &[g1], &s, &s).unwrap().unwrap().is_identity());
        let s2 = subalgebra_generate(&a, &[g1], None).unwrap();
        let s0 = subalgebra_generate(&a, &[], None).unwrap();
        let mut agreeing = 0;
        for r in congruence_lattice_within(&a, &s1).unwrap() {
            for s in congruence_lattice_within(&a, &s2).unwrap() {
                let out = cp_extend(&a, &[g0], &[g1], &r, &s);
                if r.restrict(&s0) == s.restrict(&s0) {
                    agreeing += 1;
                    assert!(out.unwrap().is_some());
                } else {
                    assert!(matches!(out, Err(Error::Precondition(_))));
                }
            }
        }
        assert_eq!(agreeing, 10);
    }

    #[test]
    fn cp_disagreement_rejected() {
        let a = ba(2);
        let g0 = a.element("g0").unwrap();
        let zero = a.constant("zero").unwrap();
        let one = a.constant("one").unwrap();
        let s1 = subalgebra_generate(&a, &[g0], None).unwrap();
        let total = crate::algebra::congruence::cg_within(&a, &s1, &[(zero, one)]);
        let id = Partition::identity(a.size());
        assert!(matches!(cp_extend(&a, &[g0], &[g0], &total, &id), Err(Error::Precondition(_))));
    }

    #[test]
    fn interpolation_in_three_generators() {
        let a = ba(3);
        let l = a.lattice().unwrap();
        let g: Vec<Elem> = (0..3).map(|i| a.element(&format!("g{i}")).unwrap()).collect();
        let x = l.meet(g[0], g[1]);
        let z = l.join(g[1], g[2]);
        let it = interpolant_search(&a, &g[..2], &g[1..], x, z, DEFAULT_POWER_BOUND)
            .unwrap()
            .unwrap();
        assert_eq!(it.kind, InterpolantKind::Identity);
        assert!(l.leq(x, it.y) && l.leq(it.y, z));
        assert!(subalgebra_generate(&a, &[g[1]], None).unwrap().contains(it.y));
    }

    #[test]
    fn interpolation_over_constants() {
        let a = ba(2);
        let l = a.lattice().unwrap();
        let (g0, g1) = (a.element("g0").unwrap(), a.element("g1").unwrap());
        let s0 = subalgebra_generate(&a, &[g0], None).unwrap();
        let s1 = subalgebra_generate(&a, &[g1], None).unwrap();
        for x in s0.ones() {
            for z in s1.ones().filter(|&z| l.leq(x, z)) {
                let it = interpolant_search(&a, &[g0], &[g1], x, z, 4).unwrap().unwrap();
                assert!(it.y == l.zero || it.y == l.one);
            }
        }
    }

    #[test]
    fn discriminator_schemata() {
        let a = ba(1);
        let id: Vec<Elem> = (0..4).collect();
        assert!(discriminator_check(&a, &id).unwrap().passed);
        let zero = vec![a.constant("zero").unwrap(); 4];
        let r = discriminator_check(&a, &zero).unwrap();
        assert_eq!(r.violation("a").unwrap().witness, vec![1]);
    }

    #[test]
    fn gratzer_schmidt_examples() {
        let b = gratzer_schmidt_check(&ba(2)).unwrap();
        assert!(b.correspondence && b.relatively_complemented && b.biconditional);
        let c = gratzer_schmidt_check(&make_lattice_chain(3).unwrap()).unwrap();
        assert!(!c.relatively_complemented && !c.correspondence && c.biconditional);
        assert_eq!((c.ideals, c.congruences), (3, 4));
        let g = gratzer_schmidt_check(&make_chain(ChainSpec::godel(3)).unwrap()).unwrap();
        assert!(!g.correspondence && g.biconditional);
    }
}
