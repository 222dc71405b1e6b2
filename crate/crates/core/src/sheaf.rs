//! Dual sheaves of finite bounded distributive lattices with operators.
//!
//! An algebra is read as its lattice-with-operators reduct: `join`, `meet`,
//! `zero`, `one` and a declared list of unary operators. Ideals are lattice
//! ideals closed under the operators; in a finite lattice every such ideal
//! is principal, so it is carried by its generator.
//!
//! The base space `X(A, J)` is the set of prime ideals of `Nr_J A`. The
//! stalk over `x` is `A / Co(x)`, where `Co(x)` is the least congruence
//! putting `x` into the class of `0`. Two elements agree in that stalk when
//! some member of `x` joins them together, so equalizers of the `σ_a` are
//! unions of the sets `{x : i ∈ x}`; those sets (the complements of
//! `N_a = {x : a ∉ x}`) generate the topology on `X`. In the finite case the
//! sets `N_a` together with their complements give the discrete topology.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::congruence::{cg, cg_collapsing, cg_over, quotient, Partition};
use crate::algebra::names::{self, JOIN, MEET, ONE, ZERO};
use crate::algebra::structure::{self, is_homomorphism};
use crate::algebra::{sets, Elem, FiniteAlgebra, Table};
use crate::amalgam::relatively_complemented;
use crate::budget;
use crate::error::{Error, Result};
use crate::spectra::topology::{FiniteTopology, PointSet};

/// The `c_i` tables when present, otherwise every unary table except `neg`.
pub fn default_operators(alg: &FiniteAlgebra) -> Vec<String> {
    let alpha = names::dimension(alg);
    if alpha > 0 {
        (0..alpha).map(names::cyl).collect()
    } else {
        crate::free::operators(alg)
    }
}

/// The reduct with `join`, `meet`, `zero`, `one` and the operators.
pub fn blo_reduct(alg: &FiniteAlgebra, operators: &[String]) -> Result<FiniteAlgebra> {
    let mut ops: Vec<&str> = vec![JOIN, MEET, ZERO, ONE];
    for op in operators {
        match alg.table(op) {
            Some(Table::Unary(_)) => ops.push(op),
            Some(_) => return Err(Error::Signature(format!("{op} is not a unary operation"))),
            None => return Err(Error::Signature(format!("no operation {op}"))),
        }
    }
    alg.restrict_signature(&ops)
}

fn fixed_by(alg: &FiniteAlgebra, ops: &[String]) -> Result<Vec<Elem>> {
    let tables = ops.iter().map(|o| alg.unary(o)).collect::<Result<Vec<_>>>()?;
    Ok((0..alg.size()).filter(|&x| tables.iter().all(|f| f.apply(x) == x)).collect())
}

/// `Zd`: elements fixed by every operator, as a lattice (no operators).
/// Returns the subalgebra and its embedding.
pub fn zero_dim(alg: &FiniteAlgebra, operators: &[String]) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    nr(alg, operators, &[])
}

/// `Nr_J`: elements fixed by every operator outside `j`, with the
/// operators in `j`.
pub fn nr(alg: &FiniteAlgebra, operators: &[String], j: &[String]) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    if let Some(bad) = j.iter().find(|o| !operators.contains(o)) {
        return Err(Error::Invalid(format!("{bad} is not a declared operator")));
    }
    let red = blo_reduct(alg, operators)?;
    let outside: Vec<String> = operators.iter().filter(|o| !j.contains(o)).cloned().collect();
    let members = fixed_by(&red, &outside)?;
    let kept = blo_reduct(alg, j)?;
    let set = sets::from_elems(alg.size(), members);
    structure::subalgebra(&kept, &set, &format!("Nr[{}]({})", j.join(","), alg.name()))
}

/// Generator of the operator-closed ideal generated by `seed`.
pub fn ideal_generator(red: &FiniteAlgebra, operators: &[String], seed: &[Elem]) -> Result<Elem> {
    let l = red.lattice()?;
    let fs = operators.iter().map(|o| red.unary(o)).collect::<Result<Vec<_>>>()?;
    let mut m = l.join_all(seed.iter().copied());
    loop {
        let below = l.down_set(m);
        let next = below
            .iter()
            .flat_map(|&y| fs.iter().map(move |f| f.apply(y)))
            .fold(m, |acc, v| l.join(acc, v));
        if next == m {
            return Ok(m);
        }
        m = next;
    }
}

fn meet_irreducible(l: &crate::algebra::Lattice<'_>, within: &[Elem], m: Elem) -> bool {
    if m == l.one {
        return false;
    }
    !within.iter().any(|&a| {
        a != m && l.leq(m, a) && within.iter().any(|&b| b != m && l.leq(m, b) && l.meet(a, b) == m)
    })
}

/// Generators of the prime ideals of the sublattice on `within`.
fn prime_generators(red: &FiniteAlgebra, within: &[Elem]) -> Result<Vec<Elem>> {
    let l = red.lattice()?;
    Ok(within.iter().copied().filter(|&m| meet_irreducible(&l, within, m)).collect())
}

/// A point of the base space: a prime ideal of `Nr_J`, given by its
/// generator and its members (elements of `A`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePoint {
    pub generator: Elem,
    pub ideal: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct Stalk {
    pub algebra: FiniteAlgebra,
    /// `a ↦ a / Co(x)`.
    pub projection: Vec<Elem>,
    pub congruence: Partition,
}

#[derive(Clone, Debug)]
pub struct DualSheaf {
    /// The lattice-with-operators reduct of the input.
    pub base: FiniteAlgebra,
    pub operators: Vec<String>,
    pub j: Vec<String>,
    pub points: Vec<BasePoint>,
    pub topology: FiniteTopology,
    pub stalks: Vec<Stalk>,
    /// Points of `δ(A)`: `(base point, stalk element)`.
    pub delta: Vec<(usize, Elem)>,
    /// Subbasis of the topology on `δ(A)`: the sets `σ_a[U]` for `U` basic
    /// open in `X`.
    pub delta_subbasis: Vec<PointSet>,
}

impl DualSheaf {
    /// `σ_a` as the list of its values, one stalk element per point.
    pub fn sigma(&self, a: Elem) -> Vec<Elem> {
        self.stalks.iter().map(|s| s.projection[a]).collect()
    }

    fn delta_index(&self, x: usize, v: Elem) -> usize {
        self.delta.iter().position(|&d| d == (x, v)).unwrap_or(usize::MAX)
    }

    /// Continuity checked against the recorded subbasis of `δ(A)`:
    /// every preimage must be open in `X`.
    pub fn is_continuous(&self, s: &[Elem]) -> bool {
        if s.len() != self.points.len() || s.iter().zip(&self.stalks).any(|(&v, st)| v >= st.algebra.size()) {
            return false;
        }
        let image: Vec<usize> = s.iter().enumerate().map(|(x, &v)| self.delta_index(x, v)).collect();
        self.delta_subbasis.iter().all(|o| {
            let mut pre = PointSet::with_capacity(self.points.len());
            for (x, &d) in image.iter().enumerate() {
                if o.contains(d) {
                    pre.insert(x);
                }
            }
            self.topology.is_open(&pre)
        })
    }

    /// `x ≤ y` in the specialization order: every open set containing `x`
    /// contains `y`.
    fn specializes(&self, x: usize, y: usize) -> bool {
        self.topology
            .basis()
            .iter()
            .all(|b| !b.contains(x) || b.contains(y))
    }
}

pub fn dual_sheaf(alg: &FiniteAlgebra, operators: &[String], j: &[String]) -> Result<DualSheaf> {
    let red = blo_reduct(alg, operators)?;
    let l = red.lattice()?;
    let (_, emb) = nr(alg, operators, j)?;
    let gens = prime_generators(&red, &emb)?;
    let points: Vec<BasePoint> = gens
        .iter()
        .map(|&g| BasePoint {
            generator: g,
            ideal: emb.iter().copied().filter(|&y| l.leq(y, g)).collect(),
        })
        .collect();
    let np = points.len();
    let subbasis: Vec<PointSet> = emb
        .iter()
        .map(|&a| {
            let mut s = PointSet::with_capacity(np);
            for (x, p) in points.iter().enumerate() {
                if p.ideal.contains(&a) {
                    s.insert(x);
                }
            }
            s
        })
        .collect();
    let topology = FiniteTopology::from_subbasis(np, &subbasis);
    let mut stalks = Vec::with_capacity(np);
    for (x, p) in points.iter().enumerate() {
        let co = cg_collapsing(&red, l.zero, p.ideal.iter().copied());
        let (q, projection) = quotient(&red, &co, &format!("{}/Co(x{x})", alg.name()))?;
        stalks.push(Stalk {
            algebra: q,
            projection,
            congruence: co,
        });
    }
    let delta: Vec<(usize, Elem)> = stalks
        .iter()
        .enumerate()
        .flat_map(|(x, s)| (0..s.algebra.size()).map(move |v| (x, v)))
        .collect();
    let at: HashMap<(usize, Elem), usize> = delta.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut delta_subbasis: BTreeSet<Vec<usize>> = BTreeSet::new();
    for u in topology.basis() {
        for a in 0..red.size() {
            let set: Vec<usize> = u.ones().map(|x| at[&(x, stalks[x].projection[a])]).collect();
            delta_subbasis.insert(set);
        }
    }
    let delta_subbasis = delta_subbasis
        .into_iter()
        .map(|s| {
            let mut p = PointSet::with_capacity(delta.len());
            s.into_iter().for_each(|i| p.insert(i));
            p
        })
        .collect();
    Ok(DualSheaf {
        base: red,
        operators: operators.to_vec(),
        j: j.to_vec(),
        points,
        topology,
        stalks,
        delta,
        delta_subbasis,
    })
}

/// All continuous sections with the pointwise operations.
#[derive(Clone, Debug)]
pub struct SectionAlgebra {
    /// Sections as value lists, sorted.
    pub sections: Vec<Vec<Elem>>,
    pub algebra: FiniteAlgebra,
}

/// Enumerates continuous sections. A section is continuous iff each set
/// `{x : s(x) = σ_a(x)}` is open, i.e. closed upward in the specialization
/// order; so along `x ≤ y` the value at `x` forces the value at `y`.
pub fn sections(sheaf: &DualSheaf) -> Result<SectionAlgebra> {
    let np = sheaf.points.len();
    let n = sheaf.base.size();
    let below: Vec<Vec<usize>> = (0..np)
        .map(|y| (0..np).filter(|&x| x != y && sheaf.specializes(x, y)).collect())
        .collect();
    let mut order: Vec<usize> = (0..np).collect();
    order.sort_by_key(|&y| below[y].len());
    let cap = budget::sections();
    let mut out: Vec<Vec<Elem>> = Vec::new();
    let mut current = vec![usize::MAX; np];

    fn forced(sheaf: &DualSheaf, preds: &[usize], cur: &[Elem], y: usize, n: usize) -> Option<Option<Elem>> {
        let mut value = None;
        for &x in preds {
            let px = &sheaf.stalks[x].projection;
            let py = &sheaf.stalks[y].projection;
            for a in (0..n).filter(|&a| px[a] == cur[x]) {
                match value {
                    None => value = Some(py[a]),
                    Some(v) if v != py[a] => return None,
                    _ => {}
                }
            }
        }
        Some(value)
    }

    fn walk(
        sheaf: &DualSheaf,
        order: &[usize],
        below: &[Vec<usize>],
        depth: usize,
        cur: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
        n: usize,
        cap: usize,
    ) -> Result<()> {
        if depth == order.len() {
            if out.len() >= cap {
                return Err(Error::Resource(format!("more than {cap} sections")));
            }
            out.push(cur.clone());
            return Ok(());
        }
        let y = order[depth];
        let candidates: Vec<Elem> = match forced(sheaf, &below[y], cur, y, n) {
            None => return Ok(()),
            Some(Some(v)) => vec![v],
            Some(None) => (0..sheaf.stalks[y].algebra.size()).collect(),
        };
        for v in candidates {
            cur[y] = v;
            walk(sheaf, order, below, depth + 1, cur, out, n, cap)?;
        }
        cur[y] = usize::MAX;
        Ok(())
    }

    walk(sheaf, &order, &below, 0, &mut current, &mut out, n, cap)?;
    out.sort();
    let index: HashMap<Vec<Elem>, Elem> = out.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let m = out.len();
    let look = |s: Vec<Elem>| -> Result<Elem> {
        index
            .get(&s)
            .copied()
            .ok_or_else(|| Error::Internal(format!("pointwise result {s:?} is not a continuous section")))
    };
    let mut tables = IndexMap::new();
    for (op, t) in sheaf.base.tables() {
        let st = |x: usize| &sheaf.stalks[x].algebra;
        let nt = match t {
            Table::Constant(_) => Table::Constant(look((0..np).map(|x| st(x).constant(op)).collect::<Result<_>>()?)?),
            Table::Unary(_) => {
                let fs = (0..np).map(|x| st(x).unary(op)).collect::<Result<Vec<_>>>()?;
                Table::Unary(
                    out.iter()
                        .map(|s| look(s.iter().enumerate().map(|(x, &v)| fs[x].apply(v)).collect()))
                        .collect::<Result<_>>()?,
                )
            }
            Table::Binary(_) => {
                let fs = (0..np).map(|x| st(x).binary(op)).collect::<Result<Vec<_>>>()?;
                let mut v = Vec::with_capacity(m * m);
                for s in &out {
                    for u in &out {
                        v.push(look((0..np).map(|x| fs[x].apply(s[x], u[x])).collect())?);
                    }
                }
                Table::Binary(v)
            }
        };
        tables.insert(op.clone(), nt);
    }
    let algebra = FiniteAlgebra::new(format!("Gamma({})", sheaf.base.name()), m.max(1), None, tables)?;
    Ok(SectionAlgebra {
        sections: out,
        algebra,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaReport {
    pub sections: usize,
    pub injective: bool,
    pub surjective: bool,
    pub homomorphism: bool,
    pub iso: bool,
    /// A pair of elements with the same section, or a section that is not
    /// any `σ_a`.
    pub witness: Option<String>,
}

/// `η(a) = σ_a` into the continuous sections: injective, onto, and
/// operation-preserving.
pub fn eta_check(sheaf: &DualSheaf) -> Result<EtaReport> {
    let gamma = sections(sheaf)?;
    let n = sheaf.base.size();
    let index: HashMap<&Vec<Elem>, Elem> = gamma.sections.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut map = Vec::with_capacity(n);
    let mut witness = None;
    for a in 0..n {
        let s = sheaf.sigma(a);
        match index.get(&s) {
            Some(&i) => map.push(i),
            None => {
                return Err(Error::Internal(format!("σ_{a} is not continuous")));
            }
        }
    }
    let mut first: HashMap<Elem, Elem> = HashMap::new();
    let mut injective = true;
    for (a, &i) in map.iter().enumerate() {
        if let Some(&b) = first.get(&i) {
            injective = false;
            witness.get_or_insert(format!("elements {b} and {a} have the same section"));
        } else {
            first.insert(i, a);
        }
    }
    let hit: BTreeSet<Elem> = map.iter().copied().collect();
    let surjective = hit.len() == gamma.sections.len();
    if !surjective {
        let miss = (0..gamma.sections.len()).find(|i| !hit.contains(i)).unwrap_or(0);
        witness.get_or_insert(format!("section {:?} is no σ_a", gamma.sections[miss]));
    }
    let homomorphism = is_homomorphism(&sheaf.base, &gamma.algebra, &map)?;
    Ok(EtaReport {
        sections: gamma.sections.len(),
        injective,
        surjective,
        homomorphism,
        iso: injective && surjective && homomorphism,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    pub strongly_regular: bool,
    pub congruence_strongly_regular: bool,
    /// Generators (in `Zd`) of the prime ideals examined.
    pub points: Vec<Elem>,
}

/// `↓m` is prime among operator-closed ideals: proper and meet-irreducible
/// in their lattice (which is closed under intersection).
fn is_prime_ideal(red: &FiniteAlgebra, operators: &[String], m: Elem) -> Result<bool> {
    let l = red.lattice()?;
    let mut closed = Vec::new();
    for a in 0..red.size() {
        if ideal_generator(red, operators, &[a])? == a {
            closed.push(a);
        }
    }
    Ok(closed.contains(&m) && meet_irreducible(&l, &closed, m))
}

fn is_maximal_ideal(red: &FiniteAlgebra, operators: &[String], m: Elem) -> Result<bool> {
    let l = red.lattice()?;
    if m == l.one || ideal_generator(red, operators, &[m])? != m {
        return Ok(false);
    }
    for a in (0..red.size()).filter(|&a| !l.leq(a, m)) {
        if ideal_generator(red, operators, &[m, a])? != l.one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A congruence of a lattice-based algebra is maximal iff it is proper and
/// adding any covering pair outside it yields the total relation (classes
/// are convex, so every larger congruence contains such a pair).
fn is_maximal_congruence(red: &FiniteAlgebra, p: &Partition) -> Result<bool> {
    if p.is_total() {
        return Ok(false);
    }
    let l = red.lattice()?;
    let n = red.size();
    for u in 0..n {
        for v in 0..n {
            if u == v || !l.leq(u, v) || p.related(u, v) {
                continue;
            }
            let covers = !(0..n).any(|w| w != u && w != v && l.leq(u, w) && l.leq(w, v));
            if covers && !cg_over(red, p, &[(u, v)]).is_total() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_simple(alg: &FiniteAlgebra) -> Result<bool> {
    is_maximal_congruence(alg, &Partition::identity(alg.size()))
}

/// The three regularity predicates, each decided over every prime ideal of
/// `Zd`.
pub fn regularity(alg: &FiniteAlgebra, operators: &[String]) -> Result<Regularity> {
    let red = blo_reduct(alg, operators)?;
    let l = red.lattice()?;
    let (_, zd) = zero_dim(alg, operators)?;
    let gens = prime_generators(&red, &zd)?;
    let mut out = Regularity {
        regular: true,
        strongly_regular: true,
        congruence_strongly_regular: true,
        points: gens.clone(),
    };
    for &g in &gens {
        let ideal: Vec<Elem> = zd.iter().copied().filter(|&y| l.leq(y, g)).collect();
        let m = ideal_generator(&red, operators, &ideal)?;
        out.regular &= is_prime_ideal(&red, operators, m)?;
        out.strongly_regular &= is_maximal_ideal(&red, operators, m)?;
        let co = cg_collapsing(&red, l.zero, ideal.iter().copied());
        out.congruence_strongly_regular &= is_maximal_congruence(&red, &co)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EquivalenceCheck {
    Skipped { reason: String },
    Checked {
        strongly_regular: bool,
        principal_from_zd: bool,
        semisimple: bool,
        equivalent: bool,
    },
}

/// For relatively complemented inputs: strong regularity, "every principal
/// ideal is generated by an element of `Zd`", and semisimplicity of the
/// stalks over `X(A, ∅)`, each evaluated on its own.
pub fn strongly_regular_equiv_check(alg: &FiniteAlgebra, operators: &[String]) -> Result<EquivalenceCheck> {
    if !relatively_complemented(alg)? {
        return Ok(EquivalenceCheck::Skipped {
            reason: "the lattice is not relatively complemented".into(),
        });
    }
    let red = blo_reduct(alg, operators)?;
    let strongly_regular = regularity(alg, operators)?.strongly_regular;
    let (_, zd) = zero_dim(alg, operators)?;
    let mut zd_gens = BTreeSet::new();
    for &z in &zd {
        zd_gens.insert(ideal_generator(&red, operators, &[z])?);
    }
    let mut principal_from_zd = true;
    for a in 0..red.size() {
        if !zd_gens.contains(&ideal_generator(&red, operators, &[a])?) {
            principal_from_zd = false;
            break;
        }
    }
    let sheaf = dual_sheaf(alg, operators, &[])?;
    let mut semisimple = true;
    for s in &sheaf.stalks {
        semisimple &= is_simple(&s.algebra)?;
    }
    Ok(EquivalenceCheck::Checked {
        strongly_regular,
        principal_from_zd,
        semisimple,
        equivalent: strongly_regular == principal_from_zd && principal_from_zd == semisimple,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularIdealReport {
    pub regular_ideals: usize,
    pub open_sets: usize,
    /// `I ↦ U[I]` and `U ↦ J[U]` are mutually inverse between regular
    /// ideals and open sets of `X`.
    pub iso: bool,
    /// The same two maps are mutually inverse between regular ideals and
    /// closed sets of `X`.
    pub closed_iso: bool,
    /// First failure of the open-set correspondence.
    pub witness: Option<String>,
}

/// Regular ideals of the section algebra against open sets of `X`, via
/// `I ↦ ⋃{[σ] : σ ∈ I}` and `U ↦ {σ : [σ] ⊆ U}`, where
/// `[σ] = {x : σ(x) ≠ 0_x}`.
pub fn regular_ideals_open_sets(sheaf: &DualSheaf) -> Result<RegularIdealReport> {
    let gamma = sections(sheaf)?;
    let g = &gamma.algebra;
    let np = sheaf.points.len();
    let l = g.lattice()?;
    let ops = sheaf.operators.clone();
    let zd = fixed_by(g, &ops)?;
    let mut ideals: BTreeSet<Elem> = BTreeSet::new();
    let mut todo = vec![ideal_generator(g, &ops, &[])?];
    while let Some(m) = todo.pop() {
        if ideals.insert(m) {
            for &z in &zd {
                todo.push(ideal_generator(g, &ops, &[m, z])?);
            }
        }
    }
    let zeros: Vec<Elem> = sheaf.stalks.iter().map(|s| s.algebra.constant(ZERO)).collect::<Result<_>>()?;
    let supports: Vec<PointSet> = (0..g.size())
        .map(|s| {
            let mut p = PointSet::with_capacity(np);
            for x in (0..np).filter(|&x| gamma.sections[s][x] != zeros[x]) {
                p.insert(x);
            }
            p
        })
        .collect();
    let u_of = |m: Elem| {
        let mut u = PointSet::with_capacity(np);
        for s in l.down_set(m) {
            u.union_with(&supports[s]);
        }
        u
    };
    let j_of = |u: &PointSet| -> Vec<Elem> { (0..g.size()).filter(|&s| supports[s].is_subset(u)).collect() };
    let is_regular = |back: &[Elem]| {
        let top = l.join_all(back.iter().copied());
        back == l.down_set(top).as_slice() && ideals.contains(&top)
    };
    let opens = sheaf.topology.open_sets();
    let closed: Vec<PointSet> = opens.iter().map(|o| sheaf.topology.complement(o)).collect();
    let check = |family: &[PointSet], member: &dyn Fn(&PointSet) -> bool| -> Option<String> {
        for &m in &ideals {
            let u = u_of(m);
            if !member(&u) {
                return Some(format!("U[I] = {:?} for the ideal below {m} is not in the family", u.ones().collect::<Vec<_>>()));
            }
            if j_of(&u) != l.down_set(m) {
                return Some(format!("J[U[I]] differs from I for the ideal below {m}"));
            }
        }
        for u in family {
            let back = j_of(u);
            if !is_regular(&back) {
                return Some(format!("J[U] is not a regular ideal for U = {:?}", u.ones().collect::<Vec<_>>()));
            }
            let top = l.join_all(back.iter().copied());
            if &u_of(top) != u {
                return Some(format!("U[J[U]] differs from U = {:?}", u.ones().collect::<Vec<_>>()));
            }
        }
        None
    };
    let witness = check(&opens, &|u| sheaf.topology.is_open(u));
    let closed_witness = check(&closed, &|u| sheaf.topology.is_closed(u));
    Ok(RegularIdealReport {
        regular_ideals: ideals.len(),
        open_sets: opens.len(),
        iso: witness.is_none(),
        closed_iso: closed_witness.is_none(),
        witness,
    })
}

/// Name of the operator added by [`coordinate_closure_product`].
pub const CLOSURE_OP: &str = "cl";

/// Product of bounded lattices (their `join`, `meet`, `zero`, `one`) with
/// the operator sending each coordinate to `0` if it is `0` and to `1`
/// otherwise.
pub fn coordinate_closure_product(factors: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let reducts = factors
        .iter()
        .map(|f| f.restrict_signature(&[JOIN, MEET, ZERO, ONE]))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&FiniteAlgebra> = reducts.iter().collect();
    let prod = structure::product(&refs)?;
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let bounds = factors
        .iter()
        .map(|f| Ok((f.constant(ZERO)?, f.constant(ONE)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut strides = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let table = (0..prod.size())
        .map(|e| {
            let coords = structure::product_coordinates(&sizes, e);
            coords
                .iter()
                .enumerate()
                .map(|(i, &c)| strides[i] * if c == bounds[i].0 { bounds[i].0 } else { bounds[i].1 })
                .sum()
        })
        .collect();
    prod.with_table(CLOSURE_OP, Table::Unary(table))
}

/// Lattice congruence generated by a single pair, exposed for tests of the
/// stalk construction.
pub fn principal_congruence(red: &FiniteAlgebra, a: Elem, b: Elem) -> Partition {
    cg(red, &[(a, b)])
}
