//! Named algebras and the end-to-end check suite.
//!
//! Builtin names: `luk:N`, `godel:N`, `lattice:N`, `ba:K` (the Boolean
//! algebra with `K` atoms), `free:ba:N` (the free Boolean algebra on `N`
//! generators), products `A*B*...` of any of these, and
//! `closure:A*B*...` for a product of bounded lattices with the coordinate
//! closure operator. A leading `builtin:` is accepted and ignored.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::axioms::{check_class_axioms, reverify, AlgebraClass};
use crate::algebra::chain::{make_chain, make_lattice_chain, ChainSpec};
use crate::algebra::congruence::congruence_lattice_within;
use crate::algebra::io::load_algebra;
use crate::algebra::names::{IMP, JOIN, MEET, ONE, STAR, ZERO};
use crate::algebra::rational::{grid_residuum, r, residuum_closed_form, TNorm};
use crate::algebra::sets::{self, cmp_bitmask, ElemSet};
use crate::algebra::structure::{iso_check, is_homomorphism, product, subalgebra_generate};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::amalgam::{cp_extend, interpolant_search, InterpolantKind};
use crate::error::{Error, Result};
use crate::free::{atomless_shadow_check, atoms, free_algebra, free_product_decomposition_check, VarietySpec};
use crate::kripke::{
    random_faults, random_kripke, set_algebra, undetected_fault, verify_derived_identities,
    verify_gpha_axioms, verify_heyting_quantifiers, RandomBounds, SemigroupG, SetAlgebra,
};
use crate::logic::{coherence_check, generic_filter, is_tautology, parse, type_space};
use crate::sheaf::{
    coordinate_closure_product, default_operators, dual_sheaf, eta_check, regular_ideals_open_sets,
};
use crate::spectra::pairs::{pair_complete_extension, pair_consistent, Side, TheoryPair};
use crate::spectra::topology::PointSet;
use crate::spectra::zariski::{hausdorff_witness, verify_dm_lemma, zariski_sets};

const RESIDUATED: [&str; 6] = [JOIN, MEET, STAR, IMP, ZERO, ONE];

/// Resolves a builtin name.
pub fn resolve(name: &str) -> Result<FiniteAlgebra> {
    let name = name.trim();
    let name = name.strip_prefix("builtin:").unwrap_or(name);
    if let Some(rest) = name.strip_prefix("closure:") {
        let factors = rest.split('*').map(resolve_atom).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
        return Ok(coordinate_closure_product(&refs)?.rename(name));
    }
    let factors = name.split('*').map(resolve_atom).collect::<Result<Vec<_>>>()?;
    if factors.len() == 1 {
        return Ok(factors.into_iter().next().unwrap_or_else(|| unreachable!()));
    }
    Ok(product_of(&factors)?.rename(name))
}

fn resolve_atom(s: &str) -> Result<FiniteAlgebra> {
    let s = s.trim();
    let bad = || Error::InvalidSpec(format!("unknown builtin algebra {s:?}"));
    let size = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some(n) = s.strip_prefix("free:ba:") {
        return Ok(free_ba(size(n)?)?.algebra);
    }
    if let Some(k) = s.strip_prefix("ba:") {
        return boolean(size(k)?);
    }
    if let Some(n) = s.strip_prefix("lattice:") {
        return make_lattice_chain(size(n)?);
    }
    if s.starts_with("luk:") || s.starts_with("godel:") {
        return make_chain(s.parse()?);
    }
    Err(bad())
}

/// Loads `arg` as a file when such a file exists and as a builtin name
/// otherwise.
pub fn load(arg: &str) -> Result<FiniteAlgebra> {
    let p = Path::new(arg);
    if p.is_file() {
        load_algebra(p)
    } else {
        resolve(arg)
    }
}

/// Product, dropping to the residuated signature when the factors differ.
fn product_of(factors: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let sig = factors[0].signature();
    if factors.iter().all(|f| f.signature().same_as(&sig)) {
        let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
        return product(&refs);
    }
    let reducts = factors
        .iter()
        .map(|f| f.restrict_signature(&RESIDUATED))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&FiniteAlgebra> = reducts.iter().collect();
    product(&refs)
}

fn boolean(k: usize) -> Result<FiniteAlgebra> {
    if k == 0 {
        return Err(Error::InvalidSpec("ba:K needs K >= 1".into()));
    }
    let two = make_chain(ChainSpec::luk(2))?;
    let factors = vec![two; k];
    Ok(product_of(&factors)?.rename(format!("ba:{k}")))
}

fn free_ba(n: usize) -> Result<crate::free::FreeAlgebra> {
    free_algebra(&VarietySpec::new(vec![make_chain(ChainSpec::luk(2))?])?, n)
}

/// Łukasiewicz and Gödel chains with 2 to 6 elements.
pub fn corpus_chains() -> Vec<ChainSpec> {
    let mut out: Vec<ChainSpec> = (2..=6).map(ChainSpec::luk).collect();
    out.extend((2..=6).map(ChainSpec::godel));
    out
}

/// The chains, every binary product of them, and Fr_1, Fr_2 of Boolean
/// algebras.
pub fn corpus_algebras() -> Result<Vec<FiniteAlgebra>> {
    let chains = corpus_chains()
        .into_iter()
        .map(make_chain)
        .collect::<Result<Vec<_>>>()?;
    let mut out = chains.clone();
    for i in 0..chains.len() {
        for j in i..chains.len() {
            let p = product_of(&[chains[i].clone(), chains[j].clone()])?;
            out.push(p.rename(format!("{}*{}", chains[i].name(), chains[j].name())));
        }
    }
    for n in 1..=2 {
        out.push(free_ba(n)?.algebra.rename(format!("free:ba:{n}")));
    }
    Ok(out)
}

/// Seeded random Kripke set algebras with at most 3 worlds, 3 base
/// elements and 3 variables, diagonals included.
pub fn kripke_corpus(seeds: std::ops::Range<u64>) -> Result<Vec<SetAlgebra>> {
    let b = RandomBounds::new(3, 3, 3);
    seeds
        .map(|seed| {
            let sys = random_kripke(seed, b)?;
            let g = SemigroupG::full(sys.alpha)?;
            set_algebra(&sys, &g, true)
        })
        .collect()
}

// ---------------------------------------------------------------- criteria

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
    pub detail: String,
}

pub const CRITERIA: [(&str, Option<u64>); 11] = [
    ("axiom suites", Some(1)),
    ("residuum oracle", Some(5)),
    ("free Boolean algebras", Some(30)),
    ("atomless shadow", None),
    ("spectra laws", None),
    ("theory pairs", None),
    ("Kripke equational theory", Some(60)),
    ("sheaf duality", None),
    ("interpolation and congruence pairs", Some(120)),
    ("generic filters", None),
    ("logic front end", None),
];

/// Runs criterion `id` (1-based) and times it against its bound.
pub fn run_criterion(id: usize) -> Result<CriterionOutcome> {
    let &(name, limit) = CRITERIA
        .get(id.wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("no criterion {id}")))?;
    let start = Instant::now();
    let (ok, detail) = match id {
        1 => c1_axioms()?,
        2 => c2_residuum()?,
        3 => c3_free()?,
        4 => c4_atomless()?,
        5 => c5_spectra()?,
        6 => c6_pairs()?,
        7 => c7_kripke()?,
        8 => c8_sheaf()?,
        9 => c9_interpolation()?,
        10 => c10_generic()?,
        _ => c11_logic()?,
    };
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed < l);
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; over time bound")
    };
    Ok(CriterionOutcome {
        id,
        name,
        passed: ok && in_time,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.map(|l| l.as_millis()),
        detail,
    })
}

pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    (1..=CRITERIA.len()).map(run_criterion).collect()
}

type Check = Result<(bool, String)>;

fn c1_axioms() -> Check {
    use AlgebraClass::{Bl, Mv, ResiduatedLattice};
    let mut bad = Vec::new();
    for n in 2..=6 {
        let a = make_chain(ChainSpec::luk(n))?;
        for class in [ResiduatedLattice, Bl, Mv] {
            if !check_class_axioms(&a, class)?.passed {
                bad.push(format!("{} fails {}", a.name(), class.as_str()));
            }
        }
    }
    for n in 3..=6 {
        let a = make_chain(ChainSpec::godel(n))?;
        for class in [ResiduatedLattice, Bl] {
            if !check_class_axioms(&a, class)?.passed {
                bad.push(format!("{} fails {}", a.name(), class.as_str()));
            }
        }
        let mv = check_class_axioms(&a, Mv)?;
        let r = a.residuated()?;
        let witnessed = mv.violations.iter().any(|v| {
            v.axiom.contains("double-negation")
                && v.witness.len() == 1
                && r.neg(r.neg(v.witness[0])) != v.witness[0]
                && reverify(&a, Mv, v).unwrap_or(false)
        });
        if mv.passed || !witnessed {
            bad.push(format!("{} has no double-negation witness against mv", a.name()));
        }
    }
    Ok(summary(bad, "9 chains checked"))
}

fn c2_residuum() -> Check {
    let mut bad = Vec::new();
    let mut count = 0usize;
    for kind in [TNorm::Lukasiewicz, TNorm::Godel] {
        for k in 2..=64i64 {
            for i in 0..=k {
                for j in 0..=k {
                    let (x, y) = (r(i, k), r(j, k));
                    count += 1;
                    if residuum_closed_form(kind, x, y)? != grid_residuum(kind, k, x, y)? {
                        bad.push(format!("{kind:?} k={k} x={x} y={y}"));
                    }
                }
            }
        }
    }
    Ok(summary(bad, &format!("{count} grid pairs agree")))
}

fn c3_free() -> Check {
    let mut bad = Vec::new();
    for (n, size, atom_count) in [(1, 4, 2), (2, 16, 4), (3, 256, 8)] {
        let fr = free_ba(n)?;
        let got = (fr.algebra.size(), atoms(&fr.algebra)?.len());
        if got != (size, atom_count) {
            bad.push(format!("Fr_{n}: size {} with {} atoms", got.0, got.1));
        }
    }
    let variety = VarietySpec::new(vec![make_chain(ChainSpec::luk(2))?])?;
    for n in 1..=2 {
        let chk = free_product_decomposition_check(&variety, n)?;
        let ok = match &chk.iso {
            Some(map) => {
                let sq = product(&[&free_ba(n)?.algebra, &free_ba(n)?.algebra])?;
                let next = free_ba(n + 1)?.algebra;
                let mut hit = vec![false; next.size()];
                map.iter().for_each(|&y| hit[y] = true);
                hit.iter().all(|&h| h) && is_homomorphism(&sq, &next, map)?
            }
            None => false,
        };
        if !ok {
            bad.push(format!("no verified isomorphism Fr_{n} x Fr_{n} -> Fr_{}", n + 1));
        }
    }
    Ok(summary(bad, "sizes, atoms and both isomorphisms verified"))
}

fn c4_atomless() -> Check {
    let variety = VarietySpec::new(vec![make_chain(ChainSpec::luk(2))?])?;
    let mut bad = Vec::new();
    let mut checked = Vec::new();
    for n in 2..=3 {
        let s = atomless_shadow_check(&variety, n)?;
        let expected = (1usize << (1 << (n - 1))) - 1;
        if s.witness.is_some() || s.checked != expected {
            bad.push(format!("n={n}: checked {} witness {:?}", s.checked, s.witness));
        }
        checked.push(s.checked);
    }
    Ok(summary(bad, &format!("nonzero elements checked: {checked:?}")))
}

/// Largest subset size for the set-indexed lemma items.
fn dm_subset_bound(n: usize) -> usize {
    if n <= 16 {
        3
    } else {
        2
    }
}

fn c5_spectra() -> Check {
    let mut bad = Vec::new();
    let corpus = corpus_algebras()?;
    for alg in &corpus {
        let n = alg.size();
        let rep = verify_dm_lemma(alg, dm_subset_bound(n))?;
        for v in &rep.violations {
            bad.push(format!("{}: item {} at {:?}", alg.name(), v.axiom, v.witness));
        }
        let z = zariski_sets(alg)?;
        let m = &z.max;
        for i in 0..m.len() {
            for j in 0..m.len() {
                if i != j && !hausdorff_witness(alg, &m.points[i], &m.points[j])?.separates {
                    bad.push(format!("{}: maximal filters {i}, {j} not separated", alg.name()));
                }
            }
        }
        let l = alg.lattice()?;
        let vs: Vec<PointSet> = (0..n).map(|a| m.v(a)).collect();
        'parts: for parts in subsets(n, 3) {
            let join = l.join_all(parts.iter().copied());
            let mut rj = vs[join].clone();
            let meet = l.meet_all(parts.iter().copied());
            let mut rm = m.all();
            for &p in &parts {
                rj.difference_with(&vs[p]);
                rm.intersect_with(&vs[p]);
            }
            rm.difference_with(&vs[meet]);
            for (kind, res) in [("join", rj), ("meet", rm)] {
                if !res.is_clear() {
                    bad.push(format!("{}: nonempty {kind} residual for {parts:?}", alg.name()));
                    break 'parts;
                }
            }
        }
    }
    Ok(summary(bad, &format!("{} algebras", corpus.len())))
}

/// Nonempty subsets of `0..n` with at most `k` members.
fn subsets(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Elem>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &layer {
            for x in s.last().map_or(0, |&l| l + 1)..n {
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

fn c6_pairs() -> Check {
    let corpus = corpus_algebras()?;
    let mut bad = Vec::new();
    let mut steps = 0usize;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = corpus.choose(&mut rng).ok_or_else(|| Error::Internal("empty corpus".into()))?;
        let n = alg.size();
        let tp = loop {
            let g: Vec<Elem> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..n)).collect();
            let d: Vec<Elem> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..n)).collect();
            let tp = TheoryPair::new(n, &g, &d);
            if pair_consistent(alg, &tp)? {
                break tp;
            }
        };
        let done = pair_complete_extension(alg, &tp)?;
        if !done.pair.is_complete() || !pair_consistent(alg, &done.pair)? {
            bad.push(format!("seed {seed}: result not complete and consistent"));
            continue;
        }
        let mut cur = tp.clone();
        for st in &done.steps {
            steps += 1;
            let a = st.element;
            let mut g = cur.clone();
            g.gamma.insert(a);
            let mut d = cur.clone();
            d.delta.insert(a);
            let (gc, dc) = (pair_consistent(alg, &g)?, pair_consistent(alg, &d)?);
            if (gc, dc) != (st.gamma_consistent, st.delta_consistent) || !(gc || dc) {
                bad.push(format!("seed {seed}: dichotomy fails at element {a}"));
                break;
            }
            cur = if st.placed == Side::Gamma { g } else { d };
        }
        if cur != done.pair {
            bad.push(format!("seed {seed}: recorded steps do not replay"));
        }
    }
    Ok(summary(bad, &format!("1000 pairs, {steps} extension steps")))
}

fn c7_kripke() -> Check {
    let mut bad = Vec::new();
    let mut faults = 0usize;
    for (seed, sa) in kripke_corpus(0..100)?.iter().enumerate() {
        let alg = &sa.algebra;
        let mut reports = vec![verify_derived_identities(alg)?, verify_gpha_axioms(alg, &sa.g)?];
        for j in 0..sa.system.alpha {
            reports.push(verify_heyting_quantifiers(alg, j)?);
        }
        for rep in reports.iter().filter(|r| !r.passed) {
            bad.push(format!("seed {seed}: {} fails {:?}", rep.suite, rep.violations.first()));
        }
        let fs = random_faults(alg, seed as u64, 5);
        faults += fs.len();
        if let Some(f) = undetected_fault(alg, &sa.g, fs)? {
            bad.push(format!("seed {seed}: undetected fault {f:?}"));
        }
    }
    Ok(summary(bad, &format!("100 systems, {faults} injected faults")))
}

fn c8_sheaf() -> Check {
    let mut bad = Vec::new();
    let mut regular_fail = Vec::new();
    let mut count = 0usize;
    let mut plain: Vec<(FiniteAlgebra, Vec<String>)> = Vec::new();
    for alg in corpus_algebras()? {
        let ops = default_operators(&alg);
        plain.push((alg, ops));
    }
    for sa in kripke_corpus(0..15)? {
        let ops = default_operators(&sa.algebra);
        plain.push((sa.algebra, ops));
    }
    for (alg, ops) in &plain {
        count += 1;
        let sh = dual_sheaf(alg, ops, &[])?;
        if !eta_check(&sh)?.iso {
            bad.push(format!("{}: eta is not an isomorphism", alg.name()));
        }
        if !regular_ideals_open_sets(&sh)?.iso {
            regular_fail.push(alg.name().to_string());
        }
    }
    let chains: Vec<FiniteAlgebra> = [ChainSpec::luk(2), ChainSpec::luk(3), ChainSpec::godel(4)]
        .into_iter()
        .map(make_chain)
        .collect::<Result<_>>()?;
    let mut families: Vec<Vec<&FiniteAlgebra>> = Vec::new();
    for a in &chains {
        for b in &chains {
            families.push(vec![a, b]);
        }
    }
    families.push(chains.iter().collect());
    for fam in &families {
        count += 1;
        let p = coordinate_closure_product(fam)?;
        let ops = default_operators(&p);
        let sh = dual_sheaf(&p, &ops, &[])?;
        if !eta_check(&sh)?.iso {
            bad.push(format!("{}: eta is not an isomorphism", p.name()));
        }
        if !regular_ideals_open_sets(&sh)?.iso {
            regular_fail.push(p.name().to_string());
        }
        let mut unmatched: Vec<bool> = vec![true; sh.stalks.len()];
        for f in fam {
            let single = coordinate_closure_product(&[f])?;
            let hit = (0..sh.stalks.len())
                .find(|&i| unmatched[i] && iso_check(&sh.stalks[i].algebra, &single).ok().flatten().is_some());
            match hit {
                Some(i) => unmatched[i] = false,
                None => bad.push(format!("{}: no stalk isomorphic to factor {}", p.name(), f.name())),
            }
        }
        if sh.stalks.len() != fam.len() {
            bad.push(format!("{}: {} stalks for {} factors", p.name(), sh.stalks.len(), fam.len()));
        }
    }
    if !regular_fail.is_empty() {
        bad.push(format!(
            "regular ideals and open sets are not mutually inverse on {} of {count} algebras, first {}",
            regular_fail.len(),
            regular_fail[0]
        ));
    }
    Ok(summary(bad, &format!("{count} algebras")))
}

fn c9_interpolation() -> Check {
    let mut bad = Vec::new();
    let fr = free_ba(3)?;
    let alg = &fr.algebra;
    let l = alg.lattice()?;
    let g = &fr.generators;
    let (x1, x2) = ([g[0], g[1]], [g[1], g[2]]);
    let s1 = subalgebra_generate(alg, &x1, None)?;
    let s2 = subalgebra_generate(alg, &x2, None)?;
    let s12 = subalgebra_generate(alg, &[g[1]], None)?;
    let mut pairs = 0usize;
    for x in s1.ones() {
        for z in s2.ones().filter(|&z| l.leq(x, z)) {
            pairs += 1;
            let ok = match interpolant_search(alg, &x1, &x2, x, z, 0)? {
                Some(i) => {
                    i.kind == InterpolantKind::Identity && s12.contains(i.y) && l.leq(x, i.y) && l.leq(i.y, z)
                }
                None => false,
            };
            if !ok {
                bad.push(format!("no interpolant for ({}, {})", alg.label(x), alg.label(z)));
            }
        }
    }
    let fr2 = free_ba(2)?;
    let alg2 = &fr2.algebra;
    let (h0, h1) = (fr2.generators[0], fr2.generators[1]);
    let mut cps = 0usize;
    for (y1, y2) in [(vec![h0], vec![h1]), (vec![h0], vec![h0, h1]), (vec![h0, h1], vec![h1])] {
        let t1 = subalgebra_generate(alg2, &y1, None)?;
        let t2 = subalgebra_generate(alg2, &y2, None)?;
        let common: Vec<Elem> = y1.iter().copied().filter(|e| y2.contains(e)).collect();
        let t12 = subalgebra_generate(alg2, &common, None)?;
        let rs = congruence_lattice_within(alg2, &t1)?;
        let ss = congruence_lattice_within(alg2, &t2)?;
        for r in &rs {
            for s in ss.iter().filter(|s| s.restrict(&t12) == r.restrict(&t12)) {
                cps += 1;
                match cp_extend(alg2, &y1, &y2, r, s)? {
                    Some(t) if t.restrict(&t1) == *r && t.restrict(&t2) == *s => {}
                    _ => bad.push(format!("cp_extend fails for X1={y1:?}, X2={y2:?}")),
                }
            }
        }
    }
    Ok(summary(bad, &format!("{pairs} ordered pairs, {cps} congruence pairs")))
}

/// Maximal filters found without the filter enumerator: in a finite
/// residuated lattice every filter is `↑m` for an idempotent `m`, so the
/// maximal ones come from the minimal nonzero idempotents.
fn maximal_filters_oracle(alg: &FiniteAlgebra) -> Result<Vec<ElemSet>> {
    let r = alg.residuated()?;
    let l = alg.lattice()?;
    let n = alg.size();
    let idem: Vec<Elem> = (0..n).filter(|&m| m != l.zero && r.star(m, m) == m).collect();
    let mut out: Vec<ElemSet> = idem
        .iter()
        .filter(|&&m| !idem.iter().any(|&k| k != m && l.leq(k, m)))
        .map(|&m| sets::from_elems(n, (0..n).filter(|&x| l.leq(m, x))))
        .collect();
    out.sort_by(cmp_bitmask);
    Ok(out)
}

fn c10_generic() -> Check {
    let mut pool = corpus_algebras()?;
    for k in 3..=5 {
        pool.push(boolean(k)?);
    }
    let oracles = pool.iter().map(maximal_filters_oracle).collect::<Result<Vec<_>>>()?;
    let spaces = pool.iter().map(type_space).collect::<Result<Vec<_>>>()?;
    let mut bad = Vec::new();
    let mut empty = 0usize;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx = rng.gen_range(0..pool.len());
        let (alg, max, ts) = (&pool[idx], &oracles[idx], &spaces[idx]);
        let l = alg.lattice()?;
        if max.len() > 64 {
            return Err(Error::Internal(format!("{} has more than 64 maximal filters", alg.name())));
        }
        let a = loop {
            let a = rng.gen_range(0..alg.size());
            if a != l.zero {
                break a;
            }
        };
        let mut avoid_filters: Vec<Vec<usize>> = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            avoid_filters.push((0..max.len()).filter(|_| rng.gen_bool(0.4)).collect());
        }
        let mut avoid = Vec::new();
        for set in &avoid_filters {
            let mut ps = PointSet::with_capacity(ts.space.len());
            for &f in set {
                let i = ts.space.index_of(&max[f]).ok_or_else(|| {
                    Error::Internal(format!("{}: oracle filter missing from the type space", alg.name()))
                })?;
                ps.insert(i);
            }
            avoid.push(ps);
        }
        let admissible: Vec<&ElemSet> = (0..max.len())
            .filter(|&f| max[f].contains(a) && !avoid_filters.iter().any(|s| s.contains(&f)))
            .map(|f| &max[f])
            .collect();
        let least = admissible.iter().min_by(|x, y| cmp_bitmask(x, y));
        match (generic_filter(alg, a, &avoid), least) {
            (Ok(gp), Some(m)) => {
                if gp.filter != sets::members(m) {
                    bad.push(format!("seed {seed}: generic filter differs from the oracle"));
                }
            }
            (Err(Error::NoGenericPoint(_)), None) => empty += 1,
            (Ok(_), None) => bad.push(format!("seed {seed}: filter returned with no admissible point")),
            (Err(e), _) => bad.push(format!("seed {seed}: {e}")),
        }
    }
    Ok(summary(bad, &format!("500 instances, {empty} with no admissible point")))
}

fn c11_logic() -> Check {
    let mut bad = Vec::new();
    let prelinear = parse("(p0->p1)\\/(p1->p0)")?;
    let rep = is_tautology(&prelinear, &corpus_chains())?;
    if !rep.valid {
        bad.push(format!("prelinearity fails: {:?}", rep.counter));
    }
    let lem = parse("p0\\/~p0")?;
    let rep = is_tautology(&lem, &[ChainSpec::luk(3)])?;
    let at_half = rep
        .counter
        .as_ref()
        .is_some_and(|c| c.valuation == [("p0".to_string(), "1/2".to_string())]);
    if rep.valid || !at_half {
        bad.push(format!("excluded middle on luk:3: {:?}", rep.counter));
    }
    for spec in [ChainSpec::luk(3), ChainSpec::godel(3)] {
        let c = coherence_check(spec, 2, 4)?;
        if !c.coherent {
            bad.push(format!("{spec}: incoherent at {:?}", c.witness));
        }
    }
    Ok(summary(bad, "prelinearity, excluded middle and depth-4 coherence"))
}

fn summary(bad: Vec<String>, ok_note: &str) -> (bool, String) {
    if bad.is_empty() {
        (true, ok_note.to_string())
    } else {
        let shown: Vec<&str> = bad.iter().take(4).map(String::as_str).collect();
        let more = if bad.len() > 4 {
            format!(" (+{} more)", bad.len() - 4)
        } else {
            String::new()
        };
        (false, format!("{}{more}", shown.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(resolve("builtin:godel:3").unwrap().size(), 3);
        assert_eq!(resolve("ba:3").unwrap().size(), 8);
        assert_eq!(resolve("free:ba:2").unwrap().size(), 16);
        assert_eq!(resolve("luk:3*godel:2").unwrap().size(), 6);
        assert_eq!(resolve("closure:luk:2*lattice:3").unwrap().size(), 6);
        assert!(resolve("nope:3").is_err());
    }

    #[test]
    fn corpus_shape() {
        let c = corpus_algebras().unwrap();
        assert_eq!(c.len(), 10 + 55 + 2);
        assert!(c.iter().all(|a| a.size() <= 36));
    }

    #[test]
    fn oracle_maximal_filters_of_products() {
        let a = resolve("luk:3*godel:3").unwrap();
        let m = maximal_filters_oracle(&a).unwrap();
        assert_eq!(m.len(), 2);
        let g = resolve("godel:4").unwrap();
        assert_eq!(sets::members(&maximal_filters_oracle(&g).unwrap()[0]), vec![1, 2, 3]);
    }

    #[test]
    fn small_subsets() {
        assert_eq!(subsets(3, 2).len(), 6);
        assert_eq!(subsets(4, 3).len(), 14);
    }
}
