//! Kripke systems and their polyadic Heyting set algebras.
//!
//! A system has preordered worlds, growing base sets `X_k` and growing
//! assignment sets `V_k ⊆ X_k^α`. A point is a pair `(k, x)` with
//! `x ∈ V_k`. An element is a family `f_k: V_k → {0,1}` that is monotone
//! along the preorder; it is stored as a `u64` mask over the point
//! enumeration (worlds in order, assignments lexicographically inside each
//! world), and the universe is sorted by mask value.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::axioms::{
    class_laws, first_violation, run_laws, AlgebraClass, AxiomReport, Law, Violation,
};
use crate::algebra::io::{check_format, FORMAT};
use crate::algebra::names::{self, cocyl, cyl, diag, replacement, subst, IMP, JOIN, MEET, ONE, STAR, ZERO};
use crate::algebra::{sets, structure, Elem, FiniteAlgebra, Residuated, Table, Unary};
use crate::budget;
use crate::error::{Error, Result};

/// Largest `α^α` accepted for the full transformation semigroup.
pub const MAX_FULL_G: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeSystem {
    pub worlds: Vec<String>,
    /// `leq[k][l]` is `k ≤ l`.
    pub leq: Vec<Vec<bool>>,
    /// Names of all base elements; `base` and `assignments` refer to them
    /// by index.
    pub elements: Vec<String>,
    /// `X_k`, sorted.
    pub base: Vec<Vec<usize>>,
    /// Explicit `V_k`; `None` means the full function space `X_k^α`.
    pub assignments: Option<Vec<Vec<Vec<usize>>>>,
    pub alpha: usize,
}

fn tuples(values: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for t in &out {
            for &v in values {
                let mut u = t.clone();
                u.push(v);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

impl KripkeSystem {
    /// A one-world system with the full assignment space.
    pub fn single(elements: &[&str], alpha: usize) -> Result<Self> {
        let sys = KripkeSystem {
            worlds: vec!["w0".into()],
            leq: vec![vec![true]],
            elements: elements.iter().map(|s| s.to_string()).collect(),
            base: vec![(0..elements.len()).collect()],
            assignments: None,
            alpha,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// `V_k`, sorted lexicographically.
    pub fn assignment_set(&self, k: usize) -> Vec<Vec<usize>> {
        match &self.assignments {
            Some(v) => {
                let mut v = v[k].clone();
                v.sort();
                v
            }
            None => tuples(&self.base[k], self.alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.worlds.len();
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if w == 0 {
            return bad("a Kripke system needs at least one world".into());
        }
        if self.alpha == 0 {
            return bad("alpha must be positive".into());
        }
        for (i, name) in self.worlds.iter().enumerate() {
            if self.worlds[..i].contains(name) {
                return bad(format!("duplicate world {name}"));
            }
        }
        if self.leq.len() != w || self.leq.iter().any(|r| r.len() != w) {
            return bad(format!("leq must be a {w}x{w} matrix"));
        }
        for k in 0..w {
            if !self.leq[k][k] {
                return bad(format!("leq is not reflexive at {}", self.worlds[k]));
            }
            for l in 0..w {
                for m in 0..w {
                    if self.leq[k][l] && self.leq[l][m] && !self.leq[k][m] {
                        return bad(format!(
                            "leq is not transitive at {}, {}, {}",
                            self.worlds[k], self.worlds[l], self.worlds[m]
                        ));
                    }
                }
            }
        }
        if self.base.len() != w {
            return bad("one base set per world is required".into());
        }
        for b in &self.base {
            if b.iter().any(|&e| e >= self.elements.len()) {
                return bad("base set refers to an unknown element".into());
            }
        }
        if let Some(vs) = &self.assignments {
            if vs.len() != w {
                return bad("one assignment set per world is required".into());
            }
            for (k, v) in vs.iter().enumerate() {
                for (i, x) in v.iter().enumerate() {
                    if x.len() != self.alpha {
                        return bad(format!("assignment {x:?} does not have length {}", self.alpha));
                    }
                    if x.iter().any(|e| !self.base[k].contains(e)) {
                        return bad(format!(
                            "assignment {x:?} of {} leaves its base set",
                            self.worlds[k]
                        ));
                    }
                    if v[..i].contains(x) {
                        return bad(format!("duplicate assignment {x:?} in {}", self.worlds[k]));
                    }
                }
            }
        }
        for k in 0..w {
            for l in 0..w {
                if k == l || !self.leq[k][l] {
                    continue;
                }
                if self.base[k].iter().any(|e| !self.base[l].contains(e)) {
                    return bad(format!(
                        "base of {} is not contained in base of {}",
                        self.worlds[k], self.worlds[l]
                    ));
                }
                if let Some(vs) = &self.assignments {
                    if vs[k].iter().any(|x| !vs[l].contains(x)) {
                        return bad(format!(
                            "assignments of {} are not contained in those of {}",
                            self.worlds[k], self.worlds[l]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        (0..self.worlds.len()).map(|k| self.assignment_set(k).len()).sum()
    }

    /// Number of monotone elements, or `None` on overflow.
    pub fn element_count(&self) -> Option<usize> {
        let layout = Layout::of(self);
        let mut total: usize = 1;
        for ws in layout.by_assignment.values() {
            total = total.checked_mul(count_upsets(&self.leq, ws)?)?;
        }
        Some(total)
    }
}

#[derive(Serialize, Deserialize)]
struct KripkeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    worlds: Vec<String>,
    leq: Vec<Vec<bool>>,
    base: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assignments: Option<IndexMap<String, Vec<Vec<usize>>>>,
    alpha: usize,
}

impl KripkeSystem {
    pub fn from_json(s: &str) -> Result<Self> {
        let f: KripkeFile = serde_json::from_str(s)?;
        check_format(f.format.as_deref())?;
        let mut elements: Vec<String> = Vec::new();
        let mut base = Vec::new();
        let mut listed = Vec::new();
        for w in &f.worlds {
            let xs = f
                .base
                .get(w)
                .ok_or_else(|| Error::InvalidSpec(format!("no base set for world {w}")))?;
            let mut ids = Vec::new();
            for x in xs {
                let id = match elements.iter().position(|e| e == x) {
                    Some(i) => i,
                    None => {
                        elements.push(x.clone());
                        elements.len() - 1
                    }
                };
                ids.push(id);
            }
            listed.push(ids.clone());
            ids.sort();
            ids.dedup();
            base.push(ids);
        }
        if f.base.len() != f.worlds.len() {
            return Err(Error::InvalidSpec("base names a world not in worlds".into()));
        }
        let assignments = match &f.assignments {
            None => None,
            Some(a) => {
                if a.len() != f.worlds.len() {
                    return Err(Error::InvalidSpec(
                        "assignments must list every world".into(),
                    ));
                }
                let mut out = Vec::new();
                for (k, w) in f.worlds.iter().enumerate() {
                    let rows = a.get(w).ok_or_else(|| {
                        Error::InvalidSpec(format!("no assignments for world {w}"))
                    })?;
                    let mut v = Vec::new();
                    for r in rows {
                        let mut x = Vec::new();
                        for &i in r {
                            let e = *listed[k].get(i).ok_or_else(|| {
                                Error::InvalidSpec(format!("assignment index {i} out of range in {w}"))
                            })?;
                            x.push(e);
                        }
                        v.push(x);
                    }
                    out.push(v);
                }
                Some(out)
            }
        };
        let sys = KripkeSystem {
            worlds: f.worlds,
            leq: f.leq,
            elements,
            base,
            assignments,
            alpha: f.alpha,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let names = |ids: &[usize]| ids.iter().map(|&i| self.elements[i].clone()).collect();
        let base = self
            .worlds
            .iter()
            .zip(&self.base)
            .map(|(w, b)| (w.clone(), names(b)))
            .collect();
        let assignments = self.assignments.as_ref().map(|vs| {
            self.worlds
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let rows = vs[k]
                        .iter()
                        .map(|x| {
                            x.iter()
                                .map(|e| self.base[k].iter().position(|b| b == e).unwrap_or(usize::MAX))
                                .collect()
                        })
                        .collect();
                    (w.clone(), rows)
                })
                .collect()
        });
        let f = KripkeFile {
            format: Some(FORMAT.into()),
            worlds: self.worlds.clone(),
            leq: self.leq.clone(),
            base,
            assignments,
            alpha: self.alpha,
        };
        serde_json::to_string_pretty(&f).expect("plain data serializes")
    }
}

/// `(σ∘τ)(i) = σ(τ(i))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t]).collect()
}

fn fmt_map(t: &[usize]) -> String {
    t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

fn fmt_set(j: &[usize]) -> String {
    if j.is_empty() {
        "-".into()
    } else {
        fmt_map(j)
    }
}

/// A set of maps `α → α` closed under composition that contains the
/// identity and every replacement `[i|j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupG {
    alpha: usize,
    maps: Vec<Vec<usize>>,
}

impl SemigroupG {
    pub fn full(alpha: usize) -> Result<Self> {
        let count = alpha.checked_pow(alpha as u32).unwrap_or(usize::MAX);
        if count > MAX_FULL_G {
            return Err(Error::Resource(format!(
                "{count} transformations of a {alpha}-element index set"
            )));
        }
        let all: Vec<usize> = (0..alpha).collect();
        Ok(SemigroupG {
            alpha,
            maps: tuples(&all, alpha),
        })
    }

    pub fn new(alpha: usize, maps: Vec<Vec<usize>>) -> Result<Self> {
        let mut maps = maps;
        maps.sort();
        maps.dedup();
        if maps.iter().any(|t| t.len() != alpha || t.iter().any(|&i| i >= alpha)) {
            return Err(Error::InvalidSpec(format!("every map must send 0..{alpha} into itself")));
        }
        let g = SemigroupG { alpha, maps };
        let id: Vec<usize> = (0..alpha).collect();
        if !g.contains(&id) {
            return Err(Error::InvalidSpec("G must contain the identity".into()));
        }
        for i in 0..alpha {
            for j in 0..alpha {
                let r = replacement(alpha, i, j);
                if !g.contains(&r) {
                    return Err(Error::InvalidSpec(format!("G lacks the replacement [{i}|{j}]")));
                }
            }
        }
        for s in &g.maps {
            for t in &g.maps {
                let st = compose(s, t);
                if !g.contains(&st) {
                    return Err(Error::InvalidSpec(format!(
                        "G is not closed: {} o {} is missing",
                        fmt_map(s),
                        fmt_map(t)
                    )));
                }
            }
        }
        Ok(g)
    }

    /// The semigroup indexed by the `s_` tables of an algebra.
    pub fn from_algebra(alg: &FiniteAlgebra) -> Result<Self> {
        let alpha = names::dimension(alg);
        let maps = alg
            .tables()
            .keys()
            .filter_map(|k| names::parse_subst(k))
            .collect();
        SemigroupG::new(alpha, maps)
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.maps.binary_search_by(|m| m.as_slice().cmp(t)).is_ok()
    }
}

struct Layout {
    /// `(world, assignment)` in enumeration order.
    points: Vec<(usize, Vec<usize>)>,
    /// Each assignment with the worlds whose `V_k` contains it.
    by_assignment: IndexMap<Vec<usize>, Vec<usize>>,
}

impl Layout {
    fn of(sys: &KripkeSystem) -> Layout {
        let mut points = Vec::new();
        let mut by_assignment: IndexMap<Vec<usize>, Vec<usize>> = IndexMap::new();
        for k in 0..sys.worlds.len() {
            for x in sys.assignment_set(k) {
                by_assignment.entry(x.clone()).or_default().push(k);
                points.push((k, x));
            }
        }
        by_assignment.sort_keys();
        Layout { points, by_assignment }
    }
}

/// Up-closed subsets of `ws` (as bitmasks over positions in `ws`).
fn upsets(leq: &[Vec<bool>], ws: &[usize]) -> Option<Vec<u32>> {
    if ws.len() > 20 {
        return None;
    }
    let m = ws.len();
    let out = (0u32..1 << m)
        .filter(|&s| {
            (0..m).all(|a| {
                s & (1 << a) == 0 || (0..m).all(|b| !leq[ws[a]][ws[b]] || s & (1 << b) != 0)
            })
        })
        .collect();
    Some(out)
}

fn count_upsets(leq: &[Vec<bool>], ws: &[usize]) -> Option<usize> {
    upsets(leq, ws).map(|u| u.len())
}

/// Per-world truth values of an element, aligned with `assignment_set(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeElement {
    pub values: Vec<Vec<bool>>,
}

/// The set algebra of a Kripke system with its element decoder.
#[derive(Clone, Debug)]
pub struct SetAlgebra {
    pub algebra: FiniteAlgebra,
    pub system: KripkeSystem,
    pub g: SemigroupG,
    points: Vec<(usize, Vec<usize>)>,
    masks: Vec<u64>,
}

impl SetAlgebra {
    pub fn points(&self) -> &[(usize, Vec<usize>)] {
        &self.points
    }

    pub fn mask(&self, e: Elem) -> u64 {
        self.masks[e]
    }

    pub fn element_of_mask(&self, m: u64) -> Option<Elem> {
        self.masks.binary_search(&m).ok()
    }

    pub fn decode(&self, e: Elem) -> KripkeElement {
        let m = self.masks[e];
        let mut values = vec![Vec::new(); self.system.worlds.len()];
        for (p, (k, _)) in self.points.iter().enumerate() {
            values[*k].push(m >> p & 1 == 1);
        }
        KripkeElement { values }
    }

    pub fn encode(&self, f: &KripkeElement) -> Option<Elem> {
        let mut m = 0u64;
        let mut seen = vec![0usize; self.system.worlds.len()];
        for (p, (k, _)) in self.points.iter().enumerate() {
            let v = *f.values.get(*k)?.get(seen[*k])?;
            seen[*k] += 1;
            if v {
                m |= 1 << p;
            }
        }
        self.element_of_mask(m)
    }

    /// The element true exactly where `pred(world, assignment)` holds, if it
    /// is monotone.
    pub fn element_where(&self, pred: impl Fn(usize, &[usize]) -> bool) -> Option<Elem> {
        let mut m = 0u64;
        for (p, (k, x)) in self.points.iter().enumerate() {
            if pred(*k, x) {
                m |= 1 << p;
            }
        }
        self.element_of_mask(m)
    }
}

/// Builds the set algebra: Heyting operations (`star` = `meet`), `c_j`,
/// `q_j`, `s_τ` for `τ ∈ G` and, optionally, the diagonals `d_i_j`.
pub fn set_algebra(sys: &KripkeSystem, g: &SemigroupG, with_diagonals: bool) -> Result<SetAlgebra> {
    sys.validate()?;
    if g.alpha() != sys.alpha {
        return Err(Error::Invalid(format!(
            "G acts on {} indices, the system has dimension {}",
            g.alpha(),
            sys.alpha
        )));
    }
    let alpha = sys.alpha;
    let layout = Layout::of(sys);
    let np = layout.points.len();
    if np > budget::kripke_points() {
        return Err(Error::Resource(format!(
            "{np} points exceed the Kripke point budget {}",
            budget::kripke_points()
        )));
    }
    let point_index: HashMap<(usize, &[usize]), usize> = layout
        .points
        .iter()
        .enumerate()
        .map(|(p, (k, x))| ((*k, x.as_slice()), p))
        .collect();

    let mut sub: Vec<Vec<usize>> = Vec::with_capacity(g.maps().len());
    for tau in g.maps() {
        let mut row = Vec::with_capacity(np);
        for (k, x) in &layout.points {
            let xt = compose(x, tau);
            match point_index.get(&(*k, xt.as_slice())) {
                Some(&p) => row.push(p),
                None => {
                    return Err(Error::Closure {
                        world: sys.worlds[*k].clone(),
                        assignment: x.clone(),
                        tau: tau.clone(),
                    })
                }
            }
        }
        sub.push(row);
    }

    let mut total: usize = 1;
    let mut blocks: Vec<Vec<u64>> = Vec::new();
    for (x, ws) in &layout.by_assignment {
        let ups = upsets(&sys.leq, ws).ok_or_else(|| {
            Error::Resource(format!("assignment {x:?} lives in more than 20 worlds"))
        })?;
        total = total.saturating_mul(ups.len());
        if total > budget::kripke_elements() {
            return Err(Error::Resource(format!(
                "more than {} monotone elements",
                budget::kripke_elements()
            )));
        }
        let bits: Vec<u64> = ws.iter().map(|&k| 1u64 << point_index[&(k, x.as_slice())]).collect();
        blocks.push(
            ups.iter()
                .map(|&s| {
                    (0..ws.len())
                        .filter(|&a| s & (1 << a) != 0)
                        .fold(0u64, |m, a| m | bits[a])
                })
                .collect(),
        );
    }
    let mut masks = vec![0u64];
    for b in &blocks {
        masks = masks.iter().flat_map(|&m| b.iter().map(move |&u| m | u)).collect();
    }
    masks.sort_unstable();
    let n = masks.len();
    let index: HashMap<u64, Elem> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let look = |m: u64| -> Result<Elem> {
        index
            .get(&m)
            .copied()
            .ok_or_else(|| Error::Internal(format!("operation produced the non-monotone set {m:#x}")))
    };
    let all = if np == 64 { u64::MAX } else { (1u64 << np) - 1 };

    let up: Vec<u64> = layout
        .points
        .iter()
        .map(|(k, x)| {
            layout
                .points
                .iter()
                .enumerate()
                .filter(|(_, (l, y))| sys.leq[*k][*l] && y == x)
                .fold(0u64, |m, (q, _)| m | 1 << q)
        })
        .collect();
    let agree_off = |x: &[usize], y: &[usize], j: usize| (0..alpha).all(|i| i == j || x[i] == y[i]);
    let cyl_masks: Vec<Vec<u64>> = (0..alpha)
        .map(|j| {
            layout
                .points
                .iter()
                .map(|(k, x)| {
                    layout
                        .points
                        .iter()
                        .enumerate()
                        .filter(|(_, (l, y))| l == k && agree_off(x, y, j))
                        .fold(0u64, |m, (q, _)| m | 1 << q)
                })
                .collect()
        })
        .collect();
    let coq_masks: Vec<Vec<u64>> = (0..alpha)
        .map(|j| {
            layout
                .points
                .iter()
                .map(|(k, x)| {
                    layout
                        .points
                        .iter()
                        .enumerate()
                        .filter(|(_, (l, y))| sys.leq[*k][*l] && agree_off(x, y, j))
                        .fold(0u64, |m, (q, _)| m | 1 << q)
                })
                .collect()
        })
        .collect();

    let mut tables: IndexMap<String, Table> = IndexMap::new();
    let binary = |f: &dyn Fn(u64, u64) -> u64| -> Result<Table> {
        let mut t = Vec::with_capacity(n * n);
        for &a in &masks {
            for &b in &masks {
                t.push(look(f(a, b))?);
            }
        }
        Ok(Table::Binary(t))
    };
    let unary = |f: &dyn Fn(u64) -> u64| -> Result<Table> {
        Ok(Table::Unary(masks.iter().map(|&a| look(f(a))).collect::<Result<_>>()?))
    };
    let by_points = |pred: &dyn Fn(usize) -> bool| -> u64 {
        (0..np).filter(|&p| pred(p)).fold(0u64, |m, p| m | 1 << p)
    };
    tables.insert(JOIN.into(), binary(&|a, b| a | b)?);
    tables.insert(MEET.into(), binary(&|a, b| a & b)?);
    tables.insert(STAR.into(), binary(&|a, b| a & b)?);
    tables.insert(
        IMP.into(),
        binary(&|a, b| by_points(&|p| a & !b & up[p] == 0))?,
    );
    tables.insert(ZERO.into(), Table::Constant(look(0)?));
    tables.insert(ONE.into(), Table::Constant(look(all)?));
    for j in 0..alpha {
        let cm = &cyl_masks[j];
        tables.insert(cyl(j), unary(&|a| by_points(&|p| a & cm[p] != 0))?);
    }
    for j in 0..alpha {
        let qm = &coq_masks[j];
        tables.insert(cocyl(j), unary(&|a| by_points(&|p| qm[p] & !a == 0))?);
    }
    for (tau, row) in g.maps().iter().zip(&sub) {
        tables.insert(subst(tau), unary(&|a| by_points(&|p| a >> row[p] & 1 == 1))?);
    }
    if with_diagonals {
        for i in 0..alpha {
            for j in 0..alpha {
                let m = by_points(&|p| layout.points[p].1[i] == layout.points[p].1[j]);
                tables.insert(diag(i, j), Table::Constant(look(m)?));
            }
        }
    }
    let width = np.div_ceil(4).max(1);
    let labels = masks.iter().map(|m| format!("{m:0width$x}")).collect();
    let algebra = FiniteAlgebra::new(
        format!("Kripke({}w,a{alpha})", sys.worlds.len()),
        n,
        Some(labels),
        tables,
    )?;
    Ok(SetAlgebra {
        algebra,
        system: sys.clone(),
        g: g.clone(),
        points: layout.points,
        masks,
    })
}

/// `Δx`: indices `i` with `c_i x ≠ x`.
pub fn dimension_set(alg: &FiniteAlgebra, x: Elem) -> Result<Vec<usize>> {
    crate::spectra::pairs::dimension_set_of(alg, x)
}

/// Operation names indexed by `J` only, plus the unindexed ones.
fn reduct_ops(alg: &FiniteAlgebra, j: &[usize]) -> Vec<String> {
    let alpha = names::dimension(alg);
    let inj = |i: &usize| j.contains(i);
    alg.tables()
        .keys()
        .filter(|op| {
            if let Some(i) = names::parse_cyl(op) {
                return inj(&i);
            }
            if let Some(i) = op.strip_prefix("q_").and_then(|s| s.parse::<usize>().ok()) {
                return inj(&i);
            }
            if let Some(t) = names::parse_subst(op) {
                return t.len() == alpha
                    && (0..alpha).all(|i| if inj(&i) { inj(&t[i]) } else { t[i] == i });
            }
            if let Some(rest) = op.strip_prefix("d_") {
                let ix: Vec<Option<usize>> = rest.split('_').map(|s| s.parse().ok()).collect();
                return ix.iter().all(|i| i.is_some_and(|i| inj(&i)));
            }
            true
        })
        .cloned()
        .collect()
}

/// `Nr_J`: the elements with `Δx ⊆ J`, with the operations indexed by `J`.
/// Returns the reduct and its embedding; an error names the first
/// operation application that leaves the set.
pub fn neat_reduct(alg: &FiniteAlgebra, j: &[usize]) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    let alpha = names::dimension(alg);
    if let Some(&bad) = j.iter().find(|&&i| i >= alpha) {
        return Err(Error::Invalid(format!("index {bad} is outside the dimension {alpha}")));
    }
    let mut members = Vec::new();
    for x in 0..alg.size() {
        if dimension_set(alg, x)?.iter().all(|i| j.contains(i)) {
            members.push(x);
        }
    }
    let ops = reduct_ops(alg, j);
    let refs: Vec<&str> = ops.iter().map(|s| s.as_str()).collect();
    let reduct = alg.restrict_signature(&refs)?;
    let set = sets::from_elems(alg.size(), members);
    let mut js = j.to_vec();
    js.sort();
    structure::subalgebra(&reduct, &set, &format!("Nr[{}]({})", fmt_set(&js), alg.name()))
}

/// Bounds for [`random_kripke`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomBounds {
    pub worlds: usize,
    pub base: usize,
    pub alpha: usize,
    pub max_elements: usize,
}

impl RandomBounds {
    pub fn new(worlds: usize, base: usize, alpha: usize) -> Self {
        RandomBounds {
            worlds,
            base,
            alpha,
            max_elements: budget::kripke_elements(),
        }
    }
}

fn sample(rng: &mut ChaCha8Rng, b: &RandomBounds) -> KripkeSystem {
    let w = rng.gen_range(1..=b.worlds);
    let alpha = rng.gen_range(1..=b.alpha);
    let mut leq = vec![vec![false; w]; w];
    for (k, row) in leq.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            *cell = k == l || rng.gen_bool(0.35);
        }
    }
    for m in 0..w {
        for k in 0..w {
            for l in 0..w {
                if leq[k][m] && leq[m][l] {
                    leq[k][l] = true;
                }
            }
        }
    }
    let seeds: Vec<u32> = (0..w).map(|_| rng.gen_range(1..1u32 << b.base)).collect();
    let base: Vec<Vec<usize>> = (0..w)
        .map(|l| {
            let m = (0..w).filter(|&k| leq[k][l]).fold(0, |m, k| m | seeds[k]);
            (0..b.base).filter(|&e| m & (1 << e) != 0).collect()
        })
        .collect();
    let used: Vec<usize> = (0..b.base)
        .filter(|e| base.iter().any(|x: &Vec<usize>| x.contains(e)))
        .collect();
    let base = base
        .iter()
        .map(|x| x.iter().map(|e| used.iter().position(|u| u == e).unwrap_or(0)).collect())
        .collect();
    KripkeSystem {
        worlds: (0..w).map(|k| format!("w{k}")).collect(),
        leq,
        elements: used.iter().map(|e| format!("e{e}")).collect(),
        base,
        assignments: None,
        alpha,
    }
}

/// A seeded random system with full assignment spaces. Draws repeat until
/// the point and element budgets are met.
pub fn random_kripke(seed: u64, bounds: RandomBounds) -> Result<KripkeSystem> {
    if bounds.worlds == 0 || bounds.base == 0 || bounds.alpha == 0 || bounds.max_elements == 0 {
        return Err(Error::Invalid("random bounds must be positive".into()));
    }
    if bounds.base > 16 {
        return Err(Error::Invalid("at most 16 base elements".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let sys = sample(&mut rng, &bounds);
        if sys.point_count() <= budget::kripke_points()
            && sys.element_count().is_some_and(|c| c <= bounds.max_elements)
        {
            return Ok(sys);
        }
    }
}

// ---------------------------------------------------------------------------
// Verification

struct Ops<'a> {
    alpha: usize,
    r: Residuated<'a>,
    c: Vec<Unary<'a>>,
    q: Vec<Unary<'a>>,
    s: HashMap<Vec<usize>, Unary<'a>>,
    maps: Vec<Vec<usize>>,
}

impl<'a> Ops<'a> {
    fn of(alg: &'a FiniteAlgebra, g: &SemigroupG) -> Result<Self> {
        let alpha = names::dimension(alg);
        if g.alpha() != alpha {
            return Err(Error::Signature(format!(
                "G acts on {} indices, the algebra has {alpha} cylindrifiers",
                g.alpha()
            )));
        }
        let mut s = HashMap::new();
        for t in g.maps() {
            s.insert(t.clone(), alg.unary(&subst(t))?);
        }
        Ok(Ops {
            alpha,
            r: alg.residuated()?,
            c: (0..alpha).map(|i| alg.unary(&cyl(i))).collect::<Result<_>>()?,
            q: (0..alpha).map(|i| alg.unary(&cocyl(i))).collect::<Result<_>>()?,
            s,
            maps: g.maps().to_vec(),
        })
    }

    fn s(&self, t: &[usize]) -> Option<Unary<'a>> {
        self.s.get(t).copied()
    }
}

fn eq1<'a>(
    id: String,
    lhs: impl Fn(Elem) -> Elem + Send + Sync + 'a,
    rhs: impl Fn(Elem) -> Elem + Send + Sync + 'a,
) -> Law<'a> {
    Law::new(id, 1, move |v| lhs(v[0]) == rhs(v[0]))
}

fn endomorphism_laws<'a>(o: &Ops<'a>, prefix: &str) -> Vec<Law<'a>> {
    let mut laws = Vec::new();
    let r = o.r;
    for t in &o.maps {
        let s = o.s[t];
        let tag = fmt_map(t);
        laws.push(Law::new(format!("{prefix}-zero[tau={tag}]"), 0, move |_| s.apply(r.lat.zero) == r.lat.zero));
        laws.push(Law::new(format!("{prefix}-one[tau={tag}]"), 0, move |_| s.apply(r.lat.one) == r.lat.one));
        laws.push(Law::new(format!("{prefix}-join[tau={tag}]"), 2, move |v| {
            s.apply(r.lat.join(v[0], v[1])) == r.lat.join(s.apply(v[0]), s.apply(v[1]))
        }));
        laws.push(Law::new(format!("{prefix}-meet[tau={tag}]"), 2, move |v| {
            s.apply(r.lat.meet(v[0], v[1])) == r.lat.meet(s.apply(v[0]), s.apply(v[1]))
        }));
        laws.push(Law::new(format!("{prefix}-imp[tau={tag}]"), 2, move |v| {
            s.apply(r.imp(v[0], v[1])) == r.imp(s.apply(v[0]), s.apply(v[1]))
        }));
    }
    laws
}

/// The six laws of an existential quantifier `f` on a Heyting algebra.
fn exists_laws<'a>(r: Residuated<'a>, f: Arc<Vec<Elem>>, tag: &str) -> Vec<Law<'a>> {
    let mk = |id: &str, arity: usize, check: fn(&Residuated<'_>, &[Elem], &[Elem]) -> bool| {
        let f = Arc::clone(&f);
        Law::new(format!("exists-{id}[{tag}]"), arity, move |v| check(&r, &f, v))
    };
    vec![
        mk("1", 0, |r, f, _| f[r.lat.zero] == r.lat.zero),
        mk("2", 1, |r, f, v| r.lat.leq(v[0], f[v[0]])),
        mk("3", 2, |r, f, v| f[r.lat.meet(v[0], f[v[1]])] == r.lat.meet(f[v[0]], f[v[1]])),
        mk("4", 2, |r, f, v| {
            let w = r.imp(f[v[0]], f[v[1]]);
            f[w] == w
        }),
        mk("5", 2, |r, f, v| {
            let w = r.lat.join(f[v[0]], f[v[1]]);
            f[w] == w
        }),
        mk("6", 1, |_, f, v| f[f[v[0]]] == f[v[0]]),
    ]
}

/// The four laws of a universal quantifier `f` on a Heyting algebra.
fn forall_laws<'a>(r: Residuated<'a>, f: Arc<Vec<Elem>>, tag: &str) -> Vec<Law<'a>> {
    let mk = |id: &str, arity: usize, check: fn(&Residuated<'_>, &[Elem], &[Elem]) -> bool| {
        let f = Arc::clone(&f);
        Law::new(format!("forall-{id}[{tag}]"), arity, move |v| check(&r, &f, v))
    };
    vec![
        mk("1", 0, |r, f, _| f[r.lat.one] == r.lat.one),
        mk("2", 1, |r, f, v| r.lat.leq(f[v[0]], v[0])),
        mk("3", 2, |r, f, v| {
            r.lat.leq(f[r.imp(v[0], v[1])], r.imp(f[v[0]], f[v[1]]))
        }),
        mk("4", 1, |_, f, v| f[f[v[0]]] == f[v[0]]),
    ]
}

fn derived_laws<'a>(o: &Ops<'a>) -> Vec<Law<'a>> {
    let a = o.alpha;
    let r = o.r;
    let l = r.lat;
    let mut laws = Vec::new();
    for i in 0..a {
        let c = o.c[i];
        laws.push(Law::new(format!("1-extensive[i={i}]"), 1, move |v| l.leq(v[0], c.apply(v[0]))));
        laws.push(eq1(format!("1-idempotent[i={i}]"), move |x| c.apply(c.apply(x)), move |x| c.apply(x)));
        laws.push(Law::new(format!("1-additive[i={i}]"), 2, move |v| {
            c.apply(l.join(v[0], v[1])) == l.join(c.apply(v[0]), c.apply(v[1]))
        }));
        for j in i + 1..a {
            let d = o.c[j];
            laws.push(eq1(
                format!("1-commute[i={i},j={j}]"),
                move |x| c.apply(d.apply(x)),
                move |x| d.apply(c.apply(x)),
            ));
        }
    }
    laws.extend(endomorphism_laws(o, "2"));
    let id: Vec<usize> = (0..a).collect();
    if let Some(s) = o.s(&id) {
        laws.push(eq1("3-identity".into(), move |x| s.apply(x), |x| x));
    }
    for t in &o.maps {
        for sg in &o.maps {
            if let Some(ts) = o.s(&compose(t, sg)) {
                let (st, ss) = (o.s[t], o.s[sg]);
                laws.push(eq1(
                    format!("3-compose[tau={},sigma={}]", fmt_map(t), fmt_map(sg)),
                    move |x| st.apply(ss.apply(x)),
                    move |x| ts.apply(x),
                ));
            }
        }
    }
    for t in &o.maps {
        let st = o.s[t];
        for i in 0..a {
            let ci = o.c[i];
            let qi = o.q[i];
            for j in 0..a {
                let mut tij = t.clone();
                tij[i] = j;
                if let Some(sij) = o.s(&tij) {
                    laws.push(eq1(
                        format!("4[tau={},i={i},j={j}]", fmt_map(t)),
                        move |x| st.apply(ci.apply(x)),
                        move |x| sij.apply(ci.apply(x)),
                    ));
                }
                let pre: Vec<usize> = (0..a).filter(|&m| t[m] == j).collect();
                if pre == [i] {
                    let (cj, qj) = (o.c[j], o.q[j]);
                    let tag = format!("tau={},i={i},j={j}", fmt_map(t));
                    laws.push(eq1(
                        format!("5-c[{tag}]"),
                        move |x| st.apply(ci.apply(x)),
                        move |x| cj.apply(st.apply(x)),
                    ));
                    laws.push(eq1(
                        format!("5-q[{tag}]"),
                        move |x| st.apply(qi.apply(x)),
                        move |x| qj.apply(st.apply(x)),
                    ));
                }
            }
        }
    }
    for i in 0..a {
        for j in 0..a {
            let (ci, qi, cj, qj) = (o.c[i], o.q[i], o.c[j], o.q[j]);
            let (Some(sij), Some(sji)) = (o.s(&replacement(a, i, j)), o.s(&replacement(a, j, i)))
            else {
                continue;
            };
            let tag = format!("i={i},j={j}");
            if i != j {
                laws.push(eq1(format!("6-c[{tag}]"), move |x| ci.apply(sij.apply(x)), move |x| sij.apply(x)));
                laws.push(eq1(format!("6-q[{tag}]"), move |x| qi.apply(sij.apply(x)), move |x| sij.apply(x)));
            }
            laws.push(eq1(format!("7-c[{tag}]"), move |x| sij.apply(ci.apply(x)), move |x| ci.apply(x)));
            laws.push(eq1(format!("7-q[{tag}]"), move |x| sij.apply(qi.apply(x)), move |x| qi.apply(x)));
            for k in (0..a).filter(|&k| k != i && k != j) {
                let (ck, qk) = (o.c[k], o.q[k]);
                laws.push(eq1(
                    format!("8-c[{tag},k={k}]"),
                    move |x| sij.apply(ck.apply(x)),
                    move |x| ck.apply(sij.apply(x)),
                ));
                laws.push(eq1(
                    format!("8-q[{tag},k={k}]"),
                    move |x| sij.apply(qk.apply(x)),
                    move |x| qk.apply(sij.apply(x)),
                ));
            }
            laws.push(eq1(
                format!("9-c[{tag}]"),
                move |x| ci.apply(sji.apply(x)),
                move |x| cj.apply(sij.apply(x)),
            ));
            laws.push(eq1(
                format!("9-q[{tag}]"),
                move |x| qi.apply(sji.apply(x)),
                move |x| qj.apply(sij.apply(x)),
            ));
        }
    }
    laws
}

fn compose_ops(ops: &[Unary<'_>], j: &[usize], n: usize) -> Vec<Elem> {
    // Innermost operator is the largest index.
    (0..n)
        .map(|x| j.iter().rev().fold(x, |acc, &i| ops[i].apply(acc)))
        .collect()
}

fn subset(mask: usize, alpha: usize) -> Vec<usize> {
    (0..alpha).filter(|&i| mask & (1 << i) != 0).collect()
}

fn gpha_laws<'a>(alg: &'a FiniteAlgebra, o: &Ops<'a>) -> Result<Vec<Law<'a>>> {
    let a = o.alpha;
    let n = alg.size();
    let r = o.r;
    let mut laws: Vec<Law<'a>> = class_laws(alg, AlgebraClass::Heyting)?
        .into_iter()
        .map(|law| Law {
            id: format!("heyting-{}", law.id),
            ..law
        })
        .collect();
    laws.extend(endomorphism_laws(o, "endo"));
    for i in 0..a {
        for j in i + 1..a {
            let (ci, cj) = (o.c[i], o.c[j]);
            laws.push(eq1(
                format!("commute[i={i},j={j}]"),
                move |x| ci.apply(cj.apply(x)),
                move |x| cj.apply(ci.apply(x)),
            ));
        }
    }
    let subsets = 1usize << a;
    let cs: Vec<Arc<Vec<Elem>>> = (0..subsets)
        .map(|m| Arc::new(compose_ops(&o.c, &subset(m, a), n)))
        .collect();
    let qs: Vec<Arc<Vec<Elem>>> = (0..subsets)
        .map(|m| Arc::new(compose_ops(&o.q, &subset(m, a), n)))
        .collect();
    for m in 1..subsets {
        let tag = format!("J={}", fmt_set(&subset(m, a)));
        laws.extend(exists_laws(r, Arc::clone(&cs[m]), &tag));
        laws.extend(forall_laws(r, Arc::clone(&qs[m]), &tag));
    }
    let id: Vec<usize> = (0..a).collect();
    if let Some(s) = o.s(&id) {
        laws.push(eq1("gpha-1".into(), move |x| s.apply(x), |x| x));
    }
    for sg in &o.maps {
        for t in &o.maps {
            if let Some(st) = o.s(&compose(sg, t)) {
                let (ss, tt) = (o.s[sg], o.s[t]);
                laws.push(eq1(
                    format!("gpha-2[sigma={},tau={}]", fmt_map(sg), fmt_map(t)),
                    move |x| st.apply(x),
                    move |x| ss.apply(tt.apply(x)),
                ));
            }
        }
    }
    let tab = |v: &Arc<Vec<Elem>>| Arc::clone(v);
    for m in 0..subsets {
        for m2 in 0..subsets {
            let tag = format!("J={},J'={}", fmt_set(&subset(m, a)), fmt_set(&subset(m2, a)));
            let (u, f, g) = (tab(&cs[m | m2]), tab(&cs[m]), tab(&cs[m2]));
            laws.push(eq1(format!("gpha-3-c[{tag}]"), move |x| u[x], move |x| f[g[x]]));
            let (u, f, g) = (tab(&qs[m | m2]), tab(&qs[m]), tab(&qs[m2]));
            laws.push(eq1(format!("gpha-3-q[{tag}]"), move |x| u[x], move |x| f[g[x]]));
        }
    }
    for m in 0..subsets {
        let tag = format!("J={}", fmt_set(&subset(m, a)));
        let (c, q) = (tab(&cs[m]), tab(&qs[m]));
        let (c2, q2) = (tab(&cs[m]), tab(&qs[m]));
        laws.push(eq1(format!("gpha-4-c[{tag}]"), move |x| c[q[x]], move |x| q2[x]));
        let (c, q) = (tab(&cs[m]), tab(&qs[m]));
        laws.push(eq1(format!("gpha-4-q[{tag}]"), move |x| q[c[x]], move |x| c2[x]));
    }
    for m in 0..subsets {
        let j = subset(m, a);
        for (si, sg) in o.maps.iter().enumerate() {
            for t in &o.maps[si + 1..] {
                if (0..a).any(|i| !j.contains(&i) && sg[i] != t[i]) {
                    continue;
                }
                let tag = format!("J={},sigma={},tau={}", fmt_set(&j), fmt_map(sg), fmt_map(t));
                let (ss, st) = (o.s[sg], o.s[t]);
                let (c, c2) = (tab(&cs[m]), tab(&cs[m]));
                laws.push(eq1(format!("gpha-5-c[{tag}]"), move |x| ss.apply(c[x]), move |x| st.apply(c2[x])));
                let (q, q2) = (tab(&qs[m]), tab(&qs[m]));
                laws.push(eq1(format!("gpha-5-q[{tag}]"), move |x| ss.apply(q[x]), move |x| st.apply(q2[x])));
            }
        }
        for sg in &o.maps {
            let pre: Vec<usize> = (0..a).filter(|&i| j.contains(&sg[i])).collect();
            let injective = pre.iter().enumerate().all(|(x, &p)| pre[..x].iter().all(|&p2| sg[p2] != sg[p]));
            if !injective {
                continue;
            }
            let pm = pre.iter().fold(0, |acc, &p| acc | 1 << p);
            let tag = format!("J={},sigma={}", fmt_set(&j), fmt_map(sg));
            let ss = o.s[sg];
            let (c, c2) = (tab(&cs[m]), tab(&cs[pm]));
            laws.push(eq1(format!("gpha-6-c[{tag}]"), move |x| c[ss.apply(x)], move |x| ss.apply(c2[x])));
            let (q, q2) = (tab(&qs[m]), tab(&qs[pm]));
            laws.push(eq1(format!("gpha-6-q[{tag}]"), move |x| q[ss.apply(x)], move |x| ss.apply(q2[x])));
        }
    }
    if alg.has(&diag(0, 0)) {
        let d: Vec<Vec<Elem>> = (0..a)
            .map(|k| (0..a).map(|l| alg.constant(&diag(k, l))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let l = r.lat;
        for k in 0..a {
            let dkk = d[k][k];
            laws.push(Law::new(format!("gphae-1[k={k}]"), 0, move |_| dkk == l.one));
        }
        for t in &o.maps {
            let st = o.s[t];
            for k in 0..a {
                for m in 0..a {
                    let (dkm, dt) = (d[k][m], d[t[k]][t[m]]);
                    laws.push(Law::new(
                        format!("gphae-2[tau={},k={k},l={m}]", fmt_map(t)),
                        0,
                        move |_| st.apply(dkm) == dt,
                    ));
                }
            }
        }
        for k in 0..a {
            for m in 0..a {
                if let Some(s) = o.s(&replacement(a, k, m)) {
                    let dkm = d[k][m];
                    laws.push(Law::new(format!("gphae-3[k={k},l={m}]"), 1, move |v| {
                        l.leq(l.meet(v[0], dkm), s.apply(v[0]))
                    }));
                }
            }
        }
    }
    Ok(laws)
}

fn quantifier_laws<'a>(alg: &'a FiniteAlgebra, j: usize) -> Result<Vec<Law<'a>>> {
    let r = alg.residuated()?;
    let c = Arc::new(alg.unary(&cyl(j))?.entries().to_vec());
    let q = Arc::new(alg.unary(&cocyl(j))?.entries().to_vec());
    let tag = format!("j={j}");
    let mut laws = exists_laws(r, c, &tag);
    laws.extend(forall_laws(r, q, &tag));
    Ok(laws)
}

fn group_of(id: &str) -> &str {
    id.split('[').next().unwrap_or(id)
}

/// Runs every law and keeps the first failing instance of each group
/// (law ids without their bracketed index part).
fn grouped_report(suite: &str, n: usize, laws: &[Law<'_>]) -> AxiomReport {
    let full = run_laws(suite, n, laws);
    let mut seen: Vec<String> = Vec::new();
    let mut kept = Vec::new();
    for v in full.violations {
        let g = group_of(&v.axiom).to_string();
        if !seen.contains(&g) {
            seen.push(g);
            kept.push(v);
        }
    }
    AxiomReport::new(suite, kept)
}

/// Identities (1)–(9) for cylindrifiers, co-quantifiers and substitutions,
/// over every index and transformation instance the tables support.
pub fn verify_derived_identities(alg: &FiniteAlgebra) -> Result<AxiomReport> {
    let g = SemigroupG::from_algebra(alg)?;
    let o = Ops::of(alg, &g)?;
    Ok(grouped_report("derived", alg.size(), &derived_laws(&o)))
}

/// Heyting base, endomorphism laws for `s_τ`, quantifier laws for every
/// `c_(J)` and `q_(J)`, GPHA (1)–(6) and, with diagonals, GPHAE (1)–(3).
pub fn verify_gpha_axioms(alg: &FiniteAlgebra, g: &SemigroupG) -> Result<AxiomReport> {
    let o = Ops::of(alg, g)?;
    Ok(grouped_report("gpha", alg.size(), &gpha_laws(alg, &o)?))
}

/// The six existential laws for `c_j` and the four universal laws for `q_j`.
pub fn verify_heyting_quantifiers(alg: &FiniteAlgebra, j: usize) -> Result<AxiomReport> {
    let laws = quantifier_laws(alg, j)?;
    Ok(grouped_report(&format!("heyting-quantifiers[j={j}]"), alg.size(), &laws))
}

/// Every law checked by the three verifiers, nullary and unary first.
pub fn all_laws<'a>(alg: &'a FiniteAlgebra, g: &SemigroupG) -> Result<Vec<Law<'a>>> {
    let o = Ops::of(alg, g)?;
    let mut laws = gpha_laws(alg, &o)?;
    laws.extend(derived_laws(&o));
    for j in 0..o.alpha {
        laws.extend(quantifier_laws(alg, j)?);
    }
    laws.sort_by_key(|l| l.arity);
    Ok(laws)
}

/// First failing law instance, stopping early.
pub fn first_failure(alg: &FiniteAlgebra, g: &SemigroupG) -> Result<Option<Violation>> {
    let laws = all_laws(alg, g)?;
    Ok(first_violation(alg.size(), &laws))
}

/// A single changed table entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub op: String,
    pub index: usize,
    pub value: Elem,
}

/// Every `(op, index)` table position.
pub fn table_positions(alg: &FiniteAlgebra) -> Vec<(String, usize)> {
    let n = alg.size();
    alg.tables()
        .iter()
        .flat_map(|(op, t)| {
            let len = match t {
                Table::Constant(_) => 1,
                Table::Unary(_) => n,
                Table::Binary(_) => n * n,
            };
            (0..len).map(move |i| (op.clone(), i))
        })
        .collect()
}

pub fn entry(alg: &FiniteAlgebra, op: &str, index: usize) -> Option<Elem> {
    match alg.table(op)? {
        Table::Constant(c) => (index == 0).then_some(*c),
        Table::Unary(v) | Table::Binary(v) => v.get(index).copied(),
    }
}

pub fn inject(alg: &FiniteAlgebra, fault: &Fault) -> Result<FiniteAlgebra> {
    let mut out = alg.clone();
    out.set_entry(&fault.op, fault.index, fault.value)?;
    Ok(out)
}

/// `count` faults drawn uniformly over positions, each with a value
/// different from the current entry.
pub fn random_faults(alg: &FiniteAlgebra, seed: u64, count: usize) -> Vec<Fault> {
    let pos = table_positions(alg);
    let n = alg.size();
    if n < 2 || pos.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (op, index) = pos[rng.gen_range(0..pos.len())].clone();
            let cur = entry(alg, &op, index).unwrap_or(0);
            let mut value = rng.gen_range(0..n - 1);
            if value >= cur {
                value += 1;
            }
            Fault { op, index, value }
        })
        .collect()
}

/// The first fault in `faults` that no law detects.
pub fn undetected_fault(
    alg: &FiniteAlgebra,
    g: &SemigroupG,
    faults: impl IntoIterator<Item = Fault>,
) -> Result<Option<Fault>> {
    for f in faults {
        let bad = inject(alg, &f)?;
        if first_failure(&bad, g)?.is_none() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four() -> SetAlgebra {
        let sys = KripkeSystem::single(&["a", "b"], 2).unwrap();
        set_algebra(&sys, &SemigroupG::full(2).unwrap(), true).unwrap()
    }

    fn chain2() -> KripkeSystem {
        KripkeSystem {
            worlds: vec!["u".into(), "v".into()],
            leq: vec![vec![true, true], vec![false, true]],
            elements: vec!["a".into(), "b".into()],
            base: vec![vec![0], vec![0, 1]],
            assignments: None,
            alpha: 1,
        }
    }

    #[test]
    fn trivial_system_has_two_elements() {
        let sys = KripkeSystem::single(&["a"], 1).unwrap();
        let sa = set_algebra(&sys, &SemigroupG::full(1).unwrap(), false).unwrap();
        assert_eq!(sa.algebra.size(), 2);
        let c = sa.algebra.unary("c_0").unwrap();
        assert_eq!(c.entries(), &[0, 1]);
    }

    #[test]
    fn diagonal_of_four_assignment_instance() {
        let sa = four();
        assert_eq!(sa.algebra.size(), 16);
        let d = sa.algebra.constant("d_0_1").unwrap();
        let expect = sa.element_where(|_, x| x[0] == x[1]).unwrap();
        assert_eq!(d, expect);
        assert_eq!(sa.decode(d).values[0].iter().filter(|&&b| b).count(), 2);
        let top = sa.algebra.constant(ONE).unwrap();
        assert_eq!(sa.algebra.unary("c_0").unwrap().apply(d), top);
    }

    #[test]
    fn coquantifier_of_top_on_growing_worlds() {
        let sys = chain2();
        let sa = set_algebra(&sys, &SemigroupG::full(1).unwrap(), false).unwrap();
        let top = sa.algebra.constant(ONE).unwrap();
        assert_eq!(sa.algebra.unary("q_0").unwrap().apply(top), top);
        // Points: (u,a), (v,a), (v,b). Up-sets per assignment: a has 3, b has 2.
        assert_eq!(sa.algebra.size(), 6);
        assert_eq!(sys.element_count(), Some(6));
    }

    #[test]
    fn coquantifier_looks_at_later_worlds() {
        let sa = set_algebra(&chain2(), &SemigroupG::full(1).unwrap(), false).unwrap();
        // True at (u,a) and (v,a) only: at u, the later world v has b false.
        let a_only = sa.element_where(|_, x| x[0] == 0).unwrap();
        let q = sa.algebra.unary("q_0").unwrap().apply(a_only);
        assert_eq!(q, sa.algebra.constant(ZERO).unwrap());
        let c = sa.algebra.unary("c_0").unwrap().apply(a_only);
        assert_eq!(sa.decode(c).values, vec![vec![true], vec![true, true]]);
    }

    #[test]
    fn implication_is_intuitionistic() {
        let sa = set_algebra(&chain2(), &SemigroupG::full(1).unwrap(), false).unwrap();
        let alg = &sa.algebra;
        let zero = alg.constant(ZERO).unwrap();
        // The element true only at (v,a): its negation is false everywhere at a.
        let p = sa.element_where(|k, x| k == 1 && x[0] == 0).unwrap();
        let np = alg.binary(IMP).unwrap().apply(p, zero);
        assert_eq!(sa.decode(np).values, vec![vec![false], vec![false, true]]);
        let lem = alg.binary(JOIN).unwrap().apply(p, np);
        assert_ne!(lem, alg.constant(ONE).unwrap());
    }

    #[test]
    fn decode_encode_agree() {
        let sa = four();
        for e in 0..sa.algebra.size() {
            assert_eq!(sa.encode(&sa.decode(e)), Some(e));
        }
    }

    #[test]
    fn closure_error_names_world_and_tau() {
        let mut sys = KripkeSystem::single(&["a", "b"], 2).unwrap();
        sys.assignments = Some(vec![vec![vec![0, 1], vec![1, 0]]]);
        let err = set_algebra(&sys, &SemigroupG::full(2).unwrap(), false).unwrap_err();
        match err {
            Error::Closure { world, assignment, tau } => {
                assert_eq!(world, "w0");
                assert_eq!(assignment, vec![0, 1]);
                assert_eq!(tau, vec![0, 0]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn explicit_closed_assignments_are_accepted() {
        let mut sys = KripkeSystem::single(&["a", "b"], 2).unwrap();
        sys.assignments = Some(vec![vec![vec![0, 0], vec![1, 1]]]);
        let sa = set_algebra(&sys, &SemigroupG::full(2).unwrap(), true).unwrap();
        assert_eq!(sa.algebra.size(), 4);
        assert!(verify_derived_identities(&sa.algebra).unwrap().passed);
    }

    #[test]
    fn budget_is_enforced() {
        let sys = KripkeSystem::single(&["a", "b", "c"], 3).unwrap();
        let err = set_algebra(&sys, &SemigroupG::full(3).unwrap(), false).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn invalid_systems_are_rejected() {
        let mut sys = chain2();
        sys.base = vec![vec![0, 1], vec![0]];
        assert!(sys.validate().is_err());
        let mut sys = chain2();
        sys.leq[0][0] = false;
        assert!(sys.validate().is_err());
        let mut sys = chain2();
        sys.worlds.push("x".into());
        sys.leq = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        sys.base.push(vec![0, 1]);
        assert!(sys.validate().is_err());
    }

    #[test]
    fn semigroup_checks() {
        assert_eq!(SemigroupG::full(3).unwrap().maps().len(), 27);
        assert!(SemigroupG::new(2, vec![vec![0, 1]]).is_err());
        let g = SemigroupG::new(2, vec![vec![0, 1], vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(g.maps().len(), 3);
        assert_eq!(compose(&[1, 1, 0], &[2, 0, 0]), vec![0, 1, 1]);
    }

    #[test]
    fn all_suites_pass_on_small_instances() {
        for sa in [four(), set_algebra(&chain2(), &SemigroupG::full(1).unwrap(), true).unwrap()] {
            let alg = &sa.algebra;
            let d = verify_derived_identities(alg).unwrap();
            assert!(d.passed, "{:?}", d.violations);
            let g = verify_gpha_axioms(alg, &sa.g).unwrap();
            assert!(g.passed, "{:?}", g.violations);
            for j in 0..sa.system.alpha {
                assert!(verify_heyting_quantifiers(alg, j).unwrap().passed);
            }
        }
    }

    #[test]
    fn gpha_suite_covers_named_axioms() {
        let sa = four();
        let laws = all_laws(&sa.algebra, &sa.g).unwrap();
        for id in ["gpha-4-c[J=0.1]", "gphae-3[k=0,l=1]", "exists-4[j=0]", "gpha-1", "9-q[i=0,j=1]"] {
            assert!(laws.iter().any(|l| l.id == id), "missing {id}");
        }
    }

    #[test]
    fn corrupted_cylindrifier_fails_item_one() {
        let sa = four();
        let top = sa.algebra.constant(ONE).unwrap();
        let bad = inject(
            &sa.algebra,
            &Fault {
                op: "c_0".into(),
                index: top,
                value: 0,
            },
        )
        .unwrap();
        let r = verify_derived_identities(&bad).unwrap();
        let v = r.violation("1-extensive[i=0]").expect("item 1 fails");
        assert_eq!(v.witness, vec![top]);
    }

    #[test]
    fn dimension_sets() {
        let sa = four();
        let alg = &sa.algebra;
        let (zero, one) = (alg.constant(ZERO).unwrap(), alg.constant(ONE).unwrap());
        assert!(dimension_set(alg, zero).unwrap().is_empty());
        assert!(dimension_set(alg, one).unwrap().is_empty());
        let d = alg.constant("d_0_1").unwrap();
        assert_eq!(dimension_set(alg, d).unwrap(), vec![0, 1]);
        let c0 = alg.unary("c_0").unwrap();
        for x in 0..alg.size() {
            assert!(!dimension_set(alg, c0.apply(x)).unwrap().contains(&0));
        }
    }

    #[test]
    fn neat_reducts() {
        let sa = four();
        let alg = &sa.algebra;
        let (full, emb) = neat_reduct(alg, &[0, 1]).unwrap();
        assert_eq!(full.size(), alg.size());
        assert_eq!(emb, (0..alg.size()).collect::<Vec<_>>());
        let (nr0, emb0) = neat_reduct(alg, &[0]).unwrap();
        // Elements not depending on coordinate 1: subsets of {a,b} lifted.
        assert_eq!(nr0.size(), 4);
        assert!(nr0.has("c_0") && !nr0.has("c_1") && !nr0.has("d_0_1"));
        assert!(nr0.has("s_0.1") && !nr0.has("s_1.1"));
        for &x in &emb0 {
            assert!(!dimension_set(alg, x).unwrap().contains(&1));
        }
        let (zd, _) = neat_reduct(alg, &[]).unwrap();
        assert_eq!(zd.size(), 2);
    }

    #[test]
    fn random_systems_are_reproducible_and_bounded() {
        let b = RandomBounds::new(3, 3, 3);
        let s1 = random_kripke(7, b).unwrap();
        assert_eq!(s1, random_kripke(7, b).unwrap());
        assert!(s1.element_count().unwrap() <= b.max_elements);
        let t = random_kripke(3, RandomBounds::new(1, 1, 1)).unwrap();
        assert_eq!(t.worlds.len(), 1);
        assert_eq!(t.alpha, 1);
        assert_eq!(t.base, vec![vec![0]]);
        assert!(random_kripke(1, RandomBounds::new(0, 1, 1)).is_err());
    }

    #[test]
    fn json_round_trip_with_explicit_assignments() {
        let text = r#"{"worlds":["u","v"],"leq":[[true,true],[false,true]],
            "base":{"u":["a"],"v":["b","a"]},
            "assignments":{"u":[[0]],"v":[[0],[1]]},"alpha":1}"#;
        let sys = KripkeSystem::from_json(text).unwrap();
        assert_eq!(sys.elements, vec!["a", "b"]);
        assert_eq!(sys.assignment_set(1), vec![vec![0], vec![1]]);
        assert_eq!(KripkeSystem::from_json(&sys.to_json()).unwrap(), sys);
        let bad = text.replace(r#""v":[[0],[1]]"#, r#""v":[[0]]"#);
        assert!(KripkeSystem::from_json(&bad).is_err());
    }
}
