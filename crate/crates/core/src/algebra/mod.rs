//! Finite algebras stored as operation tables.
//!
//! The universe of an algebra of size `n` is `0..n`. Every operation is a
//! constant, a unary array, or a row-major binary matrix. Lattice order is
//! derived from `meet`: `a <= b` iff `meet(a, b) == a`.

pub mod axioms;
pub mod chain;
pub mod congruence;
pub mod io;
pub mod names;
pub mod rational;
pub mod sets;
pub mod structure;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sets::ElemSet;

/// An element of a finite algebra, given by its index.
pub type Elem = usize;

/// One operation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Table {
    Constant(Elem),
    Unary(Vec<Elem>),
    /// Row-major: entry `(x, y)` sits at `x * n + y`.
    Binary(Vec<Elem>),
}

impl Table {
    pub fn arity(&self) -> u8 {
        match self {
            Table::Constant(_) => 0,
            Table::Unary(_) => 1,
            Table::Binary(_) => 2,
        }
    }

    fn validate(&self, op: &str, n: usize) -> Result<()> {
        let (entries, expected): (&[Elem], usize) = match self {
            Table::Constant(c) => (std::slice::from_ref(c), 1),
            Table::Unary(t) => (t, n),
            Table::Binary(t) => (t, n * n),
        };
        if entries.len() != expected {
            return Err(Error::InvalidSpec(format!(
                "op {op}: table has {} entries, expected {expected}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= n) {
            return Err(Error::InvalidSpec(format!(
                "op {op}: entry {bad} is not an element of a {n}-element universe"
            )));
        }
        Ok(())
    }
}

/// Operation names with arities, in table order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub ops: Vec<(String, u8)>,
}

impl Signature {
    pub fn arity(&self, name: &str) -> Option<u8> {
        self.ops.iter().find(|(n, _)| n == name).map(|&(_, a)| a)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    /// Same names with the same arities, ignoring order.
    pub fn same_as(&self, other: &Signature) -> bool {
        self.ops.len() == other.ops.len()
            && self.ops.iter().all(|(n, a)| other.arity(n) == Some(*a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    labels: Option<Vec<String>>,
    tables: IndexMap<String, Table>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        labels: Option<Vec<String>>,
        tables: IndexMap<String, Table>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSpec("size must be positive".into()));
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::InvalidSpec(format!(
                    "{} labels for {size} elements",
                    l.len()
                )));
            }
        }
        for (op, t) in &tables {
            t.validate(op, size)?;
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            labels,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `e`, falling back to its index.
    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    /// Looks an element up by label, then by decimal index.
    pub fn element(&self, label: &str) -> Option<Elem> {
        if let Some(l) = &self.labels {
            if let Some(i) = l.iter().position(|s| s == label) {
                return Some(i);
            }
        }
        label.parse::<usize>().ok().filter(|&i| i < self.size)
    }

    pub fn tables(&self) -> &IndexMap<String, Table> {
        &self.tables
    }

    pub fn table(&self, op: &str) -> Option<&Table> {
        self.tables.get(op)
    }

    pub fn has(&self, op: &str) -> bool {
        self.tables.contains_key(op)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            ops: self
                .tables
                .iter()
                .map(|(n, t)| (n.clone(), t.arity()))
                .collect(),
        }
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.size {
                return Err(Error::InvalidSpec("label count mismatch".into()));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Adds or replaces one table.
    pub fn with_table(mut self, op: impl Into<String>, table: Table) -> Result<Self> {
        let op = op.into();
        table.validate(&op, self.size)?;
        self.tables.insert(op, table);
        Ok(self)
    }

    pub fn without_table(mut self, op: &str) -> Self {
        self.tables.shift_remove(op);
        self
    }

    /// Keeps only the listed tables, in the listed order.
    pub fn restrict_signature(&self, ops: &[&str]) -> Result<Self> {
        let mut tables = IndexMap::new();
        for &op in ops {
            let t = self
                .tables
                .get(op)
                .ok_or_else(|| Error::Signature(format!("{}: no table for {op}", self.name)))?;
            tables.insert(op.to_string(), t.clone());
        }
        FiniteAlgebra::new(self.name.clone(), self.size, self.labels.clone(), tables)
    }

    /// Overwrites one table entry. `index` is the flat position. Used for
    /// fault injection; the result is still a well-formed table.
    pub fn set_entry(&mut self, op: &str, index: usize, value: Elem) -> Result<()> {
        if value >= self.size {
            return Err(Error::Invalid(format!("{value} is not an element")));
        }
        let t = self
            .tables
            .get_mut(op)
            .ok_or_else(|| Error::Signature(format!("no table for {op}")))?;
        match t {
            Table::Constant(c) if index == 0 => *c = value,
            Table::Unary(v) | Table::Binary(v) if index < v.len() => v[index] = value,
            _ => return Err(Error::Invalid(format!("{op}: no entry {index}"))),
        }
        Ok(())
    }

    pub fn constant(&self, op: &str) -> Result<Elem> {
        match self.tables.get(op) {
            Some(Table::Constant(c)) => Ok(*c),
            Some(_) => Err(Error::Signature(format!("{op} is not a constant"))),
            None => Err(self.missing(op)),
        }
    }

    pub fn unary(&self, op: &str) -> Result<Unary<'_>> {
        match self.tables.get(op) {
            Some(Table::Unary(t)) => Ok(Unary { t }),
            Some(_) => Err(Error::Signature(format!("{op} is not unary"))),
            None => Err(self.missing(op)),
        }
    }

    pub fn binary(&self, op: &str) -> Result<Binary<'_>> {
        match self.tables.get(op) {
            Some(Table::Binary(t)) => Ok(Binary { n: self.size, t }),
            Some(_) => Err(Error::Signature(format!("{op} is not binary"))),
            None => Err(self.missing(op)),
        }
    }

    fn missing(&self, op: &str) -> Error {
        Error::Signature(format!("{}: no table for {op}", self.name))
    }

    pub fn lattice(&self) -> Result<Lattice<'_>> {
        Ok(Lattice {
            n: self.size,
            join: self.binary(names::JOIN)?,
            meet: self.binary(names::MEET)?,
            zero: self.constant(names::ZERO)?,
            one: self.constant(names::ONE)?,
        })
    }

    pub fn residuated(&self) -> Result<Residuated<'_>> {
        Ok(Residuated {
            lat: self.lattice()?,
            star: self.binary(names::STAR)?,
            imp: self.binary(names::IMP)?,
        })
    }

    /// Applies any table to an argument list of matching length.
    pub fn apply(&self, op: &str, args: &[Elem]) -> Result<Elem> {
        let t = self.tables.get(op).ok_or_else(|| self.missing(op))?;
        Ok(apply_table(t, self.size, args))
    }
}

pub(crate) fn apply_table(t: &Table, n: usize, args: &[Elem]) -> Elem {
    match t {
        Table::Constant(c) => *c,
        Table::Unary(v) => v[args[0]],
        Table::Binary(v) => v[args[0] * n + args[1]],
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Unary<'a> {
    t: &'a [Elem],
}

impl<'a> Unary<'a> {
    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.t[x]
    }

    pub fn entries(&self) -> &'a [Elem] {
        self.t
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Binary<'a> {
    n: usize,
    t: &'a [Elem],
}

impl<'a> Binary<'a> {
    #[inline]
    pub fn apply(&self, x: Elem, y: Elem) -> Elem {
        self.t[x * self.n + y]
    }

    pub fn entries(&self) -> &'a [Elem] {
        self.t
    }
}

/// Bounded lattice reduct.
#[derive(Clone, Copy, Debug)]
pub struct Lattice<'a> {
    pub n: usize,
    pub join: Binary<'a>,
    pub meet: Binary<'a>,
    pub zero: Elem,
    pub one: Elem,
}

impl Lattice<'_> {
    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.meet.apply(a, b) == a
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join.apply(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet.apply(a, b)
    }

    /// Join of a finite family; the empty join is `zero`.
    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.zero, |acc, x| self.join(acc, x))
    }

    /// Meet of a finite family; the empty meet is `one`.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.one, |acc, x| self.meet(acc, x))
    }

    pub fn down_set(&self, b: Elem) -> Vec<Elem> {
        (0..self.n).filter(|&x| self.leq(x, b)).collect()
    }

    pub fn up_set(&self, a: Elem) -> Vec<Elem> {
        (0..self.n).filter(|&x| self.leq(a, x)).collect()
    }

    /// Elements `x` with `x ∧ b = 0` and `x ∨ b = 1`.
    pub fn complements(&self, b: Elem) -> Vec<Elem> {
        (0..self.n)
            .filter(|&x| self.meet(x, b) == self.zero && self.join(x, b) == self.one)
            .collect()
    }
}

/// Residuated lattice reduct.
#[derive(Clone, Copy, Debug)]
pub struct Residuated<'a> {
    pub lat: Lattice<'a>,
    pub star: Binary<'a>,
    pub imp: Binary<'a>,
}

impl Residuated<'_> {
    #[inline]
    pub fn star(&self, a: Elem, b: Elem) -> Elem {
        self.star.apply(a, b)
    }

    #[inline]
    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp.apply(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.imp(a, self.lat.zero)
    }
}
