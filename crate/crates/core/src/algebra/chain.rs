//! Finite Łukasiewicz and Gödel chains on the grid `0, 1/(n-1), ..., 1`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::names::*;
use super::rational::{residuum_closed_form, tnorm_eval, Rational, TNorm};
use super::{FiniteAlgebra, Table};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Lukasiewicz,
    Godel,
}

impl ChainKind {
    pub fn tnorm(self) -> TNorm {
        match self {
            ChainKind::Lukasiewicz => TNorm::Lukasiewicz,
            ChainKind::Godel => TNorm::Godel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainSpec {
    pub kind: ChainKind,
    pub size: usize,
}

impl ChainSpec {
    pub fn luk(size: usize) -> Self {
        ChainSpec {
            kind: ChainKind::Lukasiewicz,
            size,
        }
    }

    pub fn godel(size: usize) -> Self {
        ChainSpec {
            kind: ChainKind::Godel,
            size,
        }
    }

    /// Value of element `i`.
    pub fn value(&self, i: usize) -> Rational {
        Rational::new(i as i64, (self.size - 1) as i64)
    }

    fn index_of(&self, v: Rational) -> Result<usize> {
        let scaled = v * Rational::from_integer((self.size - 1) as i64);
        if !scaled.is_integer() {
            return Err(Error::Internal(format!("{v} is off the grid of {self}")));
        }
        Ok(scaled.to_integer() as usize)
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            ChainKind::Lukasiewicz => "luk",
            ChainKind::Godel => "godel",
        };
        write!(f, "{k}:{}", self.size)
    }
}

impl FromStr for ChainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, n) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected kind:size, got {s:?}")))?;
        let size: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad chain size in {s:?}")))?;
        let kind = match k.trim() {
            "luk" | "lukasiewicz" => ChainKind::Lukasiewicz,
            "godel" => ChainKind::Godel,
            other => return Err(Error::InvalidSpec(format!("unknown chain kind {other:?}"))),
        };
        Ok(ChainSpec { kind, size })
    }
}

/// Parses a comma list where each item is `kind:N` or `kind:A..B`.
pub fn parse_chain_list(s: &str) -> Result<Vec<ChainSpec>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((head, hi)) => {
                let first: ChainSpec = head.parse()?;
                let hi: usize = hi
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad range {item:?}")))?;
                for size in first.size..=hi {
                    out.push(ChainSpec {
                        kind: first.kind,
                        size,
                    });
                }
            }
            None => out.push(item.parse()?),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidSpec("empty chain list".into()));
    }
    Ok(out)
}

fn binary_table(spec: &ChainSpec, f: impl Fn(Rational, Rational) -> Result<Rational>) -> Result<Table> {
    let n = spec.size;
    let mut t = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            t.push(spec.index_of(f(spec.value(i), spec.value(j))?)?);
        }
    }
    Ok(Table::Binary(t))
}

pub fn make_chain(spec: ChainSpec) -> Result<FiniteAlgebra> {
    if spec.size < 2 {
        return Err(Error::InvalidSpec(format!(
            "chain size must be at least 2, got {}",
            spec.size
        )));
    }
    let n = spec.size;
    let kind = spec.kind.tnorm();
    let one = Rational::from_integer(1);
    let mut t = IndexMap::new();
    t.insert(JOIN.to_string(), binary_table(&spec, |x, y| Ok(x.max(y)))?);
    t.insert(MEET.to_string(), binary_table(&spec, |x, y| Ok(x.min(y)))?);
    t.insert(STAR.to_string(), binary_table(&spec, |x, y| tnorm_eval(kind, x, y))?);
    t.insert(
        IMP.to_string(),
        binary_table(&spec, |x, y| residuum_closed_form(kind, x, y))?,
    );
    t.insert(ZERO.to_string(), Table::Constant(0));
    t.insert(ONE.to_string(), Table::Constant(n - 1));
    if spec.kind == ChainKind::Lukasiewicz {
        t.insert(OPLUS.to_string(), binary_table(&spec, |x, y| Ok((x + y).min(one)))?);
        t.insert(ODOT.to_string(), binary_table(&spec, |x, y| tnorm_eval(kind, x, y))?);
        t.insert(
            NEG.to_string(),
            Table::Unary((0..n).map(|i| n - 1 - i).collect()),
        );
    }
    let labels = (0..n).map(|i| spec.value(i).to_string()).collect();
    FiniteAlgebra::new(spec.to_string(), n, Some(labels), t)
}

/// The bounded chain `0 < 1 < ... < n-1` as a plain lattice.
pub fn make_lattice_chain(n: usize) -> Result<FiniteAlgebra> {
    if n < 1 {
        return Err(Error::InvalidSpec("lattice chain needs an element".into()));
    }
    let mut t = IndexMap::new();
    let mut join = Vec::with_capacity(n * n);
    let mut meet = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            join.push(i.max(j));
            meet.push(i.min(j));
        }
    }
    t.insert(JOIN.to_string(), Table::Binary(join));
    t.insert(MEET.to_string(), Table::Binary(meet));
    t.insert(ZERO.to_string(), Table::Constant(0));
    t.insert(ONE.to_string(), Table::Constant(n - 1));
    FiniteAlgebra::new(format!("lattice:{n}"), n, None, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::residuum_oracle;

    #[test]
    fn size_one_rejected() {
        assert!(matches!(
            make_chain(ChainSpec::luk(1)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn small_values() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        assert_eq!(l3.apply("star", &[1, 1]).unwrap(), 0);
        assert_eq!(g3.apply("star", &[1, 1]).unwrap(), 1);
        assert_eq!(l3.labels().unwrap(), ["0", "1/2", "1"]);
        assert!(!g3.has("oplus"));
        assert!(l3.has("neg"));
    }

    #[test]
    fn two_element_chains_coincide() {
        let a = make_chain(ChainSpec::luk(2)).unwrap();
        let b = make_chain(ChainSpec::godel(2)).unwrap();
        for op in ["join", "meet", "star", "imp"] {
            assert_eq!(a.table(op), b.table(op));
        }
        assert_eq!(a.table("star"), a.table("meet"));
    }

    #[test]
    fn oracle_examples() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        let s = l3.binary("star").unwrap();
        assert_eq!(residuum_oracle(s, 3, 1, 0).unwrap(), 1);
        assert_eq!(residuum_oracle(s, 3, 0, 0).unwrap(), 2);
        let s = g3.binary("star").unwrap();
        assert_eq!(residuum_oracle(s, 3, 2, 1).unwrap(), 1);
    }

    #[test]
    fn imp_matches_oracle() {
        for spec in [ChainSpec::luk(6), ChainSpec::godel(5)] {
            let a = make_chain(spec).unwrap();
            let star = a.binary("star").unwrap();
            let imp = a.binary("imp").unwrap();
            for x in 0..spec.size {
                for y in 0..spec.size {
                    assert_eq!(imp.apply(x, y), residuum_oracle(star, spec.size, x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn chain_lists() {
        let v = parse_chain_list("luk:2..4, godel:3").unwrap();
        let names: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["luk:2", "luk:3", "luk:4", "godel:3"]);
        assert!(parse_chain_list("prod:3").is_err());
        assert!(parse_chain_list("").is_err());
    }
}
