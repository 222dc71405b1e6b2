//! JSON encoding of algebras.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FiniteAlgebra, Table};
use crate::error::{Error, Result};

pub const FORMAT: &str = "reslat/1";

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OpJson {
    Constant(usize),
    Unary(Vec<usize>),
    Binary(Vec<Vec<usize>>),
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    name: String,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    ops: IndexMap<String, OpJson>,
}

/// Accepts a missing format tag or the current one.
pub fn check_format(tag: Option<&str>) -> Result<()> {
    match tag {
        None => Ok(()),
        Some(FORMAT) => Ok(()),
        Some(other) => Err(Error::InvalidSpec(format!(
            "unsupported format {other:?}, expected {FORMAT:?}"
        ))),
    }
}

pub fn algebra_from_value(v: Value) -> Result<FiniteAlgebra> {
    let f: AlgebraFile = serde_json::from_value(v)?;
    check_format(f.format.as_deref())?;
    let n = f.size;
    let mut tables = IndexMap::new();
    for (op, t) in f.ops {
        let t = match t {
            OpJson::Constant(c) => Table::Constant(c),
            OpJson::Unary(v) => Table::Unary(v),
            OpJson::Binary(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidSpec(format!("op {op}: matrix must be {n}x{n}")));
                }
                Table::Binary(rows.into_iter().flatten().collect())
            }
        };
        tables.insert(op, t);
    }
    FiniteAlgebra::new(f.name, n, f.labels, tables)
}

pub fn algebra_from_str(s: &str) -> Result<FiniteAlgebra> {
    algebra_from_value(serde_json::from_str(s)?)
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    algebra_from_str(&std::fs::read_to_string(path)?)
}

pub fn algebra_to_value(alg: &FiniteAlgebra) -> Value {
    let n = alg.size();
    let ops = alg
        .tables()
        .iter()
        .map(|(op, t)| {
            let j = match t {
                Table::Constant(c) => OpJson::Constant(*c),
                Table::Unary(v) => OpJson::Unary(v.clone()),
                Table::Binary(v) => OpJson::Binary(v.chunks(n).map(<[usize]>::to_vec).collect()),
            };
            (op.clone(), j)
        })
        .collect();
    let f = AlgebraFile {
        format: Some(FORMAT.to_string()),
        name: alg.name().to_string(),
        size: n,
        labels: alg.labels().map(<[String]>::to_vec),
        ops,
    };
    serde_json::to_value(f).expect("algebra encodes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};

    #[test]
    fn round_trip_keeps_unknown_ops() {
        let a = make_chain(ChainSpec::luk(3))
            .unwrap()
            .with_table("box", Table::Unary(vec![0, 0, 2]))
            .unwrap();
        let back = algebra_from_value(algebra_to_value(&a)).unwrap();
        assert_eq!(back, a);
        assert!(back.has("box"));
    }

    #[test]
    fn rejects_foreign_format_and_bad_shapes() {
        let bad = r#"{"format":"other/2","name":"x","size":1,"ops":{}}"#;
        assert!(algebra_from_str(bad).is_err());
        let ragged = r#"{"name":"x","size":2,"ops":{"join":[[0,1],[1]]}}"#;
        assert!(algebra_from_str(ragged).is_err());
        let ok = r#"{"name":"x","size":2,"ops":{"join":[[0,1],[1,1]],"zero":0,"neg":[1,0]}}"#;
        let a = algebra_from_str(ok).unwrap();
        assert_eq!(a.apply("join", &[0, 1]).unwrap(), 1);
        assert_eq!(a.constant("zero").unwrap(), 0);
    }
}
