//! Propositional front end: formulas, evaluation over finite chains,
//! semantic consequence, Lindenbaum algebras, type spaces and the
//! generic-filter engine.
//!
//! Consequence is semantic over a declared family of finite chains. It is
//! sound for any calculus whose theorems hold in those chains, but it is not
//! a derivability check: a formula valid in the listed chains need not be
//! provable.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::chain::{make_chain, ChainSpec};
use crate::algebra::io::check_format;
use crate::algebra::names::{IMP, JOIN, MEET, ONE, STAR, ZERO};
use crate::algebra::sets;
use crate::algebra::{Elem, FiniteAlgebra, Table};
use crate::budget;
use crate::error::{Error, Result};
use crate::spectra::filters::{enumerate_filters, principal_generator, FilterKind};
use crate::spectra::topology::PointSet;
use crate::spectra::zariski::SpectrumSpace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Zero,
    One,
    Strong(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connective {
    Strong,
    Imp,
    And,
    Or,
    Iff,
    Not,
}

impl Connective {
    pub const BINARY: [Connective; 5] = [Connective::Strong, Connective::Imp, Connective::And, Connective::Or, Connective::Iff];

    fn symbol(self) -> &'static str {
        match self {
            Connective::Strong => "&",
            Connective::Imp => "->",
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Iff => "<->",
            Connective::Not => "~",
        }
    }

    fn build(self, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match self {
            Connective::Strong => Formula::Strong(a, b),
            Connective::Imp => Formula::Imp(a, b),
            Connective::And => Formula::And(a, b),
            Connective::Or => Formula::Or(a, b),
            Connective::Iff => Formula::Iff(a, b),
            Connective::Not => Formula::Not(a),
        }
    }
}

/// Sort key for variable names: `p<digits>` by number, then the rest by name.
fn var_key(name: &str) -> (u8, u64, String) {
    match name.strip_prefix('p').and_then(|d| d.parse::<u64>().ok()) {
        Some(n) if name[1..].bytes().all(|b| b.is_ascii_digit()) => (0, n, String::new()),
        _ => (1, 0, name.to_string()),
    }
}

pub fn var(name: impl Into<String>) -> Formula {
    Formula::Var(name.into())
}

impl Formula {
    fn split(&self) -> Option<(Connective, &Formula, Option<&Formula>)> {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One => None,
            Formula::Strong(a, b) => Some((Connective::Strong, a, Some(b))),
            Formula::Imp(a, b) => Some((Connective::Imp, a, Some(b))),
            Formula::And(a, b) => Some((Connective::And, a, Some(b))),
            Formula::Or(a, b) => Some((Connective::Or, a, Some(b))),
            Formula::Iff(a, b) => Some((Connective::Iff, a, Some(b))),
            Formula::Not(a) => Some((Connective::Not, a, None)),
        }
    }

    /// Variables in canonical order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort_by_key(|v| var_key(v));
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self.split() {
            None => {
                if let Formula::Var(v) = self {
                    out.push(v.clone());
                }
            }
            Some((_, a, b)) => {
                a.collect_vars(out);
                if let Some(b) = b {
                    b.collect_vars(out);
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self.split() {
            None => 0,
            Some((_, a, b)) => 1 + a.depth().max(b.map_or(0, Formula::depth)),
        }
    }

    /// Rewrites `∧`, `∨`, `¬`, `↔` into `&`, `→`, `0`.
    pub fn expand(&self) -> Formula {
        use Formula::*;
        match self {
            Var(_) | Zero | One => self.clone(),
            Strong(a, b) => Strong(Box::new(a.expand()), Box::new(b.expand())),
            Imp(a, b) => Imp(Box::new(a.expand()), Box::new(b.expand())),
            And(a, b) => expand_and(a.expand(), b.expand()),
            Or(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                let left = imp(imp(a.clone(), b.clone()), b.clone());
                let right = imp(imp(b, a.clone()), a);
                expand_and(left, right)
            }
            Iff(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Strong(Box::new(imp(a.clone(), b.clone())), Box::new(imp(b, a)))
            }
            Not(a) => imp(a.expand(), Zero),
        }
    }

    /// Only `&`, `→`, constants and variables occur.
    pub fn is_expanded(&self) -> bool {
        match self.split() {
            None => true,
            Some((Connective::Strong | Connective::Imp, a, Some(b))) => a.is_expanded() && b.is_expanded(),
            Some(_) => false,
        }
    }
}

fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Imp(Box::new(a), Box::new(b))
}

fn expand_and(a: Formula, b: Formula) -> Formula {
    Formula::Strong(Box::new(a.clone()), Box::new(imp(a, b)))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match x.split() {
                None | Some((Connective::Not, _, _)) => write!(f, "{x}"),
                Some(_) => write!(f, "({x})"),
            }
        }
        match self.split() {
            None => match self {
                Formula::Var(v) => write!(f, "{v}"),
                Formula::Zero => write!(f, "0"),
                _ => write!(f, "1"),
            },
            Some((Connective::Not, a, _)) => {
                write!(f, "~")?;
                operand(a, f)
            }
            Some((c, a, Some(b))) => {
                operand(a, f)?;
                write!(f, " {} ", c.symbol())?;
                operand(b, f)
            }
            Some(_) => unreachable!("binary connective without a right operand"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Zero,
    One,
    Imp,
    Iff,
    Strong,
    And,
    Or,
    Not,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if rest.starts_with("<->") {
            (Token::Iff, 3)
        } else if rest.starts_with("->") {
            (Token::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Token::And, 2)
        } else if rest.starts_with("\\/") {
            (Token::Or, 2)
        } else if c == b'&' {
            (Token::Strong, 1)
        } else if c == b'~' {
            (Token::Not, 1)
        } else if c == b'(' {
            (Token::Open, 1)
        } else if c == b')' {
            (Token::Close, 1)
        } else if c.is_ascii_alphanumeric() || c == b'_' {
            let len = bytes[i..]
                .iter()
                .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                .count();
            let word = &text[i..i + len];
            let tok = match word {
                "0" => Token::Zero,
                "1" => Token::One,
                w if w.as_bytes()[0].is_ascii_digit() => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("identifier {w:?} starts with a digit"),
                    })
                }
                w => Token::Ident(w.to_string()),
            };
            (tok, len)
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {:?}", c as char),
            });
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if self.eat(&Token::Imp) {
            Ok(imp(left, self.imp()?))
        } else if self.eat(&Token::Iff) {
            Ok(Formula::Iff(Box::new(left), Box::new(self.imp()?)))
        } else {
            Ok(left)
        }
    }

    fn chain(
        &mut self,
        tok: Token,
        next: fn(&mut Self) -> Result<Formula>,
        build: fn(Box<Formula>, Box<Formula>) -> Formula,
    ) -> Result<Formula> {
        let mut left = next(self)?;
        while self.eat(&tok) {
            left = build(Box::new(left), Box::new(next(self)?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        self.chain(Token::Or, Self::and, Formula::Or)
    }

    fn and(&mut self) -> Result<Formula> {
        self.chain(Token::And, Self::strong, Formula::And)
    }

    fn strong(&mut self) -> Result<Formula> {
        self.chain(Token::Strong, Self::unary, Formula::Strong)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Token::Not) {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        let pos = self.offset();
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Ident(v)) => {
                self.pos += 1;
                Ok(Formula::Var(v))
            }
            Some(Token::Zero) => {
                self.pos += 1;
                Ok(Formula::Zero)
            }
            Some(Token::One) => {
                self.pos += 1;
                Ok(Formula::One)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let f = self.imp()?;
                if !self.eat(&Token::Close) {
                    return Err(Error::Parse {
                        pos: self.offset(),
                        msg: "expected ')'".into(),
                    });
                }
                Ok(f)
            }
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses a formula. Precedence from loosest: `->`/`<->` (right
/// associative), `\/`, `/\`, `&`, `~`.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = p.imp()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse {
            pos: p.offset(),
            msg: "trailing input".into(),
        });
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Derived connectives rewritten into `&`, `→`, `0`.
    Expanded,
    /// `∧`, `∨` read from the `meet`/`join` tables.
    Primitive,
}

pub type Valuation = BTreeMap<String, Elem>;

struct Ops<'a> {
    star: crate::algebra::Binary<'a>,
    imp: crate::algebra::Binary<'a>,
    meet: crate::algebra::Binary<'a>,
    join: crate::algebra::Binary<'a>,
    zero: Elem,
    one: Elem,
}

impl<'a> Ops<'a> {
    fn of(alg: &'a FiniteAlgebra) -> Result<Self> {
        Ok(Ops {
            star: alg.binary(STAR)?,
            imp: alg.binary(IMP)?,
            meet: alg.binary(MEET)?,
            join: alg.binary(JOIN)?,
            zero: alg.constant(ZERO)?,
            one: alg.constant(ONE)?,
        })
    }

    /// The value of a connective. In expanded mode the derived connectives
    /// are computed from their rewritings.
    fn apply(&self, c: Connective, a: Elem, b: Elem, mode: Mode) -> Elem {
        let and = |x, y| match mode {
            Mode::Expanded => self.star.apply(x, self.imp.apply(x, y)),
            Mode::Primitive => self.meet.apply(x, y),
        };
        match c {
            Connective::Strong => self.star.apply(a, b),
            Connective::Imp => self.imp.apply(a, b),
            Connective::And => and(a, b),
            Connective::Or => match mode {
                Mode::Expanded => and(
                    self.imp.apply(self.imp.apply(a, b), b),
                    self.imp.apply(self.imp.apply(b, a), a),
                ),
                Mode::Primitive => self.join.apply(a, b),
            },
            Connective::Iff => self.star.apply(self.imp.apply(a, b), self.imp.apply(b, a)),
            Connective::Not => self.imp.apply(a, self.zero),
        }
    }

    fn eval(&self, f: &Formula, val: &dyn Fn(&str) -> Option<Elem>, mode: Mode) -> Result<Elem> {
        match f.split() {
            None => match f {
                Formula::Zero => Ok(self.zero),
                Formula::One => Ok(self.one),
                Formula::Var(v) => val(v).ok_or_else(|| Error::UnboundVariable(v.clone())),
                _ => unreachable!(),
            },
            Some((c, a, b)) => {
                let x = self.eval(a, val, mode)?;
                let y = match b {
                    Some(b) => self.eval(b, val, mode)?,
                    None => x,
                };
                Ok(self.apply(c, x, y, mode))
            }
        }
    }
}

/// Value of `f` under `val`. The algebra needs `star`, `imp`, `meet`,
/// `join`, `zero` and `one`.
pub fn eval(f: &Formula, alg: &FiniteAlgebra, val: &Valuation, mode: Mode) -> Result<Elem> {
    if let Some((v, &e)) = val.iter().find(|(_, &e)| e >= alg.size()) {
        return Err(Error::Invalid(format!("{v} is assigned {e}, outside the algebra")));
    }
    Ops::of(alg)?.eval(f, &|v| val.get(v).copied(), mode)
}

/// Calls `visit` with every assignment of `0..n` to `k` slots, in
/// lexicographic order; stops early when `visit` returns false.
fn for_each_assignment(n: usize, k: usize, mut visit: impl FnMut(&[Elem]) -> Result<bool>) -> Result<()> {
    let mut cur = vec![0; k];
    loop {
        if !visit(&cur)? {
            return Ok(());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterValuation {
    pub chain: String,
    /// Variable name and value label.
    pub valuation: Vec<(String, String)>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    /// Valuations examined (for consequence: those satisfying the axioms).
    pub valuations: usize,
    pub counter: Option<CounterValuation>,
}

/// A set of axioms read over a family of finite chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub axioms: Vec<Formula>,
    pub semantics: Vec<ChainSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryFile {
    format: Option<String>,
    #[serde(default)]
    axioms: Vec<String>,
    chains: Vec<String>,
}

impl Theory {
    pub fn new(axioms: Vec<Formula>, semantics: Vec<ChainSpec>) -> Result<Self> {
        if semantics.is_empty() {
            return Err(Error::Invalid("a theory needs at least one chain".into()));
        }
        Ok(Theory { axioms, semantics })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: TheoryFile = serde_json::from_str(text)?;
        check_format(f.format.as_deref())?;
        let axioms = f.axioms.iter().map(|a| parse(a)).collect::<Result<_>>()?;
        let mut chains = Vec::new();
        for c in &f.chains {
            chains.extend(crate::algebra::chain::parse_chain_list(c)?);
        }
        Theory::new(axioms, chains)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Theory::from_json(&std::fs::read_to_string(path)?)
    }

    fn vars(&self, extra: &[&Formula]) -> Vec<String> {
        let mut vs: Vec<String> = self.axioms.iter().chain(extra.iter().copied()).flat_map(Formula::vars).collect();
        vs.sort_by_key(|v| var_key(v));
        vs.dedup();
        vs
    }
}

/// Checks `T ⊨ f` over every chain of `T`: `f` is `1` under every valuation
/// that sends all axioms to `1`.
pub fn consequence(t: &Theory, f: &Formula) -> Result<ValidityReport> {
    let vars = t.vars(&[f]);
    let mut report = ValidityReport {
        valid: true,
        valuations: 0,
        counter: None,
    };
    for spec in &t.semantics {
        let chain = make_chain(*spec)?;
        let ops = Ops::of(&chain)?;
        for_each_assignment(chain.size(), vars.len(), |vals| {
            let lookup = |v: &str| vars.iter().position(|x| x == v).map(|i| vals[i]);
            for a in &t.axioms {
                if ops.eval(a, &lookup, Mode::Primitive)? != ops.one {
                    return Ok(true);
                }
            }
            report.valuations += 1;
            let value = ops.eval(f, &lookup, Mode::Primitive)?;
            if value != ops.one {
                report.valid = false;
                report.counter = Some(CounterValuation {
                    chain: spec.to_string(),
                    valuation: vars.iter().zip(vals).map(|(v, &e)| (v.clone(), chain.label(e))).collect(),
                    value: chain.label(value),
                });
                return Ok(false);
            }
            Ok(true)
        })?;
        if !report.valid {
            break;
        }
    }
    Ok(report)
}

/// `f` evaluates to `1` under every valuation into every listed chain.
pub fn is_tautology(f: &Formula, chains: &[ChainSpec]) -> Result<ValidityReport> {
    consequence(&Theory::new(Vec::new(), chains.to_vec())?, f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub chain: String,
    pub variables: usize,
    pub depth: usize,
    /// Distinct (expanded, primitive) value-function pairs reached at each
    /// depth `0..=depth`.
    pub classes: Vec<usize>,
    pub coherent: bool,
    pub witness: Option<String>,
}

/// Compares expanded and primitive evaluation of every formula of depth at
/// most `depth` over `vars` variables on `chain`.
///
/// Both evaluations are compositional, so a formula's pair of value
/// functions depends only on the pairs of its immediate subformulas.
/// Closing the set of pairs level by level therefore covers every formula
/// of the given depth without listing them one by one.
pub fn coherence_check(spec: ChainSpec, vars: usize, depth: usize) -> Result<CoherenceReport> {
    coherence_check_on(&make_chain(spec)?, vars, depth)
}

/// [`coherence_check`] on an arbitrary algebra with the residuated
/// signature.
pub fn coherence_check_on(chain: &FiniteAlgebra, vars: usize, depth: usize) -> Result<CoherenceReport> {
    let ops = Ops::of(chain)?;
    let n = chain.size();
    let points = n.checked_pow(vars as u32).ok_or_else(|| Error::Resource("valuation count overflows".into()))?;
    let mut valuations = Vec::with_capacity(points);
    for_each_assignment(n, vars, |v| {
        valuations.push(v.to_vec());
        Ok(true)
    })?;
    // A pair of value functions is stored as one key: the expanded values
    // followed by the primitive values. Formulas are kept as back-pointers
    // and rebuilt only for the witness.
    #[derive(Clone, Copy)]
    enum Origin {
        Var(usize),
        Zero,
        One,
        Not(usize),
        Bin(Connective, usize, usize),
    }
    let table = |c: Connective, mode: Mode| -> Vec<u16> {
        (0..n * n).map(|k| ops.apply(c, k / n, k % n, mode) as u16).collect()
    };
    let tables: Vec<(Connective, Vec<u16>, Vec<u16>)> = std::iter::once(Connective::Not)
        .chain(Connective::BINARY)
        .map(|c| (c, table(c, Mode::Expanded), table(c, Mode::Primitive)))
        .collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut keys: Vec<Vec<u16>> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let mut witness: Option<usize> = None;
    let mut add = |key: &[u16], o: Origin, keys: &mut Vec<Vec<u16>>, origin: &mut Vec<Origin>| {
        if !seen.contains(key) {
            if key[..points] != key[points..] && witness.is_none() {
                witness = Some(keys.len());
            }
            seen.insert(key.to_vec());
            keys.push(key.to_vec());
            origin.push(o);
        }
    };
    let twice = |col: Vec<u16>| [col.clone(), col].concat();
    for i in 0..vars {
        let col: Vec<u16> = valuations.iter().map(|v| v[i] as u16).collect();
        add(&twice(col), Origin::Var(i), &mut keys, &mut origin);
    }
    add(&twice(vec![ops.zero as u16; points]), Origin::Zero, &mut keys, &mut origin);
    add(&twice(vec![ops.one as u16; points]), Origin::One, &mut keys, &mut origin);
    let mut classes = vec![keys.len()];
    let mut lo = 0;
    let mut buf = vec![0u16; 2 * points];
    let lift = |t: &(Connective, Vec<u16>, Vec<u16>), a: &[u16], b: &[u16], buf: &mut [u16]| {
        for k in 0..points {
            buf[k] = t.1[a[k] as usize * n + b[k] as usize];
            let q = points + k;
            buf[q] = t.2[a[q] as usize * n + b[q] as usize];
        }
    };
    for _ in 0..depth {
        let hi = keys.len();
        if hi > budget::lindenbaum_classes() * 16 {
            return Err(Error::Resource(format!("{hi} value-function pairs")));
        }
        for i in lo..hi {
            let a = keys[i].clone();
            lift(&tables[0], &a, &a, &mut buf);
            add(&buf, Origin::Not(i), &mut keys, &mut origin);
        }
        for i in 0..hi {
            for j in 0..hi {
                if i < lo && j < lo {
                    continue;
                }
                for t in &tables[1..] {
                    lift(t, &keys[i], &keys[j], &mut buf);
                    let key = buf.clone();
                    add(&key, Origin::Bin(t.0, i, j), &mut keys, &mut origin);
                }
            }
        }
        lo = hi;
        classes.push(keys.len());
    }
    fn rebuild(origin: &[Origin], i: usize) -> Formula {
        match origin[i] {
            Origin::Var(v) => var(format!("p{v}")),
            Origin::Zero => Formula::Zero,
            Origin::One => Formula::One,
            Origin::Not(a) => Formula::Not(Box::new(rebuild(origin, a))),
            Origin::Bin(c, a, b) => c.build(rebuild(origin, a), rebuild(origin, b)),
        }
    }
    let witness = witness.map(|w| rebuild(&origin, w).to_string());
    Ok(CoherenceReport {
        chain: chain.name().to_string(),
        variables: vars,
        depth,
        classes,
        coherent: witness.is_none(),
        witness,
    })
}

/// Formulas modulo equivalence in every model of a theory over `n`
/// variables.
#[derive(Clone, Debug)]
pub struct LindenbaumAlgebra {
    pub algebra: FiniteAlgebra,
    /// First formula found for each class (breadth-first by depth).
    pub representatives: Vec<Formula>,
    /// Value vector of each class over `models`.
    pub vectors: Vec<Vec<Elem>>,
    /// `(chain index, valuation)` pairs satisfying every axiom.
    pub models: Vec<(usize, Vec<Elem>)>,
    pub vars: Vec<String>,
    pub chains: Vec<FiniteAlgebra>,
}

impl LindenbaumAlgebra {
    fn vector(&self, f: &Formula) -> Result<Vec<Elem>> {
        self.models
            .iter()
            .map(|(c, vals)| {
                let ops = Ops::of(&self.chains[*c])?;
                ops.eval(f, &|v| self.vars.iter().position(|x| x == v).map(|i| vals[i]), Mode::Primitive)
            })
            .collect()
    }

    /// `[f]`, the class of a formula over the algebra's variables.
    pub fn class_of(&self, f: &Formula) -> Result<Elem> {
        let v = self.vector(f)?;
        self.vectors
            .iter()
            .position(|w| *w == v)
            .ok_or_else(|| Error::Internal(format!("{f} has no class")))
    }
}

/// Builds the Lindenbaum algebra of `t` over `p0 .. p{n-1}`.
pub fn lindenbaum(t: &Theory, n: usize) -> Result<LindenbaumAlgebra> {
    let vars: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    if let Some(v) = t.vars(&[]).into_iter().find(|v| !vars.contains(v)) {
        return Err(Error::Invalid(format!("axiom variable {v} is outside p0..p{}", n.saturating_sub(1))));
    }
    let chains = t.semantics.iter().map(|s| make_chain(*s)).collect::<Result<Vec<_>>>()?;
    let mut models = Vec::new();
    for (c, chain) in chains.iter().enumerate() {
        let ops = Ops::of(chain)?;
        for_each_assignment(chain.size(), n, |vals| {
            let lookup = |v: &str| vars.iter().position(|x| x == v).map(|i| vals[i]);
            let mut ok = true;
            for a in &t.axioms {
                ok &= ops.eval(a, &lookup, Mode::Primitive)? == ops.one;
            }
            if ok {
                models.push((c, vals.to_vec()));
            }
            Ok(true)
        })?;
    }
    let cap = budget::lindenbaum_classes();
    let all_ops: Vec<Ops<'_>> = chains.iter().map(Ops::of).collect::<Result<_>>()?;
    let lift = |c: Connective, a: &[Elem], b: &[Elem]| -> Vec<Elem> {
        models
            .iter()
            .enumerate()
            .map(|(k, (ci, _))| all_ops[*ci].apply(c, a[k], b[k], Mode::Primitive))
            .collect()
    };
    let mut index: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut vectors: Vec<Vec<Elem>> = Vec::new();
    let mut reps: Vec<Formula> = Vec::new();
    let add = |v: Vec<Elem>,
               f: Formula,
               index: &mut HashMap<Vec<Elem>, usize>,
               vectors: &mut Vec<Vec<Elem>>,
               reps: &mut Vec<Formula>|
     -> Result<()> {
        if !index.contains_key(&v) {
            if vectors.len() >= cap {
                return Err(Error::Resource(format!("more than {cap} Lindenbaum classes")));
            }
            index.insert(v.clone(), vectors.len());
            vectors.push(v);
            reps.push(f);
        }
        Ok(())
    };
    for (i, name) in vars.iter().enumerate() {
        let v = models.iter().map(|(_, vals)| vals[i]).collect();
        add(v, var(name.clone()), &mut index, &mut vectors, &mut reps)?;
    }
    let zero = models.iter().map(|(c, _)| all_ops[*c].zero).collect();
    add(zero, Formula::Zero, &mut index, &mut vectors, &mut reps)?;
    let one = models.iter().map(|(c, _)| all_ops[*c].one).collect();
    add(one, Formula::One, &mut index, &mut vectors, &mut reps)?;
    let mut lo = 0;
    loop {
        let hi = vectors.len();
        if lo == hi {
            break;
        }
        for i in lo..hi {
            let v = lift(Connective::Not, &vectors[i], &vectors[i]);
            add(v, Formula::Not(Box::new(reps[i].clone())), &mut index, &mut vectors, &mut reps)?;
        }
        for i in 0..hi {
            for j in 0..hi {
                if i < lo && j < lo {
                    continue;
                }
                for c in Connective::BINARY {
                    let v = lift(c, &vectors[i], &vectors[j]);
                    if !index.contains_key(&v) {
                        let f = c.build(reps[i].clone(), reps[j].clone());
                        add(v, f, &mut index, &mut vectors, &mut reps)?;
                    }
                }
            }
        }
        lo = hi;
    }
    let size = vectors.len();
    let look = |v: &Vec<Elem>| index[v];
    let mut tables = IndexMap::new();
    for (name, c) in [(JOIN, Connective::Or), (MEET, Connective::And), (STAR, Connective::Strong), (IMP, Connective::Imp)] {
        let mut t = Vec::with_capacity(size * size);
        for a in &vectors {
            for b in &vectors {
                t.push(look(&lift(c, a, b)));
            }
        }
        tables.insert(name.to_string(), Table::Binary(t));
    }
    let zero = models.iter().map(|(c, _)| all_ops[*c].zero).collect();
    let one = models.iter().map(|(c, _)| all_ops[*c].one).collect();
    tables.insert(ZERO.to_string(), Table::Constant(look(&zero)));
    tables.insert(ONE.to_string(), Table::Constant(look(&one)));
    let labels = reps.iter().map(|f| f.to_string()).collect();
    let algebra = FiniteAlgebra::new(format!("L_T({n})"), size, Some(labels), tables)?;
    Ok(LindenbaumAlgebra {
        algebra,
        representatives: reps,
        vectors,
        models,
        vars,
        chains,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonPrincipal {
    pub meet: Elem,
    pub certified: bool,
}

/// The meet of `gamma` and whether it is `0`. An empty list has meet `1`.
pub fn non_principal_certify(alg: &FiniteAlgebra, gamma: &[Elem]) -> Result<NonPrincipal> {
    let l = alg.lattice()?;
    if let Some(&bad) = gamma.iter().find(|&&x| x >= alg.size()) {
        return Err(Error::Invalid(format!("{bad} is not an element")));
    }
    let meet = l.meet_all(gamma.iter().copied());
    Ok(NonPrincipal {
        meet,
        certified: meet == l.zero,
    })
}

/// Maximal filters with their principal generators.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    pub space: SpectrumSpace,
    pub principal: Vec<Option<Elem>>,
}

/// Maximal filters of `alg` (the type space when `alg` is a Lindenbaum
/// algebra), each tagged with a generator when principal.
pub fn type_space(alg: &FiniteAlgebra) -> Result<TypeSpace> {
    let points = enumerate_filters(alg, FilterKind::Maximal)?;
    let principal = points
        .iter()
        .map(|p| principal_generator(alg, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypeSpace {
        space: SpectrumSpace::new(alg.size(), points),
        principal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericPoint {
    /// Position in the sorted list of maximal filters.
    pub index: usize,
    pub filter: Vec<Elem>,
    /// Nowhere density of each avoid-set in the maximal spectrum.
    pub nowhere_dense: Vec<bool>,
}

/// The least maximal filter (in bitmask order) containing `a` and lying in
/// none of the `avoid` sets.
///
/// The search runs as a Baire-style descent: starting from the points that
/// contain `a`, each avoid-set is removed in turn and the first surviving
/// point is taken. Every avoid-set must be closed in the maximal spectrum.
pub fn generic_filter(alg: &FiniteAlgebra, a: Elem, avoid: &[PointSet]) -> Result<GenericPoint> {
    if a >= alg.size() {
        return Err(Error::Invalid(format!("{a} is not an element")));
    }
    if a == alg.constant(ZERO)? {
        return Err(Error::Invalid("the element must be nonzero".into()));
    }
    let ts = type_space(alg)?;
    let top = ts.space.topology();
    let m = ts.space.len();
    let mut nowhere_dense = Vec::with_capacity(avoid.len());
    for (i, c) in avoid.iter().enumerate() {
        if c.len() > m && c.ones().any(|p| p >= m) {
            return Err(Error::Invalid(format!("avoid-set {i} names a point outside Max")));
        }
        let mut c = c.clone();
        c.grow(m);
        if !top.is_closed(&c) {
            return Err(Error::Invalid(format!("avoid-set {i} is not closed")));
        }
        nowhere_dense.push(top.is_nowhere_dense(&c));
    }
    let mut survivors = ts.space.v(a);
    for c in avoid {
        let mut c = c.clone();
        c.grow(m);
        survivors.difference_with(&c);
        if survivors.is_clear() {
            return Err(Error::NoGenericPoint(format!(
                "every maximal filter containing {} lies in the avoid-sets",
                alg.label(a)
            )));
        }
    }
    let index = survivors.ones().next().ok_or_else(|| {
        Error::NoGenericPoint(format!("no maximal filter contains {}", alg.label(a)))
    })?;
    Ok(GenericPoint {
        index,
        filter: sets::members(&ts.space.points[index]),
        nowhere_dense,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedDensity {
    /// Every nonempty basic open `D(a)` contains a principal point.
    pub basic_opens: bool,
    /// Every nonzero element lies above an atom (a complete element).
    pub completable: bool,
    pub witness: Option<Elem>,
}

pub fn isolated_dense_check(alg: &FiniteAlgebra, ts: &TypeSpace) -> Result<IsolatedDensity> {
    let l = alg.lattice()?;
    let mut witness = None;
    let mut basic_opens = true;
    for a in 0..alg.size() {
        let d = ts.space.d(a);
        if !d.is_clear() && !d.ones().any(|p| ts.principal[p].is_some()) {
            basic_opens = false;
            witness.get_or_insert(a);
        }
    }
    let atoms = crate::free::atoms(alg)?;
    let mut completable = true;
    for a in (0..alg.size()).filter(|&a| a != l.zero) {
        if !atoms.iter().any(|&t| l.leq(t, a)) {
            completable = false;
            witness.get_or_insert(a);
        }
    }
    Ok(IsolatedDensity {
        basic_opens,
        completable,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinLemma {
    /// Every nonzero element has a nonzero member of the set below it.
    pub dense: bool,
    pub join: Elem,
    /// `dense` implies `join = 1`.
    pub holds: bool,
}

pub fn join_lemma_check(alg: &FiniteAlgebra, xs: &[Elem]) -> Result<JoinLemma> {
    let l = alg.lattice()?;
    let dense = (0..alg.size())
        .filter(|&b| b != l.zero)
        .all(|b| xs.iter().any(|&x| x != l.zero && l.leq(x, b)));
    let join = l.join_all(xs.iter().copied());
    Ok(JoinLemma {
        dense,
        join,
        holds: !dense || join == l.one,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TypesFile {
    format: Option<String>,
    types: Vec<Vec<String>>,
}

/// Reads `{"types": [[formula, ...], ...]}`.
pub fn types_from_json(text: &str) -> Result<Vec<Vec<Formula>>> {
    let f: TypesFile = serde_json::from_str(text)?;
    check_format(f.format.as_deref())?;
    f.types
        .iter()
        .map(|t| t.iter().map(|s| parse(s)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::axioms::{check_class_axioms, AlgebraClass};
    use crate::algebra::chain::parse_chain_list;
    use crate::algebra::structure::product;
    use crate::spectra::filters::enumerate_filters_exhaustive;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn val(pairs: &[(&str, Elem)]) -> Valuation {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(p("p0 -> p1 -> p2"), imp(var("p0"), imp(var("p1"), var("p2"))));
        assert_eq!(p("(p0 -> p1) -> p2"), imp(imp(var("p0"), var("p1")), var("p2")));
    }

    #[test]
    fn precedence_levels() {
        let f = p("~p0 & p1 /\\ p2 \\/ p3 <-> p4");
        let expected = Formula::Iff(
            Box::new(Formula::Or(
                Box::new(Formula::And(
                    Box::new(Formula::Strong(Box::new(Formula::Not(Box::new(var("p0")))), Box::new(var("p1")))),
                    Box::new(var("p2")),
                )),
                Box::new(var("p3")),
            )),
            Box::new(var("p4")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn derived_connectives_expand() {
        assert_eq!(p("~p0").expand(), imp(var("p0"), Formula::Zero));
        assert_eq!(
            p("p0 /\\ p1").expand(),
            Formula::Strong(Box::new(var("p0")), Box::new(imp(var("p0"), var("p1"))))
        );
        let e = p("(p0 \\/ ~p1) <-> p2").expand();
        assert!(e.is_expanded());
        assert_eq!(e.expand(), e);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("p0 -> ") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        match parse("p0 # p1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(p0"), Err(Error::Parse { .. })));
        assert!(matches!(parse("p0 p1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("2x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in ["p0 -> p1 -> p2", "(p0 -> p1) -> p2", "~(p0 & 1) \\/ ~~q", "(a <-> b) /\\ 0"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
    }

    #[test]
    fn variables_sort_numerically() {
        assert_eq!(p("p10 & p2 & q & p0 & p2").vars(), vec!["p0", "p2", "p10", "q"]);
    }

    #[test]
    fn excluded_middle_on_three_element_chain() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        for mode in [Mode::Expanded, Mode::Primitive] {
            assert_eq!(eval(&p("p \\/ ~p"), &l3, &val(&[("p", 1)]), mode).unwrap(), 1);
        }
        let r = is_tautology(&p("p0 \\/ ~p0"), &[ChainSpec::luk(3)]).unwrap();
        assert!(!r.valid);
        let c = r.counter.unwrap();
        assert_eq!(c.valuation, vec![("p0".to_string(), "1/2".to_string())]);
        assert_eq!(c.value, "1/2");
    }

    #[test]
    fn prelinearity_is_a_tautology_on_all_chains() {
        let chains = parse_chain_list("luk:2..6,godel:2..6").unwrap();
        let r = is_tautology(&p("(p -> q) \\/ (q -> p)"), &chains).unwrap();
        assert!(r.valid);
        let expected: usize = chains.iter().map(|c| c.size * c.size).sum();
        assert_eq!(r.valuations, expected);
        assert!(is_tautology(&Formula::One, &chains).unwrap().valid);
        assert!(is_tautology(&p("p3 -> p3"), &chains).unwrap().valid);
    }

    #[test]
    fn unbound_variables_are_reported() {
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        assert!(matches!(
            eval(&p("p0 & p1"), &l3, &val(&[("p0", 1)]), Mode::Primitive),
            Err(Error::UnboundVariable(v)) if v == "p1"
        ));
    }

    #[test]
    fn consequence_restricts_to_models() {
        let t = Theory::new(vec![p("p0")], vec![ChainSpec::luk(3)]).unwrap();
        assert!(consequence(&t, &p("p0 \\/ ~p0")).unwrap().valid);
        assert!(!consequence(&t, &p("p1")).unwrap().valid);
        let g = Theory::new(vec![p("~~p0")], vec![ChainSpec::godel(3)]).unwrap();
        assert!(!consequence(&g, &p("p0")).unwrap().valid);
    }

    #[test]
    fn coherence_up_to_depth_two_on_small_chains() {
        for spec in [ChainSpec::luk(3), ChainSpec::godel(3), ChainSpec::luk(4)] {
            let r = coherence_check(spec, 2, 2).unwrap();
            assert!(r.coherent, "{r:?}");
            assert!(r.classes.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn coherence_detects_a_non_divisible_table() {
        // 1/2 -> 0 = 1/2 on the Gödel 3-chain breaks x /\ y = x & (x -> y).
        let mut g = make_chain(ChainSpec::godel(3)).unwrap();
        g.set_entry(IMP, 3, 1).unwrap();
        let f = p("p0 /\\ p1");
        let v = val(&[("p0", 1), ("p1", 0)]);
        assert_ne!(
            eval(&f, &g, &v, Mode::Expanded).unwrap(),
            eval(&f, &g, &v, Mode::Primitive).unwrap()
        );
        let r = coherence_check_on(&g, 2, 1).unwrap();
        assert!(!r.coherent);
        let w = p(r.witness.as_deref().unwrap());
        assert!(w.depth() <= 1);
    }

    #[test]
    fn lindenbaum_classical_one_variable() {
        let t = Theory::new(vec![], vec![ChainSpec::luk(2)]).unwrap();
        let l = lindenbaum(&t, 1).unwrap();
        assert_eq!(l.algebra.size(), 4);
        assert!(check_class_axioms(&l.algebra, AlgebraClass::Boolean).unwrap().passed);
        let t = Theory::new(vec![p("p0")], vec![ChainSpec::luk(2)]).unwrap();
        assert_eq!(lindenbaum(&t, 1).unwrap().algebra.size(), 2);
    }

    #[test]
    fn lindenbaum_three_valued_one_variable() {
        let t = Theory::new(vec![], vec![ChainSpec::luk(3)]).unwrap();
        let l = lindenbaum(&t, 1).unwrap();
        assert_eq!(l.algebra.size(), 12);
        for class in [AlgebraClass::Bl, AlgebraClass::Mv] {
            assert!(check_class_axioms(&l.algebra, class).unwrap().passed);
        }
    }

    #[test]
    fn lindenbaum_operations_follow_formulas() {
        let t = Theory::new(vec![], parse_chain_list("luk:2,godel:3").unwrap()).unwrap();
        let l = lindenbaum(&t, 2).unwrap();
        let a = &l.algebra;
        assert!(check_class_axioms(a, AlgebraClass::Bl).unwrap().passed);
        let lat = a.lattice().unwrap();
        let fs: Vec<Formula> = ["p0", "p1", "~p0", "p0 & p1", "p1 -> p0"].iter().map(|s| p(s)).collect();
        let mut joined = fs[0].clone();
        for f in &fs[1..] {
            joined = Formula::Or(Box::new(joined), Box::new(f.clone()));
        }
        let classes: Vec<Elem> = fs.iter().map(|f| l.class_of(f).unwrap()).collect();
        assert_eq!(l.class_of(&joined).unwrap(), lat.join_all(classes.iter().copied()));
        let mut met = fs[0].clone();
        for f in &fs[1..] {
            met = Formula::And(Box::new(met), Box::new(f.clone()));
        }
        assert_eq!(l.class_of(&met).unwrap(), lat.meet_all(classes.iter().copied()));
        for (i, r) in l.representatives.iter().enumerate() {
            assert_eq!(l.class_of(r).unwrap(), i);
        }
    }

    #[test]
    fn inconsistent_theory_collapses() {
        let t = Theory::new(vec![Formula::Zero], vec![ChainSpec::luk(3)]).unwrap();
        let l = lindenbaum(&t, 1).unwrap();
        assert_eq!(l.algebra.size(), 1);
        assert!(l.models.is_empty());
        assert_eq!(type_space(&l.algebra).unwrap().space.len(), 0);
    }

    #[test]
    fn lindenbaum_rejects_foreign_variables() {
        let t = Theory::new(vec![p("q")], vec![ChainSpec::luk(2)]).unwrap();
        assert!(lindenbaum(&t, 1).is_err());
    }

    #[test]
    fn theory_file() {
        let t = Theory::from_json(r#"{"format":"reslat/1","axioms":["p0 -> p1"],"chains":["luk:3","godel:2..3"]}"#)
            .unwrap();
        assert_eq!(t.axioms, vec![p("p0 -> p1")]);
        assert_eq!(t.semantics.len(), 3);
        assert!(Theory::from_json(r#"{"axioms":[],"chains":[]}"#).is_err());
        assert!(Theory::from_json(r#"{"format":"reslat/2","chains":["luk:2"]}"#).is_err());
        let ty = types_from_json(r#"{"types":[["p0","~p0"],["1"]]}"#).unwrap();
        assert_eq!(ty.len(), 2);
    }

    #[test]
    fn non_principal_certificates() {
        let ba = lindenbaum(&Theory::new(vec![], vec![ChainSpec::luk(2)]).unwrap(), 1).unwrap();
        let a = ba.class_of(&p("p0")).unwrap();
        let na = ba.class_of(&p("~p0")).unwrap();
        assert!(non_principal_certify(&ba.algebra, &[a, na]).unwrap().certified);
        let one = ba.algebra.constant(ONE).unwrap();
        assert!(!non_principal_certify(&ba.algebra, &[one]).unwrap().certified);
        let g4 = make_chain(ChainSpec::godel(4)).unwrap();
        let r = non_principal_certify(&g4, &[3, 2, 1]).unwrap();
        assert_eq!((r.meet, r.certified), (1, false));
        assert!(non_principal_certify(&g4, &[3, 2, 1, 0]).unwrap().certified);
    }

    #[test]
    fn type_space_of_classical_one_variable_algebra() {
        let ba = lindenbaum(&Theory::new(vec![], vec![ChainSpec::luk(2)]).unwrap(), 1).unwrap();
        let ts = type_space(&ba.algebra).unwrap();
        assert_eq!(ts.space.len(), 2);
        assert!(ts.principal.iter().all(Option::is_some));
        let d = isolated_dense_check(&ba.algebra, &ts).unwrap();
        assert!(d.basic_opens && d.completable);
        let g = lindenbaum(&Theory::new(vec![], vec![ChainSpec::godel(3)]).unwrap(), 1).unwrap();
        let ts = type_space(&g.algebra).unwrap();
        assert!(!ts.space.is_empty());
        assert_eq!(ts.principal.len(), ts.space.len());
        assert!(isolated_dense_check(&g.algebra, &ts).unwrap().completable);
    }

    #[test]
    fn generic_filter_basic_cases() {
        let two = make_chain(ChainSpec::luk(2)).unwrap();
        let b = product(&[&two, &two, &two]).unwrap();
        let one = b.constant(ONE).unwrap();
        let g = generic_filter(&b, one, &[]).unwrap();
        assert_eq!(g.index, 0);
        let ts = type_space(&b).unwrap();
        assert_eq!(g.filter, sets::members(&ts.space.points[0]));
        // Avoid the filters containing an atom that the first point contains.
        let atom = (0..b.size()).find(|&x| ts.space.points[0].contains(x) && x != one).unwrap();
        let avoid = ts.space.v(atom);
        let g2 = generic_filter(&b, one, &[avoid.clone()]).unwrap();
        assert!(!avoid.contains(g2.index));
        assert_eq!(g2.nowhere_dense, vec![false]);
        // Covering everything that contains `a` leaves no generic point.
        assert!(matches!(
            generic_filter(&b, atom, &[ts.space.v(atom)]),
            Err(Error::NoGenericPoint(_))
        ));
        assert!(generic_filter(&b, b.constant(ZERO).unwrap(), &[]).is_err());
    }

    #[test]
    fn principal_filters_agree_with_subset_scan() {
        let g3 = make_chain(ChainSpec::godel(3)).unwrap();
        let l = lindenbaum(&Theory::new(vec![], vec![ChainSpec::godel(3)]).unwrap(), 1).unwrap();
        for a in [&g3, &l.algebra] {
            if a.size() <= 12 {
                let ex = enumerate_filters_exhaustive(a, FilterKind::Maximal, 12).unwrap();
                assert_eq!(type_space(a).unwrap().space.points, ex);
            }
        }
    }

    #[test]
    fn join_lemma_on_boolean_and_three_valued_algebras() {
        let two = make_chain(ChainSpec::luk(2)).unwrap();
        let b = product(&[&two, &two]).unwrap();
        let atoms = crate::free::atoms(&b).unwrap();
        let r = join_lemma_check(&b, &atoms).unwrap();
        assert!(r.dense && r.holds);
        // On the three-element MV chain the atom is dense but joins to 1/2.
        let l3 = make_chain(ChainSpec::luk(3)).unwrap();
        let r = join_lemma_check(&l3, &[1]).unwrap();
        assert!(r.dense);
        assert_eq!(r.join, 1);
        assert!(!r.holds);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn expansion_is_idempotent_and_sound(f in arb_formula(4)) {
            let e = f.expand();
            proptest::prop_assert!(e.is_expanded());
            proptest::prop_assert_eq!(e.expand(), e.clone());
            proptest::prop_assert_eq!(parse(&f.to_string()).unwrap(), f.clone());
            for spec in [ChainSpec::luk(3), ChainSpec::godel(3)] {
                let c = make_chain(spec).unwrap();
                for x in 0..3 {
                    for y in 0..3 {
                        let v = val(&[("p0", x), ("p1", y)]);
                        let a = eval(&f, &c, &v, Mode::Primitive).unwrap();
                        proptest::prop_assert_eq!(eval(&f, &c, &v, Mode::Expanded).unwrap(), a);
                        proptest::prop_assert_eq!(eval(&e, &c, &v, Mode::Primitive).unwrap(), a);
                    }
                }
            }
        }
    }

    fn arb_formula(depth: u32) -> impl proptest::strategy::Strategy<Value = Formula> {
        use proptest::prelude::*;
        let leaf = prop_oneof![
            Just(var("p0")),
            Just(var("p1")),
            Just(Formula::Zero),
            Just(Formula::One)
        ];
        leaf.prop_recursive(depth, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Formula::Not(Box::new(a))),
                (inner.clone(), inner.clone(), 0..5usize)
                    .prop_map(|(a, b, c)| Connective::BINARY[c].build(a, b)),
            ]
        })
    }
}
