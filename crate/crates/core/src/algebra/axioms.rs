//! Exhaustive class-axiom checking.
//!
//! A [`Law`] is an identity or quasi-identity in `arity` element variables.
//! Each law is scanned over all tuples in lexicographic order and the first
//! failing tuple is reported.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::names::*;
use super::{Elem, FiniteAlgebra, Residuated};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraClass {
    ResiduatedLattice,
    Bl,
    Mv,
    Heyting,
    Boolean,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 5] = [
        AlgebraClass::ResiduatedLattice,
        AlgebraClass::Bl,
        AlgebraClass::Mv,
        AlgebraClass::Heyting,
        AlgebraClass::Boolean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraClass::ResiduatedLattice => "residuated-lattice",
            AlgebraClass::Bl => "bl",
            AlgebraClass::Mv => "mv",
            AlgebraClass::Heyting => "heyting",
            AlgebraClass::Boolean => "boolean",
        }
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgebraClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown class {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub suite: String,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn new(suite: impl Into<String>, violations: Vec<Violation>) -> Self {
        AxiomReport {
            suite: suite.into(),
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn violation(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    /// Concatenates reports, prefixing each axiom id with its suite name.
    pub fn merge(suite: impl Into<String>, parts: impl IntoIterator<Item = AxiomReport>) -> Self {
        let mut violations = Vec::new();
        for p in parts {
            for v in p.violations {
                violations.push(Violation {
                    axiom: format!("{}/{}", p.suite, v.axiom),
                    witness: v.witness,
                });
            }
        }
        AxiomReport::new(suite, violations)
    }
}

pub type Check<'a> = Arc<dyn Fn(&[Elem]) -> bool + Send + Sync + 'a>;

/// A named property of `arity`-tuples of elements.
#[derive(Clone)]
pub struct Law<'a> {
    pub id: String,
    pub arity: usize,
    pub check: Check<'a>,
}

impl<'a> Law<'a> {
    pub fn new(
        id: impl Into<String>,
        arity: usize,
        check: impl Fn(&[Elem]) -> bool + Send + Sync + 'a,
    ) -> Self {
        Law {
            id: id.into(),
            arity,
            check: Arc::new(check),
        }
    }

    pub fn holds_at(&self, tuple: &[Elem]) -> bool {
        (self.check)(tuple)
    }
}

fn scan_from(n: usize, law: &Law<'_>, prefix: &[Elem]) -> Option<Vec<Elem>> {
    let k = law.arity;
    let mut t = vec![0; k];
    t[..prefix.len()].copy_from_slice(prefix);
    let free = prefix.len();
    if free == k {
        return (!law.holds_at(&t)).then_some(t);
    }
    loop {
        if !law.holds_at(&t) {
            return Some(t);
        }
        let mut i = k;
        loop {
            if i == free {
                return None;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// First tuple (lexicographic) at which `law` fails.
pub fn first_failure(n: usize, law: &Law<'_>) -> Option<Vec<Elem>> {
    let work = n.checked_pow(law.arity as u32).unwrap_or(usize::MAX);
    if law.arity >= 2 && work >= 1 << 16 {
        (0..n)
            .into_par_iter()
            .find_map_first(|x| scan_from(n, law, &[x]))
    } else {
        scan_from(n, law, &[])
    }
}

/// Checks every law; reports all failures, each with its first witness.
pub fn run_laws(suite: impl Into<String>, n: usize, laws: &[Law<'_>]) -> AxiomReport {
    let violations = laws
        .par_iter()
        .filter_map(|law| {
            first_failure(n, law).map(|w| Violation {
                axiom: law.id.clone(),
                witness: w,
            })
        })
        .collect();
    AxiomReport::new(suite, violations)
}

/// Stops at the first failing law (in list order).
pub fn first_violation(n: usize, laws: &[Law<'_>]) -> Option<Violation> {
    laws.iter().find_map(|law| {
        first_failure(n, law).map(|w| Violation {
            axiom: law.id.clone(),
            witness: w,
        })
    })
}

pub fn lattice_laws<'a>(alg: &'a FiniteAlgebra) -> Result<Vec<Law<'a>>> {
    let l = alg.lattice()?;
    Ok(vec![
        Law::new("join-commutative", 2, move |v| l.join(v[0], v[1]) == l.join(v[1], v[0])),
        Law::new("join-associative", 3, move |v| {
            l.join(v[0], l.join(v[1], v[2])) == l.join(l.join(v[0], v[1]), v[2])
        }),
        Law::new("join-idempotent", 1, move |v| l.join(v[0], v[0]) == v[0]),
        Law::new("meet-commutative", 2, move |v| l.meet(v[0], v[1]) == l.meet(v[1], v[0])),
        Law::new("meet-associative", 3, move |v| {
            l.meet(v[0], l.meet(v[1], v[2])) == l.meet(l.meet(v[0], v[1]), v[2])
        }),
        Law::new("meet-idempotent", 1, move |v| l.meet(v[0], v[0]) == v[0]),
        Law::new("absorption-join-meet", 2, move |v| l.join(v[0], l.meet(v[0], v[1])) == v[0]),
        Law::new("absorption-meet-join", 2, move |v| l.meet(v[0], l.join(v[0], v[1])) == v[0]),
        Law::new("zero-least", 1, move |v| l.meet(l.zero, v[0]) == l.zero),
        Law::new("one-greatest", 1, move |v| l.meet(v[0], l.one) == v[0]),
    ])
}

pub fn distributivity_law<'a>(alg: &'a FiniteAlgebra) -> Result<Law<'a>> {
    let l = alg.lattice()?;
    Ok(Law::new("distributive", 3, move |v| {
        l.meet(v[0], l.join(v[1], v[2])) == l.join(l.meet(v[0], v[1]), l.meet(v[0], v[2]))
    }))
}

fn residuated_laws<'a>(alg: &'a FiniteAlgebra) -> Result<Vec<Law<'a>>> {
    let mut laws = lattice_laws(alg)?;
    let r: Residuated<'a> = alg.residuated()?;
    let one = r.lat.one;
    laws.push(Law::new("star-commutative", 2, move |v| {
        r.star(v[0], v[1]) == r.star(v[1], v[0])
    }));
    laws.push(Law::new("star-associative", 3, move |v| {
        r.star(v[0], r.star(v[1], v[2])) == r.star(r.star(v[0], v[1]), v[2])
    }));
    laws.push(Law::new("star-unit", 1, move |v| r.star(v[0], one) == v[0]));
    laws.push(Law::new("adjunction", 3, move |v| {
        let (x, y, z) = (v[0], v[1], v[2]);
        r.lat.leq(r.star(x, z), y) == r.lat.leq(z, r.imp(x, y))
    }));
    Ok(laws)
}

fn bl_extra<'a>(r: Residuated<'a>) -> Vec<Law<'a>> {
    vec![
        Law::new("prelinearity", 2, move |v| {
            r.lat.join(r.imp(v[0], v[1]), r.imp(v[1], v[0])) == r.lat.one
        }),
        Law::new("divisibility", 2, move |v| {
            r.star(v[0], r.imp(v[0], v[1])) == r.lat.meet(v[0], v[1])
        }),
    ]
}

struct MvOps {
    n: usize,
    oplus: Vec<Elem>,
    odot: Vec<Elem>,
    neg: Vec<Elem>,
    zero: Elem,
    one: Elem,
}

impl MvOps {
    /// Uses the algebra's ⊕, ⊙, ¬ where present. Missing ones are derived
    /// from the residuated structure: ⊙ = *, ¬a = a ⇒ 0, a ⊕ b = ¬(¬a ⊙ ¬b).
    fn of(alg: &FiniteAlgebra) -> Result<MvOps> {
        let n = alg.size();
        let zero = alg.constant(ZERO)?;
        let one = alg.constant(ONE)?;
        let odot = match alg.binary(ODOT) {
            Ok(t) => t.entries().to_vec(),
            Err(_) => alg.binary(STAR)?.entries().to_vec(),
        };
        let neg = match alg.unary(NEG) {
            Ok(t) => t.entries().to_vec(),
            Err(_) => {
                let imp = alg.binary(IMP)?;
                (0..n).map(|a| imp.apply(a, zero)).collect()
            }
        };
        let oplus = match alg.binary(OPLUS) {
            Ok(t) => t.entries().to_vec(),
            Err(_) => {
                let mut t = Vec::with_capacity(n * n);
                for a in 0..n {
                    for b in 0..n {
                        t.push(neg[odot[neg[a] * n + neg[b]]]);
                    }
                }
                t
            }
        };
        Ok(MvOps {
            n,
            oplus,
            odot,
            neg,
            zero,
            one,
        })
    }

    fn p(&self, a: Elem, b: Elem) -> Elem {
        self.oplus[a * self.n + b]
    }

    fn d(&self, a: Elem, b: Elem) -> Elem {
        self.odot[a * self.n + b]
    }

    fn ng(&self, a: Elem) -> Elem {
        self.neg[a]
    }
}

fn mv_laws<'a>(alg: &'a FiniteAlgebra) -> Result<Vec<Law<'a>>> {
    let m = Arc::new(MvOps::of(alg)?);
    let mut laws = Vec::new();
    let mut add = |id: &str, arity: usize, f: fn(&MvOps, &[Elem]) -> bool| {
        let m = Arc::clone(&m);
        laws.push(Law::new(id, arity, move |v| f(&m, v)));
    };
    add("mv1-oplus-commutative", 2, |m, v| m.p(v[0], v[1]) == m.p(v[1], v[0]));
    add("mv1-odot-commutative", 2, |m, v| m.d(v[0], v[1]) == m.d(v[1], v[0]));
    add("mv2-oplus-associative", 3, |m, v| {
        m.p(v[0], m.p(v[1], v[2])) == m.p(m.p(v[0], v[1]), v[2])
    });
    add("mv2-odot-associative", 3, |m, v| {
        m.d(v[0], m.d(v[1], v[2])) == m.d(m.d(v[0], v[1]), v[2])
    });
    add("mv3-oplus-zero", 1, |m, v| m.p(v[0], m.zero) == v[0]);
    add("mv3-odot-one", 1, |m, v| m.d(v[0], m.one) == v[0]);
    add("mv4-oplus-one", 1, |m, v| m.p(v[0], m.one) == m.one);
    add("mv4-odot-zero", 1, |m, v| m.d(v[0], m.zero) == m.zero);
    add("mv5-oplus-negation", 1, |m, v| m.p(v[0], m.ng(v[0])) == m.one);
    add("mv5-odot-negation", 1, |m, v| m.d(v[0], m.ng(v[0])) == m.zero);
    add("mv6-de-morgan-oplus", 2, |m, v| {
        m.ng(m.p(v[0], v[1])) == m.d(m.ng(v[0]), m.ng(v[1]))
    });
    add("mv6-de-morgan-odot", 2, |m, v| {
        m.ng(m.d(v[0], v[1])) == m.p(m.ng(v[0]), m.ng(v[1]))
    });
    add("mv7-double-negation", 1, |m, v| m.ng(m.ng(v[0])) == v[0]);
    add("mv7-negation-zero", 0, |m, _| m.ng(m.zero) == m.one);
    add("mv8-symmetry", 2, |m, v| {
        let (a, b) = (v[0], v[1]);
        m.p(m.ng(m.p(m.ng(a), b)), b) == m.p(m.ng(m.p(m.ng(b), a)), a)
    });
    Ok(laws)
}

/// The laws making up a class suite.
pub fn class_laws<'a>(alg: &'a FiniteAlgebra, class: AlgebraClass) -> Result<Vec<Law<'a>>> {
    Ok(match class {
        AlgebraClass::ResiduatedLattice => residuated_laws(alg)?,
        AlgebraClass::Bl => {
            let mut l = residuated_laws(alg)?;
            l.extend(bl_extra(alg.residuated()?));
            l
        }
        AlgebraClass::Mv => mv_laws(alg)?,
        AlgebraClass::Heyting | AlgebraClass::Boolean => {
            let mut l = residuated_laws(alg)?;
            let r = alg.residuated()?;
            l.push(Law::new("star-is-meet", 2, move |v| {
                r.star(v[0], v[1]) == r.lat.meet(v[0], v[1])
            }));
            if class == AlgebraClass::Boolean {
                l.push(Law::new("excluded-middle", 1, move |v| {
                    r.lat.join(v[0], r.neg(v[0])) == r.lat.one
                }));
            }
            l
        }
    })
}

pub fn check_class_axioms(alg: &FiniteAlgebra, class: AlgebraClass) -> Result<AxiomReport> {
    let laws = class_laws(alg, class)?;
    Ok(run_laws(class.as_str(), alg.size(), &laws))
}

/// Re-evaluates a reported violation; true when the law really fails there.
pub fn reverify(alg: &FiniteAlgebra, class: AlgebraClass, v: &Violation) -> Result<bool> {
    let laws = class_laws(alg, class)?;
    let law = laws
        .iter()
        .find(|l| l.id == v.axiom)
        .ok_or_else(|| Error::Invalid(format!("no axiom {}", v.axiom)))?;
    if v.witness.len() != law.arity || v.witness.iter().any(|&e| e >= alg.size()) {
        return Err(Error::Invalid("witness has the wrong shape".into()));
    }
    Ok(!law.holds_at(&v.witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::{make_chain, ChainSpec};

    #[test]
    fn luk3_is_mv() {
        let a = make_chain(ChainSpec::luk(3)).unwrap();
        for c in [AlgebraClass::ResiduatedLattice, AlgebraClass::Bl, AlgebraClass::Mv] {
            assert!(check_class_axioms(&a, c).unwrap().passed, "{c}");
        }
        assert!(!check_class_axioms(&a, AlgebraClass::Heyting).unwrap().passed);
    }

    #[test]
    fn godel3_fails_double_negation_at_half() {
        let a = make_chain(ChainSpec::godel(3)).unwrap();
        let rep = check_class_axioms(&a, AlgebraClass::Mv).unwrap();
        assert!(!rep.passed);
        let v = rep.violation("mv7-double-negation").unwrap();
        assert_eq!(v.witness, vec![1]);
        assert!(reverify(&a, AlgebraClass::Mv, v).unwrap());
        assert!(check_class_axioms(&a, AlgebraClass::Heyting).unwrap().passed);
    }

    #[test]
    fn two_element_is_boolean_and_bl() {
        let a = make_chain(ChainSpec::luk(2)).unwrap();
        for c in AlgebraClass::ALL {
            assert!(check_class_axioms(&a, c).unwrap().passed, "{c}");
        }
    }

    #[test]
    fn corrupted_imp_fails_adjunction() {
        let mut a = make_chain(ChainSpec::luk(4)).unwrap();
        // imp(1/3, 0) is 2/3; set it to 1.
        a.set_entry("imp", 4, 3).unwrap();
        let rep = check_class_axioms(&a, AlgebraClass::ResiduatedLattice).unwrap();
        let v = rep.violation("adjunction").unwrap();
        assert!(reverify(&a, AlgebraClass::ResiduatedLattice, v).unwrap());
    }

    #[test]
    fn missing_table() {
        let a = crate::algebra::chain::make_lattice_chain(3).unwrap();
        assert!(matches!(
            check_class_axioms(&a, AlgebraClass::Bl),
            Err(Error::Signature(_))
        ));
    }

    #[test]
    fn class_names_round_trip() {
        for c in AlgebraClass::ALL {
            assert_eq!(c.as_str().parse::<AlgebraClass>().unwrap(), c);
        }
    }
}
