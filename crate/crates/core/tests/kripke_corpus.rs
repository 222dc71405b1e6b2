use std::time::Instant;

use reslat_core::algebra::names::{cocyl, cyl, diag, ONE};
use reslat_core::kripke::{
    compose, random_faults, random_kripke, set_algebra, table_positions, entry, undetected_fault,
    verify_derived_identities, verify_gpha_axioms, verify_heyting_quantifiers, Fault,
    KripkeSystem, RandomBounds, SemigroupG, SetAlgebra,
};

fn corpus(count: u64) -> Vec<SetAlgebra> {
    let b = RandomBounds::new(3, 3, 3);
    (0..count)
        .map(|seed| {
            let sys = random_kripke(seed, b).unwrap();
            let g = SemigroupG::full(sys.alpha).unwrap();
            set_algebra(&sys, &g, true).unwrap()
        })
        .collect()
}

/// Every element is an up-set of points: true at (k,x) implies true at (l,x)
/// for all l >= k.
fn monotone(sa: &SetAlgebra, e: usize) -> bool {
    let m = sa.mask(e);
    let pts = sa.points();
    pts.iter().enumerate().all(|(p, (k, x))| {
        m >> p & 1 == 0
            || pts
                .iter()
                .enumerate()
                .all(|(q, (l, y))| y != x || !sa.system.leq[*k][*l] || m >> q & 1 == 1)
    })
}

#[test]
fn random_corpus_passes_every_suite() {
    let start = Instant::now();
    for (seed, sa) in corpus(30).iter().enumerate() {
        let alg = &sa.algebra;
        let d = verify_derived_identities(alg).unwrap();
        assert!(d.passed, "seed {seed}: {:?}", d.violations);
        let g = verify_gpha_axioms(alg, &sa.g).unwrap();
        assert!(g.passed, "seed {seed}: {:?}", g.violations);
        for j in 0..sa.system.alpha {
            let q = verify_heyting_quantifiers(alg, j).unwrap();
            assert!(q.passed, "seed {seed}: {:?}", q.violations);
        }
    }
    eprintln!("30 systems verified in {:?}", start.elapsed());
}

#[test]
fn operator_invariants_hold_on_corpus() {
    for sa in corpus(40) {
        let alg = &sa.algebra;
        let l = alg.lattice().unwrap();
        let n = alg.size();
        for e in 0..n {
            assert!(monotone(&sa, e));
        }
        for j in 0..sa.system.alpha {
            let c = alg.unary(&cyl(j)).unwrap();
            let q = alg.unary(&cocyl(j)).unwrap();
            for x in 0..n {
                assert!(l.leq(q.apply(x), x) && l.leq(x, c.apply(x)));
                assert_eq!(c.apply(c.apply(x)), c.apply(x));
                assert_eq!(q.apply(q.apply(x)), q.apply(x));
                for y in 0..n {
                    assert_eq!(c.apply(l.join(x, y)), l.join(c.apply(x), c.apply(y)));
                    assert_eq!(q.apply(l.meet(x, y)), l.meet(q.apply(x), q.apply(y)));
                }
            }
        }
        let maps = sa.g.maps();
        let s = |t: &[usize]| alg.unary(&reslat_core::algebra::names::subst(t)).unwrap();
        for sg in maps {
            for t in maps {
                let (a, b, st) = (s(sg), s(t), s(&compose(sg, t)));
                for x in 0..n {
                    assert_eq!(a.apply(b.apply(x)), st.apply(x));
                }
            }
        }
        let a = sa.system.alpha;
        let d = |k: usize, m: usize| alg.constant(&diag(k, m)).unwrap();
        for k in 0..a {
            for m in 0..a {
                for u in 0..a {
                    assert!(l.leq(l.meet(d(k, m), d(m, u)), d(k, u)));
                }
            }
        }
    }
}

/// Diagonal element computed from its definition, independent of the
/// builder's point bookkeeping.
#[test]
fn diagonals_match_definition() {
    for sa in corpus(20) {
        let a = sa.system.alpha;
        for i in 0..a {
            for j in 0..a {
                let e = sa.algebra.constant(&diag(i, j)).unwrap();
                let f = sa.decode(e);
                for (k, vals) in f.values.iter().enumerate() {
                    for (v, x) in vals.iter().zip(sa.system.assignment_set(k)) {
                        assert_eq!(*v, x[i] == x[j]);
                    }
                }
            }
        }
    }
}

#[test]
fn random_single_entry_faults_are_detected() {
    for (seed, sa) in corpus(30).iter().enumerate() {
        let faults = random_faults(&sa.algebra, seed as u64, 5);
        let miss = undetected_fault(&sa.algebra, &sa.g, faults).unwrap();
        assert_eq!(miss, None, "seed {seed}");
    }
}

fn exhaustive_faults(sa: &SetAlgebra) -> Vec<Fault> {
    let n = sa.algebra.size();
    let mut out = Vec::new();
    for (op, index) in table_positions(&sa.algebra) {
        let cur = entry(&sa.algebra, &op, index).unwrap();
        for value in (0..n).filter(|&v| v != cur) {
            out.push(Fault { op: op.clone(), index, value });
        }
    }
    out
}

#[test]
fn every_single_entry_fault_is_detected_on_small_systems() {
    let two_worlds = KripkeSystem {
        worlds: vec!["u".into(), "v".into()],
        leq: vec![vec![true, true], vec![false, true]],
        elements: vec!["a".into(), "b".into()],
        base: vec![vec![0], vec![0, 1]],
        assignments: None,
        alpha: 1,
    };
    let systems = [
        (KripkeSystem::single(&["a", "b"], 1).unwrap(), false),
        (two_worlds, true),
        (KripkeSystem::single(&["a", "b"], 2).unwrap(), true),
    ];
    for (sys, diagonals) in systems {
        let g = SemigroupG::full(sys.alpha).unwrap();
        let sa = set_algebra(&sys, &g, diagonals).unwrap();
        let faults = exhaustive_faults(&sa);
        let miss = undetected_fault(&sa.algebra, &g, faults).unwrap();
        assert_eq!(miss, None);
    }
}

#[test]
fn seed_one_matches_golden_file() {
    let sys = random_kripke(1, RandomBounds::new(2, 2, 2)).unwrap();
    let golden = include_str!("golden/kripke_seed1.json");
    assert_eq!(sys.to_json(), golden.trim_end());
    assert_eq!(KripkeSystem::from_json(golden).unwrap(), sys);
}

#[test]
fn top_is_fixed_by_all_quantifiers() {
    for sa in corpus(10) {
        let one = sa.algebra.constant(ONE).unwrap();
        for j in 0..sa.system.alpha {
            assert_eq!(sa.algebra.unary(&cocyl(j)).unwrap().apply(one), one);
        }
    }
}
