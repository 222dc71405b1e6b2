//! `reslat`: command-line front end for reslat-core.
//!
//! Exit codes: 0 pass or witness found, 1 counterexample or nothing found
//! (the report carries the witness), 2 usage or input error, 3 resource
//! bound exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use reslat_core::algebra::axioms::{check_class_axioms, reverify, AlgebraClass};
use reslat_core::algebra::chain::parse_chain_list;
use reslat_core::algebra::io::{algebra_from_value, check_format};
use reslat_core::amalgam::{
    amalgamate, find_superamalgam, interpolant_search, superamalgam_check, AmalgamProblem, DEFAULT_POWER_BOUND,
};
use reslat_core::corpus::{self, run_criterion, CRITERIA};
use reslat_core::free::{atoms, free_algebra, free_product_decomposition_check, is_atomic, VarietySpec};
use reslat_core::kripke::{
    random_faults, random_kripke, set_algebra, undetected_fault, verify_derived_identities, verify_gpha_axioms,
    verify_heyting_quantifiers, KripkeSystem, RandomBounds, SemigroupG,
};
use reslat_core::logic::{
    eval, generic_filter, is_tautology, lindenbaum, non_principal_certify, parse, type_space, types_from_json,
    Formula, Mode, Theory, Valuation,
};
use reslat_core::sheaf::{
    default_operators, dual_sheaf, eta_check, regular_ideals_open_sets, regularity, strongly_regular_equiv_check,
};
use reslat_core::spectra::zariski::verify_dm_lemma;
use reslat_core::spectra::{enumerate_filters, FilterKind};
use reslat_core::{Elem, Error, FiniteAlgebra, Result};

#[derive(Parser)]
#[command(name = "reslat", version, about = "Finite residuated lattices and their logics")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an algebra against a class's axioms.
    Check {
        alg: String,
        /// residuated-lattice (or rl), bl, mv, heyting, boolean.
        #[arg(long)]
        class: String,
    },
    /// Prime (or maximal) filters, optionally with the D_M/V_M identities.
    Spectrum {
        alg: String,
        #[arg(long)]
        max: bool,
        #[arg(long)]
        verify_lemma: bool,
    },
    /// Free algebra of the variety generated by the listed algebras.
    Free {
        /// Comma list of algebra files or builtin names.
        #[arg(long)]
        variety: String,
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        atoms: bool,
        /// Search for Fr_n x Fr_n ≅ Fr_{n+1}.
        #[arg(long)]
        decompose_check: bool,
    },
    /// Decide whether a formula is valid on every listed chain.
    Taut {
        formula: String,
        #[arg(long)]
        chains: String,
    },
    /// Lindenbaum algebra of a theory file.
    Lindenbaum {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        vars: usize,
    },
    /// Interpolant between x in Sg(X1) and z in Sg(X2).
    Interp {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        z: String,
        #[arg(long, value_delimiter = ',')]
        x1: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        x2: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_POWER_BOUND)]
        max_power: usize,
    },
    /// Search for an amalgam (or superamalgam) of a V-formation.
    Amalgamate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        max_size: usize,
        #[arg(long = "super")]
        superamalgam: bool,
    },
    /// Kripke set algebras.
    Kripke {
        #[command(subcommand)]
        action: KripkeCmd,
    },
    /// Dual sheaf of an algebra with operators.
    Sheaf {
        alg: String,
        #[arg(long)]
        eta: bool,
        #[arg(long)]
        regularity: bool,
        /// Operator names; defaults to the cylindrifiers or unary tables.
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<String>>,
    },
    /// Generic maximal filter omitting a family of types.
    Omit {
        /// Theory file, algebra file or builtin name.
        #[arg(long)]
        alg: String,
        #[arg(long)]
        inside: String,
        #[arg(long)]
        types: PathBuf,
        /// Variable count when `--alg` is a theory.
        #[arg(long)]
        vars: Option<usize>,
    },
    /// The end-to-end check suite.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum KripkeCmd {
    /// Verify the equational theory on random or given systems.
    Verify {
        /// Number of seeded random systems.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 3)]
        max_base: usize,
        #[arg(long, default_value_t = 3)]
        alpha: usize,
        /// A Kripke system file instead of random systems.
        #[arg(long, conflicts_with = "random")]
        system: Option<PathBuf>,
        /// Random single-entry faults injected per system.
        #[arg(long, default_value_t = 0)]
        faults: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    Run {
        /// Run one criterion only.
        #[arg(long)]
        only: Option<usize>,
    },
}

/// A report and whether it counts as a pass.
struct Outcome {
    pass: bool,
    report: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("reslat: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(out) => {
            emit(&out.report, cli.json);
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("reslat: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}

fn emit(report: &Value, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).unwrap_or_default());
        return;
    }
    match report {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::String(s) => println!("{k}: {s}"),
                    Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                        println!("{k}:");
                        for it in items {
                            println!("  {it}");
                        }
                    }
                    other => println!("{k}: {other}"),
                }
            }
        }
        other => println!("{other}"),
    }
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Check { alg, class } => check(&alg, &class),
        Cmd::Spectrum { alg, max, verify_lemma } => spectrum(&alg, max, verify_lemma),
        Cmd::Free {
            variety,
            gens,
            atoms,
            decompose_check,
        } => free(&variety, gens, atoms, decompose_check),
        Cmd::Taut { formula, chains } => taut(&formula, &chains),
        Cmd::Lindenbaum { theory, vars } => lindenbaum_cmd(&theory, vars),
        Cmd::Interp {
            alg,
            x,
            z,
            x1,
            x2,
            max_power,
        } => interp(&alg, &x, &z, &x1, &x2, max_power),
        Cmd::Amalgamate {
            problem,
            max_size,
            superamalgam,
        } => amalgamate_cmd(&problem, max_size, superamalgam),
        Cmd::Kripke {
            action:
                KripkeCmd::Verify {
                    random,
                    seed,
                    max_worlds,
                    max_base,
                    alpha,
                    system,
                    faults,
                },
        } => kripke_verify(random, seed, RandomBounds::new(max_worlds, max_base, alpha), system, faults),
        Cmd::Sheaf {
            alg,
            eta,
            regularity,
            ops,
        } => sheaf(&alg, eta, regularity, ops),
        Cmd::Omit {
            alg,
            inside,
            types,
            vars,
        } => omit(&alg, &inside, &types, vars),
        Cmd::Corpus {
            action: CorpusCmd::Run { only },
        } => corpus_run(only),
    }
}

fn labels(alg: &FiniteAlgebra, xs: impl IntoIterator<Item = Elem>) -> Vec<String> {
    xs.into_iter().map(|x| alg.label(x)).collect()
}

/// An element given by its label, its index, or a term over the labels
/// that are identifiers.
fn element(alg: &FiniteAlgebra, text: &str) -> Result<Elem> {
    let text = text.trim();
    if let Some(e) = alg.element(text) {
        return Ok(e);
    }
    if let Ok(i) = text.parse::<usize>() {
        if i < alg.size() {
            return Ok(i);
        }
    }
    let f = parse(text)?;
    let val: Valuation = (0..alg.size()).map(|e| (alg.label(e), e)).collect();
    eval(&f, alg, &val, Mode::Primitive)
}

fn class_of(s: &str) -> Result<AlgebraClass> {
    match s {
        "rl" => Ok(AlgebraClass::ResiduatedLattice),
        other => other.parse(),
    }
}

fn check(alg: &str, class: &str) -> Result<Outcome> {
    let a = corpus::load(alg)?;
    let class = class_of(class)?;
    let rep = check_class_axioms(&a, class)?;
    let mut violations = Vec::new();
    for v in &rep.violations {
        violations.push(json!({
            "axiom": v.axiom,
            "witness": labels(&a, v.witness.iter().copied()),
            "reverified": reverify(&a, class, v)?,
        }));
    }
    Ok(Outcome {
        pass: rep.passed,
        report: json!({
            "algebra": a.name(),
            "class": class.as_str(),
            "passed": rep.passed,
            "violations": violations,
        }),
    })
}

fn spectrum(alg: &str, max: bool, verify_lemma: bool) -> Result<Outcome> {
    let a = corpus::load(alg)?;
    let kind = if max { FilterKind::Maximal } else { FilterKind::Prime };
    let filters: Vec<Vec<String>> = enumerate_filters(&a, kind)?
        .iter()
        .map(|f| labels(&a, f.ones()))
        .collect();
    let mut report = json!({
        "algebra": a.name(),
        "kind": if max { "maximal" } else { "prime" },
        "points": filters.len(),
        "filters": filters,
    });
    let mut pass = true;
    if verify_lemma {
        let bound = if a.size() <= 16 { 3 } else { 2 };
        let rep = verify_dm_lemma(&a, bound)?;
        pass = rep.passed;
        let v: Vec<Value> = rep
            .violations
            .iter()
            .map(|v| json!({"item": v.axiom, "witness": labels(&a, v.witness.iter().copied())}))
            .collect();
        report["lemma_subset_bound"] = json!(bound);
        report["lemma_passed"] = json!(rep.passed);
        report["lemma_violations"] = json!(v);
    }
    Ok(Outcome { pass, report })
}

fn free(variety: &str, gens: usize, want_atoms: bool, decompose: bool) -> Result<Outcome> {
    let generators = variety
        .split(',')
        .map(|s| corpus::load(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let v = VarietySpec::new(generators)?;
    let fr = free_algebra(&v, gens)?;
    let a = &fr.algebra;
    let mut report = json!({
        "variety": v.name(),
        "generators": gens,
        "size": a.size(),
        "coordinates": fr.coordinates.len(),
    });
    let mut pass = true;
    if want_atoms {
        let at = atoms(a)?;
        report["atoms"] = json!(labels(a, at.iter().copied()));
        report["atomic"] = json!(serde_json::to_value(is_atomic(a)?)?);
    }
    if decompose {
        let chk = free_product_decomposition_check(&v, gens)?;
        pass = chk.iso.is_some();
        report["decomposition"] = json!({
            "left_size": chk.left_size,
            "right_size": chk.right_size,
            "isomorphism": chk.iso,
        });
    }
    Ok(Outcome { pass, report })
}

fn taut(formula: &str, chains: &str) -> Result<Outcome> {
    let f = parse(formula)?;
    let chains = parse_chain_list(chains)?;
    let rep = is_tautology(&f, &chains)?;
    let counter = rep.counter.as_ref().map(|c| {
        let assignment: Vec<String> = c.valuation.iter().map(|(k, v)| format!("{k}={v}")).collect();
        json!({"chain": c.chain, "valuation": assignment.join(" "), "value": c.value})
    });
    Ok(Outcome {
        pass: rep.valid,
        report: json!({
            "formula": f.to_string(),
            "valid": rep.valid,
            "valuations": rep.valuations,
            "counter": counter,
        }),
    })
}

fn lindenbaum_cmd(theory: &Path, vars: usize) -> Result<Outcome> {
    let t = Theory::load(theory)?;
    let l = lindenbaum(&t, vars)?;
    let ts = type_space(&l.algebra)?;
    let principal = ts.principal.iter().filter(|p| p.is_some()).count();
    Ok(Outcome {
        pass: true,
        report: json!({
            "classes": l.algebra.size(),
            "models": l.models,
            "representatives": l.representatives.iter().map(Formula::to_string).collect::<Vec<_>>(),
            "types": ts.space.len(),
            "principal_types": principal,
        }),
    })
}

fn interp(alg: &str, x: &str, z: &str, x1: &[String], x2: &[String], max_power: usize) -> Result<Outcome> {
    let a = corpus::load(alg)?;
    let set = |xs: &[String]| xs.iter().map(|s| element(&a, s)).collect::<Result<Vec<_>>>();
    let (x1, x2) = (set(x1)?, set(x2)?);
    let (xe, ze) = (element(&a, x)?, element(&a, z)?);
    let found = interpolant_search(&a, &x1, &x2, xe, ze, max_power)?;
    Ok(Outcome {
        pass: found.is_some(),
        report: json!({
            "x": a.label(xe),
            "z": a.label(ze),
            "interpolant": found.as_ref().map(|i| a.label(i.y)),
            "kind": found.map(|i| serde_json::to_value(i.kind)).transpose()?,
        }),
    })
}

fn amalgamate_cmd(path: &Path, max_size: usize, superamalgam: bool) -> Result<Outcome> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    check_format(v.get("format").and_then(Value::as_str))?;
    let part = |k: &str| -> Result<Value> {
        v.get(k)
            .cloned()
            .ok_or_else(|| Error::InvalidSpec(format!("problem file lacks {k:?}")))
    };
    let map = |k: &str| -> Result<Vec<Elem>> { Ok(serde_json::from_value(part(k)?)?) };
    let p = AmalgamProblem::new(
        algebra_from_value(part("a")?)?,
        algebra_from_value(part("b")?)?,
        algebra_from_value(part("c")?)?,
        map("m")?,
        map("n")?,
    )?;
    let found = if superamalgam {
        find_superamalgam(&p, max_size)?
    } else {
        amalgamate(&p, max_size)?
    };
    let Some(am) = found else {
        return Ok(Outcome {
            pass: false,
            report: json!({"result": "none within bound", "max_size": max_size}),
        });
    };
    let mut report = json!({
        "result": "found",
        "size": am.d.size(),
        "k": am.k,
        "h": am.h,
    });
    if superamalgam {
        report["superamalgam"] = json!(superamalgam_check(&p, &am)?.holds);
    }
    Ok(Outcome { pass: true, report })
}

fn kripke_verify(
    random: Option<u64>,
    seed: u64,
    bounds: RandomBounds,
    system: Option<PathBuf>,
    faults: usize,
) -> Result<Outcome> {
    let systems: Vec<(Option<u64>, KripkeSystem)> = match system {
        Some(p) => vec![(None, KripkeSystem::load(&p)?)],
        None => (seed..seed + random.unwrap_or(1))
            .map(|s| Ok((Some(s), random_kripke(s, bounds)?)))
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    let mut pass = true;
    for (s, sys) in systems {
        let g = SemigroupG::full(sys.alpha)?;
        let sa = set_algebra(&sys, &g, true)?;
        let alg = &sa.algebra;
        let mut reports = vec![verify_derived_identities(alg)?, verify_gpha_axioms(alg, &g)?];
        for j in 0..sys.alpha {
            reports.push(verify_heyting_quantifiers(alg, j)?);
        }
        let failing: Vec<Value> = reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| json!({"suite": r.suite, "violations": r.violations}))
            .collect();
        let missed = if faults > 0 {
            undetected_fault(alg, &g, random_faults(alg, s.unwrap_or(0), faults))?
        } else {
            None
        };
        let ok = failing.is_empty() && missed.is_none();
        pass &= ok;
        rows.push(json!({
            "seed": s,
            "worlds": sys.worlds.len(),
            "alpha": sys.alpha,
            "elements": alg.size(),
            "passed": ok,
            "failing": failing,
            "undetected_fault": missed,
        }));
    }
    Ok(Outcome {
        pass,
        report: json!({"systems": rows.len(), "passed": pass, "results": rows}),
    })
}

fn sheaf(alg: &str, eta: bool, reg: bool, ops: Option<Vec<String>>) -> Result<Outcome> {
    let a = corpus::load(alg)?;
    let ops = ops.unwrap_or_else(|| default_operators(&a));
    let sh = dual_sheaf(&a, &ops, &[])?;
    let stalks: Vec<usize> = sh.stalks.iter().map(|s| s.algebra.size()).collect();
    let mut report = json!({
        "algebra": a.name(),
        "operators": ops,
        "points": labels(&sh.base, sh.points.iter().map(|p| p.generator)),
        "stalk_sizes": stalks,
    });
    let mut pass = true;
    if eta {
        let e = eta_check(&sh)?;
        pass &= e.iso;
        report["eta"] = serde_json::to_value(e)?;
    }
    if reg {
        report["regularity"] = serde_json::to_value(regularity(&a, &ops)?)?;
        report["strong_regularity_equivalence"] = serde_json::to_value(strongly_regular_equiv_check(&a, &ops)?)?;
        report["regular_ideals"] = serde_json::to_value(regular_ideals_open_sets(&sh)?)?;
    }
    Ok(Outcome { pass, report })
}

fn omit(alg: &str, inside: &str, types: &Path, vars: Option<usize>) -> Result<Outcome> {
    let type_list = types_from_json(&std::fs::read_to_string(types)?)?;
    let inside_f = parse(inside).ok();
    let as_theory = Path::new(alg).is_file()
        && serde_json::from_str::<Value>(&std::fs::read_to_string(alg)?)?
            .get("axioms")
            .is_some();
    let (a, resolve): (FiniteAlgebra, Box<dyn Fn(&FiniteAlgebra, &Formula, &str) -> Result<Elem>>) = if as_theory {
        let t = Theory::load(Path::new(alg))?;
        let n = vars.unwrap_or_else(|| {
            let mut names: Vec<String> = type_list.iter().flatten().flat_map(Formula::vars).collect();
            names.extend(inside_f.iter().flat_map(Formula::vars));
            names.iter().filter_map(|v| v.strip_prefix('p')?.parse::<usize>().ok()).max().map_or(1, |m| m + 1)
        });
        let l = lindenbaum(&t, n)?;
        let alg = l.algebra.clone();
        (alg, Box::new(move |_, f, _| l.class_of(f)))
    } else {
        (corpus::load(alg)?, Box::new(|a, _, text| element(a, text)))
    };
    let a_elem = match &inside_f {
        Some(f) => resolve(&a, f, inside)?,
        None => element(&a, inside)?,
    };
    let ts = type_space(&a)?;
    let m = ts.space.len();
    let mut avoid = Vec::new();
    let mut certified = Vec::new();
    for ty in &type_list {
        let elems = ty
            .iter()
            .map(|f| resolve(&a, f, &f.to_string()))
            .collect::<Result<Vec<_>>>()?;
        certified.push(non_principal_certify(&a, &elems)?.certified);
        let mut set = ts.space.v_set(&elems);
        set.grow(m);
        avoid.push(set);
    }
    match generic_filter(&a, a_elem, &avoid) {
        Ok(gp) => Ok(Outcome {
            pass: true,
            report: json!({
                "inside": a.label(a_elem),
                "types": type_list.len(),
                "non_principal": certified,
                "nowhere_dense": gp.nowhere_dense,
                "point": gp.index,
                "filter": labels(&a, gp.filter.iter().copied()),
            }),
        }),
        Err(Error::NoGenericPoint(why)) => Ok(Outcome {
            pass: false,
            report: json!({
                "inside": a.label(a_elem),
                "types": type_list.len(),
                "non_principal": certified,
                "result": "no generic point",
                "obstruction": why,
            }),
        }),
        Err(e) => Err(e),
    }
}

fn corpus_run(only: Option<usize>) -> Result<Outcome> {
    let ids: Vec<usize> = match only {
        Some(i) => vec![i],
        None => (1..=CRITERIA.len()).collect(),
    };
    let mut rows = Vec::new();
    let mut pass = true;
    for id in ids {
        let out = run_criterion(id)?;
        eprintln!(
            "criterion {:>2} {:<36} {} ({} ms)",
            out.id,
            out.name,
            if out.passed { "PASS" } else { "FAIL" },
            out.elapsed_ms
        );
        pass &= out.passed;
        let mut row = serde_json::to_value(out)?;
        if let Value::Object(m) = &mut row {
            m.remove("elapsed_ms");
        }
        rows.push(row);
    }
    Ok(Outcome {
        pass,
        report: json!({"passed": pass, "criteria": rows}),
    })
}
