use std::process::{Command, Output};

use reslat_core::algebra::chain::{make_chain, ChainSpec};
use reslat_core::algebra::io::algebra_to_value;
use serde_json::{json, Value};

fn reslat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn prelinearity_is_valid_on_luk_chains() {
    let o = reslat(&["taut", "(p0->p1)\\/(p1->p0)", "--chains", "luk:2..6", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["valid"], true);
}

#[test]
fn excluded_middle_fails_at_one_half() {
    let o = reslat(&["taut", "p0\\/~p0", "--chains", "luk:3", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["counter"]["valuation"], "p0=1/2");
}

#[test]
fn godel3_is_not_mv() {
    let o = reslat(&["check", "builtin:godel:3", "--class", "mv", "--json"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    let dn = r["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["axiom"].as_str().unwrap().contains("double-negation"))
        .expect("double-negation violation");
    assert_eq!(dn["witness"], json!(["1/2"]));
    assert_eq!(dn["reverified"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&reslat(&["frobnicate"])), 2);
    assert_eq!(code(&reslat(&["taut", "p0", "--chains", "luk:3", "--bogus"])), 2);
    assert_eq!(code(&reslat(&["taut", "p0 ->", "--chains", "luk:3"])), 2);
    assert_eq!(code(&reslat(&["check", "nosuch:3", "--class", "mv"])), 2);
}

#[test]
fn oversized_free_algebra_exits_3() {
    assert_eq!(code(&reslat(&["free", "--variety", "luk:3", "--gens", "3"])), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["kripke", "verify", "--random", "4", "--seed", "7", "--alpha", "2", "--faults", "2", "--json"];
    let a = reslat(&args);
    let b = reslat(&["--threads", "1", "kripke", "verify", "--random", "4", "--seed", "7", "--alpha", "2", "--faults", "2", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn free_boolean_decomposes() {
    let o = reslat(&["free", "--variety", "luk:2", "--gens", "2", "--atoms", "--decompose-check", "--json"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["size"], 16);
    assert_eq!(r["atoms"].as_array().unwrap().len(), 4);
    assert_eq!(r["decomposition"]["right_size"], 256);
}

#[test]
fn interpolant_over_the_shared_generator() {
    let o = reslat(&[
        "interp", "--alg", "free:ba:3", "--x", "g0 /\\ g1", "--z", "g1 \\/ g2", "--x1", "g0,g1", "--x2", "g1,g2", "--json",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["interpolant"], "g1");
}

#[test]
fn sheaf_of_boolean_algebra() {
    let o = reslat(&["sheaf", "ba:2", "--eta", "--regularity", "--json"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["eta"]["iso"], true);
    assert_eq!(r["stalk_sizes"], json!([2, 2]));
}

#[test]
fn spectrum_lemma_failure_has_witness() {
    let o = reslat(&["spectrum", "godel:3", "--max", "--verify-lemma", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["lemma_violations"][0]["item"], "vi-backward");
}

#[test]
fn omit_and_lindenbaum_on_a_theory_file() {
    let dir = tempfile::tempdir().unwrap();
    let theory = dir.path().join("t.json");
    let types = dir.path().join("types.json");
    std::fs::write(&theory, r#"{"format":"reslat/1","axioms":[],"chains":["luk:2"]}"#).unwrap();
    std::fs::write(&types, r#"{"format":"reslat/1","types":[["p0"]]}"#).unwrap();
    let (t, ty) = (theory.to_str().unwrap(), types.to_str().unwrap());

    let o = reslat(&["lindenbaum", "--theory", t, "--vars", "1", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["classes"], 4);

    let o = reslat(&["omit", "--alg", t, "--inside", "1", "--types", ty, "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["filter"], json!(["1", "~p0"]));

    let o = reslat(&["omit", "--alg", t, "--inside", "p0", "--types", ty, "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["result"], "no generic point");
}

#[test]
fn amalgamate_trivial_formation() {
    let two = algebra_to_value(&make_chain(ChainSpec::luk(2)).unwrap());
    let three = algebra_to_value(&make_chain(ChainSpec::luk(3)).unwrap());
    let problem = json!({"format": "reslat/1", "a": three, "b": three, "c": two, "m": [0, 2], "n": [0, 2]});
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, problem.to_string()).unwrap();
    let p = p.to_str().unwrap();
    let o = reslat(&["amalgamate", "--problem", p, "--max-size", "9", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&o)["result"], "found");
    assert_eq!(report(&o)["size"], 3);
    // 1/2 <= 1/2 across the two copies has no interpolant in {0, 1}.
    let o = reslat(&["amalgamate", "--problem", p, "--max-size", "9", "--super", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["result"], "none within bound");
}
