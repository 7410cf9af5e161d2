use padic_fundsol::cli::{run, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["padic-fundsol"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = invoke(&a);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn zeta_of_monomial_product() {
    let (code, out, _) = invoke(&["zeta", "--p", "3", "--f", "x1*x2", "--ball", "0,0@0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "(4/9) / ((1 - 3^-1*t)^2)");
    let v = json(&["zeta", "--p", "3", "--f", "x1*x2"]);
    assert_eq!(v["certified"], Value::Bool(true));
    assert_eq!(v["poles"][0]["real_part"], "-1");
    assert_eq!(v["poles"][0]["order"], 2);
}

#[test]
fn degenerate_input_exits_partial() {
    let args = ["zeta", "--p", "2", "--f", "x1^2*x2^2+x1^3+x2^5", "--depth", "3"];
    let (code, out, _) = invoke(&args);
    assert_eq!(code, EXIT_PARTIAL);
    assert!(out.contains("undecided"));
    let mut partial = args.to_vec();
    partial.push("--allow-partial");
    assert_eq!(invoke(&partial).0, EXIT_OK);
}

#[test]
fn verify_passes() {
    let (code, out, _) = invoke(&["verify", "--p", "5", "--f", "xi", "--beta", "1", "--trials", "5", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.contains(": ok ")).count(), 5);
}

#[test]
fn usage_errors() {
    assert_eq!(invoke(&["zeta", "--p", "4", "--f", "x"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["zeta", "--p", "3", "--f", "x1^^2"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["zeta", "--p", "3"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["zeta", "--p", "3", "--f", "x", "--chi", "4,1"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
}

#[test]
fn laurent_and_pairings() {
    let v = json(&["laurent", "--p", "3", "--f", "x", "--beta", "1"]);
    assert_eq!(v["order"], -1);
    assert_eq!(v["coefficients"][1]["exact"], "1/3");
    let v = json(&["pair-t", "--p", "3", "--f", "x", "--beta", "1", "--ball", "1@1"]);
    assert_eq!(v["exact"], "1/3");
    let v = json(&["pair-e", "--p", "2", "--f", "xi", "--beta", "0.5"]);
    assert_eq!(v["exact"], Value::Null);
    let re: f64 = v["value"]["re"].as_str().unwrap().parse().unwrap();
    assert!((re - 0.5 / (1.0 - 2f64.powf(-0.5))).abs() < 1e-12);
}

#[test]
fn twisted_zeta_vanishes() {
    let v = json(&["zeta", "--p", "5", "--f", "x", "--chi", "2,1"]);
    assert_eq!(v["text"], "0");
}

#[test]
fn oracle_brackets() {
    let (code, out, _) = invoke(&["oracle", "--p", "3", "--f", "x1^2+x2^2", "--s0", "0.5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("inside"));
}

#[test]
fn apply_and_solve_files() {
    let dir = tempfile::tempdir().unwrap();
    let phi = dir.path().join("phi.json");
    std::fs::write(
        &phi,
        r#"{"n":1,"p":3,"terms":[{"level":0,"center":["0"],"coeff":{"re":"1","im":"0"}}]}"#,
    )
    .unwrap();
    let phi = phi.to_str().unwrap();
    let result = dir.path().join("result.json");
    let (code, _, err) = invoke(&[
        "apply", "--p", "3", "--f", "xi^2+1", "--beta", "1", "--in", phi, "--depth", "30", "--out",
        result.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    assert_eq!(v["exact"], Value::Bool(true));
    assert_eq!(v["l2_error_bound"], "0");

    let (code, _, _) = invoke(&["apply", "--p", "3", "--f", "xi", "--beta", "1/2", "--in", phi, "--depth", "4"]);
    assert_eq!(code, EXIT_PARTIAL);

    let u = dir.path().join("u.json");
    let (code, out, err) = invoke(&[
        "solve", "--p", "3", "--f", "xi^2+1", "--beta", "1", "--g", phi, "--window", "2,2", "--check", "--out",
        u.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let residual: f64 = out.lines().last().unwrap().trim_start_matches("residual: ").parse().unwrap();
    assert!(residual < 1e-8);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&u).unwrap()).unwrap();
    assert_eq!(v["u"]["re"].as_array().unwrap().len(), 81);
}

#[test]
fn output_is_deterministic_and_cache_coherent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let cache = cache.to_str().unwrap();
    let base = ["zeta", "--p", "7", "--f", "x1^2+x2^2", "--json"];
    let cold = invoke(&base).1;
    assert_eq!(cold, invoke(&base).1);
    let mut cached = base.to_vec();
    cached.extend(["--cache-dir", cache]);
    let first = invoke(&cached).1;
    let entries: Vec<_> = std::fs::read_dir(cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = invoke(&cached).1;
    assert_eq!(cold, first);
    assert_eq!(cold, second);
    // a different depth is a different key
    let mut deeper = cached.clone();
    deeper.extend(["--depth", "41"]);
    assert_eq!(invoke(&deeper).1, cold);
    assert_eq!(std::fs::read_dir(cache).unwrap().count(), 2);
}
