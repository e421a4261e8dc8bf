use std::path::PathBuf;

use jacobi_forms::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["jacobi-forms"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jacobi-forms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn has_decimal_point(s: &str) -> bool {
    let b = s.as_bytes();
    (1..b.len().saturating_sub(1)).any(|i| b[i] == b'.' && b[i - 1].is_ascii_digit() && b[i + 1].is_ascii_digit())
}

#[test]
fn dh_check_passes() {
    let (code, out, _) = call(&["dh-check", "--p", "7", "--r", "1", "--n", "2", "--e", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("J form") && out.contains("matrix form"));
}

#[test]
fn bad_dickson_solution_exits_one() {
    let bad = scratch("bad.json", r#"{"l":3,"prime_power":7,"x":["2","1"],"gamma":null}"#);
    let (code, out, _) = call(&["dickson", "verify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
    let good = scratch("good.json", r#"{"l":3,"prime_power":7,"x":["1","-1"],"gamma":3}"#);
    assert_eq!(call(&["dickson", "verify", good.to_str().unwrap()]).0, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["jacobi", "--p", "7", "--e", "3", "--nonsense"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["jacobi", "--p", "9", "--e", "2"]).0, 2);
    assert_eq!(call(&["--budget", "3", "jacobi", "--p", "7", "--e", "3"]).0, 2);
    assert_eq!(call(&["verify-all", "--only", "11"]).0, 2);
}

#[test]
fn jacobi_json_shows_character_sum() {
    let (code, out, _) = call(&["jacobi", "--p", "7", "--e", "3", "--gamma", "3", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["display"][1][1], "2 + 3ζ²");
    assert_eq!(v["table"]["e"], 3);
}

#[test]
fn output_is_deterministic_and_exact() {
    let args = ["fourier-check", "--p", "13", "--e", "3", "--seed", "9", "--format", "json"];
    let (c1, o1, _) = call(&args);
    let (c2, o2, _) = call(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    for args in [&["cyc", "--p", "31", "--e", "5", "--json"][..], &["dickson", "extract", "--l", "7", "--p", "29", "--json"]] {
        let (code, out, _) = call(args);
        assert_eq!(code, 0);
        assert!(!has_decimal_point(&out), "{out}");
    }
}

#[test]
fn variety_round_trip() {
    // the point of J*_11(1,1) for l = 5, f = 2, written out by the library
    let spec = jacobi_forms::variety::VarietySpec::new(5, 2, None).unwrap();
    let x = jacobi_forms::variety::samples::jacobi_point(&spec, 11).unwrap();
    let y = jacobi_forms::variety::samples::jacobi_point(&spec, 31).unwrap();
    let xp = scratch("x.json", &serde_json::to_string(&spec.to_json(&x)).unwrap());
    let yp = scratch("y.json", &serde_json::to_string(&spec.to_json(&y)).unwrap());
    let (code, out, _) = call(&["variety", "check", "--l", "5", "--f", "2", xp.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h"], "11");
    assert_eq!(v["on_W"], true);
    let (code, out, _) = call(&["variety", "fiber", "--l", "5", "--f", "2", xp.to_str().unwrap(), yp.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = call(&["variety", "compose", "--d", "-1", xp.to_str().unwrap(), yp.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let zp = scratch("z.json", &out);
    let (_, out, _) = call(&["variety", "check", "--l", "5", "--f", "2", zp.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h"], "341");
    let (code, out, _) = call(&["variety", "invert", "--d", "-1", xp.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let ip = scratch("inv.json", &out);
    let (_, out, _) = call(&["variety", "check", "--l", "5", "--f", "2", ip.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h"], "1/11");
    let zero = scratch("zero.json", r#"{"l":5,"f":2,"x":["0","0","0","0"]}"#);
    assert_eq!(call(&["variety", "invert", "--d", "-1", zero.to_str().unwrap()]).0, 1);
    assert_eq!(call(&["variety", "fiber", "--l", "5", "--f", "2", zero.to_str().unwrap(), yp.to_str().unwrap()]).0, 1);
}

#[test]
fn dickson_lift_via_cli() {
    let (_, a, _) = call(&["dickson", "extract", "--l", "3", "--p", "7", "--json"]);
    let (_, b, _) = call(&["dickson", "extract", "--l", "3", "--p", "13", "--json"]);
    let a: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b: serde_json::Value = serde_json::from_str(&b).unwrap();
    let ap = scratch("a.json", &a["solution"].to_string());
    let bp = scratch("b.json", &b["solution"].to_string());
    let (code, out, _) = call(&["dickson", "lift", "--l", "3", "--d", "1", ap.to_str().unwrap(), bp.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solution"]["prime_power"], 91);
}

#[test]
fn compose_and_verify_tables() {
    let (_, a, _) = call(&["jacobi", "--p", "7", "--e", "3", "--json"]);
    let (_, b, _) = call(&["jacobi", "--p", "13", "--e", "3", "--json"]);
    let a: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b: serde_json::Value = serde_json::from_str(&b).unwrap();
    let ap = scratch("ta.json", &a["table"].to_string());
    let bp = scratch("tb.json", &b["table"].to_string());
    let (code, out, _) = call(&["compose", "genjacobi", "--d", "2", ap.to_str().unwrap(), bp.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cp = scratch("tc.json", &v["table"].to_string());
    assert_eq!(call(&["verify", "axioms", "--in", cp.to_str().unwrap()]).0, 0);
    let (_, m, _) = call(&["cyc", "--p", "13", "--e", "3", "--json"]);
    let m: serde_json::Value = serde_json::from_str(&m).unwrap();
    let mp = scratch("m.json", &m["mult"].to_string());
    assert_eq!(call(&["verify", "matrix", "--in", mp.to_str().unwrap()]).0, 0);
    let (code, _, _) = call(&["compose", "matrices", "--d", "-1", mp.to_str().unwrap(), mp.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(call(&["verify", "t7", "--p", "4", "--e", "3"]).0, 2);
    assert_eq!(call(&["verify", "t7", "--p", "2", "--r", "2", "--e", "3"]).0, 0);
    assert_eq!(call(&["verify", "t8", "--p", "13", "--e", "4"]).0, 0);
}

#[test]
fn verify_all_subset() {
    let (code, out, _) = call(&["verify-all", "--only", "4,9"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("criterion  4") && out.contains("criterion  9"));
}
