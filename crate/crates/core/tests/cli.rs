use corrterm::cli::{run, Report, EXIT_BUDGET, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("corrterm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Report {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = call(&a);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn dinv_case_one() {
    let r = json(&["dinv", "--braid", "1 -2 -2 1 -2 -2 -2 -2"]);
    let t = r.d_table.unwrap();
    assert_eq!(t.total, 20);
    assert!(!t.elided);
    let ds: Vec<String> = r.designated.unwrap().iter().map(|d| corrterm::ratio_str::format(&d.d)).collect();
    assert_eq!(ds, vec!["1/2", "-1/2", "-1/1", "-1/1"]);
    assert_eq!(r.q, vec![vec![-4, 2], vec![2, -6]]);
    assert_eq!(r.homology, vec![2, 10]);
}

#[test]
fn complexity_text() {
    let (code, out, _) = call(&["complexity", "--family", "even", "1", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("C ∈ [4, 10]"), "{out}");
}

#[test]
fn layer_odd_zero() {
    let r = json(&["layer", "--family", "odd", "0", "0", "0"]);
    let l = r.layering.unwrap();
    assert_eq!(l.tetrahedron_count, 9);
    assert_eq!(l.flips.len(), 9);
    assert_eq!(l.h1.order(), Some(16));
}

#[test]
fn check_passes() {
    let r = json(&["check", "--family", "odd", "1", "0", "0"]);
    let c = r.check.unwrap();
    assert!(c.passed && c.oracle_agree && c.h1_agree == Some(true));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    for args in [
        &["dinv", "--family", "even", "1", "1", "1", "1"][..],
        &["norms", "--family", "odd", "2", "1", "0"],
        &["complexity", "--braid", "1 2^-3 1 2^-1 1 2^-1"],
    ] {
        let mut a = args.to_vec();
        a.push("--json");
        let (_, first, _) = call(&a);
        let (_, second, _) = call(&a);
        assert_eq!(first, second);
        let r: Report = serde_json::from_str(&first).unwrap();
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", first);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert!(v["det_abs"].is_u64());
    }
}

#[test]
fn rationals_are_strings() {
    let (_, out, _) = call(&["dinv", "--family", "even", "1", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for e in v["d_table"]["entries"].as_array().unwrap() {
        let d = e["d"].as_str().unwrap();
        let (p, q) = d.split_once('/').unwrap();
        let (p, q): (i64, i64) = (p.parse().unwrap(), q.parse().unwrap());
        assert!(q > 0 && num_gcd(p.abs(), q) == 1, "{d}");
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn large_tables_are_elided() {
    // |det Q| = 324 for odd (2, 2, 2)... use a bigger even family
    let r = json(&["dinv", "--family", "even", "3", "3", "3", "3"]);
    let t = r.d_table.unwrap();
    assert!(t.total > 200);
    assert!(t.elided);
    assert!(t.entries.len() < t.total as usize);
    let designated = r.designated.unwrap();
    for d in &designated {
        assert!(t.entries.iter().any(|e| e.class_id == d.class_id));
    }
    let full = json(&["dinv", "--family", "even", "3", "3", "3", "3", "--full"]).d_table.unwrap();
    assert_eq!(full.entries.len() as u64, full.total);
    let max = full.entries.iter().map(|e| e.d).max().unwrap();
    assert!(t.entries.iter().any(|e| e.d == max));
}

#[test]
fn graph_input() {
    let path = std::env::temp_dir().join(format!("corrterm-hopf-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"vertices": 2, "edges": [[0, 1], [0, 1]]}"#).unwrap();
    let r = json(&["norms", "--graph", path.to_str().unwrap()]);
    let b = r.bounds.unwrap();
    assert_eq!(b.genus.len(), 1);
    assert_eq!(corrterm::ratio_str::format(&b.genus[0].bound), "1/1");
    let (code, _, err) = call(&["layer", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    std::fs::write(&path, r#"{"vertices": 2, "edges": [[0, 1]], "extra": 1}"#).unwrap();
    assert_eq!(call(&["dinv", "--graph", path.to_str().unwrap()]).0, EXIT_USAGE);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(call(&[]).0, EXIT_USAGE);
    assert_eq!(call(&["dinv"]).0, EXIT_USAGE);
    assert_eq!(call(&["dinv", "--braid", "1 3"]).0, EXIT_USAGE);
    assert_eq!(call(&["dinv", "--braid", "1 -2"]).0, EXIT_USAGE);
    assert_eq!(call(&["dinv", "--family", "even", "1", "2", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["dinv", "--family", "weird", "1"]).0, EXIT_USAGE);
    let (code, _, err) = call(&["dinv", "--family", "even", "1", "2", "--budget", "10"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("budget"));
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("dinv"));
}
