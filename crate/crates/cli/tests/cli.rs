use serde_json::Value;

fn fixture_dir() -> String {
    format!("{}/../../fixtures", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["lazytwist"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = lazytwist_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("lazytwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn documented_examples() {
    assert_eq!(json(&["h2", "A4"])["exact_order"], 2);
    let dir = fixture_dir();
    let v = json(&["--fixture-dir", &dir, "twist-verify", "A4", "A4_twist.json"]);
    assert_eq!(v, serde_json::json!({"twist": true, "invariant": true, "normalized": true}));
    let v = json(&["liecheck", "S3"]);
    assert_eq!(v["exact"], true);
    assert_eq!(v["kernel_dim"], 6);
}

#[test]
fn output_is_byte_stable() {
    for args in [&["h2", "D8"][..], &["bg", "C27sd"], &["group-info", "A4"], &["autc", "Wall32"]] {
        let (_, a, _) = run(args);
        let (_, b, _) = run(args);
        assert_eq!(a, b);
        assert!(!a.contains('.'), "no floats in {args:?}");
    }
}

#[test]
fn pretty_output_parses_to_the_same_value() {
    let (_, compact, _) = run(&["h2", "V4"]);
    let (_, pretty, _) = run(&["--pretty", "h2", "V4"]);
    assert_ne!(compact, pretty);
    assert_eq!(
        serde_json::from_str::<Value>(&compact).unwrap(),
        serde_json::from_str::<Value>(&pretty).unwrap()
    );
}

#[test]
fn input_errors_exit_with_two() {
    let (code, out, err) = run(&["h2", "NoSuchGroup"]);
    assert_eq!((code, out.is_empty()), (2, true));
    assert!(err.contains("unknown fixture"));
    let bad = temp_file("bad.json", "{\"degree\": 2, \"terms\": [");
    assert_eq!(run(&["twist-verify", "A4", &bad]).0, 2);
    // tensor over a different group
    let dir = fixture_dir();
    assert_eq!(run(&["--fixture-dir", &dir, "twist-verify", "A4", "Wall_F"]).0, 2);
    assert_eq!(run(&["h2", "Wr_3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&[]).0, 2);
}

#[test]
fn group_files_are_accepted() {
    let path = temp_file("s3.json", r#"{"name": "S3file", "perm_generators": [[2,1,3],[2,3,1]]}"#);
    let v = json(&["group-info", &path]);
    assert_eq!(v["order"], 6);
    assert_eq!(v["name"], "S3file");
    let path = temp_file("c2.json", r#"{"table": [[0,1],[1,0]]}"#);
    assert_eq!(json(&["h2", &path])["exact_order"], 1);
    let path = temp_file("broken.json", r#"{"table": [[0,1],[0,1]]}"#);
    assert_eq!(run(&["group-info", &path]).0, 2);
}

#[test]
fn twist_theta_and_autc() {
    let dir = fixture_dir();
    let v = json(&["--fixture-dir", &dir, "twist-theta", "Wall32", "Wall_F"]);
    assert_eq!(v["socle"], serde_json::json!([0]));
    let v = json(&["autc", "Wall32"]);
    assert_eq!(v["int_mod_inn"], 2);
    assert_eq!(v["coset_generator_images"].as_array().unwrap().len(), 2);
    // builtin tensors resolve without a file
    let v = json(&["twist-verify", "Wall32", "Wall_F"]);
    assert_eq!(v["twist"], true);
    // the group element a is not a twist
    assert_eq!(run(&["--fixture-dir", &dir, "twist-verify", "Wall32", "Wall_a"]).0, 2);
}

#[test]
fn suite_covers_every_worked_example() {
    let (code, out, _) = run(&["paper-suite"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let groups: Vec<&str> = v["summary"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["group"].as_str().unwrap())
        .collect();
    for g in ["A4", "D8", "Q8", "S3", "S4", "Wr_3", "C27sd", "Wall32", "C2", "C8", "V4"] {
        assert!(groups.contains(&g), "{g}");
    }
    assert_eq!(v["reports"].as_array().unwrap().len(), groups.len());
    let all = v["all_pass"].as_bool().unwrap();
    assert_eq!(code, if all { 0 } else { 1 });
}
