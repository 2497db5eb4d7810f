use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosonorder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn stirling_rows() {
    let out = run(&["stirling", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().nth(3), Some("1 - 3*L + 2*L^2, 3 - 3*L, 1"));

    let out = run(&["stirling", "--max-n", "3", "--lambda", "0"]);
    assert_eq!(stdout(&out).lines().nth(3), Some("1, 3, 1"));

    let out = run(&["stirling", "--max-n", "0"]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn stirling_formats() {
    let out = run(&["stirling", "--max-n", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,0,1,2\n0,1,,\n1,0,1,\n2,0,1 - L,1\n");
    let out = run(&["stirling", "--max-n", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["max_n"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn stirling_limits_and_bad_flags() {
    assert_eq!(run(&["stirling", "--max-n", "201"]).status.code(), Some(3));
    assert_eq!(run(&["stirling", "--max-n", "3", "--lambda", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["stirling", "--max-n", "3", "--lambda", "1/0"]).status.code(), Some(2));
    assert_eq!(run(&["stirling", "--max-n", "3", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["stirling"]).status.code(), Some(2));
}

#[test]
fn normal_order_examples() {
    let cases = [
        (vec!["(N)_{2,lambda}"], "ad^2 a^2 + (1 - L) ad a"),
        (vec!["a*ad"], "ad a + 1"),
        (vec!["(N)_{2,lambda}", "--lambda", "1/2"], "ad^2 a^2 + 1/2 ad a"),
        (vec!["a*ad - ad*a"], "1"),
        (vec!["--lambda", "-1/2", "N - lambda"], "ad a + 1/2"),
        (vec!["-a + ad"], "ad - a"),
    ];
    for (args, want) in cases {
        let mut full = vec!["normal-order"];
        full.extend(args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0), "{full:?}");
        assert_eq!(stdout(&out).trim_end(), want, "{full:?}");
    }
}

#[test]
fn normal_order_syntax_error() {
    let out = run(&["normal-order", "a + "]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["offset"], 4);
    assert_eq!(err["found"], "end of input");
    assert!(err["expected"].as_array().unwrap().contains(&"ad".into()));
}

#[test]
fn dobinski_examples() {
    let out = run(&["dobinski", "--k", "2", "--lambda", "0", "--x", "1", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((value_after(&text, "unshifted:") - 2.0).abs() < 5e-10);
    assert!((value_after(&text, "shifted:") - 2.0).abs() < 5e-10);
    assert_eq!(value_after(&text, "exact:"), 2.0);
    assert!(value_after(&text, "error_unshifted:") < 5e-10);

    let out = run(&["dobinski", "--k", "2", "--lambda", "1/2", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value_after(&stdout(&out), "unshifted:") - 1.5).abs() < 5e-10);

    let out = run(&["dobinski", "--k", "1", "--x", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value_after(&stdout(&out), "unshifted:"), 0.0);

    let out = run(&["dobinski", "--k", "3", "--x", "0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn dobinski_bad_input() {
    assert_eq!(run(&["dobinski", "--k", "0", "--x", "1"]).status.code(), Some(2));
    assert_eq!(run(&["dobinski", "--k", "2", "--x", "1", "--lambda", "0.25"]).status.code(), Some(2));
    assert_eq!(run(&["dobinski", "--k", "2", "--x", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["dobinski", "--k", "2", "--x", "1", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn dobinski_non_convergence() {
    // the terms only start shrinking past n ≈ x, far beyond the step cap
    let out = run(&["dobinski", "--k", "1", "--x", "1000000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "normal-ordering", "--max-k", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 13);
    for (k, line) in lines.iter().enumerate() {
        assert_eq!(line["check"], "normal-ordering");
        assert_eq!(line["params"]["k"], k);
        assert_eq!(line["pass"], true);
        assert!(line["max_error"].is_null());
    }

    let out = run(&["verify", "--suite", "dobinski-grid"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 120);
    assert!(stdout(&out).lines().all(|l| l.contains("\"pass\":true")));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "fock-oracle", "--words", "50", "--seed", "7"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first).lines().count(), 100);
    assert_eq!(first.stdout, run(&args).stdout);
    let other = run(&["verify", "--suite", "fock-oracle", "--words", "50", "--seed", "8"]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn verify_failures_and_unknown_suites() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    // a tolerance below double precision for the larger grid values
    let out = run(&["verify", "--suite", "dobinski-grid", "--tol", "1e-15"]);
    assert!(stdout(&out).lines().any(|l| l.contains("\"pass\":false")));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "fock-oracle", "--cutoff", "4"]).status.code(), Some(2));
}

#[test]
fn bell_table() {
    let out = run(&["bell", "--max-n", "3", "--lambda", "0", "--x", "1"]);
    assert_eq!(stdout(&out), "0: 1\n1: 1\n2: 2\n3: 5\n");
    let out = run(&["bell", "--max-n", "2"]);
    assert_eq!(stdout(&out).lines().nth(2), Some("2: x + x^2 - L*x"));
}
