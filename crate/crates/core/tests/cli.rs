use std::path::Path;
use std::process::{Command, Output};

const FEX: &str = "arg(a0).\narg(a1).\narg(a2).\narg(a3).\narg(a4).\natt(a4,a0).\natt(a4,a3).\natt(a0,a1).\natt(a1,a2).\natt(a2,a0).\n";

fn afsplit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afsplit"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn with_fex() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("fex.apx"), FEX).unwrap();
    dir
}

#[test]
fn solve_prints_the_example_labeling() {
    let dir = with_fex();
    let o = afsplit(&["solve", "fex.apx", "--method", "direct"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("stable labelings: 1"), "{text}");
    assert!(text.contains("{in:[a1,a4], out:[a0,a2,a3]}"), "{text}");
}

#[test]
fn methods_agree_in_json() {
    let dir = with_fex();
    let render = |method: &str| {
        let o = afsplit(&["solve", "fex.apx", "--method", method, "--json"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["method"], method);
        v["stable_labelings"].clone()
    };
    let direct = render("direct");
    assert_eq!(direct, serde_json::json!([{"in": ["a1", "a4"], "out": ["a0", "a2", "a3"]}]));
    assert_eq!(render("split-ho"), direct);
    assert_eq!(render("split-bc"), direct);
}

#[test]
fn random_strategy_reports_its_seed() {
    let dir = with_fex();
    let o = afsplit(&["solve", "fex.apx", "--strategy", "random", "--seed", "9", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["stable_labelings"].as_array().unwrap().len(), 1);
}

#[test]
fn cut_reports_partition_and_k() {
    let dir = with_fex();
    let o = afsplit(&["cut", "fex.apx", "--algo", "ho"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("a1: {a3,a4}") && text.contains("k=0"), "{text}");

    let o = afsplit(&["cut", "fex.apx", "--algo", "bc", "--start", "a3"], dir.path());
    let text = stdout(&o);
    assert!(text.contains("a1: {a0,a3,a4}") && text.contains("k=1"), "{text}");

    let o = afsplit(&["cut", "fex.apx", "--algo", "bc", "--start", "3", "--orientation", "minimize-k"], dir.path());
    assert!(stdout(&o).contains("k=1"));
    let o = afsplit(&["cut", "fex.apx", "--algo", "bc", "--start", "zz"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn split_shows_branches() {
    let dir = with_fex();
    let o = afsplit(&["split", "fex.apx", "--cut", "bc", "--start", "a1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("F1 stable labelings:"), "{text}");
    assert!(text.contains("combined: 1 (discarded 0)"), "{text}");
    let o = afsplit(&["split", "fex.apx", "--cut", "ho", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["method"], "split-ho");
}

#[test]
fn exit_codes() {
    let dir = with_fex();
    assert_eq!(afsplit(&["solve", "missing.apx"], dir.path()).status.code(), Some(2));
    assert_eq!(afsplit(&["solve"], dir.path()).status.code(), Some(1));
    assert_eq!(afsplit(&["solve", "fex.apx", "--method", "magic"], dir.path()).status.code(), Some(1));

    std::fs::write(dir.path().join("bad.apx"), "arg(a).\natt(a,b).\n").unwrap();
    let o = afsplit(&["validate", "bad.apx"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    afsplit(&["generate", "--args", "24", "--kind", "complete", "--out", "big"], dir.path());
    let big = "big/af_24_576_0.apx";
    let o = afsplit(&["solve", big, "--timeout", "1", "--fail-on-timeout"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let o = afsplit(&["solve", big, "--timeout", "1", "--json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["censored"], true);
    assert_eq!(v["elapsed_ms"], 1);
}

#[test]
fn validate_checks_labelings() {
    let dir = with_fex();
    let o = afsplit(&["validate", "fex.apx"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 strongly connected components"));

    let good = r#"{"in":["a1","a4"],"out":["a0","a2","a3"]}"#;
    let o = afsplit(&["validate", "fex.apx", "--labeling", good], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stable: yes"));

    let bad = r#"{"in":["a0","a4"],"out":["a1","a2","a3"]}"#;
    let o = afsplit(&["validate", "fex.apx", "--labeling", bad], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("a0: illegally-in") && text.contains("stable: no"), "{text}");

    std::fs::write(dir.path().join("l.json"), r#"{"in":["a1"],"out":["a0"]}"#).unwrap();
    assert_eq!(afsplit(&["validate", "fex.apx", "--labeling", "l.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn generate_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    let o = afsplit(&["generate", "--args", "8", "--attacks", "30", "--seed", "5", "--count", "3", "--out", "corpus"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for seed in 5..8 {
        assert!(dir.path().join(format!("corpus/af_8_30_{seed}.apx")).is_file());
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("corpus/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"][2]["seed"], 7);

    let o = afsplit(
        &["bench", "--dir", "corpus", "--methods", "direct,split-bc", "--profile", "ci", "--csv", "out.csv", "--table", "table.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
    assert!(csv.lines().nth(2).unwrap().starts_with("af_8_30_5,8,30,5,split-bc,bc,"));
    let table = std::fs::read_to_string(dir.path().join("table.txt")).unwrap();
    assert!(table.contains("8/30"), "{table}");
    let man: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(man["limit_ms"], 60000);
    assert_eq!(man["seeds"], serde_json::json!([5, 6, 7]));

    let empty = tempfile::tempdir().unwrap();
    let o = afsplit(&["bench", "--dir", empty.path().to_str().unwrap(), "--csv", "x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["x", "y"] {
        afsplit(&["generate", "--args", "10", "--attacks", "40", "--seed", "1", "--count", "2", "--kind", "symmetric", "--out", out], dir.path());
    }
    for name in ["af_10_40_1.apx", "af_10_40_2.apx", "manifest.json"] {
        assert_eq!(
            std::fs::read(dir.path().join("x").join(name)).unwrap(),
            std::fs::read(dir.path().join("y").join(name)).unwrap()
        );
    }
    let o = afsplit(&["generate", "--args", "10", "--out", "z"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
