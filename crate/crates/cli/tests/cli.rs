//! End-to-end runs of the `qil` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use qil_core::constructions::{catalog_example, CATALOG_IDS};
use serde_json::Value;

fn qil(args: &[&str], stdin: &[u8]) -> Output {
    qil_env(args, stdin, &[])
}

fn qil_env(args: &[&str], stdin: &[u8], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qil"));
    cmd.args(args)
        .env_remove("QIL_EPS_REL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn qil");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", text(&o.stdout)))
}

fn example(id: &str) -> Vec<u8> {
    let o = qil(&["example", id], b"");
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    o.stdout
}

#[test]
fn example_classify_round_trip_reproduces_staircases() {
    for id in CATALOG_IDS {
        let entry = catalog_example(id).unwrap();
        let o = qil(&["classify", "--format", "json"], &example(id));
        assert_eq!(o.status.code(), Some(0), "{id}: {}", text(&o.stderr));
        let report = json(&o);
        let verdicts = report["verdicts"].as_array().unwrap();
        assert_eq!(verdicts.len(), entry.members.len());
        for (v, member) in verdicts.iter().zip(&entry.members) {
            let found: Vec<Option<usize>> = serde_json::from_value(v["profile"]["staircase"].clone()).unwrap();
            assert_eq!(found, member.expected.to_vec(), "{id}/{}", member.label);
        }
        let warned = text(&o.stderr).contains("warning:");
        assert_eq!(warned, entry.discrepancy.is_some(), "{id}");
    }
}

#[test]
fn report_schema() {
    let o = qil(&["classify", "--format", "json"], &example("jordan_unit"));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "classify");
    let digest = r["inputs_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
    let again = json(&qil(&["classify", "--format", "json"], &example("jordan_unit")));
    assert_eq!(again["inputs_digest"], r["inputs_digest"]);
    let other = json(&qil(&["classify", "--format", "json", "--m-max", "4"], &example("jordan_unit")));
    assert_ne!(other["inputs_digest"], r["inputs_digest"]);
}

#[test]
fn classify_text_examples() {
    let o = qil(&["classify", "--m-max", "4", "--n-max", "3"], &example("nilpotent2"));
    let out = text(&o.stdout);
    assert!(out.contains("n=2: m=1"), "{out}");
    assert!(out.contains("n=1: none"), "{out}");
    let o = qil(&["classify", "--n-max", "2"], &example("jordan_unit"));
    assert!(text(&o.stdout).contains("m(n)=3 for all n, strict"));
}

#[test]
fn classify_reads_a_file() {
    let dir = std::env::temp_dir().join(format!("qil-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jordan.json");
    std::fs::write(&path, example("jordan_unit")).unwrap();
    let o = qil(&["classify", path.to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    assert!(text(&o.stdout).contains("m(n)=3"));
    let o = qil(&["classify", dir.join("missing.json").to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decompose_examples() {
    let o = qil(&["decompose", "-n", "1", "-m", "1", "--format", "json"], &example("nilpotent2"));
    assert_eq!(o.status.code(), Some(0));
    let v = &json(&o)["verdicts"][0];
    assert_eq!(v["rank"], 1);
    assert_eq!(v["t1_m_isometric"], false);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["direct"]["accepted"], false);

    let unitary = br#"{"dim":2,"entries":[[0,0],[1,0],[1,0],[0,0]],"name":"swap"}"#;
    let o = qil(&["decompose", "-n", "1", "-m", "1", "--format", "json"], unitary);
    assert_eq!(o.status.code(), Some(0));
    let v = &json(&o)["verdicts"][0];
    assert_eq!(v["rank"], 2);
    assert_eq!(v["t1_m_isometric"], true);
    assert_eq!(v["spectrum"]["union_check"], true);
    assert_eq!(v["spectrum"]["t1_unimodular_check"], true);

    let o = qil(&["decompose", "-n", "2", "-m", "2"], &example("shift_2q2i"));
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stdout));
    assert!(text(&o.stdout).contains("consistent acceptance"));
}

#[test]
fn verify_examples() {
    let o = qil(&["verify", "power_closure", "--catalog", "jordan_unit", "--k", "2", "--format", "json"], b"");
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["command"], "verify");
    assert_eq!(r["verdicts"][0]["outcome"], "pass");
    assert_eq!(r["verdicts"][0]["passed"], true);

    let o = qil(&["verify", "nilpotent_sum", "--catalog", "noncommuting_sum", "--format", "json"], b"");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdicts"][0]["outcome"], "vacuous");
    assert!(text(&o.stderr).contains("warning:"));

    let o = qil(&["verify", "tensor", "--count", "5", "--seed", "9", "--format", "json"], b"");
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 5);
    assert!(r["verdicts"][0]["instance_digest"].as_str().unwrap().starts_with("seed 9 #0"));
}

#[test]
fn verify_all_summarizes() {
    let o = qil(&["verify", "all", "--count", "10"], b"");
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stdout));
    let out = text(&o.stdout);
    assert!(out.contains("total:"));
    assert!(out.contains(" 0 fail"));
}

#[test]
fn example_sizes_shifts() {
    let o = qil(&["example", "shift_2q2i", "--dim", "8"], b"");
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["dim"], 8);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 64);
    assert_eq!(doc["interior_margin"], 4);
    let two = qil(&["example", "product_pair"], b"");
    assert_eq!(text(&two.stdout).lines().count(), 2);
}

#[test]
fn window_too_small_is_a_usage_error() {
    let doc = qil(&["example", "shift_2q2i", "--dim", "8"], b"").stdout;
    let o = qil(&["classify"], &doc);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).contains("interior_margin"));
    let o = qil(&["classify", "--m-max", "2", "--n-max", "2"], &doc);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let cases: &[(&[&str], &[u8])] = &[
        (&["classify"], b"{\"dim\": 2"),
        (&["classify"], b""),
        (&["classify"], b"[1, 2, 3]"),
        (&["classify"], b"{\"dim\":2,\"entries\":[[1,0]]}"),
        (&["classify"], b"{\"dim\":1,\"entries\":[[1e999,0]]}"),
        (&["classify"], b"{\"dim\":1,\"entries\":[[\"a\",0]]}"),
        (&["classify"], b"\xff\xfe"),
        (&["classify", "--m-max", "0"], b"{\"dim\":1,\"entries\":[[1,0]]}"),
        (&["classify", "--eps-rel", "-1"], b"{\"dim\":1,\"entries\":[[1,0]]}"),
        (&["classify", "--eps-rel", "abc"], b""),
        (&["classify"], b"{\"dim\":2,\"entries\":[[1e300,0],[1,0],[0,0],[1e300,0]]}"),
        (&["decompose"], b"{\"dim\":1,\"entries\":[[1e200,0]]}"),
        (&["decompose", "-m", "0"], b"{\"dim\":1,\"entries\":[[1,0]]}"),
        (&["verify", "bogus"], b""),
        (&["verify", "product", "--catalog", "nilpotent2"], b""),
        (&["verify", "all", "--count", "0"], b""),
        (&["example", "nope"], b""),
        (&["example", "nilpotent2", "--dim", "8"], b""),
        (&["frobnicate"], b""),
        (&[], b""),
    ];
    for (args, input) in cases {
        let o = qil(args, input);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", text(&o.stderr));
        assert!(!o.stderr.is_empty(), "{args:?}: no diagnostic");
        assert!(!text(&o.stderr).contains("panicked"), "{args:?}");
    }
}

#[test]
fn eps_rel_from_environment() {
    let doc = example("jordan_unit");
    let o = qil_env(&["classify", "--format", "json"], &doc, &[("QIL_EPS_REL", "1e-6")]);
    assert_eq!(json(&o)["verdicts"][0]["eps_rel"], 1e-6);
    let o = qil_env(&["classify"], &doc, &[("QIL_EPS_REL", "nonsense")]);
    assert_eq!(o.status.code(), Some(2));
    let o = qil_env(&["classify", "--format", "json", "--eps-rel", "1e-7"], &doc, &[("QIL_EPS_REL", "1e-6")]);
    assert_eq!(json(&o)["verdicts"][0]["eps_rel"], 1e-7);
}

#[test]
fn help_exits_0() {
    let o = qil(&["--help"], b"");
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stdout).contains("classify"));
}
