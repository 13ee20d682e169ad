//! Runs the binary end to end.

use std::process::{Command, Output};

use serde_json::Value;

fn isoforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoforge"))
        .args(args)
        .output()
        .expect("spawn isoforge")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/certificate.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn assert_valid(cert: &Value) {
    let v = schema();
    let errors: Vec<String> = v
        .iter_errors(cert)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn s4_table_is_five_by_five() {
    let out = isoforge(&["table", "--family", "sn", "--n", "4"]);
    assert!(out.status.success());
    let t = json(&out);
    assert_eq!(t["order"], 24);
    assert_eq!(t["classes"].as_array().unwrap().len(), 5);
    let rows = t["values"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 5));
}

#[test]
fn double_cover_table_and_text_format() {
    let out = isoforge(&["table", "--family", "tilde-an", "--n", "4"]);
    assert!(out.status.success());
    let t = json(&out);
    assert_eq!(t["order"], 24);
    assert_eq!(t["characters"].as_array().unwrap().len(), 7);
    let out = isoforge(&[
        "table", "--family", "hpw", "--p", "3", "--w", "1", "--format", "text",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("|C|"));
}

#[test]
fn bad_requests_exit_two_with_one_line() {
    for args in [
        &["table", "--family", "sn", "--n", "-1"][..],
        &["table", "--family", "gl", "--n", "3"],
        &["table", "--family", "wreath", "--w", "2"],
        &[
            "blocks",
            "--family",
            "sn",
            "--n",
            "4",
            "--p",
            "3",
            "--classes",
            "spin-C",
        ],
        &[
            "blocks",
            "--family",
            "sn",
            "--n",
            "4",
            "--p",
            "3",
            "--classes",
            "odd",
        ],
        &["blocks", "--family", "tilde-sn", "--n", "4", "--p", "2"],
        &[
            "verify", "--kind", "mainAn", "--p", "3", "--core1", "3", "--w", "1",
        ],
        &["verify", "--kind", "nope", "--p", "3", "--w", "1"],
        &[
            "verify", "--kind", "couronne", "--p", "3", "--core1", "1;", "--core2", "2;",
        ],
        &["verify", "--kind", "mainAn", "--p", "3", "--n", "3"],
        &["frobnicate"],
    ] {
        let out = isoforge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("isoforge: "), "{err}");
    }
}

#[test]
fn s6_blocks_at_three() {
    let out = isoforge(&["blocks", "--family", "sn", "--n", "6", "--p", "3"]);
    assert!(out.status.success());
    let b = json(&out);
    assert_eq!(b["agreement"], true);
    let blocks = b["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 3);
    let principal = blocks.iter().find(|b| b["weight"] == 2).unwrap();
    assert_eq!(principal["characters"].as_array().unwrap().len(), 9);
    assert_eq!(principal["core"], "()");
}

#[test]
fn spin_blocks_agree() {
    for n in ["4", "5", "6"] {
        for fam in ["tilde-sn", "tilde-an"] {
            let out = isoforge(&[
                "blocks",
                "--family",
                fam,
                "--n",
                n,
                "--p",
                "3",
                "--classes",
                "spin-C",
            ]);
            assert!(out.status.success(), "{fam} {n}");
            assert_eq!(json(&out)["agreement"], true, "{fam} {n}");
        }
    }
}

#[test]
fn target_class_subsets_give_one_block() {
    for args in [
        &[
            "blocks",
            "--family",
            "gpw",
            "--p",
            "3",
            "--w",
            "2",
            "--classes",
            "brgr-Cprime",
        ][..],
        &[
            "blocks",
            "--family",
            "wreath",
            "--l",
            "3",
            "--w",
            "2",
            "--p",
            "3",
            "--classes",
            "osima-Cprime",
        ],
        &[
            "blocks",
            "--family",
            "hpw",
            "--p",
            "3",
            "--w",
            "2",
            "--classes",
            "fh-regular",
        ],
    ] {
        let out = isoforge(args);
        assert!(out.status.success(), "{args:?}");
        let b = json(&out);
        assert_eq!(b["agreement"], true, "{args:?}");
        assert_eq!(b["blocks"].as_array().unwrap().len(), 1);
    }
    let out = isoforge(&[
        "blocks",
        "--family",
        "wreath",
        "--l",
        "2",
        "--w",
        "2",
        "--p",
        "3",
        "--classes",
        "osima-Cprime",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn osima_passes_generalized() {
    let out = isoforge(&[
        "verify",
        "--kind",
        "osima",
        "--n",
        "3",
        "--p",
        "3",
        "--mode",
        "generalized",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(c["passed"], true);
    assert_eq!(c["report"]["r_commutation"]["pass"], true);
    assert_valid(&c);
}

#[test]
fn osima_is_not_broue() {
    let out = isoforge(&[
        "verify", "--kind", "osima", "--n", "3", "--p", "3", "--mode", "broue",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let c = json(&out);
    assert_eq!(c["passed"], false);
    assert!(c["report"]["broue_integrality"]["witness"].is_object());
    assert_valid(&c);
}

#[test]
fn spin_crossover_is_broue() {
    let out = isoforge(&[
        "verify",
        "--kind",
        "mainTilde",
        "--p",
        "3",
        "--core1",
        "1",
        "--core2",
        "2",
        "--w",
        "1",
        "--mode",
        "broue",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c = json(&out);
    assert_eq!(c["isometry"]["target"], "2.A5");
    assert_valid(&c);
}

#[test]
fn tuple_cores_and_controls() {
    let out = isoforge(&[
        "verify",
        "--kind",
        "couronne",
        "--p",
        "3",
        "--l",
        "2",
        "--core1",
        "1|",
        "--core2",
        "2;",
        "--weights",
        "1,0",
        "--controls",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(
        c["request"]["params"]["core1"],
        serde_json::json!(["1", ""])
    );
    let nc = &c["negative_controls"];
    assert!(nc["total"].as_u64().unwrap() > 0);
    assert_valid(&c);
}

#[test]
fn certificates_are_byte_identical() {
    let args = [
        "verify",
        "--kind",
        "fh",
        "--p",
        "3",
        "--w",
        "2",
        "--controls",
        "--tables",
    ];
    let a = isoforge(&args);
    let b = isoforge(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_valid(&json(&a));
    assert!(!String::from_utf8(a.stdout).unwrap().contains("timing_ms"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["verify", "--kind", "brgr", "--p", "3", "--n", "6"];
    let run = |t: &str| {
        Command::new(env!("CARGO_BIN_EXE_isoforge"))
            .args(args)
            .env("ISOFORGE_THREADS", t)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn out_writes_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = isoforge(&[
        "verify",
        "--kind",
        "mainAn",
        "--p",
        "3",
        "--core1",
        "1",
        "--w",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c["schema"], "isoforge-certificate/1");
    assert_valid(&c);
}
