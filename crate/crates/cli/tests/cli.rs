//! End-to-end tests of the binary: exit codes, output round trips, and
//! byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_admiss-hc"))
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write temp file");
    path.to_string_lossy().into_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

const UNIFORM5: &str = "labels,a,b,c,d,e\n\
a,.,1,1,1,1\n\
b,1,.,1,1,1\n\
c,1,1,.,1,1\n\
d,1,1,1,.,1\n\
e,1,1,1,1,.\n";

const WEDGE_TSV: &str = "x\tz\t2\nx\ty\t1\ny\tz\t1\n";
const BROKEN_TSV: &str = "x\ty\t3\ny\tz\t3\nx\tz\t1\n";

const DASGUPTA: &str = r#"{"kind":"sum","lambda":"0","mu":"0","nu":"1"}"#;

#[test]
fn check_admissible_exit_codes() {
    // Dasgupta's objective satisfies the degree-2 characterization
    let ok = bin()
        .args(["check-admissible", "--objective", DASGUPTA])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("admissible"));

    // boundary coefficients are refuted with a witness
    let refuted = bin()
        .args([
            "check-admissible",
            "--objective",
            r#"{"kind":"sum","lambda":"0","mu":"1","nu":"-9"}"#,
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(refuted.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&refuted)).unwrap();
    assert_eq!(doc["admissible"], serde_json::json!(false));
    assert!(doc["witness"].is_object());

    // malformed objective is a usage error, not a verdict
    let usage = bin()
        .args(["check-admissible", "--objective", r#"{"kind":"sum"}"#])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn gen_tree_certificate_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let wedge = write(dir.path(), "wedge.tsv", WEDGE_TSV);
    let ok = bin().args(["gen-tree", "--matrix", &wedge]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "((x,z)h=2,y)h=1;");

    let json = bin()
        .args(["gen-tree", "--matrix", &wedge, "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(json.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["labels"], serde_json::json!(["x", "z", "y"]));

    let broken = write(dir.path(), "broken.tsv", BROKEN_TSV);
    let refused = bin().args(["gen-tree", "--matrix", &broken]).output().unwrap();
    assert_eq!(refused.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&refused)).unwrap();
    assert_eq!(doc["generating_tree"], serde_json::json!(false));
    assert_eq!(doc["violated_triple"]["m_xz"], serde_json::json!("1"));

    let missing = bin()
        .args(["gen-tree", "--matrix", "/nonexistent/file.tsv"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn opt_on_the_uniform_clique() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "uniform5.csv", UNIFORM5);
    let out = bin()
        .args(["opt", "--matrix", &matrix, "--objective", DASGUPTA])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("opt = 40"), "{text}");
    assert!(text.contains("minimizers = 105 of 105 trees"), "{text}");
}

#[test]
fn eval_and_rsc_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "wedge.tsv", WEDGE_TSV);

    // the RSC tree on the wedge is its generating tree
    let rsc_out = bin()
        .args(["rsc", "--matrix", &matrix, "--objective", DASGUPTA])
        .output()
        .unwrap();
    assert_eq!(rsc_out.status.code(), Some(0));
    let text = stdout(&rsc_out);
    let newick_line = text.lines().next().unwrap().to_string();
    assert_eq!(newick_line, "((x,z),y);");
    assert!(text.contains("gamma = "));

    // feeding the emitted tree back through eval reproduces the value
    let tree = write(dir.path(), "tree.nwk", &newick_line);
    let eval_out = bin()
        .args([
            "eval",
            "--matrix",
            &matrix,
            "--tree",
            &tree,
            "--objective",
            DASGUPTA,
            "--digits",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(eval_out.status.code(), Some(0));
    assert!(stdout(&eval_out).contains("gamma = 10 (10.000)"));

    // swapped children parse to the same tree and the same value
    let swapped = write(dir.path(), "swapped.nwk", "(y,(z,x));");
    let eval_swapped = bin()
        .args([
            "eval", "--matrix", &matrix, "--tree", &swapped, "--objective", DASGUPTA,
        ])
        .output()
        .unwrap();
    assert!(stdout(&eval_swapped).contains("gamma = 10"));
}

#[test]
fn bench_is_byte_deterministic() {
    let args = [
        "bench",
        "--seed",
        "5",
        "--instances",
        "6",
        "--n-min",
        "3",
        "--n-max",
        "5",
    ];
    let a = bin().args(args).env("ADMISS_HC_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("ADMISS_HC_THREADS", "2").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    // worker count must not affect the report
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with(
        "seed,n,objective_kind,lambda,mu,nu,opt,rsc,ratio,lb_charge,charge2,lemma1_ok,lemma2_ok"
    ));
    assert!(text.contains("# max_ratio="));
    assert!(text.contains("# mean_ratio="));

    let bad_env = bin()
        .args(args)
        .env("ADMISS_HC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn local_search_rsc_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "uniform5.csv", UNIFORM5);
    let run = |seed: &str| {
        let out = bin()
            .args([
                "rsc", "--matrix", &matrix, "--cut", "local", "--seed", seed, "--restarts", "8",
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    assert_eq!(run("9"), run("9"));
}
