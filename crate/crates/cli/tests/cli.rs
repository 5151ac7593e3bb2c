use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn erclique(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erclique"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("ERCLIQUE_OUT_DIR")
        .output()
        .expect("run erclique")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = erclique(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

/// CSV rows as header-keyed maps.
fn rows(path: &Path) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            header.iter().map(String::from).zip(rec.iter().map(String::from)).collect()
        })
        .collect()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn complete_graph_file(dir: &Path, n: usize) -> PathBuf {
    let mut text = String::new();
    let mut m = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            text.push_str(&format!("{a} {b}\n"));
            m += 1;
        }
    }
    write_file(dir, &format!("k{n}.hg"), &format!("2 {n} {m}\n{text}"))
}

#[test]
fn brute_count_on_k6() {
    let dir = TempDir::new().unwrap();
    let k6 = complete_graph_file(dir.path(), 6);
    ok(dir.path(), &["count", "--input", k6.to_str().unwrap(), "--k", "3"]);
    let csv = dir.path().join("count.csv");
    assert_eq!(
        header(&csv),
        "trial,seed,algorithm,n,k,s,c,count,reference,agrees,iterations,cutoffs,wall_ms"
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["count"], "20");
    assert_eq!(r[0]["wall_ms"], "");
}

#[test]
fn greedy_agrees_with_brute() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &["count", "--algorithm", "brute,greedy", "--n", "20", "--c", "0.4", "--k", "3", "--trials", "20", "--seed", "7"],
    );
    let r = rows(&dir.path().join("count.csv"));
    assert_eq!(r.len(), 40);
    assert!(r.iter().all(|row| row["agrees"] == "true"));
    assert!(r.iter().filter(|row| row["algorithm"] == "greedy").all(|row| !row["iterations"].is_empty()));
}

#[test]
fn itgen_cutoff_trips() {
    let dir = TempDir::new().unwrap();
    let k6 = complete_graph_file(dir.path(), 6);
    let out = erclique(
        dir.path(),
        &["count", "--algorithm", "itgen", "--input", k6.to_str().unwrap(), "--k", "3", "--cutoffs", "1e9,1e9,1"],
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cutoff exceeded"), "{err}");
}

#[test]
fn reduce_exact_oracle() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["reduce", "--n", "6", "--k", "3", "--trials", "20", "--seed", "3", "--workers", "2"]);
    let csv = dir.path().join("reduce.csv");
    assert_eq!(
        header(&csv),
        "trial,seed,n,k,s,c,error_model,delta,count,reference,succeeded,correct,oracle_calls,\
         injected_errors,decode_failures,sampler_failures,min_margin,wall_ms"
    );
    assert!(rows(&csv).iter().all(|r| r["correct"] == "true"));
    let summary = rows(&dir.path().join("reduce-summary.csv"));
    assert_eq!(summary[0]["success_rate"], "1.0");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("reduce-0019.json")).unwrap()).unwrap();
    assert_eq!(doc["correct"], true);
    assert_eq!(doc["report"]["count"], doc["reference"]);
    assert!(doc["slowdowns"]["upsilon_sharp"].as_f64().unwrap() > 0.0);

    // Structured inputs from files.
    let k6 = complete_graph_file(dir.path(), 6);
    let empty = write_file(dir.path(), "empty.hg", "2 6 0\n");
    for input in [&k6, &empty] {
        ok(dir.path(), &["reduce", "--input", input.to_str().unwrap(), "--k", "3", "--trials", "2"]);
        assert!(rows(&csv).iter().all(|r| r["correct"] == "true"));
    }
}

#[test]
fn reduce_tolerable_flip_rate() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["reduce", "--n", "6", "--k", "3", "--trials", "12", "--tolerable-delta"]);
    let r = rows(&dir.path().join("reduce.csv"));
    assert!(r.iter().all(|row| row["error_model"] == "random-flip"));
    let rate: f64 = rows(&dir.path().join("reduce-summary.csv"))[0]["success_rate"].parse().unwrap();
    assert!(rate >= 2.0 / 3.0, "{rate}");
}

#[test]
fn malformed_file_names_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = write_file(dir.path(), "bad.hg", "2 4 2\n1 2\n3 x\n");
    let out = erclique(dir.path(), &["reduce", "--input", bad.to_str().unwrap(), "--k", "3"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_expansion_cases() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["verify-expansion", "--case", "5,0.5,0.01", "--case", "31,0.1,0.01"]);
    let csv = dir.path().join("verify-expansion.csv");
    assert_eq!(header(&csv), "p,c,eps,required_t,bits,dp_tv,pass,closed_form_residual");
    let r = rows(&csv);
    assert!(r.iter().all(|row| row["pass"] == "true"));
    assert!(r[0]["closed_form_residual"].parse::<f64>().unwrap() < 1e-12);
    assert_eq!(r[1]["closed_form_residual"], "");

    let out = erclique(dir.path(), &["verify-expansion", "--case", "5,0.5,0"]);
    assert!(!out.status.success());
}

#[test]
fn invalid_ranges_are_rejected() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["count", "--c", "1.5"][..],
        &["count", "--k", "1"],
        &["count", "--n", "2", "--k", "3"],
        &["reduce", "--delta", "2"],
    ] {
        assert!(!erclique(dir.path(), args).status.success(), "{args:?}");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["reduce", "--n", "6", "--k", "3", "--trials", "4", "--delta", "1e-6", "--seed", "11"];
    ok(a.path(), &args);
    ok(b.path(), &[&args[..], &["--workers", "3"]].concat());
    for f in ["reduce.csv", "reduce-summary.csv", "reduce-0003.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let args = ["count", "--algorithm", "greedy,itgen,matmul", "--n", "12", "--trials", "5"];
    ok(a.path(), &args);
    ok(b.path(), &args);
    assert_eq!(
        std::fs::read(a.path().join("count.csv")).unwrap(),
        std::fs::read(b.path().join("count.csv")).unwrap()
    );
}

#[test]
fn config_document_and_env_out_dir() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("from-env");
    let cfg = write_file(
        dir.path(),
        "exp.toml",
        "n = 9\nk = 3\ntrials = 3\nseed = 5\nalgorithms = [\"brute\", \"matmul\"]\n",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_erclique"))
        .args(["count", "--config", cfg.to_str().unwrap(), "--trials", "2"])
        .env("ERCLIQUE_OUT_DIR", &out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&out_dir.join("count.csv"));
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|row| row["n"] == "9" && row["agrees"] == "true"));
}

#[test]
fn sample_writes_readable_files() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["sample", "--n", "10", "--s", "3", "--k", "3", "--trials", "3"]);
    let r = rows(&dir.path().join("sample.csv"));
    assert_eq!(r.len(), 3);
    for row in &r {
        let file = dir.path().join(&row["file"]);
        ok(dir.path(), &["count", "--input", file.to_str().unwrap(), "--k", "3", "--output", "-"]);
        let text = std::fs::read_to_string(&file).unwrap();
        assert!(text.starts_with(&format!("3 10 {}\n", row["edges"])));
    }
}

#[test]
fn parity_and_decide() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["parity-reduce", "--n", "5", "--k", "3", "--trials", "2", "--repetitions", "1"]);
    assert!(rows(&dir.path().join("parity-reduce.csv")).iter().all(|r| r["correct"] == "true"));
    ok(dir.path(), &["decide", "--n", "10", "--k", "4", "--c", "0.5", "--trials", "10"]);
    assert!(rows(&dir.path().join("decide.csv")).iter().all(|r| r["correct"] == "true"));
}

#[test]
fn bench_reports_both_policies() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["bench", "--n", "5", "--k", "3"]);
    let r = rows(&dir.path().join("bench.csv"));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["exec"], "sequential");
    assert_eq!(r[1]["exec"], "parallel");
    assert_eq!(r[0]["count"], r[1]["count"]);
}
