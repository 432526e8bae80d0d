//! The `jstego` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn jstego(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jstego")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = jstego(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn embed_attack_extract_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = d.join("corpus");
    ok(&["gen-corpus", "--out", s(&corpus), "--count", "2", "--saturation", "0.1", "--seed", "4"]);
    std::fs::write(d.join("msg.bin"), b"attack at dawn, bring snacks").unwrap();
    let stdout = ok(&[
        "embed", "--cover", s(&corpus.join("img0000.pgm")), "--msg", s(&d.join("msg.bin")),
        "--out", s(&d.join("stego.jcov")), "--key-out", s(&d.join("key.txt")),
        "--payload", "0.1", "--qcover", "65", "--qchannel", "85", "--seed", "9",
    ]);
    let summary: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(summary["message_bits"], 28 * 8);
    assert!(summary["trace"].as_array().unwrap().len() <= 12);
    assert_eq!(summary["trace"][0]["k"], 29);

    let key = std::fs::read_to_string(d.join("key.txt")).unwrap();
    let names: Vec<&str> = key.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(names, ["seed", "n_m", "rs_k", "alpha", "qf_cover", "t1", "mu", "o1", "o2", "h"]);

    ok(&["attack", "--in", s(&d.join("stego.jcov")), "--qf", "85", "--out", s(&d.join("rx.jcov"))]);
    ok(&["extract", "--stego", s(&d.join("rx.jcov")), "--key", s(&d.join("key.txt")), "--out", s(&d.join("got.bin"))]);
    assert_eq!(std::fs::read(d.join("got.bin")).unwrap(), b"attack at dawn, bring snacks");

    // quantization-only attack preserves the message as well
    ok(&[
        "attack", "--in", s(&d.join("stego.jcov")), "--qf", "85", "--out", s(&d.join("q.jcov")),
        "--no-truncate", "--no-round",
    ]);
    ok(&["extract", "--stego", s(&d.join("q.jcov")), "--key", s(&d.join("key.txt")), "--out", s(&d.join("q.bin"))]);
    assert_eq!(std::fs::read(d.join("q.bin")).unwrap(), b"attack at dawn, bring snacks");
}

#[test]
fn oversized_message_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen-corpus", "--out", s(d), "--count", "1", "--saturation", "0", "--seed", "1", "--size", "32"]);
    std::fs::write(d.join("msg.bin"), vec![0xA5; 4096]).unwrap();
    let out = jstego(&[
        "embed", "--cover", s(&d.join("img0000.pgm")), "--msg", s(&d.join("msg.bin")),
        "--out", s(&d.join("o.jcov")), "--key-out", s(&d.join("k.txt")),
        "--payload", "0.1", "--qcover", "65", "--qchannel", "85",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("allows"));
    assert!(!d.join("o.jcov").exists());
}

#[test]
fn bench_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = d.join("c");
    ok(&["gen-corpus", "--out", s(&corpus), "--count", "2", "--saturation", "0.5", "--seed", "2", "--size", "64"]);
    for run in ["a", "b"] {
        ok(&[
            "bench", "--corpus", s(&corpus), "--payloads", "0.1,0.3", "--qcover", "65", "--qchannel", "85",
            "--csv", s(&d.join(format!("{run}.csv"))), "--json", s(&d.join(format!("{run}.json"))),
        ]);
    }
    let csv = std::fs::read(d.join("a.csv")).unwrap();
    assert_eq!(csv, std::fs::read(d.join("b.csv")).unwrap());
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("image,payload,n_nzac,n_m,k,r_error,psnr,ssim,iterations,status\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("a.json")).unwrap()).unwrap();
    assert_eq!(report["aggregates"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_timing_and_cost_dump_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = d.join("c");
    ok(&["gen-corpus", "--out", s(&corpus), "--count", "1", "--saturation", "0.2", "--size", "32"]);
    ok(&[
        "bench", "--corpus", s(&corpus), "--payloads", "0.2", "--csv", s(&d.join("t.csv")), "--timing",
        "--dump-costs", s(&d.join("costs")),
    ]);
    assert!(std::fs::read_to_string(d.join("t.csv")).unwrap().lines().next().unwrap().ends_with(",runtime_ms"));
    let plane = std::fs::read(d.join("costs").join("img0000.xi")).unwrap();
    assert_eq!(plane.len(), 32 * 32 * 8);
}

#[test]
fn overflow_stats_json_shape() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = d.join("c");
    ok(&["gen-corpus", "--out", s(&corpus), "--count", "2", "--saturation", "1", "--seed", "3", "--size", "64"]);
    ok(&["stats", "overflow", "--in", s(&corpus), "--qf", "65", "--json", s(&d.join("o.json"))]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("o.json")).unwrap()).unwrap();
    assert_eq!(v["per_block"].as_array().unwrap().len(), 2 * 64);
    assert_eq!(v["by_position"].as_array().unwrap().len(), 8);
    assert!(v["totals"]["boundary"].as_u64().unwrap() > 0);
    assert!(v["totals"]["corner"].as_u64().unwrap() <= v["totals"]["boundary"].as_u64().unwrap());

    // a single file works too
    ok(&["stats", "overflow", "--in", s(&corpus.join("img0001.pgm")), "--qf", "65", "--json", s(&d.join("one.json"))]);
}

#[test]
fn gen_corpus_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for p in [&a, &b] {
        ok(&["gen-corpus", "--out", s(p), "--count", "3", "--saturation", "0.4", "--seed", "8", "--size", "32"]);
    }
    for name in ["manifest.json", "img0000.pgm", "img0002.pgm"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn bad_arguments_fail_cleanly() {
    assert!(!jstego(&["attack", "--in", "/nonexistent.jcov", "--qf", "85", "--out", "/tmp/x.jcov"]).status.success());
    assert!(!jstego(&["gen-corpus", "--out", "/tmp/never", "--count", "1", "--saturation", "3"]).status.success());
    assert!(!jstego(&["bench", "--corpus", "/nonexistent-dir"]).status.success());
    assert!(!jstego(&["frobnicate"]).status.success());
}
