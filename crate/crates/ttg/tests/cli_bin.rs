//! Tests against the installed binary: environment-variable cap handling
//! and byte stability of emitted reports across separate processes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ttg"))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn env_var_lowers_the_enumeration_cap() {
    let out = bin()
        .args(["suite", "--max-base", "3"])
        .env("TTG_MAX_BASE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{:?}", out);
}

#[test]
fn env_var_raise_allows_larger_requests() {
    let out = bin()
        .args(["suite", "--max-base", "2"])
        .env("TTG_MAX_BASE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
}

#[test]
fn json_bytes_stable_across_processes() {
    let run = || {
        bin()
            .args(["report", &fixture("p1.ttg"), "--format", "json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let golden = std::fs::read(format!(
        "{}/tests/golden/p1.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    assert_eq!(a.stdout, golden);
}

#[test]
fn suite_output_stable_across_processes_and_thread_counts() {
    let run = |threads: &str| {
        bin()
            .args(["suite", "--max-base", "3"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
