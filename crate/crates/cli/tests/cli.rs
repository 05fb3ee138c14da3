use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn elimgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elimgame")).args(args).env_remove("ELIMGAME_BUDGET").output().expect("binary runs")
}

fn profile_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("elimgame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn last_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

fn solve(file: &str, text: &str, extra: &[&str]) -> Value {
    let path = profile_file(file, text);
    let mut args = vec!["solve", "--profile", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    last_json(&elimgame(&args))
}

#[test]
fn solve_sincere_example() {
    let v = solve("ex1.txt", "a b c d e\ne d c b a\nd e b c a\n", &["--sequence", "1,2,3,1"]);
    assert_eq!(v["winner"], "b");
    let elim: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["eliminated"].as_str().unwrap()).collect();
    assert_eq!(elim, ["e", "a", "c", "d"]);
}

#[test]
fn solve_strategic_and_oracle_agree() {
    let text = "a b c d\nc b a d\nc a d b\n";
    let sincere = solve("ex2.txt", text, &["--sequence", "1,2,3"]);
    assert_eq!(sincere["winner"], "c");
    for behavior in ["strategic", "oracle"] {
        let v = solve("ex2.txt", text, &["--sequence", "1,2,3", "--behavior", behavior]);
        assert_eq!(v["winner"], "a", "{behavior}");
    }
}

#[test]
fn solve_mixed_example() {
    let v = solve(
        "mixed.txt",
        "a b c d\nc b a d\nb c a d\n",
        &["--sequence", "123", "--behavior", "mixed", "--sincere", "1,3"],
    );
    assert_eq!(v["mode"], "mixed");
    assert_eq!(v["winner"], "c");
}

#[test]
fn solve_error_exit_codes() {
    let bad = profile_file("dup.txt", "a b c\n# comment\na b b\n");
    let out = elimgame(&["solve", "--profile", bad.to_str().unwrap(), "--sequence", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let good = profile_file("short.txt", "a b c d\nc b a d\n");
    let out = elimgame(&["solve", "--profile", good.to_str().unwrap(), "--sequence", "1212"]);
    assert_eq!(out.status.code(), Some(3));

    let out = elimgame(&["solve", "--profile", "/nonexistent/profile.txt", "--sequence", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn extremal_sr_example_is_attained() {
    let v = last_json(&elimgame(&["extremal", "-n", "3", "-m", "7", "--sequence", "1,1,2,1,3,1", "--mode", "sr"]));
    assert_eq!(v["report"]["attained"], true);
    assert_eq!(v["report"]["achieved"]["num"], 16);
    assert_eq!(v["report"]["achieved"]["den"], 7);
    assert_eq!(v["report"]["oracle_agrees"], true);
}

#[test]
fn extremal_poa_matches_bound() {
    let v = last_json(&elimgame(&["extremal", "-n", "2", "-m", "8", "--sequence", "1112221", "--mode", "poa"]));
    assert_eq!(v["report"]["attained"], true);
    assert_eq!(v["report"]["achieved"]["num"], 10);
    assert_eq!(v["report"]["achieved"]["den"], 7);
}

#[test]
fn extremal_palindrome_is_infeasible() {
    let out = elimgame(&["extremal", "-n", "3", "-m", "7", "--sequence", "123321", "--mode", "sr"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bounds_prints_closed_forms() {
    let v = last_json(&elimgame(&["bounds", "--sequence", "1112221"]));
    assert_eq!(v["o_max"], 4);
    assert_eq!((v["poa"]["num"].as_u64(), v["poa"]["den"].as_u64()), (Some(10), Some(7)));
    assert_eq!((v["sr_upper"]["num"].as_u64(), v["sr_upper"]["den"].as_u64()), (Some(11), Some(8)));
}

#[test]
fn exhaustive_row_and_histogram() {
    let hist = profile_file("hist.csv", "");
    let out = elimgame(&[
        "exhaustive",
        "--sequence",
        "1112221",
        "--mode",
        "CB",
        "--workers",
        "2",
        "--out",
        hist.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("sequence,n,m,mode,culture,phi,count,mean,std,max_num,max_den"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..7], ["1112221", "2", "8", "CB", "exhaustive", "", "40320"]);
    assert_eq!(&row[9..], ["11", "8"]);
    let v = last_json(&out);
    assert!(v["witness"].is_string());

    let csv = std::fs::read_to_string(&hist).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("bin_left,bin_right,count"));
    let total: u64 = rows.map(|r| r.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 40320);
}

#[test]
fn exhaustive_budget_exit_code() {
    let out = elimgame(&["exhaustive", "-n", "4", "-m", "8", "--sequence", "1234123"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));

    let out = Command::new(env!("CARGO_BIN_EXE_elimgame"))
        .args(["exhaustive", "--sequence", "1121"])
        .env("ELIMGAME_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn montecarlo_is_worker_independent() {
    let run = |workers: &str| {
        let out = elimgame(&[
            "montecarlo",
            "-n",
            "5",
            "-m",
            "10",
            "--sequence",
            "112321345",
            "--culture",
            "mallows:phi=0.8",
            "--samples",
            "3000",
            "--seed",
            "11",
            "--workers",
            workers,
        ]);
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("16"));
    let text = String::from_utf8(one).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("112321345,5,10,AB,mallows,0.8,3000,"));
}

#[test]
fn montecarlo_rejects_bad_phi() {
    let out = elimgame(&["montecarlo", "--sequence", "1212", "--culture", "mallows", "--phi", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
}
