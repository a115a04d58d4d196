use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avoidkit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(o: &Output, key: &str) -> Option<String> {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")).map(str::to_string))
}

fn dup2(dir: &Path) -> String {
    let p = dir.join("dup2.ckt");
    fs::write(&p, "circuit 2 4\noutputs x0 x1 x0 x1\n").unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn avoid_with_a_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dup2(dir.path());
    let out = dir.path().join("bundle");
    let o = run(&[
        "avoid",
        "--circuit",
        &ckt,
        "--f",
        "00011011",
        "--T",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(value(&o, "result").as_deref(), Some("1011"));
    let h = out.join("history_0.tt");
    assert!(h.exists());
    let o = run(&[
        "verify-history",
        "--circuit",
        &ckt,
        "--f",
        "00011011",
        "--history",
        h.to_str().unwrap(),
        "--all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "accepted"));
}

#[test]
fn tampered_history_is_rejected_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dup2(dir.path());
    // Honest history with the first label bit flipped.
    let o = run(&[
        "avoid",
        "--circuit",
        &ckt,
        "--f",
        "00011011",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("history_0.tt")).unwrap();
    let h = avoidkit::BitString::from_tt(text.trim()).unwrap();
    let mut bad = h.clone();
    bad.flip(6);
    let p = dir.path().join("bad.tt");
    fs::write(&p, bad.to_tt()).unwrap();
    let o = run(&[
        "verify-history",
        "--circuit",
        &ckt,
        "--f",
        "00011011",
        "--history",
        p.to_str().unwrap(),
        "--all",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).lines().any(|l| l == "rejected"));
}

#[test]
fn family_avoidance_writes_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert");
    let o = run(&[
        "avoid",
        "--family",
        "dup",
        "--n0",
        "2",
        "--profile",
        "desk",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&o, "k").as_deref(), Some("0"));
    assert!(value(&o, "seed").is_some());
    for f in ["schedule.txt", "history_0.tt", "result.txt", "verify.log"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(fs::read_to_string(out.join("result.txt"))
        .unwrap()
        .contains("profile: desk"));
}

#[test]
fn arbitrary_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.ckt");
    fs::write(&p, "circuit 2 3\ng0 = AND x0 x1\noutputs x0 g0 x1\n").unwrap();
    let o = run(&[
        "avoid",
        "--circuit",
        p.to_str().unwrap(),
        "--arbitrary",
        "--seed",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let y = value(&o, "result").unwrap();
    // Range is {000, 001, 100, 111}.
    assert!(["010", "011", "101", "110"].contains(&y.as_str()), "{y}");
}

#[test]
fn parse_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.ckt");
    fs::write(&p, "circuit 2 4\ng0 = FOO x0\n").unwrap();
    assert_eq!(
        run(&["avoid", "--circuit", p.to_str().unwrap(), "--f", "00011011"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["avoid", "--bogus"]).status.code(), Some(2));
    let ckt = dup2(dir.path());
    assert_eq!(
        run(&["avoid", "--circuit", &ckt, "--f", "00011011", "--T", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn resource_limits_exit_3() {
    let o = run(&[
        "avoid",
        "--family",
        "dup",
        "--n0",
        "2",
        "--track",
        "s2",
        "--max-stages",
        "3",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn comp_example() {
    let o = run(&[
        "rm", "comp", "--p", "5", "--m", "1", "--delta", "1", "--msgA", "10", "--msgB", "11",
        "--seed", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "w = 1"));
}

#[test]
fn harnesses_pass() {
    for args in [
        &[
            "select-trials",
            "--trials",
            "60",
            "--eps",
            "0.05",
            "--seed",
            "9",
            "--jobs",
            "2",
        ][..],
        &["derand", "--trials", "50", "--seed", "9"],
        &[
            "rm", "ldt", "--mode", "far", "--trials", "50", "--seed", "9",
        ],
        &["rm", "pcorr", "--trials", "100", "--seed", "9"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert_eq!(value(&o, "seed").as_deref(), Some("9"));
        assert_eq!(value(&o, "verified").as_deref(), Some("true"));
    }
}

#[test]
fn reports_are_reproducible() {
    let a = run(&["select-trials", "--trials", "30", "--seed", "5"]);
    let b = run(&[
        "select-trials",
        "--trials",
        "30",
        "--seed",
        "5",
        "--jobs",
        "3",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn schedule_report() {
    let o = run(&["schedule", "--n0", "2"]);
    assert!(stdout(&o).contains("stage 1: n = 1024, T = 320"));
}
