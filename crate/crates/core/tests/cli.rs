use std::path::Path;
use std::process::{Command, Output};

fn rmwd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmwd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn body(p: &Path) -> Vec<String> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn brute_small_code() {
    let o = rmwd(&["brute", "--r", "1", "--m", "3"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(lines, ["0 1", "4 14", "8 1"]);
}

#[test]
fn brute_reports_sum() {
    let o = rmwd(&["brute", "--r", "2", "--m", "5"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("2^16"), "{}", stderr(&o));
}

#[test]
fn brute_cap_is_an_error() {
    let o = rmwd(&["brute", "--r", "3", "--m", "8"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("dimension 93 exceeds cap"), "{}", stderr(&o));
}

#[test]
fn coset_examples() {
    let o = rmwd(&["coset", "--anf", "0", "--r", "1", "--m", "3"]);
    assert_eq!(stdout(&o).trim(), "1 + 14z^4 + z^8");
    let o = rmwd(&["coset", "--anf", "12+34", "--r", "1", "--m", "4"]);
    assert_eq!(stdout(&o).trim(), "16z^6 + 16z^10");
    let o = rmwd(&["coset", "--anf", "12+3x4", "--r", "1", "--m", "4"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("3x4"), "{}", stderr(&o));
}

#[test]
fn classify_is_deterministic_and_reingests() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = rmwd(&["classify", "--d", "3", "--m", "6", "--seed", "11", "--out", path(out)]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stderr(&o).contains("sum to 2^20"));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("# quotient d=3 m=6\n# seed 11\n"));
    let c = rmwd::classify::ingest_classification(&text).unwrap();
    assert_eq!(c.to_text(), text);

    let o = rmwd(&["classify", "--d", "2", "--m", "4", "--out", path(&a)]);
    assert!(stderr(&o).contains("3 classes"));
    let o = rmwd(&["classify", "--d", "1", "--m", "1", "--out", path(&a)]);
    assert!(stderr(&o).contains("2 classes"));
}

#[test]
fn pipeline_strategies_agree_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let classes = dir.path().join("classes.txt");
    rmwd(&["classify", "--d", "3", "--m", "6", "--out", path(&classes)]);
    let direct = dir.path().join("direct.txt");
    let blocks = dir.path().join("blocks.txt");
    let ckpt = dir.path().join("ckpt");
    for (out, strategy) in [(&direct, "direct"), (&blocks, "blocks")] {
        let o = rmwd(&[
            "pipeline", "--r", "3", "--m", "7", "--classes", path(&classes),
            "--strategy", strategy, "--checkpoint", path(&ckpt.join(strategy)), "--out", path(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(body(&direct), body(&blocks));
    let o = rmwd(&["verify", "--dist", path(&blocks), "--r", "3", "--m", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));

    let again = dir.path().join("again.txt");
    let o = rmwd(&[
        "pipeline", "--r", "3", "--m", "7", "--classes", path(&classes),
        "--checkpoint", path(&ckpt.join("blocks")), "--out", path(&again),
    ]);
    assert!(stderr(&o).contains("6 resumed"), "{}", stderr(&o));
    assert_eq!(std::fs::read(&again).unwrap(), std::fs::read(&blocks).unwrap());
}

#[test]
fn pipeline_without_class_file_classifies_itself() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.txt");
    let brute = dir.path().join("b.txt");
    let o = rmwd(&["pipeline", "--r", "2", "--m", "5", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    rmwd(&["brute", "--r", "2", "--m", "5", "--out", path(&brute)]);
    assert_eq!(body(&out), body(&brute));
}

#[test]
fn pipeline_rejects_wrong_class_file() {
    let dir = tempfile::tempdir().unwrap();
    let classes = dir.path().join("classes.txt");
    rmwd(&["classify", "--d", "2", "--m", "4", "--out", path(&classes)]);
    let o = rmwd(&[
        "pipeline", "--r", "3", "--m", "5", "--classes", path(&classes),
        "--out", path(&dir.path().join("x")),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("H^(3)(4)"), "{}", stderr(&o));
}

#[test]
fn verify_flags_truncated_files() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.txt");
    std::fs::write(&full, rmwd::dataio::RM_4_9).unwrap();
    let o = rmwd(&["verify", "--dist", path(&full), "--r", "4", "--m", "9"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));

    let cut = dir.path().join("cut.txt");
    let lines: Vec<&str> = rmwd::dataio::RM_4_9.lines().collect();
    std::fs::write(&cut, lines[..lines.len() - 5].join("\n")).unwrap();
    let o = rmwd(&["verify", "--dist", path(&cut), "--r", "4", "--m", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().last(), Some("FAIL: sum"));
}

#[test]
fn equiv_finds_and_rejects() {
    let o = rmwd(&["equiv", "--e1", "123", "--e2", "145", "--m", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    let matrix = rmwd::Gf2Matrix::parse(lines.next().unwrap()).unwrap();
    assert_eq!(lines.next(), Some("verified"));
    let e1 = rmwd::boolfn::parse_anf("123", 5).unwrap();
    let e2 = rmwd::boolfn::parse_anf("145", 5).unwrap();
    assert_eq!(rmwd::gf2group::top_image(&e1, &matrix).unwrap(), e2);

    let o = rmwd(&["equiv", "--e1", "123", "--e2", "123+145", "--m", "5", "--budget", "2000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fixtures_command() {
    let o = rmwd(&["fixtures"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("sum of |Delta(e)| = 68443"));
    assert!(out.contains("sum of n(e) = 999"));
    assert!(out.contains("sum of n(e) s(e) = 1827252"));
    assert_eq!(out.matches("PASS").count(), 12);
}
