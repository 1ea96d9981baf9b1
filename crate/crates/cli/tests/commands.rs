use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablemanip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn decide_yes_puts_c_first() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "rule=plurality\nc=b\ndelta=0\n\na b c\nb a c\n");
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("YES\n"));
    assert!(out.contains("manipulator: b "), "{out}");
}

#[test]
fn decide_no_when_c_can_be_pushed_out() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "rule=plurality\nc=c\ndelta=1,1\n\nc a b\nc a b\n");
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NO\n");

    let o = run(&["decide", "--oracle", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("perturbed:"));
}

#[test]
fn malformed_ranking_reports_line() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "rule=borda\nc=a\n\na b c\nc b\n");
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn copeland_needs_the_oracle() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "rule=copeland\nc=a\ndelta=1\n\na b c\nb c a\n");
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Copeland"), "{}", stderr(&o));
    let o = run(&["decide", "--oracle", &f]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_error() {
    assert_eq!(run(&["decide", "/nonexistent/x.txt"]).status.code(), Some(2));
    assert_eq!(run(&["decide"]).status.code(), Some(2));
}

#[test]
fn winners() {
    let dir = TempDir::new().unwrap();
    let tie = write(&dir, "tie.txt", "x y z\ny x z\n");
    let o = run(&["winners", &tie, "--rule", "plurality"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x y\n");

    let single = write(&dir, "one.txt", "q p r s\n");
    for rule in ["plurality", "borda", "k-approval:1", "scoring:3-2-1-0"] {
        assert_eq!(stdout(&run(&["winners", &single, "--rule", rule])), "q\n", "{rule}");
    }
    // Veto only separates the last place.
    assert_eq!(stdout(&run(&["winners", &single, "--rule", "veto"])), "p q r\n");

    let bucklin = write(&dir, "b.txt", "rule=bucklin\n\na b c\na c b\nb a c\n");
    assert_eq!(stdout(&run(&["winners", &bucklin])), "a\n");

    assert_eq!(run(&["winners", &tie]).status.code(), Some(2));
    assert_eq!(run(&["winners", &tie, "--rule", "nonsense"]).status.code(), Some(2));
}

fn experiment(out: &Path, extra: &[&str]) -> Output {
    let out = out.to_string_lossy();
    let mut args = vec![
        "experiment",
        "--rules",
        "plurality",
        "--m",
        "6",
        "--n",
        "4",
        "--deltas",
        "0,1,2",
        "--trials",
        "100",
        "--seed",
        "1",
        "--out",
        &out,
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn experiment_csv_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(experiment(&a, &["--jobs", "1"]).status.code(), Some(0));
    assert_eq!(experiment(&b, &["--jobs", "4"]).status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    assert!(text.lines().next().unwrap().starts_with("# stablemanip "));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "rule,m,n,delta,trials,seed,yes_count,fraction");
    assert_eq!(data.len(), 4);
    let fractions: Vec<f64> = data[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(fractions[0], 1.0);
    assert!(fractions[1] <= 0.05, "{text}");
    assert!(data[1..].iter().all(|l| l.rsplit(',').next().unwrap().split('.').nth(1).unwrap().len() == 4));
}

#[test]
fn one_trial_gives_zero_or_one() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("t.csv");
    let o = run(&[
        "experiment", "--rules", "borda,maximin", "--m", "4", "--n", "3", "--deltas", "1",
        "--trials", "1", "--out", &p.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&p).unwrap();
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        assert!(line.ends_with(",0.0000") || line.ends_with(",1.0000"), "{line}");
    }
}

#[test]
fn experiment_errors() {
    let dir = TempDir::new().unwrap();
    let unwritable = dir.path().join("missing").join("x.csv");
    assert_eq!(experiment(&unwritable, &[]).status.code(), Some(2));

    // δ above m(m-1)/2 fails that row but the others are still written.
    let p = dir.path().join("e.csv");
    let o = run(&[
        "experiment", "--rules", "plurality", "--m", "3", "--n", "2", "--deltas", "0,9",
        "--trials", "5", "--out", &p.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.contains("plurality,3,2,0,5,0,5,1.0000"), "{text}");
    assert!(text.contains("# error: rule=plurality m=3 n=2 delta=9"), "{text}");
}
