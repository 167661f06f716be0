use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperiso::format::parse_simple;
use hyperiso::randmodels::{gen_binomial, GeneratorParams};
use hyperiso::rng::derive_seed;
use tempfile::TempDir;

fn hyperiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperiso")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLES: &str = "3 6 4\n0 1 2\n0 1 3\n0 2 4\n3 4 5\n";
const RELABELED: &str = "3 6 4\n3 4 5\n2 4 5\n1 3 5\n0 1 2\n";

#[test]
fn gen_then_canon() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("h.txt");
    let o = hyperiso(&["gen", "--model", "binomial", "--n", "30", "--k", "3", "--p", "0.3", "--seed", "5", "--out", s(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let expected = gen_binomial(&GeneratorParams::binomial(30, 3, 0.3, 5)).unwrap();
    assert_eq!(parse_simple(&std::fs::read_to_string(&file).unwrap()).unwrap(), expected);

    let o = hyperiso(&["canon", s(&file)]);
    let text = stdout(&o);
    assert!(text.starts_with("status: "), "{text}");
    match o.status.code() {
        Some(0) => assert!(text.contains("certificate: ")),
        Some(2) => assert!(text.contains("tied-classes")),
        c => panic!("unexpected exit {c:?}"),
    }
}

#[test]
fn iso_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", TRIANGLES);
    let b = write(&dir, "b.txt", RELABELED);
    let c = write(&dir, "c.txt", "3 6 4\n0 1 2\n0 1 3\n0 1 4\n3 4 5\n");
    let same = hyperiso(&["iso", s(&a), s(&a)]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).contains("verdict: isomorphic"));
    assert_eq!(hyperiso(&["iso", s(&a), s(&b)]).status.code(), Some(0));
    assert_eq!(hyperiso(&["iso", s(&a), s(&c)]).status.code(), Some(1));
}

#[test]
fn oracle_commands() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", TRIANGLES);
    let b = write(&dir, "b.txt", RELABELED);
    let o = hyperiso(&["oracle", "iso", s(&a), s(&b)]);
    assert_eq!(o.status.code(), Some(0));
    let witness: Vec<usize> = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("witness: "))
        .unwrap()
        .split(' ')
        .map(|t| t.parse().unwrap())
        .collect();
    let h1 = parse_simple(TRIANGLES).unwrap();
    assert_eq!(h1.relabel(&witness).unwrap(), parse_simple(RELABELED).unwrap());

    let k4 = write(&dir, "k4.txt", "3 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n");
    let o = hyperiso(&["oracle", "aut", s(&k4)]);
    assert!(stdout(&o).contains("trivial: no"));
    let o = hyperiso(&["oracle", "ek", s(&k4)]);
    assert!(stdout(&o).contains("collisions: 6"));

    let o = hyperiso(&["oracle", "pj", "--mu", "5", "--r", "2", "--s", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2,1/3,"), "{text}");
    assert!(text.contains("3,2/3,"), "{text}");
}

#[test]
fn regprofile_reports_depth() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("reg.txt");
    let o = hyperiso(&["gen", "--model", "config", "--n", "30", "--k", "3", "--r", "3", "--seed", "2", "--out", s(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = hyperiso(&["regprofile", s(&file), "--r", "3"]);
    let text = stdout(&o);
    assert!(text.contains("rho: 4"), "{text}");
    assert!(text.contains("lstar: "));
    let o = hyperiso(&["regprofile", s(&file), "--r", "3", "--csv"]);
    assert_eq!(stdout(&o).lines().count(), 31);
}

#[test]
fn exp_rows_and_reproducibility() {
    let args = ["exp", "labeling-rate", "--n", "60", "--k", "3", "--p", "0.3", "--trials", "100", "--seed", "7"];
    let one = Command::new(env!("CARGO_BIN_EXE_hyperiso")).args(args).env("HYPERISO_WORKERS", "1").output().unwrap();
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    let csv = stdout(&one);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# hyperiso-exp v1 labeling-rate");
    assert_eq!(lines[1], "trial,seed,edges,status,reason,classes,tied_classes");
    assert_eq!(lines.len(), 102);
    for (t, line) in lines[2..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], derive_seed(7, t as u64).to_string());
    }
    assert!(stderr(&one).contains("trials=100"));
    let four = Command::new(env!("CARGO_BIN_EXE_hyperiso")).args(args).env("HYPERISO_WORKERS", "4").output().unwrap();
    assert_eq!(stdout(&four), csv);
}

#[test]
fn exp_config_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let saved = dir.path().join("cfg.txt");
    let out = dir.path().join("rows.csv");
    let o = hyperiso(&[
        "exp", "occupancy", "--mu", "5", "--r", "2", "--s", "3", "--trials", "50", "--seed", "1",
        "--save-config", s(&saved), "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = std::fs::read_to_string(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    let o = hyperiso(&["exp", "--config", s(&saved)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    assert!(stderr(&o).contains("exact.P_2=1/3"));
}

#[test]
fn usage_errors_exit_64() {
    let o = hyperiso(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(hyperiso(&[]).status.code(), Some(64));
    assert_eq!(hyperiso(&["exp", "no-such-kind", "--trials", "1"]).status.code(), Some(64));
    assert_eq!(hyperiso(&["gen", "--model", "binomial", "--n", "5", "--k", "3"]).status.code(), Some(64));
    assert_eq!(hyperiso(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "3 5 1\n0 0 1\n");
    let o = hyperiso(&["canon", s(&bad)]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let missing = dir.path().join("missing.txt");
    assert_eq!(hyperiso(&["canon", s(&missing)]).status.code(), Some(74));
    let o = hyperiso(&["exp", "ek-rate", "--n", "50", "--k", "3", "--p", "0.3", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("oracle-size"));
}

#[test]
fn in_process_run_matches_binary() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", TRIANGLES);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = hyperiso_cli::run(["hyperiso", "canon", s(&a)], &mut out, &mut err);
    let bin = hyperiso(&["canon", s(&a)]);
    assert_eq!(Some(code), bin.status.code());
    assert_eq!(out, bin.stdout);
}
