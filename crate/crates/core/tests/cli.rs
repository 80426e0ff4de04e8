use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cousr");

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("COUSR_THREADS", "2").output().unwrap()
}

fn example_args<'a>(db: &'a str, ut: &'a str) -> Vec<&'a str> {
    vec!["--db", db, "--utils", ut]
}

fn paths() -> (String, String) {
    (
        testdata("table1.db").to_string_lossy().into_owned(),
        testdata("table1.ut").to_string_lossy().into_owned(),
    )
}

const PAPER: [&str; 8] = ["--min-util", "50", "--min-conf", "0.7", "--min-bond", "0.3", "--min-lift", "1.1"];

#[test]
fn mine_example_writes_four_rules_and_report() {
    let (db, ut) = paths();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rules.csv");
    let report = dir.path().join("report.json");
    let mut args = vec!["mine"];
    args.extend(example_args(&db, &ut));
    args.extend(PAPER);
    args.extend(["--out", out.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv,
        "antecedent;consequent;utility;support;confidence;lift;bond_x;bond_y\n\
         1,2,3,4;7;55;2;1;1.25;0.4;1\n\
         1,2,4;7;74;4;1;1.25;0.8;1\n\
         1,4;7;54;4;1;1.25;0.8;1\n\
         2,4;7;53;4;1;1.25;0.8;1\n"
    );
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["rules"], 4);
    assert!(json["stats"]["utility_list_rows"].as_u64().unwrap() > 0);
}

#[test]
fn variants_write_identical_bytes() {
    let (db, ut) = paths();
    let outputs: Vec<Vec<u8>> = ["base", "s6", "s7", "s6s7"]
        .iter()
        .map(|v| {
            let mut args = vec!["mine"];
            args.extend(example_args(&db, &ut));
            args.extend(PAPER);
            args.extend(["--variant", v]);
            let o = run(&args);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (db, ut) = paths();
    let mut args = vec!["mine"];
    args.extend(example_args(&db, &ut));
    args.extend(["--min-util", "10", "--conf-prune"]);
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn aliases_label_output() {
    let (db, ut) = paths();
    let alias = testdata("table1.alias");
    let mut args = vec!["mine"];
    args.extend(example_args(&db, &ut));
    args.extend(PAPER);
    args.extend(["--aliases", alias.to_str().unwrap()]);
    let stdout = String::from_utf8(run(&args).stdout).unwrap();
    assert!(stdout.contains("\na,b,d;g;74;4;"));
}

#[test]
fn huge_min_util_gives_no_rules() {
    let (db, ut) = paths();
    let mut args = vec!["mine"];
    args.extend(example_args(&db, &ut));
    args.extend(["--min-util", "1e18"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1);
}

#[test]
fn error_exit_codes() {
    let (db, ut) = paths();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.db");
    fs::write(&bad, "1:1 1:2 -1 -2\n").unwrap();

    let o = run(&["mine", "--db", bad.to_str().unwrap(), "--utils", &ut, "--min-util", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let o = run(&["mine", "--db", "/no/such/file", "--utils", &ut, "--min-util", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["mine", "--db", &db, "--utils", &ut, "--min-util", "1", "--min-bond", "1.5"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["mine", "--db", &db, "--utils", &ut, "--min-util=-3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_example_and_random() {
    let (db, ut) = paths();
    let mut args = vec!["verify"];
    args.extend(example_args(&db, &ut));
    args.extend(PAPER);
    assert_eq!(run(&args).status.code(), Some(0));

    let o = run(&["verify", "--random", "50", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_rejects_large_database() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("wide.db");
    let ut = dir.path().join("wide.ut");
    let seq: String = (1..=20).map(|i| format!("{i}:1 -1 ")).collect();
    fs::write(&db, format!("{seq}-2\n")).unwrap();
    fs::write(&ut, (1..=20).map(|i| format!("{i} 1\n")).collect::<String>()).unwrap();
    let o = run(&["verify", "--db", db.to_str().unwrap(), "--utils", ut.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bench_rows() {
    let (db, ut) = paths();
    let mut args = vec!["bench"];
    args.extend(example_args(&db, &ut));
    args.extend(["--min-util", "0,20,40,60,80", "--variant", "s6s7"]);
    let o = run(&args);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("variant,minutil,rules,pruned_s6,pruned_s7,uls_built,ms"));
    let counts: Vec<usize> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(counts.len(), 5);
    assert!(counts.windows(2).all(|w| w[0] >= w[1]));

    let mut args = vec!["bench"];
    args.extend(example_args(&db, &ut));
    args.extend(["--min-util", "50", "--variant", "base"]);
    assert_eq!(String::from_utf8(run(&args).stdout).unwrap().lines().count(), 2);
}

#[test]
fn bench_synthetic_uls_order() {
    let o = run(&["bench", "--synthetic", "1000,100,6,3", "--min-util", "300", "--min-bond", "0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let uls = |variant: &str| -> usize {
        let line = text.lines().find(|l| l.starts_with(&format!("{variant},"))).unwrap();
        line.split(',').nth(5).unwrap().parse().unwrap()
    };
    assert!(uls("s6s7") <= uls("s7"));
    assert!(uls("s7") <= uls("base"));
}
