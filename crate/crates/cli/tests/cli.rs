use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SIX: &str = r#"{"n":6,"entries":[[0,1,2,3,4,null],[1,0,2,4,3,null],[null,null,null,null,null,2],[null,null,null,null,null,2],[null,null,null,null,null,2],[null,null,null,null,null,5]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgpoidkit"))
        .args(args)
        .env_remove("SGPOIDKIT_DB")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_verdicts() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "ff.json", r#"{"n":3,"entries":[[0,1,2],[1,1,2],[2,1,2]]}"#);
    let o = run(&["check", s(&good)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "associative: true; minimal objects: 1; semigroupoid: true");

    let bad = write(dir.path(), "s2.json", r#"{"table":{"n":3,"entries":[[null,1,null],[null,null,null],[null,null,null]]}}"#);
    let o = run(&["check", s(&bad)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("false (failing triple: 0 0 1)"), "{out}");
    assert!(out.contains("semigroupoid: false"));
}

#[test]
fn morphism_counts_and_listing() {
    let dir = TempDir::new().unwrap();
    let six = write(dir.path(), "six.json", SIX);
    let count = |extra: &[&str]| {
        let mut args = vec!["morphisms", s(&six), s(&six), "--count-only"];
        args.extend_from_slice(extra);
        stdout(&run(&args)).trim().parse::<usize>().unwrap()
    };
    assert_eq!(count(&[]), 9);
    assert_eq!(count(&["--strict"]), 6);
    assert_eq!(count(&["--strict", "--jobs", "3"]), 6);

    let o = run(&["morphisms", s(&six), s(&six), "--strict"]);
    let listed: Vec<Vec<usize>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(listed.len(), 6);
    assert!(listed.contains(&vec![0, 1, 2, 3, 4, 5]));
}

#[test]
fn count_only_matches_listing_length() {
    let dir = TempDir::new().unwrap();
    let six = write(dir.path(), "six.json", SIX);
    let listed = stdout(&run(&["infer-types", s(&six)])).lines().count();
    let counted: usize = stdout(&run(&["infer-types", s(&six), "--count-only"])).trim().parse().unwrap();
    assert_eq!(listed, counted);
    assert!(counted > 0);

    let listed = stdout(&run(&["enumerate-tables", "--arrows", "2"])).lines().count();
    let counted: usize =
        stdout(&run(&["enumerate-tables", "--arrows", "2", "--count-only"])).trim().parse().unwrap();
    assert_eq!((listed, counted), (8, 8));
}

#[test]
fn enumerated_tables_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&run(&["enumerate-tables", "--arrows", "2", "--allow-nc"]));
    for (i, l) in out.lines().enumerate() {
        let p = write(dir.path(), &format!("t{i}.json"), l);
        let o = run(&["check", s(&p)]);
        assert!(o.status.success());
        assert!(stdout(&o).starts_with("associative: true"), "{l}");
    }
}

#[test]
fn arrowtype_csv_row_sums() {
    let o = run(&["arrowtypes", "--max-arrows", "4", "--emit-table", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let sums: Vec<&str> = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(sums, ["2", "7", "21", "70"]);
}

#[test]
fn arrowtype_database_persists() {
    let dir = TempDir::new().unwrap();
    let db = dir.path().join("db");
    let first = run(&["arrowtypes", "--max-arrows", "3", "--db", s(&db), "--emit-table", "json"]);
    assert!(first.status.success());
    let second = run(&["arrowtypes", "--max-arrows", "3", "--db", s(&db), "--emit-table", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(db.join("meta.json").exists());
}

#[test]
fn generate_vessels() {
    let dir = TempDir::new().unwrap();
    let gens = write(
        dir.path(),
        "gens.json",
        r#"{"degrees":[2,2],"generators":[
            {"dom":0,"cod":0,"map":[1,0]},{"dom":1,"cod":1,"map":[1,1]},
            {"dom":0,"cod":1,"map":[0,1]},{"dom":1,"cod":0,"map":[0,1]}]}"#,
    );
    let o = run(&["generate", s(&gens)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let n = v["arrows"].as_array().unwrap().len();
    assert_eq!(v["table"]["n"].as_u64().unwrap() as usize, n);
    let counted: usize = stdout(&run(&["generate", s(&gens), "--count-only"])).trim().parse().unwrap();
    assert_eq!(counted, n);
}

#[test]
fn represent_minimal() {
    let dir = TempDir::new().unwrap();
    let six = write(dir.path(), "six.json", SIX);
    let o = run(&["represent", s(&six)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([2, 2]));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cyclic = write(dir.path(), "c.json", r#"{"n":2,"entries":[[1,0],[0,1]]}"#);
    let loner = write(dir.path(), "l.json", r#"{"n":2,"entries":[[0,null],[null,null]]}"#);
    let o = run(&["morphisms", s(&cyclic), s(&loner), "--bijective"]);
    assert_eq!(o.status.code(), Some(1));

    let broken = write(dir.path(), "b.json", r#"{"n":2,"entries":[[0,1]"#);
    let o = run(&["check", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = run(&["check", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["arrowtypes", "--max-arrows", "9", "--method", "brute"]);
    assert_eq!(o.status.code(), Some(3));
}
