use std::path::PathBuf;
use std::process::{Command, Output};

fn zpdehn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpdehn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

#[test]
fn block_sweep_has_no_violations() {
    let o = zpdehn(&["lemma-sweep", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# zpdehn "), "{s}");
    assert!(s.contains("blocks: 6561"));
    assert!(s.lines().any(|l| l == "violations: 0"), "{s}");
}

#[test]
fn pair_sweep_needs_a_seed() {
    let o = zpdehn(&["lemma-sweep", "--lemma", "pair-constraint"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
    let o = zpdehn(&[
        "lemma-sweep",
        "--lemma",
        "pair-constraint",
        "--seed",
        "5",
        "--samples",
        "300",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations: 0"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["fill", "--coeff", "1/1"],
        vec![
            "fill",
            "--synthetic",
            "1",
            "--manifold",
            "x.json",
            "--coeff",
            "1/1",
        ],
        vec!["height", "--poly", "x^2-2", "--root", "0"],
        vec!["height", "--poly", "x^"],
        vec!["classify", "--rows", "1,0;0,1"],
    ] {
        assert_eq!(zpdehn(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_manifold_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"cusps": 1, "shapes": [[0.66, 0.0]], "coefficients": [], "truncation": 8}"#,
    )
    .unwrap();
    let o = zpdehn(&["fill", "--manifold", p.to_str().unwrap(), "--coeff", "7/2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1 column"), "{err}");
}

#[test]
fn repeated_runs_are_identical() {
    let args = [
        "fill",
        "--synthetic",
        "2",
        "--seed",
        "3",
        "--coeff",
        "5/1,7/2",
    ];
    let a = zpdehn(&args);
    let b = zpdehn(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "lemma-sweep",
        "--lemma",
        "pair-constraint",
        "--seed",
        "9",
        "--samples",
        "200",
        "--format",
        "csv",
    ];
    assert_eq!(zpdehn(&args).stdout, zpdehn(&args).stdout);
}

#[test]
fn fill_prints_each_cusp() {
    let o = zpdehn(&[
        "fill",
        "--synthetic",
        "2",
        "--coeff",
        "5/1,7/2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(s.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["cusp", "slope", "u", "v", "t", "t_mp"]
    );
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][1], "5/1");
    assert_eq!(&rows[1][1], "7/2");
}

#[test]
fn fill_reads_a_manifold_file() {
    let o = zpdehn(&[
        "fill",
        "--manifold",
        &data("one_cusp.json"),
        "--coeff",
        "7/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("cusp 1 slope 7/2"), "{s}");
    assert!(s.contains("t (256 bits) = "));
}

#[test]
fn synthetic_scan_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = zpdehn(&[
        "scan",
        "--synthetic",
        "1",
        "--seed",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&out).unwrap();
    let body: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["a,b,distance,confirmed"]);
}

#[test]
fn cascade_finds_and_confirms_a_cusp() {
    let o = zpdehn(&[
        "cascade",
        "--cusps",
        "3",
        "--rows",
        "1,1,0,0,0,0;0,0,1,0,0,0;0,0,0,1,0,0",
        "--samples",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("outcome: cusp 2"), "{s}");
    assert!(s.contains("continuation: holds"));
}

#[test]
fn block_classification() {
    let o = zpdehn(&[
        "classify",
        "--mode",
        "two-tau",
        "--rows",
        "1,2,0,0;0,0,1,-2",
        "--coeff",
        "1/2,-1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pair verdict: Impossible"));
}

#[test]
fn heights_and_relations() {
    let o = zpdehn(&["height", "--poly", "2x - 3"]);
    let s = stdout(&o);
    let h: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("height: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((h - 3f64.ln()).abs() < 1e-15);

    let o = zpdehn(&["multrel", "--numbers", "2;3;6"]);
    assert!(stdout(&o).contains("relation: 1 1 -1"));
    let o = zpdehn(&["multrel", "--numbers", "2;3;5", "--bound", "5"]);
    assert!(stdout(&o).contains("relation: none"));
}

#[test]
fn northcott_csv_lists_roots_of_unity() {
    let o = zpdehn(&[
        "northcott",
        "--max-height",
        "0.01",
        "--degree",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows = s.lines().filter(|l| !l.starts_with('#')).count() - 1;
    // 0, +-1, +-i and the primitive cube and sixth roots of unity
    assert_eq!(rows, 9, "{s}");
}
