//! Black-box tests against the built binary: exit codes, output schema,
//! determinism, and the generate → write → parse → analyze loop.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutbench"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn assert_code(out: &Output, expected: i32) {
    assert_eq!(
        out.status.code(),
        Some(expected),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

/// Data rows of a CSV body: everything between the header and the trailing
/// provenance comment.
fn data_rows(text: &str) -> Vec<String> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_owned)
        .collect()
}

#[test]
fn reproduce_is_deterministic_with_stable_schema() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--grid", "200x200", "reproduce", "table2"];
    let first = run(dir.path(), &args);
    assert_code(&first, 0);
    let text = stdout(&first);

    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,n,k,lambda,mu,instances,alpha_qaoa",
        "header is the schema contract"
    );
    let last = text.lines().last().unwrap();
    assert!(
        last.starts_with("# cutbench 0.1.0 seed=0 grid=200x200"),
        "provenance line missing: {last}"
    );
    assert_eq!(data_rows(&text).len(), 4);

    let second = run(dir.path(), &args);
    assert_code(&second, 0);
    assert_eq!(first.stdout, second.stdout, "same flags, same bytes");
}

#[test]
fn every_subcommand_emits_provenance() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]), 0);

    let commands: Vec<Vec<&str>> = vec![
        vec!["--grid", "100x100", "reproduce", "table3"],
        vec!["--grid", "100x100", "analyze", "--in", "k6_3_1.el"],
        vec!["stats", "--in", "k6_3_1.el"],
        vec!["spectra", "--in", "k6_3_1.el"],
    ];
    for args in commands {
        let out = run(dir.path(), &args);
        assert_code(&out, 0);
        let text = stdout(&out);
        let last = text.lines().last().unwrap();
        assert!(
            last.starts_with("# cutbench 0.1.0"),
            "{args:?}: missing provenance, got {last}"
        );
    }
}

#[test]
fn generated_file_analysis_matches_parametric_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]);
    assert_code(&gen, 0);
    assert!(dir.path().join("k6_3_1.el").exists());
    assert!(dir.path().join("k6_3_1.meta").exists());

    let grid = ["--grid", "300x300"];
    let from_file = run(
        dir.path(),
        &[&grid[..], &["analyze", "--in", "k6_3_1.el"]].concat(),
    );
    assert_code(&from_file, 0);
    let parametric = run(
        dir.path(),
        &[
            &grid[..],
            &["analyze", "--family", "karloff", "--m", "6", "--b", "1"],
        ]
        .concat(),
    );
    assert_code(&parametric, 0);

    let a = data_rows(&stdout(&from_file));
    let b = data_rows(&stdout(&parametric));
    assert_eq!(a.len(), 1);
    assert_eq!(b.len(), 1);
    // Identity columns (instance label, params text) may differ; every
    // numeric column from node count through the QAOA ratio must not.
    // Anchor from the row's end, since a quoted label like "J(6,3,1)"
    // confuses a naive comma split: the last two fields are warnings and
    // elapsed time, preceded by the 14 numeric columns.
    let numeric = |row: &str| {
        let fields: Vec<&str> = row.split(',').collect();
        fields[fields.len() - 16..fields.len() - 2]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(numeric(&a[0]), numeric(&b[0]));
}

#[test]
fn gen_guards_parameter_domain() {
    let dir = tempfile::tempdir().unwrap();
    let refused = run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "2"]);
    assert_code(&refused, 2);
    assert!(!dir.path().join("k6_3_2.el").exists());

    let forced = run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "2", "--force"]);
    assert_code(&forced, 0);
    assert!(dir.path().join("k6_3_2.el").exists());
    assert!(
        stderr(&forced).contains("closed"),
        "forced run should warn that closed forms are unavailable"
    );
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.el"), "3 1\n1 nonsense\n").unwrap();
    let out = run(dir.path(), &["analyze", "--in", "bad.el"]);
    assert_code(&out, 2);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn oversized_enumeration_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "8", "--b", "1"]), 0);
    let out = run(
        dir.path(),
        &["analyze", "--in", "k8_4_1.el", "--maxcut-brute"],
    );
    assert_code(&out, 3);
}

#[test]
fn unmet_certification_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]), 0);
    let perturbed = run(
        dir.path(),
        &["gen", "perturb", "--in", "k6_3_1.el", "--sigma", "0.1"],
    );
    assert_code(&perturbed, 0);

    // A perturbed-weight instance has no closed-form bound, so an explicit
    // certification request cannot be met.
    let out = run(
        dir.path(),
        &[
            "--grid",
            "100x100",
            "analyze",
            "--in",
            "k6_3_1_s0.1.el",
            "--maxcut-tabu",
            "--certify",
        ],
    );
    assert_code(&out, 4);
    // The analysis output is still produced in full.
    assert_eq!(data_rows(&stdout(&out)).len(), 1);
}

#[test]
fn jsonl_format_emits_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["--grid", "100x100", "--format", "jsonl", "reproduce", "table2"],
    );
    assert_code(&out, 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "four rows plus one trailer");
    for line in &lines {
        assert!(line.starts_with('{') && line.ends_with('}'), "not JSON: {line}");
    }
    assert!(lines.last().unwrap().contains("\"tool\":\"cutbench\""));
}

#[test]
fn stats_reports_degree_histogram() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]), 0);
    let out = run(dir.path(), &["stats", "--in", "k6_3_1.el"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "key,value");
    for expected in ["n,20", "edges,90", "degree_9,20"] {
        assert!(
            text.lines().any(|l| l == expected),
            "missing row {expected} in:\n{text}"
        );
    }
}

#[test]
fn spectra_reports_clustered_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]), 0);
    let out = run(dir.path(), &["spectra", "--in", "k6_3_1.el"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "instance,eigenvalue,multiplicity");

    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    let expected = [(-3.0, 5usize), (-1.0, 9), (3.0, 5), (9.0, 1)];
    for (row, (value, mult)) in rows.iter().zip(expected) {
        let fields: Vec<&str> = row.split(',').collect();
        let eig: f64 = fields[1].parse().unwrap();
        let count: usize = fields[2].parse().unwrap();
        assert!((eig - value).abs() < 1e-6, "eigenvalue {eig} vs {value}");
        assert_eq!(count, mult);
    }
}

#[test]
fn stale_sidecar_is_reported_not_trusted() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(&run(dir.path(), &["gen", "karloff", "--m", "6", "--b", "1"]), 0);

    // Drop the last edge but keep the sidecar: the file now disagrees with
    // its recorded edge count.
    let path = dir.path().join("k6_3_1.el");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let body = lines[1..].join("\n");
    std::fs::write(&path, format!("20 89\n{body}\n")).unwrap();

    let out = run(
        dir.path(),
        &["--grid", "100x100", "analyze", "--in", "k6_3_1.el"],
    );
    assert_code(&out, 0);
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert!(
        rows[0].contains("sidecar says"),
        "warnings column should flag the mismatch: {}",
        rows[0]
    );
    // The stale Karloff parameters must not unlock closed forms: 89 edges
    // cannot be a J(6,3,1), so the cut column comes from search, not the
    // formula value 60 with "exact" status.
    assert!(
        !rows[0].contains(",exact,"),
        "mismatched file must not claim formula-exact results: {}",
        rows[0]
    );
}

#[test]
fn output_file_matches_stdout_content() {
    let dir = tempfile::tempdir().unwrap();
    let to_stdout = run(dir.path(), &["--grid", "100x100", "reproduce", "table3"]);
    assert_code(&to_stdout, 0);

    let out_path = dir.path().join("t3.csv");
    let to_file = run(
        dir.path(),
        &[
            "--grid",
            "100x100",
            "--out",
            out_path.to_str().unwrap(),
            "reproduce",
            "table3",
        ],
    );
    assert_code(&to_file, 0);
    let file_text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(stdout(&to_stdout), file_text);
}
