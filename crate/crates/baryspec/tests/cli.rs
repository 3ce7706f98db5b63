//! Black-box tests of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_baryspec"))
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn indices_complete_sweep_matches_closed_form() {
    let out = bin()
        .args(["indices", "--family", "complete", "--n", "2..5", "--csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# baryspec-csv"));
    for (line, n) in text.lines().skip(2).zip(2..=5usize) {
        let tau: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        let expect = (1.0 + 1.0 / n as f64).powi(n as i32 - 1);
        assert!((tau - expect).abs() < 1e-9, "n={n}: {tau} vs {expect}");
    }
}

#[test]
fn indices_edge_list_k2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k2.txt");
    std::fs::write(&path, "# vertices: 2\n0 1\n").unwrap();
    let out = bin()
        .args(["indices", "--edges", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let tau: f64 = stdout(&out)
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .nth(6)
        .unwrap()
        .parse()
        .unwrap();
    assert!((tau - 1.5).abs() < 1e-12);
}

#[test]
fn indices_output_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["indices", "--family", "cycle", "--n", "3..12"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn indices_refinement_json_reports_generations() {
    let out = bin()
        .args(["indices", "--base", "complete3", "--steps", "2", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["f_vector"], serde_json::json!([7, 12, 6]));
    // generation census of step 2: 18 fresh, 4 once-refined, 3 original
    assert_eq!(rows[2]["generations"], serde_json::json!([18, 4, 3]));
}

#[test]
fn dos_emits_figure_and_gap_containing_4_6() {
    // the (4,6) gap opens at refinement step 3
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "dos",
            "--base",
            "complete3",
            "--steps",
            "3",
            "--min-gap",
            "0.5",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    for suffix in ["spectrum", "ids", "potential", "gaps", "tail"] {
        assert!(dir.path().join(format!("complete3_{suffix}.csv")).exists());
    }
    let svg = std::fs::read_to_string(dir.path().join("complete3_figure.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    let gaps = std::fs::read_to_string(dir.path().join("complete3_gaps.csv")).unwrap();
    let has_4_6 = gaps.lines().skip(2).any(|l| {
        let mut it = l.split(',');
        let a: f64 = it.next().unwrap().parse().unwrap();
        let b: f64 = it.next().unwrap().parse().unwrap();
        a <= 4.0 + 1e-6 && b >= 6.0 - 1e-6
    });
    assert!(has_4_6, "no gap covering (4,6):\n{gaps}");
}

#[test]
fn dos_slices_mode_above_dense_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "dos",
            "--base",
            "complete3",
            "--steps",
            "2",
            "--dense-limit",
            "10",
            "--slices",
            "8",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ids = std::fs::read_to_string(dir.path().join("complete3_ids.csv")).unwrap();
    assert!(ids.contains("inertia"));
    assert_eq!(ids.lines().count(), 2 + 9); // header comment + columns + 9 samples
}

#[test]
fn oracle_passes_and_prints_census() {
    let out = bin()
        .args(["oracle", "--n-max", "4", "--extremal-n-max", "4", "--random", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS census K2"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn invalid_source_exits_with_code_2() {
    let out = bin()
        .args(["indices", "--family", "dodecahedron", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["indices"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_code_3() {
    // dense limit exceeded without --slices is a solver-side failure
    let out = bin()
        .args([
            "dos",
            "--base",
            "complete3",
            "--steps",
            "3",
            "--dense-limit",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
