use std::f64::consts::LN_2;
use std::path::Path;
use std::process::{Command, Output};

use qpa_core::quantities::joint;
use qpa_core::state::preset;
use serde_json::Value;

fn qpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpa"))
        .args(args)
        .env_remove("QPA_THREADS")
        .output()
        .expect("run qpa")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn write_state(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn selftest_passes() {
    let out = qpa(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 failed"));
}

#[test]
fn probabilities_not_summing_to_one_are_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(
        &dir,
        "bad.json",
        r#"{"probs": [0.6, 0.5], "eve_states": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}"#,
    );
    let out = qpa(&["quantities", "--state", &path]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn malformed_json_is_a_parse_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(&dir, "broken.json", "{\n  \"probs\": [0.5, 0.5],\n  \"eve_states\": [\n    [[1, 0],\n");
    let out = qpa(&["quantities", "--state", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn unknown_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(&dir, "extra.json", r#"{"preset": "copy", "colour": "blue"}"#);
    assert_eq!(qpa(&["quantities", "--state", &path]).status.code(), Some(2));
}

#[test]
fn family_alphabet_mismatch() {
    let out = qpa(&["verify", "--preset", "copy", "--family", "toeplitz:q=2,k=2,m=1"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = qpa(&["sweep", "--preset", "product", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5), "{}", stderr(&out));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sweep.csv");
    let written = qpa(&["sweep", "--preset", "copy", "--steps", "5", "-o", target.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    let printed = qpa(&["sweep", "--preset", "copy", "--steps", "5"]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), stdout(&printed));
}

#[test]
fn state_file_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_state(
        &dir,
        "copy.json",
        r#"{"probs": [0.5, 0.5], "eve_states": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[0, 0], [0, 1]]]}"#,
    );
    let from_file = qpa(&["quantities", "--state", &path, "--format", "json"]);
    let from_preset = qpa(&["quantities", "--preset", "copy", "--format", "json"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let a: Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&from_preset)).unwrap();
    assert_eq!(a["quantities"], b["quantities"]);
}

#[test]
fn verify_single_family_passes() {
    let out = qpa(&["verify", "--preset", "tilted-qubit", "--power", "2", "--family", "modified_toeplitz:q=2,k=2,m=1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().any(|l| l.starts_with("PASS")));
    assert!(!stdout(&out).contains("FAIL"));
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn product_sweep_closed_forms() {
    let out = qpa(&["sweep", "--preset", "product", "--steps", "11"]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&stdout(&out)) {
        let r = row[0];
        let gap = (LN_2 - r).max(0.0);
        assert!((row[1] - gap).abs() < 1e-10, "{row:?}");
        assert!((row[5] - gap / 2.0).abs() < 1e-10, "{row:?}");
        if r < LN_2 - 1e-9 {
            assert_eq!(row[2], 1.0, "{row:?}");
            assert_eq!(row[6], 0.5, "{row:?}");
        }
    }
}

#[test]
fn sweep_matches_golden() {
    let out = qpa(&["sweep", "--preset", "tilted-qubit", "--steps", "21"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("sweep_tilted_qubit.csv"));
}

fn dense(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

#[test]
fn golden_sweep_agrees_with_dense_grid() {
    let st = preset("tilted-qubit").unwrap();
    let s = dense(0.0, 1.0, 10_000);
    let scaled: Vec<f64> = s
        .iter()
        .map(|&s| if s == 0.0 { 0.0 } else { s * joint::renyi_cond(&st, s).unwrap() })
        .collect();
    let t = dense(0.0, 0.5, 10_000);
    let phi: Vec<f64> = t.iter().map(|&t| joint::phi(&st, t).unwrap()).collect();
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
    let rows = csv_rows(&golden("sweep_tilted_qubit.csv"));
    assert_eq!(rows.len(), 21);
    for row in rows {
        let r = row[0];
        let e_h = max(&mut s.iter().zip(&scaled).map(|(&s, &sh)| sh - s * r));
        let e_h_q = max(&mut s.iter().zip(&scaled).map(|(&s, &sh)| (sh - s * r) / (2.0 - s)));
        let e_phi_q = max(&mut t.iter().zip(&phi).map(|(&t, &p)| (-p - t * r) / (2.0 * (1.0 - t))));
        for (what, got, want) in [("e_H", row[1], e_h), ("e_H_q", row[3], e_h_q), ("e_phi_q", row[5], e_phi_q)] {
            // the refined optimum can only exceed the grid maximum, by the grid's resolution
            assert!(got - want >= -1e-10 && got - want <= 1e-7, "R={r} {what}: {got} vs {want}");
        }
        assert!((row[7] - row[1] / 2.0).abs() <= 1e-11 * row[1].abs().max(1e-3), "{row:?}");
    }
}

#[test]
fn quantities_match_golden() {
    let out = qpa(&["quantities", "--preset", "tilted-qubit", "--s", "0.25", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("quantities_tilted_qubit.json"));
}

#[test]
fn golden_quantities_agree_with_joint_oracle() {
    let st = preset("tilted-qubit").unwrap();
    let doc: Value = serde_json::from_str(&golden("quantities_tilted_qubit.json")).unwrap();
    assert_eq!(doc["units"], "nats");
    let get = |key: &str| {
        doc["quantities"]
            .as_array()
            .unwrap()
            .iter()
            .find(|q| q["key"] == key)
            .and_then(|q| q["value"].as_f64())
            .unwrap_or_else(|| panic!("{key} missing"))
    };
    let mi = joint::mutual_info_variants(&st).unwrap();
    let td = joint::trace_distances(&st).unwrap();
    for (key, want) in [
        ("H_cond", joint::cond_entropy(&st).unwrap()),
        ("H_cond_bar", joint::cond_entropy_bar(&st).unwrap()),
        ("H_min", joint::min_entropy(&st).unwrap()),
        ("I", mi.i),
        ("I_prime", mi.i_prime),
        ("I_bar", mi.i_bar),
        ("I_bar_prime", mi.i_bar_prime),
        ("d1", td.d1),
        ("d1_prime", td.d1_prime),
        ("H_renyi(0.25)", joint::renyi_cond(&st, 0.25).unwrap()),
        ("H_renyi_bar_star(0.25)", joint::renyi_cond_bar_star(&st, 0.25).unwrap()),
        ("phi(0.25)", joint::phi(&st, 0.25).unwrap()),
    ] {
        let got = get(key);
        assert!((got - want).abs() <= 1e-10, "{key}: {got} vs {want}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qpa"))
            .args(["verify", "--preset", "depolarized", "--power", "2", "--format", "json"])
            .env("QPA_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bits_only_change_text_output() {
    let nats = qpa(&["rates", "--preset", "product", "--r", "1", "--format", "json"]);
    let bits = qpa(&["rates", "--preset", "product", "--r", "1", "--format", "json", "--log-base", "bits"]);
    assert_eq!(nats.stdout, bits.stdout);
    let text = stdout(&qpa(&["quantities", "--preset", "product", "--log-base", "bits"]));
    let h = text.lines().find(|l| l.starts_with("H(A|E) ")).unwrap();
    assert!(h.trim_end().ends_with("1.00000000000"), "{h}");
}
