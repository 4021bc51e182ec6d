use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sympmaj::gen::{self, GeneratorConfig};
use sympmaj::io::matrix_to_json;
use sympmaj::{BlockPartition, Relation, Verdict};
use sympmaj_cli::report::{analyze, AnalysisReport};
use sympmaj_cli::suites::{self, EnsembleSizes, SuiteConfig};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympmaj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), contents).unwrap();
    f
}

#[test]
fn spectrum_of_identity_and_block_scalar() {
    let v = json(&run(&["spectrum", &fixture("identity4.txt")]));
    assert_eq!(v["d_s"], serde_json::json!([1.0, 1.0]));
    let v = json(&run(&["spectrum", &fixture("diag_1_1_4_4.txt")]));
    assert_eq!(v["d_s"], serde_json::json!([2.0, 2.0]));
}

#[test]
fn exit_codes() {
    let bad = temp_file("{\"dim\": 2, \"data\": [[1.0, 0.0]");
    assert_eq!(
        run(&["spectrum", bad.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let odd = temp_file("1 0 0\n0 1 0\n0 0 1\n");
    assert_eq!(
        run(&["spectrum", odd.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        run(&["spectrum", "/nonexistent/matrix.json"]).status.code(),
        Some(2)
    );

    let indefinite = temp_file("1 2\n2 1\n");
    assert_eq!(
        run(&["spectrum", indefinite.path().to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    let asymmetric = temp_file("1 0.5\n0 1\n");
    assert_eq!(
        run(&["report", asymmetric.path().to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    assert_eq!(
        run(&["pinch", &fixture("identity4.txt"), "--partition", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn report_on_identity_is_all_true() {
    let out = run(&["report", &fixture("identity4.txt")]);
    let report: AnalysisReport =
        serde_json::from_slice(&json(&out).to_string().into_bytes()).unwrap();
    assert_eq!(report.n, 2);
    assert_eq!(report.verdicts.len(), 5);
    for v in &report.verdicts {
        assert!(v.weak_holds && v.majorization_holds && v.consistent);
        assert_eq!(v.criterion, Verdict::True);
    }
    for (name, r) in &report.residuals {
        assert!(*r >= 0.0 && *r <= 1e-12, "{name} = {r}");
    }
}

#[test]
fn report_on_diag_1_4_matches_hand_computation() {
    let out = run(&["report", &fixture("diag_1_4.json")]);
    let v = json(&out);
    let verdict = |id: &str| {
        v["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|x| x["relation_id"] == id)
            .unwrap()
            .clone()
    };
    assert_eq!(verdict("s")["criterion"], "true");
    assert_eq!(verdict("s")["majorization_holds"], true);
    for id in ["c", "w", "h"] {
        assert_eq!(verdict(id)["criterion"], "false");
        assert_eq!(verdict(id)["majorization_holds"], false);
        assert_eq!(verdict(id)["consistent"], true);
    }
    assert_eq!(verdict("pinching")["criterion"], "true");
    assert_eq!(v["d_s"][0].as_f64().unwrap(), 2.0);
    assert_eq!(v["deltas"]["delta_c"][0].as_f64().unwrap(), 2.5);
}

#[test]
fn partition_flag_adds_the_pinching_verdict() {
    let a = gen::random_spd(&GeneratorConfig::new(2, 3)).unwrap();
    let f = temp_file(&matrix_to_json(a.as_matrix()));
    let v = json(&run(&[
        "report",
        f.path().to_str().unwrap(),
        "--partition",
        "1,1",
    ]));
    assert_eq!(v["partition"], serde_json::json!([1, 1]));
    let pinching = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["relation_id"] == "pinching")
        .expect("pinching verdict present");
    assert_eq!(pinching["weak_holds"], true);

    let direct = json(&run(&[
        "pinch",
        f.path().to_str().unwrap(),
        "--partition",
        "1,1",
    ]));
    assert_eq!(direct["criterion"], pinching["criterion"]);
    assert_eq!(direct["majorized"], pinching["majorization_holds"]);
}

#[test]
fn report_round_trips_exactly() {
    let a = gen::random_spd(&GeneratorConfig::new(3, 11)).unwrap();
    let bytes = matrix_to_json(a.as_matrix()).into_bytes();
    let report = analyze(
        &bytes,
        &a,
        &BlockPartition::new(vec![2, 1], 3).unwrap(),
        1e-8,
    )
    .unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert!(report.verdict(Relation::Pinching).is_some());
    assert!(report
        .d_s
        .iter()
        .chain(&report.deltas.delta_h)
        .all(|x| x.is_finite()));
}

#[test]
fn outputs_are_deterministic() {
    let f = fixture("diag_1_4.json");
    assert_eq!(run(&["report", &f]).stdout, run(&["report", &f]).stdout);
    let g1 = run(&["gen", "--kind", "symplectic", "--n", "3", "--seed", "9"]);
    let g2 = run(&["gen", "--kind", "symplectic", "--n", "3", "--seed", "9"]);
    assert_eq!(g1.stdout, g2.stdout);
    let g3 = run(&["gen", "--kind", "symplectic", "--n", "3", "--seed", "10"]);
    assert_ne!(g1.stdout, g3.stdout);

    let v1 = run(&["verify", "--ensemble", "5", "--seed", "123"]);
    let v2 = run(&["verify", "--ensemble", "5", "--seed", "123"]);
    assert!(v1.status.success());
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn gen_output_is_readable_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["spd", "symplectic", "orthosymplectic"] {
        let path = dir.path().join(format!("{kind}.json"));
        let out = run(&[
            "gen",
            "--kind",
            kind,
            "--n",
            "2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let m = sympmaj::io::parse_matrix(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(m.nrows(), 4);
    }
    let path = dir.path().join("prescribed.txt");
    let out = run(&[
        "gen",
        "--kind",
        "prescribed",
        "--spectrum",
        "2,3",
        "--mode",
        "orthosymplectic",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&run(&["spectrum", path.to_str().unwrap()]));
    let d: Vec<f64> = serde_json::from_value(v["d_s"].clone()).unwrap();
    assert!((d[0] - 2.0).abs() < 1e-9 && (d[1] - 3.0).abs() < 1e-9);

    assert_eq!(
        run(&["gen", "--kind", "prescribed", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn williamson_and_schur_horn_commands() {
    let w = json(&run(&["williamson", &fixture("diag_1_4.json")]));
    assert_eq!(w["d"], serde_json::json!([2.0]));
    assert!(w["residuals"]["diagonalization"].as_f64().unwrap() < 1e-12);

    let s = json(&run(&[
        "schur-horn",
        &fixture("diag_1_4.json"),
        "--relation",
        "w",
    ]));
    let verdicts = s["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["relation_id"], "w");
    assert_eq!(verdicts[0]["criterion"], "false");
    assert_eq!(s["trace_gap"].as_f64().unwrap(), 1.0);

    let all = json(&run(&["schur-horn", &fixture("identity4.txt")]));
    assert_eq!(all["verdicts"].as_array().unwrap().len(), 4);
}

#[test]
fn majorize_inline_and_from_files() {
    let v = json(&run(&[
        "majorize",
        "--x",
        "2,2,2",
        "--y",
        "[1,2,3]",
        "--witness",
    ]));
    assert_eq!(v["report"]["majorized"], true);
    assert!(v["witness"]["map_residual"].as_f64().unwrap() <= 1e-10);

    let x = temp_file("0.5 2.0");
    let y = temp_file("1.0, 1.0");
    let v = json(&run(&[
        "majorize",
        "--x",
        x.path().to_str().unwrap(),
        "--y",
        y.path().to_str().unwrap(),
        "--witness",
    ]));
    assert_eq!(v["report"]["weakly_supermajorized"], false);
    assert!(v["witness"].is_null());
    assert!(v["witness_error"].is_string());
}

#[test]
fn empty_ensemble_passes_with_a_warning() {
    let out = run(&["verify", "--ensemble", "0"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn suites_are_reproducible_in_process() {
    let cfg = SuiteConfig {
        seed: 77,
        tol: 1e-8,
        sizes: EnsembleSizes::uniform(20),
    };
    let a = suites::run_all(&cfg);
    let b = suites::run_all(&cfg);
    assert_eq!(a, b);
    assert!(a.iter().all(|o| o.passed));
}
