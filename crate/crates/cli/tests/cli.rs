use std::io::Write;
use std::process::{Command as Proc, Stdio};

use lindblad_split::casework::BlochParams;
use lindblad_split::linalg::{self, frobenius, is_hermitian, ComplexMatrix};
use lindblad_split::sampling::Sampler;
use lindblad_split::{GeneratorSpec, Superoperator};
use lindblad_split_cli::json::{kraus_to_json, mat_to_json, matrix, matrix_list};
use lindblad_split_cli::{
    execute, parse_request, run_document, CliError, Command, Options, Status,
};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_lindblad-split");

fn identity_json(n: usize) -> Value {
    mat_to_json(&linalg::identity(n))
}

fn sigma_z_half() -> Value {
    json!([[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]])
}

fn run(req: Value) -> (Value, i32) {
    let (out, _, code) = run_document(req.to_string().as_bytes(), false, &Options::default());
    (out, code)
}

fn payload_matrix(out: &Value, key: &str) -> ComplexMatrix {
    matrix(&out["payload"][key], key).unwrap()
}

fn binary(args: &[&str], stdin: &str) -> (String, String, i32) {
    let mut child = Proc::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn parses_documented_request() {
    let req = json!({
        "command": "decompose",
        "input": {"type": "gksl", "H": sigma_z_half(), "lindblads": []},
        "B": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
    });
    let r = parse_request(req.to_string().as_bytes()).unwrap();
    assert_eq!(r.command, Command::Decompose);
    assert_eq!(r.b, Some(linalg::identity(2)));
    match r.input {
        Some(GeneratorSpec::Gksl { hamiltonian, lindblads }) => {
            assert_eq!(hamiltonian, linalg::pauli_z().scale(0.5));
            assert!(lindblads.is_empty());
        }
        other => panic!("unexpected input {other:?}"),
    }
}

#[test]
fn missing_weight_names_field() {
    let req = json!({"command": "decompose", "input": {"type": "gksl", "H": sigma_z_half()}});
    match parse_request(req.to_string().as_bytes()) {
        Err(CliError::Parse { path, .. }) => assert_eq!(path, "$.B"),
        other => panic!("expected parse error, got {other:?}"),
    }
    let (out, code) = run(req);
    assert_eq!(out["status"], "invalid-input");
    assert_eq!(code, 4);
}

#[test]
fn ragged_rows_are_dimension_errors() {
    let req = json!({
        "command": "choi",
        "input": {"type": "gksl", "H": [[[1, 0], [0, 0]], [[0, 0]]]},
    });
    assert!(matches!(
        parse_request(req.to_string().as_bytes()),
        Err(CliError::Dimension(_))
    ));
}

#[test]
fn malformed_entries_report_their_path() {
    let req = json!({
        "command": "choi",
        "input": {"type": "kwedge", "K0": [[[1, 0], [0, 0]], [[0, 0], ["x", 0]]]},
    });
    match parse_request(req.to_string().as_bytes()) {
        Err(CliError::Parse { path, .. }) => assert_eq!(path, "$.input.K0[1][1][0]"),
        other => panic!("expected parse error, got {other:?}"),
    }
    let bad_type = json!({"command": "choi", "input": {"type": "lindblad"}});
    assert!(matches!(
        parse_request(bad_type.to_string().as_bytes()),
        Err(CliError::Parse { path, .. }) if path == "$.input.type"
    ));
}

#[test]
fn bloch_decomposition_at_identity_weight() {
    let p = BlochParams::new(1.3, 1.0, 2.0, 0.5).unwrap();
    let (h, ks) = p.operators();
    let req = json!({
        "command": "decompose",
        "input": {"type": "gksl", "H": mat_to_json(&h), "lindblads": kraus_to_json(&ks)},
        "B": identity_json(2),
    });
    let (out, code) = run(req);
    assert_eq!(code, 0, "{out}");
    let got = payload_matrix(&out, "H");
    assert!(frobenius(&(got - linalg::pauli_z().scale(1.3 / 2.0))) < 1e-10);
    let kraus = matrix_list(&out["payload"]["kraus"], "kraus").unwrap();
    assert_eq!(kraus.len(), 3);
    for v in &kraus {
        assert!(linalg::trace(v).norm() < 1e-9);
    }
    assert_eq!(out["tol"], json!(1e-9));
}

#[test]
fn transpose_is_not_in_wedge() {
    let t = Superoperator::transpose_map(2);
    let req = json!({"command": "check", "input": {"type": "superop", "L": mat_to_json(t.matrix())}});
    let (out, code) = run(req);
    assert_eq!(out["status"], "not-in-wedge");
    assert_eq!(code, 2);
    let min = out["payload"]["conditional_min_eig"].as_f64().unwrap();
    assert!((min + 1.0).abs() < 1e-12);

    // Decomposing it fails the same way.
    let req = json!({
        "command": "decompose",
        "input": {"type": "superop", "L": mat_to_json(t.matrix())},
        "B": identity_json(2),
    });
    let (out, code) = run(req);
    assert_eq!((out["status"].as_str(), code), (Some("not-in-wedge"), 2));
    assert!(out["diagnostics"]["min_eig"].as_f64().unwrap() < 0.0);
}

#[test]
fn orthogonality_demo_value() {
    let (out, code) = run(json!({"command": "demo", "demo_name": "orthogonality"}));
    assert_eq!(code, 0);
    let v = &out["payload"]["value"];
    assert!((v[0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v[1].as_f64().unwrap().abs() < 1e-10);

    let b = linalg::diag(&[3.0, 1.0, 1.0].map(|x| linalg::c(x, 0.0)));
    let (out, _) = run(json!({
        "command": "demo", "demo_name": "orthogonality", "B": mat_to_json(&b), "j": 0, "k": 2
    }));
    assert!((out["payload"]["value"][0].as_f64().unwrap() - 4.0).abs() < 1e-10);

    let (out, code) = run(json!({
        "command": "demo", "demo_name": "orthogonality", "B": identity_json(2)
    }));
    assert_eq!((out["status"].as_str(), code), (Some("hypothesis-violated"), 3));
}

#[test]
fn demos_have_defaults() {
    let (out, code) = run(json!({"command": "demo", "demo_name": "bloch"}));
    assert_eq!(code, 0, "{out}");
    for key in ["printed_vs_built", "hamiltonian_part_residual", "dissipative_part_residual"] {
        assert!(out["diagnostics"][key].as_f64().unwrap() < 1e-10, "{key}");
    }

    let (out, _) = run(json!({"command": "demo", "demo_name": "transpose"}));
    assert_eq!(out["payload"]["decomposable"], true);
    assert_eq!(out["payload"]["criterion"], json!(0.0));

    let (out, _) = run(json!({"command": "demo", "demo_name": "transpose", "B": identity_json(2)}));
    assert_eq!(out["payload"]["decomposable"], false);
    assert_eq!(out["payload"]["criterion"], json!(2.0));

    let (out, _) = run(json!({"command": "demo", "demo_name": "depolarize"}));
    assert_eq!(out["payload"]["excluded"], true);
    assert_eq!(out["payload"]["choi_rank"], 4);
}

#[test]
fn traceless_weight_reports_criterion() {
    let b = linalg::matrix_unit(2, 0, 1);
    let (out, code) = run(json!({"command": "demo", "demo_name": "transpose", "B": mat_to_json(&b)}));
    assert_eq!((out["status"].as_str(), code), (Some("hypothesis-violated"), 3));
    assert_eq!(out["payload"]["criterion"], json!(0.0));
}

#[test]
fn canonical_form_is_idempotent() {
    let mut s = Sampler::new(21);
    for n in 2..=4 {
        let k0 = s.matrix(n);
        let ks = s.kraus(n, 3);
        let b = s.weight(n, 0.2);
        let first = json!({
            "command": "decompose",
            "input": {"type": "kwedge", "K0": mat_to_json(&k0), "kraus": kraus_to_json(&ks)},
            "B": mat_to_json(&b),
        });
        let (out1, code) = run(first);
        assert_eq!(code, 0, "{out1}");
        let again = json!({
            "command": "decompose",
            "input": {"type": "kwedge", "K0": out1["payload"]["K"], "kraus": out1["payload"]["kraus"]},
            "B": mat_to_json(&b),
        });
        let (out2, code) = run(again);
        assert_eq!(code, 0, "{out2}");
        for key in ["K", "phi"] {
            let d = frobenius(&(payload_matrix(&out1, key) - payload_matrix(&out2, key)));
            assert!(d < 1e-9, "{key} moved by {d:e}");
        }
    }
}

#[test]
fn cptp_decomposition_returns_hermitian_h() {
    let mut s = Sampler::new(5);
    let h = s.hermitian(3);
    let ks = s.kraus(3, 2);
    let b = s.hermitian_weight(3, 0.2);
    let (out, code) = run(json!({
        "command": "decompose-cptp",
        "input": {"type": "gksl", "H": mat_to_json(&h), "lindblads": kraus_to_json(&ks)},
        "B": mat_to_json(&b),
    }));
    assert_eq!(code, 0, "{out}");
    assert!(is_hermitian(&payload_matrix(&out, "H"), 1e-12));
    assert!(out["diagnostics"]["anticommutator_residual"].as_f64().unwrap() < 1e-9);
    assert!(out["payload"]["hermitian_weight_trace"].is_array());

    // Not trace preserving.
    let (out, code) = run(json!({
        "command": "decompose-cptp",
        "input": {"type": "kwedge", "K0": mat_to_json(&s.matrix(3)), "kraus": kraus_to_json(&ks)},
        "B": mat_to_json(&b),
    }));
    assert_eq!((out["status"].as_str(), code), (Some("hypothesis-violated"), 3));
}

#[test]
fn map_commands() {
    let dep = lindblad_split::casework::depolarizing(2);
    let input = json!({"type": "superop", "L": mat_to_json(dep.matrix())});

    let (out, code) = run(json!({"command": "kraus", "input": input}));
    assert_eq!(code, 0);
    assert_eq!(out["payload"]["rank"], 4);
    assert!(out["diagnostics"]["reconstruction_residual"].as_f64().unwrap() < 1e-12);

    let (out, _) = run(json!({"command": "choi", "input": input}));
    let choi = payload_matrix(&out, "choi");
    assert!(frobenius(&(choi - linalg::identity(4).scale(0.5))) < 1e-15);
    assert_eq!(out["payload"]["cp"], true);

    let (out, _) = run(json!({"command": "weighted-trace", "input": input, "B": identity_json(2)}));
    assert_eq!(out["payload"]["member"], false);
    assert!((out["payload"]["weighted_trace"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // Kraus extraction of a non-CP map violates the CP hypothesis.
    let t = Superoperator::transpose_map(2);
    let (out, code) = run(json!({"command": "kraus", "input": {"type": "superop", "L": mat_to_json(t.matrix())}}));
    assert_eq!((out["status"].as_str(), code), (Some("hypothesis-violated"), 3));
}

#[test]
fn inner_product_uses_other_field() {
    let id = Superoperator::identity(2);
    let req = json!({
        "command": "inner-product",
        "input": {"type": "superop", "L": mat_to_json(id.matrix())},
        "other": {"type": "superop", "L": mat_to_json(id.matrix())},
        "B": identity_json(2),
    });
    let (out, code) = run(req.clone());
    assert_eq!(code, 0);
    // ⟨id, id⟩_1 = tr(id) = n² = 4
    assert_eq!(out["payload"]["value"], json!([4.0, 0.0]));

    let mut missing = req.clone();
    missing.as_object_mut().unwrap().remove("other");
    assert_eq!(run(missing).1, 4);

    let mut indefinite = req;
    indefinite["B"] = mat_to_json(&linalg::pauli_z());
    let (out, code) = run(indefinite);
    assert_eq!((out["status"].as_str(), code), (Some("hypothesis-violated"), 3));
}

#[test]
fn request_tolerance_wins_over_default() {
    let req = json!({"command": "demo", "demo_name": "depolarize", "tol": 1e-6});
    let opts = Options { tol: Some(1e-3), seed: 0 };
    let r = execute(&parse_request(req.to_string().as_bytes()).unwrap(), &opts);
    assert_eq!(r.tol, 1e-6);
    assert_eq!(r.to_json()["diagnostics"]["tol"], json!(1e-6));
    let req = json!({"command": "demo", "demo_name": "depolarize"});
    let r = execute(&parse_request(req.to_string().as_bytes()).unwrap(), &opts);
    assert_eq!(r.tol, 1e-3);
}

#[test]
fn exit_codes_follow_status() {
    for (status, code) in [
        (Status::Ok, 0),
        (Status::NotInWedge, 2),
        (Status::HypothesisViolated, 3),
        (Status::InvalidInput, 4),
    ] {
        assert_eq!(status.exit_code(), code);
    }
}

#[test]
fn binary_writes_one_document() {
    let req = json!({"command": "demo", "demo_name": "orthogonality"}).to_string();
    let (stdout, stderr, code) = binary(&[], &req);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["status"], "ok");
    assert!(stderr.contains("demo: ok"));

    let (stdout, _, code) = binary(&[], "{not json");
    assert_eq!(code, 4);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["status"], "invalid-input");

    let (stdout, _, code) = binary(&["--no-such-flag"], "{}");
    assert_eq!(code, 4);
    assert!(serde_json::from_str::<Value>(&stdout).is_ok());
}

#[test]
fn binary_batch_preserves_order() {
    let t = Superoperator::transpose_map(2);
    let batch = json!([
        {"command": "demo", "demo_name": "orthogonality"},
        {"command": "check", "input": {"type": "superop", "L": mat_to_json(t.matrix())}},
        {"command": "bogus"},
        {"command": "demo", "demo_name": "depolarize", "n": 3},
    ])
    .to_string();
    let (stdout, _, code) = binary(&["--batch"], &batch);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    let statuses: Vec<_> = doc.as_array().unwrap().iter().map(|r| r["status"].clone()).collect();
    assert_eq!(statuses, [json!("ok"), json!("not-in-wedge"), json!("invalid-input"), json!("ok")]);
    assert_eq!(code, 4);
    assert_eq!(doc[3]["payload"]["choi_rank"], 9);
}

#[test]
fn binary_reads_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("lindblad-split-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("req.json");
    std::fs::write(&path, json!({"command": "demo", "demo_name": "transpose"}).to_string()).unwrap();
    let path = path.to_str().unwrap();

    let (stdout, _, code) = binary(&["--input", path, "--tol", "1e-8", "--seed", "42"], "");
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["tol"], json!(1e-8));
    assert_eq!(doc["diagnostics"]["seed"], 42);

    let (_, stderr, code) = binary(&["--input", "/nonexistent/req.json"], "");
    assert_eq!(code, 4);
    assert!(stderr.contains("invalid-input"));
    std::fs::remove_dir_all(&dir).ok();
}
