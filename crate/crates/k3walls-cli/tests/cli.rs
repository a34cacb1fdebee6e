//! Black-box tests of the `k3walls` binary: exit codes, JSON schema and
//! byte determinism.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3walls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON object")
}

fn write_tmp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_flopping_with_involution() {
    let out = run(&["classify", "--d2", "4", "--v", "3,0,-5"]);
    let v = stdout_json(&out);
    assert_eq!(v["wall_type"], "Flopping");
    assert_eq!(v["involution"], true);
    assert_eq!(v["monodromy"], "monodromy_minus");
    assert_eq!(v["disc_action"], "minus_id");
    assert_eq!(v["e"]["r"], 3);
    assert_eq!(v["e"]["s"], 5);
    assert_eq!(v["star"]["holds"], "yes");
    let w = &v["witnesses"][0];
    assert_eq!(w["kind"], "spherical_small_pairing");
    assert_eq!(w["class"]["r"], 1);
    assert_eq!(w["class"]["s"], 1);
}

#[test]
fn classify_divisorial_series() {
    let out = run(&["classify", "--d2", "4", "--v", "4,2,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["wall_type"], "Divisorial");
    assert_eq!(v["involution"], false);
    assert_eq!(v["reason"], "divisorial (series 1)");
    let w = &v["witnesses"][0];
    assert_eq!(w["kind"], "isotropic_pairing");
    assert_eq!(w["pairing"], 2);
}

#[test]
fn classify_rejects_rank_zero_and_normalizes_negative_rank() {
    let out = run(&["classify", "--d2", "4", "--v", "0,1,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spherical twist"));

    // r < 0 is normalized by the shift; (−3,0,5) carries the same wall as (3,0,−5)
    let out = run(&["classify", "--d2", "4", "--v", "-3,0,5"]);
    let v = stdout_json(&out);
    assert_eq!(v["shift_applied"], true);
    assert_eq!(v["v"]["r"], 3);
    assert_eq!(v["wall_type"], "Flopping");
    assert_eq!(v["involution"], true);
}

#[test]
fn classify_output_is_byte_deterministic() {
    let a = run(&["classify", "--d2", "6", "--v", "5,5,4"]);
    let b = run(&["classify", "--d2", "6", "--v", "5,5,4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn isometry_hilbert_scheme_example() {
    let out = run(&[
        "isometry",
        "--d2",
        "4",
        "--word",
        "exp(-1H);shift;twist;exp(-4H)",
        "--v",
        "1,0,-28",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["r"], 4);
    assert_eq!(v["result"]["theta"][0], 0);
    assert_eq!(v["result"]["s"], -7);
    assert_eq!(v["pairing_check"], "ok");
    // trail carries the intermediate (1, -4H, 4)
    assert_eq!(v["trail"][1]["theta"][0], -4);
    assert_eq!(v["trail"][1]["s"], 4);
}

#[test]
fn isometry_word_parse_error_is_exit_2() {
    let out = run(&[
        "isometry",
        "--d2",
        "4",
        "--word",
        "expand(2H)",
        "--v",
        "1,0,-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_streams_records_and_summary() {
    let out = run(&[
        "sweep", "--d2", "4", "--r", "1:3", "--c", "0:1", "--s", "-6:-2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 2);
    let summary: Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["disagreements"], 0);
    let records = summary["summary"]["records"].as_u64().unwrap();
    assert_eq!(lines.len() as u64, records + 1);
    for line in &lines[..lines.len() - 1] {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert!(rec["wall_type"].is_string());
        assert!(rec["v"]["r"].as_i64().unwrap() >= 1);
    }
    // degenerate range: no qualifying vectors, still exit 0
    let out = run(&[
        "sweep", "--d2", "4", "--r", "1:2", "--c", "0:0", "--s", "1:1",
    ]);
    assert!(out.status.success());

    // empty range: user error
    let out = run(&[
        "sweep", "--d2", "4", "--r", "5:3", "--c", "0:0", "--s", "0:0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_snf_disc_complement() {
    let out = run(&["lattice", "snf", "--matrix", "-30,0;0,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 30]));

    let m8 = write_tmp("k3walls_m8.json", r#"{"gram": [[-8]]}"#);
    let out = run(&["lattice", "disc", "--lattice", &m8]);
    let v = stdout_json(&out);
    assert_eq!(v["orders"], serde_json::json!([8]));
    assert_eq!(v["q_values"][0], "-1/8");

    let l = write_tmp(
        "k3walls_u_m2.json",
        r#"{"gram": [[0,1,0],[1,0,0],[0,0,-2]]}"#,
    );
    let out = run(&["lattice", "complement", "--lattice", &l, "--sub", "1,1,0"]);
    let v = stdout_json(&out);
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 2);

    let iso = write_tmp("k3walls_swap.json", r#"{"matrix": [[0,1],[1,0]]}"#);
    let u = write_tmp("k3walls_u.json", r#"{"gram": [[0,1],[1,0]]}"#);
    let out = run(&[
        "lattice",
        "coinv",
        "--lattice",
        &u,
        "--isometry",
        &iso,
        "--order",
        "2",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["quotient_exponent"], 2);

    let u2 = write_tmp("k3walls_u2.json", r#"{"gram": [[0,2],[2,0]]}"#);
    let out = run(&[
        "lattice",
        "u-from-isotropic",
        "--lattice",
        &u2,
        "--e",
        "1,0",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["m"], 2);
    assert_eq!(v["gram"], serde_json::json!([[0, 4], [4, 0]]));
}

#[test]
fn fm_reduce_ambient_and_coordinate_modes() {
    let out = run(&["fm-reduce", "--d2", "4", "--v", "4,2,1", "--w", "2,1,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["r_prime"], 2);
    assert_eq!(v["w_image"], serde_json::json!([0, 1]));

    // coordinate mode on the same wall lattice
    let h = write_tmp("k3walls_h.json", r#"{"gram": [[4,-2],[-2,0]]}"#);
    let out = run(&["fm-reduce", "--h", &h, "--v", "2,1", "--w", "1,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["r_prime"], 2);

    // a non-isotropic w is a user error
    let out = run(&["fm-reduce", "--h", &h, "--v", "2,1", "--w", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_json_keys_are_rejected() {
    let bad = write_tmp(
        "k3walls_bad_ns.json",
        r#"{"gram": [[4]], "D": [1], "extra": 1}"#,
    );
    let out = run(&["classify", "--ns", &bad, "--v", "3,0,-5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn rank_two_ns_classify() {
    // NS = U (signature (1,1)), D = (1,0)
    let ns = write_tmp(
        "k3walls_ns_u.json",
        r#"{"gram": [[0,1],[1,0]], "D": [1,0]}"#,
    );
    let out = run(&["classify", "--ns", &ns, "--v", "3,0,0,-5"]);
    let v = stdout_json(&out);
    assert_eq!(v["wall_type"], "Flopping");
    // c = 0 makes (*) exact even in higher rank
    assert_eq!(v["star"]["holds"], "yes");
    assert_eq!(v["involution"], true);
    // without an embedding there is no rank-24 monodromy verdict
    assert_eq!(v["monodromy"], Value::Null);

    // with an explicit embedding the Markman test runs: send the NS copy of
    // U to the second hyperbolic plane
    let mut rows = vec![vec![0i64; 4]; 24];
    rows[0][0] = 1; // (1,0,0) -> e of U1
    rows[1][3] = -1; // (0,0,1) -> -f of U1
    rows[2][1] = 1; // D1 -> e of U2
    rows[3][2] = 1; // D2 -> f of U2
    let emb = serde_json::json!({ "embedding": rows });
    let emb_path = write_tmp("k3walls_emb_u.json", &emb.to_string());
    let out = run(&[
        "classify",
        "--ns",
        &ns,
        "--v",
        "3,0,0,-5",
        "--embedding",
        &emb_path,
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["monodromy"], "monodromy_minus");
    assert_eq!(v["disc_action"], "minus_id");

    // a vector with nonzero c gets the bounded verdict
    let out = run(&["classify", "--ns", &ns, "--v", "3,6,0,-5", "--bound", "6"]);
    let v = stdout_json(&out);
    assert_eq!(v["star"]["holds"], "yes_up_to_bound");
    assert_eq!(v["star"]["bound"], 6);
}
