//! End-to-end checks of the binary: output schemas, formats, exit codes.

use std::process::{Command, Output};

fn numzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = numzeta(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn count_binary_table() {
    let text = stdout(&["count", "--beta", "2", "--digits", "0,1", "--upto", "100"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,r"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().enumerate().all(|(n, row)| *row == format!("{n},1")));
}

#[test]
fn count_sum_to_query() {
    let text = stdout(&["count", "--beta", "2", "--digits", "0,1", "--sum-to", "7.5"]);
    assert!(text.lines().nth(1).unwrap().contains(",8,"));
}

#[test]
fn zeta_classical_value() {
    let text = stdout(&["zeta", "--beta", "2", "--digits", "0,1", "--s", "-1"]);
    let row = text.lines().nth(1).unwrap();
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value + 1.0 / 12.0).abs() < 1e-6, "zeta(-1) = {value}");
    assert!(row.contains("continued_geometric"));
}

#[test]
fn density_profile_schema() {
    let text = stdout(&[
        "density",
        "--beta",
        "3",
        "--digits",
        "0,1,5",
        "--profile-points",
        "16",
        "--depth",
        "8",
    ]);
    assert_eq!(text.lines().next(), Some("x,psi,depth,error_bound"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn pole_grid_schema() {
    let text = stdout(&[
        "zeta", "--beta", "2", "--digits", "0,1", "--poles", "--jmax", "1", "--kmax", "1",
    ]);
    assert_eq!(
        text.lines().next(),
        Some("j,k,loc_re,loc_im,res_re,res_im,possibly_removable")
    );
    assert_eq!(text.lines().count(), 1 + 2 * 3);
}

#[test]
fn json_emit_parse_reemit_is_byte_identical() {
    let text = stdout(&[
        "density",
        "--beta",
        "2",
        "--digits",
        "0,1",
        "--profile-points",
        "8",
        "--depth",
        "10",
        "--format",
        "json",
    ]);
    // re-print every float with the emitter's 17-significant-digit rule and
    // compare: parse -> format must reproduce the bytes exactly
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut reemitted = String::from("{\n");
    reemitted.push_str(&format!(
        "  \"name\": {},\n",
        serde_json::to_string(value["name"].as_str().unwrap()).unwrap()
    ));
    let cols: Vec<String> = value["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| serde_json::to_string(c.as_str().unwrap()).unwrap())
        .collect();
    reemitted.push_str(&format!("  \"columns\": [{}],\n", cols.join(", ")));
    reemitted.push_str("  \"rows\": [\n");
    let rows = value["rows"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .as_array()
            .unwrap()
            .iter()
            .map(|cell| match cell {
                serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                serde_json::Value::Number(n) => format!("{:.16e}", n.as_f64().unwrap()),
                serde_json::Value::String(s) => serde_json::to_string(s).unwrap(),
                other => panic!("unexpected cell {other}"),
            })
            .collect();
        let comma = if i + 1 < rows.len() { "," } else { "" };
        reemitted.push_str(&format!("    [{}]{}\n", cells.join(", "), comma));
    }
    reemitted.push_str("  ]\n}\n");
    assert_eq!(text, reemitted);
}

#[test]
fn figure1_grid_is_documented_and_positive() {
    for (panel, x0) in [("a", 8.0f64), ("b", 6.0)] {
        let text = stdout(&["figure1", "--panel", panel, "--points", "40"]);
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 41);
        for (k, row) in rows.iter().enumerate() {
            let mut parts = row.split(',');
            let x: f64 = parts.next().unwrap().parse().unwrap();
            let v: f64 = parts.next().unwrap().parse().unwrap();
            assert!((x - (x0 + k as f64 / 500.0)).abs() < 1e-12);
            assert!(v > 0.0);
        }
    }
}

#[test]
fn exit_codes_separate_config_from_computation() {
    // config problem: digit set without 0
    let out = numzeta(&["count", "--beta", "2", "--digits", "1,2", "--upto", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // config problem: unknown base
    let out = numzeta(&["count", "--base", "nonsense", "--upto", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // computation failure: pole proximity
    let out = numzeta(&["zeta", "--beta", "2", "--digits", "0,1", "--s", "1.0000000001"]);
    assert_eq!(out.status.code(), Some(1));
    // success
    let out = numzeta(&["count", "--beta", "2", "--digits", "0,1", "--upto", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("numzeta_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("counts.csv");
    stdout(&[
        "count", "--beta", "2", "--digits", "0,1", "--upto", "4", "--out",
        path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,r\n"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn table_base_from_file() {
    let dir = std::env::temp_dir().join("numzeta_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("base.txt");
    let mut text = String::from("beta=1.8\ngamma=1\nalpha=1.8\n");
    let mut v = 1.8f64;
    for _ in 0..40 {
        text.push_str(&format!("{}\n", v.floor()));
        v *= 1.8;
    }
    std::fs::write(&path, text).unwrap();
    let spec = format!("table:{}", path.display());
    let out = stdout(&["count", "--base", &spec, "--digits", "0,1", "--upto", "20"]);
    assert!(out.starts_with("n,r\n"));
    std::fs::remove_file(path).unwrap();
}

