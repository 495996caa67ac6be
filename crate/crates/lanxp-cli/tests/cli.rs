//! End-to-end checks of the binary: output schemas, exit codes, and the
//! determinism contract. Each test spawns the compiled executable.

use std::process::{Command, Output};

fn lanxp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lanxp"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_str(out: &Output) -> String {
    assert!(
        out.status.success(),
        "run failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stderr.is_empty(), "diagnostics leaked to stderr on success");
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Data rows of a CSV document: comment lines and the header stripped.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().expect("numeric cell")
}

#[test]
fn zeros_below_first_height_is_header_only() {
    let out = lanxp(&["zeros", "--emax", "10"]);
    assert_eq!(stdout_str(&out), "index,E_zero\n");
}

#[test]
fn zeros_to_height_one_hundred_lists_twenty_nine_rows() {
    let out = stdout_str(&lanxp(&["zeros", "--emax", "100"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 29);
    let heights: Vec<f64> = rows.iter().map(|r| field(r, 1)).collect();
    assert!(heights.windows(2).all(|w| w[0] < w[1]));
    assert!(heights[0] > 14.0 && heights[0] < 14.2);
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[28][0], "29");
}

#[test]
fn zeros_formats_carry_identical_values() {
    let csv = stdout_str(&lanxp(&["zeros", "--emax", "60"]));
    let json = stdout_str(&lanxp(&["zeros", "--emax", "60", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).expect("json parses");
    let from_json: Vec<f64> = doc["zeros"]
        .as_array()
        .expect("zeros array")
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let from_csv: Vec<f64> = data_rows(&csv).iter().map(|r| field(r, 1)).collect();
    // 17 significant digits round-trip exactly, so the formats must agree bitwise
    assert_eq!(from_csv, from_json);
    assert!(!from_csv.is_empty());
}

#[test]
fn count_identity_column_closes() {
    let out = stdout_str(&lanxp(&["count", "--range", "10:60:10"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 6);
    let mut prev_exact = 0.0;
    for r in &rows {
        let n_smooth = field(r, 2);
        let s_fluct = field(r, 3);
        let n_exact = field(r, 4);
        assert!(
            (n_smooth + s_fluct - n_exact).abs() < 1e-6,
            "identity failed on row {r:?}"
        );
        assert!(n_exact >= prev_exact, "zero count must be a staircase");
        prev_exact = n_exact;
    }
}

#[test]
fn count_at_origin_marks_the_fluctuation_column() {
    let out = stdout_str(&lanxp(&["count", "--e", "0"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!(r[3], "nan");
    assert_eq!(field(r, 1), 0.0);
    assert_eq!(field(r, 2), 1.0);
    assert_eq!(r[4], "0");
    assert_eq!(field(r, 5), 0.0);

    let json = stdout_str(&lanxp(&["count", "--e", "0", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).expect("json parses");
    assert!(doc["rows"][0]["s_fluct"].is_null());
    assert_eq!(doc["rows"][0]["n_smooth"], 1.0);
}

#[test]
fn spectrum_rows_are_sorted_with_tiny_residuals_and_sectors_differ() {
    let parse = |txt: &str| -> Vec<(usize, f64, f64)> {
        data_rows(txt)
            .iter()
            .map(|r| (r[1].parse().unwrap(), field(r, 2), field(r, 3)))
            .collect()
    };
    let even = parse(&stdout_str(&lanxp(&["spectrum", "--emax", "20"])));
    let odd = parse(&stdout_str(&lanxp(&[
        "spectrum", "--emax", "20", "--parity", "odd",
    ])));
    for rows in [&even, &odd] {
        assert!(!rows.is_empty());
        assert!(rows.windows(2).all(|w| w[0].1 < w[1].1), "eigenvalues sorted");
        assert!(rows.iter().all(|r| r.2 < 1e-9), "residual column small");
        assert!(rows.iter().enumerate().all(|(i, r)| r.0 == i + 1), "k runs 1..n");
    }
    // the sectors are distinct level sets (they interlace, never coincide)
    for (_, e, _) in &even {
        let nearest = odd
            .iter()
            .map(|(_, o, _)| (e - o).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest > 1e-3, "even level {e} collides with the odd sector");
    }
}

#[test]
fn spectrum_ceiling_zero_yields_header_only() {
    let out = lanxp(&["spectrum", "--emax", "0"]);
    assert_eq!(stdout_str(&out), "parity,k,E_k,residual\n");
}

#[test]
fn spectrum_staircase_mode_counts_levels() {
    let out = stdout_str(&lanxp(&["spectrum", "--range", "0:20:5"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][1], "0");
    assert_eq!(field(&rows[0], 2), 1.0);
    assert_eq!(field(&rows[0], 3), 1.0);
    let counts: Vec<i64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    assert!(counts[4] > 0);
}

#[test]
fn wavefunction_grid_shape_and_inversion_symmetry() {
    let out = stdout_str(&lanxp(&["wavefunction", "--e", "10", "--n", "16"]));
    let first = out.lines().next().expect("nonempty");
    assert!(
        first.starts_with("# ridge_x="),
        "ridge metadata line missing: {first}"
    );
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 256);
    // rows run y-major with x fastest, so inversion maps row r to row 255-r
    for r in [0usize, 5, 77, 100, 140] {
        let a = &rows[r];
        let b = &rows[255 - r];
        assert_eq!(field(a, 0), -field(b, 0));
        assert_eq!(field(a, 1), -field(b, 1));
        assert!((field(a, 4) - field(b, 4)).abs() < 1e-10);
        // even sector: the value itself is inversion-symmetric
        assert!((field(a, 2) - field(b, 2)).abs() < 1e-10);
        assert!((field(a, 3) - field(b, 3)).abs() < 1e-10);
    }
    // normalized export: sup |psi| = 1 on the grid
    let sup = rows.iter().map(|r| field(r, 4)).fold(0.0f64, f64::max);
    assert!((sup - 1.0).abs() < 1e-14);
}

#[test]
fn wavefunction_binary_block_matches_the_csv() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("field.bin");
    let out = lanxp(&[
        "wavefunction",
        "--e",
        "6",
        "--n",
        "16",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(&path).expect("artifact written");
    let nl = bytes.iter().position(|&b| b == b'\n').expect("header line");
    let header: serde_json::Value = serde_json::from_slice(&bytes[..nl]).expect("header parses");
    assert_eq!(header["n_x"], 16);
    assert_eq!(header["dtype"], "f64le");
    let block = &bytes[nl + 1..];
    assert_eq!(block.len(), 5 * 8 * 256);

    let decode = |col: usize, idx: usize| -> f64 {
        let off = (col * 256 + idx) * 8;
        f64::from_le_bytes(block[off..off + 8].try_into().unwrap())
    };
    let csv = stdout_str(&lanxp(&["wavefunction", "--e", "6", "--n", "16"]));
    let rows = data_rows(&csv);
    for idx in [0usize, 17, 130, 255] {
        for col in 0..5 {
            assert_eq!(
                decode(col, idx),
                field(&rows[idx], col),
                "column {col} row {idx} differs between formats"
            );
        }
    }
}

#[test]
fn classical_trajectory_conserves_energy_in_the_pure_field_run() {
    let out = stdout_str(&lanxp(&["classical", "trajectory", "--n", "10", "--tol", "1e-12"]));
    let rows = data_rows(&out);
    assert!(rows.len() > 100);
    let e0 = field(&rows[0], 5);
    let drift = rows
        .iter()
        .map(|r| (field(r, 5) - e0).abs())
        .fold(0.0f64, f64::max);
    assert!(drift < 1e-9, "energy drift {drift}");
    let times: Vec<f64> = rows.iter().map(|r| field(r, 0)).collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]));
    let horizon = 10.0 * 2.0 * std::f64::consts::PI;
    assert!((times.last().unwrap() - horizon).abs() < 1e-9);
}

#[test]
fn classical_coherent_radius_column_is_constant() {
    let out = stdout_str(&lanxp(&[
        "classical", "coherent", "--gamma", "100", "--z", "0.5", "--e", "10", "--n", "64",
    ]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 64);
    for r in &rows {
        assert!((field(r, 3) - 0.5).abs() < 1e-14, "radius broke on {r:?}");
    }
}

#[test]
fn classical_action_report_tracks_the_count_prediction() {
    let out = stdout_str(&lanxp(&[
        "classical", "action", "--gamma", "100", "--z", "0.5", "--e", "10",
    ]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    let difference = field(&rows[0], 5);
    // the residual is the bounded gyration oscillation, |.| <= z^2/2pi
    let bound = 0.25 / (2.0 * std::f64::consts::PI);
    assert!(difference.abs() <= bound + 1e-12, "difference {difference}");
}

#[test]
fn area_methods_agree_and_the_sampler_is_seeded() {
    let run = |seed: &str| {
        let out = stdout_str(&lanxp(&[
            "area", "--e", "10", "--L", "10", "--n", "1000000", "--seed", seed,
        ]));
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 1);
        (field(&rows[0], 1), field(&rows[0], 2), field(&rows[0], 3))
    };
    let (closed, quad, mc3) = run("3");
    assert!((closed - quad).abs() < 1e-10);
    assert!((closed - mc3).abs() < 5e-3, "monte carlo off by {}", closed - mc3);
    let (_, _, mc4) = run("4");
    assert_ne!(mc3, mc4, "seed must steer the sampler");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv_args = ["area", "--e", "10", "--L", "10", "--n", "100000", "--seed", "5"];
    let bin_args = ["wavefunction", "--e", "6", "--n", "16", "--format", "json"];
    for args in [&csv_args[..], &bin_args[..]] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        for path in [&a, &b] {
            let out = lanxp(
                &args
                    .iter()
                    .copied()
                    .chain(["--out", path.to_str().unwrap()])
                    .collect::<Vec<_>>(),
            );
            assert!(out.status.success());
        }
        let bytes_a = std::fs::read(&a).unwrap();
        let bytes_b = std::fs::read(&b).unwrap();
        assert_eq!(bytes_a, bytes_b, "rerun of {args:?} changed the artifact");
    }
}

#[test]
fn config_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["zeros", "--emax", "600"],            // desk ceiling
        &["count", "--e=-3"],                   // negative height
        &["spectrum", "--emax=-5"],             // empty band
        &["area", "--e", "10", "--n", "2"],     // sample budget too small
        &["classical", "coherent", "--gamma", "50", "--e", "10"], // --z missing
        &["count", "--e", "5", "--range", "1:2:1"], // over-specified energies
        &["wavefunction", "--e", "10", "--n", "4"], // grid too coarse
    ];
    for args in cases {
        let out = lanxp(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(out.stdout.is_empty(), "no artifact on failure: {args:?}");
        assert!(!out.stderr.is_empty(), "diagnostic expected: {args:?}");
        assert_eq!(
            String::from_utf8_lossy(&out.stderr).trim_end().lines().count(),
            1,
            "single-line diagnostic: {args:?}"
        );
    }
}

#[test]
fn numerical_failures_exit_three() {
    // strong coupling from a generic state blows past the tracked region
    let out = lanxp(&["classical", "trajectory", "--gamma", "2", "--n", "12", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("region"));
}
