use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_zernike");

fn zernike(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("ZERNIKE_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{schema_name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

/// Data rows of a CSV body, skipping `#` comments, as (header, rows).
fn csv_rows(body: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = body.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn reals(rows: &[Vec<String>], col: usize) -> Vec<f64> {
    rows.iter().map(|r| r[col].parse().unwrap()).collect()
}

fn meta(body: &str, key: &str) -> String {
    let prefix = format!("# {key}: ");
    body.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap()
        .to_string()
}

#[test]
fn classify_examples() {
    let o = zernike(&[
        "classify", "--alpha", "-1", "--beta", "-2", "--pphi", "3", "--energy", "20",
    ]);
    assert_eq!((stdout(&o).as_str(), code(&o)), ("ClosedEllipse\n", 0));
    let o = zernike(&[
        "classify", "--alpha", "-1", "--beta", "-2", "--pphi", "3", "--energy", "10",
    ]);
    assert_eq!((stdout(&o).as_str(), code(&o)), ("Forbidden\n", 2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&zernike(&["classify", "--pphi", "3"])), 2);
    assert_eq!(
        code(&zernike(&["classify", "--pphi", "3", "--energy", "nan"])),
        2
    );
    assert_eq!(
        code(&zernike(&[
            "lift", "--pphi", "3", "--energy", "20", "--system", "bogus"
        ])),
        2
    );
    assert_eq!(
        code(&zernike(&["trajectory", "--pphi", "3", "--energy", "10"])),
        2
    );
    assert_eq!(
        code(&zernike(&[
            "integrate",
            "--pphi",
            "3",
            "--energy",
            "20",
            "--samples",
            "0"
        ])),
        2
    );
    assert_eq!(code(&zernike(&["no-such-command"])), 2);
}

#[test]
fn verify_algebra_reports_all_pass() {
    let o = zernike(&["verify-algebra"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_valid("verify-algebra", &doc);
    assert_eq!(doc["all_pass"], true);
    let reports = doc["reports"].as_array().unwrap();
    assert!(reports.len() >= 6);
    assert!(reports
        .iter()
        .all(|r| r["pass"] == true && r["residual_term_count"] == 0));
    assert!(reports.iter().any(|r| r["identity"] == "{J1,J2} - J3"));

    let o = zernike(&["verify-algebra", "--format", "csv"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["identity", "pass", "residual_term_count"]);
    assert_eq!(rows.len(), reports.len());
}

#[test]
fn json_outputs_match_schemas() {
    let orbit = ["--pphi", "3", "--energy", "20", "--format", "json"];
    for cmd in ["classify", "constants", "trajectory", "integrate", "lift"] {
        let mut args = vec![cmd];
        args.extend(orbit);
        args.extend(
            ["--samples", "8"]
                .iter()
                .filter(|_| cmd != "classify" && cmd != "constants"),
        );
        let o = zernike(&args);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert_valid(cmd, &json(&o));
    }
    let o = zernike(&[
        "sweep", "--pmin", "-6", "--pmax", "6", "--psteps", "5", "--emin", "-2", "--emax", "40",
        "--esteps", "4", "--format", "json",
    ]);
    let doc = json(&o);
    assert_valid("sweep", &doc);
    assert_eq!(doc["class"].as_array().unwrap().len(), 20);
}

#[test]
fn csv_headers_are_fixed() {
    let orbit = ["--pphi", "3", "--energy", "20", "--samples", "4"];
    let header = |cmd: &str| {
        let mut args = vec![cmd];
        args.extend(orbit);
        csv_rows(&stdout(&zernike(&args))).0.join(",")
    };
    assert_eq!(header("trajectory"), "t,x,y,r2,phi");
    assert_eq!(
        header("integrate"),
        "t,re_x,im_x,re_y,im_y,drift_I1,drift_I2,drift_I3,drift_H"
    );
    assert_eq!(header("lift"), "phi,u1,u2,xi1,xi2,xi3");
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec![
            "sweep", "--pmin", "-6", "--pmax", "6", "--psteps", "41", "--emin", "-2", "--emax",
            "40", "--esteps", "37",
        ],
        vec!["integrate", "--pphi", "3", "--energy", "35"],
        vec![
            "trajectory",
            "--pphi",
            "-2",
            "--energy",
            "15",
            "--format",
            "json",
        ],
        vec![
            "lift", "--alpha", "1", "--beta", "2", "--pphi", "0.5", "--energy", "0.9",
        ],
    ];
    for args in runs {
        let a = zernike(&args);
        let b = zernike(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ellipse.csv");
    let o = zernike(&[
        "trajectory",
        "--pphi",
        "3",
        "--energy",
        "20",
        "--samples",
        "16",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&body).1.len(), 17);
}

#[test]
fn sweep_grid_shape_and_units() {
    let o = zernike(&[
        "sweep", "--pmin", "3", "--pmax", "3", "--psteps", "1", "--emin", "20", "--emax", "20",
        "--esteps", "1",
    ]);
    assert_eq!(code(&o), 0);
    let body = stdout(&o);
    assert_eq!(meta(&body, "energy_unit"), "beta^2/(4|alpha|) = 1.0");
    let (header, rows) = csv_rows(&body);
    assert_eq!(header, ["p_phi", "E", "class"]);
    assert_eq!(rows, [["3.0", "20.0", "ClosedEllipse"]]);

    let o = zernike(&[
        "sweep", "--pmin", "-1", "--pmax", "1", "--psteps", "0", "--emin", "0", "--emax", "1",
        "--esteps", "3",
    ]);
    assert_eq!(code(&o), 2);

    // (α, β) = (1, 2): closed orbits need E < β²/4α = 1
    let o = zernike(&[
        "sweep", "--alpha", "1", "--beta", "2", "--pmin", "0.5", "--pmax", "0.5", "--psteps", "1",
        "--emin", "0.9", "--emax", "1.5", "--esteps", "2",
    ]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][2], "ClosedEllipse");
    assert_eq!(rows[1][2], "Forbidden");
}

#[test]
fn trajectory_encloses_the_swept_area() {
    // Areal velocity is constant at p_phi, so one revolution (2T) sweeps 2 T p_phi.
    let o = zernike(&["trajectory", "--pphi", "3", "--energy", "20"]);
    assert_eq!(code(&o), 0);
    let body = stdout(&o);
    let t_period: f64 = meta(&body, "period").parse().unwrap();
    let (_, rows) = csv_rows(&body);
    assert_eq!(rows.len(), 1025);
    let (xs, ys) = (reals(&rows, 1), reals(&rows, 2));
    let shoelace: f64 = (0..xs.len() - 1)
        .map(|k| xs[k] * ys[k + 1] - xs[k + 1] * ys[k])
        .sum::<f64>()
        / 2.0;
    let expect = 2.0 * t_period * 3.0;
    assert!(
        (shoelace.abs() - expect).abs() < 1e-4 * expect,
        "{shoelace} vs {expect}"
    );

    // r2 column agrees with x² + y²
    let r2 = reals(&rows, 3);
    for k in 0..xs.len() {
        assert!((xs[k] * xs[k] + ys[k] * ys[k] - r2[k]).abs() < 1e-12);
    }
}

#[test]
fn integrate_conserves_and_follows_the_closed_form() {
    let o = zernike(&[
        "integrate",
        "--pphi",
        "3",
        "--energy",
        "20",
        "--samples",
        "64",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let numeric = csv_rows(&stdout(&o)).1;
    let closed = csv_rows(&stdout(&zernike(&[
        "trajectory",
        "--pphi",
        "3",
        "--energy",
        "20",
        "--samples",
        "64",
    ])))
    .1;
    assert_eq!(numeric.len(), 65);
    for (n, c) in numeric.iter().zip(&closed) {
        let f = |r: &Vec<String>, k: usize| r[k].parse::<f64>().unwrap();
        assert_eq!(f(n, 0), f(c, 0));
        assert!((f(n, 1) - f(c, 1)).abs() < 1e-7 && (f(n, 3) - f(c, 2)).abs() < 1e-7);
        assert!(f(n, 2).abs() < 1e-8 && f(n, 4).abs() < 1e-8);
        assert!((5..9).all(|k| f(n, k) <= 1e-8));
    }
}

#[test]
fn drift_bound_and_tolerance_override() {
    let o = zernike(&[
        "integrate",
        "--pphi",
        "3",
        "--energy",
        "35",
        "--tol",
        "1e-4",
        "--samples",
        "8",
    ]);
    assert_eq!(code(&o), 1);
    assert!(!o.stdout.is_empty());

    let o = Command::new(BIN)
        .args([
            "integrate",
            "--pphi",
            "3",
            "--energy",
            "35",
            "--samples",
            "8",
        ])
        .env("ZERNIKE_TOL", "1e-4")
        .output()
        .unwrap();
    assert_eq!(meta(&stdout(&o), "tolerance"), "0.0001");
    assert_eq!(code(&o), 1);

    let o = Command::new(BIN)
        .args([
            "integrate",
            "--pphi",
            "3",
            "--energy",
            "35",
            "--tol",
            "1e-11",
            "--samples",
            "8",
        ])
        .env("ZERNIKE_TOL", "1e-4")
        .output()
        .unwrap();
    assert_eq!(meta(&stdout(&o), "tolerance"), "1e-11");
    assert_eq!(code(&o), 0);
}

#[test]
fn lifted_points_lie_on_their_surface() {
    // sphere of radius 1/√|α| for α < 0, two-sheet hyperboloid ξ₃² − ξ₁² − ξ₂² = 1/α for α > 0
    let cases = [
        (["-1", "-2", "3", "20"], -1.0_f64),
        (["1", "2", "0.5", "0.9"], 1.0),
    ];
    for (flags, alpha) in cases {
        let o = zernike(&[
            "lift",
            "--alpha",
            flags[0],
            "--beta",
            flags[1],
            "--pphi",
            flags[2],
            "--energy",
            flags[3],
            "--samples",
            "64",
        ]);
        assert_eq!(code(&o), 0);
        let (_, rows) = csv_rows(&stdout(&o));
        for r in &rows {
            let xi: Vec<f64> = r[3..6].iter().map(|v| v.parse().unwrap()).collect();
            let q = if alpha < 0.0 {
                xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
            } else {
                xi[2] * xi[2] - xi[0] * xi[0] - xi[1] * xi[1]
            };
            assert!((q - 1.0 / alpha.abs()).abs() < 1e-12, "{r:?}");
        }
    }
    let body = stdout(&zernike(&[
        "lift",
        "--pphi",
        "3",
        "--energy",
        "20",
        "--samples",
        "4",
        "--system",
        "II",
    ]));
    assert_eq!(meta(&body, "system"), "II");
}
