use std::process::Command;

use pdm_cli::run;

fn pdm(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pdm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(text: &str, i: usize) -> Vec<f64> {
    data_rows(text).iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn spectrum_examples() {
    let (code, out, _) = pdm(&["spectrum", "--n-max", "2"]);
    assert_eq!(code, 0);
    let e = column(&out, 2);
    for (got, want) in e.iter().zip([0.5, 7.0 / 9.0, 0.875]) {
        assert!((got - want).abs() < 1e-11);
    }
    let (_, out, _) = pdm(&["spectrum", "--potential", "morse", "--n-max", "1"]);
    assert_eq!(column(&out, 2), vec![-6.125, -3.125]);
    let (code, out, _) = pdm(&["spectrum", "--De", "0", "--n-max", "3"]);
    assert_eq!(code, 0);
    assert!(column(&out, 2).iter().all(|&e| e == 0.0));
}

#[test]
fn morse_rows_beyond_the_cap_are_omitted_with_a_notice() {
    let (code, out, _) = pdm(&["spectrum", "--potential", "morse", "--n-max", "9"]);
    assert_eq!(code, 0);
    assert_eq!(data_rows(&out).len(), 4);
    assert!(out.contains("# notice: morse ℓ=0 has 4 bound state(s)"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--De", "32", "--profile", "exponential q=1", "--ell", "0,1"];
    let (_, a, _) = pdm(&args);
    let (_, b, _) = pdm(&args);
    assert_eq!(a, b);
    // 12 significant digits
    assert!(data_rows(&a)[0][2].ends_with("e0") && data_rows(&a)[0][2].len() == "3.75780488547e0".len());
}

#[test]
fn flags_override_the_config_file_and_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[potential]\nkind = \"kratzer\"\nDe = 2.0\n\n[states]\nn_max = 0\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = pdm(&["spectrum", "--config", p]);
    assert_eq!(code, 0);
    assert!(out.contains("# De = 2.0"));
    assert_eq!(data_rows(&out).len(), 1);
    let (_, out, _) = pdm(&["spectrum", "--config", p, "--De", "3"]);
    assert!(out.contains("# De = 3.0") && !out.contains("# De = 2.0"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[potential]\nDee = 2.0\n").unwrap();
    let (code, _, err) = pdm(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("Dee"), "{err}");

    for args in [
        vec!["spectrum", "--De", "-1"],
        vec!["spectrum", "--profile", "wobbly a=1"],
        vec!["spectrum", "--profile", "exponential q=1", "--a", "2"],
        vec!["spectrum", "--potential", "morse", "--De", "2"],
        vec!["spectrum", "--frobnicate"],
        vec!["wavefunction", "--potential", "morse", "--n", "7"],
        vec!["verify", "--resolutions", "1000,2000"],
        vec!["sweep", "--param", "colour", "--values", "1"],
        vec!["sweep", "--param", "De", "--values", "1,abc"],
    ] {
        let (code, _, _) = pdm(&args);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn profile_parameters_override_the_profile_string() {
    let (_, a, _) = pdm(&["verify", "--De", "32", "--profile", "lorentzian a=1 q=1", "--a", "4", "--n-max", "0"]);
    let (_, b, _) = pdm(&["verify", "--De", "32", "--profile", "lorentzian a=4 q=1", "--n-max", "0"]);
    assert_eq!(a, b);
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

#[test]
fn wavefunction_tables() {
    for n in 0..3 {
        let n_s = n.to_string();
        let (_, x_mode, _) = pdm(&["wavefunction", "--n", &n_s, "--coordinate", "x"]);
        let (_, y_mode, _) = pdm(&["wavefunction", "--n", &n_s, "--coordinate", "y"]);
        assert_eq!(data_rows(&x_mode), data_rows(&y_mode));

        let args = ["wavefunction", "--De", "32", "--profile", "squared_lorentzian a=8 b=1", "--n", &n_s];
        let (code, out, _) = pdm(&args);
        assert_eq!(code, 0);
        let (xs, psi) = (column(&out, 0), column(&out, 1));
        let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
        assert!((trapezoid(&xs, &sq) - 1.0).abs() < 1e-6, "n={n}: {}", trapezoid(&xs, &sq));
        let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let signs: Vec<bool> = psi.iter().filter(|v| v.abs() > 1e-6 * peak).map(|v| *v > 0.0).collect();
        let nodes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(nodes, n);
    }
}

#[test]
fn verify_examples() {
    let (code, out, _) = pdm(&["verify", "--tolerance", "1e-5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("n,ell,E_analytic,E_numeric,abs_err,rel_err,residual,order\n"));
    let (code, _, _) = pdm(&["verify", "--De", "32", "--profile", "lorentzian a=4 q=1"]);
    assert_eq!(code, 0);
    let (code, out, err) = pdm(&["verify", "--De", "32", "--profile", "lorentzian a=4 q=1", "--correction-sign", "minus"]);
    assert_eq!(code, 1);
    assert!(out.contains("# verdict: FAIL") && err.contains("verification failed"));
}

#[test]
fn correction_sign_flag_is_hidden() {
    let (code, out, _) = pdm(&["verify", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--profile") && !out.contains("correction-sign"));
}

#[test]
fn audit_outputs() {
    let (code, out, _) = pdm(&["audit", "--profile", "lorentzian a=1 q=1"]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    assert_eq!(rows[0][0], "eq21");
    assert_eq!(rows[0][2], "consistent");
    let (code, out, _) = pdm(&["audit", "--profile", "exponential q=2", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("eq30") && out.contains("discrepant") && out.contains("argmax_x"));
    let (code, out, _) = pdm(&["audit"]);
    assert_eq!(code, 0);
    assert!(out.contains("no printed closed form"));
}

#[test]
fn sweeps() {
    let (code, out, _) = pdm(&["sweep", "--param", "De", "--values", "0.5,1,2", "--n-max", "0"]);
    assert_eq!(code, 0);
    let e = column(&out, 4);
    assert_eq!(e.len(), 3);
    assert!(e[0] < e[1] && e[1] < e[2]);

    let (code, out, err) = pdm(&["sweep", "--param", "q", "--values", ""]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "", ""));
    let (code, out, _) = pdm(&["sweep", "--param", "q", "--values"]);
    assert_eq!((code, out.as_str()), (0, ""));

    let args = ["sweep", "--De", "32", "--profile", "lorentzian a=4 q=1", "--param", "q", "--values", "0.5,1,2", "--verify"];
    let (code, out, _) = pdm(&args);
    assert_eq!(code, 0, "{out}");
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[7] == "true"));
    // rows come back in value order regardless of scheduling
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn json_output_parses() {
    let (code, out, _) = pdm(&["verify", "--format", "json", "--n-max", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["potential"]["De"], 1.0);
    assert_eq!(v["reports"][0]["records"].as_array().unwrap().len(), 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pdm");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["spectrum"]), 0);
    assert_eq!(status(&["spectrum", "--ye", "0"]), 2);
    assert_eq!(
        status(&["verify", "--De", "32", "--profile", "lorentzian a=4 q=1", "--correction-sign", "minus"]),
        1
    );
}
