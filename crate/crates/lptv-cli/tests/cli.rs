//! End-to-end runs of the `lptv` binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lptv::{catalog, q, Mat, OmegaPolyMatrix, Rational};
use lptv_cli::format;
use serde_json::Value;

fn systems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn lptv(args: &[&str]) -> Output {
    lptv_env(args, &[])
}

fn lptv_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lptv"));
    cmd.args(args).env_remove("LPTV_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = lptv(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn catalog_list_has_every_entry() {
    let out = ok(&["catalog", "list"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(rows.len() >= 20);
    assert_eq!(rows.len(), catalog::all_entries().len());
    let mut ids: Vec<&str> = rows.iter().map(|r| r.split('\t').next().unwrap()).collect();
    assert!(ids.contains(&"4-4:H") && ids.contains(&"meissner"));
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), rows.len());
}

#[test]
fn catalog_emit_round_trips_for_every_series_entry() {
    for e in catalog::all_entries() {
        let o = lptv(&["catalog", "emit", &e.id]);
        if e.series().is_none() {
            assert_eq!(o.status.code(), Some(1), "{}", e.id);
            assert!(stderr(&o).contains("no text form"));
            continue;
        }
        let text = stdout(&o);
        let doc = format::parse(&text).unwrap_or_else(|err| panic!("{}: {err}", e.id));
        assert_eq!(doc.emit(), text, "{}", e.id);
        assert_eq!(doc.a.as_ref(), e.series());
    }
}

#[test]
fn catalog_emit_then_solve_then_verify() {
    let sys = temp_file(&ok(&["catalog", "emit", "4-4:H"]));
    let sol_text = ok(&["solve", path(&sys)]);
    let sol = format::parse(&sol_text).unwrap();
    let expect = catalog::table_row("4-4", "H").unwrap().known_r.unwrap();
    assert_eq!(sol.r.unwrap().char_poly(), expect.char_poly());
    let sol_file = temp_file(&sol_text);
    let report = json(&["verify", path(&sys), "--solution", path(&sol_file)]);
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn catalog_params_override() {
    let text = ok(&["catalog", "emit", "4-4:H", "--param", "a0=2", "--param", "b1=-1/3"]);
    let doc = format::parse(&text).unwrap();
    assert_eq!(doc.params["a0"], q(2, 1));
    assert_eq!(doc.params["b1"], q(-1, 3));
    let text = ok(&["catalog", "emit", "markus-yamabe", "--param", "a=0.5"]);
    assert_eq!(format::parse(&text).unwrap().params["a"], q(1, 2));
    assert_eq!(lptv(&["catalog", "emit", "markus-yamabe", "--param", "zz=1"]).status.code(), Some(1));
    assert_eq!(lptv(&["catalog", "emit", "no-such-entry"]).status.code(), Some(1));
}

#[test]
fn four_harmonic_file_solves_to_affine_r() {
    let file = systems().join("four-harmonic.lptv");
    let text = ok(&["solve", file.to_str().unwrap()]);
    let doc = format::parse(&text).unwrap();
    let r = doc.r.unwrap();
    assert_eq!(r.degree(), 1);
    assert!(text.contains("power 0\n") && text.contains("power 1\n"));
    // [[1, ω − 1], [1 − ω, −1]]
    let expect: OmegaPolyMatrix<Rational> =
        OmegaPolyMatrix::from_slices(2, vec![Mat::from_i64(&[&[1, -1], &[1, -1]]), Mat::from_i64(&[&[0, 1], &[-1, 0]])]);
    assert_eq!(r.char_poly(), expect.char_poly());
    assert!(doc.report.contains(&("residual-norm".to_string(), "0.0000000000000000e+0".to_string())));
}

#[test]
fn malformed_header_exits_with_position() {
    let f = temp_file("[system]\nname broken\nn x\n");
    let o = lptv(&["solve", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3, column 3"), "{}", stderr(&o));
    let f = temp_file("[system]\nname broken\nn 2\nharmonics 0\nomega-degree 0\n[A]\nterm 0 0 cos\n1 2\n3\n");
    let o = lptv(&["solve", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 9"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(lptv(&["solve"]).status.code(), Some(1));
    assert_eq!(lptv(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(lptv(&["solve", "/nonexistent/file.lptv"]).status.code(), Some(1));
    assert_eq!(lptv(&["solve", "--system", "meissner"]).status.code(), Some(1));
    assert_eq!(lptv(&["help"]).status.code(), Some(0));
}

#[test]
fn no_solution_exits_two() {
    let file = systems().join("four-harmonic.lptv");
    let o = lptv(&["solve", file.to_str().unwrap(), "--p-hint", "1", "--p-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn json_and_csv_are_deterministic() {
    let args = ["solve", "--system", "example-3x3", "--p-hint", "2", "--json", "--omega", "0.5,1,2"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["arithmetic"], "rational");
    assert_eq!(v["harmonics"], 2);
    assert_eq!(v["omega_reports"].as_array().unwrap().len(), 3);
    // fields in declaration order
    let keys: Vec<&str> = a.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    assert_eq!(keys[..4], ["system", "arithmetic", "harmonics", "residual_norm"]);
    assert!(a.contains("\"residual_norm\": 0.0000000000000000e+0"));

    let args = ["sweep", "--system", "markus-yamabe", "--omega-min", "0", "--omega-max", "2", "--steps", "41", "--critical"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn float_solve_reports_small_residual() {
    let v = json(&["solve", "--system", "4-4:H", "--float", "--json"]);
    assert_eq!(v["arithmetic"], "float");
    assert!(num(&v["residual_norm"]) < 1e-9);
}

#[test]
fn solve_csv_evaluates_r() {
    let out = ok(&["solve", "--system", "markus-yamabe", "--csv", "--omega", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["omega", "r_1_1", "r_1_2", "r_2_1", "r_2_2", "re_lambda_1", "re_lambda_2", "im_lambda_1", "im_lambda_2", "class"]);
    assert_eq!(rows.len(), 2);
    let re: Vec<f64> = rows[1][5..7].iter().map(|s| s.parse().unwrap()).collect();
    assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 0.5).abs() < 1e-12);
    assert_eq!(rows[1][9], "unstable");
}

#[test]
fn verify_row_h_and_identity() {
    let sol = temp_file(&ok(&["solve", "--system", "4-4:H"]));
    let v = json(&["verify", "--system", "4-4:H", "--solution", path(&sol), "--omega", "2"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(num(&v["checks"][4]["value"]) < 1e-9);

    let sys = systems().join("identity.lptv");
    let sol = systems().join("identity.sol.lptv");
    let v = json(&["verify", sys.to_str().unwrap(), "--solution", sol.to_str().unwrap()]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(num(&v["residual_norm"]), 0.0);
}

#[test]
fn corrupted_solution_exits_three() {
    let text = ok(&["solve", "--system", "4-4:H"]);
    assert!(text.contains("\n-3/2 0\n"));
    let bad = temp_file(&text.replace("\n-3/2 0\n", "\n-3/2 1\n"));
    let o = lptv(&["verify", "--system", "4-4:H", "--solution", path(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("verification failed: residual"), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], Value::Bool(false));
    assert_eq!(v["checks"][0]["name"], "residual");
    assert_eq!(v["checks"][0]["pass"], Value::Bool(false));
}

#[test]
fn tolerance_variable_overrides_defaults() {
    let sol = temp_file(&ok(&["solve", "--system", "4-4:H"]));
    let args = ["verify", "--system", "4-4:H", "--solution", path(&sol)];
    let o = lptv_env(&args, &[("LPTV_TOL", "1e-30")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("transition-cross-check"));
    assert_eq!(lptv_env(&args, &[("LPTV_TOL", "1e-3")]).status.code(), Some(0));
    assert_eq!(lptv_env(&args, &[("LPTV_TOL", "soon")]).status.code(), Some(1));
}

#[test]
fn sweep_markus_yamabe_critical_set() {
    let out = ok(&["sweep", "--system", "markus-yamabe", "--omega-min", "0", "--omega-max", "2", "--steps", "9", "--critical"]);
    let (table, crit) = out.split_once("\n\n").unwrap();
    assert_eq!(table.lines().count(), 10);
    let mut got: Vec<f64> = crit.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    got.sort_by(f64::total_cmp);
    let h = std::f64::consts::SQRT_2 / 2.0;
    let expect = [0.25, 1.0 - h, 1.0 + h, 1.75];
    let mut expect = expect.to_vec();
    expect.sort_by(f64::total_cmp);
    assert_eq!(got.len(), 4);
    for (g, e) in got.iter().zip(&expect) {
        assert!((g - e).abs() < 1e-12, "{g} vs {e}");
    }
}

#[test]
fn sweep_single_point_and_classes() {
    let out = ok(&["sweep", "--system", "markus-yamabe", "--omega-min", "1", "--omega-max", "1", "--steps", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][5], "unstable");

    let h = std::f64::consts::SQRT_2 / 2.0;
    let grid = format!("0,0.25,0.28,{},1,{},1.72,1.75,2", 1.0 - h, 1.0 + h);
    let out = ok(&["sweep", "--system", "markus-yamabe", "--omega", &grid]);
    let classes: Vec<String> = csv_rows(&out).into_iter().skip(1).map(|r| r[5].clone()).collect();
    assert_eq!(classes, ["stable", "stable", "stable", "marginal", "unstable", "marginal", "stable", "stable", "stable"]);
}

#[test]
fn sweep_from_stored_r() {
    let sol = temp_file(&ok(&["solve", "--system", "markus-yamabe"]));
    let a = ok(&["sweep", "--R", path(&sol), "--omega", "0.5,1.5"]);
    let b = ok(&["sweep", "--system", "markus-yamabe", "--omega", "0.5,1.5"]);
    assert_eq!(a, b);
    assert_eq!(lptv(&["sweep", "--R", path(&sol)]).status.code(), Some(1));
}

#[test]
fn monodromy_of_mathieu() {
    let v = json(&["monodromy", "--system", "mathieu", "--param", "a=1", "--param", "q=0.2", "--omega", "2", "--factorize"]);
    assert_eq!(v["method"], "rk4");
    assert!((num(&v["product"]["re"]) - 1.0).abs() < 1e-8);
    assert!(num(&v["product"]["im"]).abs() < 1e-8);
    assert_eq!(v["product_check"], Value::Bool(true));
    // both multipliers are negative here, so the real logarithm needs 2T
    assert!(v["multipliers"].as_array().unwrap().iter().all(|z| num(&z["re"]) < 0.0));
    assert_eq!(v["factorization"]["period_multiplier"], 2);
}

#[test]
fn monodromy_methods() {
    let v = json(&["monodromy", "--system", "meissner", "--omega", "2"]);
    assert_eq!(v["method"], "piecewise");
    assert_eq!(v["steps"], Value::Null);
    assert_eq!(v["product_check"], Value::Bool(true));
    let v = json(&["monodromy", "--system", "4-3:A", "--omega", "1.5"]);
    assert_eq!(v["method"], "expm-commuting");
    let v = json(&["monodromy", "--system", "4-4:H", "--omega", "1", "--factorize"]);
    assert_eq!(v["factorization"]["period_multiplier"], 1);
    assert!(num(&v["factorization"]["montagnier_error"]) < 1e-8);
    assert_eq!(lptv(&["monodromy", "--system", "cauchy-euler"]).status.code(), Some(1));
}

#[test]
fn monodromy_overflow_exits_four() {
    let f = temp_file("[system]\nname fast\nn 1\nharmonics 0\nomega-degree 0\n[A]\nterm 0 0 cos\n1000\n");
    let o = lptv(&["monodromy", path(&f), "--omega", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("numeric failure"));
}

#[test]
fn htf_of_lti_matches_resolvent() {
    let file = systems().join("lti.lptv");
    let out = ok(&["htf", file.to_str().unwrap(), "--s-grid", "0.3+0.7i,-2i", "--trunc", "3", "--blocks", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["s_re", "s_im", "k", "l", "i", "j", "re", "im", "abs"]);
    assert_eq!(rows.len(), 1 + 2 * 9);
    for row in &rows[1..] {
        let s = num::complex::Complex64::new(row[0].parse().unwrap(), row[1].parse().unwrap());
        let (k, l): (i64, i64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
        let g = num::complex::Complex64::new(row[6].parse().unwrap(), row[7].parse().unwrap());
        let expect = if k == l {
            // 2 / ((s + 1)(s + 3)) + 1/2 at s + ikω
            let sk = s + num::complex::Complex64::new(0.0, k as f64);
            2.0 / ((sk + 1.0) * (sk + 3.0)) + 0.5
        } else {
            num::complex::Complex64::new(0.0, 0.0)
        };
        assert!((g - expect).norm() < 1e-12, "{row:?}");
    }
}

#[test]
fn htf_poles_and_io_file() {
    let file = systems().join("lti.lptv");
    let out = ok(&["htf", file.to_str().unwrap(), "--poles", "--omega", "1"]);
    let rows = csv_rows(&out);
    let mut poles: Vec<f64> = rows.iter().filter(|r| r[0] == "pole").map(|r| r[1].parse().unwrap()).collect();
    poles.sort_by(f64::total_cmp);
    assert_eq!(poles.len(), 2);
    assert!((poles[0] + 3.0).abs() < 1e-8 && (poles[1] + 1.0).abs() < 1e-8);

    let io = systems().join("mathieu-io.lptv");
    let out = ok(&["htf", "--system", "mathieu", "--io", io.to_str().unwrap(), "--s-grid", "0.1+0.2i", "--omega", "2"]);
    assert_eq!(csv_rows(&out).len(), 2);
    let o = lptv(&["htf", "--system", "mathieu", "--s-grid", "abc"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn htf_singular_resolvent_exits_four() {
    let file = systems().join("lti.lptv");
    let o = lptv(&["htf", file.to_str().unwrap(), "--s-grid", "-1", "--trunc", "2"]);
    assert_eq!(o.status.code(), Some(4));
}
