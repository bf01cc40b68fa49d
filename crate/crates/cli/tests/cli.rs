use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gifs-dim"));
    c.env_remove("GIFS_DIM_WORKERS");
    c
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_field(text: &str, row: usize, column: &str) -> String {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == column).unwrap();
    lines.nth(row).unwrap().split(',').nth(idx).unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", "--spec", spec("sierpinski.gifs").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("open set condition: yes"));

    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(spec("sierpinski.gifs")).unwrap();

    let expanding = dir.path().join("expanding.gifs");
    fs::write(&expanding, text.replace("map b k=0 M=0.5,0,0,0.5", "map b k=0 M=1.5,0,0,0.5")).unwrap();
    let o = run(&["validate", "--spec", expanding.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("edge b"), "{}", stderr(&o));

    let malformed = dir.path().join("malformed.gifs");
    fs::write(&malformed, text.replace("map b k=0 M=0.5,", "map b k=0 M=0.5x,")).unwrap();
    let o = run(&["validate", "--spec", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 8"), "{}", stderr(&o));

    assert_eq!(run(&["validate"]).status.code(), Some(2));
    let missing = dir.path().join("missing.gifs");
    assert_eq!(run(&["validate", "--spec", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_arguments_are_input_failures() {
    let s = spec("cantor.gifs");
    let s = s.to_str().unwrap();
    assert_eq!(run(&["dim-bounds", "--spec", s, "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&["boxcount", "--spec", s, "--points", "10"]).status.code(), Some(2));
    assert_eq!(run(&["perturb", "--spec", s, "--eps-levels", "1"]).status.code(), Some(2));
}

#[test]
fn dim_bounds_csv() {
    let o = run(&["dim-bounds", "--spec", spec("cantor.gifs").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("system,s_lower,s_upper,det_lo,det_hi,K,flags\n"));
    let exact = 2f64.ln() / 3f64.ln();
    for col in ["s_lower", "s_upper", "det_lo", "det_hi"] {
        let v: f64 = csv_field(&text, 0, col).parse().unwrap();
        assert!((v - exact).abs() < 1e-9, "{col} = {v}");
    }
    assert_eq!(csv_field(&text, 0, "system"), "cantor");
    assert_eq!(csv_field(&text, 0, "K"), "1");
}

#[test]
fn out_flag_separates_csv_from_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.csv");
    let o = run(&[
        "dim-bounds",
        "--spec",
        spec("two_vertex.gifs").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with('#')));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().all(|l| !l.starts_with('#')));
}

#[test]
fn output_is_deterministic_across_workers() {
    let s = spec("sierpinski.gifs");
    let s = s.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let dumps: Vec<PathBuf> = (0..3).map(|i| dir.path().join(format!("cloud{i}.csv"))).collect();
    let a = run(&["boxcount", "--spec", s, "--seed", "7", "--points", "20000", "--workers", "1", "--dump", dumps[0].to_str().unwrap()]);
    let b = run(&["boxcount", "--spec", s, "--seed", "7", "--points", "20000", "--workers", "4", "--dump", dumps[1].to_str().unwrap()]);
    let c = bin()
        .env("GIFS_DIM_WORKERS", "3")
        .args(["boxcount", "--spec", s, "--seed", "7", "--points", "20000", "--dump", dumps[2].to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d0 = fs::read(&dumps[0]).unwrap();
    assert_eq!(d0, fs::read(&dumps[1]).unwrap());
    assert_eq!(d0, fs::read(&dumps[2]).unwrap());
    let text = String::from_utf8(d0).unwrap();
    assert!(text.starts_with("x1,x2,vertex\n"));
    assert_eq!(text.lines().count(), 20001);

    let p1 = run(&["perturb", "--spec", spec("conformal_family.gifs").to_str().unwrap(), "--workers", "1"]);
    let p4 = run(&["perturb", "--spec", spec("conformal_family.gifs").to_str().unwrap(), "--workers", "4"]);
    assert_eq!(p1.status.code(), Some(0));
    assert_eq!(p1.stdout, p4.stdout);
}

#[test]
fn boxcount_summary_reports_slope() {
    let o = run(&["boxcount", "--spec", spec("sierpinski.gifs").to_str().unwrap(), "--points", "50000"]);
    let text = stdout(&o);
    assert!(text.starts_with("scale,count\n"));
    let line = text.lines().find(|l| l.contains("box dimension")).unwrap();
    let slope: f64 = line.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!((1.45..=1.70).contains(&slope), "{slope}");
}

#[test]
fn perturb_recovers_conformal_coefficient() {
    for method in ["richardson", "polyfit"] {
        let o = run(&["perturb", "--spec", spec("conformal_family.gifs").to_str().unwrap(), "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        assert!(text.starts_with("eps,s_lower,s_upper,K\n"));
        let s1: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix("#   s_1 = "))
            .unwrap()
            .parse()
            .unwrap();
        // d/d eps of log 2 / -log(1/3 + eps/10) at 0
        let exact = 0.3 * 2f64.ln() / 3f64.ln().powi(2);
        assert!((s1 - exact).abs() < 1e-4, "{method}: {s1} vs {exact}");
    }
}

#[test]
fn pressure_rows_agree_for_similitudes() {
    let o = run(&["pressure", "--spec", spec("cantor.gifs").to_str().unwrap(), "--s", "0.5", "--cylinder", "4"]);
    let text = stdout(&o);
    let exact = 2f64.ln() - 0.5 * 3f64.ln();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.iter().all(|v| (v - exact).abs() < 1e-12));
}

#[test]
fn example_r3_report_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("r3.gifs");
    let o = run(&["example-r3", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("eps,K_closed_form,K_min"));
    assert!(text.contains("# closed-form K(0) = 1\n"));
    let coeffs: Vec<f64> = text
        .lines()
        .filter(|l| l.contains("central difference"))
        .map(|l| l.rsplit(": ").next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 2);
    assert!(coeffs.iter().all(|c| (c - 0.5625).abs() < 1e-3));

    let v = run(&["validate", "--spec", dump.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("strong separation at depth 1: yes"));
    assert_eq!(fs::read_to_string(&dump).unwrap(), fs::read_to_string(spec("r3_family.gifs")).unwrap());

    assert_eq!(run(&["example-r3", "--r", "0.7"]).status.code(), Some(1));
}
