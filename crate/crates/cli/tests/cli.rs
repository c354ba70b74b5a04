use std::process::{Command, Output};

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_reports_embedding() {
    let o = orlicz(&["classify", "--young", "power:p=5", "--n", "2", "--s", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "embedding");
    assert_eq!(v["regime"], "Subcritical01");
}

#[test]
fn classify_reports_missing_embedding() {
    let o = orlicz(&["classify", "--young", "exp:gamma0=-1,gamma=1", "--n", "2", "--s", "1.5"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "no_embedding");
}

#[test]
fn classify_reports_inadmissible_smoothness() {
    let o = orlicz(&["classify", "--young", "power:p=2", "--n", "1", "--s", "2.5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn malformed_input_exits_one_and_names_the_field() {
    let o = orlicz(&["classify", "--young", "power:q=2", "--n", "2", "--s", "0.5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid --young"));
    let o = orlicz(&["classify", "--young", "power:p=3", "--n", "2", "--s", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid --s"));
}

#[test]
fn sigma_table_csv_has_exact_endpoints_and_is_reproducible() {
    let args = ["sigma-table", "--young", "power:p=5", "--n", "2", "--s", "0.5", "--format", "csv", "--grid-decades", "3"];
    let a = stdout(&orlicz(&args));
    let b = stdout(&orlicz(&args));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("r,theta,rho,sigma,regime"));
    let rs: Vec<f64> = a.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rs.first(), Some(&1e-3));
    assert_eq!(rs.last(), Some(&1e3));
    assert_eq!(rs.len(), 25);
}

#[test]
fn conjugate_of_a_square_is_a_quarter_square() {
    let o = orlicz(&["conjugate", "--young", "power:p=2", "--grid-decades", "1", "--points-per-decade", "1", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[2] - v[0] * v[0] / 4.0).abs() <= 1e-6 * v[2].max(1.0), "{line}");
    }
}

#[test]
fn verify_examples_passes() {
    let o = orlicz(&["verify-examples", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn monte_carlo_needs_a_seed() {
    let base = ["seminorm", "--young", "power:p=2", "--n", "1", "--s", "0.5", "--estimator", "monte-carlo", "--samples", "20000"];
    let o = orlicz(&base);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid --seed"));
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "7"]);
    let a = orlicz(&seeded);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&orlicz(&seeded)));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("orlicz-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = orlicz(&["classify", "--young", "power:p=5", "--n", "2", "--s", "0.5", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("\"embedding\""));
}
