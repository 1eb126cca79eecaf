use logconcave_cli::report::{fmt_num, Cell, Check, Report, Table};
use logconcave_cli::suites::{lp_bisection, run};
use logconcave_cli::{parse_config, Suite};
use std::path::Path;
use std::process::{Command, Output};

fn lclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lclab")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
}

const GAUSSIAN: &str = r#"
[grid]
n = 2048

[[measures]]
name = "g"
family = "gaussian"
mean = 0.0
sd = 1.0
"#;

#[test]
fn constants_row_for_the_standard_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("suites = [\"constants\"]\n{GAUSSIAN}"));
    let out = dir.path().join("out");
    let o = lclab(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(&out.join("constants.csv"));
    assert_eq!(rows[0].join(","), "measure,oracle_c_p,oracle_cheeger,sigma2,median");
    let cp: f64 = rows[1][1].parse().unwrap();
    let ch: f64 = rows[1][2].parse().unwrap();
    assert!((cp - 1.0).abs() < 1e-3, "{cp}");
    assert!((ch - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-3, "{ch}");
    // 12 significant digits
    assert_eq!(rows[1][1].split('e').next().unwrap().replace(['.', '-'], "").len(), 12);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["failure_count"], 0);
    assert_eq!(summary["metadata"]["grid"]["n"], 2048);
    assert!(summary["metadata"]["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn empty_suites_give_metadata_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GAUSSIAN);
    let out = dir.path().join("out");
    let o = lclab(&["run", &cfg, "--out", out.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files, vec!["summary.json"]);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["metadata"]["seed"], 5);
    assert_eq!(summary["tables"].as_object().unwrap().len(), 0);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = [\"nope\"]\n");
    let o = lclab(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("suites[0]"));
    let o = lclab(&["validate", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let good = write_config(dir.path(), GAUSSIAN);
    let o = lclab(&["validate", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok: 1 measure"));
}

#[test]
fn bounds_for_the_exponential() {
    let o = lclab(&["bounds", "exponential:1", "--grid-n", "1024"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# bounds"));
    assert_eq!(lines.next(), Some("measure,formula_id,value,oracle,tightness,preconditions,pass"));
    let rows: Vec<Vec<&str>> = lines.take_while(|l| !l.starts_with('#')).map(|l| l.split(',').collect()).collect();
    assert!(rows.len() > 100);
    // the only failures come from the W1 upper bound in terms of d_LP
    let failing: Vec<_> = rows.iter().filter(|r| r[6] == "false").collect();
    assert!(failing.iter().all(|r| r[1] == "lp_to_w1"), "{failing:?}");
    assert_eq!(o.status.code(), Some(if failing.is_empty() { 0 } else { 1 }));
    // every applicable certificate on the constants holds
    let applicable = rows.iter().filter(|r| r[0] == "exponential:1" && r[5] == "true");
    for r in applicable {
        let (v, o): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!(v >= o * 0.98, "{r:?}");
    }
}

#[test]
fn bounds_with_an_explicit_reference() {
    let o = lclab(&["bounds", "gaussian:0,1.2", "--reference", "gaussian:0,1", "--grid-n", "512", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["tables"]["bounds"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["measure"] == "gaussian:0,1.2|gaussian:0,1"));
    assert!(rows.iter().any(|r| r["formula_id"] == "density_ratio_classic"));
}

#[test]
fn distance_verb() {
    let o = lclab(&["distance", "gaussian:0,1", "gaussian:2,1", "--metric", "w1", "--grid-n", "1024"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0], "w1");
    assert!((row[1].parse::<f64>().unwrap() - 2.0).abs() < 1e-6);
    let o = lclab(&["distance", "gaussian:0,1", "gaussian:2,1", "--metric", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_verb_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = lclab(&["constants", "uniform:-1,1", "--grid-n", "2048", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let rows = read_csv(&dir.path().join("anchors.csv"));
    assert_eq!(rows[0].join(","), "measure,quantity,oracle,closed_form,rel_error,tolerance,pass");
    assert!(rows[1..].iter().all(|r| r[6] == "true"), "{rows:?}");
    assert!(lclab(&["constants", "uniform:1,1"]).status.code() == Some(2));
}

#[test]
fn distance_matrices_are_symmetric() {
    let cfg = parse_config(
        r#"
suites = ["distances"]
[grid]
n = 256
[[measures]]
name = "a"
family = "gaussian"
mean = 0.0
sd = 1.0
[[measures]]
name = "b"
family = "uniform"
a = -1.0
b = 2.0
[[measures]]
name = "c"
family = "exponential"
scale = 0.5
"#,
    )
    .unwrap();
    let report = run(&cfg);
    for metric in ["tv", "w1", "bl", "dudley", "levy_prokhorov", "wlp"] {
        let t = report.table(&format!("distances_{metric}")).expect(metric);
        assert_eq!(t.header, ["measure", "a", "b", "c"]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.rows[i][j + 1], t.rows[j][i + 1], "{metric}");
            }
            assert_eq!(t.rows[i][i + 1], Cell::Num(0.0));
        }
    }
}

#[test]
fn every_pass_fail_row_carries_its_slack() {
    let cfg = parse_config(&format!("suites = [\"constants\", \"mollification\", \"semigroup\"]\n{GAUSSIAN}")).unwrap();
    let report = run(&cfg);
    for t in &report.tables {
        if t.column("pass").is_none() {
            continue;
        }
        let has_slack = ["rel_slack", "tolerance"].iter().any(|c| t.column(c).is_some());
        let cert_table = t.column("formula_id").is_some();
        assert!(has_slack || cert_table, "{}", t.name);
    }
    assert_eq!(report.metadata["slack"], 0.02);
    assert_eq!(report.failure_count(), 0);
    assert_eq!(report.metadata["suite_wall_time_s"].as_object().unwrap().len(), 3);
}

#[test]
fn failing_certificate_rows_carry_their_chain() {
    let cfg = parse_config(
        r#"
suites = ["bounds"]
[grid]
n = 512
[[measures]]
name = "u"
family = "uniform"
a = -1.0
b = 1.0
"#,
    )
    .unwrap();
    let report = run(&cfg);
    let summary = report.summary();
    for f in summary["failures"].as_array().unwrap() {
        assert!(f["certificate"].is_object(), "{f}");
        assert_eq!(f["slack"], 0.02);
        assert_eq!(f["certificate"]["formula_id"], "lp_to_w1");
    }
    let bounds = report.table("bounds").unwrap();
    assert_eq!(report.certificates.len(), bounds.rows.len());
}

#[test]
fn suite_rows_keep_measure_order() {
    let cfg = parse_config(
        r#"
suites = ["constants"]
[grid]
n = 2048
[[measures]]
name = "z"
family = "gaussian"
mean = 0.0
sd = 3.0
[[measures]]
name = "a"
family = "uniform"
a = 0.0
b = 1.0
[[measures]]
name = "m"
family = "exponential"
scale = 1.0
"#,
    )
    .unwrap();
    let t = run(&cfg).table("constants").unwrap().clone();
    let names: Vec<_> = t.rows.iter().map(|r| r[0].render()).collect();
    assert_eq!(names, ["z", "a", "m"]);
}

#[test]
fn non_log_concave_measures_are_reported_not_fatal() {
    let cfg = parse_config(
        r#"
suites = ["constants", "bounds", "profiles"]
[grid]
n = 512
[[measures]]
name = "bimodal"
family = "mixture"
weights = [0.5, 0.5]
means = [-3.0, 3.0]
sds = [1.0, 1.0]
"#,
    )
    .unwrap();
    let report = run(&cfg);
    assert!(report.table("constants").unwrap().rows.is_empty());
    assert!(report.table("ledoux").unwrap().rows.is_empty());
    assert!(report.table("profile_checks").unwrap().rows.is_empty());
    assert_eq!(report.table("profiles").unwrap().rows.len(), 19);
    let errors = report.table("errors").expect("per-row errors");
    let suites: Vec<_> = errors.rows.iter().map(|r| r[0].render()).collect();
    assert_eq!(suites, ["constants", "bounds"]);
    assert_eq!(report.failure_count(), 0);
}

#[test]
fn number_format() {
    assert_eq!(fmt_num(1.0), "1.00000000000e0");
    assert_eq!(fmt_num(-0.0), fmt_num(0.0));
    assert_eq!(fmt_num(f64::INFINITY), "inf");
    assert_eq!(fmt_num(f64::NAN), "nan");
    assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359e0");
}

#[test]
fn csv_quoting_and_line_endings() {
    let mut t = Table::new("t", &["measure", "check", "pass"]);
    t.push(vec!["a,b".into(), "x \"y\"".into(), true.into()]);
    let bytes = t.to_csv().unwrap();
    assert_eq!(String::from_utf8(bytes).unwrap(), "measure,check,pass\n\"a,b\",\"x \"\"y\"\"\",true\n");
}

#[test]
fn checks_and_failures() {
    let c = Check::new("m", "lhs <= rhs", "", 1.01, 1.0).rel(0.02);
    assert!(c.pass());
    assert!(!Check::new("m", "lhs <= rhs", "", 1.03, 1.0).rel(0.02).pass());
    assert!(Check::new("m", "", "", 1.0, f64::INFINITY).pass());
    assert!(!Check::new("m", "", "", f64::NAN, 1.0).pass());
    let mut report = Report::default();
    report.tables.push(logconcave_cli::report::check_table("t", [c, Check::new("m", "x", "", 2.0, 1.0)]));
    assert_eq!(report.failure_count(), 1);
    assert_eq!(report.failures()[0].row, 1);
    assert_eq!(Suite::parse("metric_chain"), Some(Suite::MetricChain));
}

#[test]
fn lp_bisection_matches_the_integer_search() {
    use logconcave::metrics::{levy_prokhorov, CommonAtoms};
    use logconcave::{apply_affine, realize, Measure, MeasureSpec};
    let g: Measure = realize(&MeasureSpec::gaussian(0.0, 1.0).with_n(512)).unwrap();
    for shift in [0.0, 0.05, 0.3, 1.0, 4.0] {
        let h = apply_affine(&g, 1.2, shift).unwrap();
        let atoms = CommonAtoms::new(&g, &h);
        let (eps, iters) = lp_bisection(&atoms, 1e-4);
        let lp = levy_prokhorov(&g, &h).unwrap();
        assert!((eps - lp).abs() <= 1e-4, "shift {shift}: {eps} vs {lp}");
        assert!(iters <= 14);
    }
}
