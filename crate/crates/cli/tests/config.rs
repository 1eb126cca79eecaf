use logconcave::measure1d::Family;
use logconcave_cli::config::{parse_config, parse_measure_spec, validate_config, Format, Suite, DEFAULT_SLACK};

const GOOD: &str = r#"
seed = 7
suites = ["constants", "bounds"]

[grid]
n = 512

[[measures]]
name = "g"
family = "gaussian"
mean = 0.0
sd = 1.0

[[measures]]
name = "e"
family = "exponential"
scale = 2.0

[[references]]
nu = "e"
mu = "g"

[output]
dir = "out"
formats = ["csv"]
"#;

#[test]
fn well_formed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, GOOD).unwrap();
    let cfg = validate_config(&path).unwrap();
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.slack, DEFAULT_SLACK);
    assert_eq!(cfg.suites, vec![Suite::Constants, Suite::Bounds]);
    assert_eq!(cfg.grid.n, 512);
    assert_eq!(cfg.measures.len(), 2);
    assert!(cfg.measures.iter().all(|(_, s)| s.grid.n == 512));
    assert_eq!(cfg.measures[1].1.family, Family::ExponentialSymmetric { scale: 2.0 });
    assert_eq!(cfg.references, vec![("e".to_string(), "g".to_string())]);
    assert_eq!(cfg.formats, vec![Format::Csv]);
    assert_eq!(cfg.out_dir.to_str(), Some("out"));
}

#[test]
fn unknown_suite_names_the_field_and_line() {
    let text = GOOD.replace(r#""bounds"]"#, r#""bounds", "nonsense"]"#);
    let err = parse_config(&text).unwrap_err();
    assert_eq!(err.diagnostics.len(), 1, "{err}");
    let d = &err.diagnostics[0];
    assert_eq!(d.field, "suites[2]");
    assert!(d.message.contains("nonsense"));
    assert_eq!(d.line, Some(3));
}

#[test]
fn undefined_reference_lists_the_missing_name() {
    let text = GOOD.replace(r#"mu = "g""#, r#"mu = "ghost""#);
    let err = parse_config(&text).unwrap_err();
    let d = err.diagnostics.iter().find(|d| d.field == "references[0].mu").expect("diagnostic");
    assert!(d.message.contains("ghost"));
    assert!(d.line.is_some());
}

#[test]
fn every_error_is_reported() {
    let text = r#"
suites = ["constants", "bogus"]
slack = 2.0
colour = "red"

[grid]
n = 16

[[measures]]
name = "g"
family = "gaussian"
mean = 0.0
sd = -1.0

[[measures]]
family = "uniform"
a = 0.0
b = 1.0

[[references]]
nu = "g"
mu = "missing"
"#;
    let err = parse_config(text).unwrap_err();
    let fields: Vec<&str> = err.diagnostics.iter().map(|d| d.field.as_str()).collect();
    for want in ["colour", "grid.n", "suites[1]", "measures[0] (g)", "measures[1].name", "references[0].mu", "slack"] {
        assert!(fields.contains(&want), "missing {want} in {fields:?}");
    }
    let text = err.to_string();
    assert!(text.contains("line 7: grid.n"), "{text}");
}

#[test]
fn duplicate_names_and_bad_families() {
    let text = r#"
[[measures]]
name = "a"
family = "gaussian"
mean = 0.0
sd = 1.0

[[measures]]
name = "a"
family = "uniform"
a = 0.0
b = 1.0

[[measures]]
name = "b"
family = "cauchy"
"#;
    let err = parse_config(text).unwrap_err();
    assert_eq!(err.diagnostics.len(), 2, "{err}");
    assert!(err.diagnostics[0].message.contains("duplicate"));
    assert_eq!(err.diagnostics[1].field, "measures[2] (b)");
}

#[test]
fn syntax_errors_carry_a_line() {
    let err = parse_config("suites = [\n\"constants\"\nseed = 1\n").unwrap_err();
    assert_eq!(err.diagnostics.len(), 1);
    assert!(err.diagnostics[0].line.is_some());
}

#[test]
fn empty_document_is_valid() {
    let cfg = parse_config("").unwrap();
    assert!(cfg.suites.is_empty() && cfg.measures.is_empty());
    assert_eq!(cfg.formats, vec![Format::Csv, Format::Json]);
}

#[test]
fn missing_file_is_a_config_error() {
    let err = validate_config(std::path::Path::new("/nonexistent/run.toml")).unwrap_err();
    assert_eq!(err.diagnostics.len(), 1);
}

#[test]
fn compact_measure_syntax() {
    let g = parse_measure_spec("gaussian:1,2", 256).unwrap();
    assert_eq!(g.family, Family::Gaussian { mean: 1.0, sd: 2.0 });
    assert_eq!(g.grid.n, 256);
    let r = parse_measure_spec("radial:3,2,1", 256).unwrap();
    assert_eq!(r.family, Family::Radial { dim: 3, power: 2.0, scale: 1.0 });
    let m = parse_measure_spec("mixture:0.5/-1/1;0.5/1/1", 256).unwrap();
    assert!(matches!(m.family, Family::GaussianMixture { ref weights, .. } if weights.len() == 2));
    for bad in ["gaussian", "gaussian:1", "gaussian:0,-1", "radial:2.5,1,1", "poisson:1", "uniform:a,b"] {
        assert!(parse_measure_spec(bad, 256).is_err(), "{bad}");
    }
    assert!(parse_measure_spec("uniform:0,1", 32).is_err());
}
