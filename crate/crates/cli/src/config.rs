//! Run configuration: TOML parsing and cross-checks that report every
//! problem at once.

use logconcave::measure1d::{Family, GridRequest, MeasureSpec};
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use toml::{Spanned, Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Constants,
    Profiles,
    Distances,
    Bounds,
    Transference,
    Mollification,
    MetricChain,
    Semigroup,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Constants,
        Suite::Profiles,
        Suite::Distances,
        Suite::Bounds,
        Suite::Transference,
        Suite::Mollification,
        Suite::MetricChain,
        Suite::Semigroup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Profiles => "profiles",
            Suite::Distances => "distances",
            Suite::Bounds => "bounds",
            Suite::Transference => "transference",
            Suite::Mollification => "mollification",
            Suite::MetricChain => "metric_chain",
            Suite::Semigroup => "semigroup",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub measures: Vec<(String, MeasureSpec)>,
    pub grid: GridRequest,
    pub suites: Vec<Suite>,
    /// `(nu, mu)` names for the transference suite.
    pub references: Vec<(String, String)>,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    pub seed: u64,
    pub slack: f64,
}

pub const DEFAULT_SLACK: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub struct ConfigError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s))", self.diagnostics.len())?;
        for d in &self.diagnostics {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

pub fn validate_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        diagnostics: vec![Diagnostic { line: None, field: path.display().to_string(), message: e.to_string() }],
    })?;
    parse_config(&text)
}

struct Collector<'a> {
    text: &'a str,
    out: Vec<Diagnostic>,
}

impl Collector<'_> {
    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn at<T>(&mut self, span: &Spanned<T>, field: impl Into<String>, message: impl Into<String>) {
        let line = Some(self.line_of(span.span().start));
        self.out.push(Diagnostic { line, field: field.into(), message: message.into() });
    }

    fn plain(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.out.push(Diagnostic { line: None, field: field.into(), message: message.into() });
    }
}

const TOP_KEYS: [&str; 7] = ["measures", "grid", "suites", "references", "output", "seed", "slack"];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Spanned<Table> = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        ConfigError { diagnostics: vec![Diagnostic { line, field: "<document>".into(), message: e.message().into() }] }
    })?;
    let mut c = Collector { text, out: Vec::new() };
    let root = root.into_inner();
    for key in root.keys() {
        if !TOP_KEYS.contains(&key.as_str()) {
            c.plain(key.clone(), "unknown field");
        }
    }
    // re-read with spans on the parts that cross-reference
    let spans: SpannedDoc = toml::from_str(text).unwrap_or_default();

    let mut grid = GridRequest::default();
    if let Some(g) = root.get("grid") {
        match g {
            Value::Table(t) => {
                for (k, v) in t {
                    match (k.as_str(), v) {
                        ("n", Value::Integer(n)) if *n >= 64 => grid.n = *n as usize,
                        ("n", v) => c.plain("grid.n", format!("must be an integer >= 64, got {v}")),
                        ("tail_mass", Value::Float(x)) if *x > 0.0 && *x <= 1e-10 => grid.tail_mass = *x,
                        ("tail_mass", v) => c.plain("grid.tail_mass", format!("must lie in (0, 1e-10], got {v}")),
                        (k, _) => c.plain(format!("grid.{k}"), "unknown field"),
                    }
                }
            }
            _ => c.plain("grid", "must be a table"),
        }
    }
    if let Some(n) = &spans.grid.as_ref().and_then(|g| g.n.clone()) {
        if *n.get_ref() < 64 {
            // already reported above; attach the line
            c.out.retain(|d| d.field != "grid.n");
            c.at(n, "grid.n", format!("must be an integer >= 64, got {}", n.get_ref()));
        }
    }

    let mut suites = Vec::new();
    for (k, s) in spans.suites.iter().enumerate() {
        match Suite::parse(s.get_ref()) {
            Some(x) if !suites.contains(&x) => suites.push(x),
            Some(_) => c.at(s, format!("suites[{k}]"), format!("duplicate suite `{}`", s.get_ref())),
            None => c.at(
                s,
                format!("suites[{k}]"),
                format!(
                    "unknown suite `{}` (expected one of {})",
                    s.get_ref(),
                    Suite::ALL.map(|x| x.as_str()).join(", ")
                ),
            ),
        }
    }
    if root.get("suites").is_some_and(|v| !v.is_array()) {
        c.plain("suites", "must be an array of strings");
    }

    let mut measures: Vec<(String, MeasureSpec)> = Vec::new();
    for (k, entry) in spans.measures.iter().enumerate() {
        let field = format!("measures[{k}]");
        let mut table = entry.get_ref().clone();
        let name = match table.remove("name") {
            Some(Value::String(s)) if !s.is_empty() => s,
            _ => {
                c.at(entry, format!("{field}.name"), "missing or empty name");
                continue;
            }
        };
        if measures.iter().any(|(n, _)| *n == name) {
            c.at(entry, format!("{field}.name"), format!("duplicate measure name `{name}`"));
            continue;
        }
        match Value::Table(table).try_into::<Family>() {
            Ok(family) => {
                let spec = MeasureSpec { family, grid };
                match spec.validate() {
                    Ok(()) => measures.push((name, spec)),
                    Err(e) => c.at(entry, format!("{field} ({name})"), e.to_string()),
                }
            }
            Err(e) => c.at(entry, format!("{field} ({name})"), e.message().trim().to_string()),
        }
    }

    let mut references = Vec::new();
    for (k, r) in spans.references.iter().enumerate() {
        let mut ok = true;
        for (side, name) in [("nu", &r.nu), ("mu", &r.mu)] {
            if !spans.measures.iter().any(|m| m.get_ref().get("name").and_then(Value::as_str) == Some(name.get_ref())) {
                c.at(name, format!("references[{k}].{side}"), format!("undefined measure `{}`", name.get_ref()));
                ok = false;
            }
        }
        if ok {
            references.push((r.nu.get_ref().clone(), r.mu.get_ref().clone()));
        }
    }
    if root.get("references").is_some() && spans.references.is_empty() && !is_empty_array(root.get("references")) {
        c.plain("references", "must be an array of tables with `nu` and `mu`");
    }

    let mut out_dir = PathBuf::from("lclab-out");
    let mut formats = vec![Format::Csv, Format::Json];
    if let Some(o) = root.get("output") {
        match o {
            Value::Table(t) => {
                for (k, v) in t {
                    match (k.as_str(), v) {
                        ("dir", Value::String(s)) => out_dir = PathBuf::from(s),
                        ("formats", Value::Array(a)) => {
                            let parsed: Vec<Option<Format>> =
                                a.iter().map(|v| v.as_str().and_then(Format::parse)).collect();
                            if parsed.iter().any(Option::is_none) {
                                c.plain("output.formats", "entries must be \"csv\" or \"json\"");
                            } else {
                                formats = parsed.into_iter().flatten().collect();
                            }
                        }
                        (k, _) => c.plain(format!("output.{k}"), "unknown field or wrong type"),
                    }
                }
            }
            _ => c.plain("output", "must be a table"),
        }
    }

    let seed = match root.get("seed") {
        None => 0,
        Some(Value::Integer(s)) if *s >= 0 => *s as u64,
        Some(v) => {
            c.plain("seed", format!("must be a nonnegative integer, got {v}"));
            0
        }
    };
    let slack = match root.get("slack") {
        None => DEFAULT_SLACK,
        Some(Value::Float(s)) if (0.0..1.0).contains(s) => *s,
        Some(v) => {
            c.plain("slack", format!("must be a float in [0, 1), got {v}"));
            DEFAULT_SLACK
        }
    };

    if !c.out.is_empty() {
        return Err(ConfigError { diagnostics: c.out });
    }
    Ok(RunConfig { measures, grid, suites, references, out_dir, formats, seed, slack })
}

fn is_empty_array(v: Option<&Value>) -> bool {
    matches!(v, Some(Value::Array(a)) if a.is_empty())
}

/// The parts of the document that diagnostics point back into.
#[derive(Debug, Default, serde::Deserialize)]
struct SpannedDoc {
    #[serde(default)]
    suites: Vec<Spanned<String>>,
    #[serde(default)]
    measures: Vec<Spanned<Table>>,
    #[serde(default)]
    references: Vec<SpannedRef>,
    #[serde(default)]
    grid: Option<SpannedGrid>,
}

#[derive(Debug, serde::Deserialize)]
struct SpannedRef {
    nu: Spanned<String>,
    mu: Spanned<String>,
}

#[derive(Debug, Default, serde::Deserialize)]
struct SpannedGrid {
    n: Option<Spanned<i64>>,
}

/// Compact measure syntax for the one-shot verbs:
/// `gaussian:MEAN,SD`, `exponential:SCALE`, `uniform:A,B`,
/// `radial:DIM,POWER,SCALE`, `mixture:W/M/S;W/M/S...`.
pub fn parse_measure_spec(s: &str, n: usize) -> Result<MeasureSpec, String> {
    let (family, args) = s.split_once(':').ok_or_else(|| format!("expected FAMILY:ARGS, got `{s}`"))?;
    let nums = |a: &str| -> Result<Vec<f64>, String> {
        a.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}`: {e}"))).collect()
    };
    let want = |v: Vec<f64>, k: usize| -> Result<Vec<f64>, String> {
        if v.len() == k {
            Ok(v)
        } else {
            Err(format!("{family} takes {k} argument(s), got {}", v.len()))
        }
    };
    let spec = match family {
        "gaussian" => {
            let v = want(nums(args)?, 2)?;
            MeasureSpec::gaussian(v[0], v[1])
        }
        "exponential" => MeasureSpec::exponential(want(nums(args)?, 1)?[0]),
        "uniform" => {
            let v = want(nums(args)?, 2)?;
            MeasureSpec::uniform(v[0], v[1])
        }
        "radial" => {
            let v = want(nums(args)?, 3)?;
            if v[0] < 1.0 || v[0].fract() != 0.0 {
                return Err(format!("radial dimension must be a positive integer, got {}", v[0]));
            }
            MeasureSpec::radial(v[0] as u32, v[1], v[2])
        }
        "mixture" => {
            let (mut w, mut m, mut sd) = (Vec::new(), Vec::new(), Vec::new());
            for comp in args.split(';') {
                let v: Vec<f64> = comp
                    .split('/')
                    .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}`: {e}")))
                    .collect::<Result<_, _>>()?;
                let v = want(v, 3)?;
                w.push(v[0]);
                m.push(v[1]);
                sd.push(v[2]);
            }
            MeasureSpec::mixture(w, m, sd)
        }
        other => return Err(format!("unknown family `{other}`")),
    };
    let spec = spec.with_n(n);
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}
