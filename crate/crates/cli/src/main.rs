use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use logconcave::{distance, realize, Measure, Metric, Reference};
use logconcave_cli::config::{parse_measure_spec, validate_config, Format, RunConfig, Suite, DEFAULT_SLACK};
use logconcave_cli::report::{emit, Report, Table};
use logconcave_cli::suites::{run, run_on};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical checks for one-dimensional log-concave measures.
#[derive(Parser)]
#[command(name = "lclab", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Clone)]
struct Flags {
    /// Grid size for every realized measure.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Output directory; one-shot verbs print to stdout without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Seed for the random pairs of the metric-chain suite.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative slack for certificate checks.
    #[arg(long, global = true)]
    slack: Option<f64>,
}

#[derive(Subcommand)]
enum Verb {
    /// Run every suite listed in a config file.
    Run { config: PathBuf },
    /// Oracle constants of one measure, e.g. `gaussian:0,1`.
    Constants { spec: String },
    /// Distances between two measures.
    Distance {
        a: String,
        b: String,
        /// One of tv, w1, bl, dudley, lp, wlp; all when omitted.
        #[arg(long)]
        metric: Option<String>,
    },
    /// Certificates for one measure, checked against its oracles.
    Bounds {
        spec: String,
        /// Reference measure; defaults to the standard gaussian and a smoothed copy.
        #[arg(long)]
        reference: Option<String>,
    },
    /// Parse and cross-check a config file.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn base_config(flags: &Flags) -> RunConfig {
    let mut grid = logconcave::GridRequest::default();
    if let Some(n) = flags.grid_n {
        grid.n = n;
    }
    RunConfig {
        measures: Vec::new(),
        grid,
        suites: Vec::new(),
        references: Vec::new(),
        out_dir: flags.out.clone().unwrap_or_else(|| PathBuf::from("lclab-out")),
        formats: formats(flags).unwrap_or(vec![Format::Csv]),
        seed: flags.seed.unwrap_or(0),
        slack: flags.slack.unwrap_or(DEFAULT_SLACK),
    }
}

fn formats(flags: &Flags) -> Option<Vec<Format>> {
    flags.format.as_deref().and_then(Format::parse).map(|f| vec![f])
}

fn measure(spec: &str, n: usize) -> Result<(String, logconcave::MeasureSpec, Measure)> {
    let s = parse_measure_spec(spec, n).map_err(anyhow::Error::msg).with_context(|| format!("measure `{spec}`"))?;
    let m = realize(&s).with_context(|| format!("realizing `{spec}`"))?;
    Ok((spec.to_string(), s, m))
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let flags = cli.flags;
    if let Some(s) = flags.slack {
        if !(0.0..1.0).contains(&s) {
            bail!("--slack must lie in [0, 1), got {s}");
        }
    }
    if let Some(n) = flags.grid_n {
        if n < 64 {
            bail!("--grid-n must be >= 64, got {n}");
        }
    }
    match cli.verb {
        Verb::Validate { config } => match validate_config(&config) {
            Ok(cfg) => {
                println!(
                    "ok: {} measure(s), {} suite(s), {} reference pair(s)",
                    cfg.measures.len(),
                    cfg.suites.len(),
                    cfg.references.len()
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => {
                eprint!("{e}");
                Ok(ExitCode::from(2))
            }
        },
        Verb::Run { config } => {
            let mut cfg = match validate_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprint!("{e}");
                    return Ok(ExitCode::from(2));
                }
            };
            if let Some(n) = flags.grid_n {
                cfg.grid.n = n;
                cfg.measures.iter_mut().for_each(|(_, s)| s.grid.n = n);
            }
            if let Some(dir) = &flags.out {
                cfg.out_dir = dir.clone();
            }
            if let Some(f) = formats(&flags) {
                cfg.formats = f;
            }
            cfg.seed = flags.seed.unwrap_or(cfg.seed);
            cfg.slack = flags.slack.unwrap_or(cfg.slack);
            let report = run(&cfg);
            let written = emit(&report, &cfg.out_dir, &cfg.formats)
                .with_context(|| format!("writing to {}", cfg.out_dir.display()))?;
            eprintln!("wrote {} file(s) to {}", written.len(), cfg.out_dir.display());
            Ok(finish(&report))
        }
        Verb::Constants { spec } => {
            let mut cfg = base_config(&flags);
            let (name, s, m) = measure(&spec, cfg.grid.n)?;
            cfg.measures.push((name.clone(), s));
            let report = run_on(Suite::Constants, vec![(name, m)], None, &cfg);
            output(&report, &flags)
        }
        Verb::Bounds { spec, reference } => {
            let mut cfg = base_config(&flags);
            let (name, s, m) = measure(&spec, cfg.grid.n)?;
            cfg.measures.push((name.clone(), s));
            let refs = match reference {
                Some(r) => Some(vec![Reference::new(&r, measure(&r, cfg.grid.n)?.2)]),
                None => None,
            };
            let report = run_on(Suite::Bounds, vec![(name, m)], refs.as_deref(), &cfg);
            output(&report, &flags)
        }
        Verb::Distance { a, b, metric } => {
            let cfg = base_config(&flags);
            let metrics = match metric {
                Some(s) => {
                    vec![Metric::parse(&s).with_context(|| format!("unknown metric `{s}`"))?]
                }
                None => Metric::ALL.to_vec(),
            };
            let (ma, mb) = (measure(&a, cfg.grid.n)?.2, measure(&b, cfg.grid.n)?.2);
            let mut t = Table::new("distance", &["metric", "value", "tolerance"]);
            for metric in metrics {
                let (v, tol) = distance(metric, &ma, &mb)?;
                t.push(vec![metric.as_str().into(), v.into(), tol.into()]);
            }
            let report = Report { tables: vec![t], slack: cfg.slack, ..Report::default() };
            output(&report, &flags)
        }
    }
}

fn finish(report: &Report) -> ExitCode {
    let n = report.failure_count();
    if n > 0 {
        eprintln!("{n} validity failure(s)");
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn output(report: &Report, flags: &Flags) -> Result<ExitCode> {
    let formats = formats(flags).unwrap_or(vec![Format::Csv]);
    if let Some(dir) = &flags.out {
        emit(report, dir, &formats).with_context(|| format!("writing to {}", dir.display()))?;
    } else {
        let mut out = std::io::stdout().lock();
        if formats.contains(&Format::Json) {
            writeln!(out, "{}", serde_json::to_string_pretty(&report.summary())?)?;
        } else {
            for t in &report.tables {
                writeln!(out, "# {}", t.name)?;
                out.write_all(&t.to_csv()?)?;
            }
        }
    }
    Ok(finish(report))
}
