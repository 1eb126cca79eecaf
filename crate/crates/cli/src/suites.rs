//! Suite runners. Each suite fans out over measures with rayon and
//! collects rows in input order.

use crate::config::{RunConfig, Suite};
use crate::report::{check_table, Cell, Check, Report, Table};
use logconcave::bounds::{candidates, chain_label, default_references, validity_sweep, DISTANCE_NOISE};
use logconcave::measure1d::Family;
use logconcave::metrics::{band_flow, bl_dud, levy_prokhorov, tv, w1, w_lp_with_tolerance, CommonAtoms};
use logconcave::oracle::{
    brute_force_concentration, brute_force_isoperimetric, concentration_at, fradelizi_tail, isoperimetric_at,
};
use logconcave::semigroup::WITNESS_THRESHOLD;
use logconcave::{
    apply_affine, cheeger_constant, convolve_gaussian, evaluate, isoperimetric_profile, kyfan, non_contraction_witness,
    ou_evolve, realize, scale_mix, spectral_poincare, truncate, verify_against_oracle, BlKind, BoundCertificate,
    Context, CouplingPlan, DistanceReport, Inputs, Measure, MeasureSpec, Metric, Reference, Target,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::f64::consts::PI;
use std::time::Instant;

pub const CERT_HEADER: [&str; 7] = ["measure", "formula_id", "value", "oracle", "tightness", "preconditions", "pass"];

/// Random pairs drawn by the metric-chain suite.
pub const CHAIN_PAIRS: usize = 20;
/// Target accuracy of the continuous `d_LP` bisection.
pub const LP_BISECTION_TOL: f64 = 1e-4;
/// Agreement required between `W1` of translated pairs and `e^{-T/2} W1`.
pub const TRANSLATION_TOL: f64 = 1e-3;
pub const OU_TIMES: [f64; 3] = [0.25, 1.0, 4.0];
/// Relative quadrature error allowed on contraction inequalities.
pub const QUADRATURE_REL: f64 = 1e-4;
pub const LAMBDAS: [f64; 3] = [0.25, 0.5, 0.9];

const ANCHOR_HEADER: [&str; 7] = ["measure", "quantity", "oracle", "closed_form", "rel_error", "tolerance", "pass"];

type Realized = (String, Result<Measure, String>);

/// Per-row failures that are not validity verdicts.
#[derive(Default)]
struct Errors(Vec<(String, String, String)>);

impl Errors {
    fn push(&mut self, suite: Suite, measure: &str, message: impl ToString) {
        self.0.push((suite.as_str().into(), measure.into(), message.to_string()));
    }
}

struct CertRows {
    table: Table,
    certs: Vec<BoundCertificate>,
    slack: f64,
}

impl CertRows {
    fn new(name: &str, slack: f64) -> Self {
        Self { table: Table::new(name, &CERT_HEADER), certs: Vec::new(), slack }
    }

    fn push(&mut self, measure: &str, cert: BoundCertificate, oracle: f64) {
        let floor = if cert.target == Target::Distance { DISTANCE_NOISE } else { 0.0 };
        let (pass, tightness) = match verify_against_oracle(&cert, oracle, self.slack) {
            Ok(v) => (v.pass || cert.value >= oracle - floor, v.tightness),
            Err(_) => (true, f64::INFINITY),
        };
        self.table.push(vec![
            measure.into(),
            chain_label(&cert).into(),
            cert.value.into(),
            oracle.into(),
            tightness.into(),
            cert.preconditions_met.into(),
            pass.into(),
        ]);
        self.certs.push(cert);
    }

    fn into_report(self, report: &mut Report) {
        let name = self.table.name.clone();
        report.certificates.extend(self.certs.into_iter().enumerate().map(|(i, c)| (name.clone(), i, c)));
        report.tables.push(self.table);
    }
}

pub fn realize_all(cfg: &RunConfig) -> Vec<Realized> {
    cfg.measures
        .par_iter()
        .map(|(name, spec)| (name.clone(), realize::<f64>(spec).map_err(|e| e.to_string())))
        .collect()
}

fn ok_measures(ms: &[Realized]) -> Vec<(&str, &Measure)> {
    ms.iter().filter_map(|(n, m)| m.as_ref().ok().map(|m| (n.as_str(), m))).collect()
}

fn gaussian(n: usize) -> logconcave::Result<Measure> {
    realize(&MeasureSpec::gaussian(0.0, 1.0).with_n(n))
}

/// Realizes the measures, runs every selected suite and assembles the
/// report. Emission is separate.
pub fn run(cfg: &RunConfig) -> Report {
    let start = Instant::now();
    let mut report = Report { slack: cfg.slack, ..Report::default() };
    let mut errors = Errors::default();
    let measures = if cfg.suites.is_empty() { Vec::new() } else { realize_all(cfg) };
    for (name, m) in &measures {
        if let Err(e) = m {
            errors.push(Suite::Constants, name, format!("realization failed: {e}"));
        }
    }
    let mut times = Map::new();
    for &suite in &cfg.suites {
        let t0 = Instant::now();
        match suite {
            Suite::Constants => constants(&measures, cfg, &mut report, &mut errors),
            Suite::Profiles => profiles(&measures, &mut report, &mut errors),
            Suite::Distances => distances(&measures, &mut report, &mut errors),
            Suite::Bounds => bounds(&measures, None, cfg.slack, &mut report, &mut errors),
            Suite::Transference => transference(&measures, cfg, &mut report, &mut errors),
            Suite::Mollification => mollification(&measures, cfg.slack, &mut report, &mut errors),
            Suite::MetricChain => metric_chain(cfg, &mut report, &mut errors),
            Suite::Semigroup => semigroup(&measures, cfg.grid.n, &mut report, &mut errors),
        }
        times.insert(suite.as_str().into(), json!(t0.elapsed().as_secs_f64()));
    }
    if !errors.0.is_empty() {
        let mut t = Table::new("errors", &["suite", "measure", "message"]);
        for (s, m, e) in errors.0 {
            t.push(vec![s.into(), m.into(), e.into()]);
        }
        report.tables.push(t);
    }
    report.metadata = metadata(cfg, start.elapsed().as_secs_f64());
    report.metadata.insert("suite_wall_time_s".into(), Value::Object(times));
    report
}

fn metadata(cfg: &RunConfig, wall: f64) -> Map<String, Value> {
    let v = json!({
        "grid": { "n": cfg.grid.n, "tail_mass": cfg.grid.tail_mass },
        "seed": cfg.seed,
        "slack": cfg.slack,
        "suites": cfg.suites.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        "measures": cfg.measures.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "tolerances": {
            "certificate_rel_slack": cfg.slack,
            "distance_noise": DISTANCE_NOISE,
            "metric_chain": "2 x solver tolerance (absolute)",
            "lp_bisection": LP_BISECTION_TOL,
            "translation_equality": TRANSLATION_TOL,
            "profile_concavity": "1e-6 x max profile",
            "brute_force": "2% relative on 128 nodes",
            "fradelizi": 1e-6,
        },
        "versions": { "logconcave": logconcave::VERSION, "lclab": env!("CARGO_PKG_VERSION") },
        "scope": "one-dimensional measures; dimension-dependent statements (thin shell, ln^2 n, KLS) enter only through \
                  the tensorization identity and the truncation and tail evaluators",
        "wall_time_s": wall,
    });
    match v {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

/// `(C_P, C'_C)` in closed form, when the family has one.
fn closed_form(spec: &MeasureSpec) -> Option<(f64, f64, f64)> {
    let pi = std::f64::consts::PI;
    match spec.family {
        Family::Gaussian { sd, .. } => Some((sd * sd, sd * (pi / 2.0).sqrt(), 1e-3)),
        Family::ExponentialSymmetric { scale } => Some((4.0 * scale * scale, scale, 0.02)),
        Family::Uniform { a, b } => Some(((b - a).powi(2) / (pi * pi), (b - a) / 2.0, 1e-3)),
        _ => None,
    }
}

fn constants(ms: &[Realized], cfg: &RunConfig, report: &mut Report, errors: &mut Errors) {
    let results: Vec<_> = ok_measures(ms)
        .into_par_iter()
        .map(|(name, m)| {
            let c = spectral_poincare(m).map(|r| r.c_p).and_then(|cp| Ok((cp, cheeger_constant(m)?)));
            (name, m, c)
        })
        .collect();
    let mut table = Table::new("constants", &["measure", "oracle_c_p", "oracle_cheeger", "sigma2", "median"]);
    let mut anchors = Table::new("anchors", &ANCHOR_HEADER);
    let mut ledoux = Vec::new();
    for (name, m, c) in results {
        let (cp, ch) = match c {
            Ok(v) => v,
            Err(e) => {
                errors.push(Suite::Constants, name, e);
                continue;
            }
        };
        table.push(vec![name.into(), cp.into(), ch.into(), m.variance().into(), m.median().into()]);
        let spec = cfg.measures.iter().find(|(n, _)| n == name).map(|(_, s)| s);
        if let Some((cp0, ch0, tol)) = spec.and_then(closed_form) {
            for (q, got, want) in [("c_p", cp, cp0), ("cheeger", ch, ch0)] {
                let err = (got / want - 1.0).abs();
                anchors.push(vec![
                    name.into(),
                    q.into(),
                    got.into(),
                    want.into(),
                    err.into(),
                    tol.into(),
                    (err <= tol).into(),
                ]);
            }
        }
        if m.is_log_concave() {
            let s = cfg.slack;
            ledoux.push(Check::new(name, "c_p <= 4 cheeger^2", "", cp, 4.0 * ch * ch).rel(s));
            ledoux.push(
                Check::new(name, "cheeger <= (16/pi) sqrt(c_p)", "", ch, 16.0 / std::f64::consts::PI * cp.sqrt())
                    .rel(s),
            );
            ledoux.push(Check::new(name, "cheeger^2 <= 36 c_p", "", ch * ch, 36.0 * cp).rel(s));
        }
    }
    report.tables.push(table);
    report.tables.push(anchors);
    report.tables.push(check_table("ledoux", ledoux));
}

fn profiles(ms: &[Realized], report: &mut Report, errors: &mut Errors) {
    let per: Vec<_> = ok_measures(ms)
        .into_par_iter()
        .map(|(name, m)| {
            let mut values = Vec::new();
            let sd = m.variance().sqrt();
            for k in 1..=10 {
                let u = 0.05 * k as f64;
                values.push((name, "isoperimetric", u, isoperimetric_at(m, u)));
            }
            for k in 0..=8 {
                let r = 0.25 * k as f64 * sd;
                values.push((name, "concentration", r, concentration_at(m, r)));
            }
            let mut checks = Vec::new();
            let mut errs = Vec::new();
            if m.is_log_concave() {
                match isoperimetric_profile(m, 200) {
                    Ok(p) => {
                        let top = p.values.iter().copied().fold(0.0, f64::max);
                        checks.push(
                            Check::new(name, "isoperimetric_concavity", "(0,1/2]", p.concavity_defect(), 0.0)
                                .abs(1e-6 * top),
                        );
                    }
                    Err(e) => errs.push(e.to_string()),
                }
                match m.with_nodes(128) {
                    Ok(coarse) => {
                        for u in [0.05, 0.15, 0.3, 0.45, 0.5] {
                            let half = isoperimetric_at(&coarse, u);
                            let brute = brute_force_isoperimetric(&coarse, u);
                            let err = (brute / half - 1.0).abs();
                            checks.push(
                                Check::new(name, "brute_isoperimetric_rel_error", format!("u={u}"), err, 0.0).abs(0.02),
                            );
                        }
                        let sd = coarse.variance().sqrt();
                        for r in [0.1, 0.5, 1.0, 2.0] {
                            let half = concentration_at(&coarse, r * sd);
                            let brute = brute_force_concentration(&coarse, r * sd);
                            checks.push(
                                Check::new(
                                    name,
                                    "brute_concentration_error",
                                    format!("r={r}sd"),
                                    (brute - half).abs(),
                                    0.0,
                                )
                                .abs(0.02 * half.max(1e-12)),
                            );
                        }
                    }
                    Err(e) => errs.push(e.to_string()),
                }
                for (ck, c) in [("0.5sd", 0.5 * sd), ("sd", sd), ("2sd", 2.0 * sd)] {
                    for t in [1.0, 1.5, 2.0, 3.0] {
                        let (lhs, rhs) = fradelizi_tail(m, c, t);
                        checks.push(Check::new(name, "fradelizi_tail", format!("c={ck} t={t}"), lhs, rhs).abs(1e-6));
                    }
                }
            }
            (values, checks, errs, name)
        })
        .collect();
    let mut table = Table::new("profiles", &["measure", "kind", "abscissa", "value"]);
    let mut checks = Vec::new();
    for (values, c, errs, name) in per {
        for (n, k, x, v) in values {
            table.push(vec![n.into(), k.into(), x.into(), v.into()]);
        }
        checks.extend(c);
        for e in errs {
            errors.push(Suite::Profiles, name, e);
        }
    }
    report.tables.push(table);
    report.tables.push(check_table("profile_checks", checks));
}

fn distances(ms: &[Realized], report: &mut Report, errors: &mut Errors) {
    let ok = ok_measures(ms);
    let ids: Vec<String> = ok.iter().map(|(n, _)| n.to_string()).collect();
    let measures: Vec<Measure> = ok.iter().map(|(_, m)| (*m).clone()).collect();
    let reports: Vec<_> =
        Metric::ALL.par_iter().map(|&metric| (metric, DistanceReport::compute(&ids, &measures, metric))).collect();
    for (metric, r) in reports {
        match r {
            Ok(r) => {
                let mut header = vec!["measure"];
                header.extend(ids.iter().map(String::as_str));
                let mut t = Table::new(&format!("distances_{}", metric.as_str()), &header);
                for (id, row) in ids.iter().zip(&r.matrix) {
                    let mut cells: Vec<Cell> = vec![id.clone().into()];
                    cells.extend(row.iter().map(|&x| Cell::from(x)));
                    t.push(cells);
                }
                report.tables.push(t);
            }
            Err(e) => errors.push(Suite::Distances, metric.as_str(), e),
        }
    }
}

/// The bounds suite; `refs` replaces the default references when given.
fn bounds(ms: &[Realized], refs: Option<&[Reference]>, slack: f64, report: &mut Report, errors: &mut Errors) {
    let per: Vec<_> = ok_measures(ms)
        .into_par_iter()
        .map(|(name, m)| {
            let refs = match refs {
                Some(r) => Ok(r.to_vec()),
                None => default_references(m),
            };
            (name, refs.and_then(|r| validity_sweep(name, m, &r, slack)))
        })
        .collect();
    let mut rows = CertRows::new("bounds", slack);
    for (name, r) in per {
        match r {
            Ok(sweep) => {
                for row in sweep {
                    rows.push(&row.subject, row.certificate, row.oracle);
                }
            }
            Err(e) => errors.push(Suite::Bounds, name, e),
        }
    }
    rows.into_report(report);
}

fn transference(ms: &[Realized], cfg: &RunConfig, report: &mut Report, errors: &mut Errors) {
    let lookup = |n: &str| ms.iter().find(|(m, _)| m == n).and_then(|(_, m)| m.as_ref().ok());
    let per: Vec<_> = cfg
        .references
        .par_iter()
        .map(|(nu, mu)| {
            let label = format!("{nu}|{mu}");
            let (Some(a), Some(b)) = (lookup(nu), lookup(mu)) else {
                return (label, Err("measure not realized".to_string()));
            };
            let ctx =
                Context { own_profiles: false, own_constants: false, references: vec![Reference::new(mu, b.clone())] };
            let run = || -> logconcave::Result<Vec<(BoundCertificate, f64)>> {
                let (cp, ch) = (spectral_poincare(a)?.c_p, cheeger_constant(a)?);
                let mut out = Vec::new();
                for (target, oracle) in [(Target::CheegerMedian, ch), (Target::PoincareConstant, cp)] {
                    out.extend(candidates(target, a, &ctx)?.into_iter().map(|c| (c, oracle)));
                }
                Ok(out)
            };
            (label, run().map_err(|e| e.to_string()))
        })
        .collect();
    let mut rows = CertRows::new("transference", cfg.slack);
    for (label, r) in per {
        match r {
            Ok(certs) => certs.into_iter().for_each(|(c, o)| rows.push(&label, c, o)),
            Err(e) => errors.push(Suite::Transference, &label, e),
        }
    }
    rows.into_report(report);
}

fn mollification(ms: &[Realized], slack: f64, report: &mut Report, errors: &mut Errors) {
    let per: Vec<_> = ok_measures(ms)
        .into_par_iter()
        .map(|(name, m)| {
            let run = || -> logconcave::Result<Vec<(String, BoundCertificate, f64)>> {
                let cp = spectral_poincare(m)?.c_p;
                let gauss_cp = 1.0;
                let lc = m.is_log_concave();
                let mut out = Vec::new();
                for lambda in LAMBDAS {
                    let mixed = spectral_poincare(&scale_mix(m, lambda)?)?.c_p;
                    let label = format!("{name}@lambda={lambda}");
                    let inp = Inputs::new().log_concave(lc, true).with("lambda", lambda);
                    out.push((label.clone(), evaluate("demollification", &inp.clone().with("c_p_mixed", mixed))?, cp));
                    let fwd = inp.with("c_p_z", cp).with("c_p_x", gauss_cp);
                    out.push((label, evaluate("mollification_mix", &fwd)?, mixed));
                }
                Ok(out)
            };
            (name, run())
        })
        .collect();
    let mut rows = CertRows::new("mollification", slack);
    for (name, r) in per {
        match r {
            Ok(v) => v.into_iter().for_each(|(label, c, o)| rows.push(&label, c, o)),
            Err(e) => errors.push(Suite::Mollification, name, e),
        }
    }
    rows.into_report(report);
}

/// Random log-concave measure: an affine image of one of five shapes.
pub fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> logconcave::Result<Measure> {
    let shift = rng.random_range(-1.5..1.5);
    let scale = rng.random_range(0.4..2.0);
    let base = match rng.random_range(0..5) {
        0 => gaussian(n)?,
        1 => realize(&MeasureSpec::exponential(1.0).with_n(n))?,
        2 => realize(&MeasureSpec::uniform(-1.0, 1.0).with_n(n))?,
        3 => truncate(&gaussian(n)?, -0.5, 2.0, false)?,
        _ => convolve_gaussian(&realize(&MeasureSpec::uniform(-1.0, 1.0).with_n(n))?, 0.3)?,
    };
    apply_affine(&base, scale, shift)
}

/// Continuous bisection on `eps` for `d_LP` on the common lattice:
/// `eps` is feasible iff the mass off the band of half-width
/// `floor(eps / h)` steps is at most `eps`.
pub fn lp_bisection(atoms: &CommonAtoms, tol: f64) -> (f64, usize) {
    let total = atoms.a.iter().sum::<f64>().min(atoms.b.iter().sum::<f64>());
    let feasible = |eps: f64| {
        let k = ((eps / atoms.step).floor() as usize).min(atoms.len());
        total - band_flow(&atoms.a, &atoms.b, k) <= eps
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut iters = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
    }
    (hi, iters)
}

#[derive(Clone, Debug)]
pub struct ChainDistances {
    pub tv: f64,
    pub w1: f64,
    pub bl: f64,
    pub dud: f64,
    pub lp: f64,
    pub wlp: f64,
    pub tol: f64,
    pub lp_bisection: f64,
    pub kyfan: f64,
    pub kyfan_star: f64,
    pub independent_gap: f64,
}

pub fn chain_distances(a: &Measure, b: &Measure) -> logconcave::Result<ChainDistances> {
    let (wlp, wtol) = w_lp_with_tolerance(a, b)?;
    let atoms = CommonAtoms::new(a, b);
    let plan = CouplingPlan::independent(a, b, 256);
    let (k, ks) = kyfan(&plan);
    Ok(ChainDistances {
        tv: tv(a, b)?,
        w1: w1(a, b)?,
        bl: bl_dud(a, b, BlKind::Bl)?,
        dud: bl_dud(a, b, BlKind::Dudley)?,
        lp: levy_prokhorov(a, b)?,
        wlp,
        tol: atoms.step.max(wtol),
        lp_bisection: lp_bisection(&atoms, LP_BISECTION_TOL).0,
        kyfan: k,
        kyfan_star: ks,
        independent_gap: plan.cost_value,
    })
}

fn lp_w1_rhs(d: f64) -> f64 {
    if d < 1.0 {
        d * (1.0 + 2.0 * d / (1.0 / d).ln())
    } else {
        f64::INFINITY
    }
}

pub fn chain_checks(pair: &str, d: &ChainDistances, slack: f64) -> Vec<Check> {
    let t = 2.0 * d.tol;
    let c = |check: &str, lhs: f64, rhs: f64| Check::new(pair, check, "", lhs, rhs).abs(t);
    let mut out = vec![
        c("dud <= bl", d.dud, d.bl),
        c("bl <= 2 dud", d.bl, 2.0 * d.dud),
        c("bl <= 2 tv", d.bl, 2.0 * d.tv),
        c("bl <= w1", d.bl, d.w1),
        c("bl/4 <= dud/2", 0.25 * d.bl, 0.5 * d.dud),
        c("dud/2 <= lp", 0.5 * d.dud, d.lp),
        c("lp <= sqrt(3/2 dud)", d.lp, (1.5 * d.dud).sqrt()),
        c("lp <= sqrt(3/2 bl)", d.lp, (1.5 * d.bl).sqrt()),
        c("lp <= tv", d.lp, d.tv),
        c("lp^2 <= w1", d.lp * d.lp, d.w1),
        c("w1 <= lp (1 + 2 lp / ln(1/lp))", d.w1, lp_w1_rhs(d.lp)),
        c("wlp <= w1 / (1 + w1)", d.wlp, d.w1 / (1.0 + d.w1)),
        c("wlp/2 <= lp", 0.5 * d.wlp, d.lp),
        c("lp <= sqrt(2 wlp)", d.lp, (2.0 * d.wlp).sqrt()),
        Check::new(pair, "kyfan*/2 <= kyfan", "independent", 0.5 * d.kyfan_star, d.kyfan).abs(1e-9),
        Check::new(pair, "kyfan <= sqrt(2 kyfan*)", "independent", d.kyfan, (2.0 * d.kyfan_star).sqrt()).abs(1e-9),
        Check::new(pair, "lp <= kyfan", "independent", d.lp, d.kyfan).abs(t),
        Check::new(pair, "|lp_bisection - lp|", "", (d.lp_bisection - d.lp).abs(), 0.0).abs(LP_BISECTION_TOL),
    ];
    if d.kyfan < 1.0 {
        out.push(
            Check::new(pair, "E|X-Y| <= K (1 + 2K / ln(1/K))", "independent", d.independent_gap, lp_w1_rhs(d.kyfan))
                .rel(slack),
        );
    }
    out
}

fn metric_chain(cfg: &RunConfig, report: &mut Report, errors: &mut Errors) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.grid.n;
    let pairs: Vec<_> = (0..CHAIN_PAIRS)
        .map(|k| (format!("pair_{k:02}"), random_measure(&mut rng, n), random_measure(&mut rng, n)))
        .collect();
    let per: Vec<_> = pairs
        .into_par_iter()
        .map(|(label, a, b)| {
            let d = a.and_then(|a| b.and_then(|b| chain_distances(&a, &b)));
            (label, d)
        })
        .collect();
    let mut table = Table::new(
        "metric_chain_distances",
        &["pair", "tv", "w1", "bl", "dudley", "lp", "wlp", "tolerance", "lp_bisection", "kyfan", "kyfan_star"],
    );
    let mut checks = Vec::new();
    for (label, d) in per {
        match d {
            Ok(d) => {
                table.push(vec![
                    label.clone().into(),
                    d.tv.into(),
                    d.w1.into(),
                    d.bl.into(),
                    d.dud.into(),
                    d.lp.into(),
                    d.wlp.into(),
                    d.tol.into(),
                    d.lp_bisection.into(),
                    d.kyfan.into(),
                    d.kyfan_star.into(),
                ]);
                checks.extend(chain_checks(&label, &d, cfg.slack));
            }
            Err(e) => errors.push(Suite::MetricChain, &label, e),
        }
    }
    report.tables.push(table);
    report.tables.push(check_table("metric_chain", checks));
}

fn semigroup(ms: &[Realized], n: usize, report: &mut Report, errors: &mut Errors) {
    let gamma = match gaussian(n) {
        Ok(g) => g,
        Err(e) => {
            errors.push(Suite::Semigroup, "gamma", e);
            return;
        }
    };
    let evolved: logconcave::Result<Vec<Measure>> = OU_TIMES.iter().map(|&t| ou_evolve(&gamma, t)).collect();
    let evolved = match evolved {
        Ok(g) => g,
        Err(e) => {
            errors.push(Suite::Semigroup, "gamma", e);
            return;
        }
    };
    let per: Vec<_> = ok_measures(ms)
        .into_par_iter()
        .map(|(name, m)| {
            let run = || -> logconcave::Result<Vec<Check>> {
                let shifted = apply_affine(m, 1.0, 0.5)?;
                let (w_shift, w_gamma) = (w1(m, &shifted)?, w1(m, &gamma)?);
                let d = levy_prokhorov(&gamma, m)?;
                let (pair_shift, pair_gamma) = (format!("{name}|shift"), format!("{name}|gamma"));
                let mut out = Vec::new();
                for (&time, g_gamma) in OU_TIMES.iter().zip(&evolved) {
                    let p = format!("T={time}");
                    let (g_m, g_shift) = (ou_evolve(m, time)?, ou_evolve(&shifted, time)?);
                    let factor = (-time / 2.0).exp();
                    let tv_factor = factor / (2.0 * PI * -(-time).exp_m1()).sqrt();
                    let gap = (w1(&g_m, &g_shift)? - factor * w_shift).abs();
                    out.push(
                        Check::new(name, "|w1(G_T a, G_T a+c) - e^{-T/2} w1|", &*p, gap, 0.0).abs(TRANSLATION_TOL),
                    );
                    out.push(
                        Check::new(&pair_gamma, "w1 contraction", &*p, w1(&g_m, g_gamma)?, factor * w_gamma)
                            .rel(QUADRATURE_REL)
                            .abs(DISTANCE_NOISE),
                    );
                    for (label, g_other, w) in [(&pair_shift, &g_shift, w_shift), (&pair_gamma, g_gamma, w_gamma)] {
                        out.push(
                            Check::new(
                                label,
                                "tv(G_T) <= e^{-T/2} w1 / sqrt(2 pi (1-e^{-T}))",
                                &*p,
                                tv(&g_m, g_other)?,
                                tv_factor * w,
                            )
                            .rel(QUADRATURE_REL)
                            .abs(DISTANCE_NOISE),
                        );
                    }
                    if m.is_log_concave() {
                        let rhs = if d < 1.0 {
                            (-time / 4.0).exp() * (d * (1.0 + 2.0 * d / (1.0 / d).ln())).sqrt()
                        } else {
                            f64::INFINITY
                        };
                        let lhs = levy_prokhorov(&g_m, &gamma)?;
                        out.push(Check::new(&pair_gamma, "lp(G_T nu, gamma) bound", &*p, lhs, rhs).abs(DISTANCE_NOISE));
                    }
                }
                Ok(out)
            };
            (name, run())
        })
        .collect();
    let mut checks = Vec::new();
    for (name, r) in per {
        match r {
            Ok(c) => checks.extend(c),
            Err(e) => errors.push(Suite::Semigroup, name, e),
        }
    }
    // a witness that the flow does not contract in total variation uniformly
    match non_contraction_witness(1.0) {
        Ok((lambda, tv)) => checks.push(Check::new(
            &format!("gaussian_0_{lambda}"),
            "witness: threshold <= tv(G_1 nu, gamma)",
            "T=1",
            WITNESS_THRESHOLD,
            tv,
        )),
        Err(e) => {
            errors.push(Suite::Semigroup, "witness", &e);
            checks.push(Check::new(
                "witness",
                "witness: threshold <= tv(G_1 nu, gamma)",
                "T=1",
                WITNESS_THRESHOLD,
                0.0,
            ));
        }
    }
    report.tables.push(check_table("semigroup", checks));
}

/// Runs one suite on already realized measures; used by the one-shot verbs.
pub fn run_on(suite: Suite, measures: Vec<(String, Measure)>, refs: Option<&[Reference]>, cfg: &RunConfig) -> Report {
    let ms: Vec<Realized> = measures.into_iter().map(|(n, m)| (n, Ok(m))).collect();
    let mut report = Report { slack: cfg.slack, ..Report::default() };
    let mut errors = Errors::default();
    let start = Instant::now();
    match suite {
        Suite::Constants => constants(&ms, cfg, &mut report, &mut errors),
        Suite::Bounds => bounds(&ms, refs, cfg.slack, &mut report, &mut errors),
        Suite::Distances => distances(&ms, &mut report, &mut errors),
        _ => unimplemented!("one-shot verbs cover constants, bounds and distances"),
    }
    if !errors.0.is_empty() {
        let mut t = Table::new("errors", &["suite", "measure", "message"]);
        for (s, m, e) in errors.0 {
            t.push(vec![s.into(), m.into(), e.into()]);
        }
        report.tables.push(t);
    }
    report.metadata = metadata(cfg, start.elapsed().as_secs_f64());
    report
}
