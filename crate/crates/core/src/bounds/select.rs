//! Certificate selection for a measure, and the validity sweep against the
//! oracles.

use super::{evaluate, open_grid, verify_against_oracle, BoundCertificate, Inputs, Target};
use crate::error::{Error, Result};
use crate::measure1d::{
    apply_affine, convolve_gaussian, convolve_uniform, realize, scale_mix, truncate, GridMeasure, MeasureSpec,
};
use crate::metrics::{bl_dud, kyfan, levy_prokhorov, tv, w1, BlKind, CouplingPlan};
use crate::oracle::{
    cheeger_constant, concentration_at, concentration_inverse, density_ratio_sup, moments, spectral_poincare,
    weak_beta_from_profile, Centering, ProfileKind, ProfileTable,
};
use crate::scalar::normal_upper_quantile;
use crate::search::{linspace, logspace, scan_min};
use crate::semigroup::ou_evolve;
use serde::{Deserialize, Serialize};
use std::cell::OnceCell;

type Measure = GridMeasure<f64>;

#[derive(Clone, Debug)]
pub struct Reference {
    pub name: String,
    pub measure: Measure,
}

impl Reference {
    pub fn new(name: &str, measure: Measure) -> Self {
        Self { name: name.to_string(), measure }
    }
}

/// What [`best_bound`] may use besides the moments of the measure.
#[derive(Clone, Debug, Default)]
pub struct Context {
    /// Concentration profile and weak Poincaré rates of the measure.
    pub own_profiles: bool,
    /// Oracle constants of the measure and of its restrictions and mollifications.
    pub own_constants: bool,
    pub references: Vec<Reference>,
}

impl Context {
    pub fn full(references: Vec<Reference>) -> Self {
        Self { own_profiles: true, own_constants: true, references }
    }
}

/// Lazily computed oracle values of one measure.
struct Facts<'a> {
    m: &'a Measure,
    c_p: OnceCell<f64>,
    cheeger: OnceCell<f64>,
    alpha: OnceCell<ProfileTable<f64>>,
}

impl<'a> Facts<'a> {
    fn new(m: &'a Measure) -> Self {
        Self { m, c_p: OnceCell::new(), cheeger: OnceCell::new(), alpha: OnceCell::new() }
    }

    fn lc(&self) -> bool {
        self.m.is_log_concave()
    }

    fn c_p(&self) -> Result<f64> {
        if let Some(v) = self.c_p.get() {
            return Ok(*v);
        }
        let v = spectral_poincare(self.m)?.c_p;
        Ok(*self.c_p.get_or_init(|| v))
    }

    fn cheeger(&self) -> Result<f64> {
        if let Some(v) = self.cheeger.get() {
            return Ok(*v);
        }
        let v = cheeger_constant(self.m)?;
        Ok(*self.cheeger.get_or_init(|| v))
    }

    /// Smallest available admissible `C(mu)`.
    fn c_mu(&self) -> Result<f64> {
        Ok(self.cheeger()?.min(self.c_p()?.sqrt()))
    }

    fn alpha(&self) -> &ProfileTable<f64> {
        self.alpha.get_or_init(|| alpha_table(self.m))
    }

    fn beta_mean(&self, s: f64) -> f64 {
        2.0 * concentration_inverse(self.m, s / 4.0)
    }

    fn beta_median(&self, s: f64) -> f64 {
        concentration_inverse(self.m, s / 2.0)
    }
}

/// Concentration table on radii that hit the levels the scans ask for.
fn alpha_table(m: &Measure) -> ProfileTable<f64> {
    let span = m.upper() - m.lower();
    let mut radii: Vec<f64> = logspace(1e-12, 0.4999, 800)
        .into_iter()
        .map(|s| concentration_inverse(m, s))
        .chain(linspace(0.0, span, 200))
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    ProfileTable {
        values: radii.iter().map(|r| concentration_at(m, *r)).collect(),
        abscissae: radii,
        kind: ProfileKind::Concentration,
    }
}

fn inputs(nu: bool, mu: bool) -> Inputs {
    Inputs::new().log_concave(nu, mu)
}

/// Distances and moment ratios between the measure and one reference.
struct Pair<'a> {
    mu: Facts<'a>,
    tv: f64,
    w1: f64,
    bl: f64,
    dudley: f64,
    lp: f64,
    ratio_nu_mu: f64,
    ratio_mu_nu: f64,
    entropy: f64,
}

impl<'a> Pair<'a> {
    fn new(nu: &Measure, mu: &'a Measure) -> Result<Self> {
        let entropy = match moments(nu, Some(mu), None) {
            Ok(r) => r.relative_entropy.unwrap_or(f64::INFINITY),
            Err(Error::NotAbsolutelyContinuous { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(Self {
            mu: Facts::new(mu),
            tv: tv(nu, mu)?,
            w1: w1(nu, mu)?,
            bl: bl_dud(nu, mu, BlKind::Bl)?,
            dudley: bl_dud(nu, mu, BlKind::Dudley)?,
            lp: levy_prokhorov(nu, mu)?,
            ratio_nu_mu: density_ratio_sup(nu, mu),
            ratio_mu_nu: density_ratio_sup(mu, nu),
            entropy,
        })
    }

    fn lc(&self) -> bool {
        self.mu.lc()
    }
}

/// `M_p(nu, mu)`, `+inf` when `nu` is not absolutely continuous.
fn m_p(nu: &Measure, mu: &Measure, p: f64) -> Result<f64> {
    match moments(nu, Some(mu), Some(p)) {
        Ok(r) => Ok(r.m_p_ratio.unwrap_or(f64::INFINITY)),
        Err(Error::NotAbsolutelyContinuous { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn standard_gaussian() -> Result<Measure> {
    realize(&MeasureSpec::gaussian(0.0, 1.0))
}

/// Best of a one-parameter family of certificates, by value.
fn best_over(grid: &[f64], make: impl Fn(f64) -> Result<BoundCertificate>) -> Result<BoundCertificate> {
    let (x, _) = scan_min(grid, |x| make(x).map(|c| c.value).unwrap_or(f64::INFINITY));
    let x = if x.is_nan() { grid[0] } else { x };
    make(x)
}

/// Every certificate on `C'_C` (`target = CheegerMedian`) or `C_P`
/// that the context allows, inert ones included.
pub fn candidates(target: Target, m: &Measure, ctx: &Context) -> Result<Vec<BoundCertificate>> {
    let facts = Facts::new(m);
    let pairs = ctx.references.iter().map(|r| Pair::new(m, &r.measure)).collect::<Result<Vec<_>>>()?;
    match target {
        Target::CheegerMedian => cheeger_candidates(&facts, ctx, &pairs),
        Target::PoincareConstant => poincare_candidates(&facts, ctx, &pairs),
        other => Err(Error::InvalidParameter(format!("best_bound targets C_P or C'_C, got {}", other.as_str()))),
    }
}

fn cheeger_candidates(f: &Facts, ctx: &Context, pairs: &[Pair]) -> Result<Vec<BoundCertificate>> {
    let m = f.m;
    let nu = f.lc();
    let mut out = Vec::new();
    let rep = moments(m, None, None)?;
    out.push(evaluate("first_moment", &inputs(nu, true).with("abs_dev", rep.first_abs_moment_about_median))?);
    out.push(evaluate("first_moment_variance", &inputs(nu, true).with("variance", rep.variance))?);

    if ctx.own_profiles {
        let alpha = f.alpha().clone();
        out.push(evaluate("concentration_to_cheeger", &inputs(nu, true).with_profile("alpha", alpha.clone()))?);
        out.push(evaluate("milman_profile", &inputs(nu, true).with_profile("alpha", alpha.clone()))?);
        let beta = weak_beta_from_profile(&alpha, Centering::Median)?;
        out.push(evaluate("weakmil_optimized", &inputs(nu, true).with_profile("beta_profile", beta))?);
        out.push(best_over(&open_grid(0.0, 0.5), |s| {
            evaluate("weakmil_osc", &inputs(nu, true).with("beta", f.beta_median(s)).with("s", s))
        })?);
    }

    if ctx.own_constants {
        let c_p = f.c_p()?;
        for id in ["ledoux_reverse", "ledoux_improved"] {
            out.push(evaluate(id, &inputs(nu, true).with("c_p", c_p))?);
        }
        out.push(evaluate("weakmil_var", &inputs(nu, true).with("beta_var", c_p.sqrt()).with("s", 0.0))?);
        out.push(evaluate("weak22_to_cheeger", &inputs(nu, true).with("beta22", c_p).with("s", 0.0))?);
        for a in [0.9, 0.99, 0.999] {
            let (lo, hi) = (m.quantile(0.5 * (1.0 - a)), m.quantile(0.5 * (1.0 + a)));
            let restricted = truncate(m, lo, hi, false)?;
            let mass = m.cdf_at(hi) - m.cdf_at(lo);
            let c = cheeger_constant(&restricted)?;
            out.push(evaluate("restriction", &inputs(nu, true).with("nu_a", mass).with("cheeger_restricted", c))?);
            let u_max = 1.0 - 1.0 / (2.0 * mass);
            if u_max > 2e-3 {
                out.push(best_over(&open_grid(0.0, u_max), |u| {
                    let b = 2.0 * concentration_inverse(&restricted, u / 4.0);
                    evaluate(
                        "restriction_weak",
                        &inputs(nu, true).with("nu_a", mass).with("beta_restricted", b).with("u", u),
                    )
                })?);
            }
        }
        let (mean, sd) = (m.mean(), m.variance().sqrt());
        for a in [2.0, 3.0, 4.0, 6.0] {
            let z = truncate(m, mean - a * sd, mean + a * sd, false)?;
            let c = cheeger_constant(&z)?;
            out.push(evaluate("l2_truncation", &inputs(nu, true).with("a", a).with("cheeger_truncated", c))?);
        }
        for lambda in [0.5, 0.9] {
            let c = cheeger_constant(&scale_mix(m, lambda)?)?;
            let inp = inputs(nu, true).with("alpha", lambda.sqrt()).with("beta", (1.0 - lambda).sqrt());
            out.push(evaluate("demollification_cheeger", &inp.with("cheeger_mixed", c))?);
        }
    }

    for pair in pairs {
        let mu = &pair.mu;
        let lc = pair.lc();
        let base = || inputs(nu, lc);
        let (c_mu, cheeger_mu) = (mu.c_mu()?, mu.cheeger()?);
        // C_C(mu) <= 2 C'_C(mu)
        let cheeger_mean_mu = 2.0 * cheeger_mu;
        out.push(evaluate(
            "density_ratio_classic_cheeger",
            &base()
                .with("ratio_nu_mu", pair.ratio_nu_mu)
                .with("ratio_mu_nu", pair.ratio_mu_nu)
                .with("mu_cheeger", cheeger_mu),
        )?);
        let p_grid = logspace(1.05, 16.0, 32);
        let mps: Vec<(f64, f64)> = p_grid.iter().map(|p| Ok((*p, m_p(m, mu.m, *p)?))).collect::<Result<_>>()?;
        out.push(best_of(
            mps.iter()
                .map(|(p, mp)| evaluate("transfer_lp", &base().with("p", *p).with("m_p", *mp).with("mu_c", c_mu))),
        )?);
        let bis: Vec<f64> = logspace(1e-3, 1.0, 32).into_iter().map(|x| 1.0 + x).collect();
        let c_p_mu = mu.c_p()?;
        out.push(best_of(bis.iter().map(|p| {
            evaluate("transfer_lp_bis", &base().with("p", *p).with("m_p", m_p(m, mu.m, *p)?).with("mu_c_p", c_p_mu))
        }))?);
        out.push(best_over(&open_grid(0.0, 0.5), |u| {
            evaluate("transfer_entropy", &base().with("entropy", pair.entropy).with("u", u).with("mu_c", c_mu))
        })?);
        out.push(evaluate("transfer_entropy_bis", &base().with("entropy", pair.entropy).with("mu_c_p", c_p_mu))?);
        out.push(evaluate(
            "milman_density",
            &base().with("ratio_mu_nu", pair.ratio_mu_nu).with("mu_cheeger", cheeger_mu),
        )?);
        let alpha_mu = mu.alpha().clone();
        let bm = std::iter::once((f64::INFINITY, pair.ratio_nu_mu)).chain(mps.iter().copied());
        out.push(best_of(bm.map(|(p, mp)| {
            evaluate(
                "barthe_milman_profile",
                &base().with("p", p).with("m_p", mp).with_profile("mu_alpha", alpha_mu.clone()),
            )
        }))?);
        out.push(evaluate("tv_transference", &base().with("tv", pair.tv).with("mu_cheeger", cheeger_mu))?);
        out.push(evaluate("w1_weak", &base().with("mu_cheeger_mean", cheeger_mean_mu).with("w1", pair.w1))?);
        out.push(best_over(&open_grid(0.0, 0.5), |s| {
            let inner =
                evaluate("w1_weak_beta", &base().with("mu_beta", mu.beta_mean(s)).with("w1", pair.w1).with("s", s))?;
            Ok(evaluate("weakmil_osc", &base().with("beta", inner.value).with("s", s))?.with_chain(inner))
        })?);
        for (id, key, d) in [("tv_weak", "tv", pair.tv), ("dud_weak", "dudley", pair.dudley)] {
            let at_zero = evaluate(id, &base().with("mu_beta", cheeger_mean_mu).with("s", 0.0).with(key, d))?;
            let s_max = 0.5 - 2.0 * d;
            let scanned = if s_max > 2e-3 {
                best_over(&open_grid(0.0, s_max), |s| {
                    evaluate(id, &base().with("mu_beta", mu.beta_mean(s)).with("s", s).with(key, d))
                })?
            } else {
                at_zero.clone()
            };
            out.push(if scanned.value < at_zero.value { scanned } else { at_zero });
        }
        out.push(evaluate("bl_to_cheeger_pair", &base().with("bl", pair.bl).with("mu_cheeger", cheeger_mu))?);
        out.push(evaluate("lp_to_w1_cheeger", &base().with("lp", pair.lp).with("mu_cheeger_mean", cheeger_mean_mu))?);
    }
    if !pairs.is_empty() {
        let bl = bl_dud(m, &standard_gaussian()?, BlKind::Bl)?;
        out.push(evaluate("bl_to_cheeger", &inputs(nu, true).with("bl", bl))?);
    }
    Ok(out)
}

fn best_of(certs: impl Iterator<Item = Result<BoundCertificate>>) -> Result<BoundCertificate> {
    let mut best: Option<BoundCertificate> = None;
    for c in certs {
        let c = c?;
        if best.as_ref().is_none_or(|b| c.value < b.value) {
            best = Some(c);
        }
    }
    best.ok_or(Error::NoApplicableFormula)
}

/// `R` in `p(l x + (1-l) y) <= R (l p(x) + (1-l) p(y))`: 1 for a convex
/// density, else the max/min ratio. `None` without compact support.
fn cube_constant(m: &Measure) -> Option<f64> {
    let d = m.density();
    let max = d.iter().copied().fold(0.0, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 1e-6 * max) {
        return None;
    }
    let tol = 1e-9 * max;
    let convex = d.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -tol);
    Some(if convex { 1.0 } else { max / min })
}

fn poincare_candidates(f: &Facts, ctx: &Context, pairs: &[Pair]) -> Result<Vec<BoundCertificate>> {
    let m = f.m;
    let nu = f.lc();
    let mut out = Vec::new();
    let var = m.variance();
    for id in ["kls_variance", "kls_variance_484", "bobkov_1d"] {
        out.push(evaluate(id, &inputs(nu, true).with("variance", var))?);
    }
    if ctx.own_profiles {
        out.push(evaluate("concentration_to_poincare", &inputs(nu, true).with_profile("alpha", f.alpha().clone()))?);
    }
    if ctx.own_constants {
        for lambda in [0.25, 0.5, 0.9] {
            let c = spectral_poincare(&scale_mix(m, lambda)?)?.c_p;
            out.push(evaluate("demollification", &inputs(nu, true).with("lambda", lambda).with("c_p_mixed", c))?);
        }
        for beta in [0.25, 0.5] {
            let c = spectral_poincare(&convolve_gaussian(m, beta)?)?.c_p;
            let inp = inputs(nu, true).with("alpha", 1.0).with("beta", beta).with("c_p_mixed", c);
            out.push(evaluate("demollification_ab", &inp)?);
        }
        if let Some(r) = cube_constant(m) {
            let theta = m.upper() - m.lower();
            out.push(evaluate("klartag_cube", &inputs(nu, true).with("theta", theta).with("r_const", r))?);
        }
    }
    for pair in pairs {
        out.push(evaluate(
            "density_ratio_classic",
            &inputs(nu, pair.lc())
                .with("ratio_nu_mu", pair.ratio_nu_mu)
                .with("ratio_mu_nu", pair.ratio_mu_nu)
                .with("mu_c_p", pair.mu.c_p()?),
        )?);
    }
    if ctx.own_profiles || ctx.own_constants || !pairs.is_empty() {
        let best = pick(cheeger_candidates(f, ctx, pairs)?)?;
        out.push(evaluate("cheeger_to_poincare", &inputs(nu, true).with("cheeger", best.value))?.with_chain(best));
    }
    Ok(out)
}

fn pick(certs: Vec<BoundCertificate>) -> Result<BoundCertificate> {
    certs
        .into_iter()
        .filter(|c| !c.is_inert())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(Error::NoApplicableFormula)
}

/// Smallest live certificate over every applicable entry.
pub fn best_bound(target: Target, m: &Measure, ctx: &Context) -> Result<BoundCertificate> {
    pick(candidates(target, m, ctx)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityRow {
    pub measure: String,
    /// Formula id; chained certificates read `outer<-inner`.
    pub formula_id: String,
    pub target: Target,
    pub value: f64,
    pub oracle: f64,
    pub tightness: f64,
    pub preconditions_met: bool,
    /// Vacuously true for inert certificates.
    pub pass: bool,
    pub subject: String,
    pub certificate: BoundCertificate,
}

pub fn chain_label(c: &BoundCertificate) -> String {
    match c.chain.first() {
        Some(child) => format!("{}<-{}", c.formula_id, chain_label(child)),
        None => c.formula_id.clone(),
    }
}

/// Absolute tolerance for distance rows.
pub const DISTANCE_NOISE: f64 = 1e-5;

struct Rows<'a> {
    measure: &'a str,
    slack: f64,
    rows: Vec<ValidityRow>,
}

impl Rows<'_> {
    fn push(&mut self, subject: &str, cert: &BoundCertificate, oracle: f64) {
        // distances near zero are compared up to the quadrature noise
        let floor = if cert.target == Target::Distance { DISTANCE_NOISE } else { 0.0 };
        let (pass, tightness) = match verify_against_oracle(cert, oracle, self.slack) {
            Ok(v) => (v.pass || cert.value >= oracle - floor, v.tightness),
            Err(_) => (true, f64::INFINITY),
        };
        self.rows.push(ValidityRow {
            measure: self.measure.to_string(),
            formula_id: chain_label(cert),
            target: cert.target,
            value: cert.value,
            oracle,
            tightness,
            preconditions_met: cert.preconditions_met,
            pass,
            subject: subject.to_string(),
            certificate: cert.clone(),
        });
    }
}

/// Lower bound on the weak (1, inf) rate from the 1-Lipschitz test
/// functions `clamp(x - med, -r, r)`: `beta(s) >= nu|f - c| - s Osc(f)`.
pub fn beta_lower_bound(m: &Measure, s: f64, centering: Centering) -> f64 {
    let med = m.median();
    let span = (m.upper() - med).max(med - m.lower());
    let mut best: f64 = 0.0;
    for r in logspace(1e-3 * span, span, 96) {
        let f = |x: f64| (x - med).clamp(-r, r);
        let c = match centering {
            Centering::Median => 0.0,
            Centering::Mean => m.integrate(f),
        };
        let dev = m.integrate(|x| (f(x) - c).abs());
        let osc = r.min(m.upper() - med) + r.min(med - m.lower());
        best = best.max(dev - s * osc);
    }
    best
}

/// The reference measures used by the sweep: the standard gaussian and a
/// light gaussian smoothing of `m`.
pub fn default_references(m: &Measure) -> Result<Vec<Reference>> {
    Ok(vec![Reference::new("gamma", standard_gaussian()?), Reference::new("smoothed", convolve_gaussian(m, 0.1)?)])
}

/// Every applicable certificate for `m`, its derived measures and its pairs
/// with `refs`, checked against the oracles with relative `slack`.
pub fn validity_sweep(name: &str, m: &Measure, refs: &[Reference], slack: f64) -> Result<Vec<ValidityRow>> {
    let ctx = Context::full(refs.to_vec());
    let facts = Facts::new(m);
    let pairs = refs.iter().map(|r| Pair::new(m, &r.measure)).collect::<Result<Vec<_>>>()?;
    let nu = facts.lc();
    let (c_p, cheeger) = (facts.c_p()?, facts.cheeger()?);
    let mut rows = Rows { measure: name, slack, rows: Vec::new() };

    for c in cheeger_candidates(&facts, &ctx, &pairs)? {
        rows.push(name, &c, cheeger);
    }
    for c in poincare_candidates(&facts, &ctx, &pairs)? {
        rows.push(name, &c, c_p);
    }

    // variance sandwich after truncation
    let (mean, sd) = (m.mean(), m.variance().sqrt());
    for a in [8.0, 12.0] {
        let z = truncate(m, mean - a * sd, mean + a * sd, false)?;
        let c = evaluate(
            "l2_truncation_variance",
            &inputs(nu, true).with("a", a).with("variance_truncated", z.variance()),
        )?;
        rows.push(name, &c, m.variance());
    }

    // tail of the maximum of n independent standardized copies
    for n in [10.0, 100.0, 1000.0] {
        for t in [2.0 * 3f64.sqrt(), 4.0, 6.0] {
            let c = evaluate("latala_tail", &Inputs::new().with("dim", n).with("t", t).with("epsilon", 1.0))?;
            let x = sd * t * n.ln();
            let p = (m.cdf_at(mean - x) + 1.0 - m.cdf_at(mean + x)).clamp(0.0, 1.0);
            rows.push(name, &c, -(n * (-p).ln_1p()).exp_m1());
        }
    }

    // mollification of the measure itself
    for lambda in [0.25, 0.5, 0.9] {
        let c =
            evaluate("mollification_mix", &Inputs::new().with("lambda", lambda).with("c_p_z", c_p).with("c_p_x", 1.0))?;
        rows.push(&format!("{name}/scale_mix"), &c, spectral_poincare(&scale_mix(m, lambda)?)?.c_p);
    }
    for beta in [0.25, 1.0] {
        let c = evaluate("mollification_sum", &Inputs::new().with("c_p_z", c_p).with("c_p_x", beta * beta))?;
        let conv = convolve_gaussian(m, beta)?;
        rows.push(&format!("{name}/gaussian_convolution"), &c, spectral_poincare(&conv)?.c_p);
        for s in [0.05, 0.2] {
            let gauss = |s: f64| 2.0 * beta * normal_upper_quantile(s / 8.0);
            let c = evaluate(
                "beta_convolution",
                &Inputs::new()
                    .with("beta_mu_half", facts.beta_mean(s / 2.0))
                    .with("beta_nu_half", gauss(s))
                    .with("s", s),
            )?;
            rows.push(&format!("{name}/gaussian_convolution"), &c, beta_lower_bound(&conv, s, Centering::Mean));
        }
    }

    // restricted gaussian convolution around the median
    let centered = apply_affine(m, 1.0, -m.median())?;
    for beta in [0.5, 1.0] {
        let conv = convolve_gaussian(&centered, beta)?;
        for theta in [1.0, 2.0] {
            let Ok(r) = truncate(&conv, -0.5 * theta, 0.5 * theta, false) else { continue };
            let c = evaluate(
                "gaussian_convolution_restricted",
                &inputs(conv.is_log_concave(), true).with("beta", beta).with("theta", theta),
            )?;
            rows.push(&format!("{name}/restricted_convolution"), &c, spectral_poincare(&r)?.c_p);
        }
    }

    // uniform convolution of a copy squeezed into the unit interval
    let (lo, hi) = (m.quantile(1e-3), m.quantile(1.0 - 1e-3));
    let core = truncate(m, lo, hi, false)?;
    let unit = apply_affine(&core, 1.0 / (hi - lo), -0.5 * (lo + hi) / (hi - lo))?;
    for theta in [2.0, 3.0] {
        let conv = convolve_uniform(&unit, theta)?;
        let r = truncate(&conv, -0.5 * (theta - 1.0), 0.5 * (theta - 1.0), false)?;
        let inp = Inputs::new().with("theta", theta);
        rows.push(
            &format!("{name}/uniform_convolution"),
            &evaluate("uniform_convolution", &inp)?,
            spectral_poincare(&r)?.c_p,
        );
        rows.push(
            &format!("{name}/uniform_convolution"),
            &evaluate("uniform_convolution_cheeger", &inp)?,
            cheeger_constant(&r)?,
        );
    }

    for (pair, reference) in pairs.iter().zip(refs) {
        let subject = format!("{name}|{}", reference.name);
        let mu = &pair.mu;
        let base = || inputs(nu, pair.lc());
        for s in [0.05, 0.1, 0.2, 0.3] {
            let c =
                evaluate("w1_weak_beta", &base().with("mu_beta", mu.beta_mean(s)).with("w1", pair.w1).with("s", s))?;
            rows.push(&subject, &c, beta_lower_bound(m, s, Centering::Mean));
            let c = evaluate(
                "tv_weak_beta",
                &base().with("mu_beta", mu.beta_mean(s - 2.0 * pair.tv)).with("s", s).with("tv", pair.tv),
            )?;
            rows.push(&subject, &c, beta_lower_bound(m, s, Centering::Mean));
            let c = evaluate(
                "dud_weak_beta",
                &base().with("mu_beta", mu.beta_mean(s - 2.0 * pair.dudley)).with("s", s).with("dudley", pair.dudley),
            )?;
            rows.push(&subject, &c, beta_lower_bound(m, s, Centering::Mean));
            let c = best_over(&logspace(1.05, 16.0, 32), |p| {
                evaluate(
                    "transfer_lp_beta",
                    &base().with("p", p).with("m_p", m_p(m, mu.m, p)?).with("mu_c", mu.c_mu()?).with("s", s),
                )
            })?;
            rows.push(&subject, &c, beta_lower_bound(m, s, Centering::Median));
        }
        let alpha_mu = mu.alpha().clone();
        for r in [0.5, 1.0, 2.0] {
            let c = evaluate(
                "barthe_milman_alpha",
                &base()
                    .with("p", f64::INFINITY)
                    .with("m_p", pair.ratio_nu_mu)
                    .with_profile("mu_alpha", alpha_mu.clone())
                    .with("r", r),
            )?;
            rows.push(&subject, &c, concentration_at(m, r));
        }
        for time in [0.25, 1.0, 4.0] {
            let (a, b) = (ou_evolve(m, time)?, ou_evolve(mu.m, time)?);
            let inp = Inputs::new().with("time", time).with("w1", pair.w1);
            rows.push(&subject, &evaluate("semigroup_w1", &inp)?, w1(&a, &b)?);
            rows.push(&subject, &evaluate("semigroup_tv_w1", &inp)?, tv(&a, &b)?);
        }
        rows.push(&subject, &evaluate("lp_to_w1", &base().with("lp", pair.lp))?, pair.w1);
        rows.push(&subject, &evaluate("lp_to_w1_lower", &Inputs::new().with("w1", pair.w1))?, pair.lp);
        rows.push(&subject, &evaluate("bl_to_w1", &base().with("bl", pair.bl))?, pair.w1);
        let plan = CouplingPlan::independent(m, mu.m, 256);
        let (k, _) = kyfan(&plan);
        let mean_gap = plan.expected(|x, y| (x - y).abs()) / plan.total_mass();
        rows.push(&subject, &evaluate("kyfan_expectation", &base().with("kyfan", k))?, mean_gap);
    }
    let gamma = standard_gaussian()?;
    let d = levy_prokhorov(&gamma, m)?;
    for time in [0.25, 1.0, 4.0] {
        let c = evaluate("lp_semigroup", &inputs(nu, true).with("time", time).with("lp", d))?;
        rows.push(&format!("{name}|gamma"), &c, levy_prokhorov(&ou_evolve(m, time)?, &gamma)?);
    }
    Ok(rows.rows)
}

/// Log-concave family used by the sweep and the acceptance suite.
pub fn log_concave_family(n: usize) -> Vec<(String, MeasureSpec)> {
    let spec = |name: &str, s: MeasureSpec| (name.to_string(), s.with_n(n));
    vec![
        spec("gaussian_0_1", MeasureSpec::gaussian(0.0, 1.0)),
        spec("gaussian_1_0.5", MeasureSpec::gaussian(1.0, 0.5)),
        spec("gaussian_-2_2", MeasureSpec::gaussian(-2.0, 2.0)),
        spec("exponential_1", MeasureSpec::exponential(1.0)),
        spec("exponential_0.5", MeasureSpec::exponential(0.5)),
        spec("uniform_-1_1", MeasureSpec::uniform(-1.0, 1.0)),
        spec("uniform_0_3", MeasureSpec::uniform(0.0, 3.0)),
        spec("uniform_-0.25_0.25", MeasureSpec::uniform(-0.25, 0.25)),
        spec("radial_3_2_1", MeasureSpec::radial(3, 2.0, 1.0)),
        spec("radial_5_1_1", MeasureSpec::radial(5, 1.0, 1.0)),
        spec("radial_2_4_1", MeasureSpec::radial(2, 4.0, 1.0)),
    ]
}
