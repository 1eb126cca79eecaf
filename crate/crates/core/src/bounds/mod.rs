//! Explicit upper bounds as pure evaluators producing certificates, plus
//! selection of the best certificate for a measure and validity checks.

mod catalog;
mod select;

pub use catalog::{lookup, FormulaEntry, CATALOG, SYMBOLS};
pub use select::{
    best_bound, beta_lower_bound, candidates, chain_label, default_references, log_concave_family, validity_sweep,
    Context, Reference, ValidityRow, DISTANCE_NOISE,
};

use crate::error::{Error, Result};
use crate::oracle::{Centering, ProfileKind, ProfileTable};
use crate::search::{linspace, scan_min};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `C_P`
    PoincareConstant,
    /// `C'_C`, median-centered
    CheegerMedian,
    /// `C_C`, mean-centered
    CheegerMean,
    BetaProfile(Centering),
    AlphaProfile,
    Tail,
    Variance,
    Distance,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::PoincareConstant => "c_p",
            Target::CheegerMedian => "cheeger_median",
            Target::CheegerMean => "cheeger_mean",
            Target::BetaProfile(Centering::Median) => "beta_profile_median",
            Target::BetaProfile(Centering::Mean) => "beta_profile_mean",
            Target::AlphaProfile => "alpha_profile",
            Target::Tail => "tail",
            Target::Variance => "variance",
            Target::Distance => "distance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedInput {
    pub name: String,
    pub value: f64,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub formula_id: String,
    pub inputs: Vec<NamedInput>,
    /// Upper bound on `target`; `+inf` when a precondition failed.
    pub value: f64,
    pub target: Target,
    pub preconditions_met: bool,
    pub diagnostics: Vec<String>,
    pub chain: Vec<BoundCertificate>,
}

impl BoundCertificate {
    pub fn is_inert(&self) -> bool {
        !self.preconditions_met
    }

    pub fn with_chain(mut self, child: BoundCertificate) -> Self {
        self.chain.push(child);
        self
    }

    pub fn input(&self, name: &str) -> Option<f64> {
        self.inputs.iter().find(|i| i.name == name).map(|i| i.value)
    }
}

/// Named reals and profiles fed to [`evaluate`]. Log-concavity flags left
/// at `None` are assumed and noted in the diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Inputs {
    pub values: BTreeMap<String, f64>,
    pub profiles: BTreeMap<String, ProfileTable<f64>>,
    pub nu_log_concave: Option<bool>,
    pub mu_log_concave: Option<bool>,
}

impl Inputs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn with_profile(mut self, name: &str, p: ProfileTable<f64>) -> Self {
        self.profiles.insert(name.to_string(), p);
        self
    }

    pub fn log_concave(mut self, nu: bool, mu: bool) -> Self {
        self.nu_log_concave = Some(nu);
        self.mu_log_concave = Some(mu);
        self
    }
}

fn unit(name: &str) -> &'static str {
    match name {
        "c_p" | "mu_c_p" | "c_p_z" | "c_p_x" | "c_p_mixed" | "c_p_angle" | "variance" | "variance_truncated"
        | "beta22" => "length^2",
        "cheeger" | "mu_cheeger" | "mu_cheeger_mean" | "cheeger_restricted" | "cheeger_truncated" | "cheeger_mixed"
        | "mu_c" | "beta" | "beta_var" | "beta_restricted" | "mu_beta" | "beta_mu_half" | "beta_nu_half"
        | "abs_dev" | "radial_abs_dev" | "w1" | "theta" | "a" | "r" | "t" => "length",
        "time" => "time",
        _ => "1",
    }
}

struct Eval<'a> {
    entry: &'static FormulaEntry,
    inputs: &'a Inputs,
    used: Vec<NamedInput>,
    diagnostics: Vec<String>,
    ok: bool,
}

impl<'a> Eval<'a> {
    fn get(&mut self, name: &str) -> Result<f64> {
        let v = *self
            .inputs
            .values
            .get(name)
            .ok_or_else(|| Error::MissingInput { formula: self.entry.id.to_string(), input: name.to_string() })?;
        self.used.push(NamedInput { name: name.to_string(), value: v, unit: unit(name).to_string() });
        if v.is_nan() {
            self.fail(format!("{name} is NaN"));
        }
        Ok(v)
    }

    fn profile(&mut self, name: &str, kind: ProfileKind) -> Result<&'a ProfileTable<f64>> {
        let p = self
            .inputs
            .profiles
            .get(name)
            .ok_or_else(|| Error::MissingInput { formula: self.entry.id.to_string(), input: name.to_string() })?;
        if p.kind != kind {
            self.fail(format!("{name} has kind {:?}, expected {kind:?}", p.kind));
        }
        Ok(p)
    }

    fn fail(&mut self, msg: String) {
        self.ok = false;
        self.diagnostics.push(msg);
    }

    fn require(&mut self, cond: bool, msg: &str) {
        if !cond {
            self.fail(format!("precondition failed: {msg}"));
        }
    }

    fn flag(&mut self, flag: Option<bool>, who: &str) {
        match flag {
            Some(true) => {}
            Some(false) => self.fail(format!("precondition failed: {who} not log-concave")),
            None => self.diagnostics.push(format!("{who} assumed log-concave")),
        }
    }

    fn nu_lc(&mut self) {
        self.flag(self.inputs.nu_log_concave, "nu");
    }

    fn mu_lc(&mut self) {
        self.flag(self.inputs.mu_log_concave, "mu");
    }

    fn note(&mut self, name: &str, value: f64) {
        self.used.push(NamedInput { name: name.to_string(), value, unit: unit(name).to_string() });
    }

    fn finish(mut self, value: f64) -> BoundCertificate {
        if self.ok && (value.is_nan() || value < 0.0) {
            self.fail(format!("formula value {value} is not a nonnegative number"));
        }
        BoundCertificate {
            formula_id: self.entry.id.to_string(),
            inputs: self.used,
            value: if self.ok { value } else { f64::INFINITY },
            target: self.entry.target,
            preconditions_met: self.ok,
            diagnostics: self.diagnostics,
            chain: Vec::new(),
        }
    }
}

/// `x (1 + 2x / ln(1/x))` for `0 <= x < 1`.
fn lp_w1_factor(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 2.0 * x / (1.0 / x).ln())
    }
}

/// Open-interval scan grid with the 1e-3 margin.
fn open_grid(a: f64, b: f64) -> Vec<f64> {
    linspace(a + 1e-3, b - 1e-3, 257)
}

const CUBE_C: f64 = 40.0 / 9.0;

/// Evaluates one catalog entry. Failed preconditions give an inert
/// certificate with value `+inf`; only unknown ids and missing inputs are
/// errors.
pub fn evaluate(formula_id: &str, inputs: &Inputs) -> Result<BoundCertificate> {
    let entry = lookup(formula_id).ok_or_else(|| Error::UnknownFormula(formula_id.to_string()))?;
    let mut e = Eval { entry, inputs, used: Vec::new(), diagnostics: Vec::new(), ok: true };
    let value = match entry.id {
        "cheeger_to_poincare" => {
            let c = e.get("cheeger")?;
            e.require(c >= 0.0, "C'_C >= 0");
            4.0 * c * c
        }
        "ledoux_reverse" | "ledoux_improved" => {
            let c = e.get("c_p")?;
            e.nu_lc();
            e.require(c >= 0.0, "C_P >= 0");
            let k = if entry.id == "ledoux_reverse" { 6.0 } else { 16.0 / PI };
            k * c.sqrt()
        }
        "weakmil_osc" => {
            let (b, s) = (e.get("beta")?, e.get("s")?);
            e.nu_lc();
            e.require((0.0..0.5).contains(&s), "0 <= s < 1/2");
            4.0 * b / (PI * (0.5 - s).powi(2))
        }
        "weakmil_var" => {
            let (b, s) = (e.get("beta_var")?, e.get("s")?);
            e.nu_lc();
            e.require((0.0..1.0).contains(&s), "0 <= s < 1");
            16.0 * b / (PI * (1.0 - s).powi(2))
        }
        "weakmil_optimized" => {
            let p = e.profile("beta_profile", ProfileKind::WeakBeta)?;
            e.nu_lc();
            let hit = p.abscissae.iter().zip(&p.values).find(|(s, b)| **s < 0.5 && **b <= (0.5 - **s).powi(-2));
            match hit {
                Some((s, _)) => {
                    e.note("s*", *s);
                    4.0 / (PI * (0.5 - s).powi(4))
                }
                None => {
                    e.fail("precondition failed: no s < 1/2 with beta(s) <= (1/2 - s)^-2".into());
                    f64::INFINITY
                }
            }
        }
        "concentration_to_cheeger" | "concentration_to_poincare" => {
            let p = e.profile("alpha", ProfileKind::Concentration)?;
            e.nu_lc();
            let (s, v) =
                scan_min(&open_grid(0.0, 0.25), |s| 16.0 * p.generalized_inverse(s) / (PI * (1.0 - 4.0 * s).powi(2)));
            e.note("s*", s);
            if entry.id == "concentration_to_cheeger" {
                v
            } else {
                (2.0 * v).powi(2)
            }
        }
        "milman_profile" => {
            let p = e.profile("alpha", ProfileKind::Concentration)?;
            e.nu_lc();
            let (s, v) = scan_min(&open_grid(0.0, 0.5), |s| p.generalized_inverse(s) / (1.0 - 2.0 * s));
            e.note("s*", s);
            v
        }
        "first_moment" => {
            let d = e.get("abs_dev")?;
            e.nu_lc();
            16.0 / PI * d
        }
        "first_moment_variance" => {
            let v = e.get("variance")?;
            e.nu_lc();
            16.0 / PI * v.sqrt()
        }
        "kls_variance" | "kls_variance_484" | "bobkov_1d" => {
            let v = e.get("variance")?;
            e.nu_lc();
            let k = match entry.id {
                "kls_variance" => 4.0,
                "kls_variance_484" => 484.0,
                _ => 12.0,
            };
            k * v
        }
        "radial_split" => {
            let (d, n, c) = (e.get("radial_abs_dev")?, e.get("dim")?, e.get("c_p_angle")?);
            e.nu_lc();
            e.require(n >= 2.0, "n >= 2");
            32.0 / PI * (d + (n * c).sqrt())
        }
        "weak22_to_cheeger" => {
            let (b, s) = (e.get("beta22")?, e.get("s")?);
            e.nu_lc();
            e.require((0.0..1.0 / 6.0).contains(&s), "0 <= s < 1/6");
            4.0 * (b * 2f64.ln()).sqrt() / (1.0 - 6.0 * s)
        }
        "restriction" => {
            let (a, c) = (e.get("nu_a")?, e.get("cheeger_restricted")?);
            e.nu_lc();
            e.require(a > 0.5 && a <= 1.0, "1/2 < nu(A) <= 1");
            a * c / (2.0 * a - 1.0)
        }
        "restriction_weak" => {
            let (a, b, u) = (e.get("nu_a")?, e.get("beta_restricted")?, e.get("u")?);
            e.nu_lc();
            e.require(a > 0.5 && a <= 1.0, "1/2 < nu(A) <= 1");
            e.require(u >= 0.0 && u < 1.0 - 1.0 / (2.0 * a), "0 <= u < 1 - 1/(2 nu(A))");
            4.0 * a * b / (PI * ((1.0 - u) * a - 0.5).powi(2))
        }
        "l2_truncation" => {
            let (a, c) = (e.get("a")?, e.get("cheeger_truncated")?);
            e.nu_lc();
            e.require(a > 2f64.sqrt(), "a > sqrt 2");
            a * a / (a * a - 2.0) * c
        }
        "l2_truncation_variance" => {
            let (a, v) = (e.get("a")?, e.get("variance_truncated")?);
            e.nu_lc();
            let f = 1.0 - 7.0 / a - 1.0 / (a * a);
            e.require(a > 0.0 && f > 0.0, "1 - 7/a - 1/a^2 > 0");
            v / f
        }
        "linf_truncation" => {
            let (n, a, eps, c) = (e.get("dim")?, e.get("a")?, e.get("epsilon")?, e.get("cheeger_restricted")?);
            let k = (8.0 - 2.0 * eps) / eps;
            let na = n.powf(a - 1.0);
            e.require(n >= 2.0, "n >= 2");
            e.require(eps > 0.0 && eps <= 1.0, "0 < eps <= 1");
            e.require(na > k, "n^{a-1} > (8 - 2 eps)/eps");
            na / (na - k) * c
        }
        "latala_tail" => {
            let (n, t, eps) = (e.get("dim")?, e.get("t")?, e.get("epsilon")?);
            e.require(n >= 2.0, "n >= 2");
            e.require(eps > 0.0 && eps <= 1.0, "0 < eps <= 1");
            e.require(t >= 2.0 * 3f64.sqrt() / (2.0 - eps), "t >= 2 sqrt 3 / (2 - eps)");
            (8.0 - 2.0 * eps) / eps / n.powf((2.0 - eps) * t / (2.0 * 3f64.sqrt()) - 1.0)
        }
        "density_ratio_classic" | "density_ratio_classic_cheeger" => {
            let (r1, r2) = (e.get("ratio_nu_mu")?, e.get("ratio_mu_nu")?);
            let c = e.get(if entry.id == "density_ratio_classic" { "mu_c_p" } else { "mu_cheeger" })?;
            e.require(r1.is_finite() && r2.is_finite(), "both density ratios finite");
            r1 * r2 * c
        }
        "transfer_lp" | "transfer_lp_beta" => {
            let (p, mp, c) = (e.get("p")?, e.get("m_p")?, e.get("mu_c")?);
            let s = if entry.id == "transfer_lp_beta" { Some(e.get("s")?) } else { None };
            e.require(p > 1.0 && p.is_finite(), "1 < p < inf");
            e.require(mp.is_finite(), "M_p finite");
            let base = mp.powf(p / (p - 1.0)) * c;
            match s {
                Some(s) => {
                    e.require(s > 0.0, "s > 0");
                    base * s.powf(-1.0 / (p - 1.0))
                }
                None => {
                    e.nu_lc();
                    let d = 16.0 * (p + 1.0).powf(1.0 / (p - 1.0)) / (PI * (0.5 - 1.0 / (p + 1.0)).powi(2));
                    d * base
                }
            }
        }
        "transfer_entropy" => {
            let (d, u, c) = (e.get("entropy")?, e.get("u")?, e.get("mu_c")?);
            e.nu_lc();
            e.require(u > 0.0 && u < 0.5, "0 < u < 1/2");
            e.require(d.is_finite() && d >= 0.0, "finite relative entropy");
            4.0 * (2.0 * d.max(1.0) / u).exp_m1() / (PI * (0.5 - u).powi(2)) * c
        }
        "transfer_lp_bis" => {
            let (p, mp, c) = (e.get("p")?, e.get("m_p")?, e.get("mu_c_p")?);
            e.nu_lc();
            e.require(p > 1.0 && p <= 2.0, "1 < p <= 2");
            e.require(mp.is_finite(), "M_p finite");
            16.0 * p.sqrt() / (PI * (p - 1.0).sqrt()) * 8f64.powf(p / (2.0 * (p - 1.0))) * c.sqrt() * mp
        }
        "transfer_entropy_bis" => {
            let (d, c) = (e.get("entropy")?, e.get("mu_c_p")?);
            e.nu_lc();
            e.require(d.is_finite() && d >= 0.0, "finite relative entropy");
            32.0 / PI * c.sqrt() * (3.0 * c.sqrt().exp()).max(1.0) * d.max(1.0)
        }
        "milman_density" => {
            let (r, c) = (e.get("ratio_mu_nu")?, e.get("mu_cheeger")?);
            e.nu_lc();
            e.mu_lc();
            e.require(r.is_finite(), "|dmu/dnu|_inf finite");
            r * r * c
        }
        "barthe_milman_profile" | "barthe_milman_alpha" => {
            let (p, mp) = (e.get("p")?, e.get("m_p")?);
            let prof = e.profile("mu_alpha", ProfileKind::Concentration)?;
            e.require(p > 1.0, "p > 1");
            e.require(mp.is_finite(), "M_p finite");
            let q = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
            if entry.id == "barthe_milman_alpha" {
                let r = e.get("r")?;
                e.require(r > 0.0, "r > 0");
                // alpha_mu(r/2) from the nonincreasing table, rounded outward
                (2.0 * mp * prof.step_value(r / 2.0).powf(1.0 / q)).min(1.0)
            } else {
                e.nu_lc();
                let (s, v) = scan_min(&open_grid(0.0, 0.25), |s| {
                    32.0 * prof.generalized_inverse((s / (2.0 * mp)).powf(q)) / (PI * (1.0 - 4.0 * s).powi(2))
                });
                e.note("s*", s);
                v
            }
        }
        "tv_transference" => {
            let (d, c) = (e.get("tv")?, e.get("mu_cheeger")?);
            e.nu_lc();
            e.mu_lc();
            e.require((0.0..1.0).contains(&d), "d_TV < 1");
            let eps = 1.0 - d;
            192.0 * E / PI / (eps * eps) * (1.0 / eps).ln().max(1.0) * c
        }
        "w1_weak" => {
            let (c, w) = (e.get("mu_cheeger_mean")?, e.get("w1")?);
            e.nu_lc();
            16.0 / PI * (c + 2.0 * w)
        }
        "w1_weak_beta" => {
            let (b, w, s) = (e.get("mu_beta")?, e.get("w1")?, e.get("s")?);
            e.require(s > 0.0, "s > 0");
            b + 2.0 * w
        }
        "tv_weak" => {
            let (b, s, d) = (e.get("mu_beta")?, e.get("s")?, e.get("tv")?);
            e.nu_lc();
            e.require(d <= 0.25, "d_TV <= 1/4");
            e.require(s >= 0.0 && s < 0.5 - 2.0 * d, "0 <= s < 1/2 - 2 d_TV");
            16.0 * b / (PI * (1.0 - 2.0 * s - 4.0 * d).powi(2))
        }
        "tv_weak_beta" => {
            let (b, s, d) = (e.get("mu_beta")?, e.get("s")?, e.get("tv")?);
            e.require(s > 2.0 * d, "s' > 2 d_TV");
            b
        }
        "dud_weak" => {
            let (b, s, d) = (e.get("mu_beta")?, e.get("s")?, e.get("dudley")?);
            e.nu_lc();
            e.require(s >= 0.0 && 1.0 - 2.0 * s - 4.0 * d > 0.0, "0 <= s, 1 - 2s - 4 d_Dud > 0");
            16.0 * (b + 2.0 * d) / (PI * (1.0 - 2.0 * s - 4.0 * d).powi(2))
        }
        "dud_weak_beta" => {
            let (b, s, d) = (e.get("mu_beta")?, e.get("s")?, e.get("dudley")?);
            e.require(s > 2.0 * d, "s' > 2 d_Dud");
            b + 2.0 * d
        }
        "mollification_mix" => {
            let (l, z, x) = (e.get("lambda")?, e.get("c_p_z")?, e.get("c_p_x")?);
            e.require((0.0..=1.0).contains(&l), "0 <= lambda <= 1");
            l * z + (1.0 - l) * x
        }
        "mollification_sum" => e.get("c_p_z")? + e.get("c_p_x")?,
        "klartag_cube" => {
            let (t, r) = (e.get("theta")?, e.get("r_const")?);
            e.nu_lc();
            e.require(t > 0.0, "theta > 0");
            e.require(r >= 1.0, "R >= 1");
            CUBE_C * r * r * t * t / 2.0
        }
        "uniform_convolution" | "uniform_convolution_cheeger" => {
            let t = e.get("theta")?;
            e.require(t > 1.0, "theta > 1");
            if entry.id == "uniform_convolution" {
                0.5 * CUBE_C * (t - 1.0).powi(2)
            } else {
                6.0 / 2f64.sqrt() * CUBE_C.sqrt() * (t - 1.0)
            }
        }
        "gaussian_convolution_restricted" => {
            let (b, t) = (e.get("beta")?, e.get("theta")?);
            e.nu_lc();
            e.require(b > 0.0 && t > 0.0, "beta, theta > 0");
            20.0 / 9.0 * t * t * (t * t / (8.0 * b * b)).exp()
        }
        "demollification" => {
            let (l, c) = (e.get("lambda")?, e.get("c_p_mixed")?);
            e.nu_lc();
            e.require(l > 0.0 && l <= 1.0, "0 < lambda <= 1");
            c / l + 1.0 / l - 1.0
        }
        "demollification_ab" => {
            let (a, b, c) = (e.get("alpha")?, e.get("beta")?, e.get("c_p_mixed")?);
            e.nu_lc();
            e.require(a != 0.0, "alpha != 0");
            (c + b * b) / (a * a)
        }
        "demollification_cheeger" => {
            let (a, b, c) = (e.get("alpha")?, e.get("beta")?, e.get("cheeger_mixed")?);
            e.nu_lc();
            e.require(a > 0.0 && b >= 0.0, "alpha > 0, beta >= 0");
            12.0 / a * c + 6.0 * b / a
        }
        "beta_convolution" => {
            let (a, b, s) = (e.get("beta_mu_half")?, e.get("beta_nu_half")?, e.get("s")?);
            e.require(s > 0.0, "s > 0");
            a + b
        }
        "bl_to_cheeger" | "bl_to_cheeger_pair" => {
            let d = e.get("bl")?;
            let c = 13824.0 * E / PI;
            e.nu_lc();
            e.require((0.0..1.0).contains(&d), "d_BL < 1");
            let eps = 1.0 - d;
            let core = (1.0 / eps).ln().max(1.0) / (eps * eps);
            if entry.id == "bl_to_cheeger" {
                c * core + 6.0
            } else {
                let m = e.get("mu_cheeger")?;
                e.mu_lc();
                6.0 * c * core * (2.0 * m + 1.0) + 6.0
            }
        }
        "semigroup_tv_w1" => {
            let (t, w) = (e.get("time")?, e.get("w1")?);
            e.require(t > 0.0, "T > 0");
            (-t / 2.0).exp() / (2.0 * PI * -(-t).exp_m1()).sqrt() * w
        }
        "semigroup_w1" => {
            let (t, w) = (e.get("time")?, e.get("w1")?);
            e.require(t >= 0.0, "T >= 0");
            (-t / 2.0).exp() * w
        }
        "lp_to_w1" => {
            let d = e.get("lp")?;
            e.nu_lc();
            e.mu_lc();
            e.require((0.0..1.0).contains(&d), "d_LP < 1");
            lp_w1_factor(d)
        }
        "lp_to_w1_lower" => {
            let w = e.get("w1")?;
            e.require(w >= 0.0, "W1 >= 0");
            w.sqrt()
        }
        "lp_to_w1_cheeger" => {
            let (d, c) = (e.get("lp")?, e.get("mu_cheeger_mean")?);
            e.nu_lc();
            e.mu_lc();
            e.require((0.0..1.0).contains(&d), "d_LP < 1");
            16.0 / PI * (c + 2.0 * lp_w1_factor(d))
        }
        "lp_semigroup" => {
            let (t, d) = (e.get("time")?, e.get("lp")?);
            e.nu_lc();
            e.require(t >= 0.0, "T >= 0");
            e.require((0.0..1.0).contains(&d), "d_LP < 1");
            (-t / 4.0).exp() * lp_w1_factor(d).sqrt()
        }
        "kyfan_expectation" => {
            let k = e.get("kyfan")?;
            e.nu_lc();
            e.mu_lc();
            e.require((0.0..1.0).contains(&k), "K < 1");
            lp_w1_factor(k)
        }
        "bl_to_w1" => {
            let d = e.get("bl")?;
            e.nu_lc();
            e.mu_lc();
            e.require(d > 0.0 && d < 2.0 / 3.0, "0 < d_BL < 2/3");
            (1.5 * d).sqrt() * (1.0 + (6.0 * d).sqrt() / (2f64.sqrt() / (3.0 * d).sqrt()).ln())
        }
        other => unreachable!("catalog entry {other} has no evaluator"),
    };
    Ok(e.finish(value))
}

/// Result of [`verify_against_oracle`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub pass: bool,
    /// `value / oracle`
    pub tightness: f64,
}

/// `value >= oracle (1 - slack)`. Inert certificates are an error.
pub fn verify_against_oracle(cert: &BoundCertificate, oracle_value: f64, slack: f64) -> Result<Verification> {
    if cert.is_inert() {
        return Err(Error::InertCertificate(cert.formula_id.clone()));
    }
    Ok(Verification { pass: cert.value >= oracle_value * (1.0 - slack), tightness: cert.value / oracle_value })
}
