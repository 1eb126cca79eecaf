//! Static formula table. Entry numbers group related sub-formulas.

use super::Target;
use crate::oracle::Centering;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormulaEntry {
    pub id: &'static str,
    pub entry: u8,
    pub target: Target,
    pub expression: &'static str,
    /// Named real or profile inputs, in evaluation order.
    pub inputs: &'static [&'static str],
    pub preconditions: &'static str,
}

const CHEEGER: Target = Target::CheegerMedian;
const CP: Target = Target::PoincareConstant;
const BETA_MEAN: Target = Target::BetaProfile(Centering::Mean);
const BETA_MED: Target = Target::BetaProfile(Centering::Median);

macro_rules! entry {
    ($id:literal, $n:literal, $t:expr, $expr:literal, [$($i:literal),*], $pre:literal) => {
        FormulaEntry { id: $id, entry: $n, target: $t, expression: $expr, inputs: &[$($i),*], preconditions: $pre }
    };
}

pub static CATALOG: &[FormulaEntry] = &[
    entry!("cheeger_to_poincare", 1, CP, "C_P <= 4 C'_C^2", ["cheeger"], "none"),
    entry!("ledoux_reverse", 2, CHEEGER, "C'_C <= 6 sqrt(C_P)", ["c_p"], "nu log-concave"),
    entry!("ledoux_improved", 3, CHEEGER, "C'_C <= (16/pi) sqrt(C_P)", ["c_p"], "nu log-concave"),
    entry!(
        "weakmil_osc",
        4,
        CHEEGER,
        "C'_C <= 4 beta(s) / (pi (1/2 - s)^2)",
        ["beta", "s"],
        "nu log-concave; 0 <= s < 1/2"
    ),
    entry!(
        "weakmil_var",
        5,
        CHEEGER,
        "C'_C <= 16 beta(s) / (pi (1 - s)^2)",
        ["beta_var", "s"],
        "nu log-concave; 0 <= s < 1"
    ),
    entry!(
        "weakmil_optimized",
        6,
        CHEEGER,
        "C'_C <= 4 / (pi (1/2 - s_nu)^4), beta(s_nu) = (1/2 - s_nu)^-2",
        ["beta_profile"],
        "nu log-concave; crossing exists below 1/2"
    ),
    entry!(
        "concentration_to_cheeger",
        7,
        CHEEGER,
        "C'_C <= inf_{0<s<1/4} 16 alpha^-1(s) / (pi (1 - 4s)^2)",
        ["alpha"],
        "nu log-concave"
    ),
    entry!(
        "concentration_to_poincare",
        7,
        CP,
        "C_P <= inf_{0<s<1/4} (32 alpha^-1(s) / (pi (1 - 4s)^2))^2",
        ["alpha"],
        "nu log-concave"
    ),
    entry!("milman_profile", 8, CHEEGER, "C'_C <= inf_{0<s<1/2} alpha^-1(s) / (1 - 2s)", ["alpha"], "nu log-concave"),
    entry!("first_moment", 9, CHEEGER, "C'_C <= (16/pi) E|x - m|", ["abs_dev"], "nu log-concave"),
    entry!("first_moment_variance", 9, CHEEGER, "C'_C <= (16/pi) Var^{1/2}", ["variance"], "nu log-concave"),
    entry!("kls_variance", 10, CP, "C_P <= 4 Var", ["variance"], "nu log-concave"),
    entry!("kls_variance_484", 10, CP, "C_P <= 484 Var", ["variance"], "nu log-concave"),
    entry!(
        "radial_split",
        11,
        CHEEGER,
        "C'_C <= (32/pi) (E||X| - sqrt n| + sqrt(n C_P(angle)))",
        ["radial_abs_dev", "dim", "c_p_angle"],
        "nu log-concave; n >= 2"
    ),
    entry!(
        "weak22_to_cheeger",
        12,
        CHEEGER,
        "C'_C <= 4 sqrt(beta(s) ln 2) / (1 - 6s)",
        ["beta22", "s"],
        "nu log-concave; 0 <= s < 1/6"
    ),
    entry!(
        "restriction",
        13,
        CHEEGER,
        "C'_C <= nu(A) C'_C(nu_A) / (2 nu(A) - 1)",
        ["nu_a", "cheeger_restricted"],
        "nu log-concave; nu(A) > 1/2"
    ),
    entry!(
        "restriction_weak",
        14,
        CHEEGER,
        "C'_C <= 4 nu(A) beta_A(u) / (pi ((1 - u) nu(A) - 1/2)^2)",
        ["nu_a", "beta_restricted", "u"],
        "nu log-concave; 0 <= u < 1 - 1/(2 nu(A))"
    ),
    entry!(
        "l2_truncation",
        15,
        CHEEGER,
        "C'_C(Z) <= a^2 / (a^2 - 2) C'_C(Z(a))",
        ["a", "cheeger_truncated"],
        "nu log-concave; a > sqrt 2"
    ),
    entry!(
        "l2_truncation_variance",
        15,
        Target::Variance,
        "Var(Z) <= Var(Zbar(a)) / (1 - kappa/a - 1/a^2), kappa = 7",
        ["a", "variance_truncated"],
        "nu log-concave; 1 - 7/a - 1/a^2 > 0"
    ),
    entry!(
        "linf_truncation",
        16,
        CHEEGER,
        "C'_C <= n^{a-1} / (n^{a-1} - (8 - 2 eps)/eps) C'_C(nu_{K_a})",
        ["dim", "a", "epsilon", "cheeger_restricted"],
        "n >= 2; 0 < eps <= 1; n^{a-1} > (8 - 2 eps)/eps"
    ),
    entry!(
        "latala_tail",
        17,
        Target::Tail,
        "P(max|Z_i| >= t ln n) <= ((8 - 2 eps)/eps) / n^{(2 - eps) t / (2 sqrt 3) - 1}",
        ["dim", "t", "epsilon"],
        "n >= 2; 0 < eps <= 1; t >= 2 sqrt 3 / (2 - eps)"
    ),
    entry!("bobkov_1d", 18, CP, "C_P <= 12 Var", ["variance"], "nu log-concave, one-dimensional"),
    entry!(
        "density_ratio_classic",
        19,
        CP,
        "C_P(nu) <= |dnu/dmu|_inf |dmu/dnu|_inf C_P(mu)",
        ["ratio_nu_mu", "ratio_mu_nu", "mu_c_p"],
        "both ratios finite"
    ),
    entry!(
        "density_ratio_classic_cheeger",
        19,
        CHEEGER,
        "C'_C(nu) <= |dnu/dmu|_inf |dmu/dnu|_inf C'_C(mu)",
        ["ratio_nu_mu", "ratio_mu_nu", "mu_cheeger"],
        "both ratios finite"
    ),
    entry!(
        "transfer_lp",
        20,
        CHEEGER,
        "C'_C(nu) <= D C(mu) M_p^{p/(p-1)}, D = 16 (p+1)^{1/(p-1)} / (pi (1/2 - 1/(p+1))^2)",
        ["p", "m_p", "mu_c"],
        "nu log-concave; p > 1"
    ),
    entry!(
        "transfer_lp_beta",
        20,
        BETA_MED,
        "beta_nu(s) <= M_p^{p/(p-1)} s^{-1/(p-1)} C(mu)",
        ["p", "m_p", "mu_c", "s"],
        "p > 1; s > 0"
    ),
    entry!(
        "transfer_entropy",
        21,
        CHEEGER,
        "C'_C(nu) <= 4 (exp(2 max(1, D)/u) - 1) / (pi (1/2 - u)^2) C(mu)",
        ["entropy", "u", "mu_c"],
        "nu log-concave; 0 < u < 1/2"
    ),
    entry!(
        "transfer_lp_bis",
        22,
        CHEEGER,
        "C'_C(nu) <= 16 sqrt p / (pi sqrt(p-1)) 8^{p/(2(p-1))} sqrt(C_P(mu)) M_p",
        ["p", "m_p", "mu_c_p"],
        "nu log-concave; 1 < p <= 2"
    ),
    entry!(
        "transfer_entropy_bis",
        23,
        CHEEGER,
        "C'_C(nu) <= (32/pi) sqrt(C_P(mu)) max(1, 3 e^{sqrt C_P(mu)}) max(1, D)",
        ["entropy", "mu_c_p"],
        "nu log-concave"
    ),
    entry!(
        "milman_density",
        24,
        CHEEGER,
        "C'_C(nu) <= |dmu/dnu|_inf^2 C'_C(mu)",
        ["ratio_mu_nu", "mu_cheeger"],
        "nu and mu log-concave; ratio finite"
    ),
    entry!(
        "barthe_milman_profile",
        25,
        CHEEGER,
        "C'_C(nu) <= inf_{0<s<1/4} 32 alpha_mu^-1((s / 2M_p)^q) / (pi (1 - 4s)^2)",
        ["p", "m_p", "mu_alpha"],
        "nu log-concave; p > 1 (p = inf allowed)"
    ),
    entry!(
        "barthe_milman_alpha",
        25,
        Target::AlphaProfile,
        "alpha_nu(r) <= 2 M_p alpha_mu(r/2)^{1/q}",
        ["p", "m_p", "mu_alpha", "r"],
        "p > 1 (p = inf allowed); r > 0"
    ),
    entry!(
        "tv_transference",
        26,
        CHEEGER,
        "C'_C(nu) <= (kappa/eps^2) max(1, ln(1/eps)) C'_C(mu), eps = 1 - d_TV, kappa = 192e/pi",
        ["tv", "mu_cheeger"],
        "nu and mu log-concave; d_TV < 1"
    ),
    entry!("w1_weak", 27, CHEEGER, "C'_C(nu) <= (16/pi) (C_C(mu) + 2 W1)", ["mu_cheeger_mean", "w1"], "nu log-concave"),
    entry!("w1_weak_beta", 27, BETA_MEAN, "beta_nu(s) <= beta_mu(s) + 2 W1", ["mu_beta", "w1", "s"], "s > 0"),
    entry!(
        "tv_weak",
        28,
        CHEEGER,
        "C'_C(nu) <= 16 beta_mu(s) / (pi (1 - 2s - 4 d_TV)^2)",
        ["mu_beta", "s", "tv"],
        "nu log-concave; d_TV <= 1/4; 0 <= s < 1/2 - 2 d_TV"
    ),
    entry!("tv_weak_beta", 28, BETA_MEAN, "beta_nu(s') <= beta_mu(s' - 2 d_TV)", ["mu_beta", "s", "tv"], "s' > 2 d_TV"),
    entry!(
        "dud_weak",
        29,
        CHEEGER,
        "C'_C(nu) <= 16 (beta_mu(s) + 2 d_Dud) / (pi (1 - 2s - 4 d_Dud)^2)",
        ["mu_beta", "s", "dudley"],
        "nu log-concave; 0 <= s; 1 - 2s - 4 d_Dud > 0"
    ),
    entry!(
        "dud_weak_beta",
        29,
        BETA_MEAN,
        "beta_nu(s') <= beta_mu(s' - 2 d_Dud) + 2 d_Dud",
        ["mu_beta", "s", "dudley"],
        "s' > 2 d_Dud"
    ),
    entry!(
        "mollification_mix",
        30,
        CP,
        "C_P(sqrt(l) Z + sqrt(1-l) X) <= l C_P(Z) + (1-l) C_P(X)",
        ["lambda", "c_p_z", "c_p_x"],
        "0 <= lambda <= 1; Z, X independent"
    ),
    entry!("mollification_sum", 30, CP, "C_P(Z + X) <= C_P(Z) + C_P(X)", ["c_p_z", "c_p_x"], "Z, X independent"),
    entry!(
        "klartag_cube",
        30,
        CP,
        "C_P <= C R^2 theta^2 / 2, C = 40/9",
        ["theta", "r_const"],
        "log-concave on a cube of side theta satisfying the R-convexity condition; R >= 1"
    ),
    entry!(
        "uniform_convolution",
        30,
        CP,
        "C_P(nu_{theta,1}) <= C (theta - 1)^2 / 2, C = 40/9",
        ["theta"],
        "theta > 1; input supported on the unit cube"
    ),
    entry!(
        "uniform_convolution_cheeger",
        30,
        CHEEGER,
        "C'_C(nu_{theta,1}) <= (6 / sqrt 2) sqrt(C) (theta - 1), C = 40/9",
        ["theta"],
        "theta > 1; input supported on the unit cube"
    ),
    entry!(
        "gaussian_convolution_restricted",
        30,
        CP,
        "C_P(nu_{beta,theta}) <= (20/9) theta^2 exp(theta^2 / (8 beta^2))",
        ["beta", "theta"],
        "beta > 0; theta > 0; input log-concave"
    ),
    entry!(
        "demollification",
        30,
        CP,
        "C_P(Z) <= C_P(sqrt(l) Z + sqrt(1-l) G) / l + 1/l - 1",
        ["lambda", "c_p_mixed"],
        "Z log-concave; 0 < lambda <= 1"
    ),
    entry!(
        "demollification_ab",
        30,
        CP,
        "C_P(Z) <= C_P(a Z + b G) / a^2 + b^2 / a^2",
        ["alpha", "beta", "c_p_mixed"],
        "Z log-concave; alpha != 0"
    ),
    entry!(
        "demollification_cheeger",
        30,
        CHEEGER,
        "C'_C(Z) <= (12/a) C'_C(a Z + b G) + 6 b / a",
        ["alpha", "beta", "cheeger_mixed"],
        "Z log-concave; alpha > 0; beta >= 0"
    ),
    entry!(
        "beta_convolution",
        30,
        BETA_MEAN,
        "beta_{mu*nu}(s) <= beta_mu(s/2) + beta_nu(s/2)",
        ["beta_mu_half", "beta_nu_half", "s"],
        "s > 0"
    ),
    entry!(
        "bl_to_cheeger",
        31,
        CHEEGER,
        "C'_C(nu) <= (C/eps^2) max(1, ln(1/eps)) + 6, C = 13824e/pi, d_BL(nu, gamma) = 1 - eps",
        ["bl"],
        "nu log-concave; d_BL(nu, gamma) < 1"
    ),
    entry!(
        "bl_to_cheeger_pair",
        31,
        CHEEGER,
        "C'_C(nu) <= (D/eps^2) max(1, ln(1/eps)) (2 C'_C(mu) + 1) + 6, D = 6C",
        ["bl", "mu_cheeger"],
        "nu and mu log-concave; d_BL < 1"
    ),
    entry!(
        "semigroup_tv_w1",
        32,
        Target::Distance,
        "d_TV(G_T nu, G_T mu) <= e^{-T/2} / sqrt(2 pi (1 - e^{-T})) W1(nu, mu)",
        ["time", "w1"],
        "T > 0"
    ),
    entry!("semigroup_w1", 32, Target::Distance, "W1(G_T nu, G_T mu) <= e^{-T/2} W1(nu, mu)", ["time", "w1"], "T >= 0"),
    entry!(
        "lp_to_w1",
        33,
        Target::Distance,
        "W1 <= d_LP (1 + 2 d_LP / ln(1/d_LP))",
        ["lp"],
        "nu and mu log-concave; d_LP < 1"
    ),
    entry!("lp_to_w1_lower", 33, Target::Distance, "d_LP <= sqrt(W1)", ["w1"], "none"),
    entry!(
        "lp_to_w1_cheeger",
        33,
        CHEEGER,
        "C'_C(nu) <= (16/pi) (C_C(mu) + 2 d_LP (1 + 2 d_LP / ln(1/d_LP)))",
        ["lp", "mu_cheeger_mean"],
        "nu and mu log-concave; d_LP < 1"
    ),
    entry!(
        "lp_semigroup",
        33,
        Target::Distance,
        "d_LP(G_T nu, gamma) <= e^{-T/4} [d (1 + 2d / ln(1/d))]^{1/2}, d = d_LP(gamma, nu)",
        ["time", "lp"],
        "nu log-concave; d_LP < 1"
    ),
    entry!(
        "kyfan_expectation",
        33,
        Target::Distance,
        "E|X - Y| <= K (1 + 2K / ln(1/K)), X and Y independent",
        ["kyfan"],
        "X, Y independent and log-concave; K < 1"
    ),
    entry!(
        "bl_to_w1",
        33,
        Target::Distance,
        "W1 <= sqrt(3 d_BL / 2) (1 + sqrt(6 d_BL) / ln(sqrt 2 / sqrt(3 d_BL)))",
        ["bl"],
        "nu and mu log-concave; d_BL <= 2/3"
    ),
];

/// Symbols shared by several entries.
pub static SYMBOLS: &[(&str, &str)] = &[
    ("C(mu)", "any of C'_C(mu), 1/B_{1,inf}(mu), C_C(mu), sqrt(C_P(mu)); the smallest available is used"),
    ("B_{p,q}", "best constant in B_{p,q} nu^{1/p}(|f - nu f|^p) <= nu^{1/q}(|grad f|^q)"),
    ("Osc(f)", "sup f - inf f"),
    ("beta(s)", "rate of a weak (1, inf) Poincare inequality, nonincreasing in s"),
    ("alpha(r)", "concentration profile"),
    ("M_p", "(int (dnu/dmu)^p dmu)^{1/p}"),
    ("D", "relative entropy D(nu || mu)"),
];

pub fn lookup(id: &str) -> Option<&'static FormulaEntry> {
    CATALOG.iter().find(|e| e.id == id)
}
