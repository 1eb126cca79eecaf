use logconcave::bounds::{
    best_bound, beta_lower_bound, candidates, evaluate, log_concave_family, validity_sweep, verify_against_oracle,
    Context, Inputs, Reference, Target, CATALOG,
};
use logconcave::oracle::{cheeger_constant, spectral_poincare, Centering};
use logconcave::{apply_affine, convolve_gaussian, realize, scale_mix, Error, Measure, MeasureSpec};
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::f64::consts::PI;

fn measure(spec: MeasureSpec) -> Measure {
    realize(&spec.with_n(1024)).unwrap()
}

fn small_family() -> Vec<(String, Measure)> {
    log_concave_family(1024).into_iter().map(|(n, s)| (n, realize(&s).unwrap())).collect()
}

#[test]
fn catalog_ids_are_unique_and_evaluable() {
    let ids: BTreeSet<_> = CATALOG.iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), CATALOG.len());
    let entries: BTreeSet<_> = CATALOG.iter().map(|e| e.entry).collect();
    assert_eq!(entries, (1..=33).collect());
    for e in CATALOG {
        // every id has an evaluator, which asks for its first input
        match evaluate(e.id, &Inputs::new()) {
            Err(Error::MissingInput { formula, input }) => {
                assert_eq!(formula, e.id);
                assert_eq!(input, e.inputs[0]);
            }
            other => panic!("{}: {other:?}", e.id),
        }
    }
}

#[test]
fn closed_form_examples() {
    let c = evaluate("cheeger_to_poincare", &Inputs::new().with("cheeger", 1.0)).unwrap();
    assert_eq!(c.value, 4.0);
    assert_eq!(c.target, Target::PoincareConstant);
    let c = evaluate("ledoux_improved", &Inputs::new().with("c_p", 4.0)).unwrap();
    assert!((c.value - 32.0 / PI).abs() < 1e-12);
    assert!((c.value - 10.186).abs() < 1e-3);
    let c = evaluate("weakmil_osc", &Inputs::new().with("beta", 1.0).with("s", 0.0)).unwrap();
    assert!((c.value - 16.0 / PI).abs() < 1e-12);
    assert!(c.diagnostics.iter().any(|d| d.contains("assumed")));
    let c = evaluate("ledoux_reverse", &Inputs::new().with("c_p", 4.0)).unwrap();
    assert_eq!(c.value, 12.0);
    let c = evaluate("kls_variance_484", &Inputs::new().with("variance", 2.0)).unwrap();
    assert_eq!(c.value, 968.0);
}

#[test]
fn unknown_and_missing_are_errors() {
    assert!(matches!(evaluate("nope", &Inputs::new()), Err(Error::UnknownFormula(_))));
    let err = evaluate("weakmil_osc", &Inputs::new().with("beta", 1.0)).unwrap_err();
    assert!(matches!(err, Error::MissingInput { ref input, .. } if input == "s"));
}

#[test]
fn failed_preconditions_are_inert() {
    for (id, inputs) in [
        ("weakmil_osc", Inputs::new().with("beta", 1.0).with("s", 0.5)),
        ("weakmil_var", Inputs::new().with("beta_var", 1.0).with("s", 1.0)),
        ("l2_truncation", Inputs::new().with("a", 1.4).with("cheeger_truncated", 1.0)),
        ("transfer_lp_bis", Inputs::new().with("p", 2.5).with("m_p", 1.0).with("mu_c_p", 1.0)),
        ("tv_weak", Inputs::new().with("mu_beta", 1.0).with("s", 0.0).with("tv", 0.3)),
        ("weakmil_osc", Inputs::new().with("beta", 1.0).with("s", 0.1).log_concave(false, true)),
    ] {
        let c = evaluate(id, &inputs).unwrap();
        assert!(!c.preconditions_met, "{id}");
        assert_eq!(c.value, f64::INFINITY);
        assert!(!c.diagnostics.is_empty());
        assert!(matches!(verify_against_oracle(&c, 1.0, 0.02), Err(Error::InertCertificate(_))));
    }
}

#[test]
fn verify_examples() {
    let c = evaluate("cheeger_to_poincare", &Inputs::new().with("cheeger", 1.0)).unwrap();
    let v = verify_against_oracle(&c, 4.0, 0.01).unwrap();
    assert!(v.pass);
    assert_eq!(v.tightness, 1.0);
    let c = evaluate("kls_variance", &Inputs::new().with("variance", 0.975)).unwrap();
    assert!((c.value - 3.9).abs() < 1e-12);
    assert!(!verify_against_oracle(&c, 4.0, 0.01).unwrap().pass);
}

fn scalar_value() -> impl Strategy<Value = f64> {
    prop_oneof![-1.0..5.0f64, Just(0.0), Just(0.5), Just(f64::INFINITY)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_are_nonnegative_or_inert(vals in prop::collection::vec(scalar_value(), 4)) {
        for e in CATALOG {
            if e.inputs.iter().any(|i| matches!(*i, "alpha" | "beta_profile" | "mu_alpha")) {
                continue;
            }
            let mut inp = Inputs::new();
            for (k, name) in e.inputs.iter().enumerate() {
                inp = inp.with(name, vals[k % vals.len()]);
            }
            let c = evaluate(e.id, &inp).unwrap();
            if c.preconditions_met {
                prop_assert!(c.value >= 0.0, "{} gave {}", e.id, c.value);
            } else {
                prop_assert_eq!(c.value, f64::INFINITY);
            }
        }
    }

    #[test]
    fn weakmil_at_zero_is_the_strong_constant(beta in 1e-6..1e3f64) {
        let c = evaluate("weakmil_osc", &Inputs::new().with("beta", beta).with("s", 0.0)).unwrap();
        prop_assert!((c.value - 16.0 / PI * beta).abs() <= 1e-12 * c.value);
    }

    #[test]
    fn latala_tail_decreases_in_t_and_n(t in 3.5..8.0f64, n in 2.0..1e4f64, eps in 0.05..1.0f64) {
        let at = |t: f64, n: f64| {
            evaluate("latala_tail", &Inputs::new().with("dim", n).with("t", t).with("epsilon", eps)).unwrap()
        };
        let base = at(t, n);
        prop_assume!(base.preconditions_met);
        prop_assert!(at(t * 1.1, n).value <= base.value);
        prop_assert!(at(t, n * 2.0).value <= base.value);
    }

    #[test]
    fn linf_truncation_tends_to_the_marginal(c in 0.1..10.0f64, a in 2.0..4.0f64) {
        let at = |n: f64| {
            evaluate(
                "linf_truncation",
                &Inputs::new().with("dim", n).with("a", a).with("epsilon", 1.0).with("cheeger_restricted", c),
            )
            .unwrap()
        };
        let mut last = f64::INFINITY;
        for n in [1e2, 1e3, 1e4, 1e6, 1e9] {
            let v = at(n);
            if v.preconditions_met {
                prop_assert!(v.value >= c && v.value <= last);
                last = v.value;
            }
        }
        prop_assert!((last - c) / c < 1e-6 * 10f64.powf(3.0 - a) + 1e-5);
    }
}

#[test]
fn exponential_from_its_own_profile() {
    let m = measure(MeasureSpec::exponential(1.0));
    let ctx = Context { own_profiles: true, ..Context::default() };
    let best = best_bound(Target::CheegerMedian, &m, &ctx).unwrap();
    let oracle = cheeger_constant(&m).unwrap();
    assert!((oracle - 1.0).abs() < 1e-2);
    assert!(best.value >= oracle && best.value <= 60.0, "{}", best.value);

    // entry 7 with alpha(r) = e^{-r}/2 by direct scan
    let closed = (1..4000)
        .map(|k| k as f64 / 16000.0)
        .map(|s| 16.0 * (0.5 / s).ln() / (PI * (1.0 - 4.0 * s).powi(2)))
        .fold(f64::INFINITY, f64::min);
    let all = candidates(Target::CheegerMedian, &m, &ctx).unwrap();
    let e7 = all.iter().find(|c| c.formula_id == "concentration_to_cheeger").unwrap();
    assert!((e7.value / closed - 1.0).abs() < 1e-2, "{} vs {closed}", e7.value);
}

#[test]
fn gaussian_against_itself_gives_ratio_one() {
    let m = measure(MeasureSpec::gaussian(0.0, 1.0));
    let ctx = Context { references: vec![Reference::new("gamma", m.clone())], ..Context::default() };
    let all = candidates(Target::PoincareConstant, &m, &ctx).unwrap();
    let c = all.iter().find(|c| c.formula_id == "density_ratio_classic").unwrap();
    assert_eq!(c.input("ratio_nu_mu"), Some(1.0));
    assert_eq!(c.input("ratio_mu_nu"), Some(1.0));
    assert!((c.value - 1.0).abs() < 1e-3);
}

#[test]
fn empty_context_still_has_moment_bounds() {
    let m = measure(MeasureSpec::uniform(-1.0, 1.0));
    let ctx = Context::default();
    let cheeger = candidates(Target::CheegerMedian, &m, &ctx).unwrap();
    assert!(cheeger.iter().any(|c| c.formula_id == "first_moment" && c.preconditions_met));
    let cp = candidates(Target::PoincareConstant, &m, &ctx).unwrap();
    let kls = cp.iter().find(|c| c.formula_id == "kls_variance").unwrap();
    assert!((kls.value - 4.0 / 3.0).abs() < 1e-6);
    let best = best_bound(Target::PoincareConstant, &m, &ctx).unwrap();
    assert!(best.value <= kls.value);
}

#[test]
fn targets_other_than_constants_are_rejected() {
    let m = measure(MeasureSpec::gaussian(0.0, 1.0));
    assert!(best_bound(Target::Tail, &m, &Context::default()).is_err());
}

#[test]
fn not_log_concave_has_no_applicable_formula() {
    let m = measure(MeasureSpec::mixture(vec![0.5, 0.5], vec![-3.0, 3.0], vec![0.5, 0.5]));
    assert!(matches!(best_bound(Target::CheegerMedian, &m, &Context::default()), Err(Error::NoApplicableFormula)));
}

#[test]
fn enlarging_the_context_never_increases_the_bound() {
    let m = measure(MeasureSpec::exponential(0.7));
    let gamma = measure(MeasureSpec::gaussian(0.0, 1.0));
    let smooth = convolve_gaussian(&m, 0.1).unwrap();
    let ladder = [
        Context::default(),
        Context { own_profiles: true, ..Context::default() },
        Context { own_profiles: true, own_constants: true, references: vec![] },
        Context::full(vec![Reference::new("gamma", gamma.clone())]),
        Context::full(vec![Reference::new("gamma", gamma), Reference::new("smoothed", smooth)]),
    ];
    for target in [Target::CheegerMedian, Target::PoincareConstant] {
        let values: Vec<f64> = ladder.iter().map(|c| best_bound(target, &m, c).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{target:?}: {values:?}");
    }
}

#[test]
fn poincare_chain_goes_through_the_best_cheeger_certificate() {
    let m = measure(MeasureSpec::uniform(0.0, 2.0));
    let ctx = Context { own_profiles: true, ..Context::default() };
    let all = candidates(Target::PoincareConstant, &m, &ctx).unwrap();
    let chained = all.iter().find(|c| c.formula_id == "cheeger_to_poincare").unwrap();
    let inner = &chained.chain[0];
    let best_cheeger = best_bound(Target::CheegerMedian, &m, &ctx).unwrap();
    assert_eq!(inner.value, best_cheeger.value);
    assert!((chained.value - 4.0 * inner.value.powi(2)).abs() <= 1e-12 * chained.value);
}

#[test]
fn demollification_holds_on_the_family() {
    for (name, m) in small_family() {
        let c_p = spectral_poincare(&m).unwrap().c_p;
        for lambda in [0.25, 0.5, 0.9] {
            let mixed = spectral_poincare(&scale_mix(&m, lambda).unwrap()).unwrap().c_p;
            let rhs = mixed / lambda + 1.0 / lambda - 1.0;
            assert!(c_p <= rhs * 1.02, "{name} lambda={lambda}: {c_p} > {rhs}");
        }
    }
}

#[test]
fn gaussian_convolution_is_subadditive() {
    for (name, m) in small_family() {
        let c_p = spectral_poincare(&m).unwrap().c_p;
        for beta in [0.1, 0.5, 1.0] {
            let conv = spectral_poincare(&convolve_gaussian(&m, beta).unwrap()).unwrap().c_p;
            assert!(conv <= (c_p + beta * beta) * 1.02, "{name} beta={beta}: {conv}");
        }
    }
}

#[test]
fn variance_of_the_squared_norm_after_smoothing() {
    for (name, m) in small_family() {
        let (mean, sd) = (m.mean(), m.variance().sqrt());
        let z = apply_affine(&m, 1.0 / sd, -mean / sd).unwrap();
        let var_sq = |x: &Measure| {
            let m2 = x.integrate(|v| v * v);
            x.integrate(|v| v.powi(4)) - m2 * m2
        };
        for t in [0.25f64, 1.0, 4.0] {
            let y = convolve_gaussian(&z, t.sqrt()).unwrap();
            let lhs = var_sq(&y);
            let rhs = var_sq(&z) + 2.0 * t * (2.0 + t);
            assert!((lhs / rhs - 1.0).abs() < 1e-3, "{name} t={t}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn tv_transference_holds_on_pairs() {
    let fam = small_family();
    let mut checked = 0;
    for (i, (a, nu)) in fam.iter().enumerate().step_by(2) {
        for (b, mu) in fam.iter().skip(i + 1).step_by(3) {
            let d = logconcave::tv(nu, mu).unwrap();
            if d >= 1.0 - 1e-9 {
                continue;
            }
            let inp =
                Inputs::new().log_concave(true, true).with("tv", d).with("mu_cheeger", cheeger_constant(mu).unwrap());
            let c = evaluate("tv_transference", &inp).unwrap();
            let oracle = cheeger_constant(nu).unwrap();
            assert!(verify_against_oracle(&c, oracle, 0.02).unwrap().pass, "{a} vs {b}");
            checked += 1;
        }
    }
    assert!(checked >= 5);
}

#[test]
fn beta_lower_bound_matches_the_mean_deviation_at_zero() {
    let m = measure(MeasureSpec::uniform(-1.0, 1.0));
    // clamp at the full radius is the identity: E|X| = 1/2
    assert!((beta_lower_bound(&m, 0.0, Centering::Median) - 0.5).abs() < 1e-3);
    assert!(beta_lower_bound(&m, 0.2, Centering::Mean) <= beta_lower_bound(&m, 0.1, Centering::Mean));
}

#[test]
fn lp_upper_bound_fails_under_translation() {
    // for a unit shift d_LP is about 0.29, so the right side is about 0.41
    let a = measure(MeasureSpec::gaussian(0.0, 1.0));
    let b = measure(MeasureSpec::gaussian(1.0, 1.0));
    let lp = logconcave::levy_prokhorov(&a, &b).unwrap();
    let c = evaluate("lp_to_w1", &Inputs::new().with("lp", lp)).unwrap();
    assert!(c.preconditions_met);
    assert!(c.value < logconcave::w1(&a, &b).unwrap());
}

#[test]
fn sweep_fails_only_on_the_lp_upper_bound() {
    let fam = small_family();
    for (name, m) in fam.iter().step_by(3) {
        let refs = logconcave::bounds::default_references(m).unwrap();
        let rows = validity_sweep(name, m, &refs, 0.02).unwrap();
        assert!(rows.iter().filter(|r| r.preconditions_met).count() > 100);
        for r in rows.iter().filter(|r| !r.pass) {
            assert_eq!(r.formula_id, "lp_to_w1", "{name}: {r:?}");
        }
    }
}
