use logconcave::{apply_affine, convolve_gaussian, realize, scale_mix, truncate, Measure, MeasureSpec};
use proptest::prelude::*;

fn gauss() -> Measure {
    realize(&MeasureSpec::gaussian(0.0, 1.0)).unwrap()
}

fn expo() -> Measure {
    realize(&MeasureSpec::exponential(1.0)).unwrap()
}

fn unif() -> Measure {
    realize(&MeasureSpec::uniform(-1.0, 1.0)).unwrap()
}

fn mass_and_cdf_ok(m: &Measure) {
    assert!((m.total_mass() - 1.0).abs() < 1e-9, "mass {}", m.total_mass());
    let c = m.cdf_cache();
    assert!(c.windows(2).all(|w| w[0] <= w[1]));
    assert!((c[c.len() - 1] - 1.0).abs() < 1e-9);
}

#[test]
fn realized_moments() {
    let g = gauss();
    assert!(g.mean().abs() < 1e-8);
    assert!((g.variance() - 1.0).abs() < 1e-6);
    // closed form: int x^2 e^{-|x|}/2 = 2
    assert!((expo().variance() - 2.0).abs() < 1e-4, "{}", expo().variance());
    assert!((unif().variance() - 1.0 / 3.0).abs() < 1e-6);
    for m in [g, expo(), unif()] {
        mass_and_cdf_ok(&m);
        assert!(m.is_log_concave());
        assert!(m.passes_concavity_test());
    }
}

#[test]
fn realize_rejects_bad_parameters() {
    assert!(realize::<f64>(&MeasureSpec::gaussian(0.0, -1.0)).is_err());
    assert!(realize::<f64>(&MeasureSpec::exponential(0.0)).is_err());
    assert!(realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0).with_n(32)).is_err());
    assert!(realize::<f64>(&MeasureSpec::uniform(1.0, 1.0)).is_err());
}

#[test]
fn mixture_flag_follows_shape() {
    let close = realize::<f64>(&MeasureSpec::mixture(vec![0.5, 0.5], vec![-0.5, 0.5], vec![1.0, 1.0])).unwrap();
    assert!(close.is_log_concave());
    let far = realize::<f64>(&MeasureSpec::mixture(vec![0.5, 0.5], vec![-3.0, 3.0], vec![1.0, 1.0])).unwrap();
    assert!(!far.is_log_concave());
}

#[test]
fn affine_examples() {
    let g = gauss();
    assert_eq!(apply_affine(&g, 1.0, 0.0).unwrap(), g);
    let s = apply_affine(&expo(), 1.0, 3.0).unwrap();
    assert!((s.mean() - 3.0).abs() < 1e-6);
    let r = apply_affine(&expo(), -2.0, 1.0).unwrap();
    assert!((r.variance() - 8.0).abs() < 1e-3);
    assert!((r.mean() - 1.0).abs() < 1e-9);
    assert!(apply_affine(&g, 0.0, 1.0).is_err());
}

#[test]
fn truncate_examples() {
    let g = gauss();
    assert_eq!(truncate(&g, f64::NEG_INFINITY, f64::INFINITY, false).unwrap(), g);
    let e = expo();
    let mass = e.cdf_at(3.0) - e.cdf_at(-3.0);
    assert!((mass - (1.0 - (-3.0f64).exp())).abs() < 1e-5);
    let t = truncate(&e, -3.0, 3.0, false).unwrap();
    mass_and_cdf_ok(&t);
    assert!(t.variance() < 2.0);
    // closed form of the truncated second moment
    let exact = (2.0 - (-3.0f64).exp() * (9.0 + 6.0 + 2.0)) / (1.0 - (-3.0f64).exp());
    assert!((t.variance() - exact).abs() < 3e-4, "{} vs {exact}", t.variance());
    let c = truncate(&e, -1.0, 3.0, true).unwrap();
    assert!(c.mean().abs() < 1e-9);
    assert!(c.passes_concavity_test());
    assert!(matches!(truncate(&g, 50.0, 60.0, false), Err(logconcave::Error::EmptyRestriction { .. })));
}

#[test]
fn convolution_examples() {
    let g = gauss();
    assert_eq!(convolve_gaussian(&g, 0.0).unwrap(), g);
    let u = convolve_gaussian(&unif(), 0.5).unwrap();
    assert!((u.variance() - (1.0 / 3.0 + 0.25)).abs() < 1e-4);
    assert!(u.passes_concavity_test());
    mass_and_cdf_ok(&u);
    let e = scale_mix(&expo(), 0.5).unwrap();
    assert!((e.variance() - 1.5).abs() < 1e-3, "{}", e.variance());
    assert!(e.passes_concavity_test());
    assert_eq!(scale_mix(&g, 1.0).unwrap(), g);
    assert!(scale_mix(&g, 0.0).is_err());
    assert!(scale_mix(&g, 1.5).is_err());
}

#[test]
fn radial_one_dimensional_is_half_line() {
    // v(r) = r^2/2 in dimension 1 is the half-gaussian
    let r = realize::<f64>(&MeasureSpec::radial(1, 2.0, 2f64.sqrt())).unwrap();
    let half = (2.0 / std::f64::consts::PI).sqrt();
    assert!((r.mean() - half).abs() < 1e-5, "{}", r.mean());
    let g = gauss();
    for x in [0.3, 1.0, 2.5] {
        let expect = 2.0 * (g.cdf_at(x) - 0.5);
        assert!((r.cdf_at(x) - expect).abs() < 1e-6);
    }
    // dimension 3 gives the chi(3) law: E R^2 = 3
    let chi = realize::<f64>(&MeasureSpec::radial(3, 2.0, 2f64.sqrt())).unwrap();
    let m2 = chi.variance() + chi.mean().powi(2);
    assert!((m2 - 3.0).abs() < 1e-5);
    assert!(chi.is_log_concave() && chi.passes_concavity_test());
}

#[test]
fn single_precision_realization() {
    let g = realize::<f32>(&MeasureSpec::gaussian(0.0, 1.0).with_n(512)).unwrap();
    assert!((g.variance() - 1.0).abs() < 1e-3);
    assert!((g.total_mass() - 1.0).abs() < 1e-5);
}

fn family(idx: usize) -> Measure {
    family_n(idx, 1024)
}

fn family_n(idx: usize, n: usize) -> Measure {
    let specs = [
        MeasureSpec::gaussian(0.5, 1.5),
        MeasureSpec::exponential(0.7),
        MeasureSpec::uniform(-0.5, 2.0),
        MeasureSpec::radial(3, 2.0, 1.0),
    ];
    realize(&specs[idx % specs.len()].clone().with_n(n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_scales_variance(idx in 0usize..4, lam in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0], c in -5.0f64..5.0) {
        let m = family(idx);
        let t = apply_affine(&m, lam, c).unwrap();
        prop_assert!((t.total_mass() - 1.0).abs() < 1e-8);
        prop_assert!((t.variance() / (lam * lam * m.variance()) - 1.0).abs() < 1e-6);
        prop_assert!(t.is_log_concave() && t.passes_concavity_test());
    }

    #[test]
    fn convolution_adds_variance(idx in 0usize..4, beta in 0.05f64..2.0) {
        // the additivity budget is stated for default grids
        let m = family_n(idx, 4096);
        let t = convolve_gaussian(&m, beta).unwrap();
        prop_assert!((t.total_mass() - 1.0).abs() < 1e-8);
        prop_assert!((t.mean() - m.mean()).abs() < 1e-4 * (1.0 + m.mean().abs()));
        let want = m.variance() + beta * beta;
        prop_assert!((t.variance() / want - 1.0).abs() < 1e-4, "{} vs {}", t.variance(), want);
        prop_assert!(t.is_log_concave() && t.passes_concavity_test());
    }

    #[test]
    fn truncation_stays_normalized(idx in 0usize..4, a in -1.0f64..0.5, w in 0.2f64..3.0) {
        let m = family(idx);
        let lo = m.quantile(0.5) + a;
        if let Ok(t) = truncate(&m, lo, lo + w, false) {
            prop_assert!((t.total_mass() - 1.0).abs() < 1e-8);
            prop_assert!(t.is_log_concave() && t.passes_concavity_test());
            prop_assert!(t.lower() >= lo - 1e-12 && t.upper() <= lo + w + 1e-12);
        }
    }
}
