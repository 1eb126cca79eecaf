use logconcave::oracle::{
    brute_force_concentration, brute_force_isoperimetric, concentration_at, concentration_inverse, fradelizi_tail,
    isoperimetric_at, tensorized_poincare,
};
use logconcave::{
    apply_affine, bobkov_ledoux_tail, cheeger_constant, concentration_profile, convolve_gaussian,
    isoperimetric_profile, moments, realize, spectral_poincare, truncate, weak_beta_from_profile, Centering, Measure,
    MeasureSpec,
};
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn phi0() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs_erfc(-x / 2f64.sqrt())
}

// independent erfc oracle (Numerical Recipes erfcc, |rel err| < 1.2e-7 is too
// coarse here, so use a continued fraction / series split instead)
fn statrs_erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - statrs_erfc(-x);
    }
    if x < 2.5 {
        // series for erf
        let mut sum = x;
        let mut term = x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -x * x / k;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() < 1e-17 {
                break;
            }
        }
        1.0 - 2.0 / PI.sqrt() * sum
    } else {
        // Lentz continued fraction
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..200 {
            let a = k as f64 / 2.0;
            d = 1.0 / (x + a * d);
            c = x + a / c;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x * x).exp() / PI.sqrt() / f
    }
}

fn family() -> Vec<(&'static str, Measure)> {
    let g = realize(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    let e = realize(&MeasureSpec::exponential(1.0)).unwrap();
    let u = realize(&MeasureSpec::uniform(-1.0, 1.0)).unwrap();
    vec![
        ("gauss", g.clone()),
        ("gauss_wide", realize(&MeasureSpec::gaussian(1.0, 2.0)).unwrap()),
        ("expo", e.clone()),
        ("expo_half", realize(&MeasureSpec::exponential(0.5)).unwrap()),
        ("unif", u.clone()),
        ("unif_shift", realize(&MeasureSpec::uniform(0.0, 3.0)).unwrap()),
        ("unif_smooth", convolve_gaussian(&u, 0.5).unwrap()),
        ("gauss_trunc", truncate(&g, -0.5, 2.0, false).unwrap()),
        ("expo_trunc", truncate(&e, -1.0, 3.0, true).unwrap()),
        ("chi3", realize(&MeasureSpec::radial(3, 2.0, 2f64.sqrt())).unwrap()),
    ]
}

#[test]
fn spectral_anchors() {
    let g = spectral_poincare(&realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap()).unwrap();
    assert!((g.c_p - 1.0).abs() < 1e-3, "{g:?}");
    assert_eq!(g.c_p * g.eigenvalue, 1.0);
    assert!(g.residual < 1e-6, "{}", g.residual);
    let e = spectral_poincare(&realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap()).unwrap();
    assert!((e.c_p / 4.0 - 1.0).abs() < 0.02, "{e:?}");
    for r in [0.5, 1.0, 2.0] {
        let u = spectral_poincare(&realize::<f64>(&MeasureSpec::uniform(-r, r)).unwrap()).unwrap();
        let want = 4.0 * r * r / (PI * PI);
        assert!((u.c_p / want - 1.0).abs() < 1e-3, "{} vs {want}", u.c_p);
        assert!((u.richardson_estimate / u.c_p - 1.0).abs() < 0.05);
    }
}

/// Dense generalized eigensolve of the same weighted Neumann problem,
/// built independently from node densities.
fn dense_gap(m: &Measure) -> f64 {
    let n = m.len();
    let h = m.step();
    let p = m.density();
    let w: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h } * p[i]).collect();
    let mut k = DMatrix::<f64>::zeros(n, n);
    for i in 0..n - 1 {
        let c = (p[i] + p[i + 1]) / (2.0 * h);
        k[(i, i)] += c;
        k[(i + 1, i + 1)] += c;
        k[(i, i + 1)] -= c;
        k[(i + 1, i)] -= c;
    }
    let a = DMatrix::from_fn(n, n, |i, j| k[(i, j)] / (w[i] * w[j]).sqrt());
    let mut ev: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev[1]
}

#[test]
fn uniform_gap_matches_dense_eigensolve() {
    let u = realize::<f64>(&MeasureSpec::uniform(-1.0, 1.0).with_n(256)).unwrap();
    let dense = dense_gap(&u);
    let s = spectral_poincare(&u).unwrap();
    assert!((s.eigenvalue / dense - 1.0).abs() < 1e-9);
    assert!((dense / (PI * PI / 4.0) - 1.0).abs() < 1e-3);
}

#[test]
fn kronecker_sum_tensorization() {
    // small grids keep the dense product operator at 32^2 rows
    let mut gs = MeasureSpec::gaussian(0.0, 1.5);
    gs.grid.tail_mass = 1e-10;
    let a = realize::<f64>(&gs).unwrap().with_nodes(32).unwrap();
    let g = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    let b = truncate(&g, -1.0, 2.0, false).unwrap().with_nodes(32).unwrap();
    let ra = spectral_poincare(&a).unwrap();
    let rb = spectral_poincare(&b).unwrap();
    // dense operators of each marginal
    let op = |m: &Measure| {
        let n = m.len();
        let h = m.step();
        let p = m.density();
        let w: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h } * p[i]).collect();
        let mut k = DMatrix::<f64>::zeros(n, n);
        for i in 0..n - 1 {
            let c = (p[i] + p[i + 1]) / (2.0 * h);
            k[(i, i)] += c;
            k[(i + 1, i + 1)] += c;
            k[(i, i + 1)] -= c;
            k[(i + 1, i)] -= c;
        }
        DMatrix::from_fn(n, n, |i, j| k[(i, j)] / (w[i] * w[j]).sqrt())
    };
    let (oa, ob) = (op(&a), op(&b));
    let ia = DMatrix::<f64>::identity(a.len(), a.len());
    let ib = DMatrix::<f64>::identity(b.len(), b.len());
    let sum = oa.kronecker(&ib) + ia.kronecker(&ob);
    let mut ev: Vec<f64> = sum.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let product_cp = 1.0 / ev[1];
    let t = tensorized_poincare(&[ra, rb]);
    assert!((product_cp / t - 1.0).abs() < 1e-8, "{product_cp} vs {t}");
}

#[test]
fn isoperimetric_examples() {
    let g = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    assert!((isoperimetric_at(&g, 0.5) - phi0()).abs() < 1e-6);
    let u = realize::<f64>(&MeasureSpec::uniform(-1.0, 1.0)).unwrap();
    assert!((isoperimetric_at(&u, 0.25) - 0.5).abs() < 1e-8);
    // the exponential needs a finer grid for 1e-6: trapezoid bias is h^2/12
    let e = realize::<f64>(&MeasureSpec::exponential(1.0).with_n(1 << 16)).unwrap();
    let prof = isoperimetric_profile(&e, 50).unwrap();
    for (u, v) in prof.abscissae.iter().zip(&prof.values) {
        assert!((v - u).abs() < 1e-6, "Is({u}) = {v}");
    }
    let mix = realize::<f64>(&MeasureSpec::mixture(vec![0.5, 0.5], vec![-3.0, 3.0], vec![1.0, 1.0])).unwrap();
    assert!(isoperimetric_profile(&mix, 10).is_err());
}

#[test]
fn cheeger_examples() {
    let e = realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap();
    assert!((cheeger_constant(&e).unwrap() - 1.0).abs() < 1e-4);
    let g = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    let cg = cheeger_constant(&g).unwrap();
    assert!((cg - (PI / 2.0).sqrt()).abs() < 1e-3);
    // scan of u / Is(u) peaks at 1/2
    let prof = isoperimetric_profile(&g, 200).unwrap();
    let scanned = prof.abscissae.iter().zip(&prof.values).map(|(u, v)| u / v).fold(0.0, f64::max);
    assert!((scanned - cg).abs() < 1e-9);
    for lam in [0.3, 2.5, -1.7] {
        let s = apply_affine(&e, lam, 0.4).unwrap();
        assert!((cheeger_constant(&s).unwrap() / (lam.abs() * cheeger_constant(&e).unwrap()) - 1.0).abs() < 1e-4);
    }
}

#[test]
fn concentration_examples() {
    let e = realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap();
    let g = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    assert_eq!(concentration_at(&e, 0.0), 0.5);
    let radii: Vec<f64> = (0..60).map(|k| k as f64 * 0.1).collect();
    let pe = concentration_profile(&e, &radii);
    let pg = concentration_profile(&g, &radii);
    for (k, r) in radii.iter().enumerate() {
        assert!((pe.values[k] - 0.5 * (-r).exp()).abs() < 1e-5);
        assert!((pg.values[k] - (1.0 - normal_cdf(*r))).abs() < 1e-5);
    }
    assert!(pe.values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn weak_beta_examples() {
    let e = realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap();
    let radii: Vec<f64> = (0..200_000).map(|k| k as f64 * 1e-4).collect();
    let p = concentration_profile(&e, &radii);
    let s = 1.0 / std::f64::consts::E;
    assert!((p.generalized_inverse(s / 2.0) - 1.0).abs() < 1e-3);
    let med = weak_beta_from_profile(&p, Centering::Median).unwrap();
    let mean = weak_beta_from_profile(&p, Centering::Mean).unwrap();
    assert!(med.values.windows(2).all(|w| w[1] <= w[0]));
    assert!(p.generalized_inverse(0.5) == 0.0 && p.generalized_inverse(0.7) == 0.0);
    for (k, s) in med.abscissae.iter().enumerate() {
        let bmed = med.values[k];
        let bmean = mean.values[k];
        assert!(bmed <= bmean + 1e-12);
        let half = p.generalized_inverse(s / 4.0);
        assert!(bmean <= 2.0 * half + 1e-12);
    }
    // the exact inverse agrees with the sampled one up to the radius step
    assert!((concentration_inverse(&e, 0.1) - p.generalized_inverse(0.1)).abs() < 2e-4);
}

#[test]
fn moment_examples() {
    let g = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0)).unwrap();
    let r = moments(&g, Some(&g), Some(2.0)).unwrap();
    assert!((r.m_p_ratio.unwrap() - 1.0).abs() < 1e-6);
    assert!(r.relative_entropy.unwrap().abs() < 1e-8);
    assert!((r.first_abs_moment_about_median - (2.0 / PI).sqrt()).abs() < 1e-5);

    let mu = realize::<f64>(&MeasureSpec::gaussian(0.0, 2.0)).unwrap();
    let e = realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap();
    // the realized exponential charges mass outside the gaussian's grid
    assert!(matches!(moments(&e, Some(&mu), Some(2.0)), Err(logconcave::Error::NotAbsolutelyContinuous { .. })));
    let nu = truncate(&e, mu.lower(), mu.upper(), false).unwrap();
    let m2 = moments(&nu, Some(&mu), Some(2.0)).unwrap().m_p_ratio.unwrap();
    assert!(m2.is_finite() && m2 > 1.0);
    // refinement oracle: direct quadrature at 4N on the closed-form densities
    let n = 4 * 4096;
    let (lo, hi) = (nu.lower(), nu.upper());
    let h = (hi - lo) / (n - 1) as f64;
    let z = 1.0 - (-hi).exp();
    let (mut acc, mut wsum_nu) = (0.0, 0.0);
    for i in 0..n {
        let x = lo + h * i as f64;
        let w = if i == 0 || i == n - 1 { h / 2.0 } else { h };
        let pn = 0.5 * (-x.abs()).exp() / z;
        let pm = (-x * x / 8.0).exp() / (2.0 * (2.0 * PI).sqrt());
        acc += w * pn * pn / pm;
        wsum_nu += w * pn;
    }
    let mu_mass = 1.0 - 2.0 * (1.0 - normal_cdf(hi / 2.0));
    let oracle = (acc / wsum_nu / wsum_nu * mu_mass).sqrt();
    assert!((m2 / oracle - 1.0).abs() < 1e-3, "{m2} vs {oracle}");
}

#[test]
fn bobkov_ledoux_examples() {
    assert!((bobkov_ledoux_tail(4.0f64, 0.0, 1.0).unwrap() - 3.0).abs() < 1e-15);
    assert!((bobkov_ledoux_tail(1.0f64, 10.0, 1.0).unwrap() - 3.0 * (-10f64).exp()).abs() < 1e-18);
    assert!(bobkov_ledoux_tail(1.0f64, 1.0, 0.0).is_err());
    for k in 0..20 {
        let a = 0.5 * k as f64;
        for eps in [0.25, 0.5, 1.0] {
            assert!(bobkov_ledoux_tail(4.0f64, a, eps).unwrap() >= 0.5 * (-a).exp());
        }
    }
}

#[test]
fn variance_below_poincare_and_ledoux_sandwich() {
    for (name, m) in family() {
        let cp = spectral_poincare(&m).unwrap().c_p;
        let cc = cheeger_constant(&m).unwrap();
        assert!(m.variance() <= cp * 1.01, "{name}");
        assert!(cp <= 4.0 * cc * cc * 1.01, "{name}: {cp} vs {cc}");
        assert!(cc <= 16.0 / PI * cp.sqrt() * 1.01, "{name}");
        assert!(cc * cc <= 36.0 * cp * 1.01, "{name}");
    }
}

#[test]
fn scaling_covariance_of_poincare() {
    let m = realize::<f64>(&MeasureSpec::exponential(1.0)).unwrap();
    let base = spectral_poincare(&m).unwrap().c_p;
    for lam in [0.5, 3.0] {
        let s = spectral_poincare(&apply_affine(&m, lam, 1.0).unwrap()).unwrap().c_p;
        assert!((s / (lam * lam * base) - 1.0).abs() < 1e-3);
    }
}

#[test]
fn profile_sanity_on_family() {
    for (name, m) in family() {
        let prof = isoperimetric_profile(&m, 200).unwrap();
        let top = prof.values.iter().copied().fold(0.0, f64::max);
        assert!(prof.concavity_defect() <= 1e-6 * top, "{name}: {}", prof.concavity_defect());
        let radii: Vec<f64> = (0..100).map(|k| k as f64 * 0.05).collect();
        let c = concentration_profile(&m, &radii);
        assert!(c.values.windows(2).all(|w| w[1] <= w[0]), "{name}");
    }
}

#[test]
fn brute_force_matches_half_lines() {
    for (name, m) in family() {
        let coarse = m.with_nodes(128).unwrap();
        for u in [0.05, 0.15, 0.3, 0.45, 0.5] {
            let half = isoperimetric_at(&coarse, u);
            let brute = brute_force_isoperimetric(&coarse, u);
            assert!((brute / half - 1.0).abs() < 0.02, "{name} u={u}: {brute} vs {half}");
        }
        let sd = coarse.variance().sqrt();
        for r in [0.1, 0.5, 1.0, 2.0] {
            let half = concentration_at(&coarse, r * sd);
            let brute = brute_force_concentration(&coarse, r * sd);
            assert!((brute - half).abs() <= 0.02 * half.max(1e-12), "{name} r={r}: {brute} vs {half}");
        }
    }
}

#[test]
fn fradelizi_tail_on_family() {
    for (name, m) in family() {
        let sd = m.variance().sqrt();
        for c in [0.5 * sd, sd, 2.0 * sd] {
            for t in [1.0, 1.5, 2.0, 3.0] {
                let (lhs, rhs) = fradelizi_tail(&m, c, t);
                assert!(lhs <= rhs + 1e-6, "{name} c={c} t={t}: {lhs} > {rhs}");
            }
        }
    }
}
