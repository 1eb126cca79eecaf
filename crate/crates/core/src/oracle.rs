//! Ground-truth numerics: spectral gap, profiles, Cheeger constant,
//! weak Poincaré rates, moments and tail bounds.

use crate::error::{Error, Result};
use crate::measure1d::{trapezoid_weight, GridMeasure};
use crate::scalar::Real;
use crate::search::{golden_min, logspace};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Isoperimetric,
    Concentration,
    WeakBeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable<T> {
    pub abscissae: Vec<T>,
    pub values: Vec<T>,
    pub kind: ProfileKind,
}

impl<T: Real> ProfileTable<T> {
    /// `inf{r : alpha(r) <= s}` over the sampled radii (concentration kind).
    ///
    /// Since `alpha(0) = 1/2`, any `s >= 1/2` maps to 0. When no sample
    /// reaches `s` the result is `+inf`.
    pub fn generalized_inverse(&self, s: T) -> T {
        if s >= T::c(0.5) {
            return T::zero();
        }
        self.abscissae.iter().zip(&self.values).find(|(_, v)| **v <= s).map(|(r, _)| *r).unwrap_or(T::infinity())
    }

    /// Value at `s` of a nonincreasing step table: the sample at the
    /// largest abscissa `<= s`, which upper-bounds the true rate.
    /// `+inf` left of the first sample.
    pub fn step_value(&self, s: T) -> T {
        let k = self.abscissae.partition_point(|a| *a <= s);
        if k == 0 {
            T::infinity()
        } else {
            self.values[k - 1]
        }
    }

    /// Largest positive second difference of the sampled values.
    pub fn concavity_defect(&self) -> T {
        self.values.windows(3).map(|w| w[0] - w[1] - w[1] + w[2]).fold(T::neg_infinity(), |a, b| a.max(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult<T> {
    /// `1 / eigenvalue`, from the fine grid.
    pub c_p: T,
    /// Smallest nonzero eigenvalue on the fine grid.
    pub eigenvalue: T,
    pub grid_sizes: (usize, usize),
    /// `1 / lambda` after order-2 Richardson extrapolation.
    pub richardson_estimate: T,
    /// Relative residual `|A v - lambda v| / (lambda |v|)` of the eigenvector.
    pub residual: T,
}

/// Symmetric tridiagonal operator `M^{-1/2} K M^{-1/2}` of the weighted
/// Neumann problem on the positive-density nodes.
struct Tridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiag {
    fn neumann(density: &[f64], h: f64) -> Result<Self> {
        let first = density.iter().position(|p| *p > 0.0);
        let last = density.iter().rposition(|p| *p > 0.0);
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) if b > a => (a, b),
            _ => return Err(Error::InvalidParameter("support has fewer than two nodes".into())),
        };
        let p = &density[first..=last];
        let n = p.len();
        if p.iter().any(|v| *v <= 0.0) {
            return Err(Error::InvalidParameter("support is disconnected".into()));
        }
        let mass: Vec<f64> = (0..n).map(|i| trapezoid_weight(i, n, h) * p[i]).collect();
        let cond: Vec<f64> = (0..n - 1).map(|i| 0.5 * (p[i] + p[i + 1]) / h).collect();
        let diag = (0..n)
            .map(|i| {
                let left = if i > 0 { cond[i - 1] } else { 0.0 };
                let right = if i + 1 < n { cond[i] } else { 0.0 };
                (left + right) / mass[i]
            })
            .collect();
        let off = (0..n - 1).map(|i| -cond[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
        Ok(Self { diag, off })
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let prev = if q.abs() < 1e-300 { 1e-300f64.copysign(q) } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_max(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i] + l + r
            })
            .fold(0.0, f64::max)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.gershgorin_max();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves `(A - shift) x = b` by the Thomas algorithm.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let guard = |v: f64| if v.abs() < 1e-300 { 1e-300 } else { v };
        let mut denom = guard(self.diag[0] - shift);
        if n > 1 {
            c[0] = self.off[0] / denom;
        }
        d[0] = b[0] / denom;
        for i in 1..n {
            denom = guard(self.diag[i] - shift - self.off[i - 1] * c[i - 1]);
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }

    /// Relative residual of the eigenvector for `lambda`, by inverse iteration.
    fn residual(&self, lambda: f64, kernel: &[f64]) -> f64 {
        let n = self.diag.len();
        let knorm: f64 = kernel.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = kernel.iter().map(|v| v / knorm).collect();
        let mut v: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64 - 0.5).collect();
        let shift = lambda * (1.0 - 1e-10);
        for _ in 0..4 {
            let proj: f64 = v.iter().zip(&unit).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(&unit) {
                *a -= proj * b;
            }
            v = self.solve_shifted(shift, &v);
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for a in v.iter_mut() {
                *a /= norm;
            }
        }
        let av = self.apply(&v);
        let r: f64 = av.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        r / lambda
    }
}

fn neumann_gap(density: &[f64], h: f64) -> Result<(f64, Tridiag)> {
    let op = Tridiag::neumann(density, h)?;
    if op.diag.len() < 3 {
        return Err(Error::InvalidParameter("too few nodes for a spectral gap".into()));
    }
    let lambda = op.eigenvalue(1);
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("degenerate spectral gap {lambda}")));
    }
    Ok((lambda, op))
}

/// Poincaré constant `1 / lambda_1` of the weighted Neumann problem
/// `-(w f')' = lambda w f`, with a two-grid consistency check.
pub fn spectral_poincare<T: Real>(m: &GridMeasure<T>) -> Result<SpectralResult<T>> {
    let h = m.step().f64();
    let dens: Vec<f64> = m.density().iter().map(|v| v.f64()).collect();
    let (fine, op) = neumann_gap(&dens, h)?;
    // every other node: the same measure at twice the spacing
    let coarse_ld: Vec<f64> = m.log_density().iter().step_by(2).map(|v| v.f64()).collect();
    let coarse_n = coarse_ld.len();
    let coarse_m = GridMeasure::<f64>::from_log_density(m.lower().f64(), 2.0 * h, coarse_ld, false)?;
    let (coarse, _) = neumann_gap(coarse_m.density(), 2.0 * h)?;
    if ((fine - coarse) / fine).abs() > 0.05 {
        return Err(Error::NonConverged { fine: 1.0 / fine, coarse: 1.0 / coarse });
    }
    let extrapolated = fine + (fine - coarse) / 3.0;
    let first = dens.iter().position(|p| *p > 0.0).unwrap_or(0);
    let last = dens.iter().rposition(|p| *p > 0.0).unwrap_or(dens.len() - 1);
    let n = last - first + 1;
    let kernel: Vec<f64> = (0..n).map(|i| (trapezoid_weight(i, n, h) * dens[first + i]).sqrt()).collect();
    let residual = op.residual(fine, &kernel);
    Ok(SpectralResult {
        c_p: T::c(1.0 / fine),
        eigenvalue: T::c(fine),
        grid_sizes: (m.len(), coarse_n),
        richardson_estimate: T::c(1.0 / extrapolated),
        residual: T::c(residual),
    })
}

/// Poincaré constant of a product measure from its marginals' results:
/// the Kronecker-sum generator has gap `min_i lambda_1(m_i)`.
pub fn tensorized_poincare<T: Real>(marginals: &[SpectralResult<T>]) -> T {
    marginals.iter().map(|r| r.c_p).fold(T::zero(), |a, b| a.max(b))
}

/// `Is(u) = min(w(F^{-1}(u)), w(F^{-1}(1-u)))` for one mass level.
pub fn isoperimetric_at<T: Real>(m: &GridMeasure<T>, u: T) -> T {
    let a = m.density_at(m.quantile(u));
    let b = m.density_at(m.quantile(T::one() - u));
    a.min(b)
}

fn require_log_concave<T: Real>(m: &GridMeasure<T>) -> Result<()> {
    if m.is_log_concave() {
        Ok(())
    } else {
        Err(Error::NotLogConcave)
    }
}

/// Half-line isoperimetric profile on `u_k = k / (2 n_points)`, `k = 1..=n_points`.
pub fn isoperimetric_profile<T: Real>(m: &GridMeasure<T>, n_points: usize) -> Result<ProfileTable<T>> {
    require_log_concave(m)?;
    let n_points = n_points.max(1);
    let abscissae: Vec<T> = (1..=n_points).map(|k| T::c(0.5 * k as f64 / n_points as f64)).collect();
    let values = abscissae.iter().map(|u| isoperimetric_at(m, *u)).collect();
    Ok(ProfileTable { abscissae, values, kind: ProfileKind::Isoperimetric })
}

/// `C'_C = sup_{0 < u <= 1/2} u / Is(u)`.
pub fn cheeger_constant<T: Real>(m: &GridMeasure<T>) -> Result<T> {
    let prof = isoperimetric_profile(m, 512)?;
    let ratio = |u: f64| {
        let is = isoperimetric_at(m, T::c(u)).f64();
        if is > 0.0 {
            u / is
        } else {
            f64::INFINITY
        }
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for (k, (u, v)) in prof.abscissae.iter().zip(&prof.values).enumerate() {
        let r = u.f64() / v.f64();
        if r > best.1 {
            best = (k, r);
        }
    }
    let k = best.0;
    let lo = if k == 0 { 1e-9 } else { prof.abscissae[k - 1].f64() };
    let hi = prof.abscissae[(k + 1).min(prof.abscissae.len() - 1)].f64();
    let (_, neg) = golden_min(lo, hi, 60, |u| -ratio(u));
    Ok(T::c(best.1.max(-neg)))
}

/// `alpha(r) = max(1 - F(m + r), F(m - r))` with `m` the median.
pub fn concentration_at<T: Real>(m: &GridMeasure<T>, r: T) -> T {
    if r <= T::zero() {
        return T::c(0.5);
    }
    let med = m.median();
    (T::one() - m.cdf_at(med + r)).max(m.cdf_at(med - r)).max(T::zero())
}

/// Exact generalized inverse of the half-line concentration profile.
pub fn concentration_inverse<T: Real>(m: &GridMeasure<T>, s: T) -> T {
    if s >= T::c(0.5) {
        return T::zero();
    }
    if s <= T::zero() {
        return m.upper() - m.lower();
    }
    let med = m.median();
    (m.quantile(T::one() - s) - med).max(med - m.quantile(s)).max(T::zero())
}

pub fn concentration_profile<T: Real>(m: &GridMeasure<T>, radii: &[T]) -> ProfileTable<T> {
    let values = radii.iter().map(|r| concentration_at(m, *r)).collect();
    ProfileTable { abscissae: radii.to_vec(), values, kind: ProfileKind::Concentration }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    Median,
    Mean,
}

/// The s-grid on which weak Poincaré rates are tabulated.
pub fn weak_beta_grid() -> Vec<f64> {
    logspace(1e-6, 0.499, 96)
}

/// Weak (1, inf) Poincaré rate from a concentration profile:
/// `beta_med(s) = alpha^{-1}(s/2)`, `beta_mean(s) = 2 alpha^{-1}(s/4)`.
pub fn weak_beta_from_profile<T: Real>(p: &ProfileTable<T>, centering: Centering) -> Result<ProfileTable<T>> {
    if p.kind != ProfileKind::Concentration {
        return Err(Error::InvalidParameter("weak beta needs a concentration profile".into()));
    }
    let abscissae: Vec<T> = weak_beta_grid().into_iter().map(T::c).collect();
    let values = abscissae
        .iter()
        .map(|s| match centering {
            Centering::Median => p.generalized_inverse(*s * T::c(0.5)),
            Centering::Mean => T::c(2.0) * p.generalized_inverse(*s * T::c(0.25)),
        })
        .collect();
    Ok(ProfileTable { abscissae, values, kind: ProfileKind::WeakBeta })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport<T> {
    pub mean: T,
    pub variance: T,
    pub median: T,
    pub first_abs_moment_about_median: T,
    pub m_p_ratio: Option<T>,
    pub relative_entropy: Option<T>,
}

/// Common evaluation lattice for two densities: the finer step over the
/// domain of `nu`.
fn paired_densities<T: Real>(nu: &GridMeasure<T>, mu: &GridMeasure<T>) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let same = nu.len() == mu.len() && nu.lower() == mu.lower() && nu.step() == mu.step();
    if same {
        let w = (0..nu.len()).map(|i| trapezoid_weight(i, nu.len(), nu.step()).f64()).collect();
        let a = nu.density().iter().map(|v| v.f64()).collect();
        let b = mu.density().iter().map(|v| v.f64()).collect();
        return (w, a, b);
    }
    let lo = nu.lower().f64();
    let hi = nu.upper().f64();
    let h = nu.step().f64().min(mu.step().f64());
    let n = ((hi - lo) / h).ceil() as usize + 1;
    let h = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect();
    let w = (0..n).map(|i| trapezoid_weight(i, n, h)).collect();
    let a = xs.iter().map(|x| nu.density_at(T::c(*x)).f64()).collect();
    let b = xs.iter().map(|x| mu.density_at(T::c(*x)).f64()).collect();
    (w, a, b)
}

pub fn moments<T: Real>(
    m: &GridMeasure<T>,
    reference: Option<&GridMeasure<T>>,
    p: Option<T>,
) -> Result<MomentReport<T>> {
    let median = m.median();
    let abs_dev = m.integrate(|x| (x - median).abs());
    let mut report = MomentReport {
        mean: m.mean(),
        variance: m.variance(),
        median,
        first_abs_moment_about_median: abs_dev,
        m_p_ratio: None,
        relative_entropy: None,
    };
    let Some(mu) = reference else {
        return Ok(report);
    };
    let (w, a, b) = paired_densities(m, mu);
    let tiny = 1e-300;
    let orphan: f64 =
        w.iter().zip(&a).zip(&b).filter(|((_, pa), pb)| **pa > 0.0 && **pb < tiny).map(|((w, pa), _)| w * pa).sum();
    let outside = (T::one() - (m.cdf_at(mu.upper()) - m.cdf_at(mu.lower()))).f64().max(0.0);
    if orphan + outside > 1e-12 {
        return Err(Error::NotAbsolutelyContinuous { mass: orphan + outside });
    }
    let mut entropy = 0.0;
    for ((w, pa), pb) in w.iter().zip(&a).zip(&b) {
        if *pa >= tiny && *pb >= tiny {
            entropy += w * pa * (pa / pb).ln();
        }
    }
    report.relative_entropy = Some(T::c(entropy.max(0.0)));
    if let Some(p) = p {
        let p = p.f64();
        if !(p > 1.0) {
            return Err(Error::InvalidParameter(format!("moment order must exceed 1, got {p}")));
        }
        let mut acc = 0.0;
        for ((w, pa), pb) in w.iter().zip(&a).zip(&b) {
            if *pa >= tiny && *pb >= tiny {
                acc += w * (p * pa.ln() + (1.0 - p) * pb.ln()).exp();
            }
        }
        report.m_p_ratio = Some(T::c(acc.powf(1.0 / p)));
    }
    Ok(report)
}

/// Sup of `dnu/dmu` over the support of `nu` (`+inf` when `nu` charges a
/// `mu`-null region).
pub fn density_ratio_sup<T: Real>(nu: &GridMeasure<T>, mu: &GridMeasure<T>) -> T {
    let (_, a, b) = paired_densities(nu, mu);
    let mut sup: f64 = 0.0;
    for (pa, pb) in a.iter().zip(&b) {
        if *pa > 1e-300 {
            if *pb <= 0.0 {
                return T::infinity();
            }
            sup = sup.max(pa / pb);
        }
    }
    if nu.lower() < mu.lower() || nu.upper() > mu.upper() {
        return T::infinity();
    }
    T::c(sup)
}

/// Tail bound `((4 - eps) / eps) exp(-(2 - eps) a / sqrt(c_p))`.
pub fn bobkov_ledoux_tail<T: Real>(c_p: T, a: T, epsilon: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if !(c_p > T::zero()) || a < T::zero() {
        return Err(Error::InvalidParameter(format!("need c_p > 0 and a >= 0, got {c_p}, {a}")));
    }
    let four = T::c(4.0);
    let two = T::c(2.0);
    Ok((four - epsilon) / epsilon * (-(two - epsilon) * a / c_p.sqrt()).exp())
}

/// Both sides of `P(|X - med| > c t) <= P(|X - med| > c)^{(1+t)/2}`.
pub fn fradelizi_tail<T: Real>(m: &GridMeasure<T>, c: T, t: T) -> (T, T) {
    let med = m.median();
    let tail = |s: T| (m.cdf_at(med - s) + T::one() - m.cdf_at(med + s)).min(T::one());
    (tail(c * t), tail(c).powf((T::one() + t) * T::c(0.5)))
}

/// Candidate sets of the brute-force search: unions of at most two
/// intervals whose endpoints are grid nodes except one, which is solved
/// for so that the set has mass exactly `u`. Domain ends are free of
/// boundary cost and stand for `-inf` / `+inf`.
fn two_interval_sets(m: &GridMeasure<f64>, u: f64, mut visit: impl FnMut(&[(f64, f64)])) {
    let n = m.len();
    let (lo, hi) = (m.lower(), m.upper());
    let f = |x: f64| m.cdf_at(x);
    let q = |v: f64| m.quantile(v.clamp(0.0, 1.0));
    let eps = 1e-13;
    let left: Vec<f64> = std::iter::once(lo).chain((1..n - 1).map(|i| m.node(i))).collect();
    let inner: Vec<f64> = (1..n - 1).map(|i| m.node(i)).collect();
    let right: Vec<f64> = inner.iter().copied().chain(std::iter::once(hi)).collect();
    let close = |target: f64| if target >= 1.0 - eps { hi } else { q(target) };
    let open = |target: f64| if target <= eps { lo } else { q(target) };
    for &a in &left {
        let t = f(a) + u;
        if t <= 1.0 + eps {
            visit(&[(a, close(t))]);
        }
    }
    for &b in &right {
        let t = f(b) - u;
        if t >= -eps {
            visit(&[(open(t), b)]);
        }
    }
    for (ia, &a) in left.iter().enumerate() {
        let fa = f(a);
        for (ib, &b) in inner.iter().enumerate() {
            if ib + 1 < ia || b <= a {
                continue;
            }
            let m1 = f(b) - fa;
            if m1 >= u {
                break;
            }
            for &c in &inner[ib + 1..] {
                let t = f(c) + u - m1;
                if t > 1.0 + eps {
                    break;
                }
                let d = close(t);
                if d > c {
                    visit(&[(a, b), (c, d)]);
                }
            }
        }
    }
    for (ib, &b) in inner.iter().enumerate() {
        let fb = f(b);
        for (ic, &c) in inner.iter().enumerate().skip(ib + 1) {
            let fc = f(c);
            for &d in &right[ic + 1..] {
                let m2 = f(d) - fc;
                if m2 >= u {
                    break;
                }
                let t = fb - (u - m2);
                if t < -eps {
                    continue;
                }
                let a = open(t);
                if a < b {
                    visit(&[(a, b), (c, d)]);
                }
            }
        }
    }
}

/// Exhaustive isoperimetric value over unions of at most two intervals.
/// Cost grows as `N^3`; meant for grids with `N <= 128`.
pub fn brute_force_isoperimetric(m: &GridMeasure<f64>, u: f64) -> f64 {
    let (lo, hi) = (m.lower(), m.upper());
    let mut best = f64::INFINITY;
    two_interval_sets(m, u, |set| {
        let mut cost = 0.0;
        for &(a, b) in set {
            if a > lo {
                cost += m.density_at(a);
            }
            if b < hi {
                cost += m.density_at(b);
            }
        }
        best = best.min(cost);
    });
    best
}

/// Exhaustive concentration value `sup 1 - nu(A_r)` over unions of at
/// most two intervals of mass 1/2.
pub fn brute_force_concentration(m: &GridMeasure<f64>, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.5;
    }
    let (lo, hi) = (m.lower(), m.upper());
    let mut best: f64 = 0.0;
    two_interval_sets(m, 0.5, |set| {
        let grown: Vec<(f64, f64)> =
            set.iter().map(|&(a, b)| (if a > lo { a - r } else { lo }, if b < hi { b + r } else { hi })).collect();
        let covered = if grown.len() == 2 && grown[1].0 <= grown[0].1 {
            m.cdf_at(grown[1].1.max(grown[0].1)) - m.cdf_at(grown[0].0)
        } else {
            grown.iter().map(|&(a, b)| m.cdf_at(b) - m.cdf_at(a)).sum()
        };
        best = best.max(1.0 - covered);
    });
    best
}
