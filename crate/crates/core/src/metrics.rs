//! Distances between grid measures.
//!
//! TV and W1 are evaluated exactly on the interpolated densities. The
//! other metrics work on atoms: both measures are put on one lattice (the
//! finer step over the union of domains) with dual-cell masses taken from
//! CDF differences, so total mass is kept exactly.

use crate::error::{Error, Result};
use crate::measure1d::{to_f64, GridMeasure, GL_NODES, GL_WEIGHTS};
use crate::scalar::Real;
use crate::search::{golden_min, linspace};
use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest common lattice used for atom-based metrics.
pub const MAX_LATTICE: usize = 8192;
/// Atoms per side kept for the concave-cost transport program.
pub const MAX_TRANSPORT_ATOMS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Tv,
    W1,
    Bl,
    Dudley,
    LevyProkhorov,
    Wlp,
}

impl Metric {
    pub const ALL: [Metric; 6] =
        [Metric::Tv, Metric::W1, Metric::Bl, Metric::Dudley, Metric::LevyProkhorov, Metric::Wlp];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Tv => "tv",
            Metric::W1 => "w1",
            Metric::Bl => "bl",
            Metric::Dudley => "dudley",
            Metric::LevyProkhorov => "levy_prokhorov",
            Metric::Wlp => "wlp",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlKind {
    Bl,
    Dudley,
}

/// Atoms of two measures on a shared lattice `x0 + k h`.
#[derive(Clone, Debug)]
pub struct CommonAtoms {
    pub x0: f64,
    pub step: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl CommonAtoms {
    pub fn new<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Self {
        let (a, b) = (to_f64(a), to_f64(b));
        let lo = a.lower().min(b.lower());
        let hi = a.upper().max(b.upper());
        let width = hi - lo;
        let mut h = a.step().min(b.step());
        if width / h + 1.0 > MAX_LATTICE as f64 {
            h = width / (MAX_LATTICE - 1) as f64;
        }
        let count = ((width / h).ceil() as usize + 1).max(2);
        Self { x0: lo, step: h, a: a.cell_masses(lo, h, count), b: b.cell_masses(lo, h, count) }
    }

    pub fn node(&self, k: usize) -> f64 {
        self.x0 + self.step * k as f64
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn difference(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(x, y)| x - y).collect()
    }
}

fn root_bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sorted union of both node sets.
fn merged_breakpoints(a: &GridMeasure<f64>, b: &GridMeasure<f64>) -> Vec<f64> {
    let mut xs: Vec<f64> = a.nodes().into_iter().chain(b.nodes()).collect();
    xs.sort_by(|x, y| x.total_cmp(y));
    xs.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
    xs
}

/// Splits `[x1, x2]` at the crossing of the two densities, if any. Their
/// log-ratio is affine on the piece, so there is at most one.
fn density_crossing(a: &GridMeasure<f64>, b: &GridMeasure<f64>, x1: f64, x2: f64) -> Option<f64> {
    let diff = |x: f64| a.density_at(x) - b.density_at(x);
    let (d1, d2) = (diff(x1), diff(x2));
    if d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) == (d2 > 0.0) {
        return None;
    }
    Some(root_bisect(x1, x2, diff))
}

/// `d_TV = (1/2) int |p_a - p_b|`, exact for the interpolated densities.
pub fn tv<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<T> {
    let (a, b) = (to_f64(a), to_f64(b));
    let xs = merged_breakpoints(&a, &b);
    let piece = |x1: f64, x2: f64| ((a.cdf_at(x2) - a.cdf_at(x1)) - (b.cdf_at(x2) - b.cdf_at(x1))).abs();
    let mut acc = 0.0;
    for w in xs.windows(2) {
        let (x1, x2) = (w[0], w[1]);
        match density_crossing(&a, &b, x1, x2) {
            Some(r) => acc += piece(x1, r) + piece(r, x2),
            None => acc += piece(x1, x2),
        }
    }
    Ok(T::c((0.5 * acc).clamp(0.0, 1.0)))
}

/// `W1 = int |F_a - F_b|`.
///
/// On each piece between merged nodes `F_a - F_b` has at most one interior
/// extremum (where the densities cross), hence at most two sign changes;
/// those are located by bisection and each sign-definite part is
/// integrated by Gauss-Legendre.
pub fn w1<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<T> {
    let (a, b) = (to_f64(a), to_f64(b));
    if a.mean().abs().is_nan() || b.mean().abs().is_nan() {
        return Err(Error::InvalidParameter("W1 needs finite first moments".into()));
    }
    let xs = merged_breakpoints(&a, &b);
    let g = |x: f64| a.cdf_at(x) - b.cdf_at(x);
    let gl = |x1: f64, x2: f64| {
        let len = x2 - x1;
        let s: f64 = GL_NODES.iter().zip(GL_WEIGHTS).map(|(t, w)| w * g(x1 + t * len)).sum();
        (s * len).abs()
    };
    let mut acc = 0.0;
    for w in xs.windows(2) {
        let (x1, x2) = (w[0], w[1]);
        let mut cuts = vec![x1];
        if let Some(r) = density_crossing(&a, &b, x1, x2) {
            cuts.push(r);
        }
        cuts.push(x2);
        for c in cuts.windows(2) {
            let (u, v) = (c[0], c[1]);
            let (gu, gv) = (g(u), g(v));
            if gu != 0.0 && gv != 0.0 && (gu > 0.0) != (gv > 0.0) {
                let r = root_bisect(u, v, g);
                acc += gl(u, r) + gl(r, v);
            } else {
                acc += gl(u, v);
            }
        }
    }
    Ok(T::c(acc))
}

/// Convex piecewise-linear function kept as weighted breakpoints
/// (the "slope trick"). Left breakpoints carry the slope decrease to
/// their left, right breakpoints the slope increase to their right; the
/// function is minimal between the largest left and the smallest right key.
struct SlopeFn {
    left: BTreeMap<OrderedFloat<f64>, f64>,
    right: BTreeMap<OrderedFloat<f64>, f64>,
    sum_left: f64,
    sum_right: f64,
    /// Stored keys are actual positions minus `shift`.
    shift: f64,
    min: f64,
}

const WEIGHT_EPS: f64 = 1e-300;

impl SlopeFn {
    /// `c |x|`.
    fn abs(c: f64) -> Self {
        let mut f =
            Self { left: BTreeMap::new(), right: BTreeMap::new(), sum_left: 0.0, sum_right: 0.0, shift: 0.0, min: 0.0 };
        f.left.insert(OrderedFloat(0.0), c);
        f.right.insert(OrderedFloat(0.0), c);
        f.sum_left = c;
        f.sum_right = c;
        f
    }

    fn put(map: &mut BTreeMap<OrderedFloat<f64>, f64>, k: f64, w: f64) {
        *map.entry(OrderedFloat(k)).or_insert(0.0) += w;
    }

    /// Adds `c (x - a)^+`.
    fn add_right_ramp(&mut self, a: f64, c: f64) {
        let key = a - self.shift;
        Self::put(&mut self.left, key, c);
        self.sum_left += c;
        let mut need = c;
        while need > WEIGHT_EPS {
            let Some((&k, &w)) = self.left.iter().next_back() else { break };
            let take = w.min(need);
            self.min += take * (k.0 - key);
            if w - take <= WEIGHT_EPS {
                self.left.remove(&k);
            } else {
                *self.left.get_mut(&k).unwrap() = w - take;
            }
            Self::put(&mut self.right, k.0, take);
            self.sum_left -= take;
            self.sum_right += take;
            need -= take;
        }
    }

    /// Adds `c (a - x)^+`.
    fn add_left_ramp(&mut self, a: f64, c: f64) {
        let key = a - self.shift;
        Self::put(&mut self.right, key, c);
        self.sum_right += c;
        let mut need = c;
        while need > WEIGHT_EPS {
            let Some((&k, &w)) = self.right.iter().next() else { break };
            let take = w.min(need);
            self.min += take * (key - k.0);
            if w - take <= WEIGHT_EPS {
                self.right.remove(&k);
            } else {
                *self.right.get_mut(&k).unwrap() = w - take;
            }
            Self::put(&mut self.left, k.0, take);
            self.sum_right -= take;
            self.sum_left += take;
            need -= take;
        }
    }

    fn add_abs(&mut self, a: f64, c: f64) {
        if c > 0.0 {
            self.add_right_ramp(a, c);
            self.add_left_ramp(a, c);
        }
    }

    /// Infimal convolution with `m |x|`: caps both outer slopes at `m`.
    fn cap_slopes(&mut self, m: f64) {
        while self.sum_left > m {
            let Some((&k, &w)) = self.left.iter().next() else { break };
            let cut = (self.sum_left - m).min(w);
            if w - cut <= WEIGHT_EPS {
                self.left.remove(&k);
            } else {
                *self.left.get_mut(&k).unwrap() = w - cut;
            }
            self.sum_left -= cut;
        }
        while self.sum_right > m {
            let Some((&k, &w)) = self.right.iter().next_back() else { break };
            let cut = (self.sum_right - m).min(w);
            if w - cut <= WEIGHT_EPS {
                self.right.remove(&k);
            } else {
                *self.right.get_mut(&k).unwrap() = w - cut;
            }
            self.sum_right -= cut;
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let key = x - self.shift;
        let mut v = self.min;
        for (k, w) in self.right.range(..OrderedFloat(key)) {
            v += w * (key - k.0);
        }
        for (k, w) in self.left.range(OrderedFloat(key)..) {
            v += w * (k.0 - key);
        }
        v
    }
}

/// `max sum f_i d_i` over `|f_{i+1} - f_i| <= lip h`, `|f_i| <= bound`.
///
/// Solved through its dual, a flow problem on the path graph: with `g_i`
/// the flow on edge `(i, i+1)`,
/// `min sum lip h |g_i| + bound sum |d_i + g_{i-1} - g_i|`,
/// by dynamic programming over convex piecewise-linear value functions.
pub fn lipschitz_bounded_sup(d: &[f64], h: f64, lip: f64, bound: f64) -> f64 {
    let n = d.len();
    if n == 0 || bound <= 0.0 {
        return 0.0;
    }
    let edge = lip * h;
    // F(g): cost of the prefix when `g` leaves through the last edge
    let mut f = SlopeFn::abs(bound);
    for (i, di) in d.iter().enumerate() {
        if i > 0 {
            f.cap_slopes(bound);
        }
        f.shift += di;
        if i + 1 < n {
            f.add_abs(0.0, edge);
        }
    }
    f.eval(0.0).max(0.0)
}

/// Bounded-Lipschitz (`kind = Bl`, budgets `(1, 1)`) or Dudley distance
/// (`||f||_inf + Lip(f) <= 1`) on the common lattice.
pub fn bl_dud<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>, kind: BlKind) -> Result<T> {
    let atoms = CommonAtoms::new(a, b);
    let d = atoms.difference();
    let v = match kind {
        BlKind::Bl => lipschitz_bounded_sup(&d, atoms.step, 1.0, 1.0),
        BlKind::Dudley => dudley_from_difference(&d, atoms.step),
    };
    if !v.is_finite() {
        return Err(Error::LpFailure(format!("non-finite value {v}")));
    }
    Ok(T::c(v))
}

/// Outer scan over the Lipschitz budget `L` with `||f||_inf <= 1 - L`. The
/// value is concave in `L` (convex combinations of feasible functions are
/// feasible for the combined budgets), so the best of 64 grid points is
/// refined by golden section.
pub fn dudley_from_difference(d: &[f64], h: f64) -> f64 {
    let value = |l: f64| lipschitz_bounded_sup(d, h, l, 1.0 - l);
    let grid = linspace(0.0, 1.0, 64);
    let (mut best_l, mut best) = (0.0, f64::NEG_INFINITY);
    for &l in &grid {
        let v = value(l);
        if v > best {
            best = v;
            best_l = l;
        }
    }
    let step = grid[1] - grid[0];
    let (lo, hi) = ((best_l - step).max(0.0), (best_l + step).min(1.0));
    let (_, neg) = golden_min(lo, hi, 40, |l| -value(l));
    best.max(-neg)
}

/// Largest transportable mass between `a` and `b` when atom `i` may only
/// be sent to atoms `j` with `|i - j| <= k`.
///
/// The neighbourhoods are intervals moving monotonically with `i`, so
/// serving each source from the leftmost open target is optimal.
pub fn band_flow(a: &[f64], b: &[f64], k: usize) -> f64 {
    let n = b.len();
    let mut rem = b.to_vec();
    let mut ptr = 0usize;
    let mut flow = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        let mut need = ai;
        ptr = ptr.max(i.saturating_sub(k));
        let end = (i + k).min(n - 1);
        let mut j = ptr;
        while need > 0.0 && j <= end {
            let take = need.min(rem[j]);
            rem[j] -= take;
            need -= take;
            flow += take;
            if rem[j] <= 0.0 && j == ptr {
                ptr += 1;
            }
            j += 1;
        }
    }
    flow
}

/// `d_LP` on the common lattice.
///
/// With band half-width `k` steps the best coupling leaves `1 - f(k)` mass
/// off the band, and `eps in [k h, (k+1) h)` is feasible iff
/// `eps >= 1 - f(k)`. The distance is therefore
/// `min_k max(k h, 1 - f(k))`, found exactly by bisection on the integer
/// `k` since the first term increases and the second decreases.
pub fn levy_prokhorov<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<T> {
    let atoms = CommonAtoms::new(a, b);
    Ok(T::c(lp_from_atoms(&atoms.a, &atoms.b, atoms.step)))
}

pub fn lp_from_atoms(a: &[f64], b: &[f64], h: f64) -> f64 {
    let n = a.len();
    let total = a.iter().sum::<f64>().min(b.iter().sum::<f64>());
    let off = |k: usize| (total - band_flow(a, b, k)).max(0.0);
    let value = |k: usize| (k as f64 * h).max(off(k));
    // smallest k with k h >= off(k)
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if mid as f64 * h >= off(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut best = value(lo);
    if lo > 0 {
        best = best.min(value(lo - 1));
    }
    best.min(1.0)
}

/// Concave transport cost `z / (1 + z)`.
pub fn wlp_cost(z: f64) -> f64 {
    z / (1.0 + z)
}

/// Groups consecutive positive masses into at most `cap` bins, each
/// placed at its centroid. Bins are cut so that `mass * span` stays below
/// a common threshold, found by bisection: narrow where mass sits, wide in
/// the tails. Also returns `sum mass * E|X - centroid|`, which bounds the
/// transport cost of the grouping for any 1-Lipschitz metric cost.
fn bin_masses(xs: &[f64], w: &[f64], cap: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let pts: Vec<(f64, f64)> = xs.iter().zip(w).filter(|(_, m)| **m > 1e-16).map(|(x, m)| (*x, *m)).collect();
    if pts.is_empty() {
        return (Vec::new(), Vec::new(), 0.0);
    }
    let cut = |tau: f64| -> Vec<(usize, usize)> {
        let mut bins = Vec::new();
        let (mut start, mut m) = (0, 0.0);
        for (k, &(x, wi)) in pts.iter().enumerate() {
            if k > start && (m + wi) * (x - pts[start].0) > tau {
                bins.push((start, k));
                start = k;
                m = 0.0;
            }
            m += wi;
        }
        bins.push((start, pts.len()));
        bins
    };
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let width = pts[pts.len() - 1].0 - pts[0].0;
    let bins = if pts.len() <= cap {
        (0..pts.len()).map(|k| (k, k + 1)).collect()
    } else {
        let (mut lo, mut hi) = (0.0, total * width);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cut(mid).len() > cap {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cut(hi)
    };
    let (mut pos, mut mass) = (Vec::with_capacity(bins.len()), Vec::with_capacity(bins.len()));
    let mut err = 0.0;
    for (a, b) in bins {
        let part = &pts[a..b];
        let m: f64 = part.iter().map(|p| p.1).sum();
        let c = part.iter().map(|p| p.0 * p.1).sum::<f64>() / m;
        err += part.iter().map(|p| p.1 * (p.0 - c).abs()).sum::<f64>();
        pos.push(c);
        mass.push(m);
    }
    (pos, mass, err)
}

/// Transport plan between weighted point sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPlan {
    /// `(x, y)` positions of each coupled pair.
    pub support: Vec<(f64, f64)>,
    pub mass: Vec<f64>,
    pub cost_value: f64,
}

impl CouplingPlan {
    /// `X = Y`.
    pub fn identity<T: Real>(m: &GridMeasure<T>) -> Self {
        let m = to_f64(m);
        let atoms = m.atoms();
        let support = m.nodes().into_iter().map(|x| (x, x)).collect();
        Self { support, mass: atoms, cost_value: 0.0 }
    }

    /// Quantile (north-west corner) coupling of the common-lattice atoms.
    pub fn comonotone<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Self {
        let atoms = CommonAtoms::new(a, b);
        let (mut i, mut j) = (0, 0);
        let (mut ra, mut rb) = (atoms.a[0], atoms.b[0]);
        let mut plan = Self { support: Vec::new(), mass: Vec::new(), cost_value: 0.0 };
        let n = atoms.len();
        while i < n && j < n {
            let take = ra.min(rb);
            if take > 0.0 {
                plan.support.push((atoms.node(i), atoms.node(j)));
                plan.mass.push(take);
            }
            ra -= take;
            rb -= take;
            if ra <= 0.0 {
                i += 1;
                ra = if i < n { atoms.a[i] } else { 0.0 };
            }
            if rb <= 0.0 {
                j += 1;
                rb = if j < n { atoms.b[j] } else { 0.0 };
            }
        }
        plan.cost_value = plan.expected(|x, y| (x - y).abs());
        plan
    }

    /// Product coupling of the atoms, each side grouped into at most
    /// `max_atoms` equal-mass bins.
    pub fn independent<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>, max_atoms: usize) -> Self {
        let (a, b) = (to_f64(a), to_f64(b));
        let (xa, wa, _) = bin_masses(&a.nodes(), &a.atoms(), max_atoms.max(1));
        let (xb, wb, _) = bin_masses(&b.nodes(), &b.atoms(), max_atoms.max(1));
        let mut plan = Self { support: Vec::new(), mass: Vec::new(), cost_value: 0.0 };
        for (x, p) in xa.iter().zip(&wa) {
            for (y, q) in xb.iter().zip(&wb) {
                plan.support.push((*x, *y));
                plan.mass.push(p * q);
            }
        }
        plan.cost_value = plan.expected(|x, y| (x - y).abs());
        plan
    }

    pub fn expected(&self, c: impl Fn(f64, f64) -> f64) -> f64 {
        self.support.iter().zip(&self.mass).map(|((x, y), m)| m * c(*x, *y)).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Largest deviation of the plan's marginals from the given atoms.
    pub fn marginal_error(&self, xs: &[f64], wa: &[f64], ys: &[f64], wb: &[f64]) -> f64 {
        let index = |pts: &[f64], v: f64| pts.iter().position(|p| (p - v).abs() <= 1e-12 * (1.0 + v.abs()));
        let mut ma = vec![0.0; wa.len()];
        let mut mb = vec![0.0; wb.len()];
        for ((x, y), m) in self.support.iter().zip(&self.mass) {
            match (index(xs, *x), index(ys, *y)) {
                (Some(i), Some(j)) => {
                    ma[i] += m;
                    mb[j] += m;
                }
                _ => return f64::INFINITY,
            }
        }
        let ea = ma.iter().zip(wa).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        let eb = mb.iter().zip(wb).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        ea.max(eb)
    }
}

/// Ky-Fan distance `K = inf{eps : P(Z > eps) <= eps}` and
/// `K* = E[Z / (1 + Z)]` for `Z = |X - Y|` under the plan.
pub fn kyfan(plan: &CouplingPlan) -> (f64, f64) {
    let total = plan.total_mass();
    let mut disp: Vec<(f64, f64)> =
        plan.support.iter().zip(&plan.mass).map(|((x, y), m)| ((x - y).abs(), m / total)).collect();
    disp.sort_by(|u, v| u.0.total_cmp(&v.0));
    let k_star = disp.iter().map(|(z, m)| m * wlp_cost(*z)).sum();
    // P(Z > eps) is constant on [z_k, z_{k+1}); the sentinel z = 0 covers
    // the interval left of the smallest displacement
    let mut tail: f64 = disp.iter().map(|d| d.1).sum::<f64>().min(1.0);
    let mut best = f64::INFINITY;
    let mut k = 0;
    let mut z = 0.0;
    loop {
        // drop every atom with displacement <= z
        while k < disp.len() && disp[k].0 <= z {
            tail -= disp[k].1;
            k += 1;
        }
        best = best.min(z.max(tail.max(0.0)));
        if k == disp.len() || z >= best {
            break;
        }
        z = disp[k].0;
    }
    (best.min(1.0), k_star)
}

/// `W_LP`: transport with cost `|x - y| / (1 + |x - y|)` by successive
/// shortest paths. Returns the value and an error bound from grouping.
///
/// Common mass stays in place (the cost is a metric). The surplus and
/// deficit left are each grouped into at most `MAX_TRANSPORT_ATOMS`
/// equal-mass bins.
pub fn w_lp_with_tolerance<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<(T, f64)> {
    let atoms = CommonAtoms::new(a, b);
    let xs: Vec<f64> = (0..atoms.len()).map(|k| atoms.node(k)).collect();
    let d = atoms.difference();
    let pos: Vec<f64> = d.iter().map(|v| v.max(0.0)).collect();
    let neg: Vec<f64> = d.iter().map(|v| (-v).max(0.0)).collect();
    let (sx, sw, e1) = bin_masses(&xs, &pos, MAX_TRANSPORT_ATOMS);
    let (tx, tw, e2) = bin_masses(&xs, &neg, MAX_TRANSPORT_ATOMS);
    if sw.is_empty() || tw.is_empty() {
        return Ok((T::zero(), atoms.step));
    }
    let (value, _) = transport(&sx, &sw, &tx, &tw, wlp_cost)?;
    Ok((T::c(value), e1 + e2 + atoms.step))
}

pub fn w_lp<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<T> {
    w_lp_with_tolerance(a, b).map(|(v, _)| v)
}

/// Balanced transportation problem by successive shortest paths with
/// potentials (dense Dijkstra). Demand is rescaled to the supply total.
/// Returns the optimal cost and the flow matrix (row-major, sources by sinks).
pub fn transport(
    xs: &[f64],
    supply: &[f64],
    ys: &[f64],
    demand: &[f64],
    cost: impl Fn(f64) -> f64,
) -> Result<(f64, Vec<f64>)> {
    let (n, m) = (xs.len(), ys.len());
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if !(total_s > 0.0) || !(total_d > 0.0) {
        return Err(Error::LpFailure("empty transport problem".into()));
    }
    let c: Vec<f64> = (0..n * m).map(|k| cost((xs[k / m] - ys[k % m]).abs())).collect();
    let mut rs = supply.to_vec();
    let mut rd: Vec<f64> = demand.iter().map(|v| v * total_s / total_d).collect();
    let mut flow = vec![0.0; n * m];
    let (mut ps, mut pd) = (vec![0.0; n], vec![0.0; m]);
    let tol = 1e-15 * total_s;
    let mut left = total_s;
    let mut rounds = 0usize;
    while left > 1e-12 * total_s {
        rounds += 1;
        if rounds > 20 * (n + m) + 100 {
            return Err(Error::LpFailure(format!("no convergence, {left} mass left")));
        }
        // Dijkstra over sources (0..n) and sinks (n..n+m) on reduced costs
        let inf = f64::INFINITY;
        let mut dist = vec![inf; n + m];
        let mut prev = vec![usize::MAX; n + m];
        let mut done = vec![false; n + m];
        for i in 0..n {
            if rs[i] > tol {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = inf;
            for v in 0..n + m {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < n {
                for j in 0..m {
                    let v = n + j;
                    if done[v] {
                        continue;
                    }
                    let nd = best + c[u * m + j] + ps[u] - pd[j];
                    if nd < dist[v] {
                        dist[v] = nd;
                        prev[v] = u;
                    }
                }
            } else {
                let j = u - n;
                for i in 0..n {
                    if done[i] || flow[i * m + j] <= tol {
                        continue;
                    }
                    let nd = best - c[i * m + j] + pd[j] - ps[i];
                    if nd < dist[i] {
                        dist[i] = nd;
                        prev[i] = u;
                    }
                }
            }
        }
        // nearest sink with open demand
        let sink = (0..m)
            .filter(|&j| rd[j] > tol && dist[n + j].is_finite())
            .min_by(|&x, &y| dist[n + x].total_cmp(&dist[n + y]));
        let Some(j_end) = sink else {
            return Err(Error::LpFailure("no augmenting path".into()));
        };
        let cap = dist[n + j_end];
        for v in 0..n {
            ps[v] += dist[v].min(cap);
        }
        for j in 0..m {
            pd[j] += dist[n + j].min(cap);
        }
        // bottleneck along the path
        let mut amount = rd[j_end];
        let mut v = n + j_end;
        loop {
            let u = prev[v];
            if u == usize::MAX {
                amount = amount.min(rs[v]);
                break;
            }
            if v < n {
                // reverse arc sink u -> source v
                amount = amount.min(flow[v * m + (u - n)]);
            }
            v = u;
        }
        let mut v = n + j_end;
        loop {
            let u = prev[v];
            if u == usize::MAX {
                rs[v] -= amount;
                break;
            }
            if v >= n {
                flow[u * m + (v - n)] += amount;
            } else {
                flow[v * m + (u - n)] -= amount;
            }
            v = u;
        }
        rd[j_end] -= amount;
        left -= amount;
    }
    let value = flow.iter().zip(&c).map(|(f, c)| f * c).sum();
    Ok((value, flow))
}

/// One metric between two measures, with the solver tolerance.
pub fn distance<T: Real>(metric: Metric, a: &GridMeasure<T>, b: &GridMeasure<T>) -> Result<(f64, f64)> {
    let lattice = || CommonAtoms::new(a, b).step;
    Ok(match metric {
        Metric::Tv => (tv(a, b)?.f64(), 1e-9),
        Metric::W1 => (w1(a, b)?.f64(), 1e-9),
        Metric::Bl => (bl_dud(a, b, BlKind::Bl)?.f64(), lattice()),
        Metric::Dudley => (bl_dud(a, b, BlKind::Dudley)?.f64(), lattice()),
        Metric::LevyProkhorov => (levy_prokhorov(a, b)?.f64(), lattice()),
        Metric::Wlp => {
            let (v, tol) = w_lp_with_tolerance(a, b)?;
            (v.f64(), tol)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub measures: Vec<String>,
    pub metric: Metric,
    pub matrix: Vec<Vec<f64>>,
    pub tolerance: Vec<Vec<f64>>,
}

impl DistanceReport {
    /// Fills the symmetric matrix from the upper triangle.
    pub fn compute<T: Real>(ids: &[String], measures: &[GridMeasure<T>], metric: Metric) -> Result<Self> {
        let n = measures.len();
        let mut matrix = vec![vec![0.0; n]; n];
        let mut tolerance = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let (v, t) = distance(metric, &measures[i], &measures[j])?;
                matrix[i][j] = v;
                matrix[j][i] = v;
                tolerance[i][j] = t;
                tolerance[j][i] = t;
            }
        }
        Ok(Self { measures: ids.to_vec(), metric, matrix, tolerance })
    }
}
