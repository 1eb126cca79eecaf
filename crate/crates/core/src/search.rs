//! Small scalar search helpers shared by the oracles and the bound scans.

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub fn golden_min(mut a: f64, mut b: f64, iters: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid scan followed by golden refinement around the best grid point.
/// Non-finite values count as `+inf`.
pub fn scan_min(grid: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let clean = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best = (f64::NAN, f64::INFINITY);
    let mut at = 0;
    for (k, x) in grid.iter().enumerate() {
        let v = clean(*x);
        if v < best.1 {
            best = (*x, v);
            at = k;
        }
    }
    if !best.1.is_finite() || grid.len() < 3 {
        return best;
    }
    let lo = grid[at.saturating_sub(1)];
    let hi = grid[(at + 1).min(grid.len() - 1)];
    let refined = golden_min(lo, hi, 60, clean);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}
