//! Bracketing root finders shared by the statics and harmonic-balance code.

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign.
///
/// Stops when the bracket is narrower than `width` or cannot be split further
/// in floating point. Returns the endpoint with the smaller residual.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    let mut best_hi = f_hi.abs();
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            best_hi = f_mid.abs();
        }
    }
    if f_lo.abs() <= best_hi {
        lo
    } else {
        hi
    }
}

/// All roots of `f` on `[lo, hi]` found by sign changes on an `n`-interval grid,
/// each polished by bisection to `width`. Grid points where `f` is exactly zero
/// are reported as roots. Output is ascending.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, width: f64) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    let mut roots = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        roots.push(lo);
    }
    for i in 1..=n {
        let x = if i == n { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && (fx > 0.0) != (f_prev > 0.0) {
            roots.push(bisect(&f, x_prev, x, width));
        }
        x_prev = x;
        f_prev = fx;
    }
    roots
}
