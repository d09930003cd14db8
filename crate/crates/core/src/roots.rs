//! Bracketed scalar root finding and one-dimensional maximization.

/// Bisection on a sign predicate.
///
/// `lo` and `hi` must disagree on `pred`; the returned pair still does, with
/// `hi - lo <= tol` or adjacent floats.
pub fn bisect_predicate(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut pred: impl FnMut(f64) -> bool,
) -> (f64, f64) {
    let p_lo = pred(lo);
    debug_assert_ne!(
        p_lo,
        pred(hi),
        "bisection bracket does not straddle a change"
    );
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == p_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Root of a continuous function on a sign-changing bracket.
///
/// Stops once `|f| <= f_tol` or the bracket has collapsed to adjacent floats,
/// returning whichever endpoint has the smaller residual.
pub fn bisect_root(
    mut lo: f64,
    mut hi: f64,
    f_tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    let mut f_hi = f_hi;
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Some(if f_lo.abs() <= f_hi.abs() { lo } else { hi });
        }
        let f_mid = f(mid);
        if f_mid.abs() <= f_tol {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximum of `f` over `[lo, hi]`: a uniform scan with spacing at most `step`,
/// then golden-section refinement around the best scan point.
pub fn scan_max(
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> (f64, f64) {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let (mut best_k, mut best) = (0, f(lo));
    for k in 1..=n {
        let v = f(lo + k as f64 * h);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let a = (lo + (best_k as f64 - 1.0) * h).max(lo);
    let b = (lo + (best_k as f64 + 1.0) * h).min(hi);
    let (x, v) = golden_max(a, b, tol, &mut f);
    if v >= best {
        (x, v)
    } else {
        (lo + best_k as f64 * h, best)
    }
}
