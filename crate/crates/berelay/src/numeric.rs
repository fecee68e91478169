//! Small scalar optimization helpers shared by the solvers.

/// Result of a scalar maximization: the argmax and the value there.
#[derive(Debug, Clone, Copy)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Shrinks the bracket until it is narrower than `xtol`, then returns the
/// best point seen anywhere during the search, endpoints included. For
/// strictly unimodal functions this is the global maximum of the interval to
/// within `xtol`; for flat stretches it returns some maximizer.
pub fn golden_section_max<F: FnMut(f64) -> f64>(lo: f64, hi: f64, xtol: f64, mut f: F) -> ScalarMax {
    assert!(lo.is_finite() && hi.is_finite() && lo <= hi);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);

    let mut best = ScalarMax {
        x: lo,
        value: f(lo),
    };
    let consider = |x: f64, value: f64, best: &mut ScalarMax| {
        if value > best.value {
            *best = ScalarMax { x, value };
        }
    };
    let v_hi = f(hi);
    consider(hi, v_hi, &mut best);
    if hi - lo <= xtol {
        return best;
    }

    let mut a = lo;
    let mut b = hi;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    while b - a > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            consider(d, fd, &mut best);
        }
    }
    best
}

/// Largest `x` in `[lo, hi]` with `pred(x)` true, assuming `pred` is true at
/// `lo` and monotone (true then false). Bisects to `xtol` and returns a point
/// where `pred` held.
pub fn bisect_upper<F: FnMut(f64) -> bool>(lo: f64, hi: f64, xtol: f64, mut pred: F) -> f64 {
    debug_assert!(pred(lo), "bisect_upper: predicate must hold at lo");
    if pred(hi) {
        return hi;
    }
    let mut good = lo;
    let mut bad = hi;
    while bad - good > xtol {
        let mid = 0.5 * (good + bad);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Smallest `x` in `[lo, hi]` with `pred(x)` true, assuming `pred` is true at
/// `hi` and monotone (false then true). Bisects to `xtol` and returns a point
/// where `pred` held.
pub fn bisect_lower<F: FnMut(f64) -> bool>(lo: f64, hi: f64, xtol: f64, mut pred: F) -> f64 {
    debug_assert!(pred(hi), "bisect_lower: predicate must hold at hi");
    if pred(lo) {
        return lo;
    }
    let mut bad = lo;
    let mut good = hi;
    while good - bad > xtol {
        let mid = 0.5 * (bad + good);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}
