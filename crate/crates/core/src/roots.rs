//! Derivative-free bracketing and bisection in energy.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
/// Stops when the bracket is below `rel_tol * max(1, |E|)` or cannot shrink.
/// Returns the endpoint with the smaller `|f|`.
pub(crate) fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    let mut f_hi = f(hi).unwrap_or(f64::NAN);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs().max(1.0) {
            break;
        }
        let fm = match f(mid) {
            Some(v) if v.is_finite() => v,
            _ => break,
        };
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if f_hi.is_nan() || f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// A bracketed sign change located by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SignChange {
    pub energy: f64,
    pub residual: f64,
}

/// Evaluates `f` on the sorted `points`, brackets every sign change between
/// consecutive defined samples and bisects it.
pub(crate) fn sign_changes<F>(f: &F, points: &[f64], rel_tol: f64) -> Vec<SignChange>
where
    F: Fn(f64) -> Option<f64>,
{
    let samples: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|&e| f(e).filter(|v| v.is_finite()).map(|v| (e, v)))
        .collect();
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            out.push(SignChange {
                energy: a,
                residual: 0.0,
            });
            continue;
        }
        if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            let root = bisect(f, a, b, fa, rel_tol);
            let residual = f(root).map(f64::abs).unwrap_or(f64::INFINITY);
            out.push(SignChange {
                energy: root,
                residual,
            });
        }
    }
    if let Some(&(e, v)) = samples.last() {
        if v == 0.0 {
            out.push(SignChange {
                energy: e,
                residual: 0.0,
            });
        }
    }
    out
}
