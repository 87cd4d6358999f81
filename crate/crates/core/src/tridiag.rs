//! Dense Householder tridiagonalization and Sturm-sequence bisection.

/// Reduces a dense symmetric matrix (consumed) to tridiagonal form,
/// returning the diagonal and the sub-diagonal.
pub fn householder_tridiagonal(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum();
        if alpha_sq == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let alpha = if x0 >= 0.0 { -alpha_sq.sqrt() } else { alpha_sq.sqrt() };
        // v = x - alpha e1, H = I - beta v vᵀ
        for i in k + 1..n {
            v[i] = a[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm_sq = alpha_sq - 2.0 * alpha * x0 + alpha * alpha;
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        for i in k + 1..n {
            let row = &a[i];
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            p[i] = beta * s;
        }
        let pv: f64 = (k + 1..n).map(|i| p[i] * v[i]).sum();
        let c = 0.5 * beta * pv;
        for i in k + 1..n {
            p[i] -= c * v[i];
        }
        for i in k + 1..n {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[i];
            for j in k + 1..n {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
        a[k + 1][k] = alpha;
        a[k][k + 1] = alpha;
        for i in k + 2..n {
            a[i][k] = 0.0;
            a[k][i] = 0.0;
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (0..n - 1).map(|i| a[i + 1][i]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin_bounds(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// The `index`-th smallest eigenvalue (0-based) by bisection.
pub fn bisect_eigenvalue(d: &[f64], e: &[f64], index: usize, rel_tol: f64, bounds: (f64, f64)) -> f64 {
    let (mut lo, mut hi) = bounds;
    let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
    lo -= 1e-14 * span + f64::MIN_POSITIVE;
    hi += 1e-14 * span + f64::MIN_POSITIVE;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        if sturm_count(d, e, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
