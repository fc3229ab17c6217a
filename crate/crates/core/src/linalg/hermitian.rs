//! Extreme eigenvalues of Hermitian matrices.
//!
//! Householder reduction to a real symmetric tridiagonal matrix followed by
//! Sturm-sequence bisection. Only the Hermitian part of the input is used.

use num_complex::Complex64;

use super::Matrix;

/// Diagonal and (real, nonnegative) off-diagonal of a tridiagonal matrix
/// unitarily similar to the Hermitian part of `a`.
pub(crate) fn tridiagonalize(a: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.dim();
    // Work on the Hermitian part so slightly non-Hermitian input is harmless.
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] = 0.5 * (a[(i, j)] + a[(j, i)].conj());
        }
    }
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x0 = h[(k + 1) * n + k];
        let xnorm = (k + 1..n).map(|r| h[r * n + k].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            off.push(0.0);
            continue;
        }
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        // v = x - alpha e1, normalized
        for (i, r) in (k + 1..n).enumerate() {
            v[i] = h[r * n + k];
        }
        v[0] -= alpha;
        let vnorm = v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            off.push(xnorm);
            continue;
        }
        v[..m].iter_mut().for_each(|z| *z /= vnorm);

        // w = A22 v on the trailing block
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            w[i] = (0..m).fold(Complex64::new(0.0, 0.0), |acc, j| acc + h[row + j] * v[j]);
        }
        let vw: Complex64 = (0..m).map(|i| v[i].conj() * w[i]).sum();
        // A22 <- A22 - 2 v w* - 2 w v* + 4 (v* w) v v*
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            for j in 0..m {
                h[row + j] += -2.0 * v[i] * w[j].conj() - 2.0 * w[i] * v[j].conj()
                    + 4.0 * vw * v[i] * v[j].conj();
            }
        }
        for r in k + 1..n {
            h[r * n + k] = Complex64::new(0.0, 0.0);
            h[k * n + r] = Complex64::new(0.0, 0.0);
        }
        h[(k + 1) * n + k] = alpha;
        h[k * n + k + 1] = alpha.conj();
        off.push(alpha.norm());
    }
    let diag = (0..n).map(|i| h[i * n + i].re).collect();
    (diag, off)
}

/// Number of eigenvalues strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue of rank `index` (0 = smallest) of a symmetric tridiagonal.
fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], index: usize) -> f64 {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1] } else { 0.0 } + if i + 1 < n { off[i] } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    if lo == hi {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest eigenvalue of the Hermitian part of `a`.
pub fn hermitian_max_eigenvalue(a: &Matrix) -> f64 {
    let (d, e) = tridiagonalize(a);
    tridiagonal_eigenvalue(&d, &e, d.len() - 1)
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn hermitian_min_eigenvalue(a: &Matrix) -> f64 {
    let (d, e) = tridiagonalize(a);
    tridiagonal_eigenvalue(&d, &e, 0)
}
