//! Eigenvalues through the characteristic polynomial.
//!
//! Coefficients come from the Faddeev-LeVerrier recursion and the roots from
//! Aberth-Ehrlich simultaneous iteration. This is adequate for the small,
//! moderately conditioned matrices used here; the residual is reported so
//! callers can see when it is not.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const ABERTH_MAX_SWEEPS: usize = 10_000;

/// Eigenvalues with algebraic multiplicity, sorted by `(re, im)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Largest `|chi(z)|` over the returned roots of the characteristic
    /// polynomial `chi`.
    pub residual: f64,
}

/// Characteristic polynomial `det(zI - T)`, low-order coefficient first.
pub fn characteristic_polynomial(t: &Matrix) -> Vec<Complex64> {
    let n = t.dim();
    let mut c = vec![ZERO; n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = Matrix::zeros(n);
    for k in 1..=n {
        // M_k = T M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(T M_k) / k
        m = t.matmul(&m).shift(c[n - k + 1]);
        let tm = t.matmul(&m);
        let trace: Complex64 = (0..n).map(|i| tm[(i, i)]).sum();
        c[n - k] = -trace / k as f64;
    }
    c
}

pub fn eigenvalues(t: &Matrix) -> Result<Spectrum> {
    let chi = characteristic_polynomial(t);
    let mut roots = polynomial_roots(&chi)?;
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let residual = roots.iter().map(|&z| horner(&chi, z).norm()).fold(0.0, f64::max);
    Ok(Spectrum {
        eigenvalues: roots,
        residual,
    })
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
}

/// Horner value, derivative, and running rounding-error bound.
fn horner_with_bound(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    let mut bound = 0.0;
    let az = z.norm();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        bound = bound * az + a.norm();
    }
    (p, dp, bound)
}

/// All roots of `sum c[k] z^k` (leading coefficient nonzero), with
/// multiplicity. Exact zero low-order coefficients are deflated as exact
/// zero roots.
pub fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let top = c
        .iter()
        .rposition(|z| *z != ZERO)
        .ok_or_else(|| Error::invalid("coeffs", "zero polynomial has no isolated roots"))?;
    let c = &c[..=top];
    let zeros = c.iter().position(|z| *z != ZERO).unwrap_or(0);
    let mut roots = vec![ZERO; zeros];
    let c = &c[zeros..];
    let d = c.len() - 1;
    match d {
        0 => return Ok(roots),
        1 => {
            roots.push(-c[0] / c[1]);
            return Ok(roots);
        }
        _ => {}
    }
    roots.extend(aberth(c)?);
    Ok(roots)
}

fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    let lead = c[d];
    let center = -c[d - 1] / (lead * d as f64);
    // Fujiwara-type bound on the root moduli about the centroid.
    let shifted: Vec<Complex64> = {
        let p = super::poly::Polynomial::new(c.to_vec()).expect("finite coefficients");
        p.taylor_shift(center)
    };
    let radius = (0..d)
        .map(|k| (shifted[k] / lead).norm().powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE.sqrt());
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.4;
            center + Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;
    for _sweep in 0..ABERTH_MAX_SWEEPS {
        let mut all = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = horner_with_bound(c, z[i]);
            if p.norm() <= 8.0 * eps * bound {
                done[i] = true;
                continue;
            }
            all = false;
            let newton = if dp == ZERO {
                Complex64::new(radius * eps.sqrt() + eps, 0.0)
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff == ZERO {
                        ZERO
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let w = if denom == ZERO { newton } else { newton / denom };
            z[i] -= w;
            if w.norm() <= eps * z[i].norm() {
                done[i] = true;
            }
        }
        if all {
            return Ok(z);
        }
    }
    let residual = z.iter().map(|&r| horner(c, r).norm()).fold(0.0, f64::max);
    Err(Error::EigenNotConverged {
        sweeps: ABERTH_MAX_SWEEPS,
        residual,
        best: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nilpotent_jordan_is_exact() {
        let s = eigenvalues(&Matrix::jordan(4)).unwrap();
        assert_eq!(s.eigenvalues, vec![ZERO; 4]);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn quadratic_example() {
        // det(zI - T) = z^2 - 2z for T = [[2,1],[0,0]]
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let chi = characteristic_polynomial(&t);
        assert_eq!(chi, vec![ZERO, c(-2.0, 0.0), c(1.0, 0.0)]);
        let s = eigenvalues(&t).unwrap();
        assert_eq!(s.eigenvalues, vec![ZERO, c(2.0, 0.0)]);
    }

    #[test]
    fn diagonal_complex() {
        let s = eigenvalues(&Matrix::diag(&[c(3.0, 0.0), c(1.0, 1.0)])).unwrap();
        assert!((s.eigenvalues[0] - c(1.0, 1.0)).norm() < 1e-13);
        assert!((s.eigenvalues[1] - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn repeated_roots_converge() {
        // (z-1)^3 (z+2)
        let q = super::super::Polynomial::from_real(&[-1.0, 1.0]);
        let r = super::super::Polynomial::from_real(&[2.0, 1.0]);
        let cubic = q.mul(&q).mul(&q).mul(&r);
        let mut roots = polynomial_roots(cubic.coeffs()).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - c(-2.0, 0.0)).norm() < 1e-10);
        for z in &roots[1..] {
            assert!((z - c(1.0, 0.0)).norm() < 1e-4, "{z}");
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(polynomial_roots(&[ZERO, ZERO]).is_err());
    }
}
