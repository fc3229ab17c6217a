use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hermitian::hermitian_max_eigenvalue;
use super::Matrix;
use crate::error::{Error, Result};

/// Which vector norm on `C^n` induces the operator norm of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::Linf];

    /// The norm of the dual space: transposes act isometrically between
    /// `(C^n, l^p)` and `(C^n, l^q)`.
    pub fn dual(self) -> NormKind {
        match self {
            NormKind::L1 => NormKind::Linf,
            NormKind::L2 => NormKind::L2,
            NormKind::Linf => NormKind::L1,
        }
    }

    /// `1/p` for the underlying `l^p` norm.
    pub fn inverse_exponent(self) -> f64 {
        match self {
            NormKind::L1 => 1.0,
            NormKind::L2 => 0.5,
            NormKind::Linf => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(NormKind::L1),
            "l2" | "2" => Ok(NormKind::L2),
            "linf" | "inf" | "l∞" => Ok(NormKind::Linf),
            other => Err(Error::invalid("norm", format!("unsupported norm tag `{other}`"))),
        }
    }
}

/// Maximum absolute column sum.
pub fn column_sum_norm(t: &Matrix) -> f64 {
    let n = t.dim();
    (0..n)
        .map(|j| t.column(j).map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute row sum.
pub fn row_sum_norm(t: &Matrix) -> f64 {
    let n = t.dim();
    (0..n)
        .map(|k| t.row(k).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value, from the top eigenvalue of `T* T`.
pub fn spectral_norm(t: &Matrix) -> f64 {
    let gram = t.conj_transpose().matmul(t);
    hermitian_max_eigenvalue(&gram).max(0.0).sqrt()
}

/// Operator norm of `t` induced by the chosen vector norm.
pub fn induced_norm(t: &Matrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::L1 => column_sum_norm(t),
        NormKind::Linf => row_sum_norm(t),
        NormKind::L2 => spectral_norm(t),
    }
}

pub const POWER_ITERATION_CAP: usize = 100_000;
pub const POWER_ITERATION_RTOL: f64 = 1e-12;

/// Largest singular value by power iteration on `T* T`.
///
/// Starts from the normalized all-ones vector and then restarts once from a
/// fixed perturbed vector, keeping the larger Rayleigh quotient; the second
/// run catches starts that are orthogonal to the dominant singular vector.
/// Slow when the two largest singular values are close, which is why
/// [`induced_norm`] goes through the tridiagonal eigensolver instead.
pub fn power_iteration_norm2(t: &Matrix) -> Result<f64> {
    let n = t.dim();
    let tstar = t.conj_transpose();
    let apply = |x: &[Complex64]| tstar.mul_vec(&t.mul_vec(x));
    let mut best: f64 = 0.0;
    for start in start_vectors(n) {
        let mu = power_iterate(&apply, start)?;
        best = best.max(mu);
    }
    Ok(best.max(0.0).sqrt())
}

pub(crate) fn start_vectors(n: usize) -> [Vec<Complex64>; 2] {
    let ones = vec![Complex64::new(1.0, 0.0); n];
    // Golden-angle phases give a start with no exact symmetry.
    let perturbed = (0..n)
        .map(|k| {
            let phase = 2.399_963_229_728_653 * (k as f64 + 1.0);
            Complex64::new(1.0, 0.0) + 0.5 * Complex64::from_polar(1.0, phase)
        })
        .collect();
    [ones, perturbed]
}

/// Power iteration on a positive semidefinite operator; returns the final
/// Rayleigh quotient.
pub(crate) fn power_iterate(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    start: Vec<Complex64>,
) -> Result<f64> {
    let mut x = start;
    normalize(&mut x);
    let mut prev = f64::NAN;
    for _ in 0..POWER_ITERATION_CAP {
        let y = apply(&x);
        let mu: f64 = x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum();
        let norm_y = vec_norm(&y);
        if norm_y == 0.0 {
            return Ok(0.0);
        }
        if (mu - prev).abs() <= POWER_ITERATION_RTOL * mu.abs() {
            return Ok(mu);
        }
        prev = mu;
        x = y.into_iter().map(|v| v / norm_y).collect();
    }
    Err(Error::NotConverged {
        what: "power iteration",
        iterations: POWER_ITERATION_CAP,
        last: prev,
    })
}

pub(crate) fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [Complex64]) {
    let s = vec_norm(x);
    if s > 0.0 {
        x.iter_mut().for_each(|z| *z /= s);
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    min_pivot: f64,
}

impl Lu {
    pub(crate) fn factor(a: &Matrix) -> Lu {
        let n = a.dim();
        let mut lu = a.entries().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let (piv, mag) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(mag);
            if piv != col {
                for j in 0..n {
                    lu.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let p = lu[col * n + col];
            if mag == 0.0 {
                continue;
            }
            for r in col + 1..n {
                let f = lu[r * n + col] / p;
                lu[r * n + col] = f;
                for j in col + 1..n {
                    let u = lu[col * n + j];
                    lu[r * n + j] -= f * u;
                }
            }
        }
        Lu {
            n,
            lu,
            perm,
            min_pivot,
        }
    }

    pub(crate) fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    pub(crate) fn inverse(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for (k, v) in col.into_iter().enumerate() {
                out[(k, j)] = v;
            }
        }
        out
    }
}

/// Relative pivot size below which `lambda I - T` counts as singular.
pub const SINGULAR_PIVOT_RTOL: f64 = 1e-13;

/// `||(lambda I - T)^{-1}||` in the requested induced norm.
pub fn resolvent_norm(t: &Matrix, lambda: Complex64, kind: NormKind) -> Result<f64> {
    let m = t.scale(Complex64::new(-1.0, 0.0)).shift(lambda);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(&m);
    if lu.min_pivot() <= SINGULAR_PIVOT_RTOL * scale * m.dim() as f64 {
        return Err(Error::Singular {
            pivot: lu.min_pivot(),
        });
    }
    Ok(induced_norm(&lu.inverse(), kind))
}

/// Inverse by LU; errors on numerically singular input.
pub fn inverse(t: &Matrix) -> Result<Matrix> {
    let scale = t.max_abs().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(t);
    if lu.min_pivot() <= SINGULAR_PIVOT_RTOL * scale * t.dim() as f64 {
        return Err(Error::Singular {
            pivot: lu.min_pivot(),
        });
    }
    Ok(lu.inverse())
}
