use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex polynomial; `coeffs[k]` multiplies `z^k`.
///
/// Trailing zero coefficients are allowed and ignored by [`Polynomial::degree`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<PolyRepr> for Polynomial {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        Polynomial::new(r.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<Polynomial> for PolyRepr {
    fn from(p: Polynomial) -> Self {
        PolyRepr {
            coeffs: p.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coeffs", "coefficient list is empty"));
        }
        if coeffs.iter().any(|z| !z.is_finite()) {
            return Err(Error::invalid("coeffs", "coefficients must be finite"));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .expect("finite nonempty coefficients")
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        Polynomial { coeffs }
    }

    /// The identity polynomial `p(z) = z`.
    pub fn identity() -> Self {
        Self::monomial(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest index with a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|z| *z != ZERO).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::constant(ZERO);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial { coeffs }
    }

    pub fn scale(&self, alpha: Complex64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| c * alpha).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO) + other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Polynomial { coeffs }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }

    /// `z -> p(alpha z + beta)`.
    pub fn compose_affine(&self, alpha: Complex64, beta: Complex64) -> Polynomial {
        // Horner in the polynomial ring: q <- q * (alpha z + beta) + c_k.
        let lin = Polynomial {
            coeffs: vec![beta, alpha],
        };
        let mut q = Polynomial::constant(ZERO);
        for &c in self.coeffs.iter().rev() {
            q = q.mul(&lin).add(&Polynomial::constant(c));
        }
        q.coeffs.truncate(self.coeffs.len().max(1));
        q
    }

    /// Coefficients of the Taylor expansion of `p` around `z0`.
    pub fn taylor_shift(&self, z0: Complex64) -> Vec<Complex64> {
        // Repeated synthetic division.
        let mut c = self.coeffs.clone();
        let d = c.len();
        for i in 0..d {
            for k in (i..d - 1).rev() {
                let hi = c[k + 1];
                c[k] += z0 * hi;
            }
        }
        c
    }

    /// Drops trailing zero coefficients (keeps at least one).
    pub fn trimmed(&self) -> Polynomial {
        let d = self.degree();
        Polynomial {
            coeffs: self.coeffs[..=d].to_vec(),
        }
    }
}

/// Horner evaluation of `p(T)`.
pub fn poly_apply(p: &Polynomial, t: &Matrix) -> Matrix {
    let n = t.dim();
    let coeffs = &p.coeffs()[..=p.degree()];
    let mut acc = Matrix::scalar(n, coeffs[coeffs.len() - 1]);
    for &c in coeffs.iter().rev().skip(1) {
        acc = acc.matmul(t).shift(c);
    }
    acc
}

/// Upper-triangular Toeplitz matrix with the given first row; this is
/// `p(J_n)` when the row holds the coefficients of `p`.
pub fn upper_toeplitz(first_row: &[Complex64], n: usize) -> Matrix {
    let mut m = Matrix::zeros(n);
    for k in 0..n {
        for j in k..n {
            m[(k, j)] = first_row.get(j - k).copied().unwrap_or(ZERO);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ignores_trailing_zeros() {
        assert_eq!(Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert_eq!(Polynomial::from_real(&[0.0]).degree(), 0);
        assert!(Polynomial::new(vec![]).is_err());
    }

    #[test]
    fn apply_examples() {
        let t = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, -1.0]]);
        assert_eq!(poly_apply(&Polynomial::identity(), &t), t);
        assert_eq!(poly_apply(&Polynomial::monomial(2), &Matrix::jordan(2)), Matrix::zeros(2));
        let p = Polynomial::from_real(&[1.0, 1.0, 1.0]);
        let ones = [ONE; 3];
        assert_eq!(poly_apply(&p, &Matrix::jordan(3)), upper_toeplitz(&ones, 3));
    }

    #[test]
    fn compose_affine_matches_pointwise() {
        let p = Polynomial::new(vec![
            Complex64::new(1.0, -1.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-1.0, 0.25),
        ])
        .unwrap();
        let (a, b) = (Complex64::new(0.3, 1.1), Complex64::new(-2.0, 0.5));
        let q = p.compose_affine(a, b);
        for z in [Complex64::new(0.2, 0.1), Complex64::new(-1.5, 2.0)] {
            let diff = (q.eval(z) - p.eval(a * z + b)).norm();
            assert!(diff < 1e-12, "{diff}");
        }
    }

    #[test]
    fn taylor_shift_reexpands() {
        let p = Polynomial::from_real(&[1.0, -2.0, 0.0, 3.0]);
        let z0 = Complex64::new(0.5, -0.25);
        let c = p.taylor_shift(z0);
        let h = Complex64::new(0.1, 0.3);
        let direct = p.eval(z0 + h);
        let via: Complex64 = c.iter().rev().fold(ZERO, |acc, &ck| acc * h + ck);
        assert!((direct - via).norm() < 1e-13);
    }

    #[test]
    fn json_schema() {
        let p = Polynomial::from_real(&[1.0, -1.0]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"coeffs":[[1.0,0.0],[-1.0,0.0]]}"#);
    }
}
