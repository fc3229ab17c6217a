use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by the dense routines.
pub const MAX_DIM: usize = 256;

/// Dense square complex matrix stored row-major.
///
/// Entry `(k, j)` lives at `entries[k * n + j]`. Every entry is finite; the
/// checked constructors reject NaN and infinities.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    n: usize,
    entries: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let entries = repr
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Matrix::new(repr.n, entries)
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            n: m.n,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "dimension must be positive"));
        }
        if n > MAX_DIM {
            return Err(Error::invalid("n", format!("dimension {n} exceeds {MAX_DIM}")));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::invalid(
                "entries",
                format!("entry {pos} is not finite"),
            ));
        }
        Ok(Matrix { n, entries })
    }

    /// Builds a matrix from real rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "rows must form a square matrix");
                r.iter().map(|&x| Complex64::new(x, 0.0))
            })
            .collect();
        Matrix::new(n, entries).expect("finite square matrix")
    }

    /// Builds a matrix from complex rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "rows must form a square matrix");
                r.iter().copied()
            })
            .collect();
        Matrix::new(n, entries).expect("finite square matrix")
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, lambda: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = lambda;
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// The nilpotent upper shift `J_n` (ones on the superdiagonal).
    pub fn jordan(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, k: usize, j: usize) -> Complex64 {
        self.entries[k * self.n + j]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n).map(move |k| self.get(k, j))
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.entries[k * self.n..(k + 1) * self.n]
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            for j in 0..n {
                out[(j, k)] = self[(k, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            for j in 0..n {
                out[(j, k)] = self[(k, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|&z| z * alpha).collect(),
        }
    }

    /// `self + lambda I`.
    pub fn shift(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] += lambda;
        }
        out
    }

    /// `alpha * self + beta * I`.
    pub fn affine(&self, alpha: Complex64, beta: Complex64) -> Self {
        self.scale(alpha).shift(beta)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|k| {
                self.row(k)
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.entries[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Matrix { n, entries: out }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|k| (0..k).all(|j| self[(k, j)] == Complex64::new(0.0, 0.0)))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (k, j): (usize, usize)) -> &Complex64 {
        &self.entries[k * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (k, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[k * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.n, self.n)?;
        for k in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(k, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite_and_ragged() {
        assert!(Matrix::new(2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(Matrix::new(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(Matrix::new(0, vec![]).is_err());
    }

    #[test]
    fn transpose_of_jordan() {
        let t = Matrix::jordan(2).transpose();
        assert_eq!(t, Matrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        let s = Matrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(0.0, -3.0)]]);
        assert_eq!(s.transpose(), s);
    }

    #[test]
    fn json_schema_round_trip() {
        let m = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":2,"entries":[[2.0,0.0],[1.0,0.0],[0.0,0.0],[0.0,0.0]]}"#);
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = serde_json::from_str::<Matrix>(r#"{"n":2,"entries":[[1,0]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn matmul_jordan_is_nilpotent() {
        let j = Matrix::jordan(3);
        let j3 = &(&j * &j) * &j;
        assert_eq!(j3, Matrix::zeros(3));
    }
}
