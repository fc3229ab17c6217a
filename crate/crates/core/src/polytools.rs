//! Polynomial utilities: flat `±1` polynomials, suprema of `|p|` on circles
//! and convex regions, and the Taylor surrogate of `cos`.
//!
//! # Certified suprema on regions
//!
//! By the maximum-modulus principle `sup_A |p|` is attained on the boundary
//! of `A`. [`sup_on_region`] samples the boundary polygon with spacing at most
//! `h = diameter / (64 max(1, deg p))`. Every boundary point `w` lies within
//! `h / 2` of a sample `s`, so
//!
//! ```text
//! |p(w)| <= sum_j |p^(j)(s) / j!| (h/2)^j
//! ```
//!
//! and the largest right-hand side over all samples is a rigorous upper bound
//! (up to floating-point rounding in the Taylor coefficients).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Polynomial;
use crate::numrange::ConvexRegion;
use crate::rng::{derive_seed, Rng};

/// How a [`SignPolynomial`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    RudinShapiro,
    Random { seed: u64 },
}

/// Polynomial with coefficients in `{+1, -1}`; `signs[k]` multiplies `z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignPolynomial {
    pub signs: Vec<i8>,
    pub construction: Construction,
}

impl SignPolynomial {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let c: Vec<f64> = self.signs.iter().map(|&s| s as f64).collect();
        Polynomial::from_real(&c)
    }
}

/// Largest supported Rudin–Shapiro order (length `2^20`).
pub const RUDIN_SHAPIRO_MAX_K: u32 = 20;

/// The Rudin–Shapiro pair `(P_k, Q_k)` of length `2^k`:
/// `P_{k+1} = P_k ++ Q_k`, `Q_{k+1} = P_k ++ (-Q_k)`.
pub fn rudin_shapiro(k: u32) -> Result<(SignPolynomial, SignPolynomial)> {
    if k > RUDIN_SHAPIRO_MAX_K {
        return Err(Error::invalid("k", format!("must be at most {RUDIN_SHAPIRO_MAX_K}")));
    }
    let mut p = vec![1i8];
    let mut q = vec![1i8];
    for _ in 0..k {
        let mut np = p.clone();
        np.extend_from_slice(&q);
        let mut nq = p;
        nq.extend(q.iter().map(|&s| -s));
        p = np;
        q = nq;
    }
    let wrap = |signs| SignPolynomial {
        signs,
        construction: Construction::RudinShapiro,
    };
    Ok((wrap(p), wrap(q)))
}

/// Uniformly random signs of length `n`.
pub fn random_sign_polynomial(n: usize, seed: u64) -> SignPolynomial {
    let mut rng = Rng::new(seed);
    SignPolynomial {
        signs: (0..n).map(|_| rng.sign()).collect(),
        construction: Construction::Random { seed },
    }
}

/// Circle resolution used when ranking sign polynomials.
pub fn ranking_grid(n: usize) -> usize {
    (64 * n).max(4096)
}

/// Best of `draws` random sign polynomials of length `n`, ranked by the
/// sampled sup on the unit circle. Draw `i` uses seed `derive_seed(seed, i)`.
pub fn best_random_sign_polynomial(n: usize, draws: usize, seed: u64) -> SignPolynomial {
    let m = ranking_grid(n);
    let mut best: Option<(f64, SignPolynomial)> = None;
    for i in 0..draws.max(1) {
        let cand = random_sign_polynomial(n, derive_seed(seed, i as u64));
        let s = sampled_sup_on_circle(&cand.to_polynomial(), 1.0, m);
        if best.as_ref().map_or(true, |(b, _)| s < *b) {
            best = Some((s, cand));
        }
    }
    best.expect("at least one draw").1
}

/// Number of random draws used for lengths that are not powers of two.
pub const RANDOM_DRAWS: usize = 200;

/// Flat `±1` polynomial of length `n`: `P_k` when `n = 2^k`, otherwise the
/// best of [`RANDOM_DRAWS`] random draws.
pub fn sign_family(n: usize, seed: u64) -> SignPolynomial {
    assert!(n >= 1, "length must be positive");
    if n.is_power_of_two() {
        rudin_shapiro(n.trailing_zeros()).expect("length within range").0
    } else {
        best_random_sign_polynomial(n, RANDOM_DRAWS, seed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupKind {
    ExactSampled,
    CertifiedUpper,
}

/// A value of `sup |p|` together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupBound {
    pub value: f64,
    pub kind: SupKind,
    pub samples: usize,
    /// `certified / sampled`; 1 for sampled values.
    pub inflation: f64,
}

/// Sampled maximum and a certified upper bound of the same supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub sampled: SupBound,
    pub certified: SupBound,
}

impl SupEstimate {
    fn new(sampled: f64, certified: f64, samples: usize) -> Self {
        let certified = certified.max(sampled);
        let inflation = if sampled > 0.0 { certified / sampled } else { 1.0 };
        SupEstimate {
            sampled: SupBound {
                value: sampled,
                kind: SupKind::ExactSampled,
                samples,
                inflation: 1.0,
            },
            certified: SupBound {
                value: certified,
                kind: SupKind::CertifiedUpper,
                samples,
                inflation: inflation.max(1.0),
            },
        }
    }

    fn exact(value: f64) -> Self {
        let b = SupBound {
            value,
            kind: SupKind::ExactSampled,
            samples: 1,
            inflation: 1.0,
        };
        SupEstimate { sampled: b, certified: b }
    }
}

fn sampled_sup_on_circle(p: &Polynomial, r: f64, m: usize) -> f64 {
    (0..m)
        .map(|k| p.eval(Complex64::from_polar(r, 2.0 * PI * k as f64 / m as f64)).norm())
        .fold(0.0, f64::max)
}

/// `sup_{|z| = r} |p|` from `m` equally spaced samples.
///
/// The certified value divides by `1 - pi deg(p) / m` (Bernstein's
/// inequality bounds the variation between samples).
pub fn sup_on_circle(p: &Polynomial, r: f64, m: usize) -> Result<SupEstimate> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", "radius must be positive"));
    }
    let d = p.degree() as f64;
    if m == 0 || (m as f64) <= PI * d {
        return Err(Error::invalid(
            "m",
            format!("need more than pi * degree = {:.1} samples", PI * d),
        ));
    }
    let sampled = sampled_sup_on_circle(p, r, m);
    let certified = sampled / (1.0 - PI * d / m as f64);
    Ok(SupEstimate::new(sampled, certified, m))
}

/// Boundary spacing used for a polynomial of degree `deg` on `a`.
pub fn region_spacing(a: &ConvexRegion, deg: usize) -> f64 {
    a.vertex_diameter() / (64.0 * deg.max(1) as f64)
}

/// `sup_A |p|` from boundary samples, with a Taylor-certified upper bound.
pub fn sup_on_region(p: &Polynomial, a: &ConvexRegion) -> SupEstimate {
    if a.is_point() {
        return SupEstimate::exact(p.eval(a.vertices()[0]).norm());
    }
    let h = region_spacing(a, p.degree());
    let samples = a.boundary_samples(h);
    let sampled = samples.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max);
    let radius = 0.5 * h;
    let certified = samples
        .iter()
        .map(|&z| {
            p.taylor_shift(z)
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * radius + c.norm())
        })
        .fold(0.0, f64::max);
    SupEstimate::new(sampled, certified, samples.len())
}

/// Degree-`d` Taylor polynomial of `cos` at 0 and a bound on
/// `|cos z - T_d(z)|` valid for `|z| <= R`.
///
/// The bound is `R^{d+1}/(d+1)!` when `d` is even and `R <= (d+2)/2`;
/// otherwise the even tail `sum_{2j > d} R^{2j}/(2j)!` is summed directly.
pub fn taylor_cos(d: usize, r: f64) -> (Polynomial, f64) {
    let mut coeffs = vec![0.0; d + 1];
    let mut term = 1.0;
    for k in 0..=d {
        if k > 0 {
            term /= k as f64;
        }
        if k % 2 == 0 {
            coeffs[k] = if (k / 2) % 2 == 0 { term } else { -term };
        }
    }
    let r = r.abs();
    let simple = d % 2 == 0 && r <= (d as f64 + 2.0) / 2.0;
    let remainder = if simple {
        (1..=d + 1).fold(1.0, |acc, k| acc * r / k as f64)
    } else {
        even_tail(d, r)
    };
    (Polynomial::from_real(&coeffs), remainder)
}

// sum_{k > d, k even} r^k / k!, with the geometric tail bound once terms shrink
fn even_tail(d: usize, r: f64) -> f64 {
    let mut k = d + 1;
    if k % 2 == 1 {
        k += 1;
    }
    let mut term = (1..=k).fold(1.0, |acc, j| acc * r / j as f64);
    let mut sum = 0.0;
    loop {
        let ratio = r * r / ((k + 1) * (k + 2)) as f64;
        if ratio < 0.5 {
            return sum + term / (1.0 - ratio);
        }
        sum += term;
        term *= ratio;
        k += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::numrange::gershgorin_hull_l1;

    #[test]
    fn rudin_shapiro_small_cases() {
        let (p0, q0) = rudin_shapiro(0).unwrap();
        assert_eq!((p0.signs, q0.signs), (vec![1], vec![1]));
        let (p1, q1) = rudin_shapiro(1).unwrap();
        assert_eq!((p1.signs.clone(), q1.signs), (vec![1, 1], vec![1, -1]));
        let s = sup_on_circle(&p1.to_polynomial(), 1.0, 64).unwrap();
        assert!((s.sampled.value - 2.0).abs() < 1e-15);
        let (p2, _) = rudin_shapiro(2).unwrap();
        assert_eq!(p2.signs, vec![1, 1, 1, -1]);
        let s2 = sup_on_circle(&p2.to_polynomial(), 1.0, 4096).unwrap();
        assert!(s2.sampled.value <= 2f64.sqrt() * 2.0);
        assert!(rudin_shapiro(21).is_err());
    }

    #[test]
    fn circle_sup_examples() {
        let s = sup_on_circle(&Polynomial::monomial(5), 2.0, 17).unwrap();
        assert!((s.sampled.value - 32.0).abs() < 1e-12);
        assert!(s.certified.value >= s.sampled.value);
        assert!(sup_on_circle(&Polynomial::monomial(5), 2.0, 15).is_err());
        assert!(sup_on_circle(&Polynomial::monomial(1), 0.0, 15).is_err());
        let (p3, _) = rudin_shapiro(3).unwrap();
        let s3 = sup_on_circle(&p3.to_polynomial(), 1.0, 4096).unwrap();
        assert!(s3.certified.value <= 2f64.sqrt() * 8f64.sqrt() * 1.05);
    }

    #[test]
    fn region_sup_examples() {
        let disk = gershgorin_hull_l1(&Matrix::jordan(2), 360);
        let s = sup_on_region(&Polynomial::identity(), &disk);
        assert!((s.sampled.value - 1.0 / (PI / 360.0).cos()).abs() < 1e-12);
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let hull = gershgorin_hull_l1(&t, 360);
        let s = sup_on_region(&Polynomial::identity(), &hull);
        assert!((s.sampled.value - 2.0).abs() < 1e-12);
        let (cos, rem) = taylor_cos(20, 3.0);
        let s = sup_on_region(&cos, &hull);
        assert!(s.certified.value + rem <= 1.55, "{}", s.certified.value);
        assert!(s.certified.value >= s.sampled.value);
    }

    #[test]
    fn point_region() {
        let a = gershgorin_hull_l1(&Matrix::scalar(2, Complex64::new(0.5, 0.5)), 360);
        let s = sup_on_region(&Polynomial::monomial(2), &a);
        assert!((s.sampled.value - 0.5).abs() < 1e-12);
        assert_eq!(s.sampled.inflation, 1.0);
    }

    #[test]
    fn taylor_cos_examples() {
        let (p, rem) = taylor_cos(2, 1.5);
        assert_eq!(p.coeffs(), Polynomial::from_real(&[1.0, 0.0, -0.5]).coeffs());
        assert!((rem - 1.5f64.powi(3) / 6.0).abs() < 1e-15);
        let (_, rem10) = taylor_cos(10, 3.0);
        // oracle: 3^11 / 11!
        let oracle = 177147.0 / 39916800.0;
        assert!((rem10 - oracle).abs() < 1e-15 && (rem10 - 4.44e-3).abs() < 1e-5);
        let (p20, rem20) = taylor_cos(20, 3.0);
        let err = (p20.eval(Complex64::new(2.0, 0.0)).re - 2f64.cos()).abs();
        assert!(err <= rem20);
        // tail branch: large radius still bounds the true error
        let (p4, rem4) = taylor_cos(4, 5.0);
        let z = Complex64::new(0.0, 5.0);
        assert!((p4.eval(z) - z.cos()).norm() <= rem4);
    }

    #[test]
    fn sign_family_selection() {
        let f8 = sign_family(8, 0);
        assert_eq!(f8.construction, Construction::RudinShapiro);
        let f7 = sign_family(7, 3);
        assert_eq!(f7.len(), 7);
        assert!(matches!(f7.construction, Construction::Random { .. }));
        assert!(f7.signs.iter().all(|&s| s == 1 || s == -1));
        assert_eq!(sign_family(7, 3), f7);
    }
}
