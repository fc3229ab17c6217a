//! The algebraic numerical range `V(T)` of a matrix in the algebra of
//! operators on `(C^n, l^p)`.
//!
//! `V(T)` is compact and convex, so it is determined by its support function
//!
//! ```text
//! r_theta(T) = sup { Re(e^{-i theta} z) : z in V(T) }
//!            = inf_{t >= 0} ||e^{-i theta} T + t I|| - t .
//! ```
//!
//! For the three norms handled here the infimum has a closed form:
//!
//! * `l1`: `max_j ( Re(e^{-i theta} t_jj) + sum_{k != j} |t_kj| )`, i.e. the
//!   convex hull of the column Gershgorin disks;
//! * `linf`: the same with rows (the transpose acts on the dual space);
//! * `l2`: the top eigenvalue of the Hermitian part of `e^{-i theta} T`,
//!   which recovers the closure of the classical field of values.
//!
//! The generic doubling scheme is kept as a cross-check and for callers that
//! want to see the limit directly. Sampling the support on a finite grid and
//! intersecting the half-planes gives a polygon containing `V(T)`.

mod region;

use num_complex::Complex64;
use rayon::prelude::*;

pub use region::{
    angle_grid, boundary_margin, directional, epsilon_hull, hausdorff, region_contains,
    region_distance, ConvexRegion, Disk, SupportFunction, SupportMethod,
};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_max_eigenvalue, induced_norm, Matrix, NormKind};

/// Default number of angles.
pub const DEFAULT_GRID: usize = 360;
/// Doubling cap of the limit scheme.
pub const LIMIT_MAX_DOUBLINGS: usize = 60;

/// Column Gershgorin disks `D(t_jj, sum_{k != j} |t_kj|)`.
pub fn gershgorin_disks(t: &Matrix) -> Vec<Disk> {
    (0..t.dim())
        .map(|j| {
            let radius = t
                .column(j)
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, z)| z.norm())
                .sum();
            Disk::new(t.get(j, j), radius)
        })
        .collect()
}

fn row_disks(t: &Matrix) -> Vec<Disk> {
    (0..t.dim())
        .map(|k| {
            let radius = t
                .row(k)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, z)| z.norm())
                .sum();
            Disk::new(t.get(k, k), radius)
        })
        .collect()
}

fn disks_support(disks: &[Disk], theta: f64) -> f64 {
    disks
        .iter()
        .map(|d| d.support(theta))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn closed_form_radius(t: &Matrix, theta: f64, kind: NormKind) -> f64 {
    match kind {
        NormKind::L1 => disks_support(&gershgorin_disks(t), theta),
        NormKind::Linf => disks_support(&row_disks(t), theta),
        NormKind::L2 => {
            let rotated = t.scale(Complex64::from_polar(1.0, -theta));
            hermitian_max_eigenvalue(&rotated)
        }
    }
}

/// `r_theta(T)` from the closed form of the chosen norm.
pub fn support_radius(t: &Matrix, theta: f64, kind: NormKind, tol: f64) -> Result<f64> {
    support_radius_with(t, theta, kind, tol, SupportMethod::ClosedForm)
}

/// `r_theta(T)` by the requested method.
///
/// [`SupportMethod::LimitScheme`] evaluates `h(t) = ||e^{-i theta} T + t I|| - t`
/// at `t = t0 2^k`, `t0 = max(1, ||T||)`. `h` is nonincreasing, so every
/// iterate is an upper bound for `r_theta`; the scheme stops once two
/// consecutive decrements fall below `tol`. `h` is evaluated without forming
/// `||A + tI||` and subtracting `t`, which would cancel for large `t`.
pub fn support_radius_with(
    t: &Matrix,
    theta: f64,
    kind: NormKind,
    tol: f64,
    method: SupportMethod,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    match method {
        SupportMethod::ClosedForm => Ok(closed_form_radius(t, theta, kind)),
        SupportMethod::LimitScheme => limit_scheme_radius(t, theta, kind, tol),
        SupportMethod::DiskIntersection => Err(Error::invalid(
            "method",
            "disk intersection needs a grid of shifts; use range_disks",
        )),
    }
}

fn limit_scheme_radius(t: &Matrix, theta: f64, kind: NormKind, tol: f64) -> Result<f64> {
    let rotated = t.scale(Complex64::from_polar(1.0, -theta));
    let t0 = induced_norm(t, kind).max(1.0);
    let h = |s: f64| shifted_excess(&rotated, s, kind);
    let mut prev = h(t0);
    let mut small_steps = 0;
    let mut s = t0;
    for _ in 0..LIMIT_MAX_DOUBLINGS {
        s *= 2.0;
        let cur = h(s);
        if prev - cur < tol {
            small_steps += 1;
            if small_steps == 2 {
                return Ok(cur);
            }
        } else {
            small_steps = 0;
        }
        prev = cur;
    }
    Err(Error::NotConverged {
        what: "support limit scheme",
        iterations: LIMIT_MAX_DOUBLINGS,
        last: prev,
    })
}

/// `||A + sI|| - s` for `s > 0`, rewritten to avoid cancellation:
/// `|a + s| - s = (|a|^2 + 2 s Re a) / (|a + s| + s)` entrywise for the
/// diagonal in `l1`/`linf`, and `||A + sI||_2^2 - s^2 = lambda_max(A*A + s(A + A*))`.
fn shifted_excess(a: &Matrix, s: f64, kind: NormKind) -> f64 {
    let n = a.dim();
    let diag_excess = |z: Complex64| (z.norm_sqr() + 2.0 * s * z.re) / ((z + s).norm() + s);
    match kind {
        NormKind::L1 | NormKind::Linf => (0..n)
            .map(|j| {
                let off: f64 = (0..n)
                    .filter(|&k| k != j)
                    .map(|k| if kind == NormKind::L1 { a.get(k, j) } else { a.get(j, k) }.norm())
                    .sum();
                off + diag_excess(a.get(j, j))
            })
            .fold(f64::NEG_INFINITY, f64::max),
        NormKind::L2 => {
            let ah = a.conj_transpose();
            let b = &ah.matmul(a) + &(a + &ah).scale(Complex64::new(s, 0.0));
            let mu = hermitian_max_eigenvalue(&b);
            mu / ((s * s + mu).max(0.0).sqrt() + s)
        }
    }
}

fn radii_on(t: &Matrix, angles: &[f64], kind: NormKind, method: SupportMethod) -> Result<Vec<f64>> {
    angles
        .par_iter()
        .map(|&theta| support_radius_with(t, theta, kind, LIMIT_TOL, method))
        .collect()
}

/// Tolerance used by region builders that go through the limit scheme.
pub const LIMIT_TOL: f64 = 1e-9;

/// Outer polygon of `V(T)` from closed-form support radii on `m` uniform angles.
pub fn range_polygon(t: &Matrix, kind: NormKind, m: usize) -> Result<ConvexRegion> {
    range_polygon_with(t, kind, m, SupportMethod::ClosedForm)
}

pub fn range_polygon_with(
    t: &Matrix,
    kind: NormKind,
    m: usize,
    method: SupportMethod,
) -> Result<ConvexRegion> {
    if m < 8 {
        return Err(Error::invalid("grid", "need at least 8 angles"));
    }
    range_polygon_on_angles(t, kind, &angle_grid(m, 0.0), method)
}

/// Outer polygon of `V(T)` on an arbitrary increasing angle grid.
pub fn range_polygon_on_angles(
    t: &Matrix,
    kind: NormKind,
    angles: &[f64],
    method: SupportMethod,
) -> Result<ConvexRegion> {
    let radii = radii_on(t, angles, kind, method)?;
    ConvexRegion::from_support(SupportFunction {
        angles: angles.to_vec(),
        radii,
        norm_kind: kind,
        method,
    })
}

/// Outer approximation `cap_{lambda in grid} D(-lambda, ||T + lambda I||)`.
///
/// Each disk contributes its tangent half-planes on the `m`-angle grid.
pub fn range_disks(t: &Matrix, kind: NormKind, shifts: &[Complex64], m: usize) -> Result<ConvexRegion> {
    if shifts.is_empty() {
        return Err(Error::invalid("shifts", "grid of shifts is empty"));
    }
    if m < 8 {
        return Err(Error::invalid("grid", "need at least 8 angles"));
    }
    let disks: Vec<Disk> = shifts
        .iter()
        .map(|&l| Disk::new(-l, induced_norm(&t.shift(l), kind)))
        .collect();
    let angles = angle_grid(m, 0.0);
    let radii = angles
        .iter()
        .map(|&theta| disks.iter().map(|d| d.support(theta)).fold(f64::INFINITY, f64::min))
        .collect();
    ConvexRegion::from_support(SupportFunction {
        angles,
        radii,
        norm_kind: kind,
        method: SupportMethod::DiskIntersection,
    })
}

/// Convex hull of the column Gershgorin disks, sampled on `m` angles. This
/// is `V(T)` for the `l1`-induced norm.
pub fn gershgorin_hull_l1(t: &Matrix, m: usize) -> ConvexRegion {
    let disks = gershgorin_disks(t);
    let angles = angle_grid(m.max(3), 0.0);
    let radii = angles.iter().map(|&th| disks_support(&disks, th)).collect();
    ConvexRegion::from_support(SupportFunction {
        angles,
        radii,
        norm_kind: NormKind::L1,
        method: SupportMethod::ClosedForm,
    })
    .expect("hull of finitely many disks is nonempty")
}

/// Algebraic numerical radius `nu(T) = max_theta r_theta(T)`.
///
/// Maximizes over the `m`-grid, then refines by golden-section search in the
/// two grid cells around the best angle.
pub fn numerical_radius(t: &Matrix, kind: NormKind, m: usize) -> Result<f64> {
    if m < 8 {
        return Err(Error::invalid("grid", "need at least 8 angles"));
    }
    let angles = angle_grid(m, 0.0);
    let radii = radii_on(t, &angles, kind, SupportMethod::ClosedForm)?;
    let (best_idx, best) = radii
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let f = |theta: f64| closed_form_radius(t, theta, kind);
    let (mut a, mut b) = (angles[best_idx] - step, angles[best_idx] + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut refined = best.max(f1).max(f2);
    for _ in 0..60 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        refined = refined.max(f1).max(f2);
    }
    Ok(refined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e() -> Matrix {
        Matrix::jordan(2)
    }

    #[test]
    fn identity_support_is_cosine() {
        let i2 = Matrix::identity(2);
        for kind in NormKind::ALL {
            assert!((support_radius(&i2, 0.0, kind, 1e-9).unwrap() - 1.0).abs() < 1e-14);
            let r = support_radius(&i2, 1.0, kind, 1e-9).unwrap();
            assert!((r - 1f64.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn nilpotent_two_by_two_l2_is_half_disk() {
        for theta in [0.0, 0.7, 2.0, PI, 5.5] {
            let r = support_radius(&e(), theta, NormKind::L2, 1e-9).unwrap();
            assert!((r - 0.5).abs() < 1e-14, "{r}");
        }
        assert!((numerical_radius(&e(), NormKind::L2, 360).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gershgorin_example_at_pi() {
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        assert!((support_radius(&t, PI, NormKind::L1, 1e-9).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn limit_scheme_tracks_closed_form() {
        let t = Matrix::from_rows(&[
            vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.0, 0.0)],
            vec![c(0.4, 0.0), c(-1.0, 1.0), c(0.7, -0.1)],
            vec![c(0.2, 0.2), c(0.0, 0.0), c(0.5, 0.0)],
        ]);
        for kind in NormKind::ALL {
            for theta in [0.1, 1.3, 2.9, 4.4] {
                let exact = support_radius(&t, theta, kind, 1e-9).unwrap();
                let lim = support_radius_with(&t, theta, kind, 1e-9, SupportMethod::LimitScheme).unwrap();
                // every iterate of the scheme is an upper bound
                assert!(lim >= exact - 1e-9, "{kind}: {lim} < {exact}");
                assert!(lim - exact < 1e-8, "{kind}: {lim} vs {exact}");
            }
        }
    }

    #[test]
    fn diagonal_polygon_is_thin_segment() {
        let t = Matrix::diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let r = range_polygon(&t, NormKind::L1, 64).unwrap();
        let width = r.vertices().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        assert!(width <= (PI / 64.0).sin(), "{width}");
        let re_min = r.vertices().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let re_max = r.vertices().iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        assert!(re_min.abs() < 1e-12 && (re_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jordan_polygon_circumscribes_unit_disk() {
        let r = range_polygon(&Matrix::jordan(2), NormKind::L1, 360).unwrap();
        assert_eq!(r.vertices().len(), 360);
        let outer = 1.0 / (PI / 360.0).cos();
        for v in r.vertices() {
            assert!((v.norm() - outer).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_polygon_collapses_to_point() {
        for kind in NormKind::ALL {
            let r = range_polygon(&Matrix::identity(3), kind, 360).unwrap();
            for v in r.vertices() {
                assert!((v - c(1.0, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn disk_examples() {
        let d = range_disks(&Matrix::jordan(2), NormKind::L1, &[c(0.0, 0.0)], 360).unwrap();
        assert!(d.radii().iter().all(|&r| (r - 1.0).abs() < 1e-15));
        let p = range_disks(&Matrix::identity(2), NormKind::L1, &[c(-1.0, 0.0)], 360).unwrap();
        for v in p.vertices() {
            assert!((v - c(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn disk_intersection_near_gershgorin_hull() {
        // oracle: the exact hull conv(D(0,1) ∪ {2}) from the Gershgorin formula
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let shifts: Vec<Complex64> = (0..32)
            .map(|k| Complex64::from_polar(4.0, 2.0 * PI * k as f64 / 32.0))
            .collect();
        let disks = range_disks(&t, NormKind::L1, &shifts, 360).unwrap();
        let hull = gershgorin_hull_l1(&t, 360);
        let d = hausdorff(&disks, &hull).unwrap();
        assert!(d <= 0.2, "{d}");
        let poly = range_polygon(&t, NormKind::L1, 360).unwrap();
        assert!(disks.radii().iter().zip(poly.radii()).all(|(a, b)| a >= b));
    }

    #[test]
    fn gershgorin_hull_shapes() {
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        let h = gershgorin_hull_l1(&t, 360);
        // conv(unit disk ∪ {2}): support max(1, 2 cos theta)
        for (&th, &r) in h.angles().iter().zip(h.radii()) {
            assert!((r - (2.0 * th.cos()).max(1.0)).abs() < 1e-14);
        }
        let j = gershgorin_hull_l1(&Matrix::jordan(5), 360);
        assert!(j.radii().iter().all(|&r| (r - 1.0).abs() < 1e-15));
        let d = Matrix::diag(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, -1.0)]);
        let hd = gershgorin_hull_l1(&d, 360);
        for (&th, &r) in hd.angles().iter().zip(hd.radii()) {
            let expect = [c(1.0, 0.0), c(0.0, 2.0), c(-1.0, -1.0)]
                .iter()
                .map(|&z| directional(z, th))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(r, expect);
        }
    }

    #[test]
    fn numerical_radius_examples() {
        assert!((numerical_radius(&Matrix::jordan(2), NormKind::L1, 360).unwrap() - 1.0).abs() < 1e-12);
        for kind in NormKind::ALL {
            assert!((numerical_radius(&Matrix::identity(2), kind, 360).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hausdorff_and_hull_identities() {
        let unit = gershgorin_hull_l1(&Matrix::jordan(2), 360);
        assert_eq!(hausdorff(&unit, &unit).unwrap(), 0.0);
        let two = gershgorin_hull_l1(&Matrix::jordan(2).scale(c(2.0, 0.0)), 360);
        assert!((hausdorff(&unit, &two).unwrap() - 1.0).abs() < 1e-15);
        let coarse = gershgorin_hull_l1(&Matrix::jordan(2), 180);
        assert_eq!(hausdorff(&unit, &coarse), Err(Error::GridMismatch));

        assert_eq!(epsilon_hull(&unit, 0.0).unwrap(), unit);
        assert!(epsilon_hull(&unit, -1.0).is_err());
        let point = gershgorin_hull_l1(&Matrix::zeros(2), 360);
        let disk = epsilon_hull(&point, 1.0).unwrap();
        assert!(disk.radii().iter().all(|&r| (r - 1.0).abs() < 1e-15));
        let t = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.5]]);
        let a = gershgorin_hull_l1(&t, 360);
        let grown = epsilon_hull(&a, 0.3).unwrap();
        assert!((grown.diameter() - a.diameter() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn membership_and_distance() {
        let unit = gershgorin_hull_l1(&Matrix::jordan(2), 360);
        assert!(region_contains(&unit, c(0.0, 0.0)));
        assert!(!region_contains(&unit, c(2.0, 0.0)));
        assert!((region_distance(&unit, c(2.0, 0.0)) - 1.0).abs() < 1e-14);
        assert_eq!(region_distance(&unit, c(0.2, 0.1)), 0.0);
        assert!((boundary_margin(&unit, c(0.0, 0.0)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn region_json_fields() {
        let r = gershgorin_hull_l1(&Matrix::jordan(2), 8);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["angles", "radii", "vertices", "norm", "method"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["norm"], "l1");
        assert_eq!(v["method"], "closed_form");
        let back: ConvexRegion = serde_json::from_value(v).unwrap();
        assert_eq!(back.radii(), r.radii());
    }
}
