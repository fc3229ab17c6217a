use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::NormKind;

/// How the support radii of a region were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportMethod {
    /// Exact formula for the norm (Gershgorin sums, Hermitian part).
    ClosedForm,
    /// Doubling scheme on `||e^{-i theta} T + t I|| - t`.
    LimitScheme,
    /// Minimum of tangent lines of finitely many norm disks.
    DiskIntersection,
}

/// Support radii `r_theta` sampled on a grid of angles.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunction {
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    pub norm_kind: NormKind,
    pub method: SupportMethod,
}

/// A closed disk `D(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn support(&self, theta: f64) -> f64 {
        directional(self.center, theta) + self.radius
    }
}

/// `Re(e^{-i theta} z)`.
#[inline]
pub fn directional(z: Complex64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    z.re * c + z.im * s
}

/// `m` equally spaced angles starting at `offset`, reduced to `[0, 2 pi)` and
/// sorted.
pub fn angle_grid(m: usize, offset: f64) -> Vec<f64> {
    let step = 2.0 * PI / m as f64;
    let mut a: Vec<f64> = (0..m)
        .map(|i| {
            let t = (offset + step * i as f64).rem_euclid(2.0 * PI);
            if t >= 2.0 * PI {
                0.0
            } else {
                t
            }
        })
        .collect();
    a.sort_by(f64::total_cmp);
    a
}

/// A compact convex set stored as sampled support radii together with the
/// boundary polygon of the corresponding half-plane intersection.
///
/// The polygon `{z : Re(e^{-i theta_k} z) <= r_k for all k}` contains every
/// convex set whose support function agrees with the radii on the grid, so
/// regions built from exact radii are outer approximations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub struct ConvexRegion {
    support: SupportFunction,
    vertices: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RegionRepr {
    angles: Vec<f64>,
    radii: Vec<f64>,
    vertices: Vec<[f64; 2]>,
    norm: NormKind,
    method: SupportMethod,
}

impl From<ConvexRegion> for RegionRepr {
    fn from(r: ConvexRegion) -> Self {
        RegionRepr {
            angles: r.support.angles,
            radii: r.support.radii,
            vertices: r.vertices.iter().map(|z| [z.re, z.im]).collect(),
            norm: r.support.norm_kind,
            method: r.support.method,
        }
    }
}

impl TryFrom<RegionRepr> for ConvexRegion {
    type Error = Error;

    fn try_from(r: RegionRepr) -> Result<Self> {
        // Vertices are recomputed from the radii; the stored ones are for
        // consumers that only want to draw the polygon.
        ConvexRegion::from_support(SupportFunction {
            angles: r.angles,
            radii: r.radii,
            norm_kind: r.norm,
            method: r.method,
        })
    }
}

impl ConvexRegion {
    pub fn from_support(support: SupportFunction) -> Result<Self> {
        let m = support.angles.len();
        if m < 3 || support.radii.len() != m {
            return Err(Error::invalid(
                "angles",
                "need at least three angles and one radius per angle",
            ));
        }
        if support.angles.windows(2).any(|w| w[1] <= w[0])
            || support.angles[0] < 0.0
            || support.angles[m - 1] >= 2.0 * PI
        {
            return Err(Error::invalid("angles", "must be strictly increasing in [0, 2 pi)"));
        }
        if support.radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("radii", "support radii must be finite"));
        }
        // Consecutive normals more than pi apart leave the intersection unbounded.
        let max_gap = support
            .angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(support.angles[0] + 2.0 * PI - support.angles[m - 1]))
            .fold(0.0, f64::max);
        if max_gap >= PI {
            return Err(Error::invalid("angles", "angular gaps of pi or more give an unbounded region"));
        }
        let vertices = clip_polygon(&support.angles, &support.radii, max_gap)?;
        Ok(ConvexRegion { support, vertices })
    }

    pub fn support(&self) -> &SupportFunction {
        &self.support
    }

    pub fn angles(&self) -> &[f64] {
        &self.support.angles
    }

    pub fn radii(&self) -> &[f64] {
        &self.support.radii
    }

    pub fn support_at(&self, index: usize) -> f64 {
        self.support.radii[index]
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn norm_kind(&self) -> NormKind {
        self.support.norm_kind
    }

    pub fn method(&self) -> SupportMethod {
        self.support.method
    }

    /// True support function of the boundary polygon.
    pub fn polygon_support(&self, theta: f64) -> f64 {
        self.vertices
            .iter()
            .map(|&v| directional(v, theta))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest sampled width `r_theta + r_{theta + pi}` when the grid is
    /// symmetric under rotation by pi; otherwise the polygon diameter.
    pub fn diameter(&self) -> f64 {
        let m = self.angles().len();
        if m % 2 == 0 {
            let h = m / 2;
            let symmetric = (0..h).all(|i| (self.angles()[i + h] - self.angles()[i] - PI).abs() < 1e-12);
            if symmetric {
                return (0..h)
                    .map(|i| self.radii()[i] + self.radii()[i + h])
                    .fold(0.0, f64::max);
            }
        }
        self.vertex_diameter()
    }

    /// Largest distance between two polygon vertices.
    pub fn vertex_diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Smallest disk center heuristic: midpoint of the polygon's bounding box.
    pub fn center(&self) -> Complex64 {
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for v in &self.vertices {
            lo.re = lo.re.min(v.re);
            lo.im = lo.im.min(v.im);
            hi.re = hi.re.max(v.re);
            hi.im = hi.im.max(v.im);
        }
        (lo + hi) * 0.5
    }

    /// Largest vertex distance from `c`.
    pub fn radius_about(&self, c: Complex64) -> f64 {
        self.vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max)
    }

    /// Pair of vertices realizing the polygon diameter.
    pub fn farthest_pair(&self) -> (Complex64, Complex64) {
        let v = &self.vertices;
        let mut best = (v[0], v[0]);
        let mut d = -1.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let dij = (v[i] - v[j]).norm();
                if dij > d {
                    d = dij;
                    best = (v[i], v[j]);
                }
            }
        }
        best
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Points along the polygon boundary, consecutive ones at most
    /// `max_spacing` apart. Every vertex is included.
    pub fn boundary_samples(&self, max_spacing: f64) -> Vec<Complex64> {
        let v = &self.vertices;
        if v.len() == 1 || !(max_spacing > 0.0) {
            return v.clone();
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            let len = (b - a).norm();
            let pieces = ((len / max_spacing).ceil() as usize).max(1);
            for s in 0..pieces {
                out.push(a + (b - a) * (s as f64 / pieces as f64));
            }
        }
        out
    }

    /// Applies `z -> alpha z + beta` to the polygon and support.
    ///
    /// The angle grid rotates by `arg(alpha)`; radii scale by `|alpha|` and
    /// shift by `Re(e^{-i theta} beta)`.
    pub fn affine_image(&self, alpha: Complex64, beta: Complex64) -> Result<ConvexRegion> {
        if alpha == Complex64::new(0.0, 0.0) {
            return Err(Error::invalid("alpha", "must be nonzero"));
        }
        let (mag, arg) = alpha.to_polar();
        let mut pairs: Vec<(f64, f64)> = self
            .angles()
            .iter()
            .zip(self.radii())
            .map(|(&t, &r)| {
                let nt = (t + arg).rem_euclid(2.0 * PI);
                let nt = if nt >= 2.0 * PI { 0.0 } else { nt };
                (nt, mag * r + directional(beta, nt))
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        ConvexRegion::from_support(SupportFunction {
            angles: pairs.iter().map(|p| p.0).collect(),
            radii: pairs.iter().map(|p| p.1).collect(),
            norm_kind: self.norm_kind(),
            method: self.method(),
        })
    }
}

/// Hausdorff distance between two regions on the same angle grid, computed
/// as the sup-norm of the support difference.
pub fn hausdorff(a: &ConvexRegion, b: &ConvexRegion) -> Result<f64> {
    if a.angles().len() != b.angles().len()
        || a.angles().iter().zip(b.angles()).any(|(x, y)| (x - y).abs() > 1e-15)
    {
        return Err(Error::GridMismatch);
    }
    Ok(a.radii()
        .iter()
        .zip(b.radii())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Region with every support radius increased by `eps`.
pub fn epsilon_hull(a: &ConvexRegion, eps: f64) -> Result<ConvexRegion> {
    if !(eps >= 0.0) {
        return Err(Error::invalid("eps", "must be nonnegative"));
    }
    if eps == 0.0 {
        return Ok(a.clone());
    }
    let mut s = a.support().clone();
    s.radii.iter_mut().for_each(|r| *r += eps);
    ConvexRegion::from_support(s)
}

pub fn region_contains(a: &ConvexRegion, lambda: Complex64) -> bool {
    a.angles()
        .iter()
        .zip(a.radii())
        .all(|(&t, &r)| directional(lambda, t) <= r)
}

/// `max(0, max_theta (Re(e^{-i theta} lambda) - r_theta))`.
pub fn region_distance(a: &ConvexRegion, lambda: Complex64) -> f64 {
    a.angles()
        .iter()
        .zip(a.radii())
        .map(|(&t, &r)| directional(lambda, t) - r)
        .fold(0.0, f64::max)
}

/// `min_theta (r_theta - Re(e^{-i theta} lambda))`: distance to the polygon
/// boundary for interior points, negative outside.
pub fn boundary_margin(a: &ConvexRegion, lambda: Complex64) -> f64 {
    a.angles()
        .iter()
        .zip(a.radii())
        .map(|(&t, &r)| r - directional(lambda, t))
        .fold(f64::INFINITY, f64::min)
}

/// Sutherland-Hodgman clipping of a large square by every half-plane.
fn clip_polygon(angles: &[f64], radii: &[f64], max_gap: f64) -> Result<Vec<Complex64>> {
    let scale = radii.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let tol = 1e-12 * (1.0 + scale);
    // Any point of the intersection has modulus at most scale / cos(gap / 2).
    let big = 4.0 * (scale + 1.0) / (0.5 * max_gap).cos().max(1e-3);
    let mut poly = vec![
        Complex64::new(-big, -big),
        Complex64::new(big, -big),
        Complex64::new(big, big),
        Complex64::new(-big, big),
    ];
    for (&theta, &r) in angles.iter().zip(radii) {
        let mut next = Vec::with_capacity(poly.len() + 1);
        let k = poly.len();
        for i in 0..k {
            let cur = poly[i];
            let prev = poly[(i + k - 1) % k];
            let vc = directional(cur, theta) - r;
            let vp = directional(prev, theta) - r;
            let cur_in = vc <= tol;
            let prev_in = vp <= tol;
            if cur_in {
                if !prev_in {
                    next.push(crossing(prev, cur, vp, vc));
                }
                next.push(cur);
            } else if prev_in {
                next.push(crossing(prev, cur, vp, vc));
            }
        }
        if next.is_empty() {
            return Err(Error::EmptyRegion);
        }
        poly = dedup_ring(next, tol);
    }
    Ok(poly)
}

fn crossing(a: Complex64, b: Complex64, va: f64, vb: f64) -> Complex64 {
    let denom = va - vb;
    if denom == 0.0 {
        return a;
    }
    let s = (va / denom).clamp(0.0, 1.0);
    a + (b - a) * s
}

fn dedup_ring(points: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().map_or(true, |q| (p - q).norm() > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= tol {
        out.pop();
    }
    out
}
