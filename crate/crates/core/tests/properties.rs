use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use specrange::combinat::{family_norm, SparseVector, SpreadingFamily};
use specrange::linalg::{
    column_sum_norm, eigenvalues, induced_norm, inverse, poly_apply, row_sum_norm, spectral_norm, Matrix, NormKind,
    Polynomial,
};
use specrange::numrange::{boundary_margin, range_polygon, range_polygon_on_angles, region_distance, SupportMethod};
use specrange::polytools::{rudin_shapiro, sup_on_circle, sup_on_region};
use specrange::psi::psi_lower_bound;
use specrange::rng::{derive_seed, Rng};
use specrange::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sparse(entries: &[(usize, f64, f64)]) -> SparseVector {
    SparseVector::new(entries.iter().map(|&(i, re, im)| (i, c(re, im))).collect()).unwrap()
}

fn entries() -> impl Strategy<Value = Vec<(usize, f64, f64)>> {
    prop::collection::btree_map(1usize..40, (-5.0f64..5.0, -5.0f64..5.0), 0..12)
        .prop_map(|m| m.into_iter().map(|(i, (re, im))| (i, re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn region_distance_is_one_lipschitz(
        seed in any::<u64>(),
        a in (-6.0f64..6.0, -6.0f64..6.0),
        b in (-6.0f64..6.0, -6.0f64..6.0),
    ) {
        let mut rng = Rng::new(seed);
        let n = 1 + rng.below(4);
        let region = range_polygon(&rng.gaussian_matrix(n), NormKind::L1, 90).unwrap();
        let (za, zb) = (c(a.0, a.1), c(b.0, b.1));
        let gap = (region_distance(&region, za) - region_distance(&region, zb)).abs();
        prop_assert!(gap <= (za - zb).norm() + 1e-12);
    }

    #[test]
    fn schreier_norm_is_a_norm_below_l1(
        x in entries(),
        y in entries(),
        alpha in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let s = SpreadingFamily::Schreier;
        let (x, y) = (sparse(&x), sparse(&y));
        let alpha = c(alpha.0, alpha.1);
        let nx = family_norm(&x, &s).unwrap();
        let ny = family_norm(&y, &s).unwrap();
        let scaled = family_norm(&x.scale(alpha), &s).unwrap();
        prop_assert!((scaled - alpha.norm() * nx).abs() <= 1e-12 * (1.0 + scaled));
        prop_assert!(family_norm(&x.add(&y), &s).unwrap() <= nx + ny + 1e-12);
        prop_assert!(nx <= x.l1_norm() + 1e-12);
        if s.is_admissible(&x.support()) {
            prop_assert!((nx - x.l1_norm()).abs() <= 1e-12 * (1.0 + nx));
        }
    }
}

fn random_matrices(stream: u64, count: usize, max_n: usize) -> Vec<Matrix> {
    (0..count)
        .map(|i| {
            let mut rng = Rng::new(derive_seed(stream, i as u64));
            let n = 1 + rng.below(max_n);
            rng.gaussian_matrix(n)
        })
        .collect()
}

#[test]
fn norm_identities() {
    for t in random_matrices(1, 100, 8) {
        assert_eq!(row_sum_norm(&t.transpose()), column_sum_norm(&t));
        let s = Rng::new(t.dim() as u64).gaussian_matrix(t.dim());
        let id = Matrix::identity(t.dim());
        for kind in NormKind::ALL {
            let st = induced_norm(&s.matmul(&t), kind);
            assert!(st <= induced_norm(&s, kind) * induced_norm(&t, kind) * (1.0 + 1e-12));
            assert!((induced_norm(&id, kind) - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn spectral_norm_matches_svd() {
    for t in random_matrices(2, 100, 8) {
        let n = t.dim();
        let oracle = DMatrix::from_fn(n, n, |k, j| t.get(k, j)).singular_values().max();
        assert!((spectral_norm(&t) - oracle).abs() <= 1e-10 * (1.0 + oracle));
    }
}

#[test]
fn eigenvalue_residual_is_small() {
    for t in random_matrices(3, 100, 16) {
        let spec = eigenvalues(&t).unwrap();
        assert_eq!(spec.eigenvalues.len(), t.dim());
        assert!(spec.residual <= 1e-8 * (1.0 + column_sum_norm(&t)).powi(t.dim() as i32));
    }
}

#[test]
fn polynomial_calculus_is_multiplicative() {
    let mut rng = Rng::new(4);
    for t in random_matrices(4, 50, 8) {
        let mut poly = || {
            let d = rng.below(9);
            Polynomial::new((0..=d).map(|_| rng.complex_gaussian()).collect()).unwrap()
        };
        let (p, q) = (poly(), poly());
        let lhs = poly_apply(&p.mul(&q), &t);
        let rhs = poly_apply(&p, &t).matmul(&poly_apply(&q, &t));
        let err = (&lhs - &rhs).max_abs();
        assert!(err <= 1e-10 * (1.0 + rhs.max_abs()), "{err}");
    }
}

#[test]
fn regions_are_affine_equivariant() {
    let (alpha, beta) = (Complex64::from_polar(1.7, 0.4), c(0.3, -1.1));
    for t in random_matrices(5, 20, 5) {
        for kind in NormKind::ALL {
            let base = range_polygon(&t, kind, 360).unwrap();
            let mapped = base.affine_image(alpha, beta).unwrap();
            let direct = range_polygon_on_angles(
                &t.affine(alpha, beta),
                kind,
                mapped.angles(),
                SupportMethod::ClosedForm,
            )
            .unwrap();
            for (u, v) in mapped.vertices().iter().zip(direct.vertices()) {
                assert!((u - v).norm() <= 1e-9 * (1.0 + u.norm()), "{kind}: {u} vs {v}");
            }
        }
    }
}

#[test]
fn defective_eigenvalue_is_interior() {
    let mut tested = 0;
    let mut rng = Rng::new(6);
    while tested < 100 {
        let s = rng.gaussian_matrix(2);
        let Ok(si) = inverse(&s) else { continue };
        if column_sum_norm(&s) * column_sum_norm(&si) > 100.0 {
            continue;
        }
        let lambda = rng.complex_gaussian();
        let t = s.matmul(&Matrix::jordan(2)).matmul(&si).shift(lambda);
        for kind in NormKind::ALL {
            let region = range_polygon(&t, kind, 360).unwrap();
            assert!(boundary_margin(&region, lambda) >= 1e-4, "{kind}");
        }
        tested += 1;
    }
}

#[test]
fn rudin_shapiro_pairs_are_complementary() {
    for k in [1u32, 4, 7, 10] {
        let (p, q) = rudin_shapiro(k).unwrap();
        let (p, q) = (p.to_polynomial(), q.to_polynomial());
        let total = 2f64.powi(k as i32 + 1);
        for j in 0..1024 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 1024.0);
            let s = p.eval(z).norm_sqr() + q.eval(z).norm_sqr();
            assert!((s - total).abs() <= 1e-9 * total);
        }
        let n = 1usize << k;
        let sup = sup_on_circle(&p, 1.0, 64 * n).unwrap();
        assert!(sup.sampled.value <= 2f64.sqrt() * (n as f64).sqrt() + 1e-9);
    }
}

#[test]
fn certified_sup_dominates_sampled() {
    let mut rng = Rng::new(7);
    for t in random_matrices(7, 30, 4) {
        let region = range_polygon(&t, NormKind::L2, 90).unwrap();
        let d = 1 + rng.below(10);
        let p = Polynomial::new((0..=d).map(|_| rng.complex_gaussian()).collect()).unwrap();
        let on_region = sup_on_region(&p, &region);
        assert!(on_region.certified.value >= on_region.sampled.value);
        let on_circle = sup_on_circle(&p, 0.5 + rng.uniform(), 16 * d).unwrap();
        assert!(on_circle.certified.value >= on_circle.sampled.value);
    }
}

#[test]
fn linear_sup_is_attained_at_vertices() {
    let mut rng = Rng::new(8);
    for t in random_matrices(8, 30, 5) {
        let region = range_polygon(&t, NormKind::L1, 120).unwrap();
        let p = Polynomial::new(vec![rng.complex_gaussian(), rng.complex_gaussian()]).unwrap();
        let vertex_max = region.vertices().iter().map(|&v| p.eval(v).norm()).fold(0.0, f64::max);
        assert_eq!(sup_on_region(&p, &region).sampled.value, vertex_max);
    }
}

#[test]
fn search_is_monotone_in_budget() {
    for (i, t) in random_matrices(9, 10, 4).iter().enumerate() {
        let mut last = 0.0;
        for budget in [25, 50, 100, 200] {
            let lb = psi_lower_bound(t, NormKind::L1, 8, budget, i as u64).unwrap().lower_bound;
            assert!(lb >= last, "budget {budget}: {lb} < {last}");
            last = lb;
        }
    }
}

#[test]
fn schreier_sets_stay_admissible_when_spread() {
    let s = SpreadingFamily::Schreier;
    let mut rng = Rng::new(10);
    for _ in 0..2000 {
        let size = 1 + rng.below(6);
        let mut set: Vec<usize> = (0..size).map(|_| 1 + rng.below(12)).collect();
        set.sort_unstable();
        set.dedup();
        if !s.is_admissible(&set) {
            continue;
        }
        let mut spread = set.clone();
        for j in (0..spread.len()).rev() {
            spread[j] += rng.below(4);
            if j + 1 < spread.len() && spread[j] >= spread[j + 1] {
                spread[j] = spread[j + 1] - 1;
            }
            spread[j] = spread[j].max(set[j]);
        }
        assert!(s.is_admissible(&spread), "{set:?} -> {spread:?}");
    }
    s.check_conditions(12).unwrap();
}
