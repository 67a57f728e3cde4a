mod common;

use std::sync::Arc;

use hyperfilt::filtration::{
    decompose_at, filtrate_spectral_at, gegenbauer_kernel, kernel_normalization, project_component, zonal_convolve,
    ZonalProfile,
};
use hyperfilt::geometry::{angles_to_cartesian, apply_rotation, cartesian_to_angles, random_point, random_rotation};
use hyperfilt::io::{parse_manifest, parse_values, render_manifest, render_values};
use hyperfilt::polynomials::{
    dim_harmonics, eval_legendre, eval_legendre_recurrence, poisson_generating_sum, LegendreParams,
};
use hyperfilt::quadrature::{gauss_gegenbauer_rule, l2_norm, sphere_grid, SampledFunction, SphereGrid};
use hyperfilt::{AmbientDim, SpherePoint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dim_oracle, gamma_half, legendre_oracle};

fn dim(n: usize) -> AmbientDim {
    AmbientDim::new(n).unwrap()
}

fn grid(n: usize, m: usize) -> Arc<SphereGrid> {
    Arc::new(sphere_grid(dim(n), m).unwrap())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Σ_l c_l P_{l,N}(ξ·a_l) sampled with the oracle.
fn zonal_sum(grid: &Arc<SphereGrid>, terms: &[(usize, f64, SpherePoint)]) -> SampledFunction {
    let n = grid.dim().get();
    let band = terms.iter().map(|t| t.0).max().unwrap_or(0);
    SampledFunction::from_fn(grid.clone(), |x| {
        terms.iter().map(|(l, c, a)| c * legendre_oracle(*l, n, dot(x, a.coords()))).sum()
    })
    .with_band_limit(band)
}

fn random_terms(n: usize, band: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, f64, SpherePoint)> {
    (0..=band).map(|l| (l, rng.random_range(-1.0..1.0), random_point(dim(n), rng))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angles_round_trip(n in 2usize..=7, seed in any::<u64>()) {
        let p = random_point(dim(n), &mut ChaCha8Rng::seed_from_u64(seed));
        let q = angles_to_cartesian(&cartesian_to_angles(&p).unwrap(), dim(n)).unwrap();
        for (a, b) in p.coords().iter().zip(q.coords()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_is_normalized_and_bounded(l in 0usize..=30, n in 3usize..=9, t in -1.0f64..=1.0) {
        let p = LegendreParams::new(l, n).unwrap();
        prop_assert!((eval_legendre_recurrence(p, 1.0).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(eval_legendre_recurrence(p, t).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn legendre_parity(l in 0usize..=25, n in 2usize..=9, t in -1.0f64..=1.0) {
        let p = LegendreParams::new(l, n).unwrap();
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let a = eval_legendre_recurrence(p, -t).unwrap();
        let b = eval_legendre_recurrence(p, t).unwrap();
        prop_assert!((a - sign * b).abs() < 1e-12);
    }

    #[test]
    fn legendre_matches_oracle(l in 0usize..=25, n in 3usize..=9, t in -1.0f64..=1.0) {
        let p = LegendreParams::new(l, n).unwrap();
        let oracle = legendre_oracle(l, n, t);
        prop_assert!((eval_legendre_recurrence(p, t).unwrap() - oracle).abs() < 1e-10);
        prop_assert!((eval_legendre(p, t).unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn harmonic_dimensions(l in 0usize..=40, n in 2usize..=10) {
        let d = dim_harmonics(l, dim(n)).unwrap();
        prop_assert_eq!(d as f64, dim_oracle(l, n));
        // harmonics of degree ≤ l on S^(N-1) count the degree-l ones on S^N
        let total: u64 = (0..=l).map(|k| dim_harmonics(k, dim(n)).unwrap()).sum();
        prop_assert_eq!(total, dim_harmonics(l, dim(n + 1)).unwrap());
    }

    #[test]
    fn gauss_gegenbauer_is_exact(m in 1usize..=20, n in 2usize..=9, j in 0usize..40) {
        let rule = gauss_gegenbauer_rule(m, (n as f64 - 3.0) / 2.0).unwrap();
        let k = j % (2 * m);
        let v = rule.integrate(|t| t.powi(k as i32));
        let expected = if k % 2 == 1 {
            0.0
        } else {
            gamma_half(k + 1) * gamma_half(n - 1) / gamma_half(k + n)
        };
        prop_assert!((v - expected).abs() < 1e-12 * expected.max(1.0), "{} vs {}", v, expected);
    }

    #[test]
    fn kernel_positive_increasing_normalized(n in 2usize..=8, r in 0.0f64..0.95, t in -1.0f64..0.99) {
        let a = gegenbauer_kernel(dim(n), r, t).unwrap();
        let b = gegenbauer_kernel(dim(n), r, t + 0.01).unwrap();
        prop_assert!(a > 0.0);
        if r > 0.0 {
            prop_assert!(b > a);
        }
        prop_assert!((kernel_normalization(dim(n), r).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn generating_sum_within_bound(n in 3usize..=7, r in 0.0f64..0.8, t in -1.0f64..=1.0, big_l in 5usize..60) {
        let g = poisson_generating_sum(r, t, dim(n), big_l).unwrap();
        prop_assert!((g.partial_sum - g.closed_form).abs() <= g.bound * (1.0 + 1e-9) + 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn filtration_scales_zonal_polynomials(n in 3usize..=5, l in 0usize..=5, r in 0.0f64..0.9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // spectral evaluation at band l needs exactness to degree 2l
        let g = grid(n, 6);
        let a = random_point(dim(n), &mut rng);
        let f = zonal_sum(&g, &[(l, 1.0, a.clone())]);
        let targets: Vec<SpherePoint> = (0..5).map(|_| random_point(dim(n), &mut rng)).collect();
        let out = filtrate_spectral_at(&f, r, l, &targets).unwrap();
        for (v, xi) in out.iter().zip(&targets) {
            let expected = r.powi(l as i32) * legendre_oracle(l, n, xi.dot(&a));
            prop_assert!((v - expected).norm() < 1e-11);
        }
    }

    #[test]
    fn projection_is_idempotent_and_contractive(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = grid(n, 4);
        let f = zonal_sum(&g, &random_terms(n, 3, &mut rng));
        let total = l2_norm(&f);
        let mut sum_sq = 0.0;
        for l in 0..=3 {
            let p = project_component(&f, l).unwrap();
            let pp = project_component(&p, l).unwrap();
            prop_assert!(pp.max_abs_diff(&p).unwrap() < 1e-11);
            prop_assert!(l2_norm(&p) <= total + 1e-12);
            sum_sq += l2_norm(&p).powi(2);
        }
        // components of a band-limited function are orthogonal and exhaust it
        prop_assert!((sum_sq.sqrt() - total).abs() < 1e-10 * total.max(1.0));
    }

    #[test]
    fn projection_commutes_with_rotation(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = grid(n, 4);
        let terms = random_terms(n, 3, &mut rng);
        let rot = random_rotation(dim(n), &mut rng);
        let rotated: Vec<_> = terms.iter().map(|(l, c, a)| (*l, *c, apply_rotation(&rot, a).unwrap())).collect();
        let f = zonal_sum(&g, &terms);
        let fr = zonal_sum(&g, &rotated);
        let points: Vec<SpherePoint> = (0..6).map(|_| random_point(dim(n), &mut rng)).collect();
        let moved: Vec<SpherePoint> = points.iter().map(|p| apply_rotation(&rot, p).unwrap()).collect();
        let a = decompose_at(&f, 3, &points).unwrap();
        let b = decompose_at(&fr, 3, &moved).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn convolution_with_constant_profile_is_a_mean(n in 2usize..=5, c in -2.0f64..2.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = grid(n, 3);
        let f = zonal_sum(&g, &random_terms(n, 2, &mut rng));
        let h = ZonalProfile::constant(dim(n), c).unwrap();
        let out = zonal_convolve(&f, &h).unwrap();
        let integral: Complex64 = f.values().iter().zip(g.weights()).map(|(v, w)| v * w).sum();
        for v in out.values() {
            prop_assert!((v - integral * c).norm() < 1e-11);
        }
    }

    #[test]
    fn text_formats_round_trip(n in 2usize..=5, m in 1usize..=4, complex in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = grid(n, m);
        let back = parse_manifest(&render_manifest(&g).unwrap()).unwrap();
        prop_assert_eq!(&back, g.as_ref());
        prop_assert_eq!(back.checksum(), g.checksum());
        let f = if complex {
            let vals = (0..g.len()).map(|_| Complex64::new(rng.random(), rng.random::<f64>() * 1e-300)).collect();
            SampledFunction::new_complex(g.clone(), vals).unwrap()
        } else {
            let vals = (0..g.len()).map(|_| rng.random_range(-1e6..1e6)).collect();
            SampledFunction::new_real(g.clone(), vals).unwrap()
        };
        let parsed = parse_values(&render_values(&f), g.clone()).unwrap();
        prop_assert_eq!(parsed.values(), f.values());
    }
}
