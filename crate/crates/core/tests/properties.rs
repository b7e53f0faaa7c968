use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use regfm::forward::{add_noise, ArrayGeometry, RadialShape};
use regfm::linalg::{hermitian_eig, spectral_norm, svd};
use regfm::operators::{
    nearfield_to_farfield, q_kernel_matrix, r_kernel_matrix, sharp, KernelTruncation,
};
use regfm::rfm::{filter_value, probe_vector, FilterKind, FilterSpec};
use regfm::specfun::{bessel_j_seq, bessel_y_seq};
use regfm::{Complex64, ComplexMatrix, Point2};

fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    ComplexMatrix::random_gaussian(n, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Orthogonal projector onto Fourier modes `|m| ≤ t` on `count` equispaced points.
fn band_projector(count: usize, t: usize) -> ComplexMatrix {
    let geom = ArrayGeometry::new(count, 5.0);
    ComplexMatrix::from_fn(count, count, |i, j| {
        let d = geom.angle(i) - geom.angle(j);
        let s: f64 = 1.0 + (1..=t).map(|m| 2.0 * (m as f64 * d).cos()).sum::<f64>();
        Complex64::new(s / count as f64, 0.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_holds(x in 0.5f64..50.0) {
        let j = bessel_j_seq(21, x).unwrap();
        let y = bessel_y_seq(21, x).unwrap();
        for n in 0..=20 {
            let w = j[n + 1] * y[n] - j[n] * y[n + 1];
            prop_assert!((w - 2.0 / (PI * x)).abs() <= 1e-9, "n={} x={} w={}", n, x, w);
        }
    }

    #[test]
    fn recurrences_hold(x in 0.5f64..50.0) {
        for seq in [bessel_j_seq(21, x).unwrap(), bessel_y_seq(21, x).unwrap()] {
            for n in 1..=20 {
                let lhs = seq[n - 1] + seq[n + 1];
                let rhs = 2.0 * n as f64 / x * seq[n];
                let scale = seq[n - 1].abs().max(seq[n + 1].abs()).max(rhs.abs());
                prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn filters_are_bounded(t in 1e-8f64..=1.0, log_alpha in -10.0f64..0.0, kind_idx in 0usize..3) {
        let spec = FilterSpec::new(FilterKind::ALL[kind_idx], 10f64.powf(log_alpha));
        let phi = filter_value(&spec, t, 1.0).unwrap();
        prop_assert!((0.0..=1.0).contains(&phi));
    }

    #[test]
    fn probe_entries_are_unimodular(x in -3.0f64..3.0, y in -3.0f64..3.0, k in 0.1f64..20.0) {
        let p = probe_vector(Point2::new(x, y), &ArrayGeometry::default(), k);
        for e in &p.entries {
            prop_assert!((e.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn boundary_points_lie_on_shape(theta in -20.0f64..20.0) {
        for shape in [RadialShape::RoundedSquare, RadialShape::Star, RadialShape::Acorn, RadialShape::Peanut] {
            let p = regfm::forward::boundary_point(&shape, theta);
            prop_assert!((p.norm() - shape.radius_at(theta)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sharp_is_psd_and_homogeneous(seed in any::<u64>(), c in -20.0f64..20.0) {
        prop_assume!(c.abs() > 1e-3);
        let f = random_matrix(24, seed);
        let s = sharp(&f).unwrap();
        prop_assert!(s.hermitian_defect() == 0.0);
        let norm = spectral_norm(&f).unwrap();
        prop_assert!(hermitian_eig(&s).unwrap().eigenvalues[0] >= -1e-10 * norm);
        let sc = sharp(&f.scale_real(c)).unwrap();
        prop_assert!((&sc - &s.scale_real(c.abs())).max_abs() <= 1e-10 * c.abs() * s.max_abs());
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..12, cols in 1usize..12) {
        let a = ComplexMatrix::random_gaussian(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed));
        let s = svd(&a).unwrap();
        prop_assert!((&s.reconstruct() - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn noise_leaves_zero_level_untouched(seed in any::<u64>()) {
        let m = random_matrix(8, seed);
        prop_assert_eq!(add_noise(&m, 0.0, seed).unwrap(), m);
    }

    #[test]
    fn transform_commutes_with_band_projection(seed in any::<u64>()) {
        let geom = ArrayGeometry::new(32, 5.0);
        let t = KernelTruncation::new(10);
        let n = random_matrix(32, seed);
        let p = band_projector(32, 10);
        let projected = &(&p * &n) * &p;
        let a = nearfield_to_farfield(&n, 4.0, &geom, t).unwrap();
        let b = nearfield_to_farfield(&projected, 4.0, &geom, t).unwrap();
        prop_assert!((&a - &b).max_abs() <= 1e-10 * a.max_abs());
    }
}

#[test]
fn kernels_are_exactly_circulant_at_defaults() {
    let geom = ArrayGeometry::default();
    let t = KernelTruncation::default();
    let q = q_kernel_matrix(4.0, 5.0, &geom, t).unwrap();
    let r = r_kernel_matrix(&geom, t).unwrap();
    for i in 0..64 {
        for j in 0..64 {
            assert_eq!(q[(i, j)], q[((i + 5) % 64, (j + 5) % 64)]);
            assert_eq!(r[(i, j)], r[((i + 9) % 64, (j + 9) % 64)]);
        }
    }
}
