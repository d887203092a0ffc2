use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spreadlab_core::bounds::pairwise_identity_check;
use spreadlab_core::spectral::{eigenvalues, perron_root, EigenConfig, PerronConfig};
use spreadlab_core::{DenseMatrix, NonnegativeMatrix};

fn random_dense(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DenseMatrix {
    let data = (0..n * n).map(|_| rng.random_range(lo..hi)).collect();
    DenseMatrix::new(n, data).unwrap()
}

fn random_nonneg(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let density = rng.random_range(0.2..1.0);
    let data = (0..n * n)
        .map(|_| {
            if rng.random::<f64>() < density {
                rng.random::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    DenseMatrix::new(n, data).unwrap()
}

fn dense_strategy(max_n: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-5.0f64..5.0, n * n)
            .prop_map(move |d| DenseMatrix::new(n, d).unwrap())
    })
}

#[test]
fn trace_and_determinant_cross_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = EigenConfig::default();
    for case in 0..1000 {
        let n = 1 + case % 12;
        let a = random_dense(&mut rng, n, -1.0, 1.0);
        let s = eigenvalues(&a, &cfg).unwrap();
        assert_eq!(s.len(), n);

        let sum: Complex64 = s.eigenvalues().iter().sum();
        assert!(
            (sum.re - a.trace()).abs() <= 1e-10 * (1.0 + n as f64),
            "case {case}"
        );
        assert!(sum.im.abs() <= 1e-10 * n as f64, "case {case}");

        let prod: Complex64 = s.eigenvalues().iter().product();
        let det = a.determinant();
        assert!(
            (prod.re - det).abs() <= 1e-9 * (1.0 + det.abs()),
            "case {case}: {prod} vs {det}"
        );

        // tr(A^2) = sum of squared eigenvalues
        let sq: Complex64 = s.eigenvalues().iter().map(|z| z * z).sum();
        let t2 = a.matmul(&a).unwrap().trace();
        assert!((sq.re - t2).abs() <= 1e-9 * (1.0 + t2.abs()), "case {case}");

        assert!(s.is_conjugate_closed(1e-8), "case {case}");
        assert!(
            pairwise_identity_check(&s) <= 1e-10 * (1.0 + n as f64 * n as f64),
            "case {case}"
        );
    }
}

#[test]
fn perron_root_matches_largest_modulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = EigenConfig::default();
    for case in 0..1000 {
        let n = 1 + case % 12;
        let a = random_nonneg(&mut rng, n);
        let m = NonnegativeMatrix::new(a.clone()).unwrap();
        let p = perron_root(&m, &PerronConfig::default());
        let rho = eigenvalues(&a, &cfg).unwrap().max_modulus();
        if m.is_nilpotent() {
            assert_eq!(p.value, 0.0);
            continue;
        }
        assert!(
            (p.value - rho).abs() <= 1e-8 * rho.max(1.0),
            "case {case}: perron {} vs {rho}",
            p.value
        );
        assert!(p.lower <= p.value && p.value <= p.upper);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spread_is_shift_invariant(a in dense_strategy(8), c in -10.0f64..10.0) {
        let cfg = EigenConfig::default();
        let s0 = eigenvalues(&a, &cfg).unwrap().spread();
        let s1 = eigenvalues(&a.shifted(c), &cfg).unwrap().spread();
        prop_assert!((s0 - s1).abs() <= 1e-7 * (1.0 + s0 + c.abs()), "{} vs {}", s0, s1);
    }

    #[test]
    fn spread_scales_with_modulus(a in dense_strategy(8), c in -10.0f64..10.0) {
        let cfg = EigenConfig::default();
        let s0 = eigenvalues(&a, &cfg).unwrap().spread();
        let s1 = eigenvalues(&a.scaled(c), &cfg).unwrap().spread();
        prop_assert!((s1 - c.abs() * s0).abs() <= 1e-7 * (1.0 + s1), "{} vs {}", s1, c.abs() * s0);
    }

    #[test]
    fn transpose_has_same_spectrum(a in dense_strategy(8)) {
        let cfg = EigenConfig::default();
        let s0 = eigenvalues(&a, &cfg).unwrap();
        let s1 = eigenvalues(&a.transpose(), &cfg).unwrap();
        assert_relative_eq!(s0.spread(), s1.spread(), epsilon = 1e-6, max_relative = 1e-6);
    }

    #[test]
    fn eigenvalues_are_conjugate_closed(a in dense_strategy(10)) {
        let s = eigenvalues(&a, &EigenConfig::default()).unwrap();
        prop_assert!(s.is_conjugate_closed(1e-8));
    }
}
