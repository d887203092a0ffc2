use num_complex::Complex64;

use spreadlab_core::bounds::{
    bound_zero_diagonal, eq2_residual, jll_certificate, spread_lower_bound, two_eigenvalue_bound,
    verify_bounds, BoundsConfig, THEOREM_PIECEWISE, TWO_EIGENVALUE,
};
use spreadlab_core::constructions::{
    certify, commutator_identity_check, extremal_matrix, verify_similarity, ExtremalFamily, Which,
};
use spreadlab_core::spectral::{
    distinct_eigenvalue_count, eigenvalues, spectrum_with_policy, EigenConfig, SpectrumMethod,
    SpectrumPolicy,
};

/// Positive root of `(n-1)(n-4)s^2 + 8(n-1)s - 2n` by the quadratic formula.
fn quadratic_root(n: usize) -> f64 {
    let nf = n as f64;
    let (a, b, c) = ((nf - 1.0) * (nf - 4.0), 8.0 * (nf - 1.0), -2.0 * nf);
    if a == 0.0 {
        return -c / b;
    }
    (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
}

#[test]
fn piecewise_bound_is_monotone_and_ordered() {
    let mut prev = f64::INFINITY;
    for n in 2..=1_000_000usize {
        let b = spread_lower_bound(n).unwrap();
        assert!(b.value > 0.0 && b.value <= prev, "n={n}");
        assert_eq!(b.strict, n >= 6);
        if n <= 2000 || n % 997 == 0 {
            assert!(b.value <= two_eigenvalue_bound(n).unwrap(), "n={n}");
        }
        prev = b.value;
    }
}

#[test]
fn small_cases_equal_the_quadratic_root() {
    for n in [4, 5] {
        let b = spread_lower_bound(n).unwrap().value;
        assert!((b - quadratic_root(n)).abs() < 1e-14, "n={n}");
        assert!(eq2_residual(n, b).abs() < 1e-12);
    }
    assert!((spread_lower_bound(5).unwrap().value - 5.0 / (8.0 + 74f64.sqrt())).abs() < 1e-16);
    for n in 6..=200 {
        let b = spread_lower_bound(n).unwrap().value;
        assert!(b < quadratic_root(n));
        assert!(eq2_residual(n, b) < 0.0);
    }
}

#[test]
fn closed_forms() {
    assert_eq!(spread_lower_bound(2).unwrap().value, 1.0);
    assert_eq!(spread_lower_bound(3).unwrap().value, 0.75);
    assert_eq!(bound_zero_diagonal(5, 2).unwrap(), 0.4);
    assert!(bound_zero_diagonal(2, 3).is_err());
    assert!(spread_lower_bound(1).is_err());
    assert_eq!(two_eigenvalue_bound(2).unwrap(), 1.0);
    let b6 = spread_lower_bound(6).unwrap().value;
    assert!((b6 - 2.0 / (4.0 + 18f64.sqrt())).abs() < 1e-16);
}

#[test]
fn similarity_certificates() {
    for n in 2..=50 {
        assert!(verify_similarity(n).unwrap(), "n={n}");
        let c = certify(n).unwrap();
        assert!(c.holds(), "n={n}");
    }
    for n in 1..=20 {
        for k in 1..=n {
            assert!(commutator_identity_check(n, k).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn family_members_are_consistent() {
    for n in 2..=12 {
        let f = ExtremalFamily::build(n).unwrap();
        // U is upper bidiagonal with diagonal (2(n-1), n-2, ..., n-2).
        let u = f.get(Which::U);
        assert_eq!(u[(0, 0)], (2 * (n - 1)).into());
        for i in 1..n {
            assert_eq!(u[(i, i)], (n - 2).into());
        }
        for i in 0..n {
            for j in 0..n {
                if j < i || j > i + 1 {
                    assert_eq!(u[(i, j)], 0.into(), "n={n} ({i},{j})");
                }
            }
        }
        // a11 = 0
        assert_eq!(f.get(Which::A)[(0, 0)], 0.into());
    }
}

#[test]
fn extremal_spectrum_is_exact() {
    for n in 2..=30 {
        let a = extremal_matrix(n).unwrap();
        assert!(a.in_c_n());
        let s = spectrum_with_policy(
            a.dense(),
            a.exact(),
            SpectrumPolicy::Auto,
            &EigenConfig::default(),
        )
        .unwrap();
        assert_eq!(s.method(), SpectrumMethod::ExactCharpoly);
        let small = (n as f64 - 2.0) / (2.0 * (n as f64 - 1.0));
        let mut ones = 0;
        for z in s.eigenvalues() {
            if (z - Complex64::new(1.0, 0.0)).norm() <= 1e-12 {
                ones += 1;
            } else {
                assert!(
                    (z - Complex64::new(small, 0.0)).norm() <= 1e-12,
                    "n={n}: {z}"
                );
            }
        }
        assert_eq!(ones, 1, "n={n}");
        assert!((s.spread() - n as f64 / (2.0 * (n as f64 - 1.0))).abs() <= 1e-12);
        assert_eq!(distinct_eigenvalue_count(&s, 1e-6), 2);
    }
}

#[test]
fn floating_qr_never_understates_the_extremal_spread() {
    // The repeated eigenvalue is defective, so QR scatters it, but the
    // cluster centroid is fixed by the trace and the spread cannot drop.
    for n in 2..=30 {
        let a = extremal_matrix(n).unwrap();
        let s = eigenvalues(a.dense(), &EigenConfig::default()).unwrap();
        let target = n as f64 / (2.0 * (n as f64 - 1.0));
        assert!(s.spread() >= target - 1e-10, "n={n}: {}", s.spread());
    }
}

#[test]
fn extremal_reports_attain_the_two_eigenvalue_bound() {
    let cfg = BoundsConfig::default();
    for n in 2..=15 {
        let a = extremal_matrix(n).unwrap();
        let rep = verify_bounds(&a, &cfg).unwrap();
        assert!(rep.violations.is_empty(), "n={n}: {:?}", rep.violations);
        assert_eq!(rep.distinct_eigenvalues, 2);
        let b = rep.bounds[TWO_EIGENVALUE];
        assert!((rep.spread - b).abs() <= 1e-12);
        assert!(rep.spread >= rep.bounds[THEOREM_PIECEWISE]);
        let cert = jll_certificate(&a, 6, 1e-9).unwrap();
        assert!(cert.all_satisfied());
        assert!(cert.checks.iter().all(|c| c.exact == Some(true)));
    }
}
