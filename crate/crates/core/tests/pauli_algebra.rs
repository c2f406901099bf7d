//! Pauli strings and sums agree with explicit Kronecker-product matrices.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use vqe_core::{PauliString, PauliSum};

const N: usize = 5;

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    (0u64..1 << n, 0u64..1 << n).prop_map(|(x, z)| PauliString::from_masks(x, z))
}

fn sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec(((-2.0f64..2.0), (-2.0f64..2.0), string(n)), 0..6)
        .prop_map(|t| PauliSum::from_terms(t.into_iter().map(|(a, b, s)| (Complex64::new(a, b), s))))
}

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).iter().all(|z| z.norm() <= tol)
}

proptest! {
    #[test]
    fn string_product_matches_matrices(a in string(N), b in string(N)) {
        let (phase, s) = a.mul(&b);
        let lhs = string_matrix(&a, N) * string_matrix(&b, N);
        prop_assert!(close(&lhs, &(string_matrix(&s, N) * phase), 1e-12));
    }

    #[test]
    fn commutation_flag_matches_matrices(a in string(N), b in string(N)) {
        let (ma, mb) = (string_matrix(&a, N), string_matrix(&b, N));
        let commute = close(&(&ma * &mb), &(&mb * &ma), 1e-12);
        prop_assert_eq!(a.commutes_with(&b), commute);
    }

    #[test]
    fn sum_product_matches_matrices(a in sum(N), b in sum(N)) {
        let lhs = sum_matrix(&a.multiply(&b), N);
        prop_assert!(close(&lhs, &(sum_matrix(&a, N) * sum_matrix(&b, N)), 1e-10));
    }

    #[test]
    fn commutator_matches_matrices(a in sum(N), b in sum(N)) {
        let (ma, mb) = (sum_matrix(&a, N), sum_matrix(&b, N));
        prop_assert!(close(&sum_matrix(&a.commutator(&b), N), &(&ma * &mb - &mb * &ma), 1e-10));
    }

    #[test]
    fn adjoint_and_linear_ops_match_matrices(a in sum(N), b in sum(N), k in -3.0f64..3.0) {
        let (ma, mb) = (sum_matrix(&a, N), sum_matrix(&b, N));
        prop_assert!(close(&sum_matrix(&a.adjoint(), N), &ma.adjoint(), 1e-12));
        prop_assert!(close(&sum_matrix(&(&a + &b), N), &(&ma + &mb), 1e-12));
        prop_assert!(close(&sum_matrix(&(&a - &b), N), &(&ma - &mb), 1e-12));
        prop_assert!(close(&sum_matrix(&a.scale(k), N), &(&ma * Complex64::new(k, 0.0)), 1e-12));
    }

    #[test]
    fn hermiticity_flag_matches_matrices(a in sum(N)) {
        let m = sum_matrix(&a, N);
        prop_assert_eq!(a.is_hermitian(1e-12), close(&m, &m.adjoint(), 1e-12));
    }

    #[test]
    fn display_round_trips(a in string(N)) {
        prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
    }

    #[test]
    fn every_string_squares_to_identity(a in string(N)) {
        let (phase, s) = a.mul(&a);
        prop_assert!(s.is_identity());
        prop_assert!((phase - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn single_qubit_table() {
    let p = |s: &str| s.parse::<PauliString>().unwrap();
    let i = Complex64::new(0.0, 1.0);
    assert_eq!(p("X0").mul(&p("Y0")), (i, p("Z0")));
    assert_eq!(p("Y0").mul(&p("Z0")), (i, p("X0")));
    assert_eq!(p("Z0").mul(&p("X0")), (i, p("Y0")));
    assert_eq!(p("Y0").mul(&p("X0")), (-i, p("Z0")));
}

#[test]
fn cancellation_leaves_empty_sum() {
    let a = PauliSum::term(1.5, "X0 Z2".parse().unwrap());
    assert!((&a - &a).is_empty());
    assert!(a.commutator(&a).is_empty());
}
