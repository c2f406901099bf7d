//! Dense reference implementations used as test oracles.
#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use vqe_core::driver::Problem;
use vqe_core::{MolecularIntegrals, Pauli, PauliString, PauliSum, StateVector};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(p: Option<Pauli>) -> CMat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let m = match p {
        None => [l, o, o, l],
        Some(Pauli::X) => [o, l, l, o],
        Some(Pauli::Y) => [o, -i, i, o],
        Some(Pauli::Z) => [l, o, o, -l],
    };
    DMatrix::from_row_slice(2, 2, &m)
}

/// Kronecker product with qubit 0 as the least significant basis bit.
pub fn string_matrix(s: &PauliString, n: usize) -> CMat {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..n).rev() {
        m = m.kronecker(&single(s.get(q)));
    }
    m
}

pub fn sum_matrix(p: &PauliSum, n: usize) -> CMat {
    let d = 1 << n;
    p.terms()
        .iter()
        .fold(CMat::zeros(d, d), |acc, (coef, s)| acc + string_matrix(s, n) * *coef)
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let b = a / c(2f64.powi(s), 0.0);
    let d = a.nrows();
    let mut term = CMat::identity(d, d);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &b / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn to_vec(psi: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `1 − |⟨a|b⟩|` for unit vectors; zero exactly when they agree up to phase.
pub fn phase_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let o: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    1.0 - o.norm()
}

pub fn random_state(n: usize, seed: &[f64]) -> StateVector {
    let d = 1 << n;
    let amps: Vec<Complex64> = (0..d)
        .map(|k| {
            let a = seed[(2 * k) % seed.len()] + 0.37 * k as f64;
            let b = seed[(2 * k + 1) % seed.len()] - 0.11 * k as f64;
            c(a.sin(), (1.3 * b).cos())
        })
        .collect();
    let mut s = StateVector::from_amplitudes(n, amps).unwrap();
    s.normalize();
    s
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn problem(name: &str) -> Problem {
    let ints = MolecularIntegrals::from_fcidump_file(fixture(&format!("{name}.fcidump"))).unwrap();
    Problem::new(name, &ints).unwrap()
}
