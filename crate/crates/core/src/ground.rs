//! Exact lowest eigenvalue of a qubit Hamiltonian, optionally restricted to a
//! fixed particle number.
//!
//! Small problems (≤ 8 qubits) use a dense Hermitian eigensolver. Larger ones
//! use Lanczos with full reorthogonalization, restarted from the current Ritz
//! vector, with a seeded start vector so results are reproducible.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::{dot, CompiledPauliSum, StateVector};

/// Largest register handled by the dense solver.
pub const DENSE_MAX_QUBITS: usize = 8;
/// Residual norm `‖Hx − θx‖` at which Lanczos stops.
pub const LANCZOS_RESIDUAL_TOL: f64 = 1e-9;
const LANCZOS_BLOCK: usize = 120;
const LANCZOS_RESTARTS: usize = 40;
const START_SEED: u64 = 0x1ee7_5eed;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
}

fn sector_basis(n_qubits: usize, particles: Option<usize>) -> Vec<u64> {
    (0..1u64 << n_qubits)
        .filter(|b| particles.is_none_or(|n| b.count_ones() as usize == n))
        .collect()
}

fn prepare(h: &PauliSum, n_qubits: usize, particles: Option<usize>) -> Result<CompiledPauliSum> {
    if n_qubits == 0 || n_qubits > 30 {
        return Err(Error::invalid(format!("unsupported register of {n_qubits} qubits")));
    }
    if let Some(q) = h.max_qubit().filter(|&q| q >= n_qubits) {
        return Err(Error::IndexOutOfRange {
            index: q,
            bound: n_qubits,
        });
    }
    if particles.is_some_and(|n| n > n_qubits) {
        return Err(Error::invalid("more particles than qubits"));
    }
    let c = CompiledPauliSum::new(h);
    if !c.is_hermitian() {
        return Err(Error::NotHermitian("ground energy needs a Hermitian operator".into()));
    }
    Ok(c)
}

/// Lowest eigenpair, dense for small registers and Lanczos otherwise.
pub fn exact_ground_state(h: &PauliSum, n_qubits: usize, particles: Option<usize>) -> Result<GroundState> {
    if n_qubits <= DENSE_MAX_QUBITS {
        dense_ground_state(h, n_qubits, particles)
    } else {
        lanczos_ground_state(h, n_qubits, particles)
    }
}

pub fn exact_ground_energy(h: &PauliSum, n_qubits: usize, particles: Option<usize>) -> Result<f64> {
    exact_ground_state(h, n_qubits, particles).map(|g| g.energy)
}

pub fn dense_ground_state(h: &PauliSum, n_qubits: usize, particles: Option<usize>) -> Result<GroundState> {
    let c = prepare(h, n_qubits, particles)?;
    let basis = sector_basis(n_qubits, particles);
    let dim = basis.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut col_vec = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (col, &b) in basis.iter().enumerate() {
        col_vec[b as usize] = Complex64::new(1.0, 0.0);
        let out = c.apply_slice(&col_vec);
        col_vec[b as usize] = Complex64::new(0.0, 0.0);
        for (row, &r) in basis.iter().enumerate() {
            m[(row, col)] = out[r as usize];
        }
    }
    let eig = SymmetricEigen::new(m);
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::invalid("empty particle sector"))?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (row, &b) in basis.iter().enumerate() {
        amps[b as usize] = eig.eigenvectors[(row, k)];
    }
    Ok(GroundState {
        energy,
        state: StateVector::from_amplitudes(n_qubits, amps)?,
    })
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of the tridiagonal matrix with diagonal `a` and off-diagonal `b`.
fn tridiagonal_lowest(a: &[f64], b: &[f64]) -> (f64, Vec<f64>) {
    let k = a.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = a[i];
        if i + 1 < k {
            t[(i, i + 1)] = b[i];
            t[(i + 1, i)] = b[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (j, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    (theta, eig.eigenvectors.column(j).iter().copied().collect())
}

pub fn lanczos_ground_state(h: &PauliSum, n_qubits: usize, particles: Option<usize>) -> Result<GroundState> {
    let c = prepare(h, n_qubits, particles)?;
    let dim = 1usize << n_qubits;
    let in_sector = |b: usize| particles.is_none_or(|n| b.count_ones() as usize == n);
    let sector_dim = (0..dim).filter(|&b| in_sector(b)).count();
    if sector_dim == 0 {
        return Err(Error::invalid("empty particle sector"));
    }
    let project = |v: &mut [Complex64]| {
        if particles.is_some() {
            v.iter_mut()
                .enumerate()
                .filter(|(b, _)| !in_sector(*b))
                .for_each(|(_, a)| *a = Complex64::new(0.0, 0.0));
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<Complex64> = (0..dim)
        .map(|b| {
            if in_sector(b) {
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let n0 = norm(&x);
    x.iter_mut().for_each(|a| *a /= n0);

    let block = LANCZOS_BLOCK.min(sector_dim);
    let mut last_residual = f64::INFINITY;
    for _restart in 0..LANCZOS_RESTARTS {
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut ritz = (0.0, vec![1.0]);
        for j in 0..block {
            let mut w = c.apply_slice(&basis[j]);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // two passes of classical Gram–Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let p = dot(v, &w);
                    axpy(&mut w, -p, v);
                }
            }
            project(&mut w);
            let bn = norm(&w);
            ritz = tridiagonal_lowest(&alpha, &beta);
            last_residual = bn * ritz.1.last().expect("nonempty").abs();
            if last_residual < LANCZOS_RESIDUAL_TOL || bn < 1e-13 || j + 1 == block {
                break;
            }
            beta.push(bn);
            w.iter_mut().for_each(|e| *e /= bn);
            basis.push(w);
        }
        x = vec![Complex64::new(0.0, 0.0); dim];
        for (s, v) in ritz.1.iter().zip(&basis) {
            axpy(&mut x, Complex64::new(*s, 0.0), v);
        }
        project(&mut x);
        let nx = norm(&x);
        x.iter_mut().for_each(|a| *a /= nx);
        if last_residual < LANCZOS_RESIDUAL_TOL || basis.len() == sector_dim {
            let state = StateVector::from_amplitudes(n_qubits, x)?;
            let energy = c.expectation(&state)?;
            return Ok(GroundState { energy, state });
        }
    }
    Err(Error::NoConvergence(format!(
        "Lanczos residual {last_residual:e} after {LANCZOS_RESTARTS} restarts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn two_level() {
        // −Z0 − 0.5 X0: eigenvalues ±√1.25
        let h = PauliSum::from_terms([
            (Complex64::new(-1.0, 0.0), ps("Z0")),
            (Complex64::new(-0.5, 0.0), ps("X0")),
        ]);
        let e = exact_ground_energy(&h, 1, None).unwrap();
        assert!((e + 1.25f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sector_restriction() {
        // Z0 + Z1 is lowest at |11⟩ (−2); in the one-particle sector it is 0.
        let h = PauliSum::from_terms([
            (Complex64::new(1.0, 0.0), ps("Z0")),
            (Complex64::new(1.0, 0.0), ps("Z1")),
        ]);
        assert!((exact_ground_energy(&h, 2, None).unwrap() + 2.0).abs() < 1e-14);
        assert!(exact_ground_energy(&h, 2, Some(1)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn lanczos_matches_dense() {
        let mut terms = Vec::new();
        for q in 0..6 {
            terms.push((Complex64::new(0.3 + 0.1 * q as f64, 0.0), PauliString::from_masks(0, 1 << q)));
            terms.push((Complex64::new(-0.7, 0.0), PauliString::from_masks(0b11 << q & 0x3f, 0)));
            terms.push((Complex64::new(0.2, 0.0), PauliString::from_masks(0b11 << q & 0x3f, 0b11 << q & 0x3f)));
        }
        let h = PauliSum::from_terms(terms);
        for sector in [None, Some(3)] {
            let d = dense_ground_state(&h, 6, sector).unwrap().energy;
            let l = lanczos_ground_state(&h, 6, sector).unwrap().energy;
            assert!((d - l).abs() < 1e-10, "{sector:?}: {d} vs {l}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = PauliSum::term(Complex64::new(0.0, 1.0), ps("Z0"));
        assert!(matches!(exact_ground_energy(&h, 1, None), Err(Error::NotHermitian(_))));
    }
}
