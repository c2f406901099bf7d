//! Parametrized ansätze: state preparation, energies, analytic gradients,
//! pool screening and BFGS minimization.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bfgs::{self, Minimum};
use crate::error::{Error, Result};
use crate::excitation::{ExcitationGenerator, ExcitationPool};
use crate::state::{apply_excitation_in_place, dot, CompiledPauliSum, StateVector};

pub use crate::bfgs::OptimizerSettings;

/// An ordered product of excitation unitaries acting on a reference
/// determinant. Element `p` uses parameter `slots[p]`; spin-complement pairs
/// may share a slot.
#[derive(Debug, Clone)]
pub struct Ansatz {
    n_qubits: usize,
    reference: u64,
    elements: Vec<ExcitationGenerator>,
    slots: Vec<usize>,
    n_params: usize,
}

impl Ansatz {
    pub fn new(n_qubits: usize, reference: u64) -> Result<Self> {
        StateVector::basis_state(reference, n_qubits)?;
        Ok(Self {
            n_qubits,
            reference,
            elements: Vec::new(),
            slots: Vec::new(),
            n_params: 0,
        })
    }

    /// Appends `g` with a new parameter slot and returns that slot.
    pub fn push(&mut self, g: ExcitationGenerator) -> Result<usize> {
        let slot = self.n_params;
        self.push_shared(g, slot)?;
        Ok(slot)
    }

    /// Appends `g` using an existing slot, or the next new one.
    pub fn push_shared(&mut self, g: ExcitationGenerator, slot: usize) -> Result<()> {
        if g.max_qubit() >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: g.max_qubit(),
                bound: self.n_qubits,
            });
        }
        if slot > self.n_params {
            return Err(Error::invalid(format!(
                "slot {slot} would leave a gap after {} slots",
                self.n_params
            )));
        }
        self.n_params = self.n_params.max(slot + 1);
        self.elements.push(g);
        self.slots.push(slot);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reference(&self) -> u64 {
        self.reference
    }

    pub fn elements(&self) -> &[ExcitationGenerator] {
        &self.elements
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_params(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params {
            return Err(Error::LengthMismatch {
                expected: self.n_params,
                actual: theta.len(),
            });
        }
        Ok(())
    }
}

fn check_operator(a: &Ansatz, h: &CompiledPauliSum) -> Result<()> {
    match h.max_qubit() {
        Some(q) if q >= a.n_qubits => Err(Error::IndexOutOfRange {
            index: q,
            bound: a.n_qubits,
        }),
        _ => Ok(()),
    }
}

/// Applies the elements in stored order to the reference determinant.
pub fn prepare_state(a: &Ansatz, theta: &[f64]) -> Result<StateVector> {
    a.check_params(theta)?;
    let mut psi = StateVector::basis_state(a.reference, a.n_qubits)?;
    for (g, &s) in a.elements.iter().zip(&a.slots) {
        apply_excitation_in_place(g, theta[s], &mut psi)?;
    }
    Ok(psi)
}

pub fn energy(a: &Ansatz, theta: &[f64], h: &CompiledPauliSum) -> Result<f64> {
    check_operator(a, h)?;
    h.expectation(&prepare_state(a, theta)?)
}

/// Energy and `∂E/∂θ_s` for every slot from one forward pass and one reverse
/// sweep that un-applies each unitary from both the state and the costate.
pub fn energy_and_gradient(a: &Ansatz, theta: &[f64], h: &CompiledPauliSum) -> Result<(f64, Vec<f64>)> {
    check_operator(a, h)?;
    if !h.is_hermitian() {
        return Err(Error::NotHermitian("energy gradient needs a Hermitian operator".into()));
    }
    let mut psi = prepare_state(a, theta)?;
    let mut phi = StateVector::from_amplitudes(a.n_qubits, h.apply_slice(psi.amplitudes()))?;
    let e = dot(psi.amplitudes(), phi.amplitudes()).re;
    let mut grad = vec![0.0; a.n_params];
    for (g, &s) in a.elements.iter().zip(&a.slots).rev() {
        grad[s] += 2.0 * g.action().matrix_element(phi.amplitudes(), psi.amplitudes()).re;
        apply_excitation_in_place(g, -theta[s], &mut psi)?;
        apply_excitation_in_place(g, -theta[s], &mut phi)?;
    }
    Ok((e, grad))
}

pub fn gradient(a: &Ansatz, theta: &[f64], h: &CompiledPauliSum) -> Result<Vec<f64>> {
    energy_and_gradient(a, theta, h).map(|(_, g)| g)
}

/// `dE/dθ_p` at `θ_p = 0` for every pool element appended to `psi`, as
/// `2 Re⟨Hψ|T_p ψ⟩` with `Hψ` computed once.
pub fn pool_gradients(psi: &StateVector, h: &CompiledPauliSum, pool: &ExcitationPool) -> Result<Vec<f64>> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian("pool screening needs a Hermitian operator".into()));
    }
    let hpsi: Vec<Complex64> = h.apply(psi)?.into_amplitudes();
    if let Some(g) = pool.elements().iter().find(|g| g.max_qubit() >= psi.n_qubits()) {
        return Err(Error::IndexOutOfRange {
            index: g.max_qubit(),
            bound: psi.n_qubits(),
        });
    }
    Ok(pool
        .elements()
        .par_iter()
        .map(|g| 2.0 * g.action().matrix_element(&hpsi, psi.amplitudes()).re)
        .collect())
}

/// Per-group gradients: the sum over each parameter group's members.
pub fn group_gradients(pool: &ExcitationPool, element_gradients: &[f64]) -> Vec<f64> {
    pool.groups()
        .iter()
        .map(|g| g.iter().map(|&i| element_gradients[i]).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub theta: Vec<f64>,
    pub energy: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub budget_exhausted: bool,
}

/// BFGS from `theta0`; the returned energy never exceeds the starting energy.
pub fn minimize(a: &Ansatz, theta0: &[f64], h: &CompiledPauliSum, settings: &OptimizerSettings) -> Result<MinimizeResult> {
    a.check_params(theta0)?;
    energy_and_gradient(a, theta0, h)?;
    let objective = |x: &[f64]| energy_and_gradient(a, x, h).expect("validated above");
    let Minimum {
        x,
        value,
        evaluations,
        converged,
        budget_exhausted,
        ..
    } = bfgs::minimize(objective, theta0, settings);
    Ok(MinimizeResult {
        theta: x,
        energy: value,
        evaluations,
        converged,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliString, PauliSum};

    fn toy_h() -> CompiledPauliSum {
        let t = |c: f64, s: &str| (Complex64::new(c, 0.0), s.parse::<PauliString>().unwrap());
        CompiledPauliSum::new(&PauliSum::from_terms([
            t(0.4, "Z0"),
            t(0.3, "Z1"),
            t(-0.2, "Z2"),
            t(0.1, "Z3"),
            t(0.15, "X0 X1 Y2 Y3"),
            t(0.25, "Z0 Z2"),
            t(0.05, "X0 Z1 X2"),
            t(0.05, "Y0 Z1 Y2"),
        ]))
    }

    #[test]
    fn empty_ansatz_is_reference() {
        let a = Ansatz::new(4, 0b0011).unwrap();
        assert_eq!(prepare_state(&a, &[]).unwrap(), StateVector::basis_state(3, 4).unwrap());
        assert!(gradient(&a, &[], &toy_h()).unwrap().is_empty());
    }

    #[test]
    fn shared_slot_sums_contributions() {
        let h = toy_h();
        let g1 = ExcitationGenerator::fermionic_single(2, 0).unwrap();
        let g2 = ExcitationGenerator::fermionic_single(3, 1).unwrap();
        let mut shared = Ansatz::new(4, 0b0011).unwrap();
        shared.push(g1.clone()).unwrap();
        shared.push_shared(g2.clone(), 0).unwrap();
        let mut split = Ansatz::new(4, 0b0011).unwrap();
        split.push(g1).unwrap();
        split.push(g2).unwrap();
        let th = 0.3;
        let gs = gradient(&shared, &[th], &h).unwrap();
        let gp = gradient(&split, &[th, th], &h).unwrap();
        assert!((gs[0] - gp[0] - gp[1]).abs() < 1e-14);
        assert_eq!(shared.n_params(), 1);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = toy_h();
        let mut a = Ansatz::new(4, 0b0011).unwrap();
        a.push(ExcitationGenerator::qubit_double(2, 3, 0, 1).unwrap()).unwrap();
        a.push(ExcitationGenerator::qubit_single(2, 0).unwrap()).unwrap();
        a.push(ExcitationGenerator::fermionic_single(3, 1).unwrap()).unwrap();
        let th = [0.2, -0.4, 0.7];
        let g = gradient(&a, &th, &h).unwrap();
        for s in 0..3 {
            let mut p = th;
            let mut m = th;
            p[s] += 1e-5;
            m[s] -= 1e-5;
            let fd = (energy(&a, &p, &h).unwrap() - energy(&a, &m, &h).unwrap()) / 2e-5;
            assert!((fd - g[s]).abs() < 1e-8, "slot {s}: {fd} vs {}", g[s]);
        }
    }

    #[test]
    fn minimize_reaches_stationary_point() {
        let h = toy_h();
        let mut a = Ansatz::new(4, 0b0011).unwrap();
        a.push(ExcitationGenerator::qubit_double(2, 3, 0, 1).unwrap()).unwrap();
        a.push(ExcitationGenerator::qubit_single(2, 0).unwrap()).unwrap();
        let e0 = energy(&a, &[0.0, 0.0], &h).unwrap();
        let r = minimize(&a, &[0.0, 0.0], &h, &OptimizerSettings::default()).unwrap();
        assert!(r.converged);
        assert!(r.energy <= e0);
        let g = gradient(&a, &r.theta, &h).unwrap();
        assert!(g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-8);
    }

    #[test]
    fn length_mismatch() {
        let mut a = Ansatz::new(4, 0b0011).unwrap();
        a.push(ExcitationGenerator::qubit_single(2, 0).unwrap()).unwrap();
        assert!(matches!(prepare_state(&a, &[]), Err(Error::LengthMismatch { .. })));
        assert!(a.push_shared(ExcitationGenerator::qubit_single(3, 1).unwrap(), 5).is_err());
    }
}
