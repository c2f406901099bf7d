//! Dense statevectors and the operator kernels that act on them.
//!
//! Amplitudes are little-endian: qubit `q` is bit `q` of the basis index and
//! `|1⟩` marks an occupied spin-orbital.
//!
//! Every Pauli string with flip mask `x` maps `|b⟩` to `phase(b) |b ⊕ x⟩`, so a
//! sum of strings sharing one `x` acts as `|b⟩ ↦ f(b) |b ⊕ x⟩`. That is the
//! [`FlipOperator`]; a general [`PauliSum`] compiles into one per distinct `x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::excitation::ExcitationGenerator;
use crate::pauli::{i_pow, PauliSum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on the imaginary part of an expectation value of a Hermitian operator.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state with the given occupation bitmask.
    pub fn basis_state(occupation: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits >= 64 || occupation >> n_qubits != 0 {
            return Err(Error::invalid(format!(
                "occupation {occupation:#b} does not fit {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[occupation as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::LengthMismatch {
                expected: 1 << n_qubits,
                actual: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        dot(&self.amps, &other.amps)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    fn check_fits(&self, max_qubit: Option<usize>) -> Result<()> {
        match max_qubit {
            Some(q) if q >= self.n_qubits => Err(Error::IndexOutOfRange {
                index: q,
                bound: self.n_qubits,
            }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A weighted flip: `|b⟩ ↦ f(b) |b ⊕ x⟩` with `f(b) = Σ_t c_t (−1)^{|b ∧ z_t|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipOperator {
    x: u64,
    terms: Vec<(Complex64, u64)>,
    support: u64,
}

impl FlipOperator {
    /// Compiles a sum whose strings all share one flip mask; `None` otherwise.
    pub fn from_pauli_sum(p: &PauliSum) -> Option<Self> {
        let mut x = None;
        let mut terms = Vec::with_capacity(p.len());
        let mut support = 0;
        for &(c, s) in p.terms() {
            let (sx, sz) = s.masks();
            match x {
                None => x = Some(sx),
                Some(x0) if x0 != sx => return None,
                _ => {}
            }
            support |= s.support();
            // Y = iXZ, and X^x Z^z |b⟩ = (−1)^{|b∧z|} |b⊕x⟩.
            terms.push((c * i_pow(s.y_count()), sz));
        }
        Some(Self {
            x: x.unwrap_or(0),
            terms,
            support,
        })
    }

    pub fn flip_mask(&self) -> u64 {
        self.x
    }

    pub fn max_qubit(&self) -> Option<usize> {
        (self.support != 0).then(|| 63 - self.support.leading_zeros() as usize)
    }

    #[inline]
    pub fn factor(&self, b: u64) -> Complex64 {
        let mut f = ZERO;
        for &(c, z) in &self.terms {
            if (b & z).count_ones() & 1 == 0 {
                f += c;
            } else {
                f -= c;
            }
        }
        f
    }

    /// `out += op · psi`.
    pub fn apply_add(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (b, &a) in psi.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let f = self.factor(b as u64);
            out[b ^ self.x as usize] += f * a;
        }
    }

    /// `⟨bra| op |ket⟩`.
    pub fn matrix_element(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for (b, &a) in ket.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let target = bra[b ^ self.x as usize];
            if target == ZERO {
                continue;
            }
            acc += target.conj() * self.factor(b as u64) * a;
        }
        acc
    }

    /// In-place `psi ← exp(θ T) psi` for an operator with `T³ = −T`, using
    /// `exp(θT) = 1 + sin θ T + (1 − cos θ) T²`.
    pub fn exp_in_place(&self, theta: f64, psi: &mut [Complex64]) {
        let (s, c) = theta.sin_cos();
        let omc = 1.0 - c;
        if self.x == 0 {
            for (b, a) in psi.iter_mut().enumerate() {
                let f = self.factor(b as u64);
                if f != ZERO {
                    *a += s * f * *a + omc * f * f * *a;
                }
            }
            return;
        }
        let high = 1u64 << (63 - self.x.leading_zeros());
        for b in 0..psi.len() as u64 {
            if b & high != 0 {
                continue;
            }
            let b2 = b ^ self.x;
            let (u, v) = (psi[b as usize], psi[b2 as usize]);
            if u == ZERO && v == ZERO {
                continue;
            }
            // T|b⟩ = f1 |b2⟩, T|b2⟩ = f2 |b⟩
            let f1 = self.factor(b);
            let f2 = self.factor(b2);
            if f1 == ZERO && f2 == ZERO {
                continue;
            }
            let ff = f1 * f2;
            psi[b as usize] = u + s * f2 * v + omc * ff * u;
            psi[b2 as usize] = v + s * f1 * u + omc * ff * v;
        }
    }
}

/// A [`PauliSum`] grouped by flip mask for fast application.
#[derive(Debug, Clone)]
pub struct CompiledPauliSum {
    groups: Vec<FlipOperator>,
    max_qubit: Option<usize>,
    hermitian: bool,
}

impl CompiledPauliSum {
    pub fn new(p: &PauliSum) -> Self {
        let mut by_x: std::collections::BTreeMap<u64, Vec<(Complex64, _)>> = Default::default();
        for &(c, s) in p.terms() {
            by_x.entry(s.masks().0).or_default().push((c, s));
        }
        let groups = by_x
            .into_values()
            .map(|t| FlipOperator::from_pauli_sum(&PauliSum::from_terms(t)).expect("single flip mask"))
            .collect();
        Self {
            groups,
            max_qubit: p.max_qubit(),
            hermitian: p.is_hermitian(1e-12),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.max_qubit
    }

    pub fn apply_slice(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; psi.len()];
        for g in &self.groups {
            g.apply_add(psi, &mut out);
        }
        out
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        psi.check_fits(self.max_qubit)?;
        Ok(StateVector {
            n_qubits: psi.n_qubits,
            amps: self.apply_slice(&psi.amps),
        })
    }

    /// `⟨ψ|H|ψ⟩` for a Hermitian operator, with the imaginary residue checked.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if !self.hermitian {
            return Err(Error::NotHermitian("expectation requires real coefficients".into()));
        }
        psi.check_fits(self.max_qubit)?;
        let hpsi = self.apply_slice(&psi.amps);
        let e = dot(&psi.amps, &hpsi);
        if e.im.abs() > IMAG_RESIDUE_TOL * e.re.abs().max(1.0) {
            return Err(Error::NotHermitian(format!("imaginary residue {:e}", e.im)));
        }
        Ok(e.re)
    }
}

/// `Σ h_r P_r |ψ⟩`, unnormalized.
pub fn apply_pauli_sum(p: &PauliSum, psi: &StateVector) -> Result<StateVector> {
    CompiledPauliSum::new(p).apply(psi)
}

/// `Re⟨ψ|h|ψ⟩`; rejects operators with complex coefficients.
pub fn expectation(h: &PauliSum, psi: &StateVector) -> Result<f64> {
    CompiledPauliSum::new(h).expectation(psi)
}

/// Applies the excitation unitary for angle `theta`. Skew-Hermitian kinds give
/// `exp(θT)`, the Pauli-exponential kind gives `exp(iθP)`.
pub fn apply_excitation(g: &ExcitationGenerator, theta: f64, psi: &StateVector) -> Result<StateVector> {
    let mut out = psi.clone();
    apply_excitation_in_place(g, theta, &mut out)?;
    Ok(out)
}

pub fn apply_excitation_in_place(g: &ExcitationGenerator, theta: f64, psi: &mut StateVector) -> Result<()> {
    psi.check_fits(g.action().max_qubit())?;
    g.action().exp_in_place(theta, &mut psi.amps);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::ExcitationGenerator;
    use crate::pauli::PauliString;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_states() {
        let s = StateVector::basis_state(0b0011, 4).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
        assert_eq!(s.norm(), 1.0);
        let s = StateVector::basis_state(0, 2).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        let s = StateVector::basis_state(0b1111, 4).unwrap();
        assert_eq!(s.amplitudes()[15], c(1.0, 0.0));
        assert!(StateVector::basis_state(0b100, 2).is_err());
    }

    #[test]
    fn z_and_x_action() {
        let z0 = PauliSum::from(ps("Z0"));
        let zero = StateVector::basis_state(0, 1).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(apply_pauli_sum(&z0, &zero).unwrap().amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(apply_pauli_sum(&z0, &one).unwrap().amplitudes(), &[c(0.0, 0.0), c(-1.0, 0.0)]);
        let xx = PauliSum::from_terms([(c(1.0, 0.0), ps("X0")), (c(1.0, 0.0), ps("X0"))]);
        assert_eq!(apply_pauli_sum(&xx, &zero).unwrap().amplitudes(), &[c(0.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn y_phases() {
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
        let y = PauliSum::from(ps("Y0"));
        let zero = StateVector::basis_state(0, 1).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(apply_pauli_sum(&y, &zero).unwrap().amplitudes()[1], c(0.0, 1.0));
        assert_eq!(apply_pauli_sum(&y, &one).unwrap().amplitudes()[0], c(0.0, -1.0));
    }

    #[test]
    fn expectation_basics() {
        let z0 = PauliSum::from(ps("Z0"));
        let zero = StateVector::basis_state(0, 1).unwrap();
        assert_eq!(expectation(&z0, &zero).unwrap(), 1.0);
        assert_eq!(expectation(&PauliSum::identity(1.0), &zero).unwrap(), 1.0);
        let bad = PauliSum::term(c(0.0, 1.0), ps("Z0"));
        assert!(matches!(expectation(&bad, &zero), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn index_overflow() {
        let p = PauliSum::from(ps("X3"));
        let s = StateVector::basis_state(0, 2).unwrap();
        assert!(matches!(apply_pauli_sum(&p, &s), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn single_excitation_rotates_electron() {
        // exp(θ T̃_10) on |q0 = 1⟩ gives cos θ |q0=1⟩ + sin θ |q1=1⟩.
        let g = ExcitationGenerator::qubit_single(1, 0).unwrap();
        let psi = StateVector::basis_state(0b01, 2).unwrap();
        let theta: f64 = 0.3;
        let out = apply_excitation(&g, theta, &psi).unwrap();
        let a = out.amplitudes();
        assert!((a[0b01] - c(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((a[0b10] - c(theta.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_angle_is_identity() {
        let g = ExcitationGenerator::qubit_double(0, 1, 2, 3).unwrap();
        let psi = StateVector::basis_state(0b1100, 4).unwrap();
        assert_eq!(apply_excitation(&g, 0.0, &psi).unwrap(), psi);
    }
}
