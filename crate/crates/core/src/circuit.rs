//! Gate-level circuits for qubit excitations and their OPENQASM 2 export.
//!
//! Rotations follow the usual convention `R_σ(a) = exp(−i a σ / 2)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::excitation::{ExcitationGenerator, ExcitationKind};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    H(usize),
    X(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) | Gate::H(q) | Gate::X(q) => (q, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    /// 2×2 matrix `[[m00, m01], [m10, m11]]` of a single-qubit gate.
    fn matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Some(match *self {
            Gate::Rx(_, a) => {
                let (s, co) = (a / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            Gate::Ry(_, a) => {
                let (s, co) = (a / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            Gate::Rz(_, a) => {
                let (s, co) = (a / 2.0).sin_cos();
                [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
            }
            Gate::H(_) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
            }
            Gate::X(_) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate::Cnot { .. } => return None,
        })
    }

    fn qasm(&self) -> String {
        match *self {
            Gate::Rx(q, a) => format!("rx({a}) q[{q}];"),
            Gate::Ry(q, a) => format!("ry({a}) q[{q}];"),
            Gate::Rz(q, a) => format!("rz({a}) q[{q}];"),
            Gate::H(q) => format!("h q[{q}];"),
            Gate::X(q) => format!("x q[{q}];"),
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateList {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (a, b) = gate.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    bound: self.n_qubits,
                });
            }
        }
        if b == Some(a) {
            return Err(Error::invalid("CNOT control equals target"));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    /// Applies the gates in order to `psi`.
    pub fn apply(&self, psi: &mut StateVector) -> Result<()> {
        if psi.n_qubits() < self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: self.n_qubits - 1,
                bound: psi.n_qubits(),
            });
        }
        let amps = psi.amplitudes_mut();
        for g in &self.gates {
            match (*g, g.matrix()) {
                (Gate::Cnot { control, target }, _) => {
                    let (cb, tb) = (1usize << control, 1usize << target);
                    for b in 0..amps.len() {
                        if b & cb != 0 && b & tb == 0 {
                            amps.swap(b, b | tb);
                        }
                    }
                }
                (_, Some(m)) => {
                    let bit = 1usize << g.qubits().0;
                    for b in 0..amps.len() {
                        if b & bit == 0 {
                            let (u, v) = (amps[b], amps[b | bit]);
                            amps[b] = m[0][0] * u + m[0][1] * v;
                            amps[b | bit] = m[1][0] * u + m[1][1] * v;
                        }
                    }
                }
                _ => unreachable!("only CNOT lacks a 2x2 matrix"),
            }
        }
        Ok(())
    }

    pub fn to_qasm(&self) -> String {
        let mut s = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n", self.n_qubits);
        for g in &self.gates {
            let _ = writeln!(s, "{}", g.qasm());
        }
        s
    }
}

fn cx(control: usize, target: usize) -> Gate {
    Gate::Cnot { control, target }
}

/// Gate sequence implementing the excitation unitary at angle `theta`.
/// Singles match `exp(θT)` exactly; doubles match up to a global phase.
pub fn emit_circuit(g: &ExcitationGenerator, theta: f64) -> Result<GateList> {
    use Gate::*;
    let n = g.max_qubit() + 1;
    let lit = g.literal_indices();
    let gates: Vec<Gate> = match g.kind() {
        ExcitationKind::QubitSingle => {
            let (i, k) = (lit[0], lit[1]);
            vec![
                Rz(k, FRAC_PI_2),
                Rx(k, FRAC_PI_2),
                Rx(i, FRAC_PI_2),
                cx(k, i),
                Rx(k, theta),
                Rz(i, theta),
                cx(k, i),
                Rx(k, -FRAC_PI_2),
                Rx(i, -FRAC_PI_2),
                Rz(k, -FRAC_PI_2),
            ]
        }
        ExcitationKind::QubitDouble => {
            let (i, j, k, l) = (lit[0], lit[1], lit[2], lit[3]);
            let a = theta / 4.0;
            vec![
                cx(l, k),
                cx(j, i),
                X(k),
                X(i),
                cx(l, j),
                Ry(l, -a),
                H(k),
                cx(l, k),
                Ry(l, a),
                H(i),
                cx(l, i),
                Ry(l, -a),
                cx(l, k),
                Ry(l, a),
                H(j),
                cx(l, j),
                Ry(l, -a),
                cx(l, k),
                Ry(l, a),
                cx(l, i),
                Ry(l, -a),
                H(i),
                cx(l, k),
                Ry(l, a),
                H(k),
                Rz(j, -FRAC_PI_2),
                cx(l, j),
                Rz(l, FRAC_PI_2),
                Rz(j, -FRAC_PI_2),
                Ry(j, FRAC_PI_2),
                X(k),
                X(i),
                cx(l, k),
                cx(j, i),
            ]
        }
        other => {
            return Err(Error::invalid(format!(
                "no gate-level circuit for {}; its CNOT cost is modeled only",
                other.name()
            )))
        }
    };
    let mut list = GateList::new(n);
    for gate in gates {
        list.push(gate)?;
    }
    Ok(list)
}
