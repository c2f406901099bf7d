//! Adaptive variational eigensolver simulation on exact statevectors.
//!
//! The pipeline runs from molecular integrals to a Jordan–Wigner qubit
//! Hamiltonian, builds operator pools of qubit, fermionic or Pauli-string
//! excitations, and grows an ansatz one element at a time against the exact
//! ground energy.

pub mod error;
pub mod excitation;
pub mod fermion;
pub mod bfgs;
pub mod circuit;
pub mod cli;
pub mod driver;
pub mod fixture;
pub mod ground;
pub mod optimizer;
pub mod pauli;
pub mod record;
pub mod state;

pub use error::{Error, Result};
pub use excitation::{ansatz_resources, ExcitationGenerator, ExcitationKind, ExcitationPool, PoolKind};
pub use fermion::{
    hartree_fock_reference, jw_transform, parse_fcidump, qubit_hamiltonian, FermionOperator, MolecularIntegrals,
};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use state::{apply_excitation, apply_pauli_sum, expectation, CompiledPauliSum, StateVector};
