//! Python bindings: Pauli algebra, statevectors, excitations and the
//! adaptive VQE runners.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use vqe_core::circuit::emit_circuit;
use vqe_core::driver::{self, GrowthConfig};
use vqe_core::record::RunRecord as CoreRecord;
use vqe_core::{state, Error, ExcitationPool, MolecularIntegrals, PoolKind};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::IndexOutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        Error::NoConvergence(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for vqe_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn pool_kind(name: &str) -> PyResult<PoolKind> {
    Ok(match name {
        "qubit" => PoolKind::Qubit,
        "fermionic" => PoolKind::Fermionic,
        "fermionic_pairs" => PoolKind::FermionicSpinComplementPairs,
        "pauli" => PoolKind::PauliExponential,
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown pool `{name}`; expected qubit, fermionic, fermionic_pairs or pauli"
            )))
        }
    })
}

#[pyclass(frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PauliString(vqe_core::PauliString);

#[pymethods]
impl PauliString {
    /// Parses factors such as `"X0 Y1 Z3"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).py()
    }

    #[staticmethod]
    fn from_masks(x: u64, z: u64) -> Self {
        Self(vqe_core::PauliString::from_masks(x, z))
    }

    fn masks(&self) -> (u64, u64) {
        self.0.masks()
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn commutes_with(&self, other: &Self) -> bool {
        self.0.commutes_with(&other.0)
    }

    /// Returns `(phase, string)` with `self · other = phase · string`.
    fn __mul__(&self, other: &Self) -> (Complex64, Self) {
        let (phase, s) = self.0.mul(&other.0);
        (phase, Self(s))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliString('{}')", self.0)
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct PauliSum(vqe_core::PauliSum);

#[pymethods]
impl PauliSum {
    /// Builds a sum from `(coefficient, "X0 Z1")` pairs.
    #[new]
    #[pyo3(signature = (terms = Vec::new()))]
    fn new(terms: Vec<(Complex64, String)>) -> PyResult<Self> {
        let parsed = terms
            .into_iter()
            .map(|(c, s)| s.parse().map(|s| (c, s)))
            .collect::<vqe_core::Result<Vec<_>>>()
            .py()?;
        Ok(Self(vqe_core::PauliSum::from_terms(parsed)))
    }

    fn terms(&self) -> Vec<(Complex64, String)> {
        self.0.terms().iter().map(|(c, s)| (*c, s.to_string())).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(self.0.multiply(&other.0))
    }

    fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.scale(factor))
    }

    fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    fn commutator(&self, other: &Self) -> Self {
        Self(self.0.commutator(&other.0))
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn is_hermitian(&self, tol: f64) -> bool {
        self.0.is_hermitian(tol)
    }

    #[pyo3(signature = (other, tol = 1e-12))]
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }

    fn apply(&self, psi: &StateVector) -> PyResult<StateVector> {
        state::apply_pauli_sum(&self.0, &psi.0).map(StateVector).py()
    }

    fn expectation(&self, psi: &StateVector) -> PyResult<f64> {
        state::expectation(&self.0, &psi.0).py()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliSum({} terms)", self.0.len())
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct StateVector(vqe_core::StateVector);

#[pymethods]
impl StateVector {
    /// Amplitudes indexed by the occupation bitmask, qubit 0 least significant.
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let n = amplitudes.len().trailing_zeros() as usize;
        if !amplitudes.len().is_power_of_two() {
            return Err(PyValueError::new_err("amplitude count must be a power of two"));
        }
        vqe_core::StateVector::from_amplitudes(n, amplitudes).map(Self).py()
    }

    #[staticmethod]
    fn basis(occupation: u64, n_qubits: usize) -> PyResult<Self> {
        vqe_core::StateVector::basis_state(occupation, n_qubits).map(Self).py()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn inner(&self, other: &Self) -> Complex64 {
        self.0.inner(&other.0)
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct ExcitationGenerator(vqe_core::ExcitationGenerator);

#[pymethods]
impl ExcitationGenerator {
    #[staticmethod]
    fn qubit_single(i: usize, k: usize) -> PyResult<Self> {
        vqe_core::ExcitationGenerator::qubit_single(i, k).map(Self).py()
    }

    #[staticmethod]
    fn qubit_double(i: usize, j: usize, k: usize, l: usize) -> PyResult<Self> {
        vqe_core::ExcitationGenerator::qubit_double(i, j, k, l).map(Self).py()
    }

    #[staticmethod]
    fn fermionic_single(i: usize, k: usize) -> PyResult<Self> {
        vqe_core::ExcitationGenerator::fermionic_single(i, k).map(Self).py()
    }

    #[staticmethod]
    fn fermionic_double(i: usize, j: usize, k: usize, l: usize) -> PyResult<Self> {
        vqe_core::ExcitationGenerator::fermionic_double(i, j, k, l).map(Self).py()
    }

    /// `exp(iθP)` for the Pauli string `P`, e.g. `"X0 Y2"`.
    #[staticmethod]
    fn pauli_exponential(string: &str) -> PyResult<Self> {
        let s: vqe_core::PauliString = string.parse().py()?;
        let factors: Vec<_> = s.factors().collect();
        vqe_core::ExcitationGenerator::pauli_exponential(&factors).map(Self).py()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().name()
    }

    #[getter]
    fn indices(&self) -> Vec<usize> {
        self.0.indices().to_vec()
    }

    #[getter]
    fn cnot_cost(&self) -> usize {
        self.0.cnot_cost()
    }

    fn generator(&self) -> PauliSum {
        PauliSum(self.0.generator().clone())
    }

    fn spin_complement(&self) -> Self {
        Self(self.0.spin_complement())
    }

    fn apply(&self, psi: &StateVector, theta: f64) -> PyResult<StateVector> {
        state::apply_excitation(&self.0, theta, &psi.0).map(StateVector).py()
    }

    /// OPENQASM 2.0 text of the circuit for qubit excitations.
    fn qasm(&self, theta: f64) -> PyResult<String> {
        emit_circuit(&self.0, theta).map(|c| c.to_qasm()).py()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExcitationGenerator({})", self.0)
    }
}

/// Elements of a pool over `n_qubits` qubits.
#[pyfunction]
fn pool(kind: &str, n_qubits: usize) -> PyResult<Vec<ExcitationGenerator>> {
    let p = ExcitationPool::build(pool_kind(kind)?, n_qubits).py()?;
    Ok(p.elements().iter().cloned().map(ExcitationGenerator).collect())
}

#[pyclass(frozen)]
struct Problem(driver::Problem);

#[pymethods]
impl Problem {
    #[staticmethod]
    fn from_fcidump(path: PathBuf) -> PyResult<Self> {
        let ints = MolecularIntegrals::from_fcidump_file(&path).py()?;
        let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture").to_string();
        driver::Problem::new(label, &ints).map(Self).py()
    }

    #[getter]
    fn label(&self) -> &str {
        &self.0.label
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits
    }

    #[getter]
    fn n_electrons(&self) -> usize {
        self.0.n_electrons
    }

    #[getter]
    fn e_hf(&self) -> f64 {
        self.0.e_hf
    }

    #[getter]
    fn e_fci(&self) -> f64 {
        self.0.e_fci
    }

    #[getter]
    fn reference(&self) -> u64 {
        self.0.reference
    }

    fn hamiltonian(&self) -> PauliSum {
        PauliSum(self.0.hamiltonian.clone())
    }
}

#[pyclass(frozen)]
struct RunRecord(CoreRecord);

#[pymethods]
impl RunRecord {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreRecord::from_json(text).map(Self).py()
    }

    #[getter]
    fn method(&self) -> &str {
        &self.0.method
    }

    #[getter]
    fn termination(&self) -> &'static str {
        self.0.termination.name()
    }

    #[getter]
    fn final_energy(&self) -> f64 {
        self.0.final_energy()
    }

    #[getter]
    fn final_error(&self) -> f64 {
        self.0.final_error()
    }

    #[getter]
    fn n_params(&self) -> usize {
        self.0.n_params()
    }

    #[getter]
    fn n_cnots(&self) -> usize {
        self.0.n_cnots()
    }

    #[getter]
    fn n_iterations(&self) -> usize {
        self.0.iterations.len()
    }

    /// Energy after each iteration.
    fn energies(&self) -> Vec<f64> {
        self.0.iterations.iter().map(|r| r.energy).collect()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunRecord(method='{}', iterations={}, error={:.3e})",
            self.0.method,
            self.0.iterations.len(),
            self.0.final_error()
        )
    }
}

fn finish(py: Python<'_>, config: GrowthConfig, target_error: Option<f64>, run: impl FnOnce(&GrowthConfig) -> vqe_core::Result<CoreRecord> + Send) -> PyResult<RunRecord> {
    let config = GrowthConfig { target_error, ..config };
    py.detach(|| run(&config)).map(|r| RunRecord(r.rounded())).py()
}

/// Energy-reduction growth over the qubit-excitation pool.
#[pyfunction]
#[pyo3(signature = (problem, epsilon = 1e-6, top_n = 10, spin_complement = true, max_iterations = 200, target_error = None))]
fn run_iqeb(
    py: Python<'_>,
    problem: &Problem,
    epsilon: f64,
    top_n: usize,
    spin_complement: bool,
    max_iterations: usize,
    target_error: Option<f64>,
) -> PyResult<RunRecord> {
    let config = GrowthConfig {
        n: top_n,
        spin_complement_append: spin_complement,
        max_iterations,
        ..GrowthConfig::iqeb(epsilon)
    };
    finish(py, config, target_error, |c| driver::iqeb_run(&problem.0, c))
}

/// Largest-gradient growth over `pool` (`qubit`, `fermionic`,
/// `fermionic_pairs` or `pauli`).
#[pyfunction]
#[pyo3(signature = (problem, pool, epsilon = 1e-6, max_iterations = 200, target_error = None))]
fn run_greedy(
    py: Python<'_>,
    problem: &Problem,
    pool: &str,
    epsilon: f64,
    max_iterations: usize,
    target_error: Option<f64>,
) -> PyResult<RunRecord> {
    let config = GrowthConfig {
        max_iterations,
        ..GrowthConfig::greedy(pool_kind(pool)?, epsilon)
    };
    let method = format!("greedy-{pool}");
    finish(py, config, target_error, |c| driver::gradient_greedy_run(&problem.0, c, &method))
}

/// Single-Trotter-step UCCSD minimized from zero.
#[pyfunction]
fn run_uccsd(py: Python<'_>, problem: &Problem) -> PyResult<RunRecord> {
    py.detach(|| driver::uccsd_record(&problem.0, &Default::default()))
        .map(|r| RunRecord(r.rounded()))
        .py()
}

#[pymodule]
fn vqe_sim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PauliString>()?;
    m.add_class::<PauliSum>()?;
    m.add_class::<StateVector>()?;
    m.add_class::<ExcitationGenerator>()?;
    m.add_class::<Problem>()?;
    m.add_class::<RunRecord>()?;
    m.add_function(wrap_pyfunction!(pool, m)?)?;
    m.add_function(wrap_pyfunction!(run_iqeb, m)?)?;
    m.add_function(wrap_pyfunction!(run_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(run_uccsd, m)?)?;
    Ok(())
}
