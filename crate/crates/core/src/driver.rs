//! Ansatz-growth loops: energy-reduction selection over the top gradient
//! candidates, plain largest-gradient growth, and a fixed UCCSD baseline.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::excitation::{ansatz_resources, uccsd_excitations, ExcitationGenerator, ExcitationPool, PoolKind};
use crate::fermion::{hartree_fock_reference, qubit_hamiltonian, MolecularIntegrals};
use crate::ground::exact_ground_energy;
use crate::optimizer::{energy, group_gradients, minimize, pool_gradients, prepare_state, Ansatz, OptimizerSettings};
use crate::pauli::PauliSum;
use crate::record::{ChosenElement, IterationRecord, RunRecord, Termination};
use crate::state::{CompiledPauliSum, StateVector};

/// Gradients below this magnitude are treated as round-off.
pub const GRADIENT_FLOOR: f64 = 1e-12;
/// Allowed energy increase between recorded iterations.
pub const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    TopNEnergyReduction,
    LargestGradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub pool_kind: PoolKind,
    pub selection: Selection,
    /// Candidates minimized per iteration under energy-reduction selection.
    pub n: usize,
    /// Exit threshold: on ΔE for energy-reduction selection, on the largest
    /// gradient magnitude for gradient selection.
    pub epsilon: f64,
    pub spin_complement_append: bool,
    pub max_iterations: usize,
    pub optimizer: OptimizerSettings,
    /// Optional early stop once `E − E_FCI` drops to this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_error: Option<f64>,
}

impl GrowthConfig {
    /// Qubit pool, top-10 energy-reduction selection with spin-complement append.
    pub fn iqeb(epsilon: f64) -> Self {
        Self {
            pool_kind: PoolKind::Qubit,
            selection: Selection::TopNEnergyReduction,
            n: 10,
            epsilon,
            spin_complement_append: true,
            max_iterations: 200,
            optimizer: OptimizerSettings::default(),
            target_error: None,
        }
    }

    /// Largest-gradient growth over `pool_kind`.
    pub fn greedy(pool_kind: PoolKind, epsilon: f64) -> Self {
        Self {
            pool_kind,
            selection: Selection::LargestGradient,
            n: 1,
            epsilon,
            spin_complement_append: false,
            max_iterations: 200,
            optimizer: OptimizerSettings::default(),
            target_error: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("candidate count n must be at least 1"));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(())
    }
}

/// Everything a run needs about one molecule, computed once.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub hamiltonian: PauliSum,
    pub compiled: CompiledPauliSum,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub reference: u64,
    pub e_hf: f64,
    pub e_fci: f64,
}

impl Problem {
    pub fn new(label: impl Into<String>, ints: &MolecularIntegrals) -> Result<Self> {
        let hamiltonian = qubit_hamiltonian(ints);
        let (e_hf, e_fci) = reference_energies(&hamiltonian, ints)?;
        Ok(Self {
            label: label.into(),
            compiled: CompiledPauliSum::new(&hamiltonian),
            hamiltonian,
            n_qubits: ints.n_qubits(),
            n_electrons: ints.n_electrons,
            reference: hartree_fock_reference(ints.n_electrons, ints.n_qubits())?,
            e_hf,
            e_fci,
        })
    }
}

/// Hartree–Fock determinant energy and the exact ground energy in the
/// molecule's electron-number sector.
pub fn reference_energies(h: &PauliSum, ints: &MolecularIntegrals) -> Result<(f64, f64)> {
    let nq = ints.n_qubits();
    let hf = StateVector::basis_state(hartree_fock_reference(ints.n_electrons, nq)?, nq)?;
    let e_hf = crate::state::expectation(h, &hf)?;
    let e_fci = exact_ground_energy(h, nq, Some(ints.n_electrons))?;
    Ok((e_hf, e_fci))
}

struct Candidate {
    group: usize,
    ansatz: Ansatz,
    theta: Vec<f64>,
    energy: f64,
}

/// Ansatz extended by one pool group sharing a single new slot.
fn extend(a: &Ansatz, theta: &[f64], pool: &ExcitationPool, group: usize) -> Result<(Ansatz, Vec<f64>)> {
    let mut a = a.clone();
    let slot = a.n_params();
    for &i in &pool.groups()[group] {
        a.push_shared(pool.elements()[i].clone(), slot)?;
    }
    let mut t = theta.to_vec();
    t.push(0.0);
    Ok((a, t))
}

fn chosen_since(a: &Ansatz, start: usize) -> Vec<ChosenElement> {
    a.elements()[start..]
        .iter()
        .zip(&a.slots()[start..])
        .map(|(g, &s)| ChosenElement::new(g, s))
        .collect()
}

fn order_by_gradient(g: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.len()).collect();
    // stable sort keeps the lowest index first among equal magnitudes
    idx.sort_by(|&a, &b| g[b].abs().total_cmp(&g[a].abs()));
    idx
}

struct Screen {
    grads: Vec<f64>,
    max: f64,
    above_floor: usize,
}

fn screen(p: &Problem, a: &Ansatz, theta: &[f64], pool: &ExcitationPool) -> Result<Screen> {
    let psi = prepare_state(a, theta)?;
    let grads = group_gradients(pool, &pool_gradients(&psi, &p.compiled, pool)?);
    let max = grads.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let above_floor = grads.iter().filter(|g| g.abs() >= GRADIENT_FLOOR).count();
    Ok(Screen { grads, max, above_floor })
}

fn new_record(method: &str, p: &Problem, config: &GrowthConfig) -> RunRecord {
    RunRecord {
        method: method.to_string(),
        fixture: p.label.clone(),
        config: serde_json::to_value(config).expect("config serializes"),
        e_hf: p.e_hf,
        e_fci: p.e_fci,
        iterations: Vec::new(),
        termination: Termination::MaxIterations,
        final_delta_e: None,
        final_parameters: Vec::new(),
        notes: Vec::new(),
    }
}

/// Energy-reduction growth: screen gradients, minimize the `n` largest
/// candidates, append the one lowering the energy most, optionally followed by
/// its spin complement with its own parameter.
pub fn iqeb_run(p: &Problem, config: &GrowthConfig) -> Result<RunRecord> {
    config.validate()?;
    let pool = ExcitationPool::build(config.pool_kind, p.n_qubits)?;
    let mut rec = new_record("iqeb", p, config);
    if config.spin_complement_append {
        rec.notes.push("energy recorded after re-optimizing with the spin complement".into());
    }
    let mut ansatz = Ansatz::new(p.n_qubits, p.reference)?;
    let mut theta: Vec<f64> = Vec::new();
    let mut e_prev = p.e_hf;
    for m in 1..=config.max_iterations {
        let t0 = Instant::now();
        let sc = screen(p, &ansatz, &theta, &pool)?;
        if sc.max < GRADIENT_FLOOR {
            rec.termination = Termination::GradientFloor;
            break;
        }
        let mut picks: Vec<usize> = order_by_gradient(&sc.grads).into_iter().take(config.n).collect();
        picks.sort_unstable();
        let results: Vec<Candidate> = picks
            .par_iter()
            .map(|&group| {
                let (a, t) = extend(&ansatz, &theta, &pool, group)?;
                let r = minimize(&a, &t, &p.compiled, &config.optimizer)?;
                Ok(Candidate {
                    group,
                    ansatz: a,
                    theta: r.theta,
                    energy: r.energy,
                })
            })
            .collect::<Result<_>>()?;
        // picks are in pool order, so the first maximum is the lowest index
        let best = results
            .into_iter()
            .reduce(|best, c| if c.energy < best.energy { c } else { best })
            .expect("n >= 1 and the pool is nonempty");
        let delta_e = e_prev - best.energy;
        if delta_e < config.epsilon {
            rec.termination = Termination::EpsilonReached;
            rec.final_delta_e = Some(delta_e);
            break;
        }
        let start = ansatz.len();
        let grad = sc.grads[best.group];
        ansatz = best.ansatz;
        theta = best.theta;
        let mut e_now = best.energy;
        if config.spin_complement_append {
            (e_now, theta) = append_complements(p, config, &mut ansatz, theta, e_now, start)?;
        }
        let (n_cnots, n_params) = ansatz_resources(ansatz.elements(), Some(ansatz.slots()));
        rec.iterations.push(IterationRecord {
            m,
            chosen: chosen_since(&ansatz, start),
            grad,
            delta_e,
            energy: e_now,
            n_params,
            n_cnots,
            max_gradient: sc.max,
            above_floor: sc.above_floor,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
        e_prev = e_now;
        if config.target_error.is_some_and(|t| e_now - p.e_fci <= t) {
            rec.termination = Termination::TargetErrorReached;
            break;
        }
    }
    rec.final_parameters = theta;
    Ok(rec)
}

/// Appends the spin complement of every element added since `start` that is
/// not its own complement, each with an independent slot started at its
/// partner's value, then re-optimizes everything. If that warm start lands
/// above `e_before`, the complements restart from zero, which cannot end higher.
fn append_complements(
    p: &Problem,
    config: &GrowthConfig,
    ansatz: &mut Ansatz,
    theta: Vec<f64>,
    e_before: f64,
    start: usize,
) -> Result<(f64, Vec<f64>)> {
    let added: Vec<(ExcitationGenerator, usize)> = ansatz.elements()[start..]
        .iter()
        .zip(&ansatz.slots()[start..])
        .filter(|(g, _)| !g.is_self_complement())
        .map(|(g, &s)| (g.spin_complement(), s))
        .collect();
    if added.is_empty() {
        return Ok((e_before, theta));
    }
    let mut warm = theta.clone();
    for (c, partner) in added {
        ansatz.push(c)?;
        warm.push(theta[partner]);
    }
    let r = minimize(ansatz, &warm, &p.compiled, &config.optimizer)?;
    if r.energy <= e_before + 1e-12 {
        return Ok((r.energy, r.theta));
    }
    let mut cold = theta.clone();
    cold.resize(ansatz.n_params(), 0.0);
    let r0 = minimize(ansatz, &cold, &p.compiled, &config.optimizer)?;
    Ok(if r0.energy < r.energy { (r0.energy, r0.theta) } else { (r.energy, r.theta) })
}

/// Largest-gradient growth: append the pool element (or parameter group) with
/// the largest screening gradient and re-optimize; exit when that gradient
/// magnitude drops below `epsilon`.
pub fn gradient_greedy_run(p: &Problem, config: &GrowthConfig, method: &str) -> Result<RunRecord> {
    config.validate()?;
    let pool = ExcitationPool::build(config.pool_kind, p.n_qubits)?;
    let mut rec = new_record(method, p, config);
    let mut ansatz = Ansatz::new(p.n_qubits, p.reference)?;
    let mut theta: Vec<f64> = Vec::new();
    let mut e_prev = p.e_hf;
    for m in 1..=config.max_iterations {
        let t0 = Instant::now();
        let sc = screen(p, &ansatz, &theta, &pool)?;
        if sc.max < GRADIENT_FLOOR {
            rec.termination = Termination::GradientFloor;
            break;
        }
        if sc.max < config.epsilon {
            rec.termination = Termination::EpsilonReached;
            rec.final_delta_e = Some(sc.max);
            break;
        }
        let group = order_by_gradient(&sc.grads)[0];
        let start = ansatz.len();
        let (a, t) = extend(&ansatz, &theta, &pool, group)?;
        let r = minimize(&a, &t, &p.compiled, &config.optimizer)?;
        ansatz = a;
        theta = r.theta;
        let (n_cnots, n_params) = ansatz_resources(ansatz.elements(), Some(ansatz.slots()));
        rec.iterations.push(IterationRecord {
            m,
            chosen: chosen_since(&ansatz, start),
            grad: sc.grads[group],
            delta_e: e_prev - r.energy,
            energy: r.energy,
            n_params,
            n_cnots,
            max_gradient: sc.max,
            above_floor: sc.above_floor,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
        e_prev = r.energy;
        if config.target_error.is_some_and(|t| r.energy - p.e_fci <= t) {
            rec.termination = Termination::TargetErrorReached;
            break;
        }
    }
    rec.final_parameters = theta;
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UccsdResult {
    pub energy: f64,
    pub parameter_count: usize,
    pub cnot_total: usize,
    pub theta: Vec<f64>,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// Single-Trotter-step UCCSD: every spin-preserving single and double
/// excitation once, in a fixed order, minimized from zero.
pub fn uccsd_baseline(p: &Problem, optimizer: &OptimizerSettings) -> Result<UccsdResult> {
    let mut a = Ansatz::new(p.n_qubits, p.reference)?;
    for g in uccsd_excitations(p.n_qubits, p.n_electrons)? {
        a.push(g)?;
    }
    let r = minimize(&a, &vec![0.0; a.n_params()], &p.compiled, optimizer)?;
    let (cnot_total, parameter_count) = ansatz_resources(a.elements(), None);
    Ok(UccsdResult {
        energy: r.energy,
        parameter_count,
        cnot_total,
        theta: r.theta,
        evaluations: r.evaluations,
        budget_exhausted: r.budget_exhausted,
    })
}

/// [`uccsd_baseline`] wrapped as a one-iteration [`RunRecord`].
pub fn uccsd_record(p: &Problem, optimizer: &OptimizerSettings) -> Result<RunRecord> {
    let t0 = Instant::now();
    let u = uccsd_baseline(p, optimizer)?;
    let elements = uccsd_excitations(p.n_qubits, p.n_electrons)?;
    let mut rec = RunRecord {
        method: "uccsd".into(),
        fixture: p.label.clone(),
        config: serde_json::json!({ "optimizer": optimizer, "trotter_steps": 1 }),
        e_hf: p.e_hf,
        e_fci: p.e_fci,
        iterations: vec![IterationRecord {
            m: 1,
            chosen: elements.iter().enumerate().map(|(s, g)| ChosenElement::new(g, s)).collect(),
            grad: 0.0,
            delta_e: p.e_hf - u.energy,
            energy: u.energy,
            n_params: u.parameter_count,
            n_cnots: u.cnot_total,
            max_gradient: 0.0,
            above_floor: 0,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        }],
        termination: Termination::Optimized,
        final_delta_e: None,
        final_parameters: u.theta.clone(),
        notes: vec!["single Trotter step of the UCCSD exponential".into()],
    };
    if u.budget_exhausted {
        rec.notes.push("optimizer evaluation budget exhausted".into());
    }
    Ok(rec)
}

/// Rebuilds the final ansatz of a record and evaluates it at the recorded
/// parameters, as an independent check of the reported final energy.
pub fn replay_energy(p: &Problem, rec: &RunRecord) -> Result<f64> {
    let mut a = Ansatz::new(p.n_qubits, p.reference)?;
    for c in rec.iterations.iter().flat_map(|r| &r.chosen) {
        a.push_shared(c.generator()?, c.slot)?;
    }
    energy(&a, &rec.final_parameters, &p.compiled)
}
