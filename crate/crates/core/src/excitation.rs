//! Excitation generators, operator pools and their resource counts.
//!
//! Every generator is built from its literal operator definition (ladder
//! products minus their adjoint). The stored `indices` are canonical: pairs
//! sorted, and for doubles the lexicographically smaller pair first. Two
//! generators are the same pool element when kind, canonical indices and
//! letters agree; reorderings that only flip the overall sign count as equal.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::jw_ladder;
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::state::FlipOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcitationKind {
    QubitSingle,
    QubitDouble,
    FermionicSingle,
    FermionicDouble,
    PauliExponential,
}

impl ExcitationKind {
    pub fn name(self) -> &'static str {
        match self {
            ExcitationKind::QubitSingle => "qubit_single",
            ExcitationKind::QubitDouble => "qubit_double",
            ExcitationKind::FermionicSingle => "fermionic_single",
            ExcitationKind::FermionicDouble => "fermionic_double",
            ExcitationKind::PauliExponential => "pauli_exponential",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExcitationGenerator {
    kind: ExcitationKind,
    indices: Vec<usize>,
    literal: Vec<usize>,
    letters: Vec<Pauli>,
    generator: PauliSum,
    action: FlipOperator,
    cnot_cost: usize,
}

impl PartialEq for ExcitationGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.indices == other.indices && self.letters == other.letters
    }
}

impl Eq for ExcitationGenerator {}

impl std::hash::Hash for ExcitationGenerator {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.indices.hash(state);
        self.letters.hash(state);
    }
}

/// Qubit annihilator `Q = ½(X + iY) = |0⟩⟨1|` and its adjoint.
fn qubit_ladder(q: usize, creation: bool) -> PauliSum {
    let y = if creation { -0.5 } else { 0.5 };
    PauliSum::from_terms([
        (Complex64::new(0.5, 0.0), PauliString::single(q, Pauli::X)),
        (Complex64::new(0.0, y), PauliString::single(q, Pauli::Y)),
    ])
}

/// `Π create† · Π annihilate − (that)†`.
fn ladder_difference(create: &[usize], annihilate: &[usize], ladder: impl Fn(usize, bool) -> PauliSum) -> PauliSum {
    let mut prod = PauliSum::identity(1.0);
    for &i in create {
        prod = prod.multiply(&ladder(i, true));
    }
    for &i in annihilate {
        prod = prod.multiply(&ladder(i, false));
    }
    &prod - &prod.adjoint()
}

fn check_distinct(idx: &[usize]) -> Result<()> {
    for (a, &i) in idx.iter().enumerate() {
        if i >= 64 {
            return Err(Error::IndexOutOfRange { index: i, bound: 64 });
        }
        if idx[..a].contains(&i) {
            return Err(Error::invalid(format!("repeated index {i} in {idx:?}")));
        }
    }
    Ok(())
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

fn canonical_double(i: usize, j: usize, k: usize, l: usize) -> Vec<usize> {
    let (p, q) = (sorted2(i, j), sorted2(k, l));
    if q < p { [q, p].concat() } else { [p, q].concat() }
}

impl ExcitationGenerator {
    fn build(
        kind: ExcitationKind,
        indices: Vec<usize>,
        literal: Vec<usize>,
        letters: Vec<Pauli>,
        generator: PauliSum,
        cnot_cost: usize,
    ) -> Self {
        let action_op = match kind {
            ExcitationKind::PauliExponential => generator.scale(Complex64::new(0.0, 1.0)),
            _ => generator.clone(),
        };
        let action = FlipOperator::from_pauli_sum(&action_op).expect("excitations flip one fixed set of qubits");
        Self {
            kind,
            indices,
            literal,
            letters,
            generator,
            action,
            cnot_cost,
        }
    }

    /// `T̃_ik = Q†_i Q_k − Q†_k Q_i`.
    pub fn qubit_single(i: usize, k: usize) -> Result<Self> {
        check_distinct(&[i, k])?;
        let g = ladder_difference(&[i], &[k], qubit_ladder);
        Ok(Self::build(
            ExcitationKind::QubitSingle,
            sorted2(i, k).to_vec(),
            vec![i, k],
            vec![],
            g,
            2,
        ))
    }

    /// `T̃_ijkl = Q†_i Q†_j Q_k Q_l − Q†_k Q†_l Q_i Q_j`.
    pub fn qubit_double(i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        check_distinct(&[i, j, k, l])?;
        let g = ladder_difference(&[i, j], &[k, l], qubit_ladder);
        Ok(Self::build(
            ExcitationKind::QubitDouble,
            canonical_double(i, j, k, l),
            vec![i, j, k, l],
            vec![],
            g,
            13,
        ))
    }

    /// `T_ik = a†_i a_k − a†_k a_i` under Jordan–Wigner.
    pub fn fermionic_single(i: usize, k: usize) -> Result<Self> {
        check_distinct(&[i, k])?;
        let n = i.max(k) + 1;
        let g = ladder_difference(&[i], &[k], |q, c| jw_ladder(q, c, n).expect("index below n"));
        let [a, b] = sorted2(i, k);
        Ok(Self::build(
            ExcitationKind::FermionicSingle,
            vec![a, b],
            vec![i, k],
            vec![],
            g,
            2 * (b - a) + 1,
        ))
    }

    /// `T_ijkl = a†_i a†_j a_k a_l − a†_k a†_l a_i a_j` under Jordan–Wigner.
    pub fn fermionic_double(i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        check_distinct(&[i, j, k, l])?;
        let n = i.max(j).max(k).max(l) + 1;
        let g = ladder_difference(&[i, j], &[k, l], |q, c| jw_ladder(q, c, n).expect("index below n"));
        let mut s = [i, j, k, l];
        s.sort_unstable();
        let cost = 2 * (s[3] + s[1] - s[0] - s[2]) + 9;
        Ok(Self::build(
            ExcitationKind::FermionicDouble,
            canonical_double(i, j, k, l),
            vec![i, j, k, l],
            vec![],
            g,
            cost,
        ))
    }

    /// A single Pauli string `P`, applied as `exp(iθP)`.
    pub fn pauli_exponential(factors: &[(usize, Pauli)]) -> Result<Self> {
        let p = PauliString::from_factors(factors.iter().copied())?;
        if p.is_identity() {
            return Err(Error::invalid("identity is not an excitation"));
        }
        let (indices, letters): (Vec<_>, Vec<_>) = p.factors().unzip();
        let cost = 2 * (indices.len() - 1);
        Ok(Self::build(
            ExcitationKind::PauliExponential,
            indices.clone(),
            indices,
            letters,
            PauliSum::from(p),
            cost,
        ))
    }

    /// Rebuilds a generator of `kind` from its literal index order.
    pub fn from_literal(kind: ExcitationKind, literal: &[usize], letters: &[Pauli]) -> Result<Self> {
        let arity = |n: usize| {
            if literal.len() == n {
                Ok(())
            } else {
                Err(Error::invalid(format!("{} takes {n} indices, got {}", kind.name(), literal.len())))
            }
        };
        match kind {
            ExcitationKind::QubitSingle => arity(2).and_then(|_| Self::qubit_single(literal[0], literal[1])),
            ExcitationKind::QubitDouble => {
                arity(4).and_then(|_| Self::qubit_double(literal[0], literal[1], literal[2], literal[3]))
            }
            ExcitationKind::FermionicSingle => arity(2).and_then(|_| Self::fermionic_single(literal[0], literal[1])),
            ExcitationKind::FermionicDouble => {
                arity(4).and_then(|_| Self::fermionic_double(literal[0], literal[1], literal[2], literal[3]))
            }
            ExcitationKind::PauliExponential => {
                if letters.len() != literal.len() {
                    return Err(Error::LengthMismatch {
                        expected: literal.len(),
                        actual: letters.len(),
                    });
                }
                let f: Vec<_> = literal.iter().copied().zip(letters.iter().copied()).collect();
                Self::pauli_exponential(&f)
            }
        }
    }

    pub fn kind(&self) -> ExcitationKind {
        self.kind
    }

    /// Canonical indices used for identity and reporting.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Index order the operator was built from; fixes its sign.
    pub fn literal_indices(&self) -> &[usize] {
        &self.literal
    }

    /// Pauli letters aligned with [`Self::indices`]; empty except for Pauli exponentials.
    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter_string(&self) -> String {
        self.letters.iter().map(|p| p.letter()).collect()
    }

    /// Skew-Hermitian `T` for ladder kinds, Hermitian `P` for Pauli exponentials.
    pub fn generator(&self) -> &PauliSum {
        &self.generator
    }

    /// The skew-Hermitian operator `T` with `U(θ) = exp(θT)`.
    pub fn skew_generator(&self) -> PauliSum {
        match self.kind {
            ExcitationKind::PauliExponential => self.generator.scale(Complex64::new(0.0, 1.0)),
            _ => self.generator.clone(),
        }
    }

    pub fn action(&self) -> &FlipOperator {
        &self.action
    }

    pub fn cnot_cost(&self) -> usize {
        self.cnot_cost
    }

    pub fn max_qubit(&self) -> usize {
        *self.indices.iter().max().expect("nonempty")
    }

    /// Same operator with every spin-orbital swapped for its opposite-spin
    /// partner (`2p ↔ 2p+1`), keeping the literal order and hence the sign.
    pub fn spin_complement(&self) -> Self {
        let lit: Vec<usize> = self.literal.iter().map(|&i| i ^ 1).collect();
        let letters: Vec<Pauli> = if self.kind == ExcitationKind::PauliExponential {
            // keep each letter attached to its (mapped) qubit
            let mut f: Vec<(usize, Pauli)> = lit.iter().copied().zip(self.letters.iter().copied()).collect();
            f.sort_unstable();
            let (q, l): (Vec<_>, Vec<_>) = f.into_iter().unzip();
            return Self::from_literal(self.kind, &q, &l).expect("complement of a valid element");
        } else {
            vec![]
        };
        Self::from_literal(self.kind, &lit, &letters).expect("complement of a valid element")
    }

    pub fn is_self_complement(&self) -> bool {
        self.spin_complement() == *self
    }
}

impl fmt::Display for ExcitationGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}({})", self.kind.name(), idx.join(","))?;
        if !self.letters.is_empty() {
            write!(f, "[{}]", self.letter_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    Qubit,
    Fermionic,
    FermionicSpinComplementPairs,
    PauliExponential,
}

/// An ordered pool. `groups` partitions the elements into parameter groups:
/// singletons, except in the spin-complement-pair pool.
#[derive(Debug, Clone)]
pub struct ExcitationPool {
    kind: PoolKind,
    elements: Vec<ExcitationGenerator>,
    groups: Vec<Vec<usize>>,
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

fn quads(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

/// Singles over all index pairs, then the three pair partitions of every 4-subset.
fn ladder_pool(
    n: usize,
    single: fn(usize, usize) -> Result<ExcitationGenerator>,
    double: fn(usize, usize, usize, usize) -> Result<ExcitationGenerator>,
) -> Result<Vec<ExcitationGenerator>> {
    let mut out = Vec::new();
    for (a, b) in pairs(n) {
        out.push(single(a, b)?);
    }
    for [a, b, c, d] in quads(n) {
        out.push(double(a, b, c, d)?);
        out.push(double(a, c, b, d)?);
        out.push(double(a, d, b, c)?);
    }
    Ok(out)
}

fn pauli_pool(n: usize) -> Result<Vec<ExcitationGenerator>> {
    use Pauli::{X, Y};
    let mut out = Vec::new();
    for (a, b) in pairs(n) {
        for l in [[X, Y], [Y, X]] {
            out.push(ExcitationGenerator::pauli_exponential(&[(a, l[0]), (b, l[1])])?);
        }
    }
    for q in quads(n) {
        for bits in 0u32..16 {
            if bits.count_ones() % 2 == 1 {
                // most significant bit is the first qubit, so X < Y order holds
                let f: Vec<(usize, Pauli)> = (0..4)
                    .map(|t| (q[t], if bits >> (3 - t) & 1 == 1 { Y } else { X }))
                    .collect();
                out.push(ExcitationGenerator::pauli_exponential(&f)?);
            }
        }
    }
    Ok(out)
}

impl ExcitationPool {
    pub fn build(kind: PoolKind, n_qubits: usize) -> Result<Self> {
        if !(2..=64).contains(&n_qubits) {
            return Err(Error::invalid(format!("pool needs 2..=64 qubits, got {n_qubits}")));
        }
        let elements = match kind {
            PoolKind::Qubit => ladder_pool(n_qubits, ExcitationGenerator::qubit_single, ExcitationGenerator::qubit_double)?,
            PoolKind::Fermionic | PoolKind::FermionicSpinComplementPairs => ladder_pool(
                n_qubits,
                ExcitationGenerator::fermionic_single,
                ExcitationGenerator::fermionic_double,
            )?,
            PoolKind::PauliExponential => pauli_pool(n_qubits)?,
        };
        if kind != PoolKind::FermionicSpinComplementPairs {
            let groups = (0..elements.len()).map(|i| vec![i]).collect();
            return Ok(Self { kind, elements, groups });
        }
        let mut seen = std::collections::HashSet::new();
        let mut paired = Vec::new();
        let mut groups = Vec::new();
        for g in elements {
            if !seen.insert(g.clone()) {
                continue;
            }
            let c = g.spin_complement();
            let start = paired.len();
            paired.push(g);
            if seen.insert(c.clone()) {
                paired.push(c);
            }
            groups.push((start..paired.len()).collect());
        }
        Ok(Self {
            kind,
            elements: paired,
            groups,
        })
    }

    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn elements(&self) -> &[ExcitationGenerator] {
        &self.elements
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &ExcitationGenerator) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }
}

/// Total CNOT count and number of independent parameters of an ansatz.
/// `slots[i]` is the parameter slot of element `i`; `None` means one per element.
pub fn ansatz_resources(elements: &[ExcitationGenerator], slots: Option<&[usize]>) -> (usize, usize) {
    let cnots = elements.iter().map(|g| g.cnot_cost()).sum();
    let params = match slots {
        Some(s) => s.iter().collect::<std::collections::BTreeSet<_>>().len(),
        None => elements.len(),
    };
    (cnots, params)
}

/// Spin-preserving singles and doubles from the occupied to the virtual
/// spin-orbitals of the lowest-filling reference, as fermionic generators.
/// Order: singles, then αα, ββ and αβ doubles, each lexicographic.
pub fn uccsd_excitations(n_qubits: usize, n_electrons: usize) -> Result<Vec<ExcitationGenerator>> {
    if n_electrons == 0 || n_electrons >= n_qubits || n_qubits > 64 {
        return Err(Error::invalid(format!(
            "no excitations for {n_electrons} electrons in {n_qubits} spin-orbitals"
        )));
    }
    let occ: Vec<usize> = (0..n_electrons).collect();
    let virt: Vec<usize> = (n_electrons..n_qubits).collect();
    let spin = |p: usize| p & 1;
    let mut out = Vec::new();
    for &i in &occ {
        for &a in &virt {
            if spin(i) == spin(a) {
                out.push(ExcitationGenerator::fermionic_single(a, i)?);
            }
        }
    }
    let occ_pairs: Vec<(usize, usize)> = pairs(occ.len()).map(|(x, y)| (occ[x], occ[y])).collect();
    let virt_pairs: Vec<(usize, usize)> = pairs(virt.len()).map(|(x, y)| (virt[x], virt[y])).collect();
    // spin pattern of a pair: 0 = αα, 1 = ββ, 2 = αβ
    let pattern = |(p, q): (usize, usize)| match (spin(p), spin(q)) {
        (0, 0) => 0,
        (1, 1) => 1,
        _ => 2,
    };
    for pat in 0..3 {
        for &(i, j) in occ_pairs.iter().filter(|&&p| pattern(p) == pat) {
            for &(a, b) in virt_pairs.iter().filter(|&&p| pattern(p) == pat) {
                out.push(ExcitationGenerator::fermionic_double(a, b, i, j)?);
            }
        }
    }
    Ok(out)
}

/// Closed-form UCCSD parameter count for `n` spin-orbitals and `ne` electrons
/// in a closed-shell reference.
pub fn uccsd_parameter_count(n: usize, ne: usize) -> usize {
    let v = n - ne;
    // ½ v ne + ⅛ v (v/2 − 1) ne (ne/2 − 1) + (1/16) v² ne², all exact in integers ×16
    let total = 8 * v * ne + 2 * v * (v / 2).saturating_sub(1) * ne * (ne / 2).saturating_sub(1) + v * v * ne * ne;
    total / 16
}
