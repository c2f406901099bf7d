//! Molecular integrals, second-quantized operators and the Jordan–Wigner map.
//!
//! Spin-orbital convention: spatial orbital `p` owns spin-orbitals `2p` (α)
//! and `2p + 1` (β), so qubit `i` and its opposite-spin partner differ by one.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Tolerance for symmetry and duplicate-entry checks on integral tables.
pub const INTEGRAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    /// Nuclear repulsion plus any frozen-core constant, Hartree.
    pub core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// Builds integrals from dense tables (`h[p][q]`, chemists' `(pq|rs)` flattened
    /// row-major) and checks the symmetry invariants.
    pub fn new(
        n_spatial: usize,
        n_electrons: usize,
        ms2: i64,
        core_energy: f64,
        one_body: Vec<f64>,
        two_body: Vec<f64>,
    ) -> Result<Self> {
        let n = n_spatial;
        if one_body.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: one_body.len(),
            });
        }
        if two_body.len() != n.pow(4) {
            return Err(Error::LengthMismatch {
                expected: n.pow(4),
                actual: two_body.len(),
            });
        }
        let ints = Self {
            n_spatial,
            n_electrons,
            ms2,
            core_energy,
            one_body,
            two_body,
        };
        ints.validate()?;
        Ok(ints)
    }

    fn validate(&self) -> Result<()> {
        if self.n_electrons == 0 || self.n_electrons > self.n_qubits() {
            return Err(Error::Integrity(format!(
                "{} electrons do not fit {} spin-orbitals",
                self.n_electrons,
                self.n_qubits()
            )));
        }
        let n = self.n_spatial;
        for p in 0..n {
            for q in 0..n {
                if (self.h1(p, q) - self.h1(q, p)).abs() > INTEGRAL_TOL {
                    return Err(Error::Integrity(format!("h[{p}][{q}] is not symmetric")));
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = self.eri(p, q, r, s);
                        let perms = [
                            self.eri(q, p, r, s),
                            self.eri(p, q, s, r),
                            self.eri(r, s, p, q),
                        ];
                        if perms.iter().any(|w| (w - v).abs() > INTEGRAL_TOL) {
                            return Err(Error::Integrity(format!(
                                "({p}{q}|{r}{s}) breaks 8-fold symmetry"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of spin-orbitals, which is also the qubit count.
    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    /// One-body integral `h_pq` over spatial orbitals.
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_spatial + q]
    }

    /// Two-body integral `(pq|rs)` in chemists' notation.
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    pub fn from_fcidump_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_fcidump(&text)
    }
}

/// Parses Molpro-style FCIDUMP text.
///
/// The namelist header must carry `NORB`, `NELEC` and `MS2`; `ORBSYM`/`ISYM`
/// are accepted and ignored. Integral lines are `value i j k l` with 1-based
/// spatial indices; zeros select the core energy (`0 0 0 0`) or one-body
/// terms (`i j 0 0`).
pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let mut lines = text.lines().enumerate();
    let mut header = String::new();
    let mut closed = false;
    for (_, line) in lines.by_ref() {
        let t = line.trim();
        let upper = t.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            header.push_str(&t[..pos]);
            closed = true;
            break;
        }
        if t == "/" || t.ends_with('/') {
            header.push_str(t.trim_end_matches('/'));
            closed = true;
            break;
        }
        header.push_str(t);
        header.push(' ');
    }
    if !closed {
        return Err(Error::parse(None, "FCIDUMP header is not terminated by &END or /"));
    }
    let fields = parse_namelist(&header)?;
    let field = |name: &str| -> Result<i64> {
        let raw = fields
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::parse(None, format!("header field {name} is missing")))?;
        let first = raw.split(',').map(str::trim).find(|s| !s.is_empty()).unwrap_or("");
        first
            .parse::<i64>()
            .map_err(|_| Error::parse(None, format!("header field {name} has malformed value `{raw}`")))
    };
    let norb = field("NORB")?;
    let nelec = field("NELEC")?;
    let ms2 = field("MS2")?;
    if norb <= 0 {
        return Err(Error::parse(None, format!("header field NORB must be positive, got {norb}")));
    }
    if nelec <= 0 {
        return Err(Error::parse(None, format!("header field NELEC must be positive, got {nelec}")));
    }
    let n = norb as usize;

    let mut one_body = vec![0.0; n * n];
    let mut one_set = vec![false; n * n];
    let mut two_body = vec![0.0; n.pow(4)];
    let mut two_set = vec![false; n.pow(4)];
    let mut core_energy: Option<f64> = None;

    let store = |table: &mut [f64], set: &mut [bool], idx: usize, v: f64, line_no: usize| -> Result<()> {
        if set[idx] && (table[idx] - v).abs() > INTEGRAL_TOL {
            return Err(Error::Integrity(format!(
                "line {line_no}: value {v} conflicts with earlier symmetry-equivalent entry {}",
                table[idx]
            )));
        }
        table[idx] = v;
        set[idx] = true;
        Ok(())
    };

    for (i, line) in lines {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::parse(line_no, format!("expected `value i j k l`, got `{t}`")));
        }
        let value: f64 = toks[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad integral value `{}`", toks[0])))?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad orbital index `{tok}`")))?;
            if v < 0 || v > norb {
                return Err(Error::parse(
                    line_no,
                    format!("orbital index {v} out of range [0, {norb}]"),
                ));
            }
            *slot = v as usize;
        }
        match idx {
            [0, 0, 0, 0] => {
                if let Some(prev) = core_energy {
                    if (prev - value).abs() > INTEGRAL_TOL {
                        return Err(Error::Integrity(format!(
                            "line {line_no}: core energy {value} conflicts with {prev}"
                        )));
                    }
                }
                core_energy = Some(value);
            }
            [p, q, 0, 0] if p > 0 && q > 0 => {
                let (p, q) = (p - 1, q - 1);
                store(&mut one_body, &mut one_set, p * n + q, value, line_no)?;
                store(&mut one_body, &mut one_set, q * n + p, value, line_no)?;
            }
            [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                let (p, q, r, s) = (p - 1, q - 1, r - 1, s - 1);
                for (a, b, c, d) in [
                    (p, q, r, s),
                    (q, p, r, s),
                    (p, q, s, r),
                    (q, p, s, r),
                    (r, s, p, q),
                    (s, r, p, q),
                    (r, s, q, p),
                    (s, r, q, p),
                ] {
                    store(&mut two_body, &mut two_set, ((a * n + b) * n + c) * n + d, value, line_no)?;
                }
            }
            // Orbital energies (`i 0 0 0`) and other partial-zero records are not integrals.
            _ => {}
        }
    }

    MolecularIntegrals::new(
        n,
        nelec as usize,
        ms2,
        core_energy.unwrap_or(0.0),
        one_body,
        two_body,
    )
}

/// Splits `&FCI NORB=2,NELEC=2,ORBSYM=1,1, ...` into `(KEY, value)` pairs.
fn parse_namelist(header: &str) -> Result<Vec<(String, String)>> {
    let body = header.trim();
    let body = match body.strip_prefix('&') {
        Some(rest) => rest.trim_start_matches(|c: char| c.is_ascii_alphanumeric()),
        None => body,
    };
    // Locate every `NAME=`; the value runs until the next name.
    let bytes = body.as_bytes();
    let mut keys: Vec<(usize, usize, String)> = Vec::new();
    for (eq, _) in body.match_indices('=') {
        let mut start = eq;
        while start > 0 && (bytes[start - 1].is_ascii_alphanumeric() || bytes[start - 1] == b'_') {
            start -= 1;
        }
        let name = body[start..eq].trim().to_ascii_uppercase();
        if name.is_empty() {
            return Err(Error::parse(None, "header has `=` without a field name"));
        }
        keys.push((start, eq + 1, name));
    }
    let mut out = Vec::with_capacity(keys.len());
    for (n, (_, value_start, name)) in keys.iter().enumerate() {
        let end = keys.get(n + 1).map_or(body.len(), |k| k.0);
        let value = body[*value_start..end].trim().trim_end_matches(',').trim().to_string();
        out.push((name.clone(), value));
    }
    Ok(out)
}

/// One ladder operator: `(spin-orbital, is_creation)`.
pub type Ladder = (usize, bool);

/// A sum of products of fermionic ladder operators, kept exactly as written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    pub terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: impl Into<Complex64>, ladders: Vec<Ladder>) {
        self.terms.push((coeff.into(), ladders));
    }

    pub fn with_term(mut self, coeff: impl Into<Complex64>, ladders: Vec<Ladder>) -> Self {
        self.push(coeff, ladders);
        self
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(_, l)| l.iter().map(|&(i, _)| i)).max()
    }
}

/// Second-quantized electronic Hamiltonian over spin-orbitals:
/// `Σ h_ik a†_i a_k + Σ h_ijkl a†_i a†_j a_k a_l + E_core`, with
/// `h_ik = h_pq δ_σσ'` and `h_ijkl = ½ (il|jk) δ(σ_i,σ_l) δ(σ_j,σ_k)`.
pub fn build_molecular_hamiltonian(ints: &MolecularIntegrals) -> FermionOperator {
    let n = ints.n_spatial;
    let mut op = FermionOperator::new();
    if ints.core_energy != 0.0 {
        op.push(ints.core_energy, Vec::new());
    }
    for p in 0..n {
        for q in 0..n {
            let h = ints.h1(p, q);
            if h == 0.0 {
                continue;
            }
            for sigma in 0..2 {
                op.push(h, vec![(2 * p + sigma, true), (2 * q + sigma, false)]);
            }
        }
    }
    // a†_{pσ} a†_{qτ} a_{rτ} a_{sσ} with coefficient ½ (ps|qr).
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.eri(p, s, q, r);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            let i = 2 * p + sigma;
                            let j = 2 * q + tau;
                            let k = 2 * r + tau;
                            let l = 2 * s + sigma;
                            if i == j || k == l {
                                continue;
                            }
                            op.push(0.5 * v, vec![(i, true), (j, true), (k, false), (l, false)]);
                        }
                    }
                }
            }
        }
    }
    op
}

/// Jordan–Wigner image of a single ladder operator:
/// `a†_i = ½(X_i − iY_i) Z_{i−1}⋯Z_0`, `a_i = ½(X_i + iY_i) Z_{i−1}⋯Z_0`.
pub fn jw_ladder(index: usize, creation: bool, n_qubits: usize) -> Result<PauliSum> {
    if index >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index,
            bound: n_qubits,
        });
    }
    let zmask = (1u64 << index) - 1;
    let bit = 1u64 << index;
    let y_sign = if creation { -0.5 } else { 0.5 };
    Ok(PauliSum::from_terms([
        (Complex64::new(0.5, 0.0), PauliString::from_masks(bit, zmask)),
        (Complex64::new(0.0, y_sign), PauliString::from_masks(bit, zmask | bit)),
    ]))
}

/// Substitutes the Jordan–Wigner ladders into every product and simplifies.
pub fn jw_transform(op: &FermionOperator, n_qubits: usize) -> Result<PauliSum> {
    let mut ladders = Vec::with_capacity(2 * n_qubits);
    for i in 0..n_qubits {
        ladders.push([jw_ladder(i, false, n_qubits)?, jw_ladder(i, true, n_qubits)?]);
    }
    let mut terms: Vec<(Complex64, PauliString)> = Vec::new();
    for (coeff, seq) in &op.terms {
        let mut prod = PauliSum::identity(*coeff);
        for &(i, creation) in seq {
            let l = ladders.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                bound: n_qubits,
            })?;
            prod = prod.multiply(&l[creation as usize]);
            if prod.is_empty() {
                break;
            }
        }
        terms.extend_from_slice(prod.terms());
    }
    Ok(PauliSum::from_terms(terms))
}

/// Qubit Hamiltonian of the molecule: JW image of [`build_molecular_hamiltonian`],
/// with imaginary round-off stripped (the operator is Hermitian).
pub fn qubit_hamiltonian(ints: &MolecularIntegrals) -> PauliSum {
    let f = build_molecular_hamiltonian(ints);
    let h = jw_transform(&f, ints.n_qubits()).expect("indices are below the qubit count");
    PauliSum::from_terms(h.terms().iter().map(|&(c, s)| (Complex64::new(c.re, 0.0), s)))
}

/// Hartree–Fock reference: the lowest `n_electrons` spin-orbitals occupied.
pub fn hartree_fock_reference(n_electrons: usize, n_qubits: usize) -> Result<u64> {
    if n_electrons == 0 || n_electrons > n_qubits || n_qubits > 64 {
        return Err(Error::invalid(format!(
            "cannot place {n_electrons} electrons in {n_qubits} spin-orbitals"
        )));
    }
    Ok(if n_electrons == 64 {
        u64::MAX
    } else {
        (1u64 << n_electrons) - 1
    })
}
