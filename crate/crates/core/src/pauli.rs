//! Pauli strings and weighted Pauli sums.
//!
//! A [`PauliString`] is stored in symplectic form: bit `q` of `x` is set for
//! X or Y on qubit `q`, bit `q` of `z` for Z or Y. Qubits carrying identity
//! are simply absent. A [`PauliSum`] keeps its terms merged and sorted in the
//! canonical order, so two sums describing the same operator compare equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped by arithmetic results.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Largest number of qubits a [`PauliString`] can address.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Powers of the imaginary unit, `I_POW[k] = i^k`.
const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub(crate) fn i_pow(k: u32) -> Complex64 {
    I_POW[(k & 3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        assert!(qubit < MAX_QUBITS, "qubit {qubit} exceeds {MAX_QUBITS}");
        let bit = 1u64 << qubit;
        match pauli {
            Pauli::X => Self { x: bit, z: 0 },
            Pauli::Y => Self { x: bit, z: bit },
            Pauli::Z => Self { x: 0, z: bit },
        }
    }

    /// Builds a string from `(qubit, letter)` factors. Each qubit may appear once.
    pub fn from_factors<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Pauli)>,
    {
        let mut s = Self::identity();
        for (q, p) in factors {
            if q >= MAX_QUBITS {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    bound: MAX_QUBITS,
                });
            }
            if s.get(q).is_some() {
                return Err(Error::invalid(format!("qubit {q} repeated in Pauli string")));
            }
            let f = Self::single(q, p);
            s.x |= f.x;
            s.z |= f.z;
        }
        Ok(s)
    }

    /// Raw symplectic masks `(x, z)`.
    pub fn masks(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn from_masks(x: u64, z: u64) -> Self {
        Self { x, z }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    /// Number of Y factors.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        if qubit >= MAX_QUBITS {
            return None;
        }
        let bit = 1u64 << qubit;
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }

    /// Non-identity factors in ascending qubit order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        let mut rest = self.support();
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some((q, self.get(q).expect("bit is in support")))
        })
    }

    /// Highest qubit index acted on, `None` for the identity.
    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Operator product `self · other = phase · product`.
    pub fn mul(&self, other: &Self) -> (Complex64, PauliString) {
        let (k, p) = self.mul_exponent(other);
        (i_pow(k), p)
    }

    /// Like [`mul`](Self::mul), returning the phase as a power of `i`.
    pub fn mul_exponent(&self, other: &Self) -> (u32, PauliString) {
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let product = PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        let k = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - product.y_count();
        (k & 3, product)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors().cmp(other.factors())
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (q, p) in self.factors() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.letter(), q)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses whitespace-separated factors such as `"X0 Y1 Z3"`; `"I"` or an
    /// empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let letter = chars
                .next()
                .and_then(Pauli::from_letter)
                .ok_or_else(|| Error::parse(None, format!("bad Pauli factor `{tok}`")))?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::parse(None, format!("bad qubit index in `{tok}`")))?;
            factors.push((q, letter));
        }
        Self::from_factors(factors)
    }
}

/// A complex-weighted sum of Pauli strings in canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coeff: impl Into<Complex64>) -> Self {
        Self::from_terms([(coeff.into(), PauliString::identity())])
    }

    pub fn term(coeff: impl Into<Complex64>, string: PauliString) -> Self {
        Self::from_terms([(coeff.into(), string)])
    }

    /// Merges duplicate strings and drops coefficients below [`DEFAULT_FLOOR`].
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, PauliString)>,
    {
        Self::collect(terms, DEFAULT_FLOOR)
    }

    fn collect<I>(terms: I, floor: f64) -> Self
    where
        I: IntoIterator<Item = (Complex64, PauliString)>,
    {
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (c, s) in terms {
            *acc.entry(s).or_default() += c;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= floor && c.norm() > 0.0)
            .map(|(s, c)| (c, s))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|(_, s)| s.cmp(string))
            .map(|i| self.terms[i].0)
            .unwrap_or_default()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(_, s)| s.max_qubit()).max()
    }

    /// Merges duplicates, removes terms with `|c| < floor`, restores canonical order.
    pub fn simplify(&self, floor: f64) -> Self {
        Self::collect(self.terms.iter().copied(), floor)
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        Self::from_terms(self.terms.iter().map(|&(c, s)| (c * f, s)))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, s)| (c.conj(), s)).collect(),
        }
    }

    /// `self · other`, simplified.
    pub fn multiply(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|&(ca, sa)| {
            other.terms.iter().map(move |&(cb, sb)| {
                let (k, s) = sa.mul_exponent(&sb);
                (ca * cb * i_pow(k), s)
            })
        }))
    }

    /// `self · other − other · self`. Commuting string pairs contribute nothing,
    /// anticommuting pairs contribute `2ab`, so cancellations are exact.
    pub fn commutator(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|&(ca, sa)| {
            other.terms.iter().filter_map(move |&(cb, sb)| {
                if sa.commutes_with(&sb) {
                    return None;
                }
                let (k, s) = sa.mul_exponent(&sb);
                Some((2.0 * ca * cb * i_pow(k), s))
            })
        }))
    }

    /// True when every coefficient is real within `tol`; Pauli strings are
    /// themselves Hermitian, so this is the Hermiticity test.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() <= tol)
    }

    /// True when every coefficient is imaginary within `tol`.
    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.re.abs() <= tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = self - other;
        diff.terms.iter().all(|(c, _)| c.norm() <= tol)
    }
}

impl From<PauliString> for PauliSum {
    fn from(s: PauliString) -> Self {
        PauliSum::term(1.0, s)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (c, s)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:+.12e}{:+.12e}i) [{}]", c.re, c.im, s)?;
        }
        Ok(())
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(
            self.terms
                .iter()
                .copied()
                .chain(rhs.terms.iter().map(|&(c, s)| (-c, s))),
        )
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.multiply(rhs)
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        PauliSum {
            terms: self.terms.iter().map(|&(c, s)| (-c, s)).collect(),
        }
    }
}

impl Add for PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: PauliSum) -> PauliSum {
        &self + &rhs
    }
}

impl Sub for PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: PauliSum) -> PauliSum {
        &self - &rhs
    }
}

impl Mul for PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: PauliSum) -> PauliSum {
        self.multiply(&rhs)
    }
}

impl Neg for PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(ps("X0").mul(&ps("Y0")), (c(0.0, 1.0), ps("Z0")));
        assert_eq!(ps("Y0").mul(&ps("X0")), (c(0.0, -1.0), ps("Z0")));
        assert_eq!(ps("X0").mul(&ps("X0")), (c(1.0, 0.0), PauliString::identity()));
        assert_eq!(ps("Z0").mul(&ps("X0")), (c(0.0, 1.0), ps("Y0")));
        assert_eq!(ps("Y0").mul(&ps("Z0")), (c(0.0, 1.0), ps("X0")));
    }

    #[test]
    fn factorwise_product_drops_identity() {
        let (phase, p) = ps("X0 Z1").mul(&ps("Y0 Z1"));
        assert_eq!(phase, c(0.0, 1.0));
        assert_eq!(p, ps("Z0"));
        assert_eq!(p.get(1), None);
    }

    #[test]
    fn canonical_order() {
        let mut v = [ps("X1"), ps("Z0"), ps("X0 Z1"), ps("Y0"), ps("X0"), PauliString::identity()];
        v.sort();
        let shown: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["I", "X0", "X0 Z1", "Y0", "Z0", "X1"]);
    }

    #[test]
    fn add_merges_coefficients() {
        let x0 = PauliSum::from(ps("X0"));
        let sum = &x0 + &x0;
        assert_eq!(sum.terms(), &[(c(2.0, 0.0), ps("X0"))]);
    }

    #[test]
    fn ladder_product_is_projector() {
        // ½(X − iY) · ½(X + iY) = |1⟩⟨1| = ½(I − Z)
        let create = PauliSum::from_terms([(c(0.5, 0.0), ps("X0")), (c(0.0, -0.5), ps("Y0"))]);
        let annihilate = PauliSum::from_terms([(c(0.5, 0.0), ps("X0")), (c(0.0, 0.5), ps("Y0"))]);
        let expected =
            PauliSum::from_terms([(c(0.5, 0.0), PauliString::identity()), (c(-0.5, 0.0), ps("Z0"))]);
        assert_eq!(&create * &annihilate, expected);
    }

    #[test]
    fn scaling_by_zero_empties() {
        let s = PauliSum::from_terms([(c(1.0, 0.0), ps("X0")), (c(1.0, 0.0), ps("Y1"))]);
        assert!(s.scale(0.0).is_empty());
    }

    #[test]
    fn commutators() {
        let x = PauliSum::from(ps("X0"));
        let y = PauliSum::from(ps("Y0"));
        assert_eq!(x.commutator(&y), PauliSum::term(c(0.0, 2.0), ps("Z0")));
        let z0 = PauliSum::from(ps("Z0"));
        let x1 = PauliSum::from(ps("X1"));
        assert!(z0.commutator(&x1).is_empty());
    }

    #[test]
    fn commutator_with_single_excitation() {
        // T = −(i/2)(X0Y1 − Y0X1); [Z0, T] = X0X1 + Y0Y1 (Hermitian, as it must be).
        let t = PauliSum::from_terms([(c(0.0, -0.5), ps("X0 Y1")), (c(0.0, 0.5), ps("Y0 X1"))]);
        let z0 = PauliSum::from(ps("Z0"));
        let expected = PauliSum::from_terms([(c(1.0, 0.0), ps("X0 X1")), (c(1.0, 0.0), ps("Y0 Y1"))]);
        assert_eq!(z0.commutator(&t), expected);
    }

    #[test]
    fn simplify_cases() {
        let x = PauliSum::from(ps("X0"));
        let cancelled = &(&x + &x) - &x.scale(2.0);
        assert!(cancelled.is_empty());

        let raw = PauliSum {
            terms: vec![(c(1e-15, 0.0), ps("Z0"))],
        };
        assert!(raw.simplify(1e-12).is_empty());

        let unordered = PauliSum {
            terms: vec![(c(1.0, 0.0), ps("Y0")), (c(1.0, 0.0), ps("X0"))],
        };
        let s = unordered.simplify(DEFAULT_FLOOR);
        assert_eq!(s.terms()[0].1, ps("X0"));
        assert_eq!(s.terms()[1].1, ps("Y0"));
    }

    #[test]
    fn hermiticity_predicate() {
        let h = PauliSum::from_terms([(c(0.3, 0.0), ps("X0 Y1")), (c(-1.0, 0.0), ps("Z2"))]);
        assert!(h.is_hermitian(1e-12));
        assert!(!h.scale(c(0.0, 1.0)).is_hermitian(1e-12));
    }

    #[test]
    fn rejects_repeated_qubit() {
        assert!("X0 Z0".parse::<PauliString>().is_err());
    }
}
