//! Per-iteration run records and their JSON and CSV forms.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::excitation::{ExcitationGenerator, ExcitationKind};
use crate::pauli::Pauli;

/// Significant digits kept for every stored real.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    EpsilonReached,
    MaxIterations,
    GradientFloor,
    /// Stopped once the error against the exact energy met a requested target.
    TargetErrorReached,
    /// One-shot baselines that optimize a fixed ansatz.
    Optimized,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::EpsilonReached => "epsilon_reached",
            Termination::MaxIterations => "max_iterations",
            Termination::GradientFloor => "gradient_floor",
            Termination::TargetErrorReached => "target_error_reached",
            Termination::Optimized => "optimized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChosenElement {
    pub kind: ExcitationKind,
    /// Literal index order, which fixes the generator's sign.
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub letters: Option<String>,
    pub slot: usize,
}

impl ChosenElement {
    pub fn new(g: &ExcitationGenerator, slot: usize) -> Self {
        Self {
            kind: g.kind(),
            indices: g.literal_indices().to_vec(),
            letters: (!g.letters().is_empty()).then(|| g.letter_string()),
            slot,
        }
    }

    pub fn generator(&self) -> Result<ExcitationGenerator> {
        let letters: Vec<Pauli> = match &self.letters {
            Some(s) => s
                .chars()
                .map(|c| Pauli::from_letter(c).ok_or_else(|| Error::parse(None, format!("bad Pauli letter `{c}`"))))
                .collect::<Result<_>>()?,
            None => vec![],
        };
        ExcitationGenerator::from_literal(self.kind, &self.indices, &letters)
    }

    fn compact(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let mut s = format!("{}:{}", self.kind.name(), idx.join("-"));
        if let Some(l) = &self.letters {
            s.push(':');
            s.push_str(l);
        }
        s.push_str(&format!("@{}", self.slot));
        s
    }

    fn from_compact(s: &str) -> Result<Self> {
        let bad = || Error::parse(None, format!("bad element descriptor `{s}`"));
        let (body, slot) = s.rsplit_once('@').ok_or_else(bad)?;
        let mut parts = body.split(':');
        let kind_name = parts.next().ok_or_else(bad)?;
        let kind: ExcitationKind = serde_json::from_value(serde_json::Value::String(kind_name.into())).map_err(|_| bad())?;
        let indices = parts
            .next()
            .ok_or_else(bad)?
            .split('-')
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind,
            indices,
            letters: parts.next().map(String::from),
            slot: slot.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub m: usize,
    pub chosen: Vec<ChosenElement>,
    /// Screening gradient of the chosen pool element or group.
    pub grad: f64,
    /// Energy reduction credited to this iteration's selection.
    pub delta_e: f64,
    /// Energy after all optimization in this iteration.
    pub energy: f64,
    pub n_params: usize,
    pub n_cnots: usize,
    /// Largest screening-gradient magnitude over the pool.
    pub max_gradient: f64,
    /// Pool entries whose gradient magnitude exceeds the floor.
    pub above_floor: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub fixture: String,
    pub config: serde_json::Value,
    pub e_hf: f64,
    pub e_fci: f64,
    pub iterations: Vec<IterationRecord>,
    pub termination: Termination,
    /// ΔE or gradient value that triggered the exit, when applicable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_delta_e: Option<f64>,
    /// Optimized parameters of the final ansatz, indexed by slot.
    #[serde(default)]
    pub final_parameters: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunRecord {
    pub fn final_energy(&self) -> f64 {
        self.iterations.last().map_or(self.e_hf, |r| r.energy)
    }

    pub fn final_error(&self) -> f64 {
        self.final_energy() - self.e_fci
    }

    pub fn n_params(&self) -> usize {
        self.iterations.last().map_or(0, |r| r.n_params)
    }

    pub fn n_cnots(&self) -> usize {
        self.iterations.last().map_or(0, |r| r.n_cnots)
    }

    /// First iteration whose energy is within `tol` of the exact energy.
    pub fn first_within(&self, tol: f64) -> Option<&IterationRecord> {
        self.iterations.iter().find(|r| r.energy - self.e_fci <= tol)
    }

    /// Rounds every stored real to [`SIGNIFICANT_DIGITS`].
    pub fn rounded(mut self) -> Self {
        self.e_hf = round_sig(self.e_hf);
        self.e_fci = round_sig(self.e_fci);
        self.final_delta_e = self.final_delta_e.map(round_sig);
        self.final_parameters.iter_mut().for_each(|t| *t = round_sig(*t));
        for r in &mut self.iterations {
            r.grad = round_sig(r.grad);
            r.delta_e = round_sig(r.delta_e);
            r.energy = round_sig(r.energy);
            r.max_gradient = round_sig(r.max_gradient);
            r.wall_ms = round_sig(r.wall_ms);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(Some(e.line()), e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.iterations {
            w.serialize(CsvRow {
                method: &self.method,
                fixture: &self.fixture,
                e_hf: self.e_hf,
                e_fci: self.e_fci,
                termination: self.termination.name(),
                m: r.m,
                chosen: r.chosen.iter().map(ChosenElement::compact).collect::<Vec<_>>().join(";"),
                grad: r.grad,
                delta_e: r.delta_e,
                energy: r.energy,
                n_params: r.n_params,
                n_cnots: r.n_cnots,
                max_gradient: r.max_gradient,
                above_floor: r.above_floor,
                wall_ms: r.wall_ms,
            })
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Iterations recovered from [`Self::to_csv`] output.
    pub fn iterations_from_csv(text: &str) -> Result<Vec<IterationRecord>> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let mut out = Vec::new();
        for (i, row) in rd.deserialize::<CsvRowOwned>().enumerate() {
            let row = row.map_err(|e| Error::parse(i + 2, e.to_string()))?;
            out.push(IterationRecord {
                m: row.m,
                chosen: row
                    .chosen
                    .split(';')
                    .filter(|s| !s.is_empty())
                    .map(ChosenElement::from_compact)
                    .collect::<Result<_>>()?,
                grad: row.grad,
                delta_e: row.delta_e,
                energy: row.energy,
                n_params: row.n_params,
                n_cnots: row.n_cnots,
                max_gradient: row.max_gradient,
                above_floor: row.above_floor,
                wall_ms: row.wall_ms,
            });
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    method: &'a str,
    fixture: &'a str,
    e_hf: f64,
    e_fci: f64,
    termination: &'a str,
    m: usize,
    chosen: String,
    grad: f64,
    delta_e: f64,
    energy: f64,
    n_params: usize,
    n_cnots: usize,
    max_gradient: f64,
    above_floor: usize,
    wall_ms: f64,
}

#[derive(Deserialize)]
struct CsvRowOwned {
    m: usize,
    chosen: String,
    grad: f64,
    delta_e: f64,
    energy: f64,
    n_params: usize,
    n_cnots: usize,
    max_gradient: f64,
    above_floor: usize,
    wall_ms: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(-1.137306035753396), -1.13730603575);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(1.234e-9), 1.234e-9);
    }

    #[test]
    fn compact_round_trip() {
        let g = ExcitationGenerator::pauli_exponential(&[(1, Pauli::X), (4, Pauli::Y)]).unwrap();
        let c = ChosenElement::new(&g, 3);
        assert_eq!(c.compact(), "pauli_exponential:1-4:XY@3");
        assert_eq!(ChosenElement::from_compact(&c.compact()).unwrap(), c);
        assert_eq!(c.generator().unwrap(), g);
        let d = ChosenElement::new(&ExcitationGenerator::qubit_double(3, 2, 1, 0).unwrap(), 0);
        assert_eq!(d.compact(), "qubit_double:3-2-1-0@0");
        assert_eq!(ChosenElement::from_compact(&d.compact()).unwrap(), d);
    }
}
