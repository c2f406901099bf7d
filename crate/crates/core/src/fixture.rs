//! Reference-data files shipped next to the FCIDUMP fixtures.
//!
//! A fixture manifest is a `key = value` file describing one geometry.
//! A sweep manifest lists one geometry per line:
//! `<bond_length_angstrom> <fcidump_path> [scf_energy] [fci_energy]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureManifest {
    pub name: String,
    pub bond_length: f64,
    pub scf_energy: f64,
    pub fci_energy: Option<f64>,
    pub source: String,
    /// Every key as read, including ones without a dedicated field.
    pub entries: BTreeMap<String, String>,
}

impl FixtureManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, got `{t}`")))?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| -> Result<&String> {
            entries
                .get(k)
                .ok_or_else(|| Error::parse(None, format!("manifest key `{k}` is missing")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?
                .parse()
                .map_err(|_| Error::parse(None, format!("manifest key `{k}` is not a number")))
        };
        Ok(Self {
            name: get("name")?.clone(),
            bond_length: num("bond_length_angstrom")?,
            scf_energy: num("scf_energy")?,
            fci_energy: entries.get("fci_energy").map(|_| num("fci_energy")).transpose()?,
            source: entries.get("source").cloned().unwrap_or_default(),
            entries,
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read(path.as_ref())?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub bond_length: f64,
    pub fcidump: PathBuf,
    pub scf_energy: Option<f64>,
    pub fci_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepManifest {
    pub molecule: String,
    pub points: Vec<SweepPoint>,
}

impl SweepManifest {
    /// Relative FCIDUMP paths are resolved against `base_dir`.
    pub fn parse(text: &str, molecule: &str, base_dir: &Path) -> Result<Self> {
        let mut points: Vec<SweepPoint> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            if !(2..=4).contains(&toks.len()) {
                return Err(Error::parse(
                    i + 1,
                    "expected `<bond_length> <fcidump> [scf_energy] [fci_energy]`",
                ));
            }
            let number = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(i + 1, format!("`{s}` is not a number")))
            };
            let bond_length = number(toks[0])?;
            if let Some(prev) = points.last() {
                if bond_length <= prev.bond_length {
                    return Err(Error::parse(i + 1, "bond lengths must be strictly increasing"));
                }
            }
            let path = PathBuf::from(toks[1]);
            points.push(SweepPoint {
                bond_length,
                fcidump: if path.is_absolute() { path } else { base_dir.join(path) },
                scf_energy: toks.get(2).map(|s| number(s)).transpose()?,
                fci_energy: toks.get(3).map(|s| number(s)).transpose()?,
            });
        }
        Ok(Self {
            molecule: molecule.to_string(),
            points,
        })
    }

    /// Reads a sweep file; the molecule label is the file stem without a `_sweep` suffix.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = read(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("molecule");
        let label = stem.strip_suffix("_sweep").unwrap_or(stem);
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, label, base)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
