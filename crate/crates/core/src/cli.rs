//! The `vqe` command line: single runs, dissociation sweeps, reference
//! energies and resource tallies.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::driver::{gradient_greedy_run, iqeb_run, uccsd_record, GrowthConfig, Problem};
use crate::error::Error;
use crate::excitation::{ansatz_resources, PoolKind};
use crate::fermion::MolecularIntegrals;
use crate::fixture::SweepManifest;
use crate::optimizer::OptimizerSettings;
use crate::record::{round_sig, RunRecord, Termination};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "vqe", version, about = "Adaptive VQE simulations on exact statevectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one method on one FCIDUMP file.
    Run(RunArgs),
    /// Run methods over every geometry of a sweep manifest.
    Dissociation(SweepArgs),
    /// Print Hartree–Fock and exact energies of an FCIDUMP file.
    Fci {
        #[arg(long)]
        fcidump: PathBuf,
    },
    /// Recompute parameter and CNOT tallies per iteration of a saved record.
    Resources {
        #[arg(long)]
        record: PathBuf,
        /// Also write the tallies as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Iqeb,
    Adapt,
    QubitAdapt,
    GreedyQubit,
    GreedyFermionic,
    Uccsd,
}

impl Method {
    fn tag(self) -> &'static str {
        match self {
            Method::Iqeb => "iqeb",
            Method::Adapt => "adapt",
            Method::QubitAdapt => "qubit-adapt",
            Method::GreedyQubit => "greedy-qubit",
            Method::GreedyFermionic => "greedy-fermionic",
            Method::Uccsd => "uccsd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Args)]
struct GrowthArgs {
    /// Candidates minimized per iteration (energy-reduction selection).
    #[arg(long, default_value_t = 10)]
    top_n: usize,
    /// Append spin complements (default: on for iqeb).
    #[arg(long)]
    spin_complement: Option<Switch>,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Stop once the error against the exact energy is at most this.
    #[arg(long)]
    target_error: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    fcidump: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[command(flatten)]
    growth: GrowthArgs,
    /// Output path; defaults to `<fixture>_<method>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Recorded in the output only; every run is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated methods; `hf` and `fci` add reference columns.
    #[arg(long, value_delimiter = ',', default_value = "iqeb,uccsd,hf,fci")]
    methods: Vec<String>,
    /// One or more comma-separated thresholds.
    #[arg(long, value_delimiter = ',', default_value = "1e-6")]
    epsilon: Vec<String>,
    #[command(flatten)]
    growth: GrowthArgs,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::Integrity(_) => EXIT_INPUT,
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::NoConvergence(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_FAILURE,
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(exit_code(&e), e.to_string())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn load_problem(path: &Path) -> Result<Problem, Failure> {
    let ints = MolecularIntegrals::from_fcidump_file(path)?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture");
    Ok(Problem::new(label, &ints)?)
}

fn growth_config(method: Method, epsilon: f64, g: &GrowthArgs) -> GrowthConfig {
    let mut c = match method {
        Method::Iqeb => GrowthConfig::iqeb(epsilon),
        Method::Adapt => GrowthConfig::greedy(PoolKind::FermionicSpinComplementPairs, epsilon),
        Method::QubitAdapt => GrowthConfig::greedy(PoolKind::PauliExponential, epsilon),
        Method::GreedyQubit | Method::Uccsd => GrowthConfig::greedy(PoolKind::Qubit, epsilon),
        Method::GreedyFermionic => GrowthConfig::greedy(PoolKind::Fermionic, epsilon),
    };
    if method == Method::Iqeb {
        c.n = g.top_n;
    }
    if let Some(s) = g.spin_complement {
        c.spin_complement_append = s == Switch::On;
    }
    c.max_iterations = g.max_iters;
    c.target_error = g.target_error;
    c
}

fn run_method(p: &Problem, method: Method, epsilon: f64, g: &GrowthArgs) -> Result<RunRecord, Failure> {
    let rec = match method {
        Method::Uccsd => uccsd_record(p, &OptimizerSettings::default())?,
        Method::Iqeb => iqeb_run(p, &growth_config(method, epsilon, g))?,
        _ => gradient_greedy_run(p, &growth_config(method, epsilon, g), method.tag())?,
    };
    Ok(rec.rounded())
}

fn summary(rec: &RunRecord) -> String {
    format!(
        "{} {}: E = {:.12} Ha, error = {:.3e} Ha, params = {}, CNOTs = {}, iterations = {}, {}",
        rec.method,
        rec.fixture,
        rec.final_energy(),
        rec.final_error(),
        rec.n_params(),
        rec.n_cnots(),
        rec.iterations.len(),
        rec.termination.name()
    )
}

fn set_threads(n: Option<usize>) {
    if let Some(n) = n {
        // fails only if a global pool already exists, e.g. in a second in-process call
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    set_threads(a.growth.threads);
    let p = load_problem(&a.fcidump)?;
    let mut rec = run_method(&p, a.method, a.epsilon, &a.growth)?;
    if let (Some(seed), Some(obj)) = (a.seed, rec.config.as_object_mut()) {
        obj.insert("seed".into(), seed.into());
    }
    let path = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}_{}.json", p.label, a.method.tag())));
    if matches!(a.format, Format::Json | Format::Both) {
        write_file(&path.with_extension("json"), &rec.to_json())?;
    }
    if matches!(a.format, Format::Csv | Format::Both) {
        write_file(&path.with_extension("csv"), &rec.to_csv())?;
    }
    let _ = writeln!(out, "{}", summary(&rec));
    let stalled = a.method != Method::Uccsd && rec.termination == Termination::MaxIterations;
    Ok(if stalled { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn cmd_fci(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = load_problem(path)?;
    let _ = writeln!(out, "fixture     {}", p.label);
    let _ = writeln!(out, "qubits      {}", p.n_qubits);
    let _ = writeln!(out, "electrons   {}", p.n_electrons);
    let _ = writeln!(out, "pauli_terms {}", p.hamiltonian.len());
    let _ = writeln!(out, "e_hf        {:.12}", p.e_hf);
    let _ = writeln!(out, "e_fci       {:.12}", p.e_fci);
    Ok(EXIT_OK)
}

fn cmd_resources(path: &Path, csv_out: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let rec = RunRecord::from_file(path)?;
    let mut elements = Vec::new();
    let mut slots = Vec::new();
    let mut table = String::from("m,n_elements,n_params,n_cnots,error\n");
    let _ = writeln!(out, "{:>4} {:>9} {:>7} {:>7} {:>12}", "m", "elements", "params", "cnots", "error");
    let mut mismatch = false;
    for it in &rec.iterations {
        for c in &it.chosen {
            elements.push(c.generator()?);
            slots.push(c.slot);
        }
        let (cnots, params) = ansatz_resources(&elements, Some(&slots));
        mismatch |= cnots != it.n_cnots || params != it.n_params;
        let err = round_sig(it.energy - rec.e_fci);
        let _ = writeln!(out, "{:>4} {:>9} {:>7} {:>7} {:>12.3e}", it.m, elements.len(), params, cnots, err);
        table.push_str(&format!("{},{},{},{},{}\n", it.m, elements.len(), params, cnots, err));
    }
    if let Some(p) = csv_out {
        write_file(p, &table)?;
    }
    if mismatch {
        return Err(Failure(
            EXIT_INPUT,
            "recorded tallies disagree with the recomputed ones".into(),
        ));
    }
    Ok(EXIT_OK)
}

/// One sweep column group: a method with an optional threshold.
struct Series {
    label: String,
    method: Option<Method>,
    epsilon: f64,
}

fn sweep_series(a: &SweepArgs) -> Result<(Vec<Series>, bool, bool), Failure> {
    let usage = |m: String| Failure(EXIT_USAGE, m);
    let eps: Vec<(String, f64)> = a
        .epsilon
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0)
                .map(|v| (s.trim().to_string(), v))
                .ok_or_else(|| usage(format!("bad epsilon `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let (mut hf, mut fci) = (false, false);
    let mut series = Vec::new();
    for name in a.methods.iter().map(|m| m.trim()) {
        match name {
            "hf" => hf = true,
            "fci" => fci = true,
            _ => {
                let m = Method::from_str(name, true).map_err(|_| usage(format!("unknown method `{name}`")))?;
                if m == Method::Uccsd {
                    series.push(Series {
                        label: "uccsd".into(),
                        method: Some(m),
                        epsilon: 0.0,
                    });
                } else {
                    for (tok, v) in &eps {
                        series.push(Series {
                            label: format!("{}_eps{}", m.tag(), tok),
                            method: Some(m),
                            epsilon: *v,
                        });
                    }
                }
            }
        }
    }
    Ok((series, hf, fci))
}

fn cmd_dissociation(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    set_threads(a.growth.threads);
    let sweep = SweepManifest::from_file(&a.manifest)?;
    if sweep.points.is_empty() {
        return Err(Failure(EXIT_USAGE, format!("manifest {} lists no points", a.manifest.display())));
    }
    let (series, hf, fci) = sweep_series(&a)?;
    let mut header = vec!["bond_length".to_string()];
    if hf {
        header.extend(["E_hf", "err_hf"].map(String::from));
    }
    if fci {
        header.push("E_fci".into());
    }
    for s in &series {
        header.extend([format!("E_{}", s.label), format!("err_{}", s.label), format!("params_{}", s.label)]);
    }
    let mut rows = vec![header.join(",")];
    let mut failed = 0;
    for pt in &sweep.points {
        let mut row = vec![pt.bond_length.to_string()];
        let p = match load_problem(&pt.fcidump) {
            Ok(p) => p,
            Err(Failure(_, msg)) => {
                let _ = writeln!(err, "r = {}: {msg}", pt.bond_length);
                failed += 1;
                row.resize(header_len(hf, fci, series.len()), String::new());
                rows.push(row.join(","));
                continue;
            }
        };
        if let Some(f) = pt.fci_energy.filter(|f| (f - p.e_fci).abs() > 1e-6) {
            let _ = writeln!(err, "r = {}: manifest FCI {f} differs from computed {}", pt.bond_length, p.e_fci);
        }
        if hf {
            row.extend([round_sig(p.e_hf).to_string(), round_sig(p.e_hf - p.e_fci).to_string()]);
        }
        if fci {
            row.push(round_sig(p.e_fci).to_string());
        }
        for s in &series {
            let m = s.method.expect("only runnable methods become series");
            match run_method(&p, m, s.epsilon, &a.growth) {
                Ok(rec) => {
                    let name = format!("{}_{}_{}.json", sweep.molecule, pt.bond_length, s.label);
                    write_file(&a.out_dir.join(name), &rec.to_json())?;
                    row.extend([
                        rec.final_energy().to_string(),
                        round_sig(rec.final_error()).to_string(),
                        rec.n_params().to_string(),
                    ]);
                    let _ = writeln!(out, "r = {}: {}", pt.bond_length, summary(&rec));
                }
                Err(Failure(_, msg)) => {
                    let _ = writeln!(err, "r = {} {}: {msg}", pt.bond_length, s.label);
                    failed += 1;
                    row.extend([String::new(), String::new(), String::new()]);
                }
            }
        }
        rows.push(row.join(","));
    }
    let curve = a.out_dir.join(format!("{}_curve.csv", sweep.molecule));
    write_file(&curve, &(rows.join("\n") + "\n"))?;
    let _ = writeln!(out, "wrote {}", curve.display());
    Ok(if failed > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn header_len(hf: bool, fci: bool, n_series: usize) -> usize {
    1 + 2 * hf as usize + fci as usize + 3 * n_series
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Dissociation(a) => cmd_dissociation(a, out, err),
        Command::Fci { fcidump } => cmd_fci(&fcidump, out),
        Command::Resources { record, out: csv } => cmd_resources(&record, csv.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
