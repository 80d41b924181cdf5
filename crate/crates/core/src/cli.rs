//! The `garside-homology` command line: group selection, subcommands and
//! exit codes (0 success, 1 mismatch with the reference tables, 2 usage or
//! input error, 3 refused for resource reasons).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::algebra::{check_prime, Field, Fp, Rational};
use crate::complex::{euler_characteristic, Cell, CellComplex, ComplexError, Resolution};
use crate::engine::{run_through, store_digest, EngineError, RunOptions};
use crate::gapio::{export_dir, import_dir, validate_data, DataSet, GapError, ImportOptions};
use crate::garside::{
    build_from_data, build_from_presentation, dual_braid_data, GarsideError, GarsideStructure, Presentation,
};
use crate::homology::{
    format_poincare, integer_homology, laurent_homology, poincare_polynomial, torsion_scan, AbelianGroup,
    HomologyError, LaurentHomology, Limits, PolyModule,
};
use crate::reference::{compare_poincare, compare_rows, parse_chain, reference, render_row, Check, Indexing};
use crate::salvetti::{DihedralComplex, SalvettiError};
use crate::specialize::{Coefficients, SpecializeError, WeightedComplex};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_REFUSED: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Garside(#[from] GarsideError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Specialize(#[from] SpecializeError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Salvetti(#[from] SalvettiError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Errors are usage or input errors; refusals are reported as results.
    pub fn exit_code(&self) -> u8 {
        EXIT_USAGE
    }
}

/// Which group to work on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    G12,
    G22,
    /// Through the two-generator Salvetti complex with weights 2 and 1.
    G13,
    /// Artin monoid of type I₂(m) through the order complex.
    Dihedral(usize),
    /// Artin group of type I₂(m) through its Salvetti complex.
    Salvetti(usize),
    /// Classical braid monoid of type A_n.
    TypeA(usize),
    /// Dual braid monoid of type A_n.
    DualA(usize),
    /// A presentation file.
    File(PathBuf),
    /// A data directory, by structure name.
    Data(String),
}

fn parse_size(s: &str, what: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("{what} needs a number, got `{s}`"))
}

impl FromStr for GroupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        if let Some(m) = lower.strip_prefix("i2:") {
            return Ok(GroupSpec::Dihedral(parse_size(m, "i2")?));
        }
        if let Some(m) = lower.strip_prefix("salvetti:") {
            return Ok(GroupSpec::Salvetti(parse_size(m, "salvetti")?));
        }
        if let Some(n) = lower.strip_prefix("dual-a:") {
            return Ok(GroupSpec::DualA(parse_size(n, "dual-a")?));
        }
        if let Some(n) = lower.strip_prefix("a:") {
            return Ok(GroupSpec::TypeA(parse_size(n, "a")?));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(PathBuf::from(p)));
        }
        if let Some(n) = s.strip_prefix("from-data:") {
            return Ok(GroupSpec::Data(n.to_string()));
        }
        if let Some(n) = lower.strip_suffix("-data") {
            return Ok(GroupSpec::Data(n.to_ascii_uppercase()));
        }
        match lower.as_str() {
            "g12" => Ok(GroupSpec::G12),
            "g22" => Ok(GroupSpec::G22),
            "g13" => Ok(GroupSpec::G13),
            _ => Err(format!(
                "unknown group `{s}` (expected g12, g22, g13, i2:M, salvetti:M, a:N, dual-a:N, file:PATH, from-data:NAME or gNN-data)"
            )),
        }
    }
}

/// A group ready for computation.
pub struct Loaded {
    /// Key into the reference tables, e.g. `G12`.
    pub label: String,
    pub monoid: Option<GarsideStructure>,
    pub data: Option<DataSet>,
    /// Salvetti complex and generator weights, when the group is given that way.
    pub salvetti: Option<(DihedralComplex, u32, u32)>,
}

impl Loaded {
    pub fn load(spec: &GroupSpec, data_dir: &Path, options: &ImportOptions) -> Result<Loaded, CliError> {
        let monoid = |p: Presentation| -> Result<Loaded, CliError> {
            let g = build_from_presentation(&p)?;
            Ok(Loaded { label: p.name.clone(), monoid: Some(g), data: None, salvetti: None })
        };
        match spec {
            GroupSpec::G12 => monoid(Presentation::g12()),
            GroupSpec::G22 => monoid(Presentation::g22()),
            GroupSpec::G13 => Ok(Loaded {
                label: "G13".into(),
                monoid: Some(build_from_presentation(&Presentation::dihedral(6)?)?),
                data: None,
                salvetti: Some((DihedralComplex::new(6)?, 2, 1)),
            }),
            GroupSpec::Dihedral(m) => monoid(Presentation::dihedral(*m)?),
            GroupSpec::Salvetti(m) => Ok(Loaded {
                label: format!("I2({m})"),
                monoid: None,
                data: None,
                salvetti: Some((DihedralComplex::new(*m)?, 1, 1)),
            }),
            GroupSpec::TypeA(n) => monoid(Presentation::type_a(*n)?),
            GroupSpec::DualA(n) => {
                let d = dual_braid_data(n + 1)?;
                let name = format!("dual A{n}");
                let g = build_from_data(&name, &d.atoms, &d.simples, &d.lengths)?;
                Ok(Loaded { label: name, monoid: Some(g), data: None, salvetti: None })
            }
            GroupSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                monoid(Presentation::parse(&text)?)
            }
            GroupSpec::Data(name) => {
                let data = import_dir(data_dir, name, options)?;
                let g = data.build()?;
                Ok(Loaded { label: name.to_ascii_uppercase(), monoid: Some(g), data: Some(data), salvetti: None })
            }
        }
    }

    fn structure(&self) -> Result<&GarsideStructure, CliError> {
        self.monoid.as_ref().ok_or_else(|| CliError::Usage(format!("{} has no Garside monoid here", self.label)))
    }

    /// Cells in the order used for computation: imported lists when present.
    pub fn cells(&self) -> Result<CellComplex, CliError> {
        let g = self.structure()?;
        Ok(match &self.data {
            Some(d) if !d.cells.is_empty() => d.imported_cells(g),
            _ => CellComplex::new(g),
        })
    }

    pub fn cell_counts(&self) -> Result<Vec<usize>, CliError> {
        if self.monoid.is_none() {
            return Ok(vec![1, 2, 1]);
        }
        Ok(self.cells()?.counts())
    }

    /// A resolution with differentials through `max_degree` filled in,
    /// imported ones included.
    pub fn resolution(&self, max_degree: usize, engine: &EngineArgs) -> Result<Resolution<'_>, CliError> {
        let g = self.structure()?;
        let mut res = match &self.data {
            Some(d) if !d.cells.is_empty() => d.resolution(g)?,
            _ => Resolution::new(g),
        };
        run_through(&mut res, max_degree, &engine.options())?;
        Ok(res)
    }

    pub fn top_degree(&self) -> Result<usize, CliError> {
        Ok(self.cell_counts()?.len() - 1)
    }

    /// The weighted complex through degree `max_degree`.
    pub fn weighted(&self, max_degree: usize, engine: &EngineArgs) -> Result<WeightedComplex, CliError> {
        if let Some((c, a, b)) = &self.salvetti {
            return Ok(c.weighted(*a, *b));
        }
        let res = self.resolution(max_degree, engine)?;
        Ok(WeightedComplex::from_resolution(&res, max_degree)?)
    }

    fn check_sign(&self) -> Result<(), CliError> {
        if self.salvetti.is_none() && self.structure()?.atoms_are_involutions() == Some(false) {
            return Err(SpecializeError::NotInvolutions.into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct GroupArgs {
    /// g12, g22, g13, i2:M, salvetti:M, a:N, dual-a:N, file:PATH, from-data:NAME or gNN-data
    #[arg(long, short)]
    pub group: String,
    /// Directory holding the data files of from-data groups
    #[arg(long, default_value = ".")]
    pub data_dir: PathBuf,
}

#[derive(Clone, Debug, Default, Args)]
pub struct EngineArgs {
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Journal directory for resumable runs
    #[arg(long)]
    pub journal: Option<PathBuf>,
}

impl EngineArgs {
    fn options(&self) -> RunOptions<'static> {
        let mut o = RunOptions { journal_dir: self.journal.clone(), ..RunOptions::default() };
        if let Some(w) = self.workers {
            o.workers = w.max(1);
        }
        o
    }
}

#[derive(Clone, Debug, Args)]
pub struct LimitArgs {
    /// Widest differential given a polynomial Smith form
    #[arg(long, default_value_t = Limits::default().max_columns)]
    pub max_columns: usize,
    /// Lift the column limit
    #[arg(long)]
    pub force: bool,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        if self.force {
            Limits { max_columns: usize::MAX, max_rank_columns: usize::MAX }
        } else {
            Limits { max_columns: self.max_columns, ..Limits::default() }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "garside-homology", version, about = "Garside monoids, order complexes and braid group homology")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the monoid and describe its simples
    MonoidBuild {
        #[command(flatten)]
        group: GroupArgs,
        /// List every simple with its length
        #[arg(long)]
        list: bool,
    },
    /// Re-check lattice, length and cancellation invariants
    MonoidCheck {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Cell counts, or the cells of one degree
    Cells {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: Option<usize>,
        /// Print the cells of --degree
        #[arg(long)]
        list: bool,
    },
    /// Differentials of one degree
    Diff {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: usize,
        /// Only this cell (0-based)
        #[arg(long)]
        cell: Option<usize>,
        /// Print the specialized matrix instead (trivial, sign or laurent)
        #[arg(long)]
        matrix: Option<Coefficients>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Integral homology with trivial or sign coefficients
    Homology {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value = "trivial")]
        coeff: Coefficients,
        #[arg(long)]
        max_degree: Option<usize>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Homology over Q[t, 1/t] or F_p[t, 1/t]
    Milnor {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Compare everything computable with the embedded reference tables
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        /// Include Laurent, modular and torsion checks
        #[arg(long)]
        all: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u64>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Read and validate a data directory
    ImportGap {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        name: String,
        /// Also read the differential files
        #[arg(long)]
        differentials: bool,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Recompute this many imported differentials per degree
        #[arg(long, default_value_t = 0)]
        spot: usize,
    },
    /// Write a structure and its differentials as data files
    ExportGap {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

/// Rendered output of one command.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Json,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String, json: Json) -> Self {
        Outcome { text, json, code: EXIT_OK }
    }
}

/// Parses arguments, runs the command and writes its output; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = match cli.format {
                Format::Text => write!(out, "{}", o.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(group: &GroupArgs, differentials: bool) -> Result<Loaded, CliError> {
    let spec: GroupSpec = group.group.parse().map_err(CliError::Usage)?;
    Loaded::load(&spec, &group.data_dir, &ImportOptions { differentials, max_degree: None })
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::MonoidBuild { group, list } => monoid_build(&load(group, false)?, *list),
        Command::MonoidCheck { group } => monoid_check(&load(group, false)?),
        Command::Cells { group, degree, list } => cells(&load(group, false)?, *degree, *list),
        Command::Diff { group, degree, cell, matrix, engine } => {
            diff(&load(group, true)?, *degree, *cell, *matrix, engine)
        }
        Command::Homology { group, coeff, max_degree, engine, limits } => {
            let loaded = load(group, true)?;
            match coeff {
                Coefficients::Laurent => milnor(&loaded, None, *max_degree, engine, limits),
                c => homology(&loaded, *c, *max_degree, engine),
            }
        }
        Command::Milnor { group, prime, max_degree, engine, limits } => {
            milnor(&load(group, true)?, *prime, *max_degree, engine, limits)
        }
        Command::Verify { group, all, primes, engine, limits } => {
            let loaded = load(group, true)?;
            let checks = verify(&loaded, *all, primes, engine, limits)?;
            Ok(checks_outcome(&loaded.label, checks))
        }
        Command::ImportGap { dir, name, differentials, max_degree, spot } => {
            import_gap(dir, name, *differentials, *max_degree, *spot)
        }
        Command::ExportGap { group, dir, name, max_degree, engine } => {
            export_gap(&load(group, false)?, dir, name.as_deref(), *max_degree, engine)
        }
    }
}

fn checks_outcome(label: &str, checks: Vec<Check>) -> Outcome {
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{c}").unwrap();
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(text, "{label}: {} checks, {failed} failed", checks.len()).unwrap();
    let json = json!({
        "group": label,
        "checks": checks.iter().map(|c| json!({
            "name": c.name, "expected": c.expected, "computed": c.computed, "passed": c.passed,
        })).collect::<Vec<_>>(),
        "failed": failed,
    });
    Outcome { text, json, code: if failed == 0 { EXIT_OK } else { EXIT_MISMATCH } }
}

fn monoid_build(loaded: &Loaded, list: bool) -> Result<Outcome, CliError> {
    let g = loaded.structure()?;
    let atoms: Vec<String> = (0..g.num_atoms()).map(|a| g.simple_name(g.atom(a))).collect();
    let delta = g.simple_name(g.delta());
    let mut text = format!(
        "group {}\natoms {}\nsimples {}\ndelta {} (length {})\n",
        g.name(),
        atoms.join(" "),
        g.num_simples(),
        delta,
        g.length(g.delta())
    );
    let mut simples = Vec::new();
    if list {
        for s in 0..g.num_simples() as u32 {
            writeln!(text, "{:>6} {:>3} {}", s + 1, g.length(s), g.simple_name(s)).unwrap();
            simples.push(json!({ "name": g.simple_name(s), "length": g.length(s) }));
        }
    }
    let json = json!({
        "group": g.name(), "atoms": atoms, "simples": g.num_simples(),
        "delta": delta, "delta_length": g.length(g.delta()), "list": simples,
    });
    Ok(Outcome::ok(text, json))
}

/// Invariants of the simple tables, re-derived from the stored operations.
pub fn monoid_checks(g: &GarsideStructure) -> Vec<Check> {
    let n = g.num_simples() as u32;
    let mut checks = Vec::new();
    let mut bad_length = 0;
    for s in 0..n {
        let mut x = s;
        let mut steps = 0;
        while let Some(a) = g.least_left_atom(x) {
            match g.left_complement(g.atom(a), x) {
                Ok(y) => x = y,
                Err(_) => break,
            }
            steps += 1;
        }
        if x != g.identity() || steps != g.length(s) {
            bad_length += 1;
        }
    }
    checks.push(Check::equal("lengths equal the number of peeled atoms", &0, &bad_length));
    let (mut not_upper, mut not_least, mut cancel) = (0usize, 0usize, 0usize);
    for u in 0..n {
        let mut seen = vec![false; n as usize];
        for v in 0..n {
            let l = g.right_lcm(u, v);
            if !g.left_divides_simple(u, l) || !g.left_divides_simple(v, l) {
                not_upper += 1;
            }
            if let Some(p) = g.product(u, v) {
                if std::mem::replace(&mut seen[p as usize], true) {
                    cancel += 1;
                }
            }
        }
        // least upper bound: spot check against all common multiples of u and one atom
        for a in 0..g.num_atoms() {
            let l = g.right_lcm(u, g.atom(a));
            let below = (0..n).any(|w| {
                w != l
                    && g.left_divides_simple(u, w)
                    && g.left_divides_simple(g.atom(a), w)
                    && g.left_divides_simple(w, l)
            });
            if below {
                not_least += 1;
            }
        }
    }
    checks.push(Check::equal("lcm is a common multiple", &0, &not_upper));
    checks.push(Check::equal("lcm is least (atom pairs)", &0, &not_least));
    checks.push(Check::equal("left cancellation on stored products", &0, &cancel));
    let all_below = (0..n).all(|s| g.left_divides_simple(s, g.delta()) && g.right_divides_simple(s, g.delta()));
    checks.push(Check::equal("every simple divides delta on both sides", &true, &all_below));
    let atoms_ok = (0..g.num_atoms()).all(|a| g.length(g.atom(a)) == 1);
    checks.push(Check::equal("atoms have length 1", &true, &atoms_ok));
    checks
}

fn monoid_check(loaded: &Loaded) -> Result<Outcome, CliError> {
    Ok(checks_outcome(&loaded.label, monoid_checks(loaded.structure()?)))
}

fn cells(loaded: &Loaded, degree: Option<usize>, list: bool) -> Result<Outcome, CliError> {
    let counts = loaded.cell_counts()?;
    let euler = euler_characteristic(&counts);
    match degree {
        Some(d) => {
            let count = counts.get(d).copied().unwrap_or(0);
            let mut text = format!("{count}\n");
            let mut names = Vec::new();
            if list && loaded.monoid.is_some() {
                let g = loaded.structure()?;
                let cx = loaded.cells()?;
                text.clear();
                for c in cx.cells(d) {
                    let s = c.display(g).to_string();
                    writeln!(text, "{s}").unwrap();
                    names.push(s);
                }
            }
            Ok(Outcome::ok(text, json!({ "group": loaded.label, "degree": d, "count": count, "cells": names })))
        }
        None => {
            let mut text = String::new();
            for (d, c) in counts.iter().enumerate() {
                writeln!(text, "degree {d}: {c}").unwrap();
            }
            writeln!(text, "euler characteristic {euler}").unwrap();
            Ok(Outcome::ok(text, json!({ "group": loaded.label, "counts": counts, "euler": euler })))
        }
    }
}

fn matrix_text(w: &WeightedComplex, degree: usize, coeffs: Coefficients) -> String {
    match coeffs {
        Coefficients::Laurent => w.specialize_laurent::<Rational>(()).matrices[degree].to_coordinate_text("Q[t]", degree),
        c => w.specialize_integer(c).matrices[degree].to_coordinate_text("Z", degree),
    }
}

fn diff(
    loaded: &Loaded,
    degree: usize,
    cell: Option<usize>,
    matrix: Option<Coefficients>,
    engine: &EngineArgs,
) -> Result<Outcome, CliError> {
    let top = loaded.top_degree()?;
    if degree == 0 || degree > top {
        return Err(CliError::Usage(format!("degree must be in 1..={top}")));
    }
    if let Some(c) = matrix {
        if c == Coefficients::Sign {
            loaded.check_sign()?;
        }
        let w = loaded.weighted(degree, engine)?;
        let text = matrix_text(&w, degree, c);
        return Ok(Outcome::ok(text.clone(), json!({ "group": loaded.label, "degree": degree, "matrix": text })));
    }
    if let (None, Some((c, _, _))) = (&loaded.monoid, &loaded.salvetti) {
        let text = if degree == 2 { c.boundary_text() } else { "[a] -> (a-1)[], [b] -> (b-1)[]".to_string() };
        return Ok(Outcome::ok(format!("{text}\n"), json!({ "group": loaded.label, "degree": degree, "text": text })));
    }
    let res = loaded.resolution(degree, engine)?;
    let g = res.structure();
    let chains = res.differentials(degree)?;
    let range: Vec<usize> = match cell {
        Some(j) if j < chains.len() => vec![j],
        Some(j) => return Err(CliError::Usage(format!("cell {j} out of range 0..{}", chains.len()))),
        None => (0..chains.len()).collect(),
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    for j in range {
        let c = &res.cells().cells(degree)[j];
        let shown = chains[j].display(g, res.cells(), degree - 1).to_string();
        writeln!(text, "d{}: {}", c.display(g), shown).unwrap();
        entries.push(json!({ "cell": c.display(g).to_string(), "chain": shown }));
    }
    let digest = store_digest(&res, degree)?;
    writeln!(text, "digest {digest}").unwrap();
    Ok(Outcome::ok(text, json!({ "group": loaded.label, "degree": degree, "differentials": entries, "digest": digest })))
}

/// Integral homology in degrees `0..=max_degree`.
pub fn integer_row(
    loaded: &Loaded,
    coeffs: Coefficients,
    max_degree: Option<usize>,
    engine: &EngineArgs,
) -> Result<Vec<AbelianGroup>, CliError> {
    if coeffs == Coefficients::Sign {
        loaded.check_sign()?;
    }
    let top = loaded.top_degree()?;
    let max = max_degree.unwrap_or(top).min(top);
    let w = loaded.weighted((max + 1).min(top), engine)?;
    let mut row = integer_homology(&w.specialize_integer(coeffs))?;
    row.truncate(max + 1);
    Ok(row)
}

fn homology(loaded: &Loaded, coeffs: Coefficients, max_degree: Option<usize>, engine: &EngineArgs) -> Result<Outcome, CliError> {
    let row = integer_row(loaded, coeffs, max_degree, engine)?;
    let shown = render_row(&row.iter().cloned().map(Some).collect::<Vec<_>>());
    let mut text = format!("{} {coeffs}: {shown}\n", loaded.label);
    let mut code = EXIT_OK;
    let mut expected_json = Json::Null;
    if let Some(expected) = reference().integer_row(&loaded.label, coeffs) {
        let exp: Vec<Option<AbelianGroup>> = expected.into_iter().take(row.len()).map(Some).collect();
        let got: Vec<Option<AbelianGroup>> = row.iter().cloned().map(Some).collect();
        let checks = compare_rows(&format!("{} {coeffs}", loaded.label), &exp, &got);
        expected_json = json!(render_row(&exp));
        if checks.iter().any(|c| !c.passed) {
            code = EXIT_MISMATCH;
            writeln!(text, "reference {}", render_row(&exp)).unwrap();
            for c in checks.iter().filter(|c| !c.passed) {
                writeln!(text, "{c}").unwrap();
            }
        } else {
            writeln!(text, "matches reference").unwrap();
        }
    }
    let json = json!({
        "group": loaded.label, "coefficients": coeffs.to_string(),
        "homology": row.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "reference": expected_json,
    });
    Ok(Outcome { text, json, code })
}

/// The Milnor row of a group in the indexing of the reference table.
pub fn laurent_row<F: Field>(
    loaded: &Loaded,
    ctx: F::Ctx,
    max_degree: Option<usize>,
    engine: &EngineArgs,
    limits: Limits,
) -> Result<LaurentHomology<F>, CliError> {
    let top = loaded.top_degree()?;
    let max = max_degree.unwrap_or(top).min(top);
    let w = loaded.weighted((max + 1).min(top), engine)?;
    Ok(laurent_homology::<F>(&w, ctx, max, limits)?)
}

fn tabulated<F: Field>(loaded: &Loaded, h: &LaurentHomology<F>) -> Vec<Option<PolyModule<F>>> {
    match reference().milnor_indexing(&loaded.label) {
        Indexing::Homology => h.homology.clone(),
        Indexing::Cohomology => h.table.clone(),
    }
}

fn render_modules<F: Field>(row: &[Option<PolyModule<F>>]) -> Vec<String> {
    row.iter().map(|m| m.as_ref().map_or("?".into(), PolyModule::cyclotomic_form)).collect()
}

fn milnor(
    loaded: &Loaded,
    prime: Option<u64>,
    max_degree: Option<usize>,
    engine: &EngineArgs,
    limits: &LimitArgs,
) -> Result<Outcome, CliError> {
    match prime {
        None => milnor_over::<Rational>(loaded, (), "Q", None, max_degree, engine, limits),
        Some(p) if check_prime(p) => milnor_over::<Fp>(loaded, p, &format!("F_{p}"), Some(p), max_degree, engine, limits),
        Some(p) => Err(CliError::Usage(format!("{p} is not prime"))),
    }
}

fn milnor_over<F: Field>(
    loaded: &Loaded,
    ctx: F::Ctx,
    field: &str,
    prime: Option<u64>,
    max_degree: Option<usize>,
    engine: &EngineArgs,
    limits: &LimitArgs,
) -> Result<Outcome, CliError>
where
    F: MilnorReference,
{
    let h = laurent_row::<F>(loaded, ctx, max_degree, engine, limits.limits())?;
    let row = tabulated(loaded, &h);
    let indexing = match reference().milnor_indexing(&loaded.label) {
        Indexing::Homology => "homology",
        Indexing::Cohomology => "cohomology",
    };
    let shown = render_modules(&row);
    let mut text = format!("{} over {field}[t,1/t] ({indexing} indexing): ({})\n", loaded.label, shown.join(", "));
    let poincare = poincare_polynomial(&row).map(|c| format_poincare(&c));
    if let Some(p) = &poincare {
        writeln!(text, "poincare {p}").unwrap();
    }
    for e in &h.refused {
        writeln!(text, "refused {e}").unwrap();
    }
    let mut code = if h.refused.is_empty() { EXIT_OK } else { EXIT_REFUSED };
    if let Some(expected) = F::expected(loaded, ctx, prime) {
        let checks = compare_rows(&format!("{} {field}", loaded.label), &expected, &row);
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed && c.computed != "not computed").collect();
        if failed.is_empty() {
            writeln!(text, "matches reference where computed").unwrap();
        } else {
            code = EXIT_MISMATCH;
            writeln!(text, "reference ({})", render_modules(&expected).join(", ")).unwrap();
            for c in failed {
                writeln!(text, "{c}").unwrap();
            }
        }
    }
    let json = json!({
        "group": loaded.label, "field": field, "indexing": indexing,
        "row": shown, "homology": render_modules(&h.homology),
        "poincare": poincare,
        "refused": h.refused.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "generic_ranks": h.generic_ranks,
    });
    Ok(Outcome { text, json, code })
}

/// Reference Milnor rows for a coefficient field.
pub trait MilnorReference: Field {
    fn expected(loaded: &Loaded, ctx: Self::Ctx, prime: Option<u64>) -> Option<Vec<Option<PolyModule<Self>>>>;
}

impl MilnorReference for Rational {
    fn expected(loaded: &Loaded, ctx: (), _: Option<u64>) -> Option<Vec<Option<PolyModule<Rational>>>> {
        reference().milnor_row::<Rational>(&loaded.label, ctx)
    }
}

impl MilnorReference for Fp {
    fn expected(loaded: &Loaded, _: u64, prime: Option<u64>) -> Option<Vec<Option<PolyModule<Fp>>>> {
        reference().modular_row(&loaded.label, prime?)
    }
}

/// Every check against the embedded tables that applies to the group.
/// With `all`, the Laurent rows, mod-p rows and torsion primes as well.
pub fn verify(
    loaded: &Loaded,
    all: bool,
    primes: &[u64],
    engine: &EngineArgs,
    limits: &LimitArgs,
) -> Result<Vec<Check>, CliError> {
    let r = reference();
    let label = loaded.label.as_str();
    let mut checks = Vec::new();
    let counts = loaded.cell_counts()?;
    let top = counts.len() - 1;
    if let Some(expected) = r.cell_counts(label) {
        checks.push(Check::new(format!("{label} cell counts"), format!("{:?}", expected.dl), format!("{counts:?}"), expected.dl == counts));
    }
    checks.push(Check::equal(format!("{label} euler characteristic"), &0, &euler_characteristic(&counts)));
    if let Some(g) = &loaded.monoid {
        if loaded.salvetti.is_none() {
            let res = loaded.resolution(top, engine)?;
            for d in 1..=top {
                let bad = res.check_dd_zero(d)?;
                checks.push(Check::equal(format!("{label} d∘d = 0 on degree {d}"), &0, &bad.len()));
            }
            for e in r.printed_d2(label) {
                let cell_atoms: Option<Vec<u16>> =
                    e.cell.split(',').map(|a| g.atom_index_by_name(a.trim()).map(|i| i as u16)).collect();
                let idx = cell_atoms.and_then(|a| res.cells().index_of(&Cell(a)));
                let expected = parse_chain(&res, 1, &e.chain).map_err(|x| CliError::Usage(x.to_string()))?;
                let computed = idx.and_then(|i| res.differential(2, i));
                let shown = computed.map_or("missing".into(), |c| c.display(g, res.cells(), 1).to_string());
                checks.push(Check::new(
                    format!("{label} printed d[{}]", e.cell),
                    &e.chain,
                    shown,
                    computed == Some(&expected),
                ));
            }
        }
    }
    if let Some((c, _, _)) = &loaded.salvetti {
        checks.push(Check::equal(format!("{label} Salvetti d∘d = 0"), &true, &c.check_dd_zero()?));
    }
    let sign_ok = loaded.check_sign().is_ok();
    for coeffs in [Coefficients::Trivial, Coefficients::Sign] {
        if coeffs == Coefficients::Sign && !sign_ok {
            continue;
        }
        if let Some(expected) = r.integer_row(label, coeffs) {
            let row = integer_row(loaded, coeffs, None, engine)?;
            let exp: Vec<Option<AbelianGroup>> = expected.into_iter().map(Some).collect();
            let got: Vec<Option<AbelianGroup>> = row.into_iter().map(Some).collect();
            checks.extend(compare_rows(&format!("{label} {coeffs}"), &exp, &got));
        }
    }
    if !all {
        return Ok(checks);
    }
    let lim = limits.limits();
    let h = laurent_row::<Rational>(loaded, (), None, engine, lim)?;
    let rational = tabulated(loaded, &h);
    if let Some(expected) = r.milnor_row::<Rational>(label, ()) {
        checks.extend(compare_rows(&format!("{label} milnor"), &expected, &rational));
    }
    if let Some(expected) = r.poincare(label) {
        let dims: Vec<Option<usize>> = rational.iter().map(|m| m.as_ref().and_then(PolyModule::dimension)).collect();
        checks.push(compare_poincare(&format!("{label} poincare"), &expected, &dims));
    }
    let mut modular = Vec::new();
    for &p in primes {
        if !check_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
        let hp = laurent_row::<Fp>(loaded, p, None, engine, lim)?;
        let row = tabulated(loaded, &hp);
        if let Some(expected) = r.modular_row(label, p) {
            checks.extend(compare_rows(&format!("{label} mod {p}"), &expected, &row));
        }
        modular.push((p, row));
    }
    if let Some(expected) = r.torsion_primes(label) {
        let found: BTreeSet<u64> = torsion_scan(&rational, &modular).into_iter().map(|f| f.prime).collect();
        let expected: BTreeSet<u64> = expected.iter().copied().filter(|p| primes.contains(p)).collect();
        checks.push(Check::new(
            format!("{label} torsion primes"),
            format!("{expected:?}"),
            format!("{found:?}"),
            expected == found,
        ));
    }
    Ok(checks)
}

/// Import, validation against the reference and local enumeration, and
/// optionally recomputation of `spot` imported differentials per degree.
pub fn import_checks(data: &DataSet, g: &GarsideStructure, spot: usize) -> Result<Vec<Check>, CliError> {
    let label = data.name.to_ascii_uppercase();
    let mut checks = Vec::new();
    let imported = data.imported_cells(g);
    let counts = imported.counts();
    if let Some(expected) = reference().cell_counts(&label) {
        checks.push(Check::new(format!("{label} cell counts"), format!("{:?}", expected.dl), format!("{counts:?}"), expected.dl == counts));
    }
    checks.push(Check::equal(format!("{label} euler characteristic"), &0, &euler_characteristic(&counts)));
    checks.extend(validate_data(data, &CellComplex::new(g)).checks);
    if data.differentials.is_empty() {
        return Ok(checks);
    }
    let res = data.resolution(g)?;
    for &k in data.differentials.keys() {
        if k > res.top_degree() {
            continue;
        }
        let total = res.cells().count(k);
        let n = spot.min(total);
        let mut agree = 0;
        for i in 0..n {
            let j = (i * total / n.max(1)) as u32;
            if res.differential(k, j) == Some(&res.compute(k, j)?) {
                agree += 1;
            }
        }
        if n > 0 {
            checks.push(Check::new(format!("{label} recomputed Dcells{k}"), format!("{n} of {n}"), format!("{agree} of {n}"), agree == n));
        }
        if res.store().is_complete(k - 1) || k == 2 {
            let bad = res.check_dd_zero(k)?;
            checks.push(Check::equal(format!("{label} d∘d = 0 on imported degree {k}"), &0, &bad.len()));
        }
    }
    Ok(checks)
}

fn import_gap(dir: &Path, name: &str, differentials: bool, max_degree: Option<usize>, spot: usize) -> Result<Outcome, CliError> {
    let data = import_dir(dir, name, &ImportOptions { differentials, max_degree })?;
    let g = data.build()?;
    Ok(checks_outcome(&name.to_ascii_uppercase(), import_checks(&data, &g, spot)?))
}

fn export_gap(
    loaded: &Loaded,
    dir: &Path,
    name: Option<&str>,
    max_degree: Option<usize>,
    engine: &EngineArgs,
) -> Result<Outcome, CliError> {
    let top = loaded.top_degree()?;
    let max = max_degree.unwrap_or(top).min(top);
    let res = loaded.resolution(max, engine)?;
    let name = name.map_or_else(|| loaded.label.replace(|c: char| !c.is_ascii_alphanumeric(), ""), str::to_string);
    let summary = export_dir(&res, dir, &name, max)?;
    let files: Vec<String> = summary.files.iter().map(|p| p.display().to_string()).collect();
    let mut text = String::new();
    for f in &files {
        writeln!(text, "wrote {f}").unwrap();
    }
    Ok(Outcome::ok(text, json!({ "group": loaded.label, "name": name, "files": files })))
}
