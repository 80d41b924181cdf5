//! Directory layout: `atoms<G>.gap` (`allatoms`), `simples<G>.gap`
//! (`allsimples`, `simpleslengths`), `cells<k>N.gap` (`cells<k>N`) and
//! `Dcells<k>.gap` (`Dcells<k>P`) for `k ≥ 2`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{encode_chain, parse, shape, DataFile, GapError, Value};
use crate::complex::{Cell, CellComplex, Resolution};
use crate::garside::{build_from_data, GarsideStructure};
use crate::perm::Perm;
use crate::reference::Check;

/// Highest cell degree probed when scanning a directory.
const MAX_DEGREE: usize = 32;

fn atoms_file(name: &str) -> String {
    format!("atoms{name}.gap")
}

fn simples_file(name: &str) -> String {
    format!("simples{name}.gap")
}

fn cells_file(k: usize) -> (String, String) {
    (format!("cells{k}N.gap"), format!("cells{k}N"))
}

fn dcells_file(k: usize) -> (String, String) {
    (format!("Dcells{k}.gap"), format!("Dcells{k}P"))
}

fn read(dir: &Path, file: &str) -> Result<DataFile, GapError> {
    let path = dir.join(file);
    let text = fs::read_to_string(&path).map_err(|source| GapError::Io { path: path.clone(), source })?;
    parse(file, &text)
}

fn write(dir: &Path, file: &DataFile) -> Result<PathBuf, GapError> {
    let path = dir.join(&file.name);
    fs::write(&path, file.to_text()).map_err(|source| GapError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// What to read besides atoms and simples.
#[derive(Clone, Debug, Default)]
pub struct ImportOptions {
    /// Read `Dcells<k>.gap` files (they can be large).
    pub differentials: bool,
    /// Ignore files above this degree.
    pub max_degree: Option<usize>,
}

/// The contents of a data directory, still 1-based where the files are.
#[derive(Clone, Debug)]
pub struct DataSet {
    pub name: String,
    pub atoms: Vec<Perm>,
    pub simples: Vec<Perm>,
    pub lengths: Vec<u32>,
    /// Imported cell lists by degree (`k ≥ 2`), as 0-based atom positions.
    pub cells: BTreeMap<usize, Vec<Cell>>,
    /// Raw `Dcells<k>P` values by degree.
    pub differentials: BTreeMap<usize, Value>,
}

/// Reads a data directory; files are parsed in parallel.
pub fn import_dir(dir: &Path, name: &str, options: &ImportOptions) -> Result<DataSet, GapError> {
    let top = options.max_degree.unwrap_or(MAX_DEGREE).min(MAX_DEGREE);
    let mut wanted = vec![atoms_file(name), simples_file(name)];
    for k in 2..=top {
        let (cf, _) = cells_file(k);
        if dir.join(&cf).exists() {
            wanted.push(cf);
        }
        let (df, _) = dcells_file(k);
        if options.differentials && dir.join(&df).exists() {
            wanted.push(df);
        }
    }
    let files: Vec<DataFile> = wanted.par_iter().map(|f| read(dir, f)).collect::<Result<_, _>>()?;
    let by_name: HashMap<&str, &DataFile> = files.iter().map(|f| (f.name.as_str(), f)).collect();

    let atoms = by_name[atoms_file(name).as_str()].get("allatoms")?.as_perm_list("allatoms")?;
    let sf = by_name[simples_file(name).as_str()];
    let simples = sf.get("allsimples")?.as_perm_list("allsimples")?;
    let lengths = sf
        .get("simpleslengths")?
        .as_u64_list("simpleslengths")?
        .into_iter()
        .map(|l| u32::try_from(l).map_err(|_| shape("simpleslengths", "length too large")))
        .collect::<Result<Vec<_>, _>>()?;

    let mut cells = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for k in 2..=top {
        let (cf, var) = cells_file(k);
        if let Some(f) = by_name.get(cf.as_str()) {
            let mut list = Vec::new();
            for (i, c) in f.get(&var)?.as_list(&var)?.iter().enumerate() {
                let here = format!("{var}[{}]", i + 1);
                let atoms_of = c.as_u64_list(&here)?;
                if atoms_of.len() != k || atoms_of.iter().any(|&a| a == 0 || a as usize > atoms.len()) {
                    return Err(shape(&here, format!("{atoms_of:?} is not a list of {k} atom positions")));
                }
                list.push(Cell(atoms_of.iter().map(|&a| (a - 1) as u16).collect()));
            }
            cells.insert(k, list);
        }
        let (df, var) = dcells_file(k);
        if let Some(f) = by_name.get(df.as_str()) {
            differentials.insert(k, f.get(&var)?.clone());
        }
    }
    Ok(DataSet { name: name.to_string(), atoms, simples, lengths, cells, differentials })
}

impl DataSet {
    pub fn build(&self) -> Result<GarsideStructure, GapError> {
        Ok(build_from_data(&self.name, &self.atoms, &self.simples, &self.lengths)?)
    }

    /// The cell complex in the imported order: atoms in degree 1, imported
    /// lists from degree 2 on (stopping at the first missing degree).
    pub fn imported_cells(&self, g: &GarsideStructure) -> CellComplex {
        let mut cells = vec![vec![Cell::empty()], (0..g.num_atoms()).map(|a| Cell(vec![a as u16])).collect()];
        let mut k = 2;
        while let Some(list) = self.cells.get(&k) {
            cells.push(list.clone());
            k += 1;
        }
        CellComplex::from_cells(g, cells)
    }

    /// A resolution on the imported cells, with every imported differential
    /// installed and degree 1 computed.
    pub fn resolution<'g>(&self, g: &'g GarsideStructure) -> Result<Resolution<'g>, GapError> {
        let mut res = Resolution::with_cells(g, self.imported_cells(g));
        res.compute_through(1)?;
        for (&k, v) in &self.differentials {
            if k <= res.top_degree() {
                super::decode_store_degree(&mut res, k, v, &dcells_file(k).1)?;
            }
        }
        Ok(res)
    }
}

/// Atom lengths of the simples by breadth-first search from the identity,
/// multiplying by atoms on the right and staying among the simples.
pub fn recompute_lengths(atoms: &[Perm], simples: &[Perm]) -> Vec<Option<u32>> {
    let index: HashMap<&Perm, usize> = simples.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out = vec![None; simples.len()];
    let Some(&start) = index.get(&Perm::identity()) else {
        return out;
    };
    out[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let d = out[s].unwrap();
        for a in atoms {
            if let Some(&t) = index.get(&(&simples[s] * a)) {
                if out[t].is_none() {
                    out[t] = Some(d + 1);
                    queue.push_back(t);
                }
            }
        }
    }
    out
}

/// Validation of a data set against its rebuilt structure.
#[derive(Clone, Debug, Default)]
pub struct Validation {
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Cross-file consistency: stated lengths equal recomputed ones, the
/// length-one simples are exactly the atoms, and every imported cell list
/// equals the locally enumerated one.
pub fn validate_data(data: &DataSet, local: &CellComplex) -> Validation {
    let mut checks = Vec::new();
    let recomputed = recompute_lengths(&data.atoms, &data.simples);
    let bad: Vec<usize> =
        (0..data.simples.len()).filter(|&i| recomputed[i] != Some(data.lengths[i])).map(|i| i + 1).collect();
    checks.push(Check::new(
        "simpleslengths match recomputed lengths",
        "all",
        if bad.is_empty() { "all".to_string() } else { format!("{} mismatches, first at {}", bad.len(), bad[0]) },
        bad.is_empty(),
    ));
    let atom_set: HashSet<&Perm> = data.atoms.iter().collect();
    let length_one: HashSet<&Perm> =
        data.simples.iter().zip(&data.lengths).filter(|(_, &l)| l == 1).map(|(p, _)| p).collect();
    checks.push(Check::new(
        "length-one simples are the atoms",
        format!("{} atoms", atom_set.len()),
        format!("{} length-one simples", length_one.len()),
        atom_set == length_one && atom_set.len() == data.atoms.len(),
    ));
    for (&k, list) in &data.cells {
        let ours = local.cells(k);
        let first_diff = list.iter().zip(ours).position(|(a, b)| a != b);
        let same = list.len() == ours.len() && first_diff.is_none();
        let computed = match first_diff {
            _ if same => format!("{} cells, identical", ours.len()),
            Some(i) => format!("{} cells, first difference at {}", ours.len(), i + 1),
            None => format!("{} cells", ours.len()),
        };
        checks.push(Check::new(format!("cells{k}N equals local enumeration"), format!("{} cells", list.len()), computed, same));
    }
    Validation { checks }
}

/// Files written by an export.
#[derive(Clone, Debug, Default)]
pub struct ExportSummary {
    pub files: Vec<PathBuf>,
}

/// Writes a resolution in the directory layout. Structures without
/// permutations get `simpleswords` (atom positions, 1-based) in place of
/// `allatoms`/`allsimples`. Differentials are written for complete degrees
/// `2..=max_degree`.
pub fn export_dir(res: &Resolution<'_>, dir: &Path, name: &str, max_degree: usize) -> Result<ExportSummary, GapError> {
    fs::create_dir_all(dir).map_err(|source| GapError::Io { path: dir.to_path_buf(), source })?;
    let g = res.structure();
    let mut files = Vec::new();
    let lengths = Value::int_list(g.simples.lengths.iter().copied());
    match &g.simples.perms {
        Some(perms) => {
            let atoms = g.atoms.simples.iter().map(|&s| Value::Perm(perms[s as usize].clone()));
            files.push(DataFile::new(atoms_file(name)).with("allatoms", Value::list(atoms)));
            files.push(
                DataFile::new(simples_file(name))
                    .with("allsimples", Value::list(perms.iter().cloned().map(Value::Perm)))
                    .with("simpleslengths", lengths),
            );
        }
        None => {
            let words = g.simples.words.iter().map(|w| Value::int_list(w.iter().map(|&a| u64::from(a) + 1)));
            files.push(
                DataFile::new(simples_file(name))
                    .with("simpleswords", Value::list(words))
                    .with("simpleslengths", lengths),
            );
        }
    }
    let top = max_degree.min(res.top_degree());
    for k in 2..=top {
        let (cf, var) = cells_file(k);
        let cells = res.cells().cells(k).iter().map(|c| Value::int_list(c.atoms().iter().map(|&a| u64::from(a) + 1)));
        files.push(DataFile::new(cf).with(var, Value::list(cells)));
        if let Ok(chains) = res.differentials(k) {
            let (df, var) = dcells_file(k);
            let v = Value::list(chains.into_iter().map(|c| encode_chain(res.cells(), k - 1, c)));
            files.push(DataFile::new(df).with(var, v));
        }
    }
    for f in &files {
        write(dir, f)?;
    }
    Ok(ExportSummary { files: files.iter().map(|f| dir.join(&f.name)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The braid monoid of S_4 from permutations: simples are all of S_4
    /// with lengths given by inversions.
    fn s4_data() -> (Vec<Perm>, Vec<Perm>, Vec<u32>) {
        let mut simples = Vec::new();
        let mut lengths = Vec::new();
        let mut images: Vec<u32> = vec![0, 1, 2, 3];
        loop {
            simples.push(Perm::from_images(images.clone()).unwrap());
            lengths.push((0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| images[i] > images[j]).count() as u32);
            // next lexicographic permutation
            let Some(i) = (0..3).rev().find(|&i| images[i] < images[i + 1]) else { break };
            let j = (i + 1..4).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        let atoms = (1..=3u64).map(|i| Perm::from_cycles(&[vec![i, i + 1]]).unwrap()).collect();
        (atoms, simples, lengths)
    }

    #[test]
    fn lengths_are_recomputed() {
        let (atoms, simples, lengths) = s4_data();
        let r = recompute_lengths(&atoms, &simples);
        assert_eq!(r, lengths.iter().map(|&l| Some(l)).collect::<Vec<_>>());
    }

    #[test]
    fn export_import_round_trip() {
        let (atoms, simples, lengths) = s4_data();
        let g = build_from_data("A3", &atoms, &simples, &lengths).unwrap();
        let mut r = Resolution::new(&g);
        r.compute_through(g.num_atoms()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let summary = export_dir(&r, dir.path(), "A3", 10).unwrap();
        assert_eq!(summary.files.len(), 2 + 2 * 2);
        let data = import_dir(dir.path(), "A3", &ImportOptions { differentials: true, max_degree: None }).unwrap();
        assert_eq!(data.atoms, atoms);
        let g2 = data.build().unwrap();
        let local = CellComplex::new(&g2);
        let v = validate_data(&data, &local);
        assert!(v.passed(), "{:?}", v.checks);
        let r2 = data.resolution(&g2).unwrap();
        for k in 1..=3 {
            assert_eq!(r2.differentials(k).unwrap(), r.differentials(k).unwrap());
        }
        // the text itself round-trips
        for f in &summary.files {
            let text = fs::read_to_string(f).unwrap();
            let parsed = parse("x", &text).unwrap();
            assert_eq!(DataFile { name: "x".into(), ..parsed.clone() }.to_text(), text);
        }
    }

    #[test]
    fn validation_flags_inconsistencies() {
        let (atoms, simples, mut lengths) = s4_data();
        let g = build_from_data("A3", &atoms, &simples, &lengths).unwrap();
        let local = CellComplex::new(&g);
        let mut cells = BTreeMap::new();
        let mut two = local.cells(2).to_vec();
        two.swap(0, 1);
        cells.insert(2, two);
        lengths[5] += 1;
        let data = DataSet { name: "A3".into(), atoms, simples, lengths, cells, differentials: BTreeMap::new() };
        let v = validate_data(&data, &local);
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["simpleslengths match recomputed lengths", "cells2N equals local enumeration"]);
    }

    #[test]
    fn missing_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(import_dir(dir.path(), "G34", &ImportOptions::default()), Err(GapError::Io { .. })));
    }
}
