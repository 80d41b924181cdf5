use std::collections::HashMap;
use std::fmt;

use crate::garside::{GarsideStructure, Simple};

/// A strictly increasing tuple of atom positions `[a_1, …, a_k]` such that,
/// for every suffix, `a_i` is the least atom right-dividing the least common
/// left multiple of `a_i, …, a_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell(pub Vec<u16>);

impl Cell {
    pub fn empty() -> Self {
        Cell(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn atoms(&self) -> &[u16] {
        &self.0
    }

    /// The cell with its first atom removed.
    pub fn tail(&self) -> Cell {
        Cell(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn display<'a>(&'a self, g: &'a GarsideStructure) -> impl fmt::Display + 'a {
        DisplayCell { cell: self, g }
    }
}

struct DisplayCell<'a> {
    cell: &'a Cell,
    g: &'a GarsideStructure,
}

impl fmt::Display for DisplayCell<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cell.0.is_empty() {
            return f.write_str("[]");
        }
        let names: Vec<&str> = self.cell.0.iter().map(|&a| self.g.atoms.names[a as usize].as_str()).collect();
        write!(f, "[{}]", names.join(","))
    }
}

/// Least common left multiple of the atoms of a cell (the identity for `[]`).
pub fn cell_lcm(g: &GarsideStructure, atoms: &[u16]) -> Simple {
    atoms.iter().fold(g.identity(), |acc, &a| g.left_lcm(acc, g.atom(a as usize)))
}

/// Cells of degree `n`, in lexicographic order.
pub fn enumerate_cells(g: &GarsideStructure, n: usize) -> Vec<Cell> {
    let mut current = vec![Cell::empty()];
    for _ in 0..n {
        current = extend_cells(g, &current);
        if current.is_empty() {
            break;
        }
    }
    current
}

fn extend_cells(g: &GarsideStructure, lower: &[Cell]) -> Vec<Cell> {
    let mut out = Vec::new();
    for cell in lower {
        let lcm = cell_lcm(g, &cell.0);
        let bound = cell.0.first().map_or(g.num_atoms(), |&a| a as usize);
        for alpha in 0..bound {
            let l = g.left_lcm(g.atom(alpha), lcm);
            if g.least_right_atom(l) == Some(alpha) {
                let mut atoms = Vec::with_capacity(cell.0.len() + 1);
                atoms.push(alpha as u16);
                atoms.extend_from_slice(&cell.0);
                out.push(Cell(atoms));
            }
        }
    }
    out.sort();
    out
}

/// All cells of a structure, degree by degree, with their lcms and lookup
/// indices.
#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<Vec<Cell>>,
    lcms: Vec<Vec<Simple>>,
    index: Vec<HashMap<Cell, u32>>,
}

impl CellComplex {
    /// Enumerates every nonempty degree.
    pub fn new(g: &GarsideStructure) -> Self {
        let mut cells = vec![vec![Cell::empty()]];
        loop {
            let next = extend_cells(g, cells.last().unwrap());
            if next.is_empty() {
                break;
            }
            cells.push(next);
        }
        CellComplex::from_cells(g, cells)
    }

    /// A complex with given cell lists; `cells[0]` must be `[[]]`.
    pub fn from_cells(g: &GarsideStructure, cells: Vec<Vec<Cell>>) -> Self {
        let lcms = cells.iter().map(|d| d.iter().map(|c| cell_lcm(g, &c.0)).collect()).collect();
        let index = cells
            .iter()
            .map(|d| d.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect())
            .collect();
        CellComplex { cells, lcms, index }
    }

    /// Highest degree with at least one cell.
    pub fn top_degree(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, degree: usize) -> &[Cell] {
        self.cells.get(degree).map_or(&[], |c| c.as_slice())
    }

    pub fn count(&self, degree: usize) -> usize {
        self.cells(degree).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn lcm(&self, degree: usize, cell: u32) -> Simple {
        self.lcms[degree][cell as usize]
    }

    pub fn index_of(&self, cell: &Cell) -> Option<u32> {
        self.index.get(cell.degree())?.get(cell).copied()
    }

    /// Index of `[alpha, cell]` one degree up, if that is a cell.
    pub fn extend_index(&self, alpha: u16, degree: usize, cell: u32) -> Option<u32> {
        let lower = &self.cells[degree][cell as usize];
        let mut atoms = Vec::with_capacity(degree + 1);
        atoms.push(alpha);
        atoms.extend_from_slice(&lower.0);
        self.index.get(degree + 1)?.get(&Cell(atoms)).copied()
    }
}

/// Alternating sum of cell counts.
pub fn euler_characteristic(counts: &[usize]) -> i64 {
    counts.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}
