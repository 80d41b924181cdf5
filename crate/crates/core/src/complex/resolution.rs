use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CellComplex, Chain, ChainBuilder, ComplexError, Term};
use crate::garside::{Element, GarsideStructure};

/// How the differentials of one degree were obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Imported(String),
}

#[derive(Debug)]
struct DegreeStore {
    chains: Vec<Option<Chain>>,
    provenance: Provenance,
    /// `c[A] − ∂[α,A]` per cell, built once the degree is complete.
    tails: OnceLock<Vec<Chain>>,
}

/// Differentials keyed by degree and cell index. Degree `n` maps each
/// `n`-cell to an `(n−1)`-chain.
#[derive(Debug)]
pub struct DifferentialStore {
    degrees: Vec<DegreeStore>,
}

impl DifferentialStore {
    fn new(counts: &[usize]) -> Self {
        DifferentialStore {
            degrees: counts
                .iter()
                .map(|&n| DegreeStore { chains: vec![None; n], provenance: Provenance::Computed, tails: OnceLock::new() })
                .collect(),
        }
    }

    pub fn is_complete(&self, degree: usize) -> bool {
        degree == 0 || self.degrees.get(degree).is_some_and(|d| d.chains.iter().all(Option::is_some))
    }

    pub fn get(&self, degree: usize, cell: u32) -> Option<&Chain> {
        self.degrees.get(degree)?.chains.get(cell as usize)?.as_ref()
    }

    pub fn provenance(&self, degree: usize) -> Option<&Provenance> {
        self.degrees.get(degree).map(|d| &d.provenance)
    }

    pub fn missing(&self, degree: usize) -> Vec<u32> {
        self.degrees.get(degree).map_or(Vec::new(), |d| {
            d.chains.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(i, _)| i as u32).collect()
        })
    }
}

/// The free resolution of ℤ over the monoid ring, computed degree by degree.
pub struct Resolution<'g> {
    g: &'g GarsideStructure,
    cells: CellComplex,
    store: DifferentialStore,
}

impl<'g> Resolution<'g> {
    pub fn new(g: &'g GarsideStructure) -> Self {
        Resolution::with_cells(g, CellComplex::new(g))
    }

    pub fn with_cells(g: &'g GarsideStructure, cells: CellComplex) -> Self {
        let store = DifferentialStore::new(&cells.counts());
        Resolution { g, cells, store }
    }

    pub fn structure(&self) -> &'g GarsideStructure {
        self.g
    }

    pub fn cells(&self) -> &CellComplex {
        &self.cells
    }

    pub fn store(&self) -> &DifferentialStore {
        &self.store
    }

    pub fn top_degree(&self) -> usize {
        self.cells.top_degree()
    }

    pub fn differential(&self, degree: usize, cell: u32) -> Option<&Chain> {
        self.store.get(degree, cell)
    }

    /// All differentials of a degree, if complete.
    pub fn differentials(&self, degree: usize) -> Result<Vec<&Chain>, ComplexError> {
        let d = self.store.degrees.get(degree).ok_or(ComplexError::NoSuchDegree(degree))?;
        d.chains.iter().map(|c| c.as_ref().ok_or(ComplexError::Incomplete(degree))).collect()
    }

    /// Installs a differential. Returns an error if the cell is out of range.
    pub fn insert(&mut self, degree: usize, cell: u32, chain: Chain) -> Result<(), ComplexError> {
        let d = self.store.degrees.get_mut(degree).ok_or(ComplexError::NoSuchDegree(degree))?;
        let slot = d.chains.get_mut(cell as usize).ok_or(ComplexError::NoSuchCell { degree, cell })?;
        *slot = Some(chain);
        d.tails = OnceLock::new();
        Ok(())
    }

    pub fn set_provenance(&mut self, degree: usize, provenance: Provenance) {
        if let Some(d) = self.store.degrees.get_mut(degree) {
            d.provenance = provenance;
        }
    }

    /// Computes `∂[cell]` from the stored lower differential. Does not store it.
    pub fn compute(&self, degree: usize, cell: u32) -> Result<Chain, ComplexError> {
        let g = self.g;
        let atoms = self
            .cells
            .cells(degree)
            .get(cell as usize)
            .ok_or(ComplexError::NoSuchCell { degree, cell })?
            .atoms()
            .to_vec();
        match degree {
            0 => Ok(Chain::zero()),
            1 => {
                let a = g.element_of_simple(g.atom(atoms[0] as usize));
                let mut b = ChainBuilder::default();
                b.add(0, a, &BigInt::one());
                b.add(0, Element::identity(), &-BigInt::one());
                Ok(b.finish())
            }
            _ => {
                let lower = degree - 1;
                if !self.store.is_complete(lower) {
                    return Err(ComplexError::Incomplete(lower));
                }
                let tail_cell = super::Cell(atoms[1..].to_vec());
                let a_idx = self.cells.index_of(&tail_cell).ok_or(ComplexError::NotACell)?;
                let c = self.quotient(atoms[0], lower, a_idx);
                let image = self.store.get(lower, a_idx).expect("complete").left_mul_simple(g, c);
                let reduced = self.reduce(lower - 1, &image)?;
                Ok(Chain::single(a_idx, g.element_of_simple(c)).sub(&reduced))
            }
        }
    }

    /// `c` with `c · lcm(A) = lcm(α, A)`.
    fn quotient(&self, alpha: u16, degree: usize, cell: u32) -> u32 {
        let g = self.g;
        let lcm_a = self.cells.lcm(degree, cell);
        let l = g.left_lcm(g.atom(alpha as usize), lcm_a);
        g.rquot_unchecked(l, lcm_a)
    }

    /// `c[A] − ∂[α,A]` for each cell of `degree`, cached.
    fn tails(&self, degree: usize) -> Result<&[Chain], ComplexError> {
        let d = self.store.degrees.get(degree).ok_or(ComplexError::NoSuchDegree(degree))?;
        if let Some(t) = d.tails.get() {
            return Ok(t);
        }
        if !self.store.is_complete(degree) {
            return Err(ComplexError::Incomplete(degree));
        }
        let tails = self
            .cells
            .cells(degree)
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                let chain = d.chains[i].as_ref().expect("complete");
                let atoms = cell.atoms();
                let lower = degree - 1;
                let a_idx = self.cells.index_of(&cell.tail()).expect("suffix closed");
                let c = if lower == 0 { self.g.atom(atoms[0] as usize) } else { self.quotient(atoms[0], lower, a_idx) };
                Chain::single(a_idx, self.g.element_of_simple(c)).sub(chain)
            })
            .collect();
        Ok(d.tails.get_or_init(|| tails))
    }

    /// The contracting homotopy `s_k`, sending a `k`-chain to a `(k+1)`-chain.
    ///
    /// Terms are rewritten largest first, so contributions to the same
    /// `x[A]` merge before they are expanded.
    pub fn reduce(&self, degree: usize, chain: &Chain) -> Result<Chain, ComplexError> {
        let g = self.g;
        let tails = self.tails(degree + 1)?;
        type Key = (Reverse<u32>, u32, Element);
        let mut queue: BTreeMap<Key, BigInt> = BTreeMap::new();
        let key = |cell: u32, x: Element| (Reverse(x.length() + g.length(self.cells.lcm(degree, cell))), cell, x);
        for t in chain.terms() {
            *queue.entry(key(t.cell, t.element.clone())).or_default() += &t.coeff;
        }
        let mut out = ChainBuilder::default();
        while let Some(((_, b, x), coeff)) = queue.pop_first() {
            if coeff.is_zero() {
                continue;
            }
            let first = self.cells.cells(degree)[b as usize].atoms().first().copied();
            let whole = g.mul_simple(&x, self.cells.lcm(degree, b));
            let Some(alpha) = g.alpha(&whole) else { continue };
            let alpha = alpha as u16;
            if first == Some(alpha) {
                continue;
            }
            let up = self.cells.extend_index(alpha, degree, b).ok_or(ComplexError::NotACell)?;
            let c = if degree == 0 { g.atom(alpha as usize) } else { self.quotient(alpha, degree, b) };
            let y = g.right_divide_simple(&x, c).ok_or(ComplexError::Division)?;
            for t in tails[up as usize].terms() {
                let z = g.multiply(&y, &t.element);
                *queue.entry(key(t.cell, z)).or_default() += &coeff * &t.coeff;
            }
            out.add(up, y, &coeff);
        }
        Ok(out.finish())
    }

    /// The chain `Γ(x) = s_0(x[∅])` in degree one.
    pub fn gamma(&self, x: &Element) -> Result<Chain, ComplexError> {
        self.reduce(0, &Chain::single(0, x.clone()))
    }

    /// `∂` applied to a `degree`-chain.
    pub fn apply(&self, degree: usize, chain: &Chain) -> Result<Chain, ComplexError> {
        let mut b = ChainBuilder::default();
        for t in chain.terms() {
            let d = self.store.get(degree, t.cell).ok_or(ComplexError::Incomplete(degree))?;
            for u in d.terms() {
                b.add(u.cell, self.g.multiply(&t.element, &u.element), &(&t.coeff * &u.coeff));
            }
        }
        Ok(b.finish())
    }

    /// Computes and stores every degree up to `max_degree` sequentially.
    pub fn compute_through(&mut self, max_degree: usize) -> Result<(), ComplexError> {
        for degree in 1..=max_degree.min(self.top_degree()) {
            for cell in self.store.missing(degree) {
                let chain = self.compute(degree, cell)?;
                self.insert(degree, cell, chain)?;
            }
        }
        Ok(())
    }

    /// Checks `∂∘∂ = 0` on every cell of `degree` (and the augmentation for
    /// degree one). Returns the failing cells.
    pub fn check_dd_zero(&self, degree: usize) -> Result<Vec<u32>, ComplexError> {
        let mut bad = Vec::new();
        for (i, d) in self.differentials(degree)?.into_iter().enumerate() {
            let ok = if degree == 1 {
                d.terms().iter().map(|t| &t.coeff).sum::<BigInt>().is_zero()
            } else {
                self.apply(degree - 1, d)?.is_zero()
            };
            if !ok {
                bad.push(i as u32);
            }
        }
        Ok(bad)
    }

    /// Builds a chain from `(coefficient, word, cell atoms)` triples.
    pub fn chain_of(&self, degree: usize, terms: &[(i64, &[u16], &[u16])]) -> Result<Chain, ComplexError> {
        let mut out = Vec::with_capacity(terms.len());
        for &(c, word, cell) in terms {
            let cell = super::Cell(cell.to_vec());
            if cell.degree() != degree {
                return Err(ComplexError::NotACell);
            }
            let idx = self.cells.index_of(&cell).ok_or(ComplexError::NotACell)?;
            out.push(Term { cell: idx, element: self.g.normal_form(word), coeff: BigInt::from(c) });
        }
        Ok(Chain::from_terms(out))
    }
}
