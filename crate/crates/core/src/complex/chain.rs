use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::CellComplex;
use crate::garside::{Element, GarsideStructure};

/// One summand `coeff · element · [cell]`; `cell` indexes the cells of the
/// chain's degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub cell: u32,
    pub element: Element,
    pub coeff: BigInt,
}

/// A finite combination of cells of one degree with coefficients in the
/// monoid ring. Terms are sorted by cell, then element, and never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    terms: Vec<Term>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Builds a chain from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut b = ChainBuilder::default();
        for t in terms {
            b.add(t.cell, t.element, &t.coeff);
        }
        b.finish()
    }

    pub fn single(cell: u32, element: Element) -> Self {
        Chain { terms: vec![Term { cell, element, coeff: BigInt::one() }] }
    }

    pub fn neg(&self) -> Chain {
        Chain {
            terms: self.terms.iter().map(|t| Term { coeff: -&t.coeff, ..t.clone() }).collect(),
        }
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut b = ChainBuilder::default();
        b.add_chain(self, &BigInt::one());
        b.add_chain(other, &-BigInt::one());
        b.finish()
    }

    /// `s · self` for a simple `s` acting on the left.
    pub fn left_mul_simple(&self, g: &GarsideStructure, s: u32) -> Chain {
        Chain::from_terms(self.terms.iter().map(|t| Term {
            cell: t.cell,
            element: g.left_mul_simple(s, &t.element),
            coeff: t.coeff.clone(),
        }))
    }

    pub fn left_mul(&self, g: &GarsideStructure, x: &Element) -> Chain {
        Chain::from_terms(self.terms.iter().map(|t| Term {
            cell: t.cell,
            element: g.multiply(x, &t.element),
            coeff: t.coeff.clone(),
        }))
    }

    pub fn display<'a>(&'a self, g: &'a GarsideStructure, cells: &'a CellComplex, degree: usize) -> impl fmt::Display + 'a {
        DisplayChain { chain: self, g, cells, degree }
    }
}

/// Accumulates terms in a hash map; `finish` yields the canonical chain.
#[derive(Default)]
pub struct ChainBuilder {
    acc: HashMap<(u32, Element), BigInt>,
}

impl ChainBuilder {
    pub fn add(&mut self, cell: u32, element: Element, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        *self.acc.entry((cell, element)).or_default() += coeff;
    }

    pub fn add_chain(&mut self, chain: &Chain, scale: &BigInt) {
        for t in &chain.terms {
            self.add(t.cell, t.element.clone(), &(&t.coeff * scale));
        }
    }

    pub fn finish(self) -> Chain {
        let mut terms: Vec<Term> = self
            .acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((cell, element), coeff)| Term { cell, element, coeff })
            .collect();
        terms.sort_by(|a, b| (a.cell, &a.element).cmp(&(b.cell, &b.element)));
        Chain { terms }
    }
}

struct DisplayChain<'a> {
    chain: &'a Chain,
    g: &'a GarsideStructure,
    cells: &'a CellComplex,
    degree: usize,
}

impl fmt::Display for DisplayChain<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_zero() {
            return f.write_str("0");
        }
        for (k, t) in self.chain.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = t.coeff.abs();
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if !t.element.is_identity() {
                write!(f, "{}", t.element.display(self.g))?;
            }
            let cell = &self.cells.cells(self.degree)[t.cell as usize];
            write!(f, "{}", cell.display(self.g))?;
        }
        Ok(())
    }
}
