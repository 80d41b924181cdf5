//! Cells, chains and the differential of the Dehornoy–Lafont complex.
//!
//! A `k`-cell is a strictly increasing tuple of atoms closed under the
//! suffix condition. `∂` on degree `n+1` is built from degree `n` alone:
//! `∂[α,A] = c[A] − s(c·∂[A])`, where `c·lcm(A) = lcm(α, A)` and `s` is the
//! contracting homotopy.

mod cells;
mod chain;
mod resolution;

pub use cells::{cell_lcm, enumerate_cells, euler_characteristic, Cell, CellComplex};
pub use chain::{Chain, ChainBuilder, Term};
pub use resolution::{DifferentialStore, Provenance, Resolution};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {0} does not exist")]
    NoSuchDegree(usize),
    #[error("cell {cell} of degree {degree} does not exist")]
    NoSuchCell { degree: usize, cell: u32 },
    #[error("differentials of degree {0} are incomplete")]
    Incomplete(usize),
    #[error("reduction produced a tuple that is not a cell")]
    NotACell,
    #[error("expected a right divisor during reduction")]
    Division,
}
