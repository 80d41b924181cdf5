//! The Salvetti complex of a dihedral Artin group, used as an independent
//! check on the Garside pipeline.
//!
//! Cells are `[∅]`, `[a]`, `[b]`, `[a,b]` with `∂[a] = (a−1)[∅]`,
//! `∂[b] = (b−1)[∅]` and
//! `∂[a,b] = (Σ_k (−1)^k π_k(a,b))[b] − (Σ_k (−1)^k π_k(b,a))[a]`,
//! `k < m`, where `π_k(a,b) = abab…` has length `k`. Boundary coefficients
//! multiply faces from the right, so `∂∂[a,b] = (b−1)·c_b − (a−1)·c_a`,
//! which vanishes by the braid relation.

use num_bigint::BigInt;
use thiserror::Error;

use crate::garside::{build_from_presentation, GarsideError, Presentation};
use crate::specialize::WeightedComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SalvettiError {
    #[error("dihedral type needs m ≥ 2, got {0}")]
    BadOrder(usize),
}

/// `π_k(x, y)`: the alternating word `xyxy…` of length `k`, as 0/1 letters.
pub fn alternating_prefix(first: u8, k: usize) -> Vec<u8> {
    (0..k).map(|i| if i % 2 == 0 { first } else { 1 - first }).collect()
}

/// One summand `coeff · word · [cell]`; letters 0 = a, 1 = b and cells
/// 0 = `[a]`, 1 = `[b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalvettiTerm {
    pub coeff: i64,
    pub word: Vec<u8>,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralComplex {
    pub m: usize,
    /// `∂[a,b]`.
    pub top: Vec<SalvettiTerm>,
}

impl DihedralComplex {
    pub fn new(m: usize) -> Result<Self, SalvettiError> {
        if m < 2 {
            return Err(SalvettiError::BadOrder(m));
        }
        let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
        let mut top: Vec<SalvettiTerm> =
            (0..m).map(|k| SalvettiTerm { coeff: sign(k), word: alternating_prefix(0, k), cell: 1 }).collect();
        top.extend((0..m).map(|k| SalvettiTerm { coeff: -sign(k), word: alternating_prefix(1, k), cell: 0 }));
        Ok(DihedralComplex { m, top })
    }

    /// `∂[a,b]` in the form `(1-a+ab-…)[b] - (1-b+ba-…)[a]`.
    pub fn boundary_text(&self) -> String {
        let side = |cell: usize| {
            let mut s = String::new();
            for (i, t) in self.top.iter().filter(|t| t.cell == cell).enumerate() {
                let sign = t.coeff * if cell == 0 { -1 } else { 1 };
                if i > 0 || sign < 0 {
                    s.push(if sign < 0 { '-' } else { '+' });
                }
                if t.word.is_empty() {
                    s.push('1');
                } else {
                    s.extend(t.word.iter().map(|&l| if l == 0 { 'a' } else { 'b' }));
                }
            }
            s
        };
        format!("({})[b] - ({})[a]", side(1), side(0))
    }

    /// Checks `∂∂[a,b] = 0` in the Artin monoid ring, comparing words by
    /// their Garside normal forms.
    pub fn check_dd_zero(&self) -> Result<bool, GarsideError> {
        use std::collections::HashMap;
        let g = build_from_presentation(&Presentation::dihedral(self.m)?)?;
        let mut acc: HashMap<_, i64> = HashMap::new();
        for t in &self.top {
            // (x − 1)·c with x the generator of the face
            let face = t.cell as u16;
            let word: Vec<u16> = t.word.iter().map(|&l| l as u16).collect();
            let mut with_face = vec![face];
            with_face.extend_from_slice(&word);
            *acc.entry(g.normal_form(&with_face)).or_default() += t.coeff;
            *acc.entry(g.normal_form(&word)).or_default() -= t.coeff;
        }
        Ok(acc.values().all(|&c| c == 0))
    }

    /// The complex seen through an additive weight on the generators.
    pub fn weighted(&self, weight_a: u32, weight_b: u32) -> WeightedComplex {
        let weight = |w: &[u8]| w.iter().map(|&l| if l == 0 { weight_a } else { weight_b }).sum::<u32>();
        let one = BigInt::from(1);
        let d1 = vec![
            vec![(0, one.clone(), weight_a), (0, -one.clone(), 0)],
            vec![(0, one.clone(), weight_b), (0, -one, 0)],
        ];
        let d2 = vec![self.top.iter().map(|t| (t.cell as u32, BigInt::from(t.coeff), weight(&t.word))).collect()];
        WeightedComplex { counts: vec![1, 2, 1], columns: vec![Vec::new(), d1, d2] }
    }
}

/// The `m = 6` complex with `a ↦ t²`, `b ↦ t`, which computes the twelfth
/// exceptional rank-two group through its isomorphism with `I₂(6)`.
pub fn g13_weighted() -> WeightedComplex {
    DihedralComplex::new(6).expect("m = 6").weighted(2, 1)
}
