//! Specialization of a complex over the monoid ring to matrices over a
//! coefficient ring: trivial (`b ↦ 1`), sign (`b ↦ (−1)^len b`) and Laurent
//! (`b ↦ t^len b`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Field, Poly, Ring};
use crate::complex::{ComplexError, Resolution};
use crate::matrix::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("sign coefficients need atoms of order two")]
    NotInvolutions,
    #[error("d{0} ∘ d{1} is not zero")]
    CompositionNonzero(usize, usize),
}

/// The module structure on the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Trivial,
    Sign,
    Laurent,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Trivial => "trivial",
            Coefficients::Sign => "sign",
            Coefficients::Laurent => "laurent",
        })
    }
}

impl FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trivial" => Ok(Coefficients::Trivial),
            "sign" => Ok(Coefficients::Sign),
            "laurent" | "milnor" => Ok(Coefficients::Laurent),
            _ => Err(format!("unknown coefficients `{s}` (expected trivial, sign or laurent)")),
        }
    }
}

/// A free complex whose boundary entries are integer combinations of
/// monoid elements, remembered only through an additive weight (the atom
/// length for Garside monoids). This is all the three coefficient modules
/// can see.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedComplex {
    pub counts: Vec<usize>,
    /// `columns[n][j]` lists `(row, coefficient, weight)` for `d_n` applied
    /// to the `j`-th `n`-cell; `columns[0]` is empty.
    pub columns: Vec<Vec<Vec<(u32, BigInt, u32)>>>,
}

impl WeightedComplex {
    /// Reads degrees `1..=max_degree` of a resolution; each must be complete.
    pub fn from_resolution(res: &Resolution<'_>, max_degree: usize) -> Result<Self, SpecializeError> {
        let top = max_degree.min(res.top_degree());
        let counts: Vec<usize> = (0..=top).map(|d| res.cells().count(d)).collect();
        let mut columns = vec![Vec::new()];
        for degree in 1..=top {
            let chains = res.differentials(degree)?;
            columns.push(
                chains
                    .iter()
                    .map(|ch| ch.terms().iter().map(|t| (t.cell, t.coeff.clone(), t.element.length())).collect())
                    .collect(),
            );
        }
        Ok(WeightedComplex { counts, columns })
    }

    pub fn top_degree(&self) -> usize {
        self.counts.len() - 1
    }

    /// Matrices over `R`, with `phi(weight)` for each monoid element.
    pub fn specialize_with<R: Ring>(&self, ctx: R::Ctx, phi: impl Fn(u32) -> R + Sync) -> SpecializedComplex<R> {
        let mut matrices = vec![SparseMatrix::zeros(0, self.counts[0], ctx)];
        for n in 1..=self.top_degree() {
            let cols: Vec<Vec<(u32, R)>> = self.columns[n]
                .par_iter()
                .map(|col| col.iter().map(|(r, c, w)| (*r, phi(*w).mul(&big_to_ring(c, ctx)))).collect())
                .collect();
            let mut m = SparseMatrix::zeros(self.counts[n - 1], self.counts[n], ctx);
            for (j, col) in cols.into_iter().enumerate() {
                m.set_column(j, col);
            }
            matrices.push(m);
        }
        SpecializedComplex { counts: self.counts.clone(), matrices }
    }

    /// Integer matrices for trivial or sign coefficients.
    pub fn specialize_integer(&self, coeffs: Coefficients) -> SpecializedComplex<BigInt> {
        match coeffs {
            Coefficients::Trivial => self.specialize_with((), |_| BigInt::from(1)),
            Coefficients::Sign => self.specialize_with((), |w| BigInt::from(if w % 2 == 0 { 1 } else { -1 })),
            Coefficients::Laurent => panic!("laurent coefficients are polynomial"),
        }
    }

    /// Polynomial matrices with `b ↦ t^weight`.
    pub fn specialize_laurent<F: Field>(&self, ctx: F::Ctx) -> SpecializedComplex<Poly<F>> {
        self.specialize_with(ctx, |w| Poly::<F>::monomial(ctx, w as usize))
    }
}

fn big_to_ring<R: Ring>(c: &BigInt, ctx: R::Ctx) -> R {
    match i64::try_from(c) {
        Ok(v) => R::from_i64(v, ctx),
        Err(_) => {
            // split into 2^32-sized digits
            let (sign, digits) = c.to_u32_digits();
            let base = R::from_i64(1 << 32, ctx);
            let mut acc = R::zero(ctx);
            for d in digits.iter().rev() {
                acc = acc.mul(&base).add(&R::from_i64(*d as i64, ctx));
            }
            if sign == num_bigint::Sign::Minus {
                acc.neg()
            } else {
                acc
            }
        }
    }
}

/// Boundary matrices `d_n` (rows: `(n−1)`-cells, columns: `n`-cells) over a
/// coefficient ring. `matrices[0]` is the zero map out of degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedComplex<R: Ring> {
    pub counts: Vec<usize>,
    pub matrices: Vec<SparseMatrix<R>>,
}

impl<R: Ring> SpecializedComplex<R> {
    pub fn top_degree(&self) -> usize {
        self.counts.len() - 1
    }

    /// `d_n`, or the empty map beyond the top degree.
    pub fn d(&self, n: usize) -> SparseMatrix<R> {
        match self.matrices.get(n) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.counts.get(n - 1).copied().unwrap_or(0), 0, self.matrices[0].ctx()),
        }
    }

    /// Verifies `d_n ∘ d_{n+1} = 0` for all consecutive pairs.
    pub fn check_composition(&self) -> Result<(), SpecializeError> {
        for n in 1..self.matrices.len().saturating_sub(1) {
            if !self.matrices[n].mul(&self.matrices[n + 1]).is_zero() {
                return Err(SpecializeError::CompositionNonzero(n, n + 1));
            }
        }
        Ok(())
    }

    /// Total number of nonzero entries across all degrees.
    pub fn nnz(&self) -> usize {
        self.matrices.iter().map(SparseMatrix::nnz).sum()
    }
}

impl<F: Field> SpecializedComplex<Poly<F>> {
    pub fn evaluate(&self, x: &F) -> SpecializedComplex<F>
    where
        F: Ring<Ctx = <F as Field>::Ctx>,
    {
        let ctx = Field::ctx(x);
        let matrices = self.matrices.iter().map(|m| m.map(ctx, |p| p.eval(x))).collect();
        SpecializedComplex { counts: self.counts.clone(), matrices }
    }

    /// `d_n` with the lowest power of `t` divided out of each column. Since
    /// `t` is a unit in the Laurent ring this keeps rank and invariant
    /// factors, though the rescaled matrices no longer compose to zero.
    pub fn column_normalized(&self, n: usize) -> SparseMatrix<Poly<F>> {
        let m = self.d(n);
        let shifts: Vec<usize> =
            (0..m.cols()).map(|j| m.column(j).iter().map(|(_, p)| p.t_valuation()).min().unwrap_or(0)).collect();
        m.map_columns(m.ctx(), |j, p| p.shift_down(shifts[j]))
    }
}

impl SpecializedComplex<BigInt> {
    pub fn to_rational(&self) -> SpecializedComplex<BigRational> {
        SpecializedComplex {
            counts: self.counts.clone(),
            matrices: self.matrices.iter().map(|m| m.map((), |v| BigRational::from_integer(v.clone()))).collect(),
        }
    }
}

/// Specializes a resolution, rejecting sign coefficients when the atoms are
/// known not to be involutions.
pub fn specialize_resolution(
    res: &Resolution<'_>,
    max_degree: usize,
    coeffs: Coefficients,
) -> Result<SpecializedComplex<BigInt>, SpecializeError> {
    if coeffs == Coefficients::Sign && res.structure().atoms_are_involutions() == Some(false) {
        return Err(SpecializeError::NotInvolutions);
    }
    let w = WeightedComplex::from_resolution(res, max_degree)?;
    let out = w.specialize_integer(coeffs);
    out.check_composition()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::garside::{build_from_presentation, Presentation};

    fn g12() -> WeightedComplex {
        let g = Box::leak(Box::new(build_from_presentation(&Presentation::g12()).unwrap()));
        let mut r = Resolution::new(g);
        r.compute_through(2).unwrap();
        WeightedComplex::from_resolution(&r, 2).unwrap()
    }

    #[test]
    fn trivial_first_differential_vanishes() {
        let s = g12().specialize_integer(Coefficients::Trivial);
        assert!(s.matrices[1].is_zero());
        s.check_composition().unwrap();
    }

    #[test]
    fn sign_first_differential_is_minus_two() {
        let s = g12().specialize_integer(Coefficients::Sign);
        for j in 0..3 {
            assert_eq!(s.matrices[1].get(0, j), BigInt::from(-2));
        }
        s.check_composition().unwrap();
    }

    #[test]
    fn laurent_evaluates_to_trivial_and_sign() {
        let w = g12();
        let l = w.specialize_laurent::<Rational>(());
        l.check_composition().unwrap();
        let one = Rational::from_integer(1.into());
        assert_eq!(l.evaluate(&one), w.specialize_integer(Coefficients::Trivial).to_rational());
        assert_eq!(l.evaluate(&-one), w.specialize_integer(Coefficients::Sign).to_rational());
        assert!(l.nnz() <= w.columns.iter().flatten().map(Vec::len).sum());
        for n in 1..=2 {
            let m = l.column_normalized(n);
            for j in 0..m.cols() {
                assert!(m.column(j).iter().any(|(_, p)| p.t_valuation() == 0));
            }
        }
    }

    #[test]
    fn large_coefficients_survive() {
        let big: BigInt = BigInt::from(3).pow(50);
        let v: BigInt = big_to_ring(&-big.clone(), ());
        assert_eq!(v, -big);
    }
}
