//! Column-sparse matrices over a [`Ring`].

use std::fmt::Write as _;

use crate::algebra::Ring;

/// A `rows × cols` matrix stored column by column; each column holds
/// `(row, value)` pairs sorted by row, with no zero values.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R: Ring> {
    rows: usize,
    ctx: R::Ctx,
    columns: Vec<Vec<(u32, R)>>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize, ctx: R::Ctx) -> Self {
        SparseMatrix { rows, ctx, columns: vec![Vec::new(); cols] }
    }

    /// Builds a column from unsorted entries, summing repeated rows.
    pub fn set_column(&mut self, col: usize, mut entries: Vec<(u32, R)>) {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, R)> = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            assert!((r as usize) < self.rows, "row {r} out of range");
            match out.last_mut() {
                Some((lr, lv)) if *lr == r => *lv = lv.add(&v),
                _ => out.push((r, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        self.columns[col] = out;
    }

    pub fn from_dense(rows: &[Vec<R>], ctx: R::Ctx) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(nrows, ncols, ctx);
        for c in 0..ncols {
            let entries = (0..nrows).map(|r| (r as u32, rows[r][c].clone())).collect();
            m.set_column(c, entries);
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut out = vec![vec![R::zero(self.ctx); self.cols()]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r as usize][c] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn ctx(&self) -> R::Ctx {
        self.ctx
    }

    pub fn column(&self, c: usize) -> &[(u32, R)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> R {
        let column = &self.columns[col];
        match column.binary_search_by_key(&(row as u32), |e| e.0) {
            Ok(i) => column[i].1.clone(),
            Err(_) => R::zero(self.ctx),
        }
    }

    /// Applies `f` entrywise; zeros produced by `f` are dropped.
    pub fn map<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> SparseMatrix<S> {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, f(v))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows: self.rows, ctx, columns }
    }

    /// Maps each column with a column-dependent function.
    pub fn map_columns<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(usize, &R) -> S) -> SparseMatrix<S> {
        let columns = self
            .columns
            .iter()
            .enumerate()
            .map(|(c, col)| col.iter().map(|(r, v)| (*r, f(c, v))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows: self.rows, ctx, columns }
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, R)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                cols[*r as usize].push((c as u32, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols(), ctx: self.ctx, columns: cols }
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut out = SparseMatrix::zeros(self.rows, other.cols(), self.ctx);
        for (c, col) in other.columns.iter().enumerate() {
            let mut entries = Vec::new();
            for (k, b) in col {
                for (r, a) in &self.columns[*k as usize] {
                    entries.push((*r, a.mul(b)));
                }
            }
            out.set_column(c, entries);
        }
        out
    }

    /// Coordinate-list text: a header line, then one `row col value` line
    /// per nonzero entry (1-based), column-major.
    pub fn to_coordinate_text(&self, ring: &str, degree: usize) -> String {
        let mut s = String::new();
        writeln!(s, "% ring {ring} degree {degree} rows {} cols {} nnz {}", self.rows, self.cols(), self.nnz()).unwrap();
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                writeln!(s, "{} {} {}", r + 1, c + 1, v).unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        let d: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        SparseMatrix::from_dense(&d, ())
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), m(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn coordinate_text() {
        let a = m(&[&[0, -2], &[1, 0]]);
        assert_eq!(a.to_coordinate_text("ZZ", 1), "% ring ZZ degree 1 rows 2 cols 2 nnz 2\n2 1 1\n1 2 -2\n");
    }
}
