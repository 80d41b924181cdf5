//! Smith normal form over a Euclidean domain.
//!
//! [`smith_sparse`] computes rank and invariant factors by sparse
//! elimination and is what homology uses. [`smith_dense`] also returns the
//! unimodular transforms and is meant for small matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{check_prime, invariant_chain, Euclidean, Field, Fp, Poly, Rational};
use crate::matrix::SparseMatrix;

/// Invariant factors of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithResult<R: Euclidean> {
    pub rank: usize,
    /// Non-unit invariant factors, normalized, each dividing the next.
    pub factors: Vec<R>,
}

/// `U·A·V = D` with `U`, `V` invertible and `D` diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithTransforms<R: Euclidean> {
    pub u: Vec<Vec<R>>,
    pub d: Vec<Vec<R>>,
    pub v: Vec<Vec<R>>,
    /// Full diagonal of `D` up to the rank, including units.
    pub diagonal: Vec<R>,
}

struct Work<R: Euclidean> {
    rows: Vec<BTreeMap<u32, R>>,
    cols: Vec<BTreeSet<u32>>,
}

impl<R: Euclidean> Work<R> {
    fn set(&mut self, r: u32, c: u32, v: R) {
        if v.is_zero() {
            self.rows[r as usize].remove(&c);
            self.cols[c as usize].remove(&r);
        } else {
            self.rows[r as usize].insert(c, v);
            self.cols[c as usize].insert(r);
        }
    }

    fn get(&self, r: u32, c: u32) -> Option<&R> {
        self.rows[r as usize].get(&c)
    }

    /// `row_i ← row_i − k·row_r`.
    fn row_axpy(&mut self, i: u32, r: u32, k: &R) {
        let src: Vec<(u32, R)> = self.rows[r as usize].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.get(i, c).cloned().unwrap_or_else(|| R::zero(v.ctx()));
            self.set(i, c, cur.sub(&k.mul(&v)));
        }
    }

    /// Replaces rows `(r, i)` by `(x·r + y·i, z·r + w·i)`.
    fn row_mix(&mut self, r: u32, i: u32, [x, y, z, w]: [&R; 4]) {
        let keys: BTreeSet<u32> = self.rows[r as usize].keys().chain(self.rows[i as usize].keys()).copied().collect();
        for c in keys {
            let a = self.get(r, c).cloned();
            let b = self.get(i, c).cloned();
            let ctx = a.as_ref().or(b.as_ref()).expect("key from a row").ctx();
            let a = a.unwrap_or_else(|| R::zero(ctx));
            let b = b.unwrap_or_else(|| R::zero(ctx));
            self.set(r, c, x.mul(&a).add(&y.mul(&b)));
            self.set(i, c, z.mul(&a).add(&w.mul(&b)));
        }
    }

    /// Replaces columns `(c, j)` by `(x·c + y·j, z·c + w·j)`.
    fn col_mix(&mut self, c: u32, j: u32, [x, y, z, w]: [&R; 4]) {
        let keys: BTreeSet<u32> = self.cols[c as usize].iter().chain(self.cols[j as usize].iter()).copied().collect();
        for r in keys {
            let a = self.get(r, c).cloned();
            let b = self.get(r, j).cloned();
            let ctx = a.as_ref().or(b.as_ref()).expect("key from a column").ctx();
            let a = a.unwrap_or_else(|| R::zero(ctx));
            let b = b.unwrap_or_else(|| R::zero(ctx));
            self.set(r, c, x.mul(&a).add(&y.mul(&b)));
            self.set(r, j, z.mul(&a).add(&w.mul(&b)));
        }
    }

    fn remove_row_col(&mut self, r: u32, c: u32) {
        for k in std::mem::take(&mut self.rows[r as usize]).into_keys() {
            self.cols[k as usize].remove(&r);
        }
        for k in std::mem::take(&mut self.cols[c as usize]) {
            self.rows[k as usize].remove(&c);
        }
    }

    /// Pivot choice: sparsest column, smallest entry in it, shortest row.
    /// Falls back to a global search for a unit when that entry is not one.
    fn choose_pivot(&self) -> Option<(u32, u32)> {
        let (c, _) = self.cols.iter().enumerate().filter(|(_, s)| !s.is_empty()).min_by_key(|(_, s)| s.len())?;
        let c = c as u32;
        let best = self.cols[c as usize]
            .iter()
            .map(|&r| (self.get(r, c).unwrap().norm(), self.rows[r as usize].len(), r))
            .min()
            .expect("nonempty column");
        let (_, _, r) = best;
        if self.get(r, c).unwrap().is_unit() || self.cols[c as usize].len() == 1 {
            return Some((r, c));
        }
        let mut unit: Option<(usize, u32, u32)> = None;
        for (cc, set) in self.cols.iter().enumerate() {
            for &rr in set {
                if self.get(rr, cc as u32).unwrap().is_unit() {
                    let cost = (set.len() - 1) * (self.rows[rr as usize].len() - 1);
                    if unit.is_none_or(|u| cost < u.0) {
                        unit = Some((cost, rr, cc as u32));
                    }
                }
            }
        }
        Some(unit.map_or((r, c), |(_, rr, cc)| (rr, cc)))
    }

    /// Clears row `r` and column `c` around the pivot; returns the pivot.
    fn eliminate(&mut self, r: u32, c: u32) -> R {
        loop {
            // clear the column
            let others: Vec<u32> = self.cols[c as usize].iter().copied().filter(|&i| i != r).collect();
            for i in others {
                let p = self.get(r, c).unwrap().clone();
                let a = self.get(i, c).unwrap().clone();
                match a.exact_div(&p) {
                    Some(q) => self.row_axpy(i, r, &q),
                    None => {
                        let (g, x, y) = p.ext_gcd(&a);
                        let z = a.exact_div(&g).unwrap().neg();
                        let w = p.exact_div(&g).unwrap();
                        self.row_mix(r, i, [&x, &y, &z, &w]);
                    }
                }
            }
            // clear the row; column c now holds only the pivot
            let mut dirty = false;
            let others: Vec<u32> = self.rows[r as usize].keys().copied().filter(|&j| j != c).collect();
            for j in others {
                let p = self.get(r, c).unwrap().clone();
                let b = self.get(r, j).unwrap().clone();
                if let Some(q) = b.exact_div(&p) {
                    if dirty {
                        let one = R::one(p.ctx());
                        let zero = R::zero(p.ctx());
                        self.col_mix(c, j, [&one, &zero, &q.neg(), &one]);
                    } else {
                        // column op touching only the pivot row
                        self.set(r, j, R::zero(p.ctx()));
                    }
                } else {
                    let (g, x, y) = p.ext_gcd(&b);
                    let z = b.exact_div(&g).unwrap().neg();
                    let w = p.exact_div(&g).unwrap();
                    self.col_mix(c, j, [&x, &y, &z, &w]);
                    dirty = true;
                }
            }
            if !dirty {
                return self.get(r, c).unwrap().clone();
            }
        }
    }
}

/// Rank and invariant factors by sparse elimination.
pub fn smith_sparse<R: Euclidean>(m: &SparseMatrix<R>) -> SmithResult<R> {
    let mut w = Work { rows: vec![BTreeMap::new(); m.rows()], cols: vec![BTreeSet::new(); m.cols()] };
    for c in 0..m.cols() {
        for (r, v) in m.column(c) {
            w.set(*r, c as u32, v.clone());
        }
    }
    let mut diagonal = Vec::new();
    while let Some((r, c)) = w.choose_pivot() {
        let p = w.eliminate(r, c);
        w.remove_row_col(r, c);
        diagonal.push(p);
    }
    SmithResult { rank: diagonal.len(), factors: invariant_chain(&diagonal) }
}

/// Primes just below `2^61`, largest first.
fn modular_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut p = (1u64 << 61) - 1;
        while out.len() < 64 {
            if check_prime(p) {
                out.push(p);
            }
            p -= 2;
        }
        out
    })
}

/// Reduces a matrix over `Q[t]` modulo `p`; `None` if `p` divides a
/// denominator.
fn reduce_mod(m: &SparseMatrix<Poly<Rational>>, p: u64) -> Option<SparseMatrix<Poly<Fp>>> {
    let mut out = SparseMatrix::zeros(m.rows(), m.cols(), p);
    for c in 0..m.cols() {
        let mut col = Vec::with_capacity(m.column(c).len());
        for (r, f) in m.column(c) {
            let mut coeffs = Vec::with_capacity(f.coeffs().len());
            for q in f.coeffs() {
                let d = Fp::from_bigint(q.denom(), p);
                if d.is_zero() {
                    return None;
                }
                coeffs.push(Fp::from_bigint(q.numer(), p).mul(&d.inv()));
            }
            col.push((*r, Poly::new(p, coeffs)));
        }
        out.set_column(c, col);
    }
    Some(out)
}

/// `a/b ≡ r (mod m)` with `|a|, b` below `sqrt(m/2)`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound || !Integer::gcd(&r1, &t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

struct Accumulated {
    modulus: BigInt,
    /// Residues of every coefficient of every factor.
    residues: Vec<Vec<BigInt>>,
}

impl Accumulated {
    fn add(&mut self, factors: &[Poly<Fp>], p: u64) {
        let pb = BigInt::from(p);
        let inv = Fp::from_bigint(&self.modulus, p).inv();
        for (res, f) in self.residues.iter_mut().zip(factors) {
            for (x, c) in res.iter_mut().zip(f.coeffs()) {
                // x + M * ((c - x) / M mod p)
                let k = Fp::new(0, p).add(c).sub(&Fp::from_bigint(x, p)).mul(&inv);
                *x += &self.modulus * BigInt::from(k.value());
            }
        }
        self.modulus *= pb;
    }

    fn reconstruct(&self) -> Option<Vec<Poly<Rational>>> {
        self.residues
            .iter()
            .map(|res| {
                let c = res.iter().map(|x| rational_reconstruct(x, &self.modulus)).collect::<Option<Vec<_>>>()?;
                Some(Poly::new((), c))
            })
            .collect()
    }
}

/// Rank and invariant factors over `Q[t]` by Smith forms over `F_p[t]` for
/// word-sized primes, Chinese remaindering and rational reconstruction.
///
/// A prime is kept when its rank is maximal and its total factor degree is
/// minimal among the primes seen; the result is accepted once one more
/// kept prime leaves the reconstruction unchanged. Falls back to exact
/// elimination if that does not happen within the prime budget.
pub fn smith_multimodular(m: &SparseMatrix<Poly<Rational>>) -> SmithResult<Poly<Rational>> {
    let signature = |s: &SmithResult<Poly<Fp>>| {
        (s.rank, s.factors.iter().map(|f| f.degree().unwrap_or(0)).collect::<Vec<_>>())
    };
    let total = |sig: &(usize, Vec<usize>)| sig.1.iter().sum::<usize>();
    let mut best: Option<((usize, Vec<usize>), Accumulated)> = None;
    let mut previous: Option<Vec<Poly<Rational>>> = None;
    for &p in modular_primes() {
        let Some(mp) = reduce_mod(m, p) else { continue };
        let s = smith_sparse(&mp);
        let sig = signature(&s);
        let replace = match &best {
            None => true,
            Some((b, _)) => sig.0 > b.0 || (sig.0 == b.0 && total(&sig) < total(b)),
        };
        if replace {
            let residues = s.factors.iter().map(|f| vec![BigInt::zero(); f.coeffs().len()]).collect();
            let mut acc = Accumulated { modulus: BigInt::one(), residues };
            acc.add(&s.factors, p);
            best = Some((sig, acc));
            previous = None;
            continue;
        }
        let (b, acc) = best.as_mut().unwrap();
        if *b != sig {
            continue;
        }
        acc.add(&s.factors, p);
        let current = acc.reconstruct();
        if let Some(factors) = current.as_ref().filter(|_| current == previous) {
            return SmithResult { rank: b.0, factors: factors.clone() };
        }
        previous = current;
    }
    smith_sparse(m)
}

fn identity<R: Euclidean>(n: usize, ctx: R::Ctx) -> Vec<Vec<R>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { R::one(ctx) } else { R::zero(ctx) }).collect()).collect()
}

fn row_combine<R: Euclidean>(m: &mut [Vec<R>], i: usize, j: usize, [x, y, z, w]: [&R; 4]) {
    for c in 0..m[i].len() {
        let a = m[i][c].clone();
        let b = m[j][c].clone();
        m[i][c] = x.mul(&a).add(&y.mul(&b));
        m[j][c] = z.mul(&a).add(&w.mul(&b));
    }
}

fn col_combine<R: Euclidean>(m: &mut [Vec<R>], i: usize, j: usize, [x, y, z, w]: [&R; 4]) {
    for row in m.iter_mut() {
        let a = row[i].clone();
        let b = row[j].clone();
        row[i] = x.mul(&a).add(&y.mul(&b));
        row[j] = z.mul(&a).add(&w.mul(&b));
    }
}

/// A determinant-one block sending `(p, a)` to `(g, 0)`. When `p` already
/// divides `a` the pivot is kept as is, so the pivot norm never stalls.
fn clearing_block<R: Euclidean>(p: &R, a: &R, one: &R, zero: &R) -> [R; 4] {
    if let Some(q) = a.exact_div(p) {
        return [one.clone(), zero.clone(), q.neg(), one.clone()];
    }
    let (g, x, y) = p.ext_gcd(a);
    // determinant x·w − y·z = (x·p + y·a)/g = 1
    [x, y, a.exact_div(&g).unwrap().neg(), p.exact_div(&g).unwrap()]
}

/// Smith form with transforms for a dense matrix. Every elementary step is
/// a 2×2 block of determinant one (or a swap, or a unit scaling), so `U`
/// and `V` are unimodular.
pub fn smith_dense<R: Euclidean>(a: &[Vec<R>], ctx: R::Ctx) -> SmithTransforms<R> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<R>> = a.to_vec();
    let mut u = identity::<R>(m, ctx);
    let mut v = identity::<R>(n, ctx);
    let one = R::one(ctx);
    let zero = R::zero(ctx);
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        // smallest nonzero entry of the remaining block
        let Some((_, pr, pc)) = (t..m).flat_map(|i| (t..n).map(move |j| (i, j))).filter(|&(i, j)| !d[i][j].is_zero()).map(|(i, j)| (d[i][j].norm(), i, j)).min() else {
            break;
        };
        d.swap(t, pr);
        u.swap(t, pr);
        if pc != t {
            col_combine(&mut d, t, pc, [&zero, &one, &one, &zero]);
            col_combine(&mut v, t, pc, [&zero, &one, &one, &zero]);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let [x, y, z, w] = clearing_block(&d[t][t], &d[i][t], &one, &zero);
                row_combine(&mut d, t, i, [&x, &y, &z, &w]);
                row_combine(&mut u, t, i, [&x, &y, &z, &w]);
                changed = true;
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let [x, y, z, w] = clearing_block(&d[t][t], &d[t][j], &one, &zero);
                col_combine(&mut d, t, j, [&x, &y, &z, &w]);
                col_combine(&mut v, t, j, [&x, &y, &z, &w]);
                changed = true;
            }
            if changed {
                continue;
            }
            // enforce divisibility by folding an offending row into row t
            let p = d[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[i][j].exact_div(&p).is_none()));
            match bad {
                Some(i) => {
                    row_combine(&mut d, t, i, [&one, &one, &zero, &one]);
                    row_combine(&mut u, t, i, [&one, &one, &zero, &one]);
                }
                None => break,
            }
        }
        let unit = d[t][t].normalizing_unit();
        for c in 0..n {
            d[t][c] = d[t][c].mul(&unit);
        }
        for c in 0..m {
            u[t][c] = u[t][c].mul(&unit);
        }
        diagonal.push(d[t][t].clone());
    }
    SmithTransforms { u, d, v, diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn factors(rows: &[&[i64]]) -> (usize, Vec<i64>) {
        let s = smith_sparse(&SparseMatrix::from_dense(&ints(rows), ()));
        (s.rank, s.factors.iter().map(|f| i64::try_from(f).unwrap()).collect())
    }

    #[test]
    fn integer_examples() {
        assert_eq!(factors(&[&[1, 0], &[0, 1]]), (2, vec![]));
        assert_eq!(factors(&[&[2, 4], &[6, 8]]), (2, vec![2, 4]));
        assert_eq!(factors(&[&[6, 0], &[0, 4]]), (2, vec![2, 12]));
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), (0, vec![]));
        assert_eq!(factors(&[&[1, -1], &[1, 2], &[-2, -1]]), (2, vec![3]));
    }

    #[test]
    fn dense_agrees_with_sparse() {
        let a = ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let t = smith_dense(&a, ());
        let diag: Vec<i64> = t.diagonal.iter().map(|f| i64::try_from(f).unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), (3, vec![2, 6, 12]));
    }

    #[test]
    fn polynomial_examples() {
        let p = |s: &str| parse_poly::<Rational>(s, ()).unwrap();
        let zero = Poly::<Rational>::from_ints((), &[]);
        let m = SparseMatrix::from_dense(&[vec![p("(t-1)(t+1)"), zero.clone()], vec![zero, p("t-1")]], ());
        let s = smith_sparse(&m);
        assert_eq!(s.factors, vec![p("t-1"), p("(t-1)(t+1)")]);
        let m = SparseMatrix::from_dense(&[vec![p("t-1")]], ());
        assert_eq!(smith_sparse(&m).factors, vec![p("t-1")]);
    }

    #[test]
    fn multimodular_agrees_with_exact() {
        let p = |s: &str| parse_poly::<Rational>(s, ()).unwrap();
        let rows = vec![
            vec![p("(t-1)(t^2+t+1)"), p("2t-2"), p("0")],
            vec![p("(t-1)(t+1)"), p("0"), p("3(t^2+1)")],
            vec![p("0"), p("t^3-1"), p("(t^2+1)(t-1)")],
        ];
        let m = SparseMatrix::from_dense(&rows, ());
        assert_eq!(smith_multimodular(&m), smith_sparse(&m));
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let m = SparseMatrix::from_dense(&[vec![Poly::new((), vec![half.clone(), half])]], ());
        assert_eq!(smith_multimodular(&m), smith_sparse(&m));
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_003i64);
        let x = Rational::new(BigInt::from(-7), BigInt::from(12));
        let r = (x.numer() * BigInt::from(12i64).modpow(&(&m - 2), &m)).mod_floor(&m);
        assert_eq!(rational_reconstruct(&r, &m), Some(x));
    }
}
