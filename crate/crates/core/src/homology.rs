//! Homology of specialized complexes from Smith normal forms.
//!
//! With `d_n : C_n → C_{n−1}` over a principal ideal domain,
//! `H_n ≅ R^{c_n − rk d_n − rk d_{n+1}} ⊕ ⊕ R/(f)` over the non-unit
//! invariant factors `f` of `d_{n+1}`. Cohomology uses the factors of `d_n`
//! instead.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{cyclotomic_report, invariant_chain, Euclidean, Field, Fp, Poly, Ring};
use crate::smith::{smith_sparse, SmithResult};
use crate::specialize::{SpecializeError, SpecializedComplex, WeightedComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Specialize(#[from] SpecializeError),
    #[error("degree {degree} needs a {rows}×{cols} polynomial elimination, above the limit of {limit} columns")]
    Resource { degree: usize, rows: usize, cols: usize, limit: usize },
    #[error("degree {0} is beyond the computed complex")]
    OutOfRange(usize),
}

/// A finitely generated abelian group `Z^r ⊕ Z_{d_1} ⊕ …`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: &[BigInt]) -> Self {
        AbelianGroup { free_rank, torsion: invariant_chain(torsion) }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z_{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        f.write_str(&parts.join(" x "))
    }
}

impl FromStr for AbelianGroup {
    type Err = String;

    /// Accepts `0`, `Z`, `Z^2`, `Z_3 x Z`, `Z2 x Z4` and so on.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup::default());
        }
        let mut free = 0;
        let mut torsion = Vec::new();
        for part in s.split(['x', '×']).map(str::trim) {
            let rest = part.strip_prefix('Z').ok_or_else(|| format!("bad summand `{part}`"))?;
            if rest.is_empty() {
                free += 1;
            } else if let Some(e) = rest.strip_prefix('^') {
                free += e.parse::<usize>().map_err(|_| format!("bad exponent in `{part}`"))?;
            } else {
                let d: BigInt = rest.trim_start_matches('_').parse().map_err(|_| format!("bad order in `{part}`"))?;
                torsion.push(d);
            }
        }
        Ok(AbelianGroup::new(free, &torsion))
    }
}

/// A finitely generated module over `F[t, t⁻¹]`: free part plus invariant
/// factors (monic, prime to `t`, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModule<F: Field> {
    pub free_rank: usize,
    pub factors: Vec<Poly<F>>,
}

impl<F: Field> PolyModule<F> {
    /// The module `⊕ R/(p_i)`; summands may be given in any form.
    pub fn from_summands(free_rank: usize, summands: &[Poly<F>]) -> Self {
        let stripped: Vec<Poly<F>> = summands.iter().map(|p| p.strip_t()).collect();
        PolyModule { free_rank, factors: invariant_chain(&stripped) }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }

    /// Dimension over `F`, or `None` when there is a free part.
    pub fn dimension(&self) -> Option<usize> {
        (self.free_rank == 0).then(|| self.factors.iter().map(|f| f.degree().unwrap_or(0)).sum())
    }

    /// Invariant-factor form, e.g. `R/(t^6 - t^5 + t^3 - t + 1)`.
    pub fn invariant_form(&self) -> String {
        let mut parts: Vec<String> = self.factors.iter().map(|f| format!("R/({f})")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("R".into()),
            r => parts.push(format!("R^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Cyclotomic form: each invariant factor written as a product of
    /// cyclotomic polynomials (reduced mod p when applicable).
    pub fn cyclotomic_form(&self) -> String {
        let mut parts: Vec<String> = self.factors.iter().map(|f| cyclotomic_report(f, 200).to_string()).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("R".into()),
            r => parts.push(format!("R^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<F: Field> fmt::Display for PolyModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cyclotomic_form())
    }
}

/// Smith data of `d_1, …, d_{top+1}` (the last one being the empty map).
struct SmithData<R: Euclidean> {
    counts: Vec<usize>,
    /// `smith[n]` for `d_n`; index 0 is the zero map out of degree 0.
    smith: Vec<SmithResult<R>>,
}

fn zero_smith<R: Euclidean>() -> SmithResult<R> {
    SmithResult { rank: 0, factors: Vec::new() }
}

impl<R: Euclidean> SmithData<R> {
    fn free_rank(&self, n: usize) -> usize {
        let next = self.smith.get(n + 1).map_or(0, |s| s.rank);
        self.counts[n] - self.smith[n].rank - next
    }
}

/// Integral homology `H_0, …, H_top`.
pub fn integer_homology(c: &SpecializedComplex<BigInt>) -> Result<Vec<AbelianGroup>, HomologyError> {
    c.check_composition()?;
    let top = c.top_degree();
    let mut smith: Vec<SmithResult<BigInt>> = (1..=top).into_par_iter().map(|n| smith_sparse(&c.matrices[n])).collect();
    smith.insert(0, zero_smith());
    let data = SmithData { counts: c.counts.clone(), smith };
    Ok((0..=top)
        .map(|n| {
            let torsion = data.smith.get(n + 1).map_or(&[][..], |s| &s.factors[..]);
            AbelianGroup::new(data.free_rank(n), torsion)
        })
        .collect())
}

/// Limits on polynomial eliminations.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Widest `d_n` whose polynomial Smith form is attempted.
    pub max_columns: usize,
    /// Widest `d_n` whose rank may be estimated by evaluation instead.
    pub max_rank_columns: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_columns: 5000, max_rank_columns: 100_000 }
    }
}

/// Homology and cohomology over `F[t, t⁻¹]` of one Laurent complex.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentHomology<F: Field> {
    /// `H_n` for `n = 0..=max_degree`; `None` where it was refused.
    pub homology: Vec<Option<PolyModule<F>>>,
    /// `H^n`, except that entry 0 holds `H_0` as in the usual tabulation.
    pub table: Vec<Option<PolyModule<F>>>,
    /// Degrees of `d_n` whose Smith form was refused.
    pub refused: Vec<HomologyError>,
    /// Degrees of `d_n` whose rank comes from evaluation at a random point
    /// modulo a large prime (exact with overwhelming probability).
    pub generic_ranks: Vec<usize>,
}

const EVAL_PRIME: u64 = (1 << 61) - 1;

/// Rank over `Q(t)` of a weighted matrix, from its evaluation at a fixed
/// pseudo-random point of `F_p` with `p = 2^61 − 1`. Never exceeds the true
/// rank; equal to it unless the point is a root of every maximal minor.
pub fn generic_rank(w: &WeightedComplex, n: usize) -> usize {
    let x = Fp::new(0x2545_f491_4f6c_dd1d_u64 as i64 & ((1 << 60) - 1), EVAL_PRIME);
    let pow = |e: u32| {
        let mut acc = <Fp as Ring>::one(EVAL_PRIME);
        for _ in 0..e {
            acc = Ring::mul(&acc, &x);
        }
        acc
    };
    let sub = WeightedComplex { counts: w.counts[..=n].to_vec(), columns: w.columns[..=n].to_vec() };
    let m = sub.specialize_with::<Fp>(EVAL_PRIME, pow);
    smith_sparse(&m.matrices[n]).rank
}

/// Laurent homology in degrees `0..=max_degree`. A `d_n` wider than the
/// column limit is not eliminated; its rank is then estimated by
/// evaluation (characteristic zero only) and every group needing its
/// invariant factors is reported as refused.
pub fn laurent_homology<F: Field>(
    w: &WeightedComplex,
    ctx: F::Ctx,
    max_degree: usize,
    limits: Limits,
) -> Result<LaurentHomology<F>, HomologyError> {
    let top = w.top_degree();
    let max_degree = max_degree.min(top);
    let last = (max_degree + 1).min(top);
    let sub = WeightedComplex { counts: w.counts[..=last].to_vec(), columns: w.columns[..=last].to_vec() };
    let c = sub.specialize_laurent::<F>(ctx);
    c.check_composition()?;
    let needed: Vec<usize> = (1..=last).collect();
    let smith: Vec<Option<SmithResult<Poly<F>>>> = needed
        .par_iter()
        .map(|&n| {
            let m = c.column_normalized(n);
            (m.cols() <= limits.max_columns).then(|| F::smith_poly(&m))
        })
        .collect();
    let mut refused = Vec::new();
    let mut generic_ranks = Vec::new();
    // rank and factors of d_n, n = 0..=max_degree+1
    let mut ranks: Vec<Option<usize>> = vec![Some(0)];
    let mut factors: Vec<Option<Vec<Poly<F>>>> = vec![Some(Vec::new())];
    for n in 1..=max_degree + 1 {
        if n > top {
            ranks.push(Some(0));
            factors.push(Some(Vec::new()));
            continue;
        }
        match &smith[n - 1] {
            Some(s) => {
                ranks.push(Some(s.rank));
                factors.push(Some(s.factors.iter().map(Poly::strip_t).filter(|p| !p.is_unit()).collect()));
            }
            None => {
                let m = &c.matrices[n];
                refused.push(HomologyError::Resource { degree: n, rows: m.rows(), cols: m.cols(), limit: limits.max_columns });
                let rank = (F::characteristic(ctx) == 0 && m.cols() <= limits.max_rank_columns).then(|| generic_rank(w, n));
                if rank.is_some() {
                    generic_ranks.push(n);
                }
                ranks.push(rank);
                factors.push(None);
            }
        }
    }
    let mut homology = Vec::new();
    let mut table = Vec::new();
    for n in 0..=max_degree {
        let free = match (ranks[n], ranks[n + 1]) {
            (Some(a), Some(b)) => Some(c.counts[n] - a - b),
            _ => None,
        };
        let module = |fs: &Option<Vec<Poly<F>>>| match (free, fs) {
            (Some(r), Some(f)) => Some(PolyModule { free_rank: r, factors: f.clone() }),
            _ => None,
        };
        homology.push(module(&factors[n + 1]));
        table.push(if n == 0 { module(&factors[1]) } else { module(&factors[n]) });
    }
    Ok(LaurentHomology { homology, table, refused, generic_ranks })
}

/// The first `d_n`, `n ≤ max_degree + 1`, that exceeds the column limit.
pub fn first_refused(w: &WeightedComplex, max_degree: usize, limits: Limits) -> Option<HomologyError> {
    let top = w.top_degree();
    (1..=(max_degree + 1).min(top)).find_map(|n| {
        let cols = w.counts[n];
        (cols > limits.max_columns).then(|| HomologyError::Resource {
            degree: n,
            rows: w.counts[n - 1],
            cols,
            limit: limits.max_columns,
        })
    })
}

/// `1 + x + 6x^2` style polynomial from per-degree dimensions; `None` if
/// some degree is infinite or unknown.
pub fn poincare_polynomial<F: Field>(row: &[Option<PolyModule<F>>]) -> Option<Vec<usize>> {
    row.iter().map(|m| m.as_ref().and_then(PolyModule::dimension)).collect()
}

pub fn format_poincare(coeffs: &[usize]) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && k > 0 { String::new() } else { c.to_string() };
        parts.push(match k {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Parses `1+x+6x^2` into coefficients.
pub fn parse_poincare(s: &str) -> Result<Vec<usize>, String> {
    let mut out: Vec<usize> = Vec::new();
    for term in s.split('+').map(str::trim) {
        let (c, k) = match term.split_once('x') {
            None => (term, 0),
            Some((c, e)) => {
                let k = if e.is_empty() { 1 } else { e.trim_start_matches('^').parse().map_err(|_| format!("bad term `{term}`"))? };
                (c, k)
            }
        };
        let c: usize = if c.is_empty() { 1 } else { c.parse().map_err(|_| format!("bad term `{term}`"))? };
        if out.len() <= k {
            out.resize(k + 1, 0);
        }
        out[k] += c;
    }
    Ok(out)
}

/// A degree where the mod-p dimension exceeds the rational one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFlag {
    pub degree: usize,
    pub prime: u64,
    pub rational: usize,
    pub modular: usize,
}

/// Compares per-degree dimensions of a rational row with mod-p rows.
pub fn torsion_scan<F: Field>(
    rational: &[Option<PolyModule<crate::algebra::Rational>>],
    modular: &[(u64, Vec<Option<PolyModule<F>>>)],
) -> Vec<TorsionFlag> {
    let mut out = Vec::new();
    for (p, row) in modular {
        for (n, (q, m)) in rational.iter().zip(row).enumerate() {
            if let (Some(q), Some(m)) = (q.as_ref().and_then(PolyModule::dimension), m.as_ref().and_then(PolyModule::dimension)) {
                if m != q {
                    out.push(TorsionFlag { degree: n, prime: *p, rational: q, modular: m });
                }
            }
        }
    }
    out
}

/// Alternating sum of free ranks.
pub fn euler_of_ranks(free: impl IntoIterator<Item = usize>) -> i64 {
    free.into_iter().enumerate().map(|(i, r)| if i % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Fp, Rational};
    use crate::complex::Resolution;
    use crate::garside::{build_from_presentation, Presentation};
    use crate::specialize::{Coefficients, WeightedComplex};

    fn weighted(p: Presentation) -> WeightedComplex {
        let g = build_from_presentation(&p).unwrap();
        let mut r = Resolution::new(&g);
        let top = r.top_degree();
        r.compute_through(top).unwrap();
        WeightedComplex::from_resolution(&r, top).unwrap()
    }

    fn row(groups: &[AbelianGroup]) -> Vec<String> {
        groups.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn g12_integer_rows() {
        let w = weighted(Presentation::g12());
        assert_eq!(row(&integer_homology(&w.specialize_integer(Coefficients::Trivial)).unwrap()), ["Z", "Z", "0"]);
        assert_eq!(row(&integer_homology(&w.specialize_integer(Coefficients::Sign)).unwrap()), ["Z_2", "Z_3", "0"]);
    }

    #[test]
    fn g12_laurent() {
        let w = weighted(Presentation::g12());
        let h = laurent_homology::<Rational>(&w, (), 2, Limits::default()).unwrap();
        let q = |s: &str| parse_poly::<Rational>(s, ()).unwrap();
        assert_eq!(h.table[1], Some(PolyModule::from_summands(0, &[q("t-1")])));
        assert_eq!(h.table[2], Some(PolyModule::from_summands(0, &[q("Phi6"), q("Phi12")])));
        assert_eq!(poincare_polynomial(&h.table), Some(vec![1, 1, 6]));
        let h2 = laurent_homology::<Fp>(&w, 2, 2, Limits::default()).unwrap();
        let f = |s: &str| parse_poly::<Fp>(s, 2).unwrap();
        assert_eq!(h2.table[2], Some(PolyModule::from_summands(0, &[f("(t^2+t+1)^3")])));
        assert!(torsion_scan(&h.table, &[(2, h2.table)]).is_empty());
    }

    #[test]
    fn refusal_and_evaluated_ranks() {
        // G12: d_1 has three columns, d_2 two
        let w = weighted(Presentation::g12());
        let exact = laurent_homology::<Rational>(&w, (), 2, Limits::default()).unwrap();
        let h = laurent_homology::<Rational>(&w, (), 2, Limits { max_columns: 2, max_rank_columns: 10 }).unwrap();
        assert_eq!(h.generic_ranks, vec![1]);
        assert_eq!(h.refused.len(), 1);
        assert_eq!(h.table[1], None);
        assert_eq!(h.table[2], exact.table[2]);
        assert_eq!(h.homology[1], exact.homology[1]);
        let h = laurent_homology::<Rational>(&w, (), 2, Limits { max_columns: 2, max_rank_columns: 0 }).unwrap();
        assert!(h.generic_ranks.is_empty());
        assert_eq!(h.table[2], exact.table[2]);
        assert_eq!(h.homology[1], None);
        let limits = Limits { max_columns: 2, max_rank_columns: 0 };
        assert!(matches!(first_refused(&w, 2, limits), Some(HomologyError::Resource { degree: 1, cols: 3, .. })));
        assert_eq!(generic_rank(&w, 2), 2);
        assert_eq!(generic_rank(&w, 1), 1);
    }

    #[test]
    fn parse_and_print_groups() {
        for s in ["0", "Z", "Z^2", "Z_3 x Z", "Z_2 x Z_40", "Z_3 x Z_3 x Z_6"] {
            assert_eq!(s.parse::<AbelianGroup>().unwrap().to_string(), s);
        }
        assert_eq!("Z_6 x Z_4".parse::<AbelianGroup>().unwrap().to_string(), "Z_2 x Z_12");
        assert!("Q".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn poincare_round_trip() {
        for s in ["1+x+6x^2", "1+6x", "1+x+4x^3+21x^4", "1"] {
            assert_eq!(format_poincare(&parse_poincare(s).unwrap()), s);
        }
    }
}
