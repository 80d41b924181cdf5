//! Garside monoids given by their finite lattice of simples.
//!
//! A [`GarsideStructure`] stores the simples (divisors of Δ) together with
//! the partial product table and the lattice operations for both left and
//! right divisibility. Everything downstream touches only these tables, so
//! they are validated exhaustively when the structure is built.
//!
//! Elements of the monoid are kept in right-greedy normal form: a sequence of
//! nonidentity simples whose last entry is the largest simple right divisor
//! of the product. The Dehornoy–Lafont machinery divides by atoms on the
//! right, which is the cheap side for this normal form.

mod data;
mod element;
mod generators;
mod presentation;

pub use data::build_from_data;
pub use element::Element;
pub use generators::{classical_braid_data, dual_braid_data, PermData};
pub use presentation::{build_from_presentation, Presentation};

use std::fmt;

use rayon::prelude::*;

use crate::perm::Perm;

/// Index of a simple element in its [`GarsideStructure`].
pub type Simple = u32;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, thiserror::Error)]
pub enum GarsideError {
    #[error("relation {index} is not homogeneous ({left} vs {right} letters)")]
    NotHomogeneous { index: usize, left: usize, right: usize },
    #[error("unknown atom name {0:?}")]
    UnknownAtom(String),
    #[error("atom {0} does not left-divide delta")]
    AtomNotBelowDelta(String),
    #[error("word class of delta exceeds {0} words")]
    ClassTooLarge(usize),
    #[error("lattice check failed for ({left}, {right}): {reason}")]
    Lattice { left: String, right: String, reason: String },
    #[error("cancellativity fails: {0}")]
    Cancellativity(String),
    #[error("{0} does not divide delta on the {1}")]
    NotBelowDelta(String, &'static str),
    #[error("simple {index} has stated length {stated} but shortest factorization {actual}")]
    LengthMismatch { index: usize, stated: u32, actual: i64 },
    #[error("data mismatch: {0}")]
    Data(String),
    #[error("malformed presentation: {0}")]
    Syntax(String),
    #[error("{0} is not a simple element")]
    NotSimple(String),
    #[error("{0}")]
    Invalid(String),
}

/// Display names of the atoms, in their fixed linear order.
#[derive(Clone, Debug)]
pub struct AtomTable {
    pub names: Vec<String>,
    /// `simples[i]` is the simple index of the `i`-th atom.
    pub simples: Vec<Simple>,
}

/// The simples with their atom lengths.
#[derive(Clone, Debug)]
pub struct SimpleTable {
    /// One atom word per simple, as atom positions.
    pub words: Vec<Vec<u16>>,
    pub lengths: Vec<u32>,
    pub identity: Simple,
    pub delta: Simple,
    /// Present for structures built from permutation data.
    pub perms: Option<Vec<Perm>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub name: String,
    pub perm_degree: Option<usize>,
}

/// Raw ingredients handed to [`GarsideStructure::assemble`].
pub(crate) struct RawStructure {
    pub name: String,
    pub atom_names: Vec<String>,
    pub atom_simples: Vec<Simple>,
    pub lengths: Vec<u32>,
    pub identity: Simple,
    pub delta: Simple,
    pub mul: Vec<u32>,
    pub words: Option<Vec<Vec<u16>>>,
    pub perms: Option<Vec<Perm>>,
}

pub struct GarsideStructure {
    pub group: GroupDescriptor,
    pub atoms: AtomTable,
    pub simples: SimpleTable,
    n: usize,
    mul: Vec<u32>,
    lquot: Vec<u32>,
    rquot: Vec<u32>,
    right_lcm: Vec<u32>,
    left_gcd: Vec<u32>,
    left_lcm: Vec<u32>,
    right_gcd: Vec<u32>,
    atom_of: Vec<Option<u16>>,
    least_right: Vec<u16>,
    least_left: Vec<u16>,
}

impl fmt::Debug for GarsideStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GarsideStructure")
            .field("group", &self.group)
            .field("atoms", &self.atoms.names.len())
            .field("simples", &self.n)
            .finish()
    }
}

const NO_ATOM: u16 = u16::MAX;

struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Bits { words, data: vec![0; rows * words] }
    }
    fn set(&mut self, row: usize, col: usize) {
        self.data[row * self.words + col / 64] |= 1 << (col % 64);
    }
    fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.words..(row + 1) * self.words]
    }
}

/// Lowest common element of two rows; `up` is indexed by length rank so the
/// lowest set bit has minimal length.
fn lattice_bound(up: &Bits, a: usize, b: usize, scratch: &mut [u64]) -> Result<usize, &'static str> {
    let (ra, rb) = (up.row(a), up.row(b));
    let mut first = None;
    for (k, s) in scratch.iter_mut().enumerate() {
        *s = ra[k] & rb[k];
        if first.is_none() && *s != 0 {
            first = Some(k * 64 + s.trailing_zeros() as usize);
        }
    }
    let cand = first.ok_or("no common bound among the simples")?;
    if up.row(cand) != scratch {
        return Err("common bound is not unique");
    }
    Ok(cand)
}

impl GarsideStructure {
    /// Fills every derived table from the product table and validates the
    /// lattice, cancellativity and length axioms on the simples.
    pub(crate) fn assemble(raw: RawStructure) -> Result<Self, GarsideError> {
        let n = raw.lengths.len();
        let RawStructure { name, atom_names, atom_simples, lengths, identity, delta, mul, words, perms } = raw;
        if lengths[identity as usize] != 0 {
            return Err(GarsideError::Invalid("identity must have length 0".into()));
        }
        let mut atom_of = vec![None; n];
        for (pos, &s) in atom_simples.iter().enumerate() {
            if lengths[s as usize] != 1 {
                return Err(GarsideError::Data(format!("atom {} has length {}", atom_names[pos], lengths[s as usize])));
            }
            atom_of[s as usize] = Some(pos as u16);
        }

        let mut lquot = vec![NONE; n * n];
        let mut rquot = vec![NONE; n * n];
        for u in 0..n {
            for w in 0..n {
                let v = mul[u * n + w];
                if v == NONE {
                    continue;
                }
                if lengths[v as usize] != lengths[u] + lengths[w] {
                    return Err(GarsideError::Invalid(format!("product of simples {u} and {w} breaks additivity of length")));
                }
                let slot = &mut lquot[u * n + v as usize];
                if *slot != NONE && *slot != w as u32 {
                    return Err(GarsideError::Cancellativity(format!("left cancellation fails at simple {u}")));
                }
                *slot = w as u32;
                let slot = &mut rquot[v as usize * n + w];
                if *slot != NONE && *slot != u as u32 {
                    return Err(GarsideError::Cancellativity(format!("right cancellation fails at simple {w}")));
                }
                *slot = u as u32;
            }
        }

        let words = match words {
            Some(w) => w,
            None => shortest_words(n, identity, &atom_simples, &mul),
        };
        for (s, w) in words.iter().enumerate() {
            if s != identity as usize && w.is_empty() {
                return Err(GarsideError::LengthMismatch { index: s, stated: lengths[s], actual: -1 });
            }
            if w.len() as u32 != lengths[s] {
                return Err(GarsideError::LengthMismatch { index: s, stated: lengths[s], actual: w.len() as i64 });
            }
        }

        // Rank simples by length so that the lowest bit of an upper set is a
        // minimal-length element.
        let mut by_len: Vec<usize> = (0..n).collect();
        by_len.sort_by_key(|&s| lengths[s]);
        let mut rank = vec![0usize; n];
        for (r, &s) in by_len.iter().enumerate() {
            rank[s] = r;
        }
        let mut up_l = Bits::new(n, n);
        let mut up_r = Bits::new(n, n);
        let mut down_l = Bits::new(n, n);
        let mut down_r = Bits::new(n, n);
        for u in 0..n {
            for w in 0..n {
                let v = mul[u * n + w];
                if v == NONE {
                    continue;
                }
                let v = v as usize;
                up_l.set(rank[u], rank[v]);
                up_r.set(rank[w], rank[v]);
                // reversed ranks: lowest bit = maximal length
                down_l.set(n - 1 - rank[v], n - 1 - rank[u]);
                down_r.set(n - 1 - rank[v], n - 1 - rank[w]);
            }
        }
        let name_of = |s: usize| display_word(&atom_names, &words[s]);
        for s in 0..n {
            if lquot[s * n + delta as usize] == NONE {
                return Err(GarsideError::NotBelowDelta(name_of(s), "left"));
            }
            if rquot[delta as usize * n + s] == NONE {
                return Err(GarsideError::NotBelowDelta(name_of(s), "right"));
            }
        }

        let join_table = |bits: &Bits, reversed: bool, what: &str| -> Result<Vec<u32>, GarsideError> {
            let rows: Vec<Result<Vec<u32>, GarsideError>> = (0..n)
                .into_par_iter()
                .map(|a| {
                    let mut scratch = vec![0u64; bits.words];
                    let mut row = vec![NONE; n];
                    let ra = if reversed { n - 1 - rank[a] } else { rank[a] };
                    for b in 0..n {
                        let rb = if reversed { n - 1 - rank[b] } else { rank[b] };
                        match lattice_bound(bits, ra, rb, &mut scratch) {
                            Ok(c) => {
                                let c = if reversed { n - 1 - c } else { c };
                                row[b] = by_len[c] as u32;
                            }
                            Err(reason) => {
                                return Err(GarsideError::Lattice {
                                    left: name_of(a),
                                    right: name_of(b),
                                    reason: format!("{what}: {reason}"),
                                })
                            }
                        }
                    }
                    Ok(row)
                })
                .collect();
            let mut out = Vec::with_capacity(n * n);
            for r in rows {
                out.extend(r?);
            }
            Ok(out)
        };
        let right_lcm = join_table(&up_l, false, "right lcm")?;
        let left_lcm = join_table(&up_r, false, "left lcm")?;
        let left_gcd = join_table(&down_l, true, "left gcd")?;
        let right_gcd = join_table(&down_r, true, "right gcd")?;

        let mut least_right = vec![NO_ATOM; n];
        let mut least_left = vec![NO_ATOM; n];
        for s in 0..n {
            for (pos, &a) in atom_simples.iter().enumerate() {
                if least_right[s] == NO_ATOM && rquot[s * n + a as usize] != NONE {
                    least_right[s] = pos as u16;
                }
                if least_left[s] == NO_ATOM && lquot[a as usize * n + s] != NONE {
                    least_left[s] = pos as u16;
                }
            }
        }

        let perm_degree = perms.as_ref().map(|p| p.iter().map(Perm::degree).max().unwrap_or(0));
        Ok(GarsideStructure {
            group: GroupDescriptor { name, perm_degree },
            atoms: AtomTable { names: atom_names, simples: atom_simples },
            simples: SimpleTable { words, lengths, identity, delta, perms },
            n,
            mul,
            lquot,
            rquot,
            right_lcm,
            left_gcd,
            left_lcm,
            right_gcd,
            atom_of,
            least_right,
            least_left,
        })
    }

    pub fn name(&self) -> &str {
        &self.group.name
    }

    pub fn num_simples(&self) -> usize {
        self.n
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.simples.len()
    }

    pub fn identity(&self) -> Simple {
        self.simples.identity
    }

    pub fn delta(&self) -> Simple {
        self.simples.delta
    }

    pub fn length(&self, s: Simple) -> u32 {
        self.simples.lengths[s as usize]
    }

    /// Simple index of the atom at position `pos` in the atom order.
    pub fn atom(&self, pos: usize) -> Simple {
        self.atoms.simples[pos]
    }

    /// Position of `s` in the atom order, if `s` is an atom.
    pub fn atom_position(&self, s: Simple) -> Option<usize> {
        self.atom_of[s as usize].map(usize::from)
    }

    /// `u·v` when the product is again simple.
    pub fn product(&self, u: Simple, v: Simple) -> Option<Simple> {
        opt(self.mul[u as usize * self.n + v as usize])
    }

    pub fn left_divides_simple(&self, u: Simple, v: Simple) -> bool {
        self.lquot[u as usize * self.n + v as usize] != NONE
    }

    pub fn right_divides_simple(&self, u: Simple, v: Simple) -> bool {
        self.rquot[v as usize * self.n + u as usize] != NONE
    }

    /// The unique `w` with `u·w = v`, written `u\v`.
    pub fn left_complement(&self, u: Simple, v: Simple) -> Result<Simple, GarsideError> {
        opt(self.lquot[u as usize * self.n + v as usize])
            .ok_or_else(|| GarsideError::Invalid(format!("{} does not left-divide {}", self.simple_name(u), self.simple_name(v))))
    }

    /// The unique `w` with `w·u = v`, written `v/u`.
    pub fn right_complement(&self, v: Simple, u: Simple) -> Result<Simple, GarsideError> {
        opt(self.rquot[v as usize * self.n + u as usize])
            .ok_or_else(|| GarsideError::Invalid(format!("{} does not right-divide {}", self.simple_name(u), self.simple_name(v))))
    }

    pub(crate) fn rquot_unchecked(&self, v: Simple, u: Simple) -> Simple {
        let q = self.rquot[v as usize * self.n + u as usize];
        debug_assert_ne!(q, NONE);
        q
    }

    pub(crate) fn lquot_unchecked(&self, u: Simple, v: Simple) -> Simple {
        let q = self.lquot[u as usize * self.n + v as usize];
        debug_assert_ne!(q, NONE);
        q
    }

    /// Least common right multiple (join for left divisibility).
    pub fn right_lcm(&self, u: Simple, v: Simple) -> Simple {
        self.right_lcm[u as usize * self.n + v as usize]
    }

    /// Least common left multiple (join for right divisibility).
    pub fn left_lcm(&self, u: Simple, v: Simple) -> Simple {
        self.left_lcm[u as usize * self.n + v as usize]
    }

    pub fn left_gcd(&self, u: Simple, v: Simple) -> Simple {
        self.left_gcd[u as usize * self.n + v as usize]
    }

    pub fn right_gcd(&self, u: Simple, v: Simple) -> Simple {
        self.right_gcd[u as usize * self.n + v as usize]
    }

    /// Position of the least atom right-dividing `s`; `None` for the identity.
    pub fn least_right_atom(&self, s: Simple) -> Option<usize> {
        let a = self.least_right[s as usize];
        (a != NO_ATOM).then_some(a as usize)
    }

    /// Position of the least atom left-dividing `s`; `None` for the identity.
    pub fn least_left_atom(&self, s: Simple) -> Option<usize> {
        let a = self.least_left[s as usize];
        (a != NO_ATOM).then_some(a as usize)
    }

    /// The simple represented by a word of atom positions, if it is simple.
    pub fn simple_of_word(&self, word: &[u16]) -> Option<Simple> {
        let mut s = self.identity();
        for &a in word {
            let atom = *self.atoms.simples.get(a as usize)?;
            s = self.product(s, atom)?;
        }
        Some(s)
    }

    pub fn simple_name(&self, s: Simple) -> String {
        display_word(&self.atoms.names, &self.simples.words[s as usize])
    }

    pub fn atom_index_by_name(&self, name: &str) -> Option<usize> {
        self.atoms.names.iter().position(|n| n == name)
    }
}

fn opt(x: u32) -> Option<u32> {
    (x != NONE).then_some(x)
}

pub(crate) fn display_word(names: &[String], word: &[u16]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter().map(|&a| names[a as usize].as_str()).collect::<Vec<_>>().join("")
}

/// One shortest atom word per simple, by breadth-first right multiplication.
fn shortest_words(n: usize, identity: Simple, atoms: &[Simple], mul: &[u32]) -> Vec<Vec<u16>> {
    let mut words: Vec<Option<Vec<u16>>> = vec![None; n];
    words[identity as usize] = Some(Vec::new());
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for (pos, &a) in atoms.iter().enumerate() {
                let t = mul[s as usize * n + a as usize];
                if t != NONE && words[t as usize].is_none() {
                    let mut w = words[s as usize].clone().unwrap();
                    w.push(pos as u16);
                    words[t as usize] = Some(w);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    words.into_iter().map(Option::unwrap_or_default).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g12() -> GarsideStructure {
        build_from_presentation(&Presentation::g12()).unwrap()
    }

    #[test]
    fn g12_lattice_operations() {
        let g = g12();
        let x = |i| g.atom(i);
        let delta = g.delta();
        assert_eq!(g.right_lcm(x(0), x(1)), delta);
        assert_eq!(g.left_lcm(x(0), x(1)), delta);
        assert_eq!(g.simple_name(g.left_complement(x(0), delta).unwrap()), "x2x3x1");
        assert_eq!(g.right_lcm(x(0), x(0)), x(0));
        assert_eq!(g.left_complement(x(0), x(0)).unwrap(), g.identity());
        assert!(g.left_complement(x(1), x(0)).is_err());
        assert_eq!(g.left_gcd(x(0), x(1)), g.identity());
    }

    #[test]
    fn g22_complement_of_delta() {
        let g = build_from_presentation(&Presentation::g22()).unwrap();
        let c = g.left_complement(g.atom(2), g.delta()).unwrap();
        assert_eq!(g.simple_name(c), "x1x2x3x1");
    }

    #[test]
    fn least_atoms_on_simples() {
        let g = g12();
        assert_eq!(g.least_right_atom(g.delta()), Some(0));
        assert_eq!(g.least_left_atom(g.delta()), Some(0));
        let x2x3 = g.simple_of_word(&[1, 2]).unwrap();
        assert_eq!(g.least_left_atom(x2x3), Some(1));
        assert_eq!(g.least_right_atom(x2x3), Some(2));
        assert_eq!(g.least_right_atom(g.identity()), None);
    }

    #[test]
    fn lengths_equal_number_of_peeled_atoms() {
        for g in [g12(), build_from_presentation(&Presentation::g22()).unwrap()] {
            for s in 0..g.num_simples() as Simple {
                let mut cur = s;
                let mut steps = 0;
                while let Some(a) = g.least_right_atom(cur) {
                    cur = g.right_complement(cur, g.atom(a)).unwrap();
                    steps += 1;
                }
                assert_eq!(steps, g.length(s));
            }
        }
    }

    #[test]
    fn lattice_bounds_are_least() {
        let g = g12();
        let n = g.num_simples() as Simple;
        for u in 0..n {
            for v in 0..n {
                let l = g.right_lcm(u, v);
                assert!(g.left_divides_simple(u, l) && g.left_divides_simple(v, l));
                for w in 0..n {
                    if g.left_divides_simple(u, w) && g.left_divides_simple(v, w) {
                        assert!(g.left_divides_simple(l, w));
                    }
                }
            }
        }
    }
}
