use std::collections::HashMap;

use rayon::prelude::*;

use super::{GarsideError, GarsideStructure, RawStructure, Simple, NONE};
use crate::perm::Perm;

/// Builds a Garside structure from simples given as permutations.
///
/// `u` left-divides `v` when `perm(u)⁻¹·perm(v)` is the permutation of a
/// simple `w` with `len(w) = len(v) − len(u)`; the product table uses the
/// same rule. Atoms keep the order of `atoms`, simples the order of
/// `simples`, so 1-based indices in data files map directly.
pub fn build_from_data(
    name: &str,
    atoms: &[Perm],
    simples: &[Perm],
    lengths: &[u32],
) -> Result<GarsideStructure, GarsideError> {
    let n = simples.len();
    if lengths.len() != n {
        return Err(GarsideError::Data(format!("{} simples but {} lengths", n, lengths.len())));
    }
    if n >= NONE as usize {
        return Err(GarsideError::Data("too many simples".into()));
    }
    let mut index: HashMap<&Perm, Simple> = HashMap::with_capacity(n);
    for (i, p) in simples.iter().enumerate() {
        if let Some(j) = index.insert(p, i as Simple) {
            return Err(GarsideError::Data(format!("simples {} and {} have the same permutation {p}", j + 1, i + 1)));
        }
    }
    let identity = *index
        .get(&Perm::identity())
        .ok_or_else(|| GarsideError::Data("identity permutation is not among the simples".into()))?;
    if lengths[identity as usize] != 0 {
        return Err(GarsideError::Data("identity permutation must have length 0".into()));
    }
    let mut atom_simples = Vec::with_capacity(atoms.len());
    for (pos, a) in atoms.iter().enumerate() {
        let s = *index.get(a).ok_or_else(|| GarsideError::Data(format!("atom {} ({a}) is not a simple", pos + 1)))?;
        if lengths[s as usize] != 1 {
            return Err(GarsideError::Data(format!("atom {} has length {}", pos + 1, lengths[s as usize])));
        }
        atom_simples.push(s);
    }
    let max_len = lengths.iter().copied().max().unwrap_or(0);
    let tops: Vec<usize> = (0..n).filter(|&s| lengths[s] == max_len).collect();
    if tops.len() != 1 {
        return Err(GarsideError::Data(format!("{} simples of maximal length {max_len}", tops.len())));
    }
    let delta = tops[0] as Simple;

    let mul: Vec<u32> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let index = &index;
            (0..n).map(move |w| {
                let len = lengths[u] + lengths[w];
                if len > max_len {
                    return NONE;
                }
                let p = &simples[u] * &simples[w];
                match index.get(&p) {
                    Some(&v) if lengths[v as usize] == len => v,
                    _ => NONE,
                }
            })
        })
        .collect();

    let atom_names = (1..=atoms.len()).map(|i| format!("a{i}")).collect();
    GarsideStructure::assemble(RawStructure {
        name: name.to_string(),
        atom_names,
        atom_simples,
        lengths: lengths.to_vec(),
        identity,
        delta,
        mul,
        words: None,
        perms: Some(simples.to_vec()),
    })
}

impl GarsideStructure {
    /// Whether every atom maps to a permutation of order two. Only decidable
    /// for structures built from permutation data.
    pub fn atoms_are_involutions(&self) -> Option<bool> {
        let perms = self.simples.perms.as_ref()?;
        Some(self.atoms.simples.iter().all(|&a| perms[a as usize].order() == 2))
    }
}
