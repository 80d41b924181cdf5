//! Permutation data for the braid monoids of the symmetric groups, in the
//! same shape as imported data: atoms, simples and atom lengths.

use super::GarsideError;
use crate::perm::Perm;

/// Atoms, simples and lengths, ready for [`super::build_from_data`].
#[derive(Clone, Debug)]
pub struct PermData {
    pub atoms: Vec<Perm>,
    pub simples: Vec<Perm>,
    pub lengths: Vec<u32>,
}

fn all_perms(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    loop {
        out.push(images.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
        images.swap(i, j);
        images[i + 1..].reverse();
    }
}

fn check_size(n: usize) -> Result<(), GarsideError> {
    if (2..=7).contains(&n) {
        Ok(())
    } else {
        Err(GarsideError::Invalid(format!("symmetric group data needs 2 ≤ n ≤ 7, got {n}")))
    }
}

/// The classical braid monoid on `n` strands: simples are all of `S_n`,
/// atoms the adjacent transpositions, lengths the inversion counts.
pub fn classical_braid_data(n: usize) -> Result<PermData, GarsideError> {
    check_size(n)?;
    let mut simples = Vec::new();
    let mut lengths = Vec::new();
    for images in all_perms(n) {
        let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| images[i] > images[j]).count();
        simples.push(Perm::from_images(images).expect("bijection"));
        lengths.push(inv as u32);
    }
    let atoms = (1..n as u64).map(|i| Perm::from_cycles(&[vec![i, i + 1]]).unwrap()).collect();
    Ok(PermData { atoms, simples, lengths })
}

/// Reflection length in `S_n`: `n` minus the number of cycles.
fn reflection_length(p: &Perm, n: usize) -> u32 {
    let moved: usize = p.cycles().iter().map(Vec::len).sum();
    let cycles = p.cycles().len() + (n - moved);
    (n - cycles) as u32
}

/// The dual braid monoid on `n` strands: simples are the permutations
/// below the Coxeter element `(1,2,…,n)` for the reflection length
/// (noncrossing partitions), atoms all transpositions in lexicographic
/// order.
pub fn dual_braid_data(n: usize) -> Result<PermData, GarsideError> {
    check_size(n)?;
    let c = Perm::from_cycles(&[(1..=n as u64).collect()]).unwrap();
    let top = reflection_length(&c, n);
    let mut simples = Vec::new();
    let mut lengths = Vec::new();
    for images in all_perms(n) {
        let p = Perm::from_images(images).expect("bijection");
        let l = reflection_length(&p, n);
        if l + reflection_length(&(&p.inverse() * &c), n) == top {
            simples.push(p);
            lengths.push(l);
        }
    }
    let atoms = (1..=n as u64).flat_map(|i| (i + 1..=n as u64).map(move |j| Perm::from_cycles(&[vec![i, j]]).unwrap())).collect();
    Ok(PermData { atoms, simples, lengths })
}
