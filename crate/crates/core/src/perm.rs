//! Finite permutations of positive integers, composed left to right.
//!
//! `p * q` maps `i` to `q(p(i))`, which is the convention of the data files
//! this crate reads. Points are 0-based internally and 1-based in cycle
//! notation.

use std::fmt;
use std::ops::Mul;

/// A permutation stored by its image list, with trailing fixed points trimmed
/// so that equal permutations have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { images: Vec::new() }
    }

    /// Builds a permutation from 0-based images. Returns `None` if `images`
    /// is not a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        let mut p = Perm { images };
        p.trim();
        Some(p)
    }

    /// Builds a permutation from 1-based cycles, as written `(1,2,3)(4,5)`.
    /// Cycles must be disjoint and must not contain 0.
    pub fn from_cycles(cycles: &[Vec<u64>]) -> Result<Self, String> {
        let degree = cycles.iter().flatten().copied().max().unwrap_or(0);
        if degree > u32::MAX as u64 {
            return Err(format!("point {degree} is too large"));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree as usize];
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point == 0 {
                    return Err("permutation points are positive".into());
                }
                let idx = (point - 1) as usize;
                if touched[idx] {
                    return Err(format!("point {point} occurs twice"));
                }
                touched[idx] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[idx] = (next - 1) as u32;
            }
        }
        let mut p = Perm { images };
        p.trim();
        Ok(p)
    }

    fn trim(&mut self) {
        while let Some(&last) = self.images.last() {
            if last as usize == self.images.len() - 1 {
                self.images.pop();
            } else {
                break;
            }
        }
    }

    /// Largest moved point (1-based), or 0 for the identity.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: u32) -> u32 {
        self.images.get(i as usize).copied().unwrap_or(i)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn order(&self) -> u64 {
        let lengths = self.cycles().into_iter().map(|c| c.len() as u64);
        lengths.fold(1, num_integer::lcm)
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut done = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if done[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !done[j] {
                done[j] = true;
                cycle.push(j as u64 + 1);
                j = self.images[j] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        let n = self.images.len().max(rhs.images.len());
        let images = (0..n as u32).map(|i| rhs.apply(self.apply(i))).collect();
        let mut p = Perm { images };
        p.trim();
        p
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::from_cycles(&[vec![1, 2]]).unwrap();
        let b = Perm::from_cycles(&[vec![2, 3]]).unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!((&a * &b).apply(0), 2);
        assert_eq!((&a * &b).to_string(), "(1,3,2)");
    }

    #[test]
    fn trailing_fixed_points_do_not_matter() {
        let a = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        let b = Perm::from_cycles(&[vec![1, 2]]).unwrap();
        assert_eq!(a, b);
        assert!(Perm::from_cycles(&[]).unwrap().is_identity());
    }

    #[test]
    fn rejects_overlapping_cycles() {
        assert!(Perm::from_cycles(&[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Perm::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn inverse_and_order() {
        let p = Perm::from_cycles(&[vec![1, 4, 2], vec![3, 5]]).unwrap();
        assert!((&p * &p.inverse()).is_identity());
        assert_eq!(p.order(), 6);
    }
}
