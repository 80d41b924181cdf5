use std::fmt;

use super::{GarsideStructure, Simple};

/// A monoid element in right-greedy normal form.
///
/// Equality is equality of normal forms. The derived order compares atom
/// length first, which is the canonical order used for chain terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    length: u32,
    factors: Vec<Simple>,
}

impl Element {
    pub fn identity() -> Self {
        Element::default()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Normal-form factors, leftmost first.
    pub fn factors(&self) -> &[Simple] {
        &self.factors
    }

    pub fn display<'a>(&'a self, g: &'a GarsideStructure) -> impl fmt::Display + 'a {
        DisplayElement { e: self, g }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.factors)
    }
}

struct DisplayElement<'a> {
    e: &'a Element,
    g: &'a GarsideStructure,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_identity() {
            return f.write_str("1");
        }
        for &s in &self.e.factors {
            f.write_str(&self.g.simple_name(s))?;
        }
        Ok(())
    }
}

impl GarsideStructure {
    pub fn element_of_simple(&self, s: Simple) -> Element {
        if s == self.identity() {
            return Element::identity();
        }
        Element { length: self.length(s), factors: vec![s] }
    }

    /// Rewrites `a·b` as `a'·b'` with `b'` the largest simple right divisor.
    fn right_normalize_pair(&self, a: Simple, b: Simple) -> (Simple, Simple) {
        let room = self.rquot_unchecked(self.delta(), b);
        let c = self.right_gcd(a, room);
        let b2 = self.product(c, b).expect("c·b divides delta");
        (self.rquot_unchecked(a, c), b2)
    }

    /// Rewrites `a·b` as `a'·b'` with `a'` the largest simple left divisor.
    fn left_normalize_pair(&self, a: Simple, b: Simple) -> (Simple, Simple) {
        let room = self.lquot_unchecked(a, self.delta());
        let c = self.left_gcd(room, b);
        let a2 = self.product(a, c).expect("a·c divides delta");
        (a2, self.lquot_unchecked(c, b))
    }

    /// `x·s` for a simple `s`.
    pub fn mul_simple(&self, x: &Element, s: Simple) -> Element {
        if s == self.identity() {
            return x.clone();
        }
        let mut factors = x.factors.clone();
        factors.push(s);
        let mut i = factors.len() - 1;
        // factors[i] is the carry; sweep it leftwards
        while i > 0 {
            let (a, b) = self.right_normalize_pair(factors[i - 1], factors[i]);
            factors[i] = b;
            factors[i - 1] = a;
            if a == self.identity() {
                factors.remove(i - 1);
                break;
            }
            i -= 1;
        }
        Element { length: x.length + self.length(s), factors }
    }

    /// `s·x` for a simple `s`.
    pub fn left_mul_simple(&self, s: Simple, x: &Element) -> Element {
        let mut out = self.element_of_simple(s);
        for &f in &x.factors {
            out = self.mul_simple(&out, f);
        }
        out
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        if x.is_identity() {
            return y.clone();
        }
        let mut out = x.clone();
        for &f in &y.factors {
            out = self.mul_simple(&out, f);
        }
        out
    }

    /// Normal form of a word of atom positions.
    pub fn normal_form(&self, word: &[u16]) -> Element {
        let mut out = Element::identity();
        for &a in word {
            out = self.mul_simple(&out, self.atom(a as usize));
        }
        out
    }

    /// Normal form of an arbitrary product of simples.
    pub fn normal_form_of_simples(&self, simples: &[Simple]) -> Element {
        let mut out = Element::identity();
        for &s in simples {
            out = self.mul_simple(&out, s);
        }
        out
    }

    /// `x/s`, when the simple `s` right-divides `x`.
    pub fn right_divide_simple(&self, x: &Element, s: Simple) -> Option<Element> {
        if s == self.identity() {
            return Some(x.clone());
        }
        let (&last, prefix) = x.factors.split_last()?;
        if !self.right_divides_simple(s, last) {
            return None;
        }
        let rest = Element { length: x.length - self.length(last), factors: prefix.to_vec() };
        Some(self.mul_simple(&rest, self.rquot_unchecked(last, s)))
    }

    /// Least atom right-dividing `x`, as an atom position.
    pub fn alpha(&self, x: &Element) -> Option<usize> {
        x.factors.last().and_then(|&s| self.least_right_atom(s))
    }

    /// Least atom left-dividing `x`, as an atom position.
    pub fn least_left_atom_of(&self, x: &Element) -> Option<usize> {
        let lnf = self.left_normal_form(x);
        lnf.first().and_then(|&s| self.least_left_atom(s))
    }

    /// Left-greedy normal form of `x` (first factor is the largest simple
    /// left divisor).
    pub fn left_normal_form(&self, x: &Element) -> Vec<Simple> {
        let mut out: Vec<Simple> = Vec::new();
        for &s in x.factors.iter().rev() {
            out = self.left_mul_left_nf(s, &out);
        }
        out
    }

    fn left_mul_left_nf(&self, s: Simple, lnf: &[Simple]) -> Vec<Simple> {
        let mut out = Vec::with_capacity(lnf.len() + 1);
        let mut carry = s;
        for &f in lnf {
            if carry == self.identity() {
                out.push(f);
                continue;
            }
            let (a, b) = self.left_normalize_pair(carry, f);
            out.push(a);
            carry = b;
        }
        if carry != self.identity() {
            out.push(carry);
        }
        out.retain(|&f| f != self.identity());
        out
    }

    /// Whether `u·w = v` for some element `w`.
    pub fn left_divides(&self, u: &Element, v: &Element) -> bool {
        if u.length > v.length {
            return false;
        }
        let mut rest = self.left_normal_form(v);
        for s in self.left_normal_form(u) {
            let Some(&first) = rest.first() else { return false };
            if !self.left_divides_simple(s, first) {
                return false;
            }
            let q = self.lquot_unchecked(s, first);
            rest = self.left_mul_left_nf(q, &rest[1..]);
        }
        true
    }

    /// Whether `w·u = v` for some element `w`.
    pub fn right_divides(&self, u: &Element, v: &Element) -> bool {
        if u.length > v.length {
            return false;
        }
        let mut rest = v.clone();
        for &s in u.factors.iter().rev() {
            match self.right_divide_simple(&rest, s) {
                Some(r) => rest = r,
                None => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::{build_from_presentation, Presentation};

    #[test]
    fn identity_is_neutral() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        let u = g.normal_form(&[0, 1, 2, 0, 1]);
        assert_eq!(g.multiply(&u, &Element::identity()), u);
        assert_eq!(g.multiply(&Element::identity(), &u), u);
    }

    #[test]
    fn delta_word_is_one_simple() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        let d = g.normal_form(&[0, 1, 2, 0]);
        assert_eq!(d.factors(), &[g.delta()]);
        assert_eq!(d, g.normal_form(&[2, 0, 1, 2]));
    }

    #[test]
    fn divisibility_examples() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        let one = Element::identity();
        let x1 = g.normal_form(&[0]);
        let x2 = g.normal_form(&[1]);
        let x1x2 = g.normal_form(&[0, 1]);
        let delta = g.element_of_simple(g.delta());
        assert!(g.left_divides(&one, &delta));
        assert!(g.left_divides(&x1, &delta));
        assert!(!g.left_divides(&x2, &x1x2));
        assert!(g.right_divides(&x2, &x1x2));
        let big = g.normal_form(&[0, 1, 2, 0, 1, 1, 0]);
        assert!(g.left_divides(&x1x2, &big));
        assert!(!g.left_divides(&big, &x1x2));
    }

    #[test]
    fn normal_form_is_right_greedy() {
        let g = build_from_presentation(&Presentation::g22()).unwrap();
        let x = g.normal_form(&[2, 1, 0, 0, 1, 2, 0, 2, 1, 1]);
        for w in x.factors().windows(2) {
            // no atom can move from the left factor into the right one
            for a in 0..g.num_atoms() {
                let atom = g.atom(a);
                if g.right_divides_simple(atom, w[0]) {
                    assert!(g.product(atom, w[1]).is_none());
                }
            }
        }
    }

    #[test]
    fn alpha_of_simples() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        assert_eq!(g.alpha(&g.normal_form(&[1])), Some(1));
        assert_eq!(g.alpha(&g.element_of_simple(g.delta())), Some(0));
        assert_eq!(g.alpha(&g.normal_form(&[1, 2])), Some(2));
        assert_eq!(g.least_left_atom_of(&g.normal_form(&[1, 2])), Some(1));
        assert_eq!(g.alpha(&Element::identity()), None);
    }
}
