//! Garside structures from homogeneous presentations.
//!
//! Simples are found as the left divisors of Δ: the word class of Δ is closed
//! under single relation applications, and every simple is represented by
//! prefixes of those words. Because relations preserve length, the closure is
//! finite and computed one length at a time.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{GarsideError, GarsideStructure, RawStructure, NONE};

const MAX_CLASS: usize = 2_000_000;

/// A monoid presentation over named atoms. Words are atom positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub atoms: Vec<String>,
    pub relations: Vec<(Vec<u16>, Vec<u16>)>,
    pub delta: Vec<u16>,
}

fn alternating(first: u16, second: u16, len: usize) -> Vec<u16> {
    (0..len).map(|k| if k % 2 == 0 { first } else { second }).collect()
}

impl Presentation {
    /// `⟨x1,x2,x3 | x1x2x3x1 = x2x3x1x2 = x3x1x2x3⟩`.
    pub fn g12() -> Self {
        Presentation::parse(
            "name G12\natoms x1 x2 x3\nrel x1 x2 x3 x1 = x2 x3 x1 x2 = x3 x1 x2 x3\ndelta x1 x2 x3 x1\n",
        )
        .expect("built-in presentation")
    }

    /// `⟨x1,x2,x3 | x1x2x3x1x2 = x2x3x1x2x3 = x3x1x2x3x1⟩`.
    pub fn g22() -> Self {
        Presentation::parse(
            "name G22\natoms x1 x2 x3\nrel x1 x2 x3 x1 x2 = x2 x3 x1 x2 x3 = x3 x1 x2 x3 x1\ndelta x1 x2 x3 x1 x2\n",
        )
        .expect("built-in presentation")
    }

    /// Artin monoid of type I₂(m): `aba… = bab…` with `m` letters on each side.
    pub fn dihedral(m: usize) -> Result<Self, GarsideError> {
        if m < 2 {
            return Err(GarsideError::Invalid(format!("dihedral type needs m >= 2, got {m}")));
        }
        let left = alternating(0, 1, m);
        let right = alternating(1, 0, m);
        Ok(Presentation {
            name: format!("I2({m})"),
            atoms: vec!["a".into(), "b".into()],
            relations: vec![(left.clone(), right)],
            delta: left,
        })
    }

    /// Artin monoid of type A_n (the positive braid monoid on n+1 strands).
    pub fn type_a(n: usize) -> Result<Self, GarsideError> {
        if n == 0 {
            return Err(GarsideError::Invalid("type A needs rank >= 1".into()));
        }
        let atoms = (1..=n).map(|i| format!("s{i}")).collect();
        let mut relations = Vec::new();
        for i in 0..n as u16 {
            for j in i + 1..n as u16 {
                if j == i + 1 {
                    relations.push((vec![i, j, i], vec![j, i, j]));
                } else {
                    relations.push((vec![i, j], vec![j, i]));
                }
            }
        }
        // Δ = s1 (s2 s1) (s3 s2 s1) ...
        let mut delta = Vec::new();
        for k in 0..n as u16 {
            delta.extend((0..=k).rev());
        }
        Ok(Presentation { name: format!("A{n}"), atoms, relations, delta })
    }

    /// Parses the line format
    ///
    /// ```text
    /// name G12
    /// atoms x1 x2 x3
    /// rel x1 x2 x3 x1 = x2 x3 x1 x2 = x3 x1 x2 x3
    /// delta x1 x2 x3 x1
    /// ```
    ///
    /// `#` starts a comment. A `rel` line with k words contributes k-1 relations.
    pub fn parse(text: &str) -> Result<Self, GarsideError> {
        let mut name = String::from("presentation");
        let mut atoms: Option<Vec<String>> = None;
        let mut rel_lines = Vec::new();
        let mut delta_line = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "name" => name = rest.trim().to_string(),
                "atoms" => atoms = Some(rest.split_whitespace().map(String::from).collect()),
                "rel" | "relation" => rel_lines.push((lineno + 1, rest.to_string())),
                "delta" => delta_line = Some((lineno + 1, rest.to_string())),
                other => return Err(GarsideError::Syntax(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        let atoms = atoms.ok_or_else(|| GarsideError::Syntax("missing atoms line".into()))?;
        if atoms.is_empty() {
            return Err(GarsideError::Syntax("no atoms".into()));
        }
        let word = |s: &str| -> Result<Vec<u16>, GarsideError> {
            s.split_whitespace()
                .map(|tok| {
                    atoms
                        .iter()
                        .position(|a| a == tok)
                        .map(|p| p as u16)
                        .ok_or_else(|| GarsideError::UnknownAtom(tok.to_string()))
                })
                .collect()
        };
        let mut relations = Vec::new();
        for (lineno, line) in rel_lines {
            let words = line.split('=').map(word).collect::<Result<Vec<_>, _>>()?;
            if words.len() < 2 {
                return Err(GarsideError::Syntax(format!("line {lineno}: relation needs '='")));
            }
            for pair in words.windows(2) {
                relations.push((pair[0].clone(), pair[1].clone()));
            }
        }
        let (_, delta) = delta_line.ok_or_else(|| GarsideError::Syntax("missing delta line".into()))?;
        let delta = word(&delta)?;
        Ok(Presentation { name, atoms, relations, delta })
    }

    pub fn to_text(&self) -> String {
        let w = |word: &[u16]| word.iter().map(|&a| self.atoms[a as usize].as_str()).collect::<Vec<_>>().join(" ");
        let mut out = format!("name {}\natoms {}\n", self.name, self.atoms.join(" "));
        for (l, r) in &self.relations {
            out.push_str(&format!("rel {} = {}\n", w(l), w(r)));
        }
        out.push_str(&format!("delta {}\n", w(&self.delta)));
        out
    }

    /// All words reachable from `word` by applying one relation at a time.
    fn closure(&self, word: &[u16], limit: usize) -> Result<Vec<Vec<u16>>, GarsideError> {
        let mut seen: HashSet<Vec<u16>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for next in self.neighbours(&w) {
                if seen.insert(next.clone()) {
                    if seen.len() > limit {
                        return Err(GarsideError::ClassTooLarge(limit));
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    fn neighbours(&self, w: &[u16]) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        for (l, r) in &self.relations {
            for (from, to) in [(l, r), (r, l)] {
                let k = from.len();
                if k == 0 || k > w.len() {
                    continue;
                }
                for pos in 0..=w.len() - k {
                    if &w[pos..pos + k] == from.as_slice() {
                        let mut next = w.to_vec();
                        next[pos..pos + k].copy_from_slice(to);
                        out.push(next);
                    }
                }
            }
        }
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Builds the Garside structure of a homogeneous presentation.
///
/// Simples are ordered by length, then by their lexicographically least word,
/// so the identity comes first and the atoms follow in their given order.
pub fn build_from_presentation(p: &Presentation) -> Result<GarsideStructure, GarsideError> {
    for (index, (l, r)) in p.relations.iter().enumerate() {
        if l.len() != r.len() {
            return Err(GarsideError::NotHomogeneous { index, left: l.len(), right: r.len() });
        }
    }
    if p.atoms.len() >= u16::MAX as usize {
        return Err(GarsideError::Invalid("too many atoms".into()));
    }
    let delta_class = p.closure(&p.delta, MAX_CLASS)?;
    let dlen = p.delta.len();

    // prefixes[len] -> word -> local id
    let mut word_to_simple: HashMap<Vec<u16>, u32> = HashMap::new();
    let mut class_words: Vec<Vec<u16>> = Vec::new();
    let mut lengths = Vec::new();
    for len in 0..=dlen {
        let mut prefixes: Vec<Vec<u16>> = delta_class.iter().map(|w| w[..len].to_vec()).collect();
        prefixes.sort();
        prefixes.dedup();
        let index: HashMap<&[u16], usize> = prefixes.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut uf = UnionFind((0..prefixes.len()).collect());
        for (i, w) in prefixes.iter().enumerate() {
            for next in p.neighbours(w) {
                let j = *index.get(next.as_slice()).ok_or_else(|| {
                    GarsideError::Invalid("prefix set of delta is not closed under the relations".into())
                })?;
                uf.union(i, j);
            }
        }
        // roots are least indices, hence lexicographically least words
        let mut root_to_simple = HashMap::new();
        for i in 0..prefixes.len() {
            let root = uf.find(i);
            let id = *root_to_simple.entry(root).or_insert_with(|| {
                class_words.push(prefixes[root].clone());
                lengths.push(len as u32);
                (class_words.len() - 1) as u32
            });
            word_to_simple.insert(prefixes[i].clone(), id);
        }
    }
    let n = class_words.len();
    let identity = word_to_simple[&Vec::new()];
    let delta = word_to_simple[&p.delta];

    let mut atom_simples = Vec::with_capacity(p.atoms.len());
    for (pos, name) in p.atoms.iter().enumerate() {
        let s = word_to_simple
            .get(&vec![pos as u16])
            .ok_or_else(|| GarsideError::AtomNotBelowDelta(name.clone()))?;
        atom_simples.push(*s);
    }

    let mut mul = vec![NONE; n * n];
    for u in 0..n {
        for v in 0..n {
            if lengths[u] + lengths[v] > dlen as u32 {
                continue;
            }
            let mut w = class_words[u].clone();
            w.extend_from_slice(&class_words[v]);
            if let Some(&s) = word_to_simple.get(&w) {
                mul[u * n + v] = s;
            }
        }
    }

    GarsideStructure::assemble(RawStructure {
        name: p.name.clone(),
        atom_names: p.atoms.clone(),
        atom_simples,
        lengths,
        identity,
        delta,
        mul,
        words: Some(class_words),
        perms: None,
    })
}
