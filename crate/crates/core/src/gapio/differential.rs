//! Differentials as lists of terms `[a, [β, γ]]`: `a` the coefficient, `β`
//! the 1-based simple indices whose product is the monoid element, `γ` the
//! 1-based atom positions of the face.

use num_bigint::BigInt;

use super::{shape, GapError, Value};
use crate::complex::{Cell, CellComplex, Chain, Provenance, Resolution, Term};
use crate::garside::GarsideStructure;

/// Encodes a chain of `face_degree`-cells, using the normal-form factors
/// as `β`.
pub fn encode_chain(cells: &CellComplex, face_degree: usize, chain: &Chain) -> Value {
    Value::list(chain.terms().iter().map(|t| {
        let beta = Value::int_list(t.element.factors().iter().map(|&s| u64::from(s) + 1));
        let gamma = Value::int_list(cells.cells(face_degree)[t.cell as usize].atoms().iter().map(|&a| u64::from(a) + 1));
        Value::list([Value::Int(t.coeff.clone()), Value::list([beta, gamma])])
    }))
}

/// Decodes one entry; `name` labels errors.
pub fn decode_chain(
    g: &GarsideStructure,
    cells: &CellComplex,
    face_degree: usize,
    value: &Value,
    name: &str,
) -> Result<Chain, GapError> {
    let mut terms = Vec::new();
    for (i, term) in value.as_list(name)?.iter().enumerate() {
        let here = format!("{name} term {}", i + 1);
        let (coeff, q) = match term.as_list(&here)? {
            [a, q] => (a.as_int(&here)?.clone(), q),
            _ => return Err(shape(&here, "expected [coefficient, [simples, cell]]")),
        };
        let (beta, gamma) = match q.as_list(&here)? {
            [b, c] => (b.as_u64_list(&here)?, c.as_u64_list(&here)?),
            _ => return Err(shape(&here, "expected [simples, cell]")),
        };
        let mut simples = Vec::with_capacity(beta.len());
        for b in beta {
            if b == 0 || b as usize > g.num_simples() {
                return Err(shape(&here, format!("simple index {b} out of range 1..={}", g.num_simples())));
            }
            simples.push((b - 1) as u32);
        }
        if gamma.len() != face_degree {
            return Err(shape(&here, format!("cell {gamma:?} does not have degree {face_degree}")));
        }
        let mut atoms = Vec::with_capacity(gamma.len());
        for c in &gamma {
            if *c == 0 || *c as usize > g.num_atoms() {
                return Err(shape(&here, format!("atom index {c} out of range 1..={}", g.num_atoms())));
            }
            atoms.push((c - 1) as u16);
        }
        let cell = cells.index_of(&Cell(atoms)).ok_or_else(|| shape(&here, format!("{gamma:?} is not a cell")))?;
        terms.push(Term { cell, element: g.normal_form_of_simples(&simples), coeff });
    }
    Ok(Chain::from_terms(terms.into_iter().filter(|t: &Term| t.coeff != BigInt::from(0))))
}

/// Installs a whole imported degree, e.g. the value of `Dcells3P`.
pub fn decode_store_degree(res: &mut Resolution<'_>, degree: usize, value: &Value, name: &str) -> Result<(), GapError> {
    let entries = value.as_list(name)?;
    let expected = res.cells().count(degree);
    if entries.len() != expected {
        return Err(shape(name, format!("{} entries for {expected} cells of degree {degree}", entries.len())));
    }
    let g = res.structure();
    let chains = entries
        .iter()
        .enumerate()
        .map(|(j, v)| decode_chain(g, res.cells(), degree - 1, v, &format!("{name}[{}]", j + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    for (j, chain) in chains.into_iter().enumerate() {
        res.insert(degree, j as u32, chain)?;
    }
    res.set_provenance(degree, Provenance::Imported(name.to_string()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::{build_from_presentation, Presentation};

    #[test]
    fn encode_decode_round_trip() {
        let g = build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap();
        let mut r = Resolution::new(&g);
        r.compute_through(3).unwrap();
        for degree in 1..=3 {
            for (j, chain) in r.differentials(degree).unwrap().into_iter().enumerate() {
                let v = encode_chain(r.cells(), degree - 1, chain);
                let back = decode_chain(&g, r.cells(), degree - 1, &v, &format!("d{degree}[{j}]")).unwrap();
                assert_eq!(&back, chain);
            }
        }
        assert_eq!(decode_chain(&g, r.cells(), 1, &Value::List(vec![]), "e").unwrap(), Chain::zero());
    }

    #[test]
    fn decodes_minus_delta_times_a_cell() {
        let g = build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap();
        let r = Resolution::new(&g);
        let delta = u64::from(g.delta()) + 1;
        let v = Value::list([Value::list([
            Value::int(-1),
            Value::list([Value::int_list([delta]), Value::int_list([1u64, 2])]),
        ])]);
        let chain = decode_chain(&g, r.cells(), 2, &v, "t").unwrap();
        assert_eq!(chain.len(), 1);
        let t = &chain.terms()[0];
        assert_eq!(t.coeff, BigInt::from(-1));
        assert_eq!(t.element, g.normal_form_of_simples(&[g.delta()]));
        assert_eq!(r.cells().cells(2)[t.cell as usize].atoms(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_indices() {
        let g = build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap();
        let r = Resolution::new(&g);
        let term = |b: u64, c: Vec<u64>| {
            Value::list([Value::list([Value::int(1), Value::list([Value::int_list([b]), Value::int_list(c)])])])
        };
        assert!(decode_chain(&g, r.cells(), 1, &term(0, vec![1]), "t").is_err());
        assert!(decode_chain(&g, r.cells(), 1, &term(999, vec![1]), "t").is_err());
        assert!(decode_chain(&g, r.cells(), 1, &term(1, vec![4]), "t").is_err());
        assert!(decode_chain(&g, r.cells(), 2, &term(1, vec![2, 1]), "t").is_err());
        assert!(decode_chain(&g, r.cells(), 2, &term(1, vec![1]), "t").is_err());
    }
}
