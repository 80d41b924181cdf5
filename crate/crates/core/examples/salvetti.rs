// The Salvetti complex of the dihedral Artin groups, and the twelfth
// exceptional group read off it with weights a ↦ t², b ↦ t.

use std::error::Error;

use garside_homology::algebra::Rational;
use garside_homology::homology::{integer_homology, laurent_homology, Limits};
use garside_homology::salvetti::{g13_weighted, DihedralComplex};
use garside_homology::specialize::Coefficients;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for m in 3..=6 {
        let c = DihedralComplex::new(m)?;
        println!("I2({m}): d[a,b] = {}", c.boundary_text());
        assert!(c.check_dd_zero()?);
    }

    let w = g13_weighted();
    let l = w.specialize_laurent::<Rational>(());
    println!("G13 d1 = [{}, {}]", l.matrices[1].get(0, 0), l.matrices[1].get(0, 1));
    println!("G13 d2 = [{}, {}]", l.matrices[2].get(0, 0), l.matrices[2].get(1, 0));
    for coeffs in [Coefficients::Trivial, Coefficients::Sign] {
        let row: Vec<String> = integer_homology(&w.specialize_integer(coeffs))?.iter().map(ToString::to_string).collect();
        println!("G13 {coeffs}: {}", row.join(", "));
    }
    let h = laurent_homology::<Rational>(&w, (), 2, Limits::default())?;
    let row: Vec<String> = h.homology.iter().map(|m| m.as_ref().map_or("?".into(), |m| m.cyclotomic_form())).collect();
    println!("G13 Milnor fiber: {}", row.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
