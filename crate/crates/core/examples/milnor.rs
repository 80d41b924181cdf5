// Homology over Q[t, 1/t] and F_p[t, 1/t] (the Milnor fiber), cyclotomic
// factorizations, Poincaré polynomials and the torsion scan.

use std::error::Error;

use garside_homology::algebra::{cyclotomic_report, parse_poly, Fp, Rational};
use garside_homology::complex::Resolution;
use garside_homology::garside::{build_from_presentation, Presentation};
use garside_homology::homology::{format_poincare, laurent_homology, poincare_polynomial, torsion_scan, Limits};
use garside_homology::specialize::WeightedComplex;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [Presentation::g12(), Presentation::g22()] {
        let g = build_from_presentation(&p)?;
        let mut res = Resolution::new(&g);
        res.compute_through(2)?;
        let w = WeightedComplex::from_resolution(&res, 2)?;
        let q = laurent_homology::<Rational>(&w, (), 2, Limits::default())?;
        let row: Vec<String> = q.table.iter().map(|m| m.as_ref().map_or("?".into(), |m| m.cyclotomic_form())).collect();
        let poincare = poincare_polynomial(&q.table).map(|c| format_poincare(&c)).unwrap_or_default();
        println!("{}: ({}), Poincaré polynomial {poincare}", p.name, row.join(", "));
        let mut modular = Vec::new();
        for prime in [2, 3, 5, 7] {
            let h = laurent_homology::<Fp>(&w, prime, 2, Limits::default())?;
            let row: Vec<String> = h.table.iter().map(|m| m.as_ref().map_or("?".into(), |m| m.cyclotomic_form())).collect();
            println!("  mod {prime}: ({})", row.join(", "));
            modular.push((prime, h.table));
        }
        println!("  torsion flags: {:?}", torsion_scan(&q.table, &modular));
    }

    let f = parse_poly::<Rational>("(t^20-1)/(t+1)", ())?;
    println!("(t^20-1)/(t+1) = {:?}", cyclotomic_report(&f, 40).factors);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
