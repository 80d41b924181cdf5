// Integral homology with trivial and sign coefficients, compared with the
// embedded reference rows.

use std::error::Error;

use garside_homology::complex::Resolution;
use garside_homology::garside::{build_from_presentation, Presentation};
use garside_homology::homology::integer_homology;
use garside_homology::reference::{compare_rows, reference};
use garside_homology::specialize::{specialize_resolution, Coefficients};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [Presentation::g12(), Presentation::g22(), Presentation::type_a(3)?] {
        let g = build_from_presentation(&p)?;
        let mut res = Resolution::new(&g);
        res.compute_through(res.top_degree())?;
        for coeffs in [Coefficients::Trivial, Coefficients::Sign] {
            let row = integer_homology(&specialize_resolution(&res, res.top_degree(), coeffs)?)?;
            let shown: Vec<String> = row.iter().map(ToString::to_string).collect();
            println!("{} {coeffs}: ({})", p.name, shown.join(", "));
            if let Some(expected) = reference().integer_row(&p.name, coeffs) {
                let e: Vec<_> = expected.into_iter().map(Some).collect();
                let c: Vec<_> = row.into_iter().map(Some).collect();
                for check in compare_rows(&p.name, &e, &c) {
                    println!("  {check}");
                }
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
