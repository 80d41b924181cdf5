// Computes the differential of the order complex and checks d∘d = 0.

use std::error::Error;

use garside_homology::complex::Resolution;
use garside_homology::garside::{build_from_presentation, Presentation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [Presentation::g12(), Presentation::g22(), Presentation::type_a(3)?] {
        let g = build_from_presentation(&p)?;
        let mut res = Resolution::new(&g);
        res.compute_through(res.top_degree())?;
        println!("{}", g.name());
        for degree in 2..=res.top_degree() {
            for (j, chain) in res.differentials(degree)?.into_iter().enumerate() {
                let cell = &res.cells().cells(degree)[j];
                println!("  d{} = {}", cell.display(&g), chain.display(&g, res.cells(), degree - 1));
            }
            assert!(res.check_dd_zero(degree)?.is_empty());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
